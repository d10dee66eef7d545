use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("family mismatch: {0} vs {1}")]
    FamilyMismatch(String, String),
    #[error("invalid group family: {0}")]
    InvalidFamily(String),
    #[error("invalid element for family {family}: {detail}")]
    InvalidElement { family: String, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("generator `{0}` resolves to the identity (only the label `e` may)")]
    IdentityGenerator(String),
    #[error("generators `{0}` and `{1}` are the same group element")]
    DuplicateGenerator(String, String),
    #[error("unknown generator label `{0}`")]
    UnknownGenerator(String),
    #[error("relator `{0}` does not compose to the identity")]
    BadRelator(String),
    #[error("generating set does not generate {0}")]
    NotGenerating(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("walk is not unitary (max residual {0:.3e})")]
    NotUnitary(f64),
    #[error("coarse-grained generator a^{0} lies outside {{e, a, a^-1}}")]
    CoordinationTooLarge(i64),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("walk is not in the parity-invariant class: {0}")]
    NotInClass(String),
    #[error("wavefront would wrap around the ring: need ring > {needed}, have {ring}")]
    WavefrontWrap { needed: usize, ring: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

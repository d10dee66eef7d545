//! Scalar walks on the infinite dihedral group and their coarse-grained images.
//!
//! The admissible graph has generators `a`, `a^-1`, `b = a r`, `c = a^-1 r`,
//! `d = r` and `e`. Its unitary scalar walks form four parametric families,
//! all described by
//!
//! ```text
//! z_a     = nu sqrt(p) sqrt(q)             z_a_inv = s2 nu sqrt(1-p) sqrt(1-q)
//! z_b     = i s1 s2 nu sqrt(p) sqrt(1-q)   z_c     = -i s1 nu sqrt(1-p) sqrt(q)
//! z_e     = -s1 s3 mu alpha                z_d     = i s3 mu beta
//! ```
//!
//! with `nu^2 + mu^2 = 1`, `alpha = sqrt(p) sqrt(1-q) - s2 sqrt(1-p) sqrt(q)`
//! and `beta = sqrt(1 - alpha^2)`, times a global phase. Coarse-grained, these
//! are the walks `e^{i t sigma_x} D(k) e^{i t' sigma_x}` up to a constant change
//! of basis, where `D(k)` is the Dirac walk; equivalently, the parity-invariant
//! two-component walks on `Z`.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{CayleyGraph, GroupElement, GroupFamily, Word};
use crate::linalg::{self, c, CMatrix};
use crate::momentum::{self, to_momentum, MomentumWalk};
use crate::walk::{check_quadrangularity, QuantumWalk};

/// Which scalars of the family vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolutionCase {
    /// `mu = 0`: no hopping along `d` or `e`.
    Massless,
    /// `z_e = 0`: requires `s2 = +1` and `q = p`.
    NoStay,
    /// `z_d = 0`: requires `s2 = -1` and `q = 1 - p`.
    NoReflection,
    /// All six scalars nonzero.
    Generic,
}

impl SolutionCase {
    pub const ALL: [SolutionCase; 4] = [
        SolutionCase::Massless,
        SolutionCase::NoStay,
        SolutionCase::NoReflection,
        SolutionCase::Generic,
    ];
}

impl fmt::Display for SolutionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionCase::Massless => "massless",
            SolutionCase::NoStay => "no-stay",
            SolutionCase::NoReflection => "no-reflection",
            SolutionCase::Generic => "generic",
        })
    }
}

impl FromStr for SolutionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "massless" | "mu0" => Ok(SolutionCase::Massless),
            "no-stay" | "ze0" => Ok(SolutionCase::NoStay),
            "no-reflection" | "zd0" => Ok(SolutionCase::NoReflection),
            "generic" => Ok(SolutionCase::Generic),
            other => Err(Error::Parse(format!(
                "unknown case `{other}` (expected massless, no-stay, no-reflection or generic)"
            ))),
        }
    }
}

/// Tolerance for the equalities a case imposes on `p` and `q`.
const CASE_TOL: f64 = 1e-9;

/// Parameters of a scalar walk on the admissible dihedral graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DihedralParams {
    case: SolutionCase,
    p: f64,
    q: f64,
    mu: f64,
    s1: i32,
    s2: i32,
    s3: i32,
    phase: f64,
}

fn check_sign(name: &str, s: i32) -> Result<()> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(Error::Constraint(format!("{name} must be +1 or -1, got {s}")))
    }
}

fn check_open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Constraint(format!("{name} = {x} must lie in (0, 1)")))
    }
}

impl DihedralParams {
    /// Validates the case constraints. `phase` is a global phase applied to
    /// every scalar.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        case: SolutionCase,
        p: f64,
        q: f64,
        mu: f64,
        s1: i32,
        s2: i32,
        s3: i32,
        phase: f64,
    ) -> Result<Self> {
        check_open_unit("p", p)?;
        check_open_unit("q", q)?;
        check_sign("s1", s1)?;
        check_sign("s2", s2)?;
        check_sign("s3", s3)?;
        if !phase.is_finite() {
            return Err(Error::Constraint("phase must be finite".into()));
        }
        match case {
            SolutionCase::Massless => {
                if mu != 0.0 {
                    return Err(Error::Constraint(format!("massless case needs mu = 0, got {mu}")));
                }
            }
            _ => check_open_unit("mu", mu)?,
        }
        match case {
            SolutionCase::Massless => {}
            SolutionCase::NoStay => {
                if s2 != 1 {
                    return Err(Error::Constraint("z_e = 0 forces s2 = +1".into()));
                }
                if (q - p).abs() > CASE_TOL {
                    return Err(Error::Constraint(format!("z_e = 0 forces q = p, got p = {p}, q = {q}")));
                }
            }
            SolutionCase::NoReflection => {
                if s2 != -1 {
                    return Err(Error::Constraint("z_d = 0 forces s2 = -1".into()));
                }
                if (q - (1.0 - p)).abs() > CASE_TOL {
                    return Err(Error::Constraint(format!(
                        "z_d = 0 forces q = 1 - p, got p = {p}, q = {q}"
                    )));
                }
            }
            SolutionCase::Generic => {
                if s2 == 1 && p <= q {
                    return Err(Error::Constraint(format!("s2 = +1 needs p > q, got p = {p}, q = {q}")));
                }
                if s2 == -1 && 1.0 - q <= p {
                    return Err(Error::Constraint(format!(
                        "s2 = -1 needs 1 - q > p, got p = {p}, q = {q}"
                    )));
                }
            }
        }
        Ok(DihedralParams {
            case,
            p,
            q,
            mu,
            s1,
            s2,
            s3,
            phase,
        })
    }

    pub fn massless(p: f64, q: f64, s1: i32, s2: i32) -> Result<Self> {
        Self::new(SolutionCase::Massless, p, q, 0.0, s1, s2, 1, 0.0)
    }

    pub fn no_stay(p: f64, mu: f64, s1: i32, s3: i32) -> Result<Self> {
        Self::new(SolutionCase::NoStay, p, p, mu, s1, 1, s3, 0.0)
    }

    pub fn no_reflection(p: f64, mu: f64, s1: i32, s3: i32) -> Result<Self> {
        Self::new(SolutionCase::NoReflection, p, 1.0 - p, mu, s1, -1, s3, 0.0)
    }

    pub fn generic(p: f64, q: f64, mu: f64, s1: i32, s2: i32, s3: i32) -> Result<Self> {
        Self::new(SolutionCase::Generic, p, q, mu, s1, s2, s3, 0.0)
    }

    /// Same parameters with a different global phase.
    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn case(&self) -> SolutionCase {
        self.case
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn nu(&self) -> f64 {
        (1.0 - self.mu * self.mu).sqrt()
    }
    pub fn signs(&self) -> (i32, i32, i32) {
        (self.s1, self.s2, self.s3)
    }
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// `sqrt(p) sqrt(1-q) - s2 sqrt(1-p) sqrt(q)`.
    pub fn alpha(&self) -> f64 {
        self.p.sqrt() * (1.0 - self.q).sqrt() - self.s2 as f64 * (1.0 - self.p).sqrt() * self.q.sqrt()
    }

    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha().powi(2)).max(0.0).sqrt()
    }

    /// Scalars in the order `a, a_inv, b, c, d, e`.
    pub fn scalars(&self) -> [Complex64; 6] {
        let (p, q, nu, mu) = (self.p, self.q, self.nu(), self.mu);
        let (s1, s2, s3) = (self.s1 as f64, self.s2 as f64, self.s3 as f64);
        let g = linalg::cis(self.phase);
        let (z_e, z_d) = match self.case {
            SolutionCase::Massless => (linalg::ZERO, linalg::ZERO),
            SolutionCase::NoStay => (linalg::ZERO, c(0.0, s3 * mu)),
            SolutionCase::NoReflection => (c(-s1 * s3 * mu, 0.0), linalg::ZERO),
            SolutionCase::Generic => (c(-s1 * s3 * mu * self.alpha(), 0.0), c(0.0, s3 * mu * self.beta())),
        };
        [
            c(nu * p.sqrt() * q.sqrt(), 0.0) * g,
            c(s2 * nu * (1.0 - p).sqrt() * (1.0 - q).sqrt(), 0.0) * g,
            c(0.0, s2 * s1 * nu * p.sqrt() * (1.0 - q).sqrt()) * g,
            c(0.0, -s1 * nu * (1.0 - p).sqrt() * q.sqrt()) * g,
            z_d * g,
            z_e * g,
        ]
    }

    /// Angles `(t, t')` of the coarse-grained form: `cos t = sqrt(p)`,
    /// `sin t = -s1 sqrt(1-p)`, `cos t' = sqrt(q)`, `sin t' = s1 s2 sqrt(1-q)`.
    pub fn rotation_angles(&self) -> (f64, f64) {
        let s1 = self.s1 as f64;
        let s2 = self.s2 as f64;
        let t = (-s1 * (1.0 - self.p).sqrt()).atan2(self.p.sqrt());
        let tp = (s1 * s2 * (1.0 - self.q).sqrt()).atan2(self.q.sqrt());
        (t, tp)
    }

    /// Sign `s = s2 s3` of the mass term.
    pub fn dirac_sign(&self) -> i32 {
        self.s2 * self.s3
    }

    /// Picks the case from which scalars vanish and validates.
    #[allow(clippy::too_many_arguments)]
    pub fn detect(p: f64, q: f64, mu: f64, s1: i32, s2: i32, s3: i32, phase: f64, tol: f64) -> Result<Self> {
        let probe = DihedralParams {
            case: SolutionCase::Generic,
            p,
            q,
            mu,
            s1,
            s2,
            s3,
            phase,
        };
        let case = if mu <= tol {
            SolutionCase::Massless
        } else if (mu * probe.alpha()).abs() <= tol {
            SolutionCase::NoStay
        } else if (mu * probe.beta()).abs() <= tol {
            SolutionCase::NoReflection
        } else {
            SolutionCase::Generic
        };
        let (q, mu) = match case {
            SolutionCase::Massless => (q, 0.0),
            SolutionCase::NoStay if (q - p).abs() <= tol => (p, mu),
            SolutionCase::NoReflection if (q - (1.0 - p)).abs() <= tol => (1.0 - p, mu),
            _ => (q, mu),
        };
        Self::new(case, p, q, mu, s1, s2, s3, phase)
    }

    /// Recovers parameters from scalars ordered `a, a_inv, b, c, d, e`.
    ///
    /// Solutions related by the graph automorphism `a <-> a^-1, b <-> c` are
    /// also recognised; the flag reports whether that relabelling was needed.
    pub fn recover(scalars: &[Complex64], tol: f64) -> Option<(DihedralParams, bool)> {
        if scalars.len() != 6 {
            return None;
        }
        if let Some(p) = Self::recover_direct(scalars, tol) {
            return Some((p, false));
        }
        let swapped = [scalars[1], scalars[0], scalars[3], scalars[2], scalars[4], scalars[5]];
        Self::recover_direct(&swapped, tol).map(|p| (p, true))
    }

    fn recover_direct(z: &[Complex64], tol: f64) -> Option<DihedralParams> {
        let za = z[0];
        if za.norm() <= tol {
            return None;
        }
        let phase = za.arg();
        let g = linalg::cis(-phase);
        let w: Vec<Complex64> = z.iter().map(|v| v * g).collect();
        let nu2: f64 = w[..4].iter().map(|v| v.norm_sqr()).sum();
        let mu2: f64 = w[4..].iter().map(|v| v.norm_sqr()).sum();
        if nu2 <= tol {
            return None;
        }
        let p = (w[0].norm_sqr() + w[2].norm_sqr()) / nu2;
        let q = (w[0].norm_sqr() + w[3].norm_sqr()) / nu2;
        let sign = |x: f64| if x >= 0.0 { 1 } else { -1 };
        let s2 = sign(w[1].re);
        let s1 = -sign(w[3].im);
        let mu = mu2.sqrt();
        let s3 = if w[4].norm() > tol {
            sign(w[4].im)
        } else if w[5].norm() > tol {
            -s1 * sign(w[5].re)
        } else {
            1
        };
        let params = Self::detect(p, q, mu, s1, s2, s3, phase, tol.sqrt()).ok()?;
        let rebuilt = params.scalars();
        let err = rebuilt
            .iter()
            .zip(z)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        (err <= tol).then_some(params)
    }
}

/// Generator words of the admissible graph, in canonical order.
const FULL_WORDS: [(&str, &str); 6] = [
    ("a", "a"),
    ("a_inv", "a^-1"),
    ("b", "a r"),
    ("c", "a^-1 r"),
    ("d", "r"),
    ("e", "e"),
];

const FULL_RELATORS: [&str; 8] = [
    "a a_inv",
    "b^2",
    "c^2",
    "b d a^-1",
    "c d a",
    "b a b^-1 a",
    "c a c^-1 a",
    "b c a^-2",
];

fn admissible_graph(family: GroupFamily, with_d: bool, with_e: bool) -> Result<CayleyGraph> {
    let gens: Vec<(&str, &str)> = FULL_WORDS
        .iter()
        .copied()
        .filter(|(l, _)| (with_d || *l != "d") && (with_e || *l != "e"))
        .collect();
    let graph = CayleyGraph::from_words(family, &gens)?;
    let relators = FULL_RELATORS
        .iter()
        .filter(|w| with_d || !w.contains('d'))
        .map(|w| w.parse::<Word>())
        .collect::<Result<Vec<_>>>()?;
    graph.with_relators(relators)
}

/// The admissible graph with all six generators `a, a_inv, b, c, d, e`.
pub fn full_dihedral_graph() -> CayleyGraph {
    admissible_graph(GroupFamily::InfiniteDihedral, true, true).expect("the admissible graph is valid")
}

/// The admissible graph with `d` and `e` optional.
pub fn dihedral_graph_variant(with_d: bool, with_e: bool) -> CayleyGraph {
    admissible_graph(GroupFamily::InfiniteDihedral, with_d, with_e).expect("the admissible graph is valid")
}

/// Scalar walk on the admissible graph.
pub fn make_dihedral_walk(params: &DihedralParams) -> QuantumWalk {
    QuantumWalk::scalar(full_dihedral_graph(), &params.scalars()).expect("six scalars for six generators")
}

/// The same scalars on the finite dihedral group of order `2n`, `n >= 4`.
pub fn instantiate_finite_dihedral(params: &DihedralParams, n: u64) -> Result<QuantumWalk> {
    if n < 4 {
        return Err(Error::InvalidFamily(format!(
            "finite dihedral instantiation needs n >= 4, got {n}"
        )));
    }
    let graph = admissible_graph(GroupFamily::finite_dihedral(n)?, true, true)?;
    QuantumWalk::scalar(graph, &params.scalars())
}

/// Outcome of the admissibility check for a dihedral graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    /// Offset `m' - m` of a tiling under which every induced shift lies in
    /// `{e, a, a^-1}`, if one exists.
    pub tiling_offset: Option<i64>,
    pub quadrangular: bool,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.tiling_offset.is_some() && self.quadrangular
    }
}

/// Tiling offset keeping coarse-grained shifts within one step, preferring
/// the offset closest to zero.
fn admissible_offset(elements: &[GroupElement]) -> Option<i64> {
    let mut refl = Vec::new();
    for g in elements {
        let (n, r) = g.dihedral_parts()?;
        if r {
            refl.push(n);
        } else if n.abs() > 1 {
            return None;
        }
    }
    let lo = refl.iter().max().map_or(0, |m| m - 1);
    let hi = refl.iter().min().map_or(0, |m| m + 1);
    if lo > hi {
        return None;
    }
    Some(if lo > 0 {
        lo
    } else if hi < 0 {
        hi
    } else {
        0
    })
}

fn quadrangular(elements: &[GroupElement]) -> bool {
    let mut counts = std::collections::HashMap::new();
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            if i != j {
                *counts.entry(x.mul(&y.inverse())).or_insert(0usize) += 1;
            }
        }
    }
    counts.values().all(|&n| n >= 2)
}

/// Checks coordination and quadrangularity for a graph on the infinite dihedral group.
pub fn check_admissible(graph: &CayleyGraph) -> Result<Admissibility> {
    if *graph.family() != GroupFamily::InfiniteDihedral {
        return Err(Error::InvalidFamily(format!(
            "admissibility is defined on the infinite dihedral group, got {}",
            graph.family()
        )));
    }
    let elements: Vec<GroupElement> = graph.generators().iter().map(|g| g.element.clone()).collect();
    Ok(Admissibility {
        tiling_offset: admissible_offset(&elements),
        quadrangular: check_quadrangularity(graph).passed(),
    })
}

fn reflection_label(n: i64) -> String {
    match n {
        1 => "b".into(),
        -1 => "c".into(),
        0 => "d".into(),
        n if n > 1 => format!("b{n}"),
        n => format!("c{}", -n),
    }
}

fn label_order(g: &GroupElement) -> (u8, u64, bool) {
    let (n, r) = g.dihedral_parts().expect("dihedral element");
    match (r, n) {
        (false, 0) => (3, 0, false),
        (false, n) => (0, 0, n < 0),
        (true, 0) => (2, 0, false),
        (true, n) => (1, n.unsigned_abs(), n < 0),
    }
}

/// Enumerates generating sets drawn from `e, a, a^-1, a^n r (|n| <= max_n)`
/// that admit a one-step coarse-graining and satisfy quadrangularity, modulo
/// the relabelling `r -> a^j r`. Reflection offsets are shifted so that their
/// smallest and largest values sum to 0 or 1.
///
/// Pairs whose quotient is a reflection are matched by their own reversal,
/// so sets such as `{a, r}` survive alongside the full graph and its
/// `d`/`e`-free variants.
pub fn enumerate_admissible_graphs(max_n: u32) -> Vec<CayleyGraph> {
    let fam = GroupFamily::InfiniteDihedral;
    let max_n = max_n as i64;
    let mut candidates = vec![
        fam.identity(),
        fam.dihedral(1, false).unwrap(),
        fam.dihedral(-1, false).unwrap(),
    ];
    candidates.extend((-max_n..=max_n).map(|n| fam.dihedral(n, true).unwrap()));
    let mut seen: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << candidates.len()) {
        let set: Vec<GroupElement> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, g)| g.clone())
            .collect();
        if !fam.generated_by(&set) || admissible_offset(&set).is_none() || !quadrangular(&set) {
            continue;
        }
        let refl: Vec<i64> = set
            .iter()
            .filter_map(|g| g.dihedral_parts().filter(|p| p.1).map(|p| p.0))
            .collect();
        let (lo, hi) = (refl.iter().min().unwrap(), refl.iter().max().unwrap());
        let shift = -(lo + hi).div_euclid(2);
        let mut canon: Vec<GroupElement> = set
            .iter()
            .map(|g| {
                let (n, r) = g.dihedral_parts().unwrap();
                if r {
                    fam.dihedral(n + shift, true).unwrap()
                } else {
                    g.clone()
                }
            })
            .collect();
        canon.sort_by_key(label_order);
        if !seen.insert(canon.clone()) {
            continue;
        }
        let gens = canon
            .iter()
            .map(|g| {
                let (n, r) = g.dihedral_parts().unwrap();
                let label = match (r, n) {
                    (true, n) => reflection_label(n),
                    (false, 0) => "e".into(),
                    (false, 1) => "a".into(),
                    _ => "a_inv".into(),
                };
                (label, g.clone())
            })
            .collect();
        out.push(CayleyGraph::new(fam.clone(), gens).expect("enumerated sets generate"));
    }
    out
}

/// The coarse-grained form `phase * U e^{i t sigma_x} D(k) e^{i t' sigma_x} U^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    pub theta: f64,
    pub theta_prime: f64,
    pub nu: f64,
    pub mu: f64,
    pub sign: i32,
    /// Change of basis `U`, normalised so that `U[0,0]` is real and nonnegative.
    pub basis: CMatrix,
    /// Global phase factor.
    pub phase: Complex64,
    /// Largest coefficient mismatch of the reconstruction.
    pub residual: f64,
}

fn dirac_coefficients(nu: f64, mu: f64, sign: i32) -> [CMatrix; 3] {
    let z = linalg::ZERO;
    let n = c(nu, 0.0);
    let m = c(0.0, sign as f64 * mu);
    [
        linalg::mat2(n, z, z, z),
        linalg::mat2(z, z, z, n),
        linalg::mat2(z, m, m, z),
    ]
}

impl CanonicalForm {
    /// Coefficients at shifts `+1`, `-1`, `0` without the global phase.
    fn model(&self) -> [CMatrix; 3] {
        let left = &self.basis * linalg::exp_i_sigma_x(self.theta);
        let right = linalg::exp_i_sigma_x(self.theta_prime) * self.basis.adjoint();
        dirac_coefficients(self.nu, self.mu, self.sign).map(|d| &left * d * &right)
    }

    /// The walk on `Z` described by this form.
    pub fn walk(&self) -> QuantumWalk {
        let [p, m, z] = self.model().map(|x| x * self.phase);
        momentum::line_walk(p, m, z).expect("2x2 coefficients")
    }

    /// `phi = t + t'`, wrapped into `(-pi, pi]`.
    pub fn total_angle(&self) -> f64 {
        linalg::wrap_phase(self.theta + self.theta_prime)
    }

    /// Reads off family parameters when `U` is the identity up to phase and
    /// both angles lie in the open ranges `(-pi/2, 0) u (0, pi/2)`.
    pub fn family_params(&self, tol: f64) -> Option<DihedralParams> {
        let u = &self.basis;
        let off = u[(0, 1)].norm().max(u[(1, 0)].norm());
        if off > tol || (u[(0, 0)] - u[(1, 1)]).norm() > tol {
            return None;
        }
        let (t, tp) = (self.theta, self.theta_prime);
        if t.abs() <= tol || tp.abs() <= tol || t.abs() >= FRAC_PI_2 || tp.abs() >= FRAC_PI_2 {
            return None;
        }
        let sign = |x: f64| if x >= 0.0 { 1 } else { -1 };
        let s1 = -sign(t.sin());
        let s2 = s1 * sign(tp.sin());
        let s3 = self.sign * s2;
        let phase = (self.phase * u[(0, 0)] * u[(1, 1)].conj()).arg();
        DihedralParams::detect(t.cos().powi(2), tp.cos().powi(2), self.mu, s1, s2, s3, phase, tol).ok()
    }
}

/// Coefficients at `+1, -1, 0` of a two-component walk on `Z`.
fn line_coefficients(walk: &QuantumWalk) -> Result<[CMatrix; 3]> {
    if walk.coin_dim() != 2 {
        return Err(Error::NotInClass(format!(
            "coin dimension is {}, expected 2",
            walk.coin_dim()
        )));
    }
    let mw = to_momentum(walk)?;
    if mw.dim() != 1 {
        return Err(Error::NotInClass(format!("walk lives on Z^{}", mw.dim())));
    }
    for (h, m) in mw.terms() {
        if h[0].abs() > 1 && !linalg::is_zero(m, 0.0) {
            return Err(Error::NotInClass(format!("hopping by {} sites", h[0])));
        }
    }
    let get = |s: i64| mw.coefficient(&[s]).cloned().unwrap_or_else(|| linalg::zeros(2));
    Ok([get(1), get(-1), get(0)])
}

/// Splits a rank-one `2 x 2` matrix as `norm * w v^dagger` with unit `w`, `v`.
fn rank_one(m: &CMatrix) -> (f64, DVector<Complex64>, DVector<Complex64>) {
    let norm = m.norm();
    let col = if m.column(0).norm() >= m.column(1).norm() { 0 } else { 1 };
    let w: DVector<Complex64> = m.column(col).into_owned();
    let wn = w.norm();
    if wn == 0.0 {
        let e0 = DVector::from_vec(vec![linalg::ONE, linalg::ZERO]);
        return (0.0, e0.clone(), e0);
    }
    let w = w / c(wn, 0.0);
    // v^dagger = w^dagger m / norm
    let v_dag = w.adjoint() * m / c(norm, 0.0);
    (norm, w, v_dag.adjoint())
}

fn columns(a: &DVector<Complex64>, b: &DVector<Complex64>) -> CMatrix {
    CMatrix::from_columns(&[a.clone(), b.clone()])
}

/// Fits the coarse-grained form to a two-component walk on `Z`, failing
/// with `NotInClass` when the best reconstruction misses by more than `tol`.
///
/// Only `t + t'` is fixed by the walk; the split is chosen to bring `U`
/// closest to the identity (largest `|tr U|`).
pub fn extract_canonical_form(walk: &QuantumWalk, tol: f64) -> Result<CanonicalForm> {
    let coeffs = line_coefficients(walk)?;
    let [cp, cm, c0] = &coeffs;
    let (nu_p, w0, v0) = rank_one(cp);
    let (nu_m, w1, v1) = rank_one(cm);
    let nu = 0.5 * (nu_p + nu_m);
    if nu <= tol {
        return Err(Error::NotInClass("no hopping between sites (nu = 0 is excluded)".into()));
    }
    // sqrt(1 - nu^2) would turn rounding in nu into a spurious mass
    let mu = c0.norm() / std::f64::consts::SQRT_2;
    let w = columns(&w0, &w1);
    let v = columns(&v0, &v1);
    let m = v.adjoint() * &w;
    // fix the global phase so that m[0,0] is real and nonnegative
    let lam_conj = if m[(0, 0)].norm() > 1e-12 {
        m[(0, 0)].conj() / m[(0, 0)].norm()
    } else {
        let prod = m[(0, 1)] * m[(1, 0)];
        if prod.norm() <= 1e-12 {
            return Err(Error::NotInClass("hopping matrices are not compatible".into()));
        }
        let x = (-linalg::ONE / prod).sqrt();
        x / x.norm()
    };
    let m = m * lam_conj;

    // a rounding-sized mu carries no usable phase, so candidates from both
    // sources are kept and the residual decides
    let mut branches: Vec<(f64, i32)> = Vec::new();
    if mu > 1e-9 {
        let n = w.adjoint() * c0 * &v;
        let eta = (n[(0, 1)] / (linalg::I * c(mu, 0.0))).arg();
        branches.push((eta, 1));
        branches.push((eta + PI, -1));
    }
    if m[(0, 1)].norm() > 1e-12 {
        let eta = (m[(0, 1)] / linalg::I).arg();
        for sign in [1, -1] {
            branches.push((eta, sign));
            branches.push((eta + PI, sign));
        }
    }
    if branches.is_empty() {
        branches.push((0.0, 1));
    }

    let target = [cp.clone(), cm.clone(), c0.clone()];
    let mut best: Option<(f64, CanonicalForm)> = None;
    for (eta, sign) in branches {
        let d = linalg::mat2(linalg::ONE, linalg::ZERO, linalg::ZERO, linalg::cis(-eta));
        let rotated = d.adjoint() * &m * &d;
        let cos_phi = rotated[(0, 0)].re;
        let sin_phi = rotated[(0, 1)].im;
        let phi = sin_phi.atan2(cos_phi);

        let x = &w * &d;
        let a = x.trace();
        let cc = -linalg::I * (linalg::sigma_x() * &x).trace();
        let two_theta = (2.0 * (a * cc.conj()).re).atan2(a.norm_sqr() - cc.norm_sqr());
        let mut theta = 0.5 * two_theta;
        if theta <= -FRAC_PI_2 {
            theta += PI;
        }
        let mut theta_prime = linalg::wrap_phase(phi - theta);
        if theta_prime > FRAC_PI_2 {
            theta_prime -= PI;
        } else if theta_prime <= -FRAC_PI_2 {
            theta_prime += PI;
        }
        let mut basis = &x * linalg::exp_i_sigma_x(-theta);
        let anchor = if basis[(0, 0)].norm() > 1e-12 { basis[(0, 0)] } else { basis[(0, 1)] };
        basis *= anchor.conj() / anchor.norm();

        let mut form = CanonicalForm {
            theta,
            theta_prime,
            nu,
            mu,
            sign,
            basis,
            phase: linalg::ONE,
            residual: f64::INFINITY,
        };
        let model = form.model();
        let num: Complex64 = model
            .iter()
            .zip(&target)
            .map(|(x, y)| x.zip_map(y, |p, q| p.conj() * q).sum())
            .sum();
        let den: f64 = model.iter().map(|x| x.norm_squared()).sum();
        let lam = num / den;
        form.phase = lam / lam.norm();
        form.residual = model
            .iter()
            .zip(&target)
            .map(|(x, y)| linalg::max_abs(&(x * form.phase - y)))
            .fold(0.0, f64::max);
        let score = form.basis.trace().norm();
        let better = match &best {
            None => true,
            Some((s, f)) => {
                let ok_new = form.residual <= tol;
                let ok_old = f.residual <= tol;
                (ok_new && !ok_old) || (ok_new == ok_old && (score > s + 1e-12 || (!ok_new && form.residual < f.residual)))
            }
        };
        if better {
            best = Some((score, form));
        }
    }
    let (_, form) = best.expect("at least one branch");
    if form.residual > tol {
        return Err(Error::NotInClass(format!(
            "best reconstruction misses by {:e}",
            form.residual
        )));
    }
    Ok(form)
}

/// Result of searching for a parity operator.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityCertificate {
    /// Hermitian involution `P != I` with `P A(k) P = A(-k)`, when found.
    pub parity: Option<CMatrix>,
    /// `max_k |P A(k) P - A(-k)|` for the returned `P` (infinite if none).
    pub residual: f64,
    /// Dimension of the Hermitian solution space of `P A(k) = A(-k) P`.
    pub nullity: usize,
}

impl ParityCertificate {
    pub fn found(&self) -> bool {
        self.parity.is_some()
    }
}

/// Number of momenta sampled by [`parity_test`].
pub const PARITY_SAMPLES: usize = 64;
/// Singular values at or below this span the solution space.
pub const PARITY_NULL_TOL: f64 = 1e-8;

/// Looks for a nontrivial Hermitian involution `P` with `P A(k) P = A(-k)`.
///
/// `P = x0 I + x1 sigma_x + x2 sigma_y + x3 sigma_z` enters linearly, so the
/// condition at sampled momenta is a real linear system in `x`. A traceless
/// element of its null space, normalised, is an involution.
pub fn parity_test(walk: &QuantumWalk) -> Result<ParityCertificate> {
    if walk.coin_dim() != 2 {
        return Err(Error::Dimension(format!(
            "parity test needs coin dimension 2, got {}",
            walk.coin_dim()
        )));
    }
    let mw = to_momentum(walk)?;
    if mw.dim() != 1 {
        return Err(Error::Unsupported(format!("walk lives on Z^{}", mw.dim())));
    }
    let basis = [linalg::identity(2), linalg::sigma_x(), linalg::sigma_y(), linalg::sigma_z()];
    let ks: Vec<f64> = (0..PARITY_SAMPLES)
        .map(|i| -PI + 2.0 * PI * (i as f64 + 0.5) / PARITY_SAMPLES as f64)
        .collect();
    let mut sys = DMatrix::<f64>::zeros(8 * ks.len(), 4);
    for (s, &k) in ks.iter().enumerate() {
        let (ap, am) = (mw.at1(k), mw.at1(-k));
        for (col, b) in basis.iter().enumerate() {
            let e = b * &ap - &am * b;
            for (idx, z) in e.iter().enumerate() {
                sys[(8 * s + 2 * idx, col)] = z.re;
                sys[(8 * s + 2 * idx + 1, col)] = z.im;
            }
        }
    }
    let svd = sys.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let null: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= PARITY_NULL_TOL)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    let nullity = null.len();
    // combination with vanishing identity component
    let candidate = match null.len() {
        0 => None,
        _ => {
            let pivot = null
                .iter()
                .enumerate()
                .max_by(|a, b| a.1[0].abs().total_cmp(&b.1[0].abs()))
                .map(|(i, v)| (i, v[0]))
                .unwrap();
            if pivot.1.abs() <= 1e-12 {
                Some(null[0].clone())
            } else {
                null.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != pivot.0)
                    .map(|(_, v)| v - &null[pivot.0] * (v[0] / pivot.1))
                    .find(|v| v.norm() > 1e-6)
            }
        }
    };
    let Some(mut x) = candidate else {
        return Ok(ParityCertificate {
            parity: None,
            residual: f64::INFINITY,
            nullity,
        });
    };
    x[0] = 0.0;
    let len = x.norm();
    x /= len;
    let lead = (1..4).max_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs())).unwrap();
    if x[lead] < 0.0 {
        x = -x;
    }
    let p = (1..4).fold(linalg::zeros(2), |acc, i| acc + &basis[i] * c(x[i], 0.0));
    let residual = ks
        .iter()
        .map(|&k| linalg::max_abs(&(&p * mw.at1(k) * &p - mw.at1(-k))))
        .fold(0.0, f64::max);
    Ok(ParityCertificate {
        parity: Some(p),
        residual,
        nullity,
    })
}

/// `(delta, gamma)` with eigenphases `+-arccos(delta cos k + gamma)`, read
/// from the traces of the coefficients in the `SU(2)` gauge.
pub fn dispersion_params(walk: &QuantumWalk, tol: f64) -> Result<(f64, f64)> {
    extract_canonical_form(walk, tol)?;
    let gauged: MomentumWalk = to_momentum(walk)?.su2_gauge()?;
    let tr = |s: i64| gauged.coefficient(&[s]).map_or(linalg::ZERO, |m| m.trace());
    let (tp, tm, t0) = (tr(1), tr(-1), tr(0));
    if (tp - tm).norm() > tol || tp.im.abs() > tol || t0.im.abs() > tol {
        return Err(Error::NotInClass(format!(
            "traces are not of the form delta, delta, 2 gamma: {tp}, {tm}, {t0}"
        )));
    }
    let (delta, gamma) = (tp.re, 0.5 * t0.re);
    if (delta + gamma).abs() > 1.0 + tol || (delta - gamma).abs() > 1.0 + tol {
        return Err(Error::NotInClass(format!(
            "|delta +- gamma| exceeds 1 for delta = {delta}, gamma = {gamma}"
        )));
    }
    Ok((delta, gamma))
}

//! Walk-spec files: a presentation plus one complex matrix per generator.
//!
//! ```toml
//! name = "dirac"
//! presentation = "family=free_abelian(1); gens: a=(1), a_inv=(-1), e=(0)"
//! coin_dim = 2
//!
//! [transitions]
//! a = [[0.8, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
//! a_inv = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.8, 0.0]]
//! e = [[0.0, 0.0], [0.0, 0.6], [0.0, 0.6], [0.0, 0.0]]
//!
//! [params]
//! nu = 0.8
//! ```
//!
//! Matrices are row-major lists of `[re, im]` pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use qwalk_core::linalg::{self, CMatrix};
use qwalk_core::{CayleyGraph, QuantumWalk};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct SpecError(pub String);

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SpecError {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub presentation: String,
    pub coin_dim: usize,
    pub transitions: BTreeMap<String, Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

impl WalkSpecFile {
    pub fn from_walk(walk: &QuantumWalk, name: Option<&str>) -> Self {
        let transitions = walk
            .graph()
            .labels()
            .zip(walk.transitions())
            .map(|(label, m)| {
                let s = m.nrows();
                let entries = (0..s)
                    .flat_map(|i| (0..s).map(move |j| (i, j)))
                    .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
                    .collect();
                (label.to_string(), entries)
            })
            .collect();
        WalkSpecFile {
            name: name.map(str::to_string),
            presentation: walk.graph().to_string(),
            coin_dim: walk.coin_dim(),
            transitions,
            params: BTreeMap::new(),
        }
    }

    pub fn with_params(mut self, params: impl IntoIterator<Item = (String, f64)>) -> Self {
        self.params.extend(params);
        self
    }

    pub fn parse(text: &str) -> Result<Self, SpecError> {
        toml::from_str(text).map_err(|e| SpecError(format!("malformed walk spec: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SpecError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("walk specs always serialise")
    }

    /// Builds the walk, checking that labels and matrix sizes line up.
    pub fn to_walk(&self) -> Result<QuantumWalk, SpecError> {
        let graph = CayleyGraph::parse_presentation(&self.presentation)
            .map_err(|e| SpecError(format!("presentation: {e}")))?;
        let s = self.coin_dim;
        if s == 0 {
            return Err(SpecError("coin_dim must be positive".into()));
        }
        for label in self.transitions.keys() {
            if graph.position(label).is_none() {
                return Err(SpecError(format!("transition `{label}` names no generator")));
            }
        }
        let mats = graph
            .labels()
            .map(|label| {
                let entries = self
                    .transitions
                    .get(label)
                    .ok_or_else(|| SpecError(format!("generator `{label}` has no transition matrix")))?;
                if entries.len() != s * s {
                    return Err(SpecError(format!(
                        "transition `{label}` has {} entries, expected {}",
                        entries.len(),
                        s * s
                    )));
                }
                Ok(CMatrix::from_fn(s, s, |i, j| {
                    let [re, im] = entries[i * s + j];
                    linalg::c(re, im)
                }))
            })
            .collect::<Result<Vec<_>, _>>()?;
        QuantumWalk::new(graph, s, mats).map_err(|e| SpecError(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qwalk_core::momentum::make_dirac;

    #[test]
    fn round_trip() {
        let walk = make_dirac(0.8, 0.6, -1).unwrap();
        let spec = WalkSpecFile::from_walk(&walk, Some("dirac")).with_params([("nu".to_string(), 0.8)]);
        let text = spec.to_toml();
        let back = WalkSpecFile::parse(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.to_toml(), text);
        assert_eq!(back.to_walk().unwrap().transitions(), walk.transitions());
    }

    #[test]
    fn label_mismatches_are_reported() {
        let text = r#"
presentation = "family=free_abelian(1); gens: a=(1)"
coin_dim = 1
[transitions]
b = [[1.0, 0.0]]
"#;
        let err = WalkSpecFile::parse(text).unwrap().to_walk().unwrap_err();
        assert!(err.0.contains("`b`"));
    }

    #[test]
    fn wrong_matrix_size() {
        let text = r#"
presentation = "family=free_abelian(1); gens: a=(1)"
coin_dim = 2
[transitions]
a = [[1.0, 0.0]]
"#;
        assert!(WalkSpecFile::parse(text).unwrap().to_walk().is_err());
    }
}

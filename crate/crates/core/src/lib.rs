//! Discrete-time quantum walks on Cayley graphs of finitely generated groups.
//!
//! The crate covers walk construction and unitarity checks on exact group
//! presentations, real-space evolution on truncated lattices, momentum-space
//! analysis of walks on `Z^d`, coarse-graining of scalar walks on the infinite
//! dihedral group into spinorial walks on `Z`, and the classification tools for
//! scalar walks on infinite Abelian groups and on `D_inf`.

pub mod abelian_class;
pub mod coarse_grain;
pub mod dihedral;
mod error;
pub mod groups;
pub mod linalg;
pub mod momentum;
pub mod solver;
pub mod walk;

pub use error::{Error, Result};
pub use groups::{CayleyGraph, CosetTiling, Generator, GroupElement, GroupFamily, Word};
pub use momentum::{DispersionData, MomentumWalk};
pub use walk::{Lattice, LatticeState, QuantumWalk, UnitarityReport};

/// Default tolerance for unitarity residuals.
pub const DEFAULT_TOL: f64 = 1e-10;

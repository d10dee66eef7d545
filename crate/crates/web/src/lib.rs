//! Browser bindings: parity-class dispersion curves, evolution of the
//! dihedral family walks, and the parity / normal-form probe.
//!
//! The `*_impl` functions hold the logic and run natively; the exported
//! wrappers only translate errors for JavaScript.

use qwalk_core::coarse_grain::coarse_grain;
use qwalk_core::dihedral::{
    extract_canonical_form, make_dihedral_walk, parity_test, DihedralParams, SolutionCase,
};
use qwalk_core::groups::default_tiling;
use qwalk_core::momentum::{dispersion, make_hadamard, parity_class_walk, to_momentum};
use qwalk_core::walk::evolve;
use qwalk_core::{GroupFamily, Lattice, LatticeState, QuantumWalk};
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Curve {
    k: Vec<f64>,
    omega: Vec<f64>,
    exact: Vec<f64>,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn k(&self) -> Vec<f64> {
        self.k.clone()
    }

    /// Upper eigenphase branch from diagonalising `A(k)`.
    #[wasm_bindgen(getter)]
    pub fn omega(&self) -> Vec<f64> {
        self.omega.clone()
    }

    /// `arccos(delta cos k + gamma)` on the same grid.
    #[wasm_bindgen(getter)]
    pub fn exact(&self) -> Vec<f64> {
        self.exact.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn max_error(&self) -> f64 {
        self.omega
            .iter()
            .zip(&self.exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn dispersion_curve_impl(delta: f64, gamma: f64, samples: usize) -> Result<Curve, String> {
    let walk = parity_class_walk(delta, gamma).map_err(|e| e.to_string())?;
    let mw = to_momentum(&walk).map_err(|e| e.to_string())?;
    let data = dispersion(&mw, samples.max(8)).map_err(|e| e.to_string())?;
    let exact = data
        .k
        .iter()
        .map(|k| (delta * k.cos() + gamma).clamp(-1.0, 1.0).acos())
        .collect();
    let omega = (0..data.samples())
        .map(|i| data.branches.iter().map(|b| b[i]).fold(f64::MIN, f64::max))
        .collect();
    Ok(Curve {
        k: data.k,
        omega,
        exact,
    })
}

#[wasm_bindgen]
pub fn dispersion_curve(delta: f64, gamma: f64, samples: usize) -> Result<Curve, JsError> {
    dispersion_curve_impl(delta, gamma, samples).map_err(|e| JsError::new(&e))
}

/// Family parameters with the same defaults as the command line: `q` and
/// `s2` are implied by the no-stay and no-reflection cases.
#[allow(clippy::too_many_arguments)]
pub fn family_params(case: &str, p: f64, q: f64, mu: f64, s1: i32, s2: i32, s3: i32) -> Result<DihedralParams, String> {
    let case: SolutionCase = case.parse().map_err(|e: qwalk_core::Error| e.to_string())?;
    let (q, s2, mu) = match case {
        SolutionCase::NoStay => (p, 1, mu),
        SolutionCase::NoReflection => (1.0 - p, -1, mu),
        SolutionCase::Massless => (q, s2, 0.0),
        SolutionCase::Generic => (q, s2, mu),
    };
    DihedralParams::new(case, p, q, mu, s1, s2, s3, 0.0).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub struct Distribution {
    positions: Vec<f64>,
    probabilities: Vec<f64>,
    scalars: Vec<f64>,
}

#[wasm_bindgen]
impl Distribution {
    /// Rotation exponents `n` of the sites `a^n r^eps`.
    #[wasm_bindgen(getter)]
    pub fn positions(&self) -> Vec<f64> {
        self.positions.clone()
    }

    /// Probability at each position, both cosets summed.
    #[wasm_bindgen(getter)]
    pub fn probabilities(&self) -> Vec<f64> {
        self.probabilities.clone()
    }

    /// `[re, im]` pairs of the walk scalars in the order a, a_inv, b, c, d, e.
    #[wasm_bindgen(getter)]
    pub fn scalars(&self) -> Vec<f64> {
        self.scalars.clone()
    }
}

#[allow(clippy::too_many_arguments)]
pub fn evolve_family_impl(
    case: &str,
    p: f64,
    q: f64,
    mu: f64,
    s1: i32,
    s2: i32,
    s3: i32,
    steps: usize,
) -> Result<Distribution, String> {
    let params = family_params(case, p, q, mu, s1, s2, s3)?;
    let walk = make_dihedral_walk(&params);
    let fam = GroupFamily::InfiniteDihedral;
    let ring = 2 * steps + 3;
    let lattice = Lattice::new(fam.clone(), ring).map_err(|e| e.to_string())?;
    let state = LatticeState::delta(lattice.clone(), 1, &fam.identity(), 0).map_err(|e| e.to_string())?;
    let out = evolve(&walk, &state, steps).map_err(|e| e.to_string())?;
    let half = (ring / 2) as i64;
    let mut probabilities = vec![0.0; ring];
    for (idx, prob) in out.position_distribution().into_iter().enumerate() {
        let (n, _) = lattice.site_element(idx).dihedral_parts().expect("dihedral site");
        probabilities[(n + half) as usize] += prob;
    }
    let positions = (-half..ring as i64 - half).map(|n| n as f64).collect();
    let scalars = params.scalars().iter().flat_map(|z| [z.re, z.im]).collect();
    Ok(Distribution {
        positions,
        probabilities,
        scalars,
    })
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn evolve_family(
    case: &str,
    p: f64,
    q: f64,
    mu: f64,
    s1: i32,
    s2: i32,
    s3: i32,
    steps: usize,
) -> Result<Distribution, JsError> {
    evolve_family_impl(case, p, q, mu, s1, s2, s3, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct Probe {
    parity_found: bool,
    parity_residual: f64,
    canonical: Option<(f64, f64, f64, f64)>,
    message: String,
}

#[wasm_bindgen]
impl Probe {
    #[wasm_bindgen(getter)]
    pub fn parity_found(&self) -> bool {
        self.parity_found
    }

    #[wasm_bindgen(getter)]
    pub fn parity_residual(&self) -> f64 {
        self.parity_residual
    }

    #[wasm_bindgen(getter)]
    pub fn in_class(&self) -> bool {
        self.canonical.is_some()
    }

    /// `[theta + theta', nu, mu, residual]`, empty when outside the class.
    #[wasm_bindgen(getter)]
    pub fn canonical(&self) -> Vec<f64> {
        self.canonical
            .map(|(a, b, c, d)| vec![a, b, c, d])
            .unwrap_or_default()
    }

    #[wasm_bindgen(getter)]
    pub fn message(&self) -> String {
        self.message.clone()
    }
}

fn probe_line(walk: &QuantumWalk) -> Result<Probe, String> {
    let cert = parity_test(walk).map_err(|e| e.to_string())?;
    let (canonical, message) = match extract_canonical_form(walk, 1e-9) {
        Ok(f) => (Some((f.total_angle(), f.nu, f.mu, f.residual)), "in the parity-invariant class".to_string()),
        Err(e) => (None, e.to_string()),
    };
    Ok(Probe {
        parity_found: cert.found(),
        parity_residual: cert.residual,
        canonical,
        message,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn probe_family_impl(case: &str, p: f64, q: f64, mu: f64, s1: i32, s2: i32, s3: i32) -> Result<Probe, String> {
    let walk = make_dihedral_walk(&family_params(case, p, q, mu, s1, s2, s3)?);
    let tiling = default_tiling(walk.graph()).map_err(|e| e.to_string())?;
    probe_line(&coarse_grain(&walk, &tiling).map_err(|e| e.to_string())?)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn probe_family(case: &str, p: f64, q: f64, mu: f64, s1: i32, s2: i32, s3: i32) -> Result<Probe, JsError> {
    probe_family_impl(case, p, q, mu, s1, s2, s3).map_err(|e| JsError::new(&e))
}

pub fn probe_hadamard_impl() -> Result<Probe, String> {
    probe_line(&make_hadamard())
}

#[wasm_bindgen]
pub fn probe_hadamard() -> Result<Probe, JsError> {
    probe_hadamard_impl().map_err(|e| JsError::new(&e))
}

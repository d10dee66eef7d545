//! Momentum-space analysis of walks on `Z^d`.
//!
//! A walk with transitions `C_h` has symbol `A(k) = sum_h e^{-i k.h} C_h`.
//! For one-dimensional spinorial walks the symbol is brought into `SU(2)` by a
//! constant phase, after which the eigenphases are `+w(k)` and `-w(k)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{CayleyGraph, GroupFamily};
use crate::linalg::{self, c, CMatrix};
use crate::walk::QuantumWalk;
use crate::DEFAULT_TOL;

/// Default number of k samples over the Brillouin zone.
pub const DEFAULT_SAMPLES: usize = 1024;

/// Fourier symbol of a walk on `Z^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumWalk {
    coin_dim: usize,
    dim: usize,
    terms: Vec<(Vec<i64>, CMatrix)>,
}

impl MomentumWalk {
    /// Builds a symbol from `(shift, coefficient)` pairs. Repeated shifts are
    /// summed and exactly vanishing coefficients dropped.
    pub fn new(coin_dim: usize, dim: usize, terms: Vec<(Vec<i64>, CMatrix)>) -> Result<Self> {
        let mut merged: Vec<(Vec<i64>, CMatrix)> = Vec::new();
        for (h, m) in terms {
            if h.len() != dim {
                return Err(Error::Dimension(format!("shift {h:?} is not in Z^{dim}")));
            }
            if m.nrows() != coin_dim || m.ncols() != coin_dim {
                return Err(Error::Dimension(format!(
                    "coefficient is {}x{}, expected {coin_dim}x{coin_dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            match merged.iter_mut().find(|(g, _)| *g == h) {
                Some((_, acc)) => *acc += m,
                None => merged.push((h, m)),
            }
        }
        merged.retain(|(_, m)| !linalg::is_zero(m, 0.0));
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(MomentumWalk {
            coin_dim,
            dim,
            terms: merged,
        })
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<i64>, CMatrix)] {
        &self.terms
    }

    pub fn coefficient(&self, shift: &[i64]) -> Option<&CMatrix> {
        self.terms.iter().find(|(h, _)| h == shift).map(|(_, m)| m)
    }

    /// `A(k)`.
    pub fn at(&self, k: &[f64]) -> CMatrix {
        let mut out = linalg::zeros(self.coin_dim);
        for (h, m) in &self.terms {
            let phase: f64 = h.iter().zip(k).map(|(&hi, &ki)| hi as f64 * ki).sum();
            out += m * linalg::cis(-phase);
        }
        out
    }

    /// `A(k)` for one-dimensional walks.
    pub fn at1(&self, k: f64) -> CMatrix {
        self.at(&[k])
    }

    /// Sample points covering the zone: the uniform grid for `d = 1`, a
    /// Kronecker sequence otherwise.
    pub fn sample_points(&self, samples: usize) -> Vec<Vec<f64>> {
        if self.dim == 1 {
            return brillouin_grid(samples).into_iter().map(|k| vec![k]).collect();
        }
        let steps: Vec<f64> = (0..self.dim)
            .map(|l| ((l as f64 + 2.0).sqrt()).fract())
            .collect();
        (0..samples)
            .map(|j| {
                steps
                    .iter()
                    .map(|a| -PI + 2.0 * PI * (j as f64 * a).fract())
                    .collect()
            })
            .collect()
    }

    /// Largest `|A A^dagger - I|` over `samples` zone points.
    pub fn max_unitarity_defect(&self, samples: usize) -> f64 {
        self.sample_points(samples)
            .iter()
            .map(|k| linalg::unitarity_defect(&self.at(k)))
            .fold(0.0, f64::max)
    }

    /// Multiplies every coefficient by `z`.
    pub fn scaled(&self, z: Complex64) -> MomentumWalk {
        MomentumWalk {
            coin_dim: self.coin_dim,
            dim: self.dim,
            terms: self.terms.iter().map(|(h, m)| (h.clone(), m * z)).collect(),
        }
    }

    /// Rescales a `2 x 2` symbol by a constant phase so that `det A(k) = 1`.
    ///
    /// The remaining sign is fixed by making the trace of the coefficient at
    /// the first unit shift point into the right half-plane (upper imaginary
    /// axis on ties); if that trace vanishes, its `(1,1)` entry is used instead.
    pub fn su2_gauge(&self) -> Result<MomentumWalk> {
        if self.coin_dim != 2 {
            return Err(Error::Unsupported(format!(
                "SU(2) gauge needs coin dimension 2, got {}",
                self.coin_dim
            )));
        }
        let pts = self.sample_points(16);
        let dets: Vec<Complex64> = pts.iter().map(|k| linalg::det2(&self.at(k))).collect();
        let d0 = dets[0];
        if dets.iter().any(|d| (d - d0).norm() > 1e-9) || (d0.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Unsupported(
                "det A(k) is not a constant phase; no SU(2) gauge".into(),
            ));
        }
        let mut gauged = self.scaled(d0.sqrt().inv());
        let mut unit = vec![0i64; self.dim];
        unit[0] = 1;
        let key = gauged.coefficient(&unit).map(|m| {
            let tr = m[(0, 0)] + m[(1, 1)];
            if tr.norm() > 1e-12 {
                tr
            } else {
                m[(0, 0)]
            }
        });
        if let Some(z) = key {
            let flip = if z.re.abs() > 1e-12 { z.re < 0.0 } else { z.im < -1e-12 };
            if flip {
                gauged = gauged.scaled(-linalg::ONE);
            }
        }
        Ok(gauged)
    }

    /// Eigenphases of `A(k)` from the dense eigensolver, sorted descending.
    pub fn eigenphases(&self, k: &[f64]) -> Vec<f64> {
        let mut ph: Vec<f64> = linalg::eigenvalues(&self.at(k)).iter().map(|z| z.arg()).collect();
        ph.sort_by(|a, b| b.total_cmp(a));
        ph
    }
}

/// `k_i = -pi + 2 pi i / n` for `i = 0..n`.
pub fn brillouin_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -PI + 2.0 * PI * i as f64 / n as f64).collect()
}

/// Symbol of a walk whose position group is `Z^d`.
pub fn to_momentum(walk: &QuantumWalk) -> Result<MomentumWalk> {
    let dim = match walk.graph().family() {
        GroupFamily::FreeAbelian(d) => *d,
        GroupFamily::FiniteAbelianTimesFree { orders, rank } if orders.is_empty() => *rank,
        other => {
            return Err(Error::Unsupported(format!(
                "momentum representation needs Z^d, got {other}"
            )))
        }
    };
    let terms = walk
        .terms()
        .map(|(h, m)| (h.free_part().unwrap_or(&[]).to_vec(), m.clone()))
        .collect();
    MomentumWalk::new(walk.coin_dim(), dim, terms)
}

/// Sampled dispersion relation of a one-dimensional walk.
#[derive(Clone, Debug, PartialEq)]
pub struct DispersionData {
    /// Grid points, uniformly spaced over `[-pi, pi)`.
    pub k: Vec<f64>,
    /// `branches[r][i]` is the `r`-th eigenphase at `k[i]`, in `[-pi, pi]`.
    pub branches: Vec<Vec<f64>>,
    /// Smallest circular distance between eigenphases at each `k[i]`.
    pub gaps: Vec<f64>,
    /// Derivatives are withheld wherever a stencil point has a gap below this.
    pub gap_threshold: f64,
}

impl DispersionData {
    pub fn samples(&self) -> usize {
        self.k.len()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.k.len() as f64
    }

    fn stencil_ok(&self, i: usize) -> bool {
        let n = self.k.len();
        [(i + n - 1) % n, i, (i + 1) % n]
            .iter()
            .all(|&j| self.gaps[j] >= self.gap_threshold)
    }

    fn stencil(&self, branch: usize, i: usize) -> (f64, f64) {
        let n = self.k.len();
        let w = &self.branches[branch];
        let back = linalg::wrap_phase(w[i] - w[(i + n - 1) % n]);
        let fwd = linalg::wrap_phase(w[(i + 1) % n] - w[i]);
        (back, fwd)
    }

    /// Central-difference `dw/dk`; `None` where the branch is not smooth.
    pub fn group_velocity(&self, branch: usize) -> Vec<Option<f64>> {
        let h = self.spacing();
        (0..self.k.len())
            .map(|i| {
                self.stencil_ok(i).then(|| {
                    let (b, f) = self.stencil(branch, i);
                    (b + f) / (2.0 * h)
                })
            })
            .collect()
    }

    /// Central-difference `d^2w/dk^2`; `None` where the branch is not smooth.
    pub fn diffusion_coefficient(&self, branch: usize) -> Vec<Option<f64>> {
        let h = self.spacing();
        (0..self.k.len())
            .map(|i| {
                self.stencil_ok(i).then(|| {
                    let (b, f) = self.stencil(branch, i);
                    (f - b) / (h * h)
                })
            })
            .collect()
    }

    /// Index of the grid point closest to `k`.
    pub fn index_of(&self, k: f64) -> usize {
        let n = self.k.len() as f64;
        let x = ((k + PI) / self.spacing()).round().rem_euclid(n);
        x as usize
    }

    /// Reorders eigenphases so each branch follows the closest phase at the
    /// previous grid point.
    pub fn track_branches(&self) -> DispersionData {
        let r = self.branches.len();
        let n = self.k.len();
        let mut out = self.clone();
        for i in 1..n {
            let mut used = vec![false; r];
            let current: Vec<f64> = (0..r).map(|b| self.branches[b][i]).collect();
            for b in 0..r {
                let prev = out.branches[b][i - 1];
                let pick = (0..r)
                    .filter(|&j| !used[j])
                    .min_by(|&x, &y| {
                        let dx = linalg::wrap_phase(current[x] - prev).abs();
                        let dy = linalg::wrap_phase(current[y] - prev).abs();
                        dx.total_cmp(&dy)
                    })
                    .expect("as many candidates as branches");
                used[pick] = true;
                out.branches[b][i] = current[pick];
            }
        }
        out
    }
}

fn min_gap(phases: &[f64]) -> f64 {
    let mut gap = 2.0 * PI;
    for (i, a) in phases.iter().enumerate() {
        for b in &phases[i + 1..] {
            gap = gap.min(linalg::wrap_phase(a - b).abs());
        }
    }
    gap
}

/// `w` with `cos w = Re tr(A)/2` for `A` in `SU(2)`, via `atan2` for accuracy
/// near `w = 0` and `w = pi`.
pub fn su2_phase(a: &CMatrix) -> f64 {
    let half_tr = (a[(0, 0)] + a[(1, 1)]) * 0.5;
    let traceless = a - linalg::identity(2) * half_tr;
    let sin = traceless.norm() * FRAC_1_SQRT_2;
    sin.atan2(half_tr.re)
}

/// Samples the dispersion relation of a one-dimensional walk on `samples`
/// grid points with the default tolerance.
pub fn dispersion(mwalk: &MomentumWalk, samples: usize) -> Result<DispersionData> {
    dispersion_with_tol(mwalk, samples, DEFAULT_TOL)
}

/// As [`dispersion`], failing if some `A(k)` is off unitary by more than `tol`.
///
/// Two-component walks with constant determinant are reported in the `SU(2)`
/// gauge as branches `[+w, -w]` with `w` in `[0, pi]`. Other walks get the
/// eigenphases of the dense eigensolver sorted descending at each `k`.
pub fn dispersion_with_tol(mwalk: &MomentumWalk, samples: usize, tol: f64) -> Result<DispersionData> {
    if mwalk.dim() != 1 {
        return Err(Error::Unsupported(format!(
            "dispersion sampling is one-dimensional, walk lives on Z^{}",
            mwalk.dim()
        )));
    }
    if samples < 3 {
        return Err(Error::Dimension(format!("need at least 3 samples, got {samples}")));
    }
    let ks = brillouin_grid(samples);
    let gauged = if mwalk.coin_dim() == 2 {
        mwalk.su2_gauge().ok()
    } else {
        None
    };
    let s = mwalk.coin_dim();
    let mut branches = vec![Vec::with_capacity(samples); s];
    let mut gaps = Vec::with_capacity(samples);
    for &k in &ks {
        let a = mwalk.at1(k);
        let defect = linalg::unitarity_defect(&a);
        if defect > tol {
            return Err(Error::NotUnitary(defect));
        }
        let phases = match &gauged {
            Some(g) => {
                let w = su2_phase(&g.at1(k));
                vec![w, -w]
            }
            None => mwalk.eigenphases(&[k]),
        };
        gaps.push(min_gap(&phases));
        for (b, p) in branches.iter_mut().zip(phases) {
            b.push(p);
        }
    }
    Ok(DispersionData {
        k: ks,
        branches,
        gaps,
        gap_threshold: 2.0 * PI / samples as f64,
    })
}

/// First branch group velocity.
pub fn group_velocity(data: &DispersionData) -> Vec<Option<f64>> {
    data.group_velocity(0)
}

/// First branch diffusion coefficient.
pub fn diffusion_coefficient(data: &DispersionData) -> Vec<Option<f64>> {
    data.diffusion_coefficient(0)
}

/// Graph on `Z` with generators `a = +1`, `a_inv = -1` and optionally `e`.
pub fn line_graph(with_identity: bool) -> CayleyGraph {
    let mut gens = vec![("a", "t"), ("a_inv", "t^-1")];
    if with_identity {
        gens.push(("e", "e"));
    }
    CayleyGraph::from_words(GroupFamily::FreeAbelian(1), &gens).expect("the line graph is valid")
}

/// Two-component walk on `Z` with coefficients at shifts `+1`, `-1` and `0`.
pub fn line_walk(plus: CMatrix, minus: CMatrix, stay: CMatrix) -> Result<QuantumWalk> {
    QuantumWalk::new(line_graph(true), plus.nrows(), vec![plus, minus, stay])
}

/// Dirac walk: `A(k) = [[nu e^{-ik}, i s mu], [i s mu, nu e^{ik}]]`.
pub fn make_dirac(nu: f64, mu: f64, sign: i32) -> Result<QuantumWalk> {
    if (nu * nu + mu * mu - 1.0).abs() > 1e-12 {
        return Err(Error::Constraint(format!(
            "nu^2 + mu^2 = {} but must equal 1",
            nu * nu + mu * mu
        )));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Constraint(format!("sign must be +1 or -1, got {sign}")));
    }
    let n = c(nu, 0.0);
    let z = linalg::ZERO;
    let m = c(0.0, sign as f64 * mu);
    line_walk(
        linalg::mat2(n, z, z, z),
        linalg::mat2(z, z, z, n),
        linalg::mat2(z, m, m, z),
    )
}

/// Weyl walk `A(k) = exp(-i k sigma_z)`.
pub fn make_weyl() -> QuantumWalk {
    make_dirac(1.0, 0.0, 1).expect("Weyl parameters are valid")
}

/// Hadamard walk: Hadamard coin followed by a shift of the upper component
/// along `+1` and the lower along `-1`.
pub fn make_hadamard() -> QuantumWalk {
    let h = FRAC_1_SQRT_2;
    let p = c(h, 0.0);
    let z = linalg::ZERO;
    let graph = line_graph(false);
    QuantumWalk::new(
        graph,
        2,
        vec![linalg::mat2(p, p, z, z), linalg::mat2(z, z, p, -p)],
    )
    .expect("Hadamard walk is well formed")
}

/// `exp(i phi sigma_x)` applied after the Dirac walk.
pub fn parity_walk(phi: f64, nu: f64, mu: f64, sign: i32) -> Result<QuantumWalk> {
    let dirac = make_dirac(nu, mu, sign)?;
    let rot = linalg::exp_i_sigma_x(phi);
    let mats = dirac.transitions().iter().map(|m| &rot * m).collect();
    QuantumWalk::new(dirac.graph().clone(), 2, mats)
}

/// Parameters `(phi, nu, mu)` of a parity walk with `cos w = delta cos k + gamma`.
pub fn parity_parameters(delta: f64, gamma: f64) -> Result<(f64, f64, f64)> {
    const SLACK: f64 = 1e-12;
    if (delta + gamma).abs() > 1.0 + SLACK || (delta - gamma).abs() > 1.0 + SLACK {
        return Err(Error::Constraint(format!(
            "|delta +- gamma| <= 1 violated by delta = {delta}, gamma = {gamma}"
        )));
    }
    // nu^2 solves X^2 - X (1 + delta^2 - gamma^2) + delta^2 = 0; both roots
    // lie in [0, 1], the larger one is used.
    let b = 1.0 + delta * delta - gamma * gamma;
    let disc = (b * b - 4.0 * delta * delta).max(0.0);
    let x = ((b + disc.sqrt()) / 2.0).clamp(0.0, 1.0);
    let nu = x.sqrt();
    let mu = (1.0 - x).sqrt();
    let cos_phi = if nu > 0.0 { (delta / nu).clamp(-1.0, 1.0) } else { 0.0 };
    let sin_phi = if mu > 1e-15 {
        (-gamma / mu).clamp(-1.0, 1.0)
    } else {
        (1.0 - cos_phi * cos_phi).max(0.0).sqrt()
    };
    Ok((sin_phi.atan2(cos_phi), nu, mu))
}

/// Parity-invariant walk with dispersion `w(k) = arccos(delta cos k + gamma)`.
pub fn parity_class_walk(delta: f64, gamma: f64) -> Result<QuantumWalk> {
    let (phi, nu, mu) = parity_parameters(delta, gamma)?;
    parity_walk(phi, nu, mu, 1)
}

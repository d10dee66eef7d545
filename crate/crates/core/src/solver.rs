//! Numerical search for scalar walks on a given Cayley graph.
//!
//! The unknowns are the transition scalars `z_h`. The residuals are the
//! unitarity conditions `sum_{h h'^-1 = g} z_h z_h'^* = 0` and
//! `sum_{h^-1 h' = g} z_h^* z_h' = 0` for `g != e`, plus the normalisation
//! `sum |z_h|^2 = 1`. Each start is driven to a root by damped Gauss-Newton
//! (Levenberg-Marquardt) with an analytic Jacobian.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groups::CayleyGraph;
use crate::linalg::{self, c};
use crate::walk::{check_unitarity, QuantumWalk};

/// Multi-start settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// A start counts as a solution when every residual is at most this.
    pub accept_tol: f64,
    /// Gauge-fixed solutions closer than this (max modulus) are merged.
    pub dedup_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 256,
            seed: 0,
            max_iterations: 300,
            accept_tol: 1e-10,
            dedup_tol: 1e-7,
        }
    }
}

/// A scalar walk found by the solver, in the gauge where the first nonzero
/// scalar is real and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarSolution {
    pub scalars: Vec<Complex64>,
    /// Largest unitarity residual of the solution.
    pub residual: f64,
}

/// Result of a multi-start search. An empty list means nothing was found at
/// this resolution, not that no solution exists.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverOutcome {
    pub solutions: Vec<ScalarSolution>,
    pub starts: usize,
    pub converged: usize,
}

impl SolverOutcome {
    pub fn is_inconclusive(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Unitarity equations as lists of index pairs `(a, b)` standing for
/// `sum z_a conj(z_b)`.
#[derive(Clone, Debug)]
struct System {
    n: usize,
    equations: Vec<Vec<(usize, usize)>>,
}

impl System {
    fn new(graph: &CayleyGraph) -> Self {
        let gens = graph.generators();
        let n = gens.len();
        let mut eqs: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
        let mut left = std::collections::BTreeMap::new();
        let mut right = std::collections::BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let (ha, hb) = (&gens[a].element, &gens[b].element);
                left.entry(ha.mul(&hb.inverse()))
                    .or_insert_with(Vec::new)
                    .push((a, b));
                // z_a^* z_b = conj(z_b conj(z_a))
                right
                    .entry(ha.inverse().mul(hb))
                    .or_insert_with(Vec::new)
                    .push((b, a));
            }
        }
        for mut pairs in left.into_values().chain(right.into_values()) {
            pairs.sort_unstable();
            eqs.insert(pairs);
        }
        System {
            n,
            equations: eqs.into_iter().collect(),
        }
    }

    fn residual_len(&self) -> usize {
        2 * self.equations.len() + 1
    }

    fn unpack(x: &DVector<f64>) -> Vec<Complex64> {
        (0..x.len() / 2).map(|i| c(x[2 * i], x[2 * i + 1])).collect()
    }

    fn residuals(&self, x: &DVector<f64>) -> DVector<f64> {
        let z = Self::unpack(x);
        let mut r = DVector::zeros(self.residual_len());
        for (e, pairs) in self.equations.iter().enumerate() {
            let v: Complex64 = pairs.iter().map(|&(a, b)| z[a] * z[b].conj()).sum();
            r[2 * e] = v.re;
            r[2 * e + 1] = v.im;
        }
        let last = r.len() - 1;
        r[last] = z.iter().map(|w| w.norm_sqr()).sum::<f64>() - 1.0;
        r
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let z = Self::unpack(x);
        let mut jac = DMatrix::zeros(self.residual_len(), 2 * self.n);
        for (e, pairs) in self.equations.iter().enumerate() {
            for &(a, b) in pairs {
                // d/dx_a = conj z_b, d/dy_a = i conj z_b, d/dx_b = z_a, d/dy_b = -i z_a
                let partials = [
                    (2 * a, z[b].conj()),
                    (2 * a + 1, linalg::I * z[b].conj()),
                    (2 * b, z[a]),
                    (2 * b + 1, -linalg::I * z[a]),
                ];
                for (col, d) in partials {
                    jac[(2 * e, col)] += d.re;
                    jac[(2 * e + 1, col)] += d.im;
                }
            }
        }
        let last = jac.nrows() - 1;
        for i in 0..2 * self.n {
            jac[(last, i)] = 2.0 * x[i];
        }
        jac
    }

    /// Levenberg-Marquardt from `x`; returns the final point.
    fn minimise(&self, mut x: DVector<f64>, max_iterations: usize) -> DVector<f64> {
        let mut r = self.residuals(&x);
        let mut cost = r.norm_squared();
        let mut lambda = 1e-3;
        for _ in 0..max_iterations {
            if cost < 1e-30 {
                break;
            }
            let jac = self.jacobian(&x);
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let grad = &jt * &r;
            let mut improved = false;
            for _ in 0..30 {
                let mut lhs = jtj.clone();
                for i in 0..lhs.nrows() {
                    lhs[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
                }
                let Some(step) = lhs.cholesky().map(|ch| ch.solve(&(-&grad))) else {
                    lambda *= 10.0;
                    continue;
                };
                let trial = &x + &step;
                let tr = self.residuals(&trial);
                let tc = tr.norm_squared();
                if tc < cost {
                    let tiny = step.norm() <= 1e-16 * (1.0 + x.norm());
                    x = trial;
                    r = tr;
                    cost = tc;
                    lambda = (lambda / 3.0).max(1e-15);
                    improved = !tiny;
                    break;
                }
                lambda *= 4.0;
            }
            if !improved {
                break;
            }
        }
        x
    }
}

/// Rotates the first scalar with modulus above `tol` onto the positive real axis.
pub fn fix_gauge(z: &[Complex64], tol: f64) -> Vec<Complex64> {
    match z.iter().find(|w| w.norm() > tol) {
        Some(w) => {
            let phase = w.conj() / w.norm();
            z.iter().map(|v| v * phase).collect()
        }
        None => z.to_vec(),
    }
}

fn pack(z: &[Complex64]) -> DVector<f64> {
    DVector::from_iterator(2 * z.len(), z.iter().flat_map(|w| [w.re, w.im]))
}

fn finish(graph: &CayleyGraph, x: &DVector<f64>, config: &SolverConfig) -> Option<ScalarSolution> {
    let z = fix_gauge(&System::unpack(x), config.dedup_tol);
    let walk = QuantumWalk::scalar(graph.clone(), &z).ok()?;
    let residual = check_unitarity(&walk, config.accept_tol).max_residual();
    (residual <= config.accept_tol).then_some(ScalarSolution { scalars: z, residual })
}

/// Drives a single initial guess to a nearby solution, if one is reached.
pub fn refine(graph: &CayleyGraph, initial: &[Complex64], config: &SolverConfig) -> Option<ScalarSolution> {
    let sys = System::new(graph);
    if initial.len() != sys.n {
        return None;
    }
    let x = sys.minimise(pack(initial), config.max_iterations);
    finish(graph, &x, config)
}

/// Multi-start search for unitary scalar walks on `graph`.
pub fn solve_unitarity(graph: &CayleyGraph, config: &SolverConfig) -> SolverOutcome {
    let sys = System::new(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut solutions: Vec<ScalarSolution> = Vec::new();
    let mut converged = 0;
    for _ in 0..config.starts {
        let mut start: DVector<f64> =
            DVector::from_fn(2 * sys.n, |_, _| rng.random_range(-1.0..1.0));
        let norm = start.norm();
        if norm > 0.0 {
            start /= norm;
        }
        let x = sys.minimise(start, config.max_iterations);
        if let Some(sol) = finish(graph, &x, config) {
            converged += 1;
            let dup = solutions.iter().any(|s| {
                s.scalars
                    .iter()
                    .zip(&sol.scalars)
                    .all(|(a, b)| (a - b).norm() <= config.dedup_tol)
            });
            if !dup {
                solutions.push(sol);
            }
        }
    }
    SolverOutcome {
        solutions,
        starts: config.starts,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupFamily;

    #[test]
    fn line_with_two_shifts_has_only_monoidal_solutions() {
        let g = CayleyGraph::from_words(GroupFamily::FreeAbelian(1), &[("p", "t"), ("m", "t^-1")]).unwrap();
        let out = solve_unitarity(&g, &SolverConfig { starts: 64, ..Default::default() });
        assert_eq!(out.solutions.len(), 2, "{:?}", out.solutions);
        for s in &out.solutions {
            let zero = s.scalars.iter().filter(|z| z.norm() < 1e-7).count();
            assert_eq!(zero, 1);
            assert!(s.residual <= 1e-10);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let g = CayleyGraph::from_words(
            GroupFamily::InfiniteDihedral,
            &[("a", "a"), ("a_inv", "a^-1"), ("b", "a r"), ("c", "a^-1 r"), ("d", "r")],
        )
        .unwrap();
        let sys = System::new(&g);
        let x = DVector::from_fn(10, |i, _| (i as f64 * 0.37).sin());
        let jac = sys.jacobian(&x);
        let h = 1e-6;
        for col in 0..10 {
            let mut xp = x.clone();
            xp[col] += h;
            let mut xm = x.clone();
            xm[col] -= h;
            let fd = (sys.residuals(&xp) - sys.residuals(&xm)) / (2.0 * h);
            for row in 0..fd.len() {
                assert!((fd[row] - jac[(row, col)]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn gauge_fixing() {
        let z = [c(0.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)];
        let g = fix_gauge(&z, 1e-7);
        assert!((g[1] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((g[2] - c(0.0, -1.0)).norm() < 1e-15);
    }
}

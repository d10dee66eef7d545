#![allow(dead_code)]

use num_complex::Complex64;
use qwalk_core::dihedral::{DihedralParams, SolutionCase};
use qwalk_core::linalg::{self, CMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const EDGE: f64 = 1e-6;

fn sign(rng: &mut ChaCha8Rng) -> i32 {
    if rng.random_bool(0.5) {
        1
    } else {
        -1
    }
}

/// Uniform in (0, 1), or pinned next to an endpoint when `edge` is set.
fn unit(rng: &mut ChaCha8Rng, edge: bool) -> f64 {
    if edge {
        if rng.random_bool(0.5) {
            EDGE
        } else {
            1.0 - EDGE
        }
    } else {
        loop {
            let x: f64 = rng.random();
            if x > 0.0 {
                return x;
            }
        }
    }
}

/// Random valid parameters for `case`. Every tenth draw (`edge`) sits next to
/// the boundary of the open parameter ranges.
pub fn random_params(rng: &mut ChaCha8Rng, case: SolutionCase, edge: bool) -> DihedralParams {
    let phase = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    loop {
        let (s1, s3) = (sign(rng), sign(rng));
        let mu_edge = edge && rng.random_bool(0.5);
        let mu = unit(rng, mu_edge);
        let attempt = match case {
            SolutionCase::Massless => {
                let q_edge = edge && rng.random_bool(0.5);
                let (p, q) = (unit(rng, edge), unit(rng, q_edge));
                DihedralParams::massless(p, q, s1, sign(rng))
            }
            SolutionCase::NoStay => DihedralParams::no_stay(unit(rng, edge), mu, s1, s3),
            SolutionCase::NoReflection => DihedralParams::no_reflection(unit(rng, edge), mu, s1, s3),
            SolutionCase::Generic => {
                let s2 = sign(rng);
                let q = unit(rng, edge);
                let p = if s2 == 1 {
                    q + (1.0 - q) * unit(rng, false)
                } else {
                    (1.0 - q) * unit(rng, false)
                };
                DihedralParams::generic(p, q, mu, s1, s2, s3)
            }
        };
        if let Ok(p) = attempt {
            return p.with_phase(phase);
        }
    }
}

pub fn random_unitary2(rng: &mut ChaCha8Rng) -> CMatrix {
    let mut g = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let m = linalg::mat2(g(), g(), g(), g());
    m.qr().q()
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    linalg::max_abs(&(a - b))
}

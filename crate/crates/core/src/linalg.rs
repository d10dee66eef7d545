//! Small dense complex matrix helpers.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{i phi}`.
pub fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn scalar(z: Complex64) -> CMatrix {
    CMatrix::from_element(1, 1, z)
}

/// Builds a 2x2 matrix from rows.
pub fn mat2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

pub fn sigma_x() -> CMatrix {
    mat2(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> CMatrix {
    mat2(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> CMatrix {
    mat2(ONE, ZERO, ZERO, -ONE)
}

/// `exp(i theta sigma_x)`.
pub fn exp_i_sigma_x(theta: f64) -> CMatrix {
    let (s, co) = theta.sin_cos();
    mat2(c(co, 0.0), c(0.0, s), c(0.0, s), c(co, 0.0))
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_zero(m: &CMatrix, tol: f64) -> bool {
    max_abs(m) <= tol
}

/// `max |(M M^dagger - I)_ij|`, also checking `M^dagger M`.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let id = identity(n);
    let a = max_abs(&(m * m.adjoint() - &id));
    let b = max_abs(&(m.adjoint() * m - &id));
    a.max(b)
}

pub fn det2(m: &CMatrix) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Eigenvalues of a square complex matrix. Closed form for sizes 1 and 2,
/// complex Schur decomposition otherwise.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)]],
        2 => {
            let half_tr = (m[(0, 0)] + m[(1, 1)]) * 0.5;
            let disc = (half_tr * half_tr - det2(m)).sqrt();
            vec![half_tr + disc, half_tr - disc]
        }
        _ => {
            let schur = Schur::new(m.clone());
            let (_, t) = schur.unpack();
            (0..t.nrows()).map(|i| t[(i, i)]).collect()
        }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(phi: f64) -> f64 {
    use std::f64::consts::PI;
    let mut x = phi.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// `arccos` that tolerates rounding excursions of up to `1e-12` outside `[-1, 1]`.
pub fn clamped_acos(x: f64) -> f64 {
    const SLACK: f64 = 1e-12;
    debug_assert!(x.abs() <= 1.0 + SLACK, "arccos argument {x} out of range");
    x.clamp(-1.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let x = sigma_x();
        let y = sigma_y();
        let z = sigma_z();
        assert!(max_abs(&(&x * &y - &z * I)) < 1e-15);
        assert!(max_abs(&(&x * &x - identity(2))) < 1e-15);
        assert!(unitarity_defect(&exp_i_sigma_x(0.3)) < 1e-15);
    }

    #[test]
    fn eigenvalues_match_schur_for_2x2() {
        let m = mat2(c(0.3, 0.1), c(-0.2, 0.5), c(0.7, 0.0), c(0.1, -0.4));
        let mut closed = eigenvalues(&m);
        let (_, t) = Schur::new(m.clone()).unpack();
        let mut schur = vec![t[(0, 0)], t[(1, 1)]];
        let key = |z: &Complex64| (z.re * 1e6).round() as i64;
        closed.sort_by_key(key);
        schur.sort_by_key(key);
        for (a, b) in closed.iter().zip(&schur) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn wrap_phase_range() {
        use std::f64::consts::PI;
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-0.5) + 0.5).abs() < 1e-15);
    }
}

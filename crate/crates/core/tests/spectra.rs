use std::f64::consts::PI;

use qwalk_core::coarse_grain::{coarse_grain, verify_equivalence, CoarseGraining};
use qwalk_core::dihedral::{full_dihedral_graph, make_dihedral_walk, DihedralParams};
use qwalk_core::groups::default_tiling;
use qwalk_core::linalg::{self, c, CMatrix};
use qwalk_core::momentum::{
    brillouin_grid, dispersion, make_dirac, make_weyl, parity_class_walk, to_momentum, MomentumWalk,
};
use qwalk_core::{CayleyGraph, CosetTiling, Error, GroupFamily, QuantumWalk};

/// Half the phase gap between the eigenvalues of a 2x2 unitary; blind to a
/// global phase.
fn half_gap(m: &CMatrix) -> f64 {
    let ev = linalg::eigenvalues(m);
    (ev[0] / ev[1]).arg().abs() / 2.0
}

#[test]
fn monoidal_symbol() {
    let theta = 0.3;
    let line = CayleyGraph::from_words(GroupFamily::FreeAbelian(1), &[("p", "t")]).unwrap();
    let walk = QuantumWalk::scalar(line, &[linalg::cis(-theta)]).unwrap();
    let mw = to_momentum(&walk).unwrap();
    for k in brillouin_grid(16) {
        assert!((mw.at1(k)[(0, 0)] - linalg::cis(-(k + theta))).norm() < 1e-15);
    }
}

#[test]
fn dirac_coefficients() {
    let (nu, mu) = (0.8, 0.6);
    let mw = to_momentum(&make_dirac(nu, mu, -1).unwrap()).unwrap();
    let z = linalg::ZERO;
    assert_eq!(mw.coefficient(&[1]).unwrap(), &linalg::mat2(c(nu, 0.0), z, z, z));
    assert_eq!(mw.coefficient(&[-1]).unwrap(), &linalg::mat2(z, z, z, c(nu, 0.0)));
    assert_eq!(mw.coefficient(&[0]).unwrap(), &linalg::mat2(z, c(0.0, -mu), c(0.0, -mu), z));
}

#[test]
fn coarse_grained_coefficients() {
    let params = DihedralParams::generic(0.7, 0.4, 0.3, -1, 1, 1).unwrap();
    let walk = make_dihedral_walk(&params);
    let z = params.scalars();
    let mw = to_momentum(&coarse_grain(&walk, &default_tiling(walk.graph()).unwrap()).unwrap()).unwrap();
    assert_eq!(mw.coefficient(&[1]).unwrap(), &linalg::mat2(z[0], z[2], z[3], z[1]));
    assert_eq!(mw.coefficient(&[-1]).unwrap(), &linalg::mat2(z[1], z[3], z[2], z[0]));
    assert_eq!(mw.coefficient(&[0]).unwrap(), &linalg::mat2(z[5], z[4], z[4], z[5]));
}

#[test]
fn weyl_dispersion_is_abs_k() {
    let data = dispersion(&to_momentum(&make_weyl()).unwrap(), 1024).unwrap();
    for (i, &k) in data.k.iter().enumerate() {
        assert!((data.branches[0][i] - k.abs()).abs() < 1e-12);
        assert!((data.branches[1][i] + k.abs()).abs() < 1e-12);
    }
}

#[test]
fn parity_class_endpoints() {
    let mw = to_momentum(&parity_class_walk(0.98, 0.02).unwrap()).unwrap();
    let data = dispersion(&mw, 1024).unwrap();
    assert!(data.branches[0][data.index_of(0.0)].abs() < 1e-7);
    let a_pi = mw.at1(PI);
    assert!((linalg::det2(&a_pi) - linalg::ONE).norm() < 1e-12);
    let at_pi = linalg::eigenvalues(&a_pi)[0].arg().abs();
    assert!((at_pi - (-0.96f64).acos()).abs() < 1e-9);
    assert!((data.branches[0][0] - at_pi).abs() < 1e-9);
}

#[test]
fn dirac_eigenphases_at_zero() {
    let mw = to_momentum(&make_dirac(0.8, 0.6, 1).unwrap()).unwrap();
    let ev = linalg::eigenvalues(&mw.at1(0.0));
    let mut phases: Vec<f64> = ev.iter().map(|z| z.arg()).collect();
    phases.sort_by(f64::total_cmp);
    let w = 0.8f64.acos();
    assert!((phases[0] + w).abs() < 1e-12 && (phases[1] - w).abs() < 1e-12);
    assert!(make_dirac(0.5, 0.5, 1).is_err());
    assert!(make_dirac(0.8, 0.6, 0).is_err());
}

#[test]
fn massless_dirac_is_weyl() {
    let a = to_momentum(&make_dirac(1.0, 0.0, 1).unwrap()).unwrap();
    let b = to_momentum(&make_weyl()).unwrap();
    for k in brillouin_grid(32) {
        assert!((a.at1(k) - b.at1(k)).norm() < 1e-15);
    }
}

#[test]
fn velocities() {
    let weyl = dispersion(&to_momentum(&make_weyl()).unwrap(), 1024).unwrap();
    let i = weyl.index_of(0.5);
    assert!((weyl.group_velocity(0)[i].unwrap() - 1.0).abs() < 1e-9);
    assert!(weyl.diffusion_coefficient(0)[i].unwrap().abs() < 1e-9);
    // the crossing at k = 0 is flagged rather than differentiated
    assert!(weyl.group_velocity(0)[weyl.index_of(0.0)].is_none());

    let nu: f64 = 0.8;
    let dirac = dispersion(&to_momentum(&make_dirac(nu, 0.6, 1).unwrap()).unwrap(), 4096).unwrap();
    let v = dirac.group_velocity(0);
    assert!(v[dirac.index_of(0.0)].unwrap().abs() < 1e-12);
    let k = dirac.k[dirac.index_of(PI / 2.0)];
    let exact = nu * k.sin() / (1.0 - (nu * k.cos()).powi(2)).sqrt();
    assert!((v[dirac.index_of(PI / 2.0)].unwrap() - exact).abs() < 1e-6);
}

#[test]
fn second_order_convergence() {
    let nu: f64 = 0.6;
    let mw = to_momentum(&make_dirac(nu, 0.8, 1).unwrap()).unwrap();
    let err = |n: usize| {
        let data = dispersion(&mw, n).unwrap();
        let i = data.index_of(1.0);
        let k = data.k[i];
        let d1 = nu * k.sin() / (1.0 - (nu * k.cos()).powi(2)).sqrt();
        (data.group_velocity(0)[i].unwrap() - d1).abs()
    };
    // grids sharing the point nearest k = 1 only approximately, so compare
    // error ratios loosely around 4
    let (e1, e2) = (err(512), err(1024));
    assert!(e1 / e2 > 3.0, "{e1} {e2}");
}

#[test]
fn non_unitary_symbol_is_refused() {
    let mw = MomentumWalk::new(1, 1, vec![(vec![1], linalg::scalar(c(0.5, 0.0)))]).unwrap();
    assert!(matches!(dispersion(&mw, 64), Err(Error::NotUnitary(_))));
}

fn tiling(m: i64, mp: i64) -> CosetTiling {
    CosetTiling::new(GroupFamily::InfiniteDihedral, m, mp).unwrap()
}

#[test]
fn massless_half_half_symbol() {
    let params = DihedralParams::massless(0.5, 0.5, 1, 1).unwrap();
    let cg = coarse_grain(&make_dihedral_walk(&params), &tiling(0, 0)).unwrap();
    let mw = to_momentum(&cg).unwrap();
    for k in brillouin_grid(32) {
        let expect = linalg::mat2(c(k.cos(), 0.0), c(k.sin(), 0.0), c(-k.sin(), 0.0), c(k.cos(), 0.0));
        assert!((mw.at1(k) - expect).norm() < 1e-15);
    }
}

#[test]
fn long_rotation_is_refused() {
    let graph = CayleyGraph::from_words(
        GroupFamily::InfiniteDihedral,
        &[("a2", "a^2"), ("a_inv", "a^-1"), ("b", "a r"), ("c", "a^-1 r")],
    )
    .unwrap();
    let walk = QuantumWalk::scalar(graph, &[c(0.5, 0.0); 4]).unwrap();
    assert!(matches!(
        coarse_grain(&walk, &tiling(0, 0)),
        Err(Error::CoordinationTooLarge(2))
    ));
}

#[test]
fn equivalence_from_a_delta() {
    let params = DihedralParams::generic(0.8, 0.2, 0.5, 1, 1, 1).unwrap();
    let cg = CoarseGraining::new(&make_dihedral_walk(&params), &tiling(0, 0)).unwrap();
    let rep = verify_equivalence(&cg, &GroupFamily::InfiniteDihedral.identity(), 20).unwrap();
    assert!(rep.max_deviation <= 1e-12);
}

#[test]
fn site_local_walk_matches_exactly() {
    let (alpha, beta) = (0.6, 0.8);
    let z = [linalg::ZERO, linalg::ZERO, linalg::ZERO, linalg::ZERO, c(0.0, beta), c(alpha, 0.0)];
    let walk = QuantumWalk::scalar(full_dihedral_graph(), &z).unwrap();
    let cg = CoarseGraining::new(&walk, &tiling(0, 0)).unwrap();
    let rep = verify_equivalence(&cg, &GroupFamily::InfiniteDihedral.dihedral(1, true).unwrap(), 10).unwrap();
    assert_eq!(rep.max_deviation, 0.0);
}

#[test]
fn spectra_do_not_depend_on_representatives() {
    let params = DihedralParams::no_reflection(0.35, 0.4, -1, 1).unwrap();
    let walk = make_dihedral_walk(&params);
    let base = to_momentum(CoarseGraining::new(&walk, &tiling(0, 0)).unwrap().result()).unwrap();
    let shifted = to_momentum(CoarseGraining::new(&walk, &tiling(0, 2)).unwrap().result()).unwrap();
    assert_ne!(base.terms(), shifted.terms());
    for k in brillouin_grid(256) {
        assert!((half_gap(&base.at1(k)) - half_gap(&shifted.at1(k))).abs() < 1e-10);
        let d1 = linalg::det2(&base.at1(k));
        let d2 = linalg::det2(&shifted.at1(k));
        assert!((d1 - d2).norm() < 1e-10);
    }
}

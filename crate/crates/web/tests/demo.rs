use qwalk_web::*;

#[test]
fn curve_matches_closed_form() {
    let c = dispersion_curve_impl(0.36, 0.64, 256).unwrap();
    assert_eq!(c.k().len(), 256);
    assert!(c.max_error() < 1e-9);
    assert!(dispersion_curve_impl(0.9, 0.9, 64).is_err());
}

#[test]
fn evolution_is_normalised_and_local() {
    let d = evolve_family_impl("generic", 0.8, 0.2, 0.5, 1, 1, 1, 10).unwrap();
    let total: f64 = d.probabilities().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    for (x, p) in d.positions().iter().zip(d.probabilities()) {
        if x.abs() > 10.0 {
            assert_eq!(p, 0.0);
        }
    }
    assert_eq!(d.scalars().len(), 12);
}

#[test]
fn implied_parameters_follow_the_case() {
    let p = family_params("no-stay", 0.3, 0.9, 0.4, 1, -1, 1).unwrap();
    assert_eq!((p.q(), p.signs().1), (0.3, 1));
    assert!(family_params("generic", 0.2, 0.8, 0.5, 1, 1, 1).is_err());
    assert!(family_params("nonsense", 0.2, 0.8, 0.5, 1, 1, 1).is_err());
}

#[test]
fn probes_separate_family_from_hadamard() {
    let fam = probe_family_impl("no-reflection", 0.35, 0.0, 0.4, -1, 0, 1).unwrap();
    assert!(fam.parity_found() && fam.in_class());
    assert_eq!(fam.canonical().len(), 4);
    let h = probe_hadamard_impl().unwrap();
    assert!(!h.parity_found() && !h.in_class());
    assert!(h.canonical().is_empty());
}

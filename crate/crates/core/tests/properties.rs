mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use qwalk_core::coarse_grain::{coarse_grain, CoarseGraining};
use qwalk_core::dihedral::{check_admissible, dispersion_params, make_dihedral_walk, SolutionCase};
use qwalk_core::groups::default_tiling;
use qwalk_core::linalg;
use qwalk_core::momentum::to_momentum;
use qwalk_core::solver::{solve_unitarity, SolverConfig};
use qwalk_core::walk::{check_quadrangularity, check_unitarity, evolve, Lattice, LatticeState};
use qwalk_core::{CayleyGraph, CosetTiling, GroupElement, GroupFamily, QuantumWalk};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dihedral(n: i64, r: bool) -> GroupElement {
    GroupFamily::InfiniteDihedral.dihedral(n, r).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn element() -> impl Strategy<Value = GroupElement> {
    (-20i64..20, any::<bool>()).prop_map(|(n, r)| dihedral(n, r))
}

fn family_walk(seed: u64, case: usize) -> (QuantumWalk, qwalk_core::dihedral::DihedralParams) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge = seed.is_multiple_of(5);
    let params = common::random_params(&mut rng, SolutionCase::ALL[case], edge);
    (make_dihedral_walk(&params), params)
}

proptest! {
    #[test]
    fn dihedral_product_is_associative(x in element(), y in element(), z in element()) {
        let left = x.compose(&y).unwrap().compose(&z).unwrap();
        let right = x.compose(&y.compose(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dihedral_relations(n in -20i64..20) {
        let a = dihedral(1, false);
        let r = dihedral(0, true);
        let e = GroupFamily::InfiniteDihedral.identity();
        prop_assert_eq!(r.compose(&r).unwrap(), e.clone());
        // r a r = a^-1
        prop_assert_eq!(r.compose(&a).unwrap().compose(&r).unwrap(), a.inverse());
        let g = a.pow(n);
        prop_assert_eq!(g.compose(&g.inverse()).unwrap(), e);
        prop_assert_eq!(g.compose(&r).unwrap(), dihedral(n, true));
    }

    #[test]
    fn abelian_product_commutes(x in prop::collection::vec(-9i64..9, 3), y in prop::collection::vec(-9i64..9, 3)) {
        let fam = GroupFamily::finite_abelian_times_free(vec![3], 2).unwrap();
        let (g, h) = (fam.element(&x).unwrap(), fam.element(&y).unwrap());
        prop_assert_eq!(g.compose(&h).unwrap(), h.compose(&g).unwrap());
    }

    #[test]
    fn tiling_decomposition_is_unique(m in -4i64..4, mp in -4i64..4, g in element()) {
        let tiling = CosetTiling::new(GroupFamily::InfiniteDihedral, m, mp).unwrap();
        let (x, j) = tiling.decompose(&g).unwrap();
        prop_assert_eq!(tiling.compose_from(x, j), g.clone());
        for (y, k) in [(x + 1, j), (x - 1, j), (x, 1 - j)] {
            prop_assert_ne!(tiling.compose_from(y, k), g.clone());
        }
    }

    #[test]
    fn tau_permutes_the_cosets(seed in any::<u64>(), case in 0usize..4, m in -3i64..3, mp in -3i64..3) {
        let (walk, _) = family_walk(seed, case);
        let tiling = CosetTiling::new(GroupFamily::InfiniteDihedral, m, mp).unwrap();
        let cg = CoarseGraining::new(&walk, &tiling).unwrap();
        for label in walk.graph().labels() {
            let mut image = [cg.tau(label, 0).unwrap(), cg.tau(label, 1).unwrap()];
            image.sort();
            prop_assert_eq!(image, [0, 1]);
        }
    }

    #[test]
    fn family_walks_are_unitary(seed in any::<u64>(), case in 0usize..4) {
        let (walk, _) = family_walk(seed, case);
        prop_assert!(check_unitarity(&walk, 1e-12).passed());
    }

    #[test]
    fn evolution_keeps_the_norm(seed in any::<u64>(), case in 0usize..4) {
        let (walk, _) = family_walk(seed, case);
        let lattice = Lattice::new(GroupFamily::InfiniteDihedral, 2 * 100 + 8).unwrap();
        let state = LatticeState::delta(lattice, 1, &dihedral(0, false), 0).unwrap();
        let out = evolve(&walk, &state, 100).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symbol_is_unitary_where_the_walk_is(seed in any::<u64>(), case in 0usize..4, k in -PI..PI) {
        let (walk, _) = family_walk(seed, case);
        let cg = coarse_grain(&walk, &default_tiling(walk.graph()).unwrap()).unwrap();
        let a = to_momentum(&cg).unwrap().at1(k);
        let eye = linalg::identity(2);
        prop_assert!(linalg::max_abs(&(&a * a.adjoint() - &eye)) < 1e-12);
        for z in linalg::eigenvalues(&a) {
            prop_assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dispersion_is_bounded_and_smallest_at_zero(seed in any::<u64>(), case in 0usize..4, k in -PI..PI) {
        let (walk, _) = family_walk(seed, case);
        let cg = coarse_grain(&walk, &default_tiling(walk.graph()).unwrap()).unwrap();
        let (delta, gamma) = dispersion_params(&cg, 1e-9).unwrap();
        prop_assert!((delta + gamma).abs() <= 1.0 + 1e-9);
        prop_assert!((delta - gamma).abs() <= 1.0 + 1e-9);
        let omega = |k: f64| (delta * k.cos() + gamma).clamp(-1.0, 1.0).acos();
        prop_assert!(omega(k) >= omega(0.0) - 1e-12);
    }

    #[test]
    fn relabelled_reflections_stay_admissible(j in -5i64..5, with_d in any::<bool>(), with_e in any::<bool>()) {
        let mut gens = vec![
            ("a".to_string(), dihedral(1, false)),
            ("a_inv".to_string(), dihedral(-1, false)),
            ("b".to_string(), dihedral(1 + j, true)),
            ("c".to_string(), dihedral(-1 + j, true)),
        ];
        if with_d {
            gens.push(("d".into(), dihedral(j, true)));
        }
        if with_e {
            gens.push(("e".into(), dihedral(0, false)));
        }
        let graph = CayleyGraph::new(GroupFamily::InfiniteDihedral, gens).unwrap();
        prop_assert!(check_admissible(&graph).unwrap().is_admissible());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Shift sets on Z with a lone extremal difference carry no walk in which
    /// every generator has a nonzero amplitude.
    #[test]
    fn lone_differences_force_zero_amplitudes(shifts in prop::collection::btree_set(-4i64..=4, 2..4)) {
        let words: Vec<(String, String)> = shifts
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let label = if s == 0 { "e".to_string() } else { format!("g{i}") };
                (label, format!("t^{s}"))
            })
            .collect();
        prop_assume!(shifts.iter().fold(0, |g, &s| gcd(g, s)) == 1);
        let refs: Vec<(&str, &str)> = words.iter().map(|(l, w)| (l.as_str(), w.as_str())).collect();
        let graph = CayleyGraph::from_words(GroupFamily::FreeAbelian(1), &refs).unwrap();
        prop_assert!(!check_quadrangularity(&graph).passed());
        let config = SolverConfig { starts: 24, ..SolverConfig::default() };
        for sol in solve_unitarity(&graph, &config).solutions {
            prop_assert!(sol.scalars.iter().any(|z| z.norm() < 1e-6), "{:?}", sol.scalars);
        }
    }
}

//! Walk data model, unitarity and quadrangularity checks, and real-space
//! evolution on truncated lattices.
//!
//! The walk operator is `A = sum_h T_h (x) A_h` with `T_g |x> = |x g^-1>`, so
//! one step reads `psi'(g) = sum_h A_h psi(g h)`. On `Z` with the single
//! generator `+1` this moves amplitude from site `x` to site `x - 1`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{CayleyGraph, GroupElement, GroupFamily};
use crate::linalg::{self, CMatrix};

/// A quantum walk: one `s x s` transition matrix per generator.
///
/// Zero matrices are allowed; walks produced by constraint solving or by
/// coarse-graining can legitimately carry vanishing amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumWalk {
    graph: CayleyGraph,
    coin_dim: usize,
    transitions: Vec<CMatrix>,
}

impl QuantumWalk {
    pub fn new(graph: CayleyGraph, coin_dim: usize, transitions: Vec<CMatrix>) -> Result<Self> {
        if coin_dim == 0 {
            return Err(Error::Dimension("coin dimension must be positive".into()));
        }
        if transitions.len() != graph.len() {
            return Err(Error::Dimension(format!(
                "{} generators but {} transition matrices",
                graph.len(),
                transitions.len()
            )));
        }
        for (g, m) in graph.generators().iter().zip(&transitions) {
            if m.nrows() != coin_dim || m.ncols() != coin_dim {
                return Err(Error::Dimension(format!(
                    "transition `{}` is {}x{}, expected {coin_dim}x{coin_dim}",
                    g.label,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(QuantumWalk {
            graph,
            coin_dim,
            transitions,
        })
    }

    /// Scalar walk with one transition amplitude per generator.
    pub fn scalar(graph: CayleyGraph, amplitudes: &[Complex64]) -> Result<Self> {
        let mats = amplitudes.iter().map(|&z| linalg::scalar(z)).collect();
        QuantumWalk::new(graph, 1, mats)
    }

    pub fn graph(&self) -> &CayleyGraph {
        &self.graph
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    pub fn transitions(&self) -> &[CMatrix] {
        &self.transitions
    }

    pub fn transition(&self, label: &str) -> Option<&CMatrix> {
        self.graph.position(label).map(|i| &self.transitions[i])
    }

    pub fn is_scalar(&self) -> bool {
        self.coin_dim == 1
    }

    /// Transition scalars, for `s = 1`.
    pub fn scalars(&self) -> Option<Vec<Complex64>> {
        self.is_scalar()
            .then(|| self.transitions.iter().map(|m| m[(0, 0)]).collect())
    }

    /// Labels of generators whose transition matrix vanishes within `tol`.
    pub fn zero_generators(&self, tol: f64) -> Vec<&str> {
        self.graph
            .generators()
            .iter()
            .zip(&self.transitions)
            .filter(|(_, m)| linalg::is_zero(m, tol))
            .map(|(g, _)| g.label.as_str())
            .collect()
    }

    /// Iterator over `(element, matrix)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &CMatrix)> {
        self.graph
            .generators()
            .iter()
            .map(|g| &g.element)
            .zip(&self.transitions)
    }
}

/// Residuals of the unitarity conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarityReport {
    /// Max over `g != e` of `|sum_{h h'^-1 = g} A_h A_h'^dagger|`.
    pub left_residual: f64,
    /// Max over `g != e` of `|sum_{h^-1 h' = g} A_h^dagger A_h'|`.
    pub right_residual: f64,
    /// `|sum_h A_h A_h^dagger - I|` and `|sum_h A_h^dagger A_h - I|`.
    pub normalization_residual: f64,
    /// Element carrying the largest off-diagonal residual.
    pub worst_element: Option<GroupElement>,
    pub tol: f64,
}

impl UnitarityReport {
    pub fn max_residual(&self) -> f64 {
        self.left_residual
            .max(self.right_residual)
            .max(self.normalization_residual)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tol
    }
}

/// Evaluates the unitarity conditions of `walk`. Entries are compared with
/// the max-modulus norm.
pub fn check_unitarity(walk: &QuantumWalk, tol: f64) -> UnitarityReport {
    let s = walk.coin_dim();
    let terms: Vec<(&GroupElement, &CMatrix)> = walk.terms().collect();
    let mut left: HashMap<GroupElement, CMatrix> = HashMap::new();
    let mut right: HashMap<GroupElement, CMatrix> = HashMap::new();
    let mut norm_left = linalg::zeros(s);
    let mut norm_right = linalg::zeros(s);
    for (h, a) in &terms {
        norm_left += *a * a.adjoint();
        norm_right += a.adjoint() * *a;
        for (h2, b) in &terms {
            if h == h2 {
                continue;
            }
            let g = h.mul(&h2.inverse());
            *left.entry(g).or_insert_with(|| linalg::zeros(s)) += *a * b.adjoint();
            let g = h.inverse().mul(h2);
            *right.entry(g).or_insert_with(|| linalg::zeros(s)) += a.adjoint() * *b;
        }
    }
    let l = worst(&left);
    let r = worst(&right);
    let id = linalg::identity(s);
    let normalization_residual =
        linalg::max_abs(&(norm_left - &id)).max(linalg::max_abs(&(norm_right - &id)));
    let worst_element = match (l, r) {
        (Some(a), Some(b)) => Some(if a.0 >= b.0 { a.1 } else { b.1 }.clone()),
        (Some(a), None) => Some(a.1.clone()),
        (None, Some(b)) => Some(b.1.clone()),
        (None, None) => None,
    };
    UnitarityReport {
        left_residual: l.map_or(0.0, |x| x.0),
        right_residual: r.map_or(0.0, |x| x.0),
        normalization_residual,
        worst_element,
        tol,
    }
}

fn worst(map: &HashMap<GroupElement, CMatrix>) -> Option<(f64, &GroupElement)> {
    map.iter()
        .map(|(g, m)| (linalg::max_abs(m), g))
        .max_by(|x, y| x.0.total_cmp(&y.0))
}

/// Outcome of the quadrangularity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadrangularity {
    /// First ordered pair `(h1, h2)` whose quotient `h1 h2^-1` no other pair realises.
    pub witness: Option<(String, String)>,
}

impl Quadrangularity {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that every ordered pair of distinct generators shares its quotient
/// `h1 h2^-1` with some other ordered pair.
pub fn check_quadrangularity(graph: &CayleyGraph) -> Quadrangularity {
    let gens = graph.generators();
    let mut counts: HashMap<GroupElement, usize> = HashMap::new();
    let mut pairs = Vec::new();
    for (i, h1) in gens.iter().enumerate() {
        for (j, h2) in gens.iter().enumerate() {
            if i != j {
                let q = h1.element.mul(&h2.element.inverse());
                *counts.entry(q.clone()).or_default() += 1;
                pairs.push((i, j, q));
            }
        }
    }
    let witness = pairs
        .into_iter()
        .find(|(_, _, q)| counts[q] < 2)
        .map(|(i, j, _)| (gens[i].label.clone(), gens[j].label.clone()));
    Quadrangularity { witness }
}

/// Finite position space used for evolution.
///
/// Infinite families are truncated periodically: every free coordinate (and
/// the rotation exponent of `D_inf`) is taken modulo `ring`. Positions are
/// centred, so index `i` along a free axis stands for coordinate
/// `i - ring / 2`. Dihedral sites are laid out as `(position, coset bit)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    family: GroupFamily,
    ring: usize,
}

impl Lattice {
    pub fn new(family: GroupFamily, ring: usize) -> Result<Self> {
        family.validate()?;
        if !family.is_finite() && ring < 3 {
            return Err(Error::Dimension(format!("ring size {ring} is too small (need >= 3)")));
        }
        Ok(Lattice { family, ring })
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn ring(&self) -> usize {
        self.ring
    }

    fn radices(&self) -> Vec<usize> {
        match &self.family {
            GroupFamily::FreeAbelian(d) => vec![self.ring; *d],
            GroupFamily::FiniteAbelianTimesFree { orders, rank } => orders
                .iter()
                .map(|&o| o as usize)
                .chain(std::iter::repeat_n(self.ring, *rank))
                .collect(),
            GroupFamily::InfiniteDihedral => vec![self.ring, 2],
            GroupFamily::FiniteDihedral(n) => vec![*n as usize, 2],
        }
    }

    /// Which normal-form coordinates are truncated to the ring.
    fn ring_axes(&self) -> Vec<bool> {
        match &self.family {
            GroupFamily::FreeAbelian(d) => vec![true; *d],
            GroupFamily::FiniteAbelianTimesFree { orders, rank } => {
                let mut v = vec![false; orders.len()];
                v.extend(std::iter::repeat_n(true, *rank));
                v
            }
            GroupFamily::InfiniteDihedral => vec![true, false],
            GroupFamily::FiniteDihedral(_) => vec![false, false],
        }
    }

    pub fn num_sites(&self) -> usize {
        self.radices().iter().product()
    }

    fn offset(&self) -> i64 {
        (self.ring / 2) as i64
    }

    /// Index of the site holding `g` (reduced onto the truncated lattice).
    pub fn site_index(&self, g: &GroupElement) -> usize {
        let radices = self.radices();
        let axes = self.ring_axes();
        let mut idx = 0usize;
        for ((&c, &radix), &on_ring) in g.coords().iter().zip(&radices).zip(&axes) {
            let digit = if on_ring {
                (c + self.offset()).rem_euclid(radix as i64)
            } else {
                c.rem_euclid(radix as i64)
            };
            idx = idx * radix + digit as usize;
        }
        idx
    }

    fn digits(&self, mut idx: usize) -> Vec<i64> {
        let radices = self.radices();
        let axes = self.ring_axes();
        let mut coords = vec![0i64; radices.len()];
        for k in (0..radices.len()).rev() {
            let digit = (idx % radices[k]) as i64;
            idx /= radices[k];
            coords[k] = if axes[k] { digit - self.offset() } else { digit };
        }
        coords
    }

    /// Representative group element of a site.
    pub fn site_element(&self, idx: usize) -> GroupElement {
        self.family.element(&self.digits(idx)).expect("lattice digits are in range")
    }

    /// Position label and sublattice (coset bit for dihedral families, else 0).
    pub fn site_label(&self, idx: usize) -> (String, usize) {
        let coords = self.digits(idx);
        if self.family.is_dihedral() {
            (coords[0].to_string(), coords[1] as usize)
        } else {
            let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
            (parts.join(";"), 0)
        }
    }

    pub fn sublattices(&self) -> usize {
        if self.family.is_dihedral() {
            2
        } else {
            1
        }
    }

    /// Spread of the nonzero sites along the truncated axes.
    fn support_width(&self, occupied: impl Iterator<Item = usize>) -> usize {
        let axes = self.ring_axes();
        let mut lo = vec![i64::MAX; axes.len()];
        let mut hi = vec![i64::MIN; axes.len()];
        let mut any = false;
        for idx in occupied {
            any = true;
            for (k, c) in self.digits(idx).into_iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        if !any {
            return 0;
        }
        (0..axes.len())
            .filter(|&k| axes[k])
            .map(|k| (hi[k] - lo[k] + 1) as usize)
            .max()
            .unwrap_or(0)
    }
}

/// Amplitudes over a truncated lattice, `coin_dim` components per site.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    lattice: Lattice,
    coin_dim: usize,
    amplitudes: Vec<Complex64>,
}

impl LatticeState {
    pub fn zeros(lattice: Lattice, coin_dim: usize) -> Self {
        let n = lattice.num_sites() * coin_dim;
        LatticeState {
            lattice,
            coin_dim,
            amplitudes: vec![linalg::ZERO; n],
        }
    }

    /// Unit amplitude on one site and coin component.
    pub fn delta(lattice: Lattice, coin_dim: usize, site: &GroupElement, component: usize) -> Result<Self> {
        if component >= coin_dim {
            return Err(Error::Dimension(format!(
                "component {component} out of range for coin dimension {coin_dim}"
            )));
        }
        if site.family() != lattice.family() {
            return Err(Error::FamilyMismatch(
                lattice.family().to_string(),
                site.family().to_string(),
            ));
        }
        let mut st = LatticeState::zeros(lattice, coin_dim);
        let idx = st.lattice.site_index(site);
        st.amplitudes[idx * coin_dim + component] = linalg::ONE;
        Ok(st)
    }

    pub fn from_amplitudes(lattice: Lattice, coin_dim: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != lattice.num_sites() * coin_dim {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {} sites x {coin_dim} components",
                amplitudes.len(),
                lattice.num_sites()
            )));
        }
        Ok(LatticeState {
            lattice,
            coin_dim,
            amplitudes,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, site: &GroupElement, component: usize) -> Complex64 {
        self.amplitudes[self.lattice.site_index(site) * self.coin_dim + component]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for z in &mut self.amplitudes {
                *z /= n;
            }
        }
    }

    /// Probability per site with the coin traced out.
    pub fn position_distribution(&self) -> Vec<f64> {
        self.amplitudes
            .chunks(self.coin_dim)
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }

    /// `(site, component, prob)` rows. On dihedral lattices the coset bit is
    /// folded into the component index as `bit * s + coin`.
    pub fn component_rows(&self) -> Vec<(String, usize, f64)> {
        let s = self.coin_dim;
        let mut rows = Vec::with_capacity(self.amplitudes.len());
        for idx in 0..self.lattice.num_sites() {
            let (label, bit) = self.lattice.site_label(idx);
            for c in 0..s {
                rows.push((label.clone(), bit * s + c, self.amplitudes[idx * s + c].norm_sqr()));
            }
        }
        rows
    }

    fn occupied_sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.amplitudes
            .chunks(self.coin_dim)
            .enumerate()
            .filter(|(_, c)| c.iter().any(|z| *z != linalg::ZERO))
            .map(|(i, _)| i)
    }
}

/// Largest shift of position a single generator can cause along a truncated axis.
fn max_displacement(walk: &QuantumWalk) -> usize {
    let fam = walk.graph().family();
    walk.graph()
        .generators()
        .iter()
        .map(|g| {
            if fam.is_dihedral() {
                g.element.coords()[0].unsigned_abs() as usize
            } else {
                g.element
                    .free_part()
                    .unwrap_or(&[])
                    .iter()
                    .map(|c| c.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0)
            }
        })
        .max()
        .unwrap_or(0)
}

/// Applies the walk `steps` times, refusing if the wavefront could wrap
/// around a truncated axis.
pub fn evolve(walk: &QuantumWalk, state: &LatticeState, steps: usize) -> Result<LatticeState> {
    if !state.lattice.family().is_finite() {
        let width = state.lattice.support_width(state.occupied_sites());
        let needed = 2 * steps * max_displacement(walk) + width;
        if state.lattice.ring() <= needed {
            return Err(Error::WavefrontWrap {
                needed,
                ring: state.lattice.ring(),
            });
        }
    }
    evolve_periodic(walk, state, steps)
}

/// Applies the walk `steps` times on the periodic lattice, wrapping freely.
pub fn evolve_periodic(walk: &QuantumWalk, state: &LatticeState, steps: usize) -> Result<LatticeState> {
    let lattice = &state.lattice;
    if walk.graph().family() != lattice.family() {
        return Err(Error::FamilyMismatch(
            walk.graph().family().to_string(),
            lattice.family().to_string(),
        ));
    }
    let s = walk.coin_dim();
    if s != state.coin_dim {
        return Err(Error::Dimension(format!(
            "walk coin dimension {s} but state coin dimension {}",
            state.coin_dim
        )));
    }
    let n = lattice.num_sites();
    // neighbours[site][gen] = index of site * gen
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let g = lattice.site_element(i);
            walk.graph()
                .generators()
                .iter()
                .map(|h| lattice.site_index(&g.mul(&h.element)))
                .collect()
        })
        .collect();
    let mut cur = state.amplitudes.clone();
    let mut next = vec![linalg::ZERO; cur.len()];
    for _ in 0..steps {
        next.iter_mut().for_each(|z| *z = linalg::ZERO);
        for (i, nb) in neighbours.iter().enumerate() {
            let out = &mut next[i * s..(i + 1) * s];
            for (m, &j) in walk.transitions().iter().zip(nb) {
                let src = &cur[j * s..(j + 1) * s];
                for r in 0..s {
                    let mut acc = linalg::ZERO;
                    for c in 0..s {
                        acc += m[(r, c)] * src[c];
                    }
                    out[r] += acc;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(LatticeState {
        lattice: lattice.clone(),
        coin_dim: s,
        amplitudes: cur,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn line(gens: &[(&str, &str)]) -> CayleyGraph {
        CayleyGraph::from_words(GroupFamily::FreeAbelian(1), gens).unwrap()
    }

    fn z1(x: i64) -> GroupElement {
        GroupFamily::FreeAbelian(1).element(&[x]).unwrap()
    }

    #[test]
    fn monoidal_walk_is_unitary_and_shifts_left() {
        let theta = 0.7;
        let walk = QuantumWalk::scalar(line(&[("p", "t")]), &[linalg::cis(-theta)]).unwrap();
        let rep = check_unitarity(&walk, 1e-10);
        assert!(rep.passed());
        assert_eq!(rep.max_residual(), 0.0);

        let lat = Lattice::new(GroupFamily::FreeAbelian(1), 8).unwrap();
        let st = LatticeState::delta(lat, 1, &z1(0), 0).unwrap();
        let out = evolve(&QuantumWalk::scalar(line(&[("p", "t")]), &[linalg::ONE]).unwrap(), &st, 1).unwrap();
        assert_eq!(out.amplitude(&z1(-1), 0), linalg::ONE);
    }

    #[test]
    fn square_graph_walk_is_unitary() {
        let v4 = GroupFamily::finite_abelian_times_free(vec![2, 2], 0).unwrap();
        let g = CayleyGraph::from_words(v4, &[("g1", "g1"), ("g2", "g2")]).unwrap();
        let w = QuantumWalk::scalar(g, &[c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        assert!(check_unitarity(&w, 1e-12).passed());
    }

    #[test]
    fn symmetric_line_walk_fails() {
        let w = QuantumWalk::scalar(
            line(&[("p", "t"), ("m", "t^-1")]),
            &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        )
        .unwrap();
        let rep = check_unitarity(&w, 1e-10);
        assert!(!rep.passed());
        assert!((rep.left_residual - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadrangularity_examples() {
        let full_graph = CayleyGraph::from_words(
            GroupFamily::InfiniteDihedral,
            &[("a", "a"), ("a_inv", "a^-1"), ("b", "a r"), ("c", "a^-1 r"), ("d", "r")],
        )
        .unwrap();
        assert!(check_quadrangularity(&full_graph).passed());
        let n = 3;
        let refl = CayleyGraph::new(
            GroupFamily::InfiniteDihedral,
            vec![
                ("e".into(), GroupFamily::InfiniteDihedral.identity()),
                ("h0".into(), GroupFamily::InfiniteDihedral.dihedral(n - 1, true).unwrap()),
                ("h1".into(), GroupFamily::InfiniteDihedral.dihedral(n, true).unwrap()),
                ("h2".into(), GroupFamily::InfiniteDihedral.dihedral(n + 1, true).unwrap()),
            ],
        )
        .unwrap();
        assert!(check_quadrangularity(&refl).witness.is_some());
        assert!(check_quadrangularity(&line(&[("p", "t")])).passed());
    }

    #[test]
    fn dimension_errors() {
        let g = line(&[("p", "t")]);
        assert!(QuantumWalk::new(g.clone(), 2, vec![linalg::identity(3)]).is_err());
        assert!(QuantumWalk::new(g.clone(), 1, vec![]).is_err());
        let walk = QuantumWalk::scalar(g, &[linalg::ONE]).unwrap();
        let lat = Lattice::new(GroupFamily::FreeAbelian(1), 8).unwrap();
        let st = LatticeState::zeros(lat, 2);
        assert!(matches!(evolve(&walk, &st, 1), Err(Error::Dimension(_))));
    }

    #[test]
    fn wrap_guard() {
        let walk = QuantumWalk::scalar(line(&[("p", "t")]), &[linalg::ONE]).unwrap();
        let lat = Lattice::new(GroupFamily::FreeAbelian(1), 8).unwrap();
        let st = LatticeState::delta(lat, 1, &z1(0), 0).unwrap();
        assert!(matches!(evolve(&walk, &st, 4), Err(Error::WavefrontWrap { .. })));
        let wrapped = evolve_periodic(&walk, &st, 8).unwrap();
        assert_eq!(wrapped.amplitude(&z1(0), 0), linalg::ONE);
    }

    #[test]
    fn distributions() {
        let lat = Lattice::new(GroupFamily::FreeAbelian(1), 6).unwrap();
        let st = LatticeState::delta(lat.clone(), 1, &z1(0), 0).unwrap();
        let dist = st.position_distribution();
        assert_eq!(dist[lat.site_index(&z1(0))], 1.0);
        assert_eq!(dist.iter().sum::<f64>(), 1.0);

        let mut amps = vec![linalg::ZERO; 6];
        amps[lat.site_index(&z1(0))] = c(FRAC_1_SQRT_2, 0.0);
        amps[lat.site_index(&z1(1))] = c(0.0, FRAC_1_SQRT_2);
        let st = LatticeState::from_amplitudes(lat.clone(), 1, amps).unwrap();
        let dist = st.position_distribution();
        assert!((dist[lat.site_index(&z1(0))] - 0.5).abs() < 1e-15);
        assert!((dist[lat.site_index(&z1(1))] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lattice_indexing_round_trips() {
        for fam in [
            GroupFamily::FreeAbelian(2),
            GroupFamily::finite_abelian_times_free(vec![2, 3], 1).unwrap(),
            GroupFamily::InfiniteDihedral,
            GroupFamily::finite_dihedral(5).unwrap(),
        ] {
            let lat = Lattice::new(fam, 7).unwrap();
            for i in 0..lat.num_sites() {
                assert_eq!(lat.site_index(&lat.site_element(i)), i);
            }
        }
    }
}

//! Scalar walks on infinite Abelian groups `F x Z^d` with `F` finite.
//!
//! Characters of `F` split the walk into blocks, one per index tuple `j`,
//! each a scalar walk on `Z^d` with effective scalars
//! `z_h(j) = sum_f z_(f,h) exp(2 pi i sum_l j_l f_l / i_l)`. Unitarity then
//! forces a single surviving shift per block: take a pair of shifts whose
//! difference has maximal length, observe that no other pair realises that
//! difference, conclude one of the two scalars vanishes, drop it, repeat.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{CayleyGraph, GroupFamily};
use crate::linalg;
use crate::solver::{self, SolverConfig, SolverOutcome};
use crate::walk::{check_unitarity, LatticeState, QuantumWalk};

/// One character sector of a scalar Abelian walk.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterBlock {
    /// Character index `j`, entries in `1..=i_l`.
    pub index: Vec<u64>,
    /// Distinct free parts of the generators, in lexicographic order.
    pub shifts: Vec<Vec<i64>>,
    /// Effective scalars `z_h(j)`, aligned with `shifts`.
    pub scalars: Vec<Complex64>,
    /// Surviving shift after classification, as an index into `shifts`.
    pub selected: Option<usize>,
    /// `theta_j` with `z = exp(-i theta_j)` for the surviving shift.
    pub theta: Option<f64>,
}

impl CharacterBlock {
    pub fn selected_shift(&self) -> Option<&[i64]> {
        self.selected.map(|i| self.shifts[i].as_slice())
    }

    pub fn scalar_for(&self, shift: &[i64]) -> Option<Complex64> {
        self.shifts.iter().position(|h| h == shift).map(|i| self.scalars[i])
    }
}

fn character(index: &[u64], orders: &[u64], f: &[i64]) -> Complex64 {
    let arg: f64 = index
        .iter()
        .zip(orders)
        .zip(f)
        .map(|((&j, &o), &m)| j as f64 * m as f64 / o as f64)
        .sum();
    linalg::cis(2.0 * PI * arg)
}

/// All index tuples in lexicographic order.
fn index_tuples(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &o in orders {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=o).map(move |j| {
                    let mut p = prefix.clone();
                    p.push(j);
                    p
                })
            })
            .collect();
    }
    out
}

/// Splits a scalar walk on `F x Z^d` into its character blocks.
///
/// Free parts whose scalars all vanish exactly are left out.
pub fn character_decompose(walk: &QuantumWalk) -> Result<Vec<CharacterBlock>> {
    let family = walk.graph().family();
    if !family.is_abelian() {
        return Err(Error::InvalidFamily(format!(
            "character decomposition needs an Abelian group, got {family}"
        )));
    }
    let zs = walk.scalars().ok_or_else(|| {
        Error::Unsupported(format!(
            "character decomposition takes scalar walks, coin dimension is {}",
            walk.coin_dim()
        ))
    })?;
    let orders = family.cyclic_orders().to_vec();
    let mut by_shift: BTreeMap<Vec<i64>, Vec<(Vec<i64>, Complex64)>> = BTreeMap::new();
    for ((h, _), z) in walk.terms().zip(&zs) {
        let f = h.finite_part().unwrap_or(&[]).to_vec();
        let free = h.free_part().unwrap_or(&[]).to_vec();
        by_shift.entry(free).or_default().push((f, *z));
    }
    by_shift.retain(|_, terms| terms.iter().any(|(_, z)| *z != linalg::ZERO));
    let shifts: Vec<Vec<i64>> = by_shift.keys().cloned().collect();
    Ok(index_tuples(&orders)
        .into_iter()
        .map(|index| {
            let scalars = by_shift
                .values()
                .map(|terms| {
                    terms
                        .iter()
                        .map(|(f, z)| z * character(&index, &orders, f))
                        .sum()
                })
                .collect();
            CharacterBlock {
                index,
                shifts: shifts.clone(),
                scalars,
                selected: None,
                theta: None,
            }
        })
        .collect())
}

/// Outcome of [`classify`].
#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    /// Every block reduces to a single shift with a phase.
    Trivial(Vec<CharacterBlock>),
    /// The elimination got stuck; unreachable for unitary walks.
    Counterexample { index: Vec<u64>, detail: String },
}

impl Classification {
    pub fn blocks(&self) -> Option<&[CharacterBlock]> {
        match self {
            Classification::Trivial(b) => Some(b),
            Classification::Counterexample { .. } => None,
        }
    }
}

fn norm_sqr(v: &[i64]) -> i64 {
    v.iter().map(|x| x * x).sum()
}

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Runs the elimination on one block. `Err` carries a counterexample message.
fn reduce_block(block: &mut CharacterBlock, tol: f64) -> std::result::Result<(), String> {
    let mut active: Vec<usize> = (0..block.shifts.len()).collect();
    while active.len() > 1 {
        let mut best: Option<(i64, usize, usize)> = None;
        for &p in &active {
            for &q in &active {
                if p == q {
                    continue;
                }
                let n = norm_sqr(&diff(&block.shifts[p], &block.shifts[q]));
                if best.is_none_or(|(bn, _, _)| n > bn) {
                    best = Some((n, p, q));
                }
            }
        }
        let (_, p, q) = best.expect("at least two active shifts");
        let v = diff(&block.shifts[p], &block.shifts[q]);
        let realising = active
            .iter()
            .flat_map(|&x| active.iter().map(move |&y| (x, y)))
            .filter(|&(x, y)| x != y && diff(&block.shifts[x], &block.shifts[y]) == v)
            .count();
        if realising != 1 {
            return Err(format!(
                "difference {v:?} is realised by {realising} pairs of shifts"
            ));
        }
        let (zp, zq) = (block.scalars[p], block.scalars[q]);
        let product = (zp * zq.conj()).norm();
        if product > tol {
            return Err(format!(
                "shifts {:?} and {:?} both carry weight (|z z'*| = {product:e})",
                block.shifts[p], block.shifts[q]
            ));
        }
        let drop = if zp.norm() <= zq.norm() { p } else { q };
        active.retain(|&i| i != drop);
    }
    let Some(&survivor) = active.first() else {
        return Err("block has no shifts".into());
    };
    let z = block.scalars[survivor];
    if (z.norm() - 1.0).abs() > tol.sqrt() {
        return Err(format!("surviving scalar has modulus {}", z.norm()));
    }
    block.selected = Some(survivor);
    block.theta = Some(-z.arg());
    Ok(())
}

/// Classifies a unitary scalar walk on an infinite Abelian group as a direct
/// sum of monoidal walks, one per character block.
pub fn classify(walk: &QuantumWalk, tol: f64) -> Result<Classification> {
    let family = walk.graph().family();
    match family.free_rank() {
        Some(d) if d >= 1 => {}
        _ => {
            return Err(Error::InvalidFamily(format!(
                "classification needs an infinite Abelian group F x Z^d with d >= 1, got {family}"
            )))
        }
    }
    if !family.is_abelian() {
        return Err(Error::InvalidFamily(format!("{family} is not Abelian")));
    }
    let report = check_unitarity(walk, tol);
    if !report.passed() {
        return Err(Error::NotUnitary(report.max_residual()));
    }
    let mut blocks = character_decompose(walk)?;
    let order: u64 = family.cyclic_orders().iter().product();
    let elim_tol = 4.0 * tol * order as f64;
    for block in &mut blocks {
        if let Err(detail) = reduce_block(block, elim_tol) {
            return Ok(Classification::Counterexample {
                index: block.index.clone(),
                detail,
            });
        }
    }
    Ok(Classification::Trivial(blocks))
}

/// Scalars `(f, h) -> z` of the direct sum described by classified blocks,
/// obtained by inverting the character transform.
pub fn rebuild_scalars(family: &GroupFamily, blocks: &[CharacterBlock]) -> Vec<(Vec<i64>, Complex64)> {
    let orders = family.cyclic_orders();
    let size: u64 = orders.iter().product();
    let mut acc: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    let fs = index_tuples(orders);
    for b in blocks {
        let (Some(h), Some(theta)) = (b.selected_shift(), b.theta) else {
            continue;
        };
        for f1 in &fs {
            // elements of F are written with residues 0..i_l
            let f: Vec<i64> = f1
                .iter()
                .zip(orders)
                .map(|(&x, &o)| (x % o) as i64)
                .collect();
            let w = character(&b.index, orders, &f).conj() * linalg::cis(-theta) / size as f64;
            let mut key = f;
            key.extend_from_slice(h);
            *acc.entry(key).or_insert(linalg::ZERO) += w;
        }
    }
    acc.into_iter().collect()
}

/// One step of the rebuilt direct sum applied to a lattice state.
pub fn apply_direct_sum(blocks: &[CharacterBlock], state: &LatticeState) -> Result<LatticeState> {
    let lat = state.lattice();
    let family = lat.family().clone();
    if state.coin_dim() != 1 {
        return Err(Error::Dimension("direct sums act on scalar states".into()));
    }
    let terms: Vec<_> = rebuild_scalars(&family, blocks)
        .into_iter()
        .map(|(coords, z)| family.element(&coords).map(|g| (g, z)))
        .collect::<Result<_>>()?;
    let mut out = vec![linalg::ZERO; lat.num_sites()];
    for (idx, slot) in out.iter_mut().enumerate() {
        let g = lat.site_element(idx);
        for (h, z) in &terms {
            *slot += z * state.amplitudes()[lat.site_index(&g.mul(h))];
        }
    }
    LatticeState::from_amplitudes(lat.clone(), 1, out)
}

/// Searches numerically for unitary scalar walks on `graph`; see
/// [`solver::solve_unitarity`].
pub fn brute_force_scalar_solutions(graph: &CayleyGraph, config: &SolverConfig) -> SolverOutcome {
    solver::solve_unitarity(graph, config)
}

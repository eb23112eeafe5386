// Sparse selection from the stopping times ‖g‖_{L^p,Q} > c^k with
// c = 2^{(n+1)/p}, and an exact checker for the sparseness of a family.
//
// Thresholds are compared in the p-th power domain: ‖g‖^p_{L^p,Q} > 8^k,
// so no p-th roots are taken and 8^k is exact.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::tree::AggregateTree;
use super::DyadicCube;
use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// `2^{n+1}` for `n = 2`.
const THRESHOLD_BASE: f64 = 8.0;

/// All descendants of `root` down to `max_depth` levels below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePool {
    pub root: DyadicCube,
    pub max_depth: u32,
}

impl TreePool {
    pub fn new(root: DyadicCube, max_depth: u32) -> Self {
        Self { root, max_depth }
    }

    pub fn leaf_level(&self) -> i32 {
        self.root.level - self.max_depth as i32
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseFamily {
    pub cubes: Vec<DyadicCube>,
    /// Claimed sparseness constant.
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SparseVerification {
    pub holds: bool,
    pub alpha_measured: f64,
    pub disjoint: bool,
}

/// Smallest integer `k` with `m ≤ 8^k`, for `m > 0`.
fn ceil_log8(m: f64) -> i32 {
    let mut k = (m.log2() / 3.0).ceil() as i32;
    while 2f64.powi(3 * (k - 1)) >= m {
        k -= 1;
    }
    while 2f64.powi(3 * k) < m {
        k += 1;
    }
    k
}

/// Selected iff some integer `k` has `ancestor_max ≤ 8^k < value`.
fn crosses_threshold(ancestor_max: f64, value: f64) -> bool {
    if value <= 0.0 {
        return false;
    }
    if ancestor_max <= 0.0 {
        return true;
    }
    let k = ceil_log8(ancestor_max);
    THRESHOLD_BASE.powi(k) < value
}

/// `S = ∪_k S_k`, `S_k` the maximal pool cubes with `‖g‖_{L^p,Q} > c^k`.
pub fn sparse_select(g: &GridFunction, p: f64, pool: &TreePool) -> Result<SparseFamily> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(format!("sparse selection needs 1 < p < ∞, got {p}")));
    }
    let density: Vec<f64> = g.values().iter().map(|v| v.norm().powf(p)).collect();
    let root = pool.root;
    let tree = AggregateTree::from_density(g.grid(), &density, root.shift, pool.leaf_level(), root.level)?;
    let mut cubes = Vec::new();
    let mut stack = vec![(root, 0.0f64)];
    while let Some((q, anc)) = stack.pop() {
        let v = tree.average(&q).unwrap();
        if v <= 0.0 {
            continue;
        }
        if crosses_threshold(anc, v) {
            cubes.push(q);
        }
        if q.level > pool.leaf_level() {
            for c in q.children() {
                stack.push((c, anc.max(v)));
            }
        }
    }
    cubes.sort_unstable();
    Ok(SparseFamily { cubes, alpha: 0.5 })
}

/// Measures `min |E_Q|/|Q|` with `E_Q = Q \ ∪{Q′ ∈ S : Q′ ⊊ Q}` exactly.
pub fn verify_sparse(s: &SparseFamily) -> SparseVerification {
    if s.cubes.is_empty() {
        return SparseVerification { holds: true, alpha_measured: 1.0, disjoint: true };
    }
    let unique: HashSet<DyadicCube> = s.cubes.iter().copied().collect();
    let mut disjoint = unique.len() == s.cubes.len();
    // Cubes from different grids must not overlap at all, otherwise the
    // majority sets are not the nested complements measured below.
    for (i, a) in s.cubes.iter().enumerate() {
        for b in &s.cubes[i + 1..] {
            if a.shift != b.shift && a.intersects(b) {
                disjoint = false;
            }
        }
    }
    let top = s.cubes.iter().map(|q| q.level).max().unwrap();
    // Relative area covered by the maximal strict S-descendants of each cube.
    let mut covered: HashMap<DyadicCube, f64> = HashMap::new();
    for q in &unique {
        let mut a = *q;
        while a.level < top {
            a = a.parent();
            if unique.contains(&a) {
                *covered.entry(a).or_insert(0.0) += 4f64.powi(q.level - a.level);
                break;
            }
        }
    }
    let alpha_measured = unique
        .iter()
        .map(|q| 1.0 - covered.get(q).copied().unwrap_or(0.0))
        .fold(1.0, f64::min);
    SparseVerification { holds: disjoint && alpha_measured >= s.alpha, alpha_measured, disjoint }
}

// Integrals of a nonnegative weight over every cube of one shifted grid
// between a leaf level and a root level. Leaves are filled from the grid
// cells; each internal node is the sum of its four children in a fixed
// order, so an ancestor's integral is never smaller than a descendant's.

use std::collections::HashMap;

use super::{pow2, DyadicCube, DyadicShift};
use crate::error::{Error, Result};
use crate::grid::{ComplexGrid, Cube};

/// Sparse quadtree of cube integrals; absent cubes carry integral zero.
#[derive(Debug, Clone)]
pub struct AggregateTree {
    shift: DyadicShift,
    leaf_level: i32,
    root_level: i32,
    levels: Vec<HashMap<DyadicCube, f64>>,
}

/// Level `j` with `h = 2^j` when every grid cell is a cube of `Dᵗ`.
pub fn aligned_level(grid: &ComplexGrid, shift: DyadicShift) -> Option<i32> {
    let h = grid.h();
    let j = h.log2().round() as i32;
    if pow2(j) != h {
        return None;
    }
    let q = DyadicCube::containing(shift, j, grid.center_ij(0, 0));
    let c = q.corner();
    let tol = 1e-9 * h;
    ((c.re - grid.x0()).abs() <= tol && (c.im - grid.y0()).abs() <= tol).then_some(j)
}

/// Finest level used for leaves: the cell level when aligned, otherwise the
/// first level with side below `h`.
pub fn leaf_level_for(grid: &ComplexGrid, shift: DyadicShift) -> i32 {
    aligned_level(grid, shift).unwrap_or_else(|| grid.h().log2().ceil() as i32 - 1)
}

fn overlap_area(a: &Cube, b: &Cube) -> f64 {
    let ox = (a.corner.re + a.side).min(b.corner.re + b.side) - a.corner.re.max(b.corner.re);
    let oy = (a.corner.im + a.side).min(b.corner.im + b.side) - a.corner.im.max(b.corner.im);
    ox.max(0.0) * oy.max(0.0)
}

/// Leaf cubes meeting a grid cell, with the overlap area of each.
pub(crate) fn cell_leaves(grid: &ComplexGrid, idx: usize, shift: DyadicShift, level: i32) -> Vec<(DyadicCube, f64)> {
    let cell = grid.cell_cube(idx);
    let area = grid.cell_area();
    let home = DyadicCube::containing(shift, level, grid.center(idx));
    let home_overlap = overlap_area(&home.to_cube(), &cell);
    if home_overlap >= area * (1.0 - 1e-9) {
        return vec![(home, area)];
    }
    let first = DyadicCube::containing(shift, level, cell.corner);
    let side = pow2(level);
    let mut out = Vec::new();
    let mut oy = 0i64;
    loop {
        let mut ox = 0i64;
        let row = DyadicCube::new(shift, level, (first.offset.0, first.offset.1 + oy));
        if row.corner().im >= cell.corner.im + cell.side {
            break;
        }
        loop {
            let q = DyadicCube::new(shift, level, (first.offset.0 + ox, first.offset.1 + oy));
            if q.corner().re >= cell.corner.re + cell.side {
                break;
            }
            let a = overlap_area(&q.to_cube(), &cell);
            if a > 0.0 {
                out.push((q, a));
            }
            ox += 1;
        }
        oy += 1;
        debug_assert!(oy as f64 * side < 4.0 * cell.side + 2.0 * side);
    }
    out
}

impl AggregateTree {
    /// Builds the tree of `∫_Q w` for the per-cell weights `w` (nonnegative).
    pub fn build(grid: &ComplexGrid, weights: &[f64], shift: DyadicShift, leaf_level: i32, root_level: i32) -> Result<Self> {
        if weights.len() != grid.len() {
            return Err(Error::IncompatibleGrids);
        }
        if root_level < leaf_level {
            return Err(Error::InvalidRange { k_min: leaf_level, k_max: root_level });
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::Domain("tree weights must be finite and nonnegative".into()));
        }
        let density = 1.0 / grid.cell_area();
        let mut leaves: HashMap<DyadicCube, f64> = HashMap::new();
        for (idx, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (q, a) in cell_leaves(grid, idx, shift, leaf_level) {
                // w is already an integral over the cell; spread by area.
                *leaves.entry(q).or_insert(0.0) += w * a * density;
            }
        }
        let mut levels = vec![leaves];
        for _ in leaf_level..root_level {
            let below = levels.last().unwrap();
            let mut parents: Vec<DyadicCube> = below.keys().map(|q| q.parent()).collect();
            parents.sort_unstable();
            parents.dedup();
            let next: HashMap<DyadicCube, f64> = parents
                .into_iter()
                .map(|p| {
                    let s = p.children().iter().map(|c| below.get(c).copied().unwrap_or(0.0)).fold(0.0, |a, b| a + b);
                    (p, s)
                })
                .collect();
            levels.push(next);
        }
        Ok(Self { shift, leaf_level, root_level, levels })
    }

    /// Tree of the cell integrals `∫_cell u(z) dA` with `u` given per cell.
    pub fn from_density(grid: &ComplexGrid, density: &[f64], shift: DyadicShift, leaf_level: i32, root_level: i32) -> Result<Self> {
        let a = grid.cell_area();
        let w: Vec<f64> = density.iter().map(|d| d * a).collect();
        Self::build(grid, &w, shift, leaf_level, root_level)
    }

    pub fn shift(&self) -> DyadicShift {
        self.shift
    }

    pub fn leaf_level(&self) -> i32 {
        self.leaf_level
    }

    pub fn root_level(&self) -> i32 {
        self.root_level
    }

    /// `∫_Q w`; zero for cubes outside the support. Levels outside the
    /// window return `None`.
    pub fn integral(&self, q: &DyadicCube) -> Option<f64> {
        if q.shift != self.shift || q.level < self.leaf_level || q.level > self.root_level {
            return None;
        }
        Some(self.levels[(q.level - self.leaf_level) as usize].get(q).copied().unwrap_or(0.0))
    }

    pub fn average(&self, q: &DyadicCube) -> Option<f64> {
        self.integral(q).map(|i| i / q.area())
    }

    /// Cubes at `level` with nonzero integral, sorted.
    pub fn nodes_at(&self, level: i32) -> Vec<DyadicCube> {
        if level < self.leaf_level || level > self.root_level {
            return Vec::new();
        }
        let mut v: Vec<DyadicCube> = self.levels[(level - self.leaf_level) as usize].keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn roots(&self) -> Vec<DyadicCube> {
        self.nodes_at(self.root_level)
    }

    /// Largest average over the given integrals grouped at `level ≥ root`.
    pub(crate) fn max_average_above(&self, level: i32) -> f64 {
        let mut layer: HashMap<DyadicCube, f64> = self.levels.last().unwrap().clone();
        for _ in self.root_level..level {
            let mut up: HashMap<DyadicCube, f64> = HashMap::new();
            let mut keys: Vec<_> = layer.keys().copied().collect();
            keys.sort_unstable();
            for q in keys {
                *up.entry(q.parent()).or_insert(0.0) += layer[&q];
            }
            layer = up;
        }
        layer.iter().map(|(q, i)| i / q.area()).fold(0.0, f64::max)
    }
}

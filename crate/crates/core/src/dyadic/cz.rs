// Calderón–Zygmund stopping time on one shifted grid, and the good/bad
// splitting built from it.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tree::{aligned_level, leaf_level_for, AggregateTree};
use super::{DyadicCube, DyadicShift};
use crate::error::{Error, Result};
use crate::grid::{ComplexGrid, GridFunction};

/// Dimension of the plane; fixes the `2^n` in `λ < ⨍ f ≤ 2^n λ`.
const N_DIM: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CzCube {
    pub cube: DyadicCube,
    pub average: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CzDecomposition {
    pub height: f64,
    pub shift: DyadicShift,
    pub root_level: i32,
    pub leaf_level: i32,
    /// Every grid cell is a cube of the shifted grid.
    pub cell_aligned: bool,
    pub cubes: Vec<CzCube>,
    pub grid: ComplexGrid,
    /// `‖f‖_{L¹}` in the same arithmetic as the cube averages.
    pub l1_norm: f64,
    /// Cells with value above the height and not covered by a selected cube.
    uncovered_above: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CzProperties {
    pub disjoint: bool,
    /// `f ≤ λ` on cells outside the union; `None` when cells are not cubes
    /// of the grid and the test has no cell-wise meaning.
    pub bounded_off_union: Option<bool>,
    pub total_area: f64,
    pub area_bound: f64,
    pub area_ok: bool,
    /// Extremes of `⨍_Q f / λ` over the selected cubes.
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub averages_ok: bool,
}

impl CzProperties {
    pub fn holds(&self) -> bool {
        self.disjoint && self.area_ok && self.averages_ok && self.bounded_off_union != Some(false)
    }
}

/// Maximal cubes of `Dᵗ` below `root_level` whose average of `f` exceeds `λ`.
pub fn cz_decompose(f: &GridFunction, lambda: f64, t: DyadicShift, root_level: i32) -> Result<CzDecomposition> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("height must be positive, got {lambda}")));
    }
    if !f.is_real_nonnegative() {
        return Err(Error::Domain("CZ decomposition needs a real nonnegative function".into()));
    }
    let grid = *f.grid();
    let aligned = aligned_level(&grid, t);
    let leaf_level = leaf_level_for(&grid, t);
    if root_level < leaf_level {
        return Err(Error::InvalidParameter(format!(
            "root level {root_level} is below the finest usable level {leaf_level}"
        )));
    }
    let density: Vec<f64> = f.values().iter().map(|v| v.re).collect();
    let tree = AggregateTree::from_density(&grid, &density, t, leaf_level, root_level)?;

    let roots = tree.roots();
    if let Some(bad) = roots.iter().map(|q| tree.average(q).unwrap()).find(|&a| a > lambda) {
        let mut needed = root_level + 1;
        while tree.max_average_above(needed) > lambda {
            needed += 1;
        }
        return Err(Error::RootTooSmall { level: root_level, average: bad, needed });
    }

    let mut selected = Vec::new();
    let mut stack: Vec<DyadicCube> = roots;
    while let Some(q) = stack.pop() {
        let avg = tree.average(&q).unwrap();
        if avg > lambda {
            selected.push(CzCube { cube: q, average: avg });
        } else if q.level > leaf_level {
            for c in q.children() {
                if tree.integral(&c).unwrap() > 0.0 {
                    stack.push(c);
                }
            }
        }
    }
    selected.sort_by_key(|c| c.cube);

    let l1_norm = tree.roots().iter().map(|q| tree.integral(q).unwrap()).fold(0.0, |a, b| a + b);
    let uncovered_above = if aligned.is_some() {
        let chosen: HashSet<DyadicCube> = selected.iter().map(|c| c.cube).collect();
        (0..grid.len())
            .filter(|&i| density[i] > lambda)
            .filter(|&i| {
                let mut q = DyadicCube::containing(t, leaf_level, grid.center(i));
                loop {
                    if chosen.contains(&q) {
                        return false;
                    }
                    if q.level >= root_level {
                        return true;
                    }
                    q = q.parent();
                }
            })
            .count()
    } else {
        0
    };

    Ok(CzDecomposition {
        height: lambda,
        shift: t,
        root_level,
        leaf_level,
        cell_aligned: aligned.is_some(),
        cubes: selected,
        grid,
        l1_norm,
        uncovered_above,
    })
}

impl CzDecomposition {
    pub fn total_area(&self) -> f64 {
        self.cubes.iter().map(|c| c.cube.area()).sum()
    }

    /// Checks disjointness and the three CZ properties with `2^n = 4`.
    pub fn check_properties(&self) -> CzProperties {
        let set: HashSet<DyadicCube> = self.cubes.iter().map(|c| c.cube).collect();
        let mut disjoint = set.len() == self.cubes.len();
        for c in &self.cubes {
            let mut q = c.cube;
            while q.level < self.root_level {
                q = q.parent();
                if set.contains(&q) {
                    disjoint = false;
                }
            }
        }
        let total_area = self.total_area();
        let area_bound = self.l1_norm / self.height;
        let upper = f64::from(1 << N_DIM) * self.height;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        let mut averages_ok = true;
        for c in &self.cubes {
            averages_ok &= self.height < c.average && c.average <= upper;
            lo = lo.min(c.average / self.height);
            hi = hi.max(c.average / self.height);
        }
        if self.cubes.is_empty() {
            lo = 0.0;
        }
        CzProperties {
            disjoint,
            bounded_off_union: self.cell_aligned.then_some(self.uncovered_above == 0),
            total_area,
            area_bound,
            area_ok: total_area <= area_bound,
            min_ratio: lo,
            max_ratio: hi,
            averages_ok,
        }
    }

    /// Indices of grid cells inside each selected cube (cell-aligned only).
    pub fn cells_by_cube(&self) -> Result<Vec<Vec<usize>>> {
        if !self.cell_aligned {
            return Err(Error::NotCellAligned);
        }
        let index: std::collections::HashMap<DyadicCube, usize> =
            self.cubes.iter().enumerate().map(|(i, c)| (c.cube, i)).collect();
        let mut out = vec![Vec::new(); self.cubes.len()];
        for i in 0..self.grid.len() {
            let mut q = DyadicCube::containing(self.shift, self.leaf_level, self.grid.center(i));
            loop {
                if let Some(&j) = index.get(&q) {
                    out[j].push(i);
                    break;
                }
                if q.level >= self.root_level {
                    break;
                }
                q = q.parent();
            }
        }
        Ok(out)
    }
}

/// `b = Σ_j (u − u_{Q_j}) χ_{Q_j}` and `g = u − b` for the CZ cubes of `|u|`
/// at height `a^k`.
pub fn good_bad_split(
    u: &GridFunction,
    a: f64,
    k: i32,
    decomposition: &CzDecomposition,
) -> Result<(GridFunction, GridFunction)> {
    if !(a > f64::from(1 << N_DIM)) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("splitting base must exceed 4, got {a}")));
    }
    let height = a.powi(k);
    if (decomposition.height - height).abs() > 1e-12 * height {
        return Err(Error::InvalidParameter(format!(
            "decomposition height {} does not match a^k = {height}",
            decomposition.height
        )));
    }
    if *u.grid() != decomposition.grid {
        return Err(Error::IncompatibleGrids);
    }
    let groups = decomposition.cells_by_cube()?;
    let mut bad = vec![Complex64::new(0.0, 0.0); u.len()];
    for cells in &groups {
        if cells.is_empty() {
            continue;
        }
        let mean = cells.iter().map(|&i| u.values()[i]).sum::<Complex64>() / cells.len() as f64;
        for &i in cells {
            bad[i] = u.values()[i] - mean;
        }
    }
    let b = GridFunction::new(*u.grid(), bad)?;
    let g = u.sub(&b)?;
    Ok((b, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{cube_average, Cube};

    fn unit_grid(n: usize) -> ComplexGrid {
        ComplexGrid::new(0.0, 0.0, 1.0 / n as f64, n, n).unwrap()
    }

    #[test]
    fn nothing_above_height() {
        let g = unit_grid(8);
        let f = GridFunction::from_real_fn(g, |z| 1.0 + z.re).unwrap();
        let d = cz_decompose(&f, 2.0, DyadicShift::ZERO, 0).unwrap();
        assert!(d.cubes.is_empty());
        assert!(d.check_properties().holds());
    }

    #[test]
    fn single_corner_cube() {
        let g = unit_grid(8);
        let f = GridFunction::from_real_fn(g, |z| if z.re < 0.5 && z.im < 0.5 { 4.0 } else { 0.0 }).unwrap();
        let d = cz_decompose(&f, 2.0, DyadicShift::ZERO, 0).unwrap();
        assert_eq!(d.cubes.len(), 1);
        assert_eq!(d.cubes[0].cube, DyadicCube::new(DyadicShift::ZERO, -1, (0, 0)));
        assert_eq!(d.cubes[0].average, 4.0);
        let p = d.check_properties();
        assert!(p.holds());
        assert_eq!(p.total_area, 0.25);
        assert_eq!(p.area_bound, 0.5);
        assert_eq!(p.bounded_off_union, Some(true));
    }

    #[test]
    fn root_too_small_reports_needed_level() {
        let g = unit_grid(8);
        let f = GridFunction::from_real_fn(g, |_| 3.0).unwrap();
        match cz_decompose(&f, 1.0, DyadicShift::ZERO, 0) {
            Err(Error::RootTooSmall { level: 0, average, needed }) => {
                assert_eq!(average, 3.0);
                assert_eq!(needed, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(cz_decompose(&f, 1.0, DyadicShift::ZERO, 1).is_ok());
    }

    #[test]
    fn split_is_mean_zero_and_bounded() {
        let g = ComplexGrid::new(0.0, 0.0, 1.0 / 16.0, 16, 16).unwrap();
        let u = GridFunction::from_real_fn(g, |z| if z.re < 0.5 && z.im < 0.5 { 8.0 } else { 0.0 }).unwrap();
        let a = 5.0;
        let d = cz_decompose(&u.abs(), 1.0, DyadicShift::ZERO, 1).unwrap();
        assert_eq!(d.cubes.len(), 1);
        assert_eq!(d.cubes[0].cube, DyadicCube::new(DyadicShift::ZERO, 0, (0, 0)));
        let (b, gk) = good_bad_split(&u, a, 0, &d).unwrap();
        for c in &d.cubes {
            assert!(cube_average(&b, &c.cube.to_cube()).unwrap().norm() < 1e-12);
        }
        assert!(gk.max_abs() <= 4.0 * (1.0 + a));
        assert!((gk.max_abs() - 2.0).abs() < 1e-15);
        assert!(good_bad_split(&u, 4.0, 0, &d).is_err());
    }

    #[test]
    fn split_requires_alignment() {
        let g = ComplexGrid::new(0.05, 0.0, 0.1, 10, 10).unwrap();
        let u = GridFunction::from_real_fn(g, |z| if z.re < 0.5 { 9.0 } else { 0.0 }).unwrap();
        let d = cz_decompose(&u, 5.0, DyadicShift::ZERO, 1).unwrap();
        assert!(!d.cell_aligned);
        assert!(d.check_properties().holds());
        assert!(matches!(good_bad_split(&u, 5.0, 1, &d), Err(Error::NotCellAligned)));
    }

    #[test]
    fn shifted_decomposition_on_aligned_grid() {
        let t = DyadicShift::new(true, true);
        let g = ComplexGrid::new(-2.0 / 3.0, -2.0 / 3.0, 0.125, 16, 16).unwrap();
        let f = GridFunction::from_real_fn(g, |z| (z - Complex64::new(0.3, 0.4)).norm().powf(-1.2).min(50.0)).unwrap();
        let d = cz_decompose(&f, 2.0, t, 3).unwrap();
        assert!(d.cell_aligned);
        let p = d.check_properties();
        assert!(p.holds(), "{p:?}");
        for c in &d.cubes {
            let avg = cube_average(&f, &c.cube.to_cube()).unwrap().re;
            assert!((avg - c.average).abs() < 1e-9 * c.average);
        }
        let _ = Cube::new(Complex64::new(0.0, 0.0), 1.0).unwrap();
    }
}

//! Uniform cell grids over rectangles of ℂ, piecewise-constant functions on
//! them, and the midpoint-rule norms used everywhere else in the crate.
//!
//! A [`GridFunction`] is the step function equal to `values[idx]` on cell
//! `idx` and zero outside the grid rectangle. Integrals over arbitrary
//! axis-aligned cubes weight each cell by its overlap area, which makes cube
//! averages exact for this model.

mod io;
mod norms;
pub mod shapes;

pub use io::{read_grid_function, write_grid_function};
pub use norms::{
    cube_average, cube_integral, kolmogorov_check, kolmogorov_check_tol, lp_norm, normalized_lp_on_cube,
    weak_lq_quasinorm, weak_quasinorm_weighted, KolmogorovReport,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform `nx × ny` grid of square cells of side `h`, lower-left corner at
/// `(x0, y0)`. Cells are indexed row-major with `i` (the x index) fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexGrid {
    x0: f64,
    y0: f64,
    h: f64,
    nx: usize,
    ny: usize,
}

impl ComplexGrid {
    pub fn new(x0: f64, y0: f64, h: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidGrid(format!("cell side must be positive, got {h}")));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGrid(format!("cell counts must be positive, got {nx}×{ny}")));
        }
        if !x0.is_finite() || !y0.is_finite() {
            return Err(Error::InvalidGrid("corner must be finite".into()));
        }
        Ok(Self { x0, y0, h, nx, ny })
    }

    /// `n × n` grid covering the square `[lo, hi)²`.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("cell count must be positive".into()));
        }
        Self::new(lo, lo, (hi - lo) / n as f64, n, n)
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    #[inline]
    pub fn center_ij(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.x0 + (i as f64 + 0.5) * self.h,
            self.y0 + (j as f64 + 0.5) * self.h,
        )
    }

    #[inline]
    pub fn center(&self, idx: usize) -> Complex64 {
        let (i, j) = self.coords(idx);
        self.center_ij(i, j)
    }

    pub fn centers(&self) -> Vec<Complex64> {
        (0..self.len()).map(|idx| self.center(idx)).collect()
    }

    /// The cell `[x0 + i h, x0 + (i+1) h) × [...]` as a cube.
    pub fn cell_cube(&self, idx: usize) -> Cube {
        let (i, j) = self.coords(idx);
        Cube {
            corner: Complex64::new(self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h),
            side: self.h,
        }
    }

    pub fn x1(&self) -> f64 {
        self.x0 + self.nx as f64 * self.h
    }

    pub fn y1(&self) -> f64 {
        self.y0 + self.ny as f64 * self.h
    }

    /// Smallest cube with the grid's lower-left corner that contains the
    /// whole rectangle.
    pub fn bounding_cube(&self) -> Cube {
        Cube {
            corner: Complex64::new(self.x0, self.y0),
            side: self.nx.max(self.ny) as f64 * self.h,
        }
    }

    /// Cell containing `z`, if `z` lies in the grid rectangle.
    pub fn cell_of(&self, z: Complex64) -> Option<usize> {
        let fi = ((z.re - self.x0) / self.h).floor();
        let fj = ((z.im - self.y0) / self.h).floor();
        if fi < 0.0 || fj < 0.0 || fi >= self.nx as f64 || fj >= self.ny as f64 {
            return None;
        }
        Some(self.index(fi as usize, fj as usize))
    }

    /// Cells meeting `q` with their overlap areas (zero-area contacts are
    /// dropped).
    pub fn overlap(&self, q: &Cube) -> Vec<(usize, f64)> {
        let (qx0, qy0) = (q.corner.re, q.corner.im);
        let (qx1, qy1) = (qx0 + q.side, qy0 + q.side);
        let xs = axis_overlap(self.x0, self.h, self.nx, qx0, qx1);
        if xs.is_empty() {
            return Vec::new();
        }
        let ys = axis_overlap(self.y0, self.h, self.ny, qy0, qy1);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &(j, wy) in &ys {
            for &(i, wx) in &xs {
                out.push((self.index(i, j), wx * wy));
            }
        }
        out
    }

    /// The same cell layout dilated by `delta` about the origin.
    pub fn dilated(&self, delta: f64) -> Result<Self> {
        Self::new(self.x0 * delta, self.y0 * delta, self.h * delta, self.nx, self.ny)
    }
}

fn axis_overlap(origin: f64, h: f64, n: usize, lo: f64, hi: f64) -> Vec<(usize, f64)> {
    let first = ((lo - origin) / h).floor().max(0.0);
    let last = ((hi - origin) / h).ceil().min(n as f64);
    if !(first < last) {
        return Vec::new();
    }
    let (first, last) = (first as usize, last as usize);
    let mut out = Vec::with_capacity(last - first);
    for i in first..last {
        let c0 = origin + i as f64 * h;
        let c1 = origin + (i + 1) as f64 * h;
        let w = c1.min(hi) - c0.max(lo);
        if w > 0.0 {
            out.push((i, w));
        }
    }
    out
}

/// Axis-aligned square `[corner, corner + side)` in both coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cube {
    pub corner: Complex64,
    pub side: f64,
}

impl Cube {
    pub fn new(corner: Complex64, side: f64) -> Result<Self> {
        if !(side > 0.0) || !side.is_finite() {
            return Err(Error::InvalidParameter(format!("cube side must be positive, got {side}")));
        }
        if !corner.re.is_finite() || !corner.im.is_finite() {
            return Err(Error::InvalidParameter("cube corner must be finite".into()));
        }
        Ok(Self { corner, side })
    }

    pub fn centered(center: Complex64, side: f64) -> Result<Self> {
        Self::new(center - Complex64::new(side / 2.0, side / 2.0), side)
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    pub fn center(&self) -> Complex64 {
        self.corner + Complex64::new(self.side / 2.0, self.side / 2.0)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.corner.re
            && z.re < self.corner.re + self.side
            && z.im >= self.corner.im
            && z.im < self.corner.im + self.side
    }

    pub fn contains_cube(&self, other: &Cube) -> bool {
        other.corner.re >= self.corner.re
            && other.corner.im >= self.corner.im
            && other.corner.re + other.side <= self.corner.re + self.side
            && other.corner.im + other.side <= self.corner.im + self.side
    }
}

/// Piecewise-constant complex function on a [`ComplexGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    grid: ComplexGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: ComplexGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(idx) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite value at cell {idx}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: ComplexGrid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// Samples `f` at cell centers.
    pub fn from_fn(grid: ComplexGrid, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        let values = (0..grid.len()).map(|idx| f(grid.center(idx))).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: ComplexGrid, f: impl Fn(Complex64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |z| Complex64::new(f(z), 0.0))
    }

    pub fn from_real(grid: ComplexGrid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn grid(&self) -> &ComplexGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| v * c).collect() }
    }

    pub fn abs(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.ensure_same_grid(other)?;
        Self::new(
            self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        )
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::IncompatibleGrids);
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `∫ f dA` by the midpoint rule.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell_area()
    }

    pub fn is_real_nonnegative(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re >= 0.0)
    }
}

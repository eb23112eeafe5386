// C f(z) = ∫ f(ζ)/(z−ζ) dA(ζ) and C_b f(z) = ∫ (b(z)−b(ζ))/(z−ζ) f(ζ) dA(ζ)
// by the midpoint rule over cells.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{ComplexGrid, GridFunction};
use crate::par::map_indices;

/// Contribution of the cell containing the evaluation point to `C_b f`.
///
/// `Zero` drops it, which is what the kernel `1/(z−ζ)` alone gives over a
/// centered square. `Gradient` keeps the first-order term of the difference
/// quotient: `∂b(z) f(z) h²` with `∂b = (b_x − i b_y)/2`, which makes the
/// discrete commutator exact for affine `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SelfCell {
    Zero,
    #[default]
    Gradient,
}

impl SelfCell {
    pub fn name(&self) -> &'static str {
        match self {
            SelfCell::Zero => "zero",
            SelfCell::Gradient => "gradient",
        }
    }
}

/// Midpoint Cauchy transform at the cell centers; the own cell contributes 0.
pub fn cauchy_transform(f: &GridFunction) -> GridFunction {
    let grid = *f.grid();
    let centers = grid.centers();
    let vals = f.values();
    let area = grid.cell_area();
    let out = map_indices(grid.len(), |i| {
        let z = centers[i];
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (&c, &v)) in centers.iter().zip(vals).enumerate() {
            if j != i && v != Complex64::new(0.0, 0.0) {
                acc += v / (z - c);
            }
        }
        acc * area
    });
    GridFunction::new(grid, out).expect("finite quadrature")
}

/// `∫_R dA(ζ)/(z−ζ)` over the rectangle `[x0,x1]×[y0,y1]`, in closed form.
pub fn rect_inverse_integral(z: Complex64, x0: f64, x1: f64, y0: f64, y1: f64) -> Complex64 {
    // With w = z − ζ = u + iv, 1/w = (u − iv)/r². Antiderivatives in (u, v):
    //   F = ½ v ln r² + u atan(v/u)   (∂u∂v F = u/r²)
    //   G = ½ u ln r² + v atan(u/v)   (∂u∂v G = v/r²)
    fn xlogr(a: f64, b: f64) -> f64 {
        let r2 = a * a + b * b;
        if a == 0.0 || r2 == 0.0 { 0.0 } else { 0.5 * a * r2.ln() }
    }
    fn xatan(a: f64, b: f64) -> f64 {
        if a == 0.0 { 0.0 } else { a * (b / a).atan() }
    }
    let f = |u: f64, v: f64| xlogr(v, u) + xatan(u, v);
    let g = |u: f64, v: f64| xlogr(u, v) + xatan(v, u);
    let (u0, u1) = (z.re - x1, z.re - x0);
    let (v0, v1) = (z.im - y1, z.im - y0);
    let corner = |h: &dyn Fn(f64, f64) -> f64| h(u1, v1) - h(u0, v1) - h(u1, v0) + h(u0, v0);
    Complex64::new(corner(&f), -corner(&g))
}

/// Cells within this many cells of an evaluation point are integrated exactly.
const NEAR_CELLS: f64 = 3.0;

/// Cauchy transform at arbitrary points. Cells near a point are integrated
/// exactly as a constant times `∫ 1/(z−ζ)`; all others use the midpoint rule.
pub fn cauchy_transform_at(f: &GridFunction, points: &[Complex64]) -> Vec<Complex64> {
    let grid = *f.grid();
    let centers = grid.centers();
    let vals = f.values();
    let area = grid.cell_area();
    map_indices(points.len(), |k| {
        let z = points[k];
        let near = NEAR_CELLS * grid.h();
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (&c, &v)) in centers.iter().zip(vals).enumerate() {
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            if (z.re - c.re).abs() <= near && (z.im - c.im).abs() <= near {
                let q = grid.cell_cube(j);
                acc += v * rect_inverse_integral(z, q.corner.re, q.corner.re + q.side, q.corner.im, q.corner.im + q.side);
            } else {
                acc += v * area / (z - c);
            }
        }
        acc
    })
}

/// `C_b f` with the [`SelfCell::Gradient`] rule.
pub fn commutator(b: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    commutator_with(b, f, SelfCell::Gradient)
}

pub fn commutator_with(b: &GridFunction, f: &GridFunction, rule: SelfCell) -> Result<GridFunction> {
    b.ensure_same_grid(f)?;
    let grid = *f.grid();
    let centers = grid.centers();
    let bv = b.values();
    let fv = f.values();
    let area = grid.cell_area();
    let grad = match rule {
        SelfCell::Zero => None,
        SelfCell::Gradient => Some(wirtinger(&grid, bv)),
    };
    let out = map_indices(grid.len(), |i| {
        let (z, bz) = (centers[i], bv[i]);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..centers.len() {
            if j != i && fv[j] != Complex64::new(0.0, 0.0) {
                acc += (bz - bv[j]) / (z - centers[j]) * fv[j];
            }
        }
        if let Some(d) = &grad {
            acc += d[i] * fv[i];
        }
        acc * area
    });
    GridFunction::new(grid, out)
}

/// `∂b = (b_x − i b_y)/2` by central differences, one-sided at the edges.
fn wirtinger(grid: &ComplexGrid, b: &[Complex64]) -> Vec<Complex64> {
    let (nx, ny, h) = (grid.nx(), grid.ny(), grid.h());
    let diff = |lo: Complex64, hi: Complex64, span: usize| (hi - lo) / (span as f64 * h);
    (0..grid.len())
        .map(|idx| {
            let (i, j) = grid.coords(idx);
            let bx = if nx < 2 {
                Complex64::new(0.0, 0.0)
            } else {
                let (a, c) = (i.saturating_sub(1), (i + 1).min(nx - 1));
                diff(b[grid.index(a, j)], b[grid.index(c, j)], c - a)
            };
            let by = if ny < 2 {
                Complex64::new(0.0, 0.0)
            } else {
                let (a, c) = (j.saturating_sub(1), (j + 1).min(ny - 1));
                diff(b[grid.index(i, a)], b[grid.index(i, c)], c - a)
            };
            (bx - Complex64::i() * by) * 0.5
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::shapes::disk_fraction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn random_fn(grid: ComplexGrid, rng: &mut ChaCha8Rng) -> GridFunction {
        let v = (0..grid.len()).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        GridFunction::new(grid, v).unwrap()
    }

    #[test]
    fn rectangle_integral_matches_fine_quadrature() {
        let z = c(0.3, -0.2);
        let exact = rect_inverse_integral(z, 1.0, 1.5, -0.5, 0.75);
        let n = 400;
        let (hx, hy) = (0.5 / n as f64, 1.25 / n as f64);
        let mut s = c(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let zeta = c(1.0 + (i as f64 + 0.5) * hx, -0.5 + (j as f64 + 0.5) * hy);
                s += 1.0 / (z - zeta) * hx * hy;
            }
        }
        assert!((exact - s).norm() < 1e-6 * s.norm());
    }

    #[test]
    fn rectangle_integral_centered_square_vanishes() {
        assert!(rect_inverse_integral(c(0.5, 0.5), 0.0, 1.0, 0.0, 1.0).norm() < 1e-15);
        // Off-center inside the rectangle: compare with splitting into four
        // rectangles meeting at z.
        let z = c(0.2, 0.7);
        let whole = rect_inverse_integral(z, 0.0, 1.0, 0.0, 1.0);
        let parts = rect_inverse_integral(z, 0.0, 0.2, 0.0, 0.7)
            + rect_inverse_integral(z, 0.2, 1.0, 0.0, 0.7)
            + rect_inverse_integral(z, 0.0, 0.2, 0.7, 1.0)
            + rect_inverse_integral(z, 0.2, 1.0, 0.7, 1.0);
        assert!((whole - parts).norm() < 1e-13);
    }

    #[test]
    fn disk_at_origin_and_outside() {
        let grid = ComplexGrid::square(-1.5, 1.5, 64).unwrap();
        let f = disk_fraction(&grid, c(0.0, 0.0), 1.0).unwrap();
        let at0 = cauchy_transform_at(&f, &[c(0.0, 0.0)])[0];
        assert!(at0.norm() < 1e-12);
        let pts: Vec<Complex64> = (0..8).map(|k| Complex64::from_polar(2.0, k as f64 * PI / 4.0 + 0.1)).collect();
        for (z, v) in pts.iter().zip(cauchy_transform_at(&f, &pts)) {
            let exact = PI / z;
            assert!((v - exact).norm() < 0.01 * exact.norm());
        }
    }

    #[test]
    fn grid_transform_agrees_with_point_evaluation_off_support() {
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        let f = GridFunction::from_real_fn(grid, |z| if z.re < -0.5 { 1.0 + z.im } else { 0.0 }).unwrap();
        let full = cauchy_transform(&f);
        let pts: Vec<Complex64> = (0..grid.len()).filter(|&i| grid.center(i).re > 0.0).map(|i| grid.center(i)).collect();
        let at = cauchy_transform_at(&f, &pts);
        let mut k = 0;
        for i in 0..grid.len() {
            if grid.center(i).re > 0.0 {
                assert!((full.values()[i] - at[k]).norm() < 1e-13);
                k += 1;
            }
        }
    }

    #[test]
    fn linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grid = ComplexGrid::square(-1.0, 1.0, 12).unwrap();
        for _ in 0..5 {
            let f = random_fn(grid, &mut rng);
            let g = random_fn(grid, &mut rng);
            let lhs = cauchy_transform(&f.add(&g).unwrap());
            let rhs = cauchy_transform(&f).add(&cauchy_transform(&g)).unwrap();
            let scale = lhs.max_abs().max(1.0);
            assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn constant_symbol_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let grid = ComplexGrid::square(-1.0, 1.0, 10).unwrap();
        let f = random_fn(grid, &mut rng);
        let b = GridFunction::from_fn(grid, |_| c(2.0, -1.0)).unwrap();
        for rule in [SelfCell::Zero, SelfCell::Gradient] {
            assert_eq!(commutator_with(&b, &f, rule).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn identity_symbol_collapses_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        let f = random_fn(grid, &mut rng);
        let b = GridFunction::from_fn(grid, |z| z).unwrap();
        let out = commutator(&b, &f).unwrap();
        let total = f.integral();
        for v in out.values() {
            assert!((v - total).norm() <= 1e-12 * total.norm().max(1.0));
        }
    }

    #[test]
    fn matches_difference_form_with_zero_self_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let grid = ComplexGrid::square(-1.0, 1.0, 12).unwrap();
        let b = random_fn(grid, &mut rng);
        let f = random_fn(grid, &mut rng);
        let direct = commutator_with(&b, &f, SelfCell::Zero).unwrap();
        let split = b.mul(&cauchy_transform(&f)).unwrap().sub(&cauchy_transform(&b.mul(&f).unwrap())).unwrap();
        assert!(direct.sub(&split).unwrap().max_abs() <= 1e-9 * direct.max_abs().max(1.0));
    }

    #[test]
    fn bilinear_adjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = ComplexGrid::square(-1.0, 1.0, 10).unwrap();
        let b = random_fn(grid, &mut rng);
        let f = random_fn(grid, &mut rng);
        let u = random_fn(grid, &mut rng);
        for rule in [SelfCell::Zero, SelfCell::Gradient] {
            let lhs = commutator_with(&b, &f, rule).unwrap().mul(&u).unwrap().integral();
            let rhs = f.mul(&commutator_with(&b, &u, rule).unwrap()).unwrap().integral();
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn mismatched_grids_rejected() {
        let g1 = ComplexGrid::square(-1.0, 1.0, 4).unwrap();
        let g2 = ComplexGrid::square(-1.0, 1.0, 5).unwrap();
        assert!(commutator(&GridFunction::zeros(g1), &GridFunction::zeros(g2)).is_err());
    }
}

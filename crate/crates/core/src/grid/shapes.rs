//! Exact cell-fraction samplings of simple sets, used as test inputs whose
//! quadrature error is second order rather than staircase-limited.

use num_complex::Complex64;

use super::{ComplexGrid, Cube, GridFunction};
use crate::error::Result;

/// Cell values equal to the fraction of each cell covered by the disk.
pub fn disk_fraction(grid: &ComplexGrid, center: Complex64, radius: f64) -> Result<GridFunction> {
    let area = grid.cell_area();
    let vals: Vec<f64> = (0..grid.len())
        .map(|idx| {
            let cell = grid.cell_cube(idx);
            let (x0, y0) = (cell.corner.re - center.re, cell.corner.im - center.im);
            disk_rect_area(radius, x0, x0 + cell.side, y0, y0 + cell.side) / area
        })
        .collect();
    GridFunction::from_real(*grid, &vals)
}

/// Cell values equal to the fraction of each cell covered by `q`.
pub fn cube_fraction(grid: &ComplexGrid, q: &Cube) -> Result<GridFunction> {
    let mut vals = vec![0.0; grid.len()];
    for (idx, w) in grid.overlap(q) {
        vals[idx] = w / grid.cell_area();
    }
    GridFunction::from_real(*grid, &vals)
}

/// Area of `{x² + y² < r²} ∩ [x0, x1) × [y0, y1)`.
pub fn disk_rect_area(r: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let a = corner_area(r, x1, y1) - corner_area(r, x0, y1) - corner_area(r, x1, y0) + corner_area(r, x0, y0);
    a.max(0.0)
}

// Area of the disk part with u ≤ x and v ≤ y.
fn corner_area(r: f64, x: f64, y: f64) -> f64 {
    let x = x.clamp(-r, r);
    if y <= -r {
        return 0.0;
    }
    // ∫ √(r² − u²) du
    let s = |u: f64| {
        let u = u.clamp(-r, r);
        0.5 * (u * (r * r - u * u).max(0.0).sqrt() + r * r * (u / r).asin())
    };
    if y >= r {
        return 2.0 * (s(x) - s(-r));
    }
    let w = (r * r - y * y).sqrt();
    // |u| ≤ w: chord clipped at y gives y + √(r²−u²); |u| > w: full chord if y ≥ 0, else nothing.
    let inner = |a: f64, b: f64| if b > a { y * (b - a) + s(b) - s(a) } else { 0.0 };
    let outer = |a: f64, b: f64| if b > a && y >= 0.0 { 2.0 * (s(b) - s(a)) } else { 0.0 };
    outer(-r, x.min(-w)) + inner(-w, x.min(w)) + outer(w, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn whole_and_quarter_disk() {
        assert!((disk_rect_area(1.0, -2.0, 2.0, -2.0, 2.0) - PI).abs() < 1e-14);
        assert!((disk_rect_area(1.0, 0.0, 2.0, 0.0, 2.0) - PI / 4.0).abs() < 1e-14);
        assert!((disk_rect_area(2.0, -1.0, 1.0, -1.0, 1.0) - 4.0).abs() < 1e-14);
        assert_eq!(disk_rect_area(1.0, 2.0, 3.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn matches_monte_carlo_style_subsampling() {
        // Half-plane strip through the disk: analytic segment area.
        let r = 1.0f64;
        let a = 0.3f64;
        let segment = r * r * (a / r).acos() - a * (r * r - a * a).sqrt();
        assert!((disk_rect_area(r, a, 5.0, -5.0, 5.0) - segment).abs() < 1e-14);
        assert!((disk_rect_area(r, -5.0, 5.0, -5.0, -a) - segment).abs() < 1e-14);
    }

    #[test]
    fn fractions_sum_to_disk_area() {
        let grid = ComplexGrid::square(-1.5, 1.5, 37).unwrap();
        let f = disk_fraction(&grid, Complex64::new(0.1, -0.2), 1.0).unwrap();
        assert!((f.integral().re - PI).abs() < 1e-12);
    }
}

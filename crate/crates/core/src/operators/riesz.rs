// I_α f(x) = ∫ f(y) |x−y|^{α−2} dA(y) in the plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::par::map_indices;

/// `∫_cell |x−y|^{α−2} dA(y)` for a square cell of side `h` centred at `x`:
/// the inscribed disk exactly, the four corner pieces at their centroid.
fn self_cell_weight(h: f64, alpha: f64) -> f64 {
    let a = h / 2.0;
    let disk = 2.0 * PI * a.powf(alpha) / alpha;
    let rest = h * h * (1.0 - PI / 4.0);
    // Centroid of [0,a]² minus the quarter disk sits at a/(6(1 − π/4)) per axis.
    let d = std::f64::consts::SQRT_2 * a / (6.0 * (1.0 - PI / 4.0));
    disk + rest * d.powf(alpha - 2.0)
}

pub fn riesz_potential(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidExponent(format!("Riesz potential needs 0 < α < 2, got {alpha}")));
    }
    let grid = *f.grid();
    let centers = grid.centers();
    let vals = f.values();
    let area = grid.cell_area();
    let own = self_cell_weight(grid.h(), alpha);
    let e = (alpha - 2.0) / 2.0;
    let out = map_indices(grid.len(), |i| {
        let z = centers[i];
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (&c, &v)) in centers.iter().zip(vals).enumerate() {
            if j != i && v != Complex64::new(0.0, 0.0) {
                acc += v * (z - c).norm_sqr().powf(e);
            }
        }
        acc * area + vals[i] * own
    });
    GridFunction::new(grid, out)
}

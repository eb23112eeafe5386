// f_Q = sgn(b − b_Q) χ_Q (or |b − b_Q|^{φ−1} sgn(b − b_Q) χ_Q) and
// g_Q = (x − c)/|Q| χ_Q. Cells cut by ∂Q are weighted by the covered fraction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{cube_average, Cube, GridFunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WitnessVariant {
    Linear,
    PhiPower(f64),
}

/// `conj(w)/|w|`, so that `w · sign(w) = |w|`; `sign(0) = 0`.
pub fn sign(w: Complex64) -> Complex64 {
    let r = w.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        w.conj() / r
    }
}

pub fn necessity_witness(b: &GridFunction, q: &Cube, variant: WitnessVariant) -> Result<(GridFunction, GridFunction)> {
    let grid = *b.grid();
    let tol = 1e-12 * grid.h();
    if q.corner.re < grid.x0() - tol
        || q.corner.im < grid.y0() - tol
        || q.corner.re + q.side > grid.x1() + tol
        || q.corner.im + q.side > grid.y1() + tol
    {
        return Err(Error::Domain(format!("cube {q:?} is not inside the grid")));
    }
    let power = match variant {
        WitnessVariant::Linear => 1.0,
        WitnessVariant::PhiPower(phi) if phi > 1.0 && phi.is_finite() => phi - 1.0,
        WitnessVariant::PhiPower(phi) => return Err(Error::InvalidParameter(format!("φ must exceed 1, got {phi}"))),
    };
    let mean = cube_average(b, q)?;
    let center = q.center();
    let area = q.area();
    let cell = grid.cell_area();
    let mut f = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut g = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (i, w) in grid.overlap(q) {
        let frac = w / cell;
        let d = b.values()[i] - mean;
        let mag = if power == 1.0 { 1.0 } else { d.norm().powf(power) };
        f[i] = sign(d) * mag * frac;
        g[i] = (grid.center(i) - center) / area * frac;
    }
    Ok((GridFunction::new(grid, f)?, GridFunction::new(grid, g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{cube_integral, ComplexGrid};

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn constant_symbol_gives_zero_sign_pattern() {
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        let b = GridFunction::from_real_fn(grid, |_| 2.0).unwrap();
        let (f, g) = necessity_witness(&b, &Cube::new(c(-0.5, -0.5), 1.0).unwrap(), WitnessVariant::Linear).unwrap();
        assert_eq!(f.max_abs(), 0.0);
        assert!(g.max_abs() > 0.0);
    }

    #[test]
    fn linear_bump_sup_norm() {
        // Cell centres approach the corners as the grid is refined.
        let grid = ComplexGrid::square(-1.0, 1.0, 256).unwrap();
        let b = GridFunction::from_real_fn(grid, |z| z.re).unwrap();
        let q = Cube::new(c(-0.5, -0.5), 1.0).unwrap();
        let (_, g) = necessity_witness(&b, &q, WitnessVariant::Linear).unwrap();
        let exact = std::f64::consts::SQRT_2 / 2.0 * q.side / q.area();
        assert!(g.max_abs() <= exact);
        assert!(exact - g.max_abs() < 2.0 * grid.h());
    }

    #[test]
    fn oscillation_identity() {
        let grid = ComplexGrid::square(-1.0, 1.0, 20).unwrap();
        let b = GridFunction::from_fn(grid, |z| c((3.0 * z.re).sin(), z.im * z.re)).unwrap();
        // Cube cutting through cells.
        let q = Cube::new(c(-0.63, -0.41), 0.97).unwrap();
        let (f, _) = necessity_witness(&b, &q, WitnessVariant::Linear).unwrap();
        let mean = cube_average(&b, &q).unwrap();
        let osc: f64 = grid.overlap(&q).iter().map(|&(i, w)| w * (b.values()[i] - mean).norm()).sum::<f64>() / q.area();
        let centered = b.map(|v| v - mean).unwrap();
        let pairing = centered.mul(&f).unwrap().integral() / q.area();
        assert!((pairing.re - osc).abs() < 1e-12 && pairing.im.abs() < 1e-12);
        let _ = cube_integral(&f, &q).unwrap();
    }

    #[test]
    fn phi_power_and_domain_errors() {
        let grid = ComplexGrid::square(-1.0, 1.0, 8).unwrap();
        let b = GridFunction::from_real_fn(grid, |z| z.re).unwrap();
        let q = Cube::new(c(0.0, 0.0), 1.0).unwrap();
        let (f, _) = necessity_witness(&b, &q, WitnessVariant::PhiPower(3.0)).unwrap();
        // b − b_Q ranges over ±(3/8), so |f| ≤ (3/8)².
        assert!(f.max_abs() <= 0.375f64.powi(2) + 1e-15);
        assert!(necessity_witness(&b, &q, WitnessVariant::PhiPower(1.0)).is_err());
        assert!(necessity_witness(&b, &Cube::new(c(0.5, 0.5), 1.0).unwrap(), WitnessVariant::Linear).is_err());
        assert_eq!(sign(c(0.0, 0.0)), c(0.0, 0.0));
    }
}

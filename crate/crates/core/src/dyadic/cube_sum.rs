// Σ_{Q ⊆ P dyadic} |Q|^{3/2+β/2} f_Q against C_β |P|^{3/2+β/2} f_P.

use serde::{Deserialize, Serialize};

use super::DyadicCube;
use crate::error::{Error, Result};
use crate::grid::{cube_average, cube_integral, GridFunction};

/// Depth up to which descendants are enumerated one by one; deeper levels
/// use `Σ_{ℓ(Q)=s} ∫_Q f = ∫_P f`.
const EXPLICIT_DEPTH: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubeSumReport {
    pub partial_sum: f64,
    pub closed_form: f64,
    pub c_beta: f64,
}

pub fn geometric_cube_sum(p: &DyadicCube, beta: f64, f: &GridFunction, max_depth: u32) -> Result<CubeSumReport> {
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(Error::Divergent(format!("cube sum diverges for β = {beta} ≤ −1")));
    }
    let e = 1.5 + beta / 2.0;
    let c_beta = 1.0 / (1.0 - 2f64.powf(-(1.0 + beta)));
    let pc = p.to_cube();
    let f_p = cube_average(f, &pc)?.re;
    let int_p = cube_integral(f, &pc)?.re;
    let mut partial_sum = 0.0;
    for j in 0..=max_depth {
        let area = 4f64.powi(p.level - j as i32);
        let term = if j <= EXPLICIT_DEPTH {
            p.descendants(j)
                .iter()
                .map(|q| cube_average(f, &q.to_cube()).map(|a| a.re))
                .sum::<Result<f64>>()?
                * area.powf(e)
        } else {
            area.powf(e - 1.0) * int_p
        };
        partial_sum += term;
    }
    Ok(CubeSumReport { partial_sum, closed_form: c_beta * p.area().powf(e) * f_p, c_beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::DyadicShift;
    use crate::grid::ComplexGrid;

    fn ones() -> GridFunction {
        GridFunction::from_real_fn(ComplexGrid::new(0.0, 0.0, 1.0 / 64.0, 64, 64).unwrap(), |_| 1.0).unwrap()
    }

    #[test]
    fn constant_beta_zero_converges_to_two() {
        let p = DyadicCube::new(DyadicShift::ZERO, 0, (0, 0));
        let r = geometric_cube_sum(&p, 0.0, &ones(), 20).unwrap();
        assert_eq!(r.c_beta, 2.0);
        assert!((r.closed_form - 2.0).abs() < 1e-14);
        let series: f64 = (0..=20).map(|j| 2f64.powi(-j)).sum();
        assert!((r.partial_sum - series).abs() < 1e-12);
        assert!((r.closed_form - r.partial_sum - 2f64.powi(-20)).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_for_several_betas() {
        let p = DyadicCube::new(DyadicShift::ZERO, 0, (0, 0));
        for beta in [-0.5, 0.0, 0.5, 1.0] {
            let r = geometric_cube_sum(&p, beta, &ones(), 20).unwrap();
            let q = 2f64.powf(-(1.0 + beta));
            let bound = r.closed_form * q.powi(21) / (1.0 - q);
            assert!((r.partial_sum - r.closed_form).abs() <= bound * (1.0 + 1e-9), "β = {beta}");
        }
        let r = geometric_cube_sum(&p, 1.0, &ones(), 3).unwrap();
        assert!((r.c_beta - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_divergent_betas() {
        let p = DyadicCube::new(DyadicShift::ZERO, 0, (0, 0));
        assert!(matches!(geometric_cube_sum(&p, -1.0, &ones(), 3), Err(Error::Divergent(_))));
        let near = geometric_cube_sum(&p, -0.999, &ones(), 0).unwrap();
        assert!(near.c_beta > 100.0);
    }

    #[test]
    fn explicit_and_identity_branches_agree() {
        let grid = ComplexGrid::new(0.0, 0.0, 1.0 / 64.0, 64, 64).unwrap();
        let f = GridFunction::from_real_fn(grid, |z| 1.0 + z.re * z.im).unwrap();
        let p = DyadicCube::new(DyadicShift::ZERO, 0, (0, 0));
        let e = 1.5 + 0.25;
        let a = geometric_cube_sum(&p, 0.5, &f, 6).unwrap().partial_sum;
        let b = geometric_cube_sum(&p, 0.5, &f, 7).unwrap().partial_sum;
        let oracle: f64 = p
            .descendants(7)
            .iter()
            .map(|q| cube_average(&f, &q.to_cube()).unwrap().re * q.area().powf(e))
            .sum();
        assert!((b - a - oracle).abs() < 1e-12);
    }
}

// ‖f‖_{A,Q} = inf{λ > 0 : ⨍_Q A(|f|/λ) ≤ 1}.

use super::YoungFunction;
use crate::error::{Error, Result};
use crate::grid::{Cube, GridFunction};

/// Orlicz average of a step function given as `(|value|, area)` atoms on a
/// cube of area `cube_area`. Parameters of `a` are assumed valid.
pub fn orlicz_average_atoms(atoms: &[(f64, f64)], cube_area: f64, a: &YoungFunction) -> f64 {
    let top = atoms.iter().filter(|x| x.1 > 0.0).map(|x| x.0).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let mean = |x: f64| {
        let lam = x.exp();
        atoms.iter().map(|&(v, w)| w * a.value(v / lam)).sum::<f64>() / cube_area
    };
    // mean is decreasing in log λ; find the crossing of 1.
    let x0 = top.ln();
    let (mut lo, mut hi) = (x0 - 1.0, x0 + 1.0);
    let mut step = 1.0;
    while mean(lo) <= 1.0 {
        step *= 2.0;
        lo -= step;
    }
    step = 1.0;
    while mean(hi) > 1.0 {
        step *= 2.0;
        hi += step;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        if mean(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

pub fn orlicz_average(f: &GridFunction, q: &Cube, a: &YoungFunction) -> Result<f64> {
    a.validate()?;
    let cells = f.grid().overlap(q);
    if cells.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let atoms: Vec<(f64, f64)> = cells.iter().map(|&(i, w)| (f.values()[i].norm(), w)).collect();
    Ok(orlicz_average_atoms(&atoms, q.area(), a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{normalized_lp_on_cube, ComplexGrid};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn power_case_is_normalized_lp() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        for _ in 0..30 {
            let f = GridFunction::new(
                grid,
                (0..grid.len()).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect(),
            )
            .unwrap();
            let q = Cube::new(Complex64::new(rng.gen_range(-1.0..0.0), rng.gen_range(-1.0..0.0)), rng.gen_range(0.1..1.0)).unwrap();
            let p = rng.gen_range(1.0..6.0);
            let o = orlicz_average(&f, &q, &YoungFunction::Power(p)).unwrap();
            let l = normalized_lp_on_cube(&f, &q, p).unwrap();
            assert!((o - l).abs() <= 1e-9 * l, "p = {p}: {o} vs {l}");
        }
    }

    #[test]
    fn constants_and_zero() {
        let grid = ComplexGrid::new(0.0, 0.0, 0.25, 4, 4).unwrap();
        let q = Cube::new(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let a = YoungFunction::PowerLog(2.0, 1.0);
        let c = 3.0;
        let f = GridFunction::from_real_fn(grid, |_| c).unwrap();
        let expect = c / a.inverse(1.0).unwrap();
        assert!((orlicz_average(&f, &q, &a).unwrap() - expect).abs() < 1e-12 * expect);
        assert_eq!(orlicz_average(&GridFunction::zeros(grid), &q, &a).unwrap(), 0.0);
        let far = Cube::new(Complex64::new(5.0, 5.0), 1.0).unwrap();
        assert!(orlicz_average(&f, &far, &a).is_err());
    }
}

use num_complex::Complex64;

use super::{Cube, GridFunction};
use crate::error::{Error, Result};

/// `(∫ |f|^p dA)^{1/p}` by the midpoint rule.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(format!("L^p norm needs p >= 1, got {p}")));
    }
    let area = f.grid().cell_area();
    let sum: f64 = f.values().iter().map(|v| v.norm().powf(p)).sum();
    Ok((sum * area).powf(1.0 / p))
}

/// Weak-type quasinorm `sup_λ λ |{|f| > λ}|^{1/q}`.
///
/// On a step function the supremum is approached as `λ` rises to one of the
/// sampled levels, so it is the maximum over levels `v` of
/// `v · |{|f| ≥ v}|^{1/q}`.
pub fn weak_lq_quasinorm(f: &GridFunction, q: f64) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::InvalidExponent(format!("weak L^q needs q >= 1, got {q}")));
    }
    let area = f.grid().cell_area();
    Ok(weak_quasinorm_weighted(f.values().iter().map(|v| (v.norm(), area)), q))
}

/// Weak quasinorm of a step function given as `(|value|, measure)` atoms.
/// `q` must be positive; callers validate the exponent range.
pub fn weak_quasinorm_weighted(atoms: impl IntoIterator<Item = (f64, f64)>, q: f64) -> f64 {
    let mut atoms: Vec<(f64, f64)> = atoms.into_iter().filter(|&(v, w)| v > 0.0 && w > 0.0).collect();
    atoms.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = 0.0f64;
    let mut measure = 0.0;
    let mut k = 0;
    while k < atoms.len() {
        let level = atoms[k].0;
        while k < atoms.len() && atoms[k].0 == level {
            measure += atoms[k].1;
            k += 1;
        }
        best = best.max(level * measure.powf(1.0 / q));
    }
    best
}

/// `∫_Q f dA`, cells weighted by overlap area.
pub fn cube_integral(f: &GridFunction, q: &Cube) -> Result<Complex64> {
    let weights = f.grid().overlap(q);
    if weights.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let vals = f.values();
    Ok(weights.iter().map(|&(idx, w)| vals[idx] * w).sum())
}

/// `(1/|Q|) ∫_Q f dA`.
pub fn cube_average(f: &GridFunction, q: &Cube) -> Result<Complex64> {
    Ok(cube_integral(f, q)? / q.area())
}

/// `(⨍_Q |f|^p)^{1/p}`.
pub fn normalized_lp_on_cube(f: &GridFunction, q: &Cube, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(format!("normalized L^p needs p >= 1, got {p}")));
    }
    let weights = f.grid().overlap(q);
    if weights.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let vals = f.values();
    let s: f64 = weights.iter().map(|&(idx, w)| w * vals[idx].norm().powf(p)).sum();
    Ok((s / q.area()).powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KolmogorovReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of `∫_X |f|^p ≤ q/(q−p) |X|^{1−p/q} ‖f‖^p_{L^{q,∞}(X)}` with
/// area measure restricted to `X`. Holds up to a `1e-9` relative slack.
pub fn kolmogorov_check(f: &GridFunction, x: &Cube, p: f64, q: f64) -> Result<KolmogorovReport> {
    kolmogorov_check_tol(f, x, p, q, 1e-9)
}

pub fn kolmogorov_check_tol(
    f: &GridFunction,
    x: &Cube,
    p: f64,
    q: f64,
    tol: f64,
) -> Result<KolmogorovReport> {
    if !(p > 0.0 && p < q && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("Kolmogorov needs 0 < p < q < ∞, got p={p}, q={q}")));
    }
    let weights = f.grid().overlap(x);
    if weights.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let vals = f.values();
    let lhs: f64 = weights.iter().map(|&(idx, w)| w * vals[idx].norm().powf(p)).sum();
    let weak = weak_quasinorm_weighted(weights.iter().map(|&(idx, w)| (vals[idx].norm(), w)), q);
    let rhs = q / (q - p) * x.area().powf(1.0 - p / q) * weak.powf(p);
    Ok(KolmogorovReport { lhs, rhs, holds: lhs <= rhs * (1.0 + tol) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ComplexGrid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_grid(n: usize) -> ComplexGrid {
        ComplexGrid::square(0.0, 1.0, n).unwrap()
    }

    fn random_fn(grid: ComplexGrid, rng: &mut ChaCha8Rng) -> GridFunction {
        let vals = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        GridFunction::new(grid, vals).unwrap()
    }

    // Neumaier-compensated summation; independent of the plain sum in lp_norm.
    fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
        let (mut s, mut c) = (0.0f64, 0.0f64);
        for x in xs {
            let t = s + x;
            if s.abs() >= x.abs() {
                c += (s - t) + x;
            } else {
                c += (x - t) + s;
            }
            s = t;
        }
        s + c
    }

    #[test]
    fn lp_norm_of_unit_indicator_is_one() {
        let f = GridFunction::from_real_fn(unit_grid(8), |_| 1.0).unwrap();
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert!((lp_norm(&f, p).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn lp_norm_of_scaled_indicator() {
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        let q = Cube::new(Complex64::new(-0.5, -0.5), 0.5).unwrap();
        let f = GridFunction::from_real_fn(grid, |z| if q.contains(z) { 3.0 } else { 0.0 }).unwrap();
        for p in [1.0, 2.0, 3.5] {
            let expected = 3.0 * 0.25f64.powf(1.0 / p);
            assert!((lp_norm(&f, p).unwrap() - expected).abs() < 1e-13 * expected);
        }
    }

    #[test]
    fn lp_norm_matches_compensated_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_fn(unit_grid(16), &mut rng);
        for p in [1.0, 2.0, 3.3] {
            let area = f.grid().cell_area();
            let oracle = compensated_sum(f.values().iter().map(|v| v.norm().powf(p) * area)).powf(1.0 / p);
            let got = lp_norm(&f, p).unwrap();
            assert!((got - oracle).abs() <= 1e-12 * oracle, "{got} vs {oracle}");
        }
    }

    #[test]
    fn lp_norm_rejects_small_exponent() {
        let f = GridFunction::zeros(unit_grid(2));
        assert!(matches!(lp_norm(&f, 0.5), Err(Error::InvalidExponent(_))));
        assert!(matches!(weak_lq_quasinorm(&f, 0.9), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn weak_norm_of_indicator_and_zero() {
        let grid = ComplexGrid::square(0.0, 2.0, 8).unwrap();
        let q = Cube::new(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let f = GridFunction::from_real_fn(grid, |z| if q.contains(z) { 1.0 } else { 0.0 }).unwrap();
        for qq in [1.0, 2.0, 5.0] {
            assert!((weak_lq_quasinorm(&f, qq).unwrap() - 1.0).abs() < 1e-14);
        }
        let g = GridFunction::zeros(grid);
        assert_eq!(weak_lq_quasinorm(&g, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn weak_norm_matches_threshold_sweep_on_annulus() {
        let grid = ComplexGrid::square(-2.0, 2.0, 40).unwrap();
        let f = GridFunction::from_real_fn(grid, |z| {
            let r = z.norm();
            if (0.5..=2.0).contains(&r) { 1.0 / r } else { 0.0 }
        })
        .unwrap();
        let got = weak_lq_quasinorm(&f, 2.0).unwrap();
        let area = grid.cell_area();
        let abs: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
        let measure_above = |lambda: f64| abs.iter().filter(|&&a| a > lambda).count() as f64 * area;
        // Brute-force count just below every sampled level.
        let mut oracle = 0.0f64;
        for &v in abs.iter().filter(|&&v| v > 0.0) {
            let lambda = v * (1.0 - 1e-12);
            oracle = oracle.max(lambda * measure_above(lambda).sqrt());
        }
        assert!((got - oracle).abs() <= 1e-6 * oracle, "{got} vs {oracle}");
        // A uniform sweep of 10^4 thresholds never exceeds the supremum.
        let top = f.max_abs();
        for k in 0..10_000 {
            let lambda = top * k as f64 / 10_000.0;
            assert!(lambda * measure_above(lambda).sqrt() <= got * (1.0 + 1e-12));
        }
    }

    #[test]
    fn cube_average_basics() {
        let grid = ComplexGrid::square(-1.0, 1.0, 20).unwrap();
        let c = GridFunction::from_fn(grid, |_| Complex64::new(2.0, -1.0)).unwrap();
        let q = Cube::new(Complex64::new(-0.3, 0.1), 0.45).unwrap();
        assert!((cube_average(&c, &q).unwrap() - Complex64::new(2.0, -1.0)).norm() < 1e-13);

        let re = GridFunction::from_real_fn(grid, |z| z.re).unwrap();
        let center = Complex64::new(0.2, -0.3);
        let q = Cube::centered(center, 0.6).unwrap();
        assert!((cube_average(&re, &q).unwrap().re - 0.2).abs() < 1e-12);

        let far = Cube::new(Complex64::new(5.0, 5.0), 1.0).unwrap();
        assert!(matches!(cube_average(&re, &far), Err(Error::EmptyIntersection)));
    }

    #[test]
    fn cube_average_on_whole_cells_matches_weighted_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grid = unit_grid(16);
        let f = random_fn(grid, &mut rng);
        let q = Cube::new(Complex64::new(0.25, 0.5), 0.375).unwrap(); // 6×6 cells
        let mut oracle = Complex64::new(0.0, 0.0);
        for j in 8..14 {
            for i in 4..10 {
                oracle += f.get(i, j) * grid.cell_area();
            }
        }
        oracle /= q.area();
        assert!((cube_average(&f, &q).unwrap() - oracle).norm() < 1e-12);
    }

    #[test]
    fn normalized_norm_jensen_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid = unit_grid(12);
        let vals: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.0..3.0)).collect();
        let f = GridFunction::from_real(grid, &vals).unwrap();
        let q = Cube::new(Complex64::new(0.1, 0.2), 0.7).unwrap();
        let n1 = normalized_lp_on_cube(&f, &q, 1.0).unwrap();
        let n2 = normalized_lp_on_cube(&f, &q, 2.0).unwrap();
        let n4 = normalized_lp_on_cube(&f, &q, 4.0).unwrap();
        assert!(n1 <= n2 && n2 <= n4);
        assert!((n1 - cube_average(&f, &q).unwrap().re).abs() < 1e-13);
        let c = GridFunction::from_real_fn(grid, |_| -1.5).unwrap();
        for p in [1.0, 2.5, 6.0] {
            assert!((normalized_lp_on_cube(&c, &q, p).unwrap() - 1.5).abs() < 1e-13);
        }
    }

    #[test]
    fn kolmogorov_examples() {
        let grid = unit_grid(10);
        let x = Cube::new(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let ind = GridFunction::from_real_fn(grid, |_| 1.0).unwrap();
        let r = kolmogorov_check(&ind, &x, 1.0, 2.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-13 && (r.rhs - 2.0).abs() < 1e-13 && r.holds);
        let zero = GridFunction::zeros(grid);
        let r = kolmogorov_check(&zero, &x, 1.0, 2.0).unwrap();
        assert!(r.lhs == 0.0 && r.rhs == 0.0 && r.holds);
        assert!(matches!(kolmogorov_check(&ind, &x, 2.0, 2.0), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn kolmogorov_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        let grid = unit_grid(16);
        for _ in 0..100 {
            let vals: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.0..1.0f64).powi(3) * 10.0).collect();
            let f = GridFunction::from_real(grid, &vals).unwrap();
            let q = rng.gen_range(0.2..4.0);
            let p = rng.gen_range(0.05..q);
            let side = rng.gen_range(0.1..0.9);
            let x = Cube::new(Complex64::new(rng.gen_range(0.0..1.0 - side), rng.gen_range(0.0..1.0 - side)), side).unwrap();
            assert!(kolmogorov_check(&f, &x, p, q).unwrap().holds);
        }
    }
}

// The `verify` suite: each check runs seeded trials and produces one report.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::VerifyConfig;
use super::oscillation::mean_oscillation_growth;
use super::report::VerificationReport;
use super::scaling::{dilation_scaling_check, HomogeneousSymbol};
use crate::dyadic::{
    cover_cube, cz_decompose, geometric_cube_sum, sparse_select, verify_sparse, DyadicCube, DyadicShift,
    TreePool,
};
use crate::error::{Error, Result};
use crate::grid::{kolmogorov_check_tol, normalized_lp_on_cube, ComplexGrid, Cube, GridFunction};
use crate::operators::{domination_check_tol, LevelWindow};
use crate::par::map_indices;
use crate::spaces::{associate_check, associate_young, bpq_check, orlicz_average, CubeFamily, YoungFunction};
use crate::Complex64;

pub const CHECK_NAMES: [&str; 11] = [
    "domination",
    "kolmogorov",
    "cz-properties",
    "sparse-alpha",
    "cube-sum",
    "one-third-cover",
    "oscillation-growth",
    "scaling",
    "orlicz-reduction",
    "associate-young",
    "bpq",
];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub reports: Vec<VerificationReport>,
    /// 0 when every report holds, 1 otherwise.
    pub exit_code: i32,
}

/// Resolves `all` and rejects unknown names; order and duplicates are kept
/// as given.
pub fn expand_suite<S: AsRef<str>>(names: &[S]) -> Result<Vec<&'static str>> {
    let mut out = Vec::new();
    for n in names {
        let n = n.as_ref().trim();
        if n.is_empty() {
            continue;
        }
        if n == "all" {
            out.extend(CHECK_NAMES);
            continue;
        }
        match CHECK_NAMES.iter().find(|c| **c == n) {
            Some(c) => out.push(*c),
            None => return Err(Error::UnknownCheck(n.to_string())),
        }
    }
    Ok(out)
}

/// Runs the named checks and, with `out_dir`, writes `<check>.report` and
/// `<check>.json` for each.
pub fn run_verify<S: AsRef<str>>(suite: &[S], config: &VerifyConfig, out_dir: Option<&Path>) -> Result<VerifyOutcome> {
    let checks = expand_suite(suite)?;
    let mut reports = Vec::with_capacity(checks.len());
    for name in checks {
        reports.push(run_check(name, config)?);
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        for r in &reports {
            std::fs::write(dir.join(format!("{}.report", r.check_name)), r.to_text())?;
            std::fs::write(dir.join(format!("{}.json", r.check_name)), r.to_json())?;
        }
    }
    let exit_code = if reports.iter().all(|r| r.holds) { 0 } else { 1 };
    Ok(VerifyOutcome { reports, exit_code })
}

fn run_check(name: &str, c: &VerifyConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(name, c.seed);
    r.param("tol", c.tol);
    match name {
        "domination" => domination(c, &mut r)?,
        "kolmogorov" => kolmogorov(c, &mut r)?,
        "cz-properties" => cz_properties(c, &mut r)?,
        "sparse-alpha" => sparse_alpha(c, &mut r)?,
        "cube-sum" => cube_sum(&mut r)?,
        "one-third-cover" => one_third_cover(c, &mut r)?,
        "oscillation-growth" => oscillation_growth(c, &mut r)?,
        "scaling" => scaling(&mut r)?,
        "orlicz-reduction" => orlicz_reduction(c, &mut r)?,
        "associate-young" => associate(c, &mut r)?,
        "bpq" => bpq(c, &mut r)?,
        other => return Err(Error::UnknownCheck(other.to_string())),
    }
    Ok(r)
}

/// Independent stream per (check, trial) so parallel trials stay reproducible.
fn trial_rng(seed: u64, check: &str, trial: usize) -> ChaCha8Rng {
    let idx = CHECK_NAMES.iter().position(|c| *c == check).unwrap_or(CHECK_NAMES.len()) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((idx << 32) | trial as u64);
    rng
}

/// Nonnegative random field supported on a random sub-rectangle of cells.
fn random_density(grid: ComplexGrid, rng: &mut ChaCha8Rng) -> Result<GridFunction> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (i0, i1) = ordered(rng.gen_range(0..nx), rng.gen_range(0..nx));
    let (j0, j1) = ordered(rng.gen_range(0..ny), rng.gen_range(0..ny));
    let mut vals = vec![0.0; grid.len()];
    for (idx, v) in vals.iter_mut().enumerate() {
        let (i, j) = grid.coords(idx);
        let u: f64 = rng.gen();
        if (i0..=i1).contains(&i) && (j0..=j1).contains(&j) {
            *v = u * u;
        }
    }
    GridFunction::from_real(grid, &vals)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Random cube with corner and side inside the grid's bounding square.
fn random_cube(grid: &ComplexGrid, rng: &mut ChaCha8Rng) -> Result<Cube> {
    let bb = grid.bounding_cube();
    let side = bb.side * rng.gen_range(0.05..1.0);
    let x = bb.corner.re + rng.gen::<f64>() * (bb.side - side);
    let y = bb.corner.im + rng.gen::<f64>() * (bb.side - side);
    Cube::new(Complex64::new(x, y), side)
}

fn domination(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    let n = c.domination_grid;
    let grid = ComplexGrid::square(-2.0, 2.0, n)?;
    let window = LevelWindow::for_grid(&grid);
    let bbox = grid.bounding_cube();
    let symbols = [HomogeneousSymbol::ReZ, HomogeneousSymbol::AbsPow(0.5), HomogeneousSymbol::LogAbs];
    let trials = map_indices(c.domination_trials, |t| {
        let mut rng = trial_rng(c.seed, "domination", t);
        let f = random_density(grid, &mut rng)?;
        let b = symbols[t % symbols.len()].sample(&grid)?;
        domination_check_tol(&b, &f, window, &bbox, c.tol)
    });
    let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;
    let relative = trials.iter().map(|d| if d.scale > 0.0 { d.min_slack / d.scale } else { 0.0 }).fold(f64::INFINITY, f64::min);
    let passed = trials.iter().filter(|d| d.holds).count();
    r.param("trials", c.domination_trials).param("grid", format!("{n}x{n} over [-2,2)^2")).param("symbols", "re, abspow:0.5, logabs");
    r.family(format!("levels {}..={}, all four shifts", window.k_min, window.k_max));
    r.measure("min_slack", trials.iter().map(|d| d.min_slack).fold(f64::INFINITY, f64::min));
    r.measure("min_relative_slack", relative);
    r.measure("max_lhs", trials.iter().map(|d| d.lhs_max).fold(0.0, f64::max));
    r.measure("trials_holding", passed as f64);
    r.require("all_trials", passed == trials.len());
    Ok(())
}

fn kolmogorov(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    let grid = ComplexGrid::square(0.0, 1.0, c.grid)?;
    let trials = map_indices(c.trials, |t| {
        let mut rng = trial_rng(c.seed, "kolmogorov", t);
        let f = random_density(grid, &mut rng)?;
        let x = random_cube(&grid, &mut rng)?;
        let p = rng.gen_range(0.25..4.0);
        let q = p * rng.gen_range(1.05..4.0);
        kolmogorov_check_tol(&f, &x, p, q, c.tol)
    });
    let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;
    let worst = trials.iter().filter(|k| k.rhs > 0.0).map(|k| k.lhs / k.rhs).fold(0.0, f64::max);
    let passed = trials.iter().filter(|k| k.holds).count();
    r.param("trials", c.trials).param("grid", format!("{0}x{0} over [0,1)^2", c.grid));
    r.family("random cubes inside the grid square");
    r.measure("max_lhs_over_rhs", worst).measure("trials_holding", passed as f64);
    r.require("all_trials", passed == trials.len());
    Ok(())
}

/// Grid of `n×n` cells of side `2^{-m}` placed on the lattice of shift `t`.
fn shifted_aligned_grid(t: DyadicShift, n: usize) -> Result<ComplexGrid> {
    let j = -(n.next_power_of_two().trailing_zeros() as i32);
    let h = 2f64.powi(j);
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let (ax, ay) = t.components();
    ComplexGrid::new(sign * ax * h, sign * ay * h, h, n, n)
}

fn cz_properties(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    let trials = map_indices(c.trials, |t| -> Result<(bool, f64, f64, f64)> {
        let mut rng = trial_rng(c.seed, "cz-properties", t);
        let shift = DyadicShift::ALL[rng.gen_range(0..4)];
        let grid = shifted_aligned_grid(shift, c.grid)?;
        let f = random_density(grid, &mut rng)?;
        let mean = f.integral().re / grid.bounding_cube().area();
        let lambda = mean * rng.gen_range(0.5..8.0) + 1e-3;
        let mut root = 0;
        let d = loop {
            match cz_decompose(&f, lambda, shift, root) {
                Err(Error::RootTooSmall { needed, .. }) if needed > root => root = needed,
                other => break other?,
            }
        };
        let p = d.check_properties();
        let ok = d.cell_aligned
            && p.holds()
            && p.max_ratio <= 4.0 * (1.0 + c.tol)
            && p.total_area <= p.area_bound * (1.0 + c.tol);
        let area_ratio = if p.area_bound > 0.0 { p.total_area / p.area_bound } else { 0.0 };
        Ok((ok, if d.cubes.is_empty() { f64::INFINITY } else { p.min_ratio }, p.max_ratio, area_ratio))
    });
    let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;
    let passed = trials.iter().filter(|t| t.0).count();
    r.param("trials", c.trials).param("grid", format!("{0}x{0} cells of side 2^-m on the shifted lattice", c.grid));
    r.family("maximal shifted dyadic cubes below the smallest admissible root level");
    r.measure("min_average_over_height", trials.iter().map(|t| t.1).fold(f64::INFINITY, f64::min));
    r.measure("max_average_over_height", trials.iter().map(|t| t.2).fold(0.0, f64::max));
    r.measure("max_area_over_bound", trials.iter().map(|t| t.3).fold(0.0, f64::max));
    r.measure("trials_holding", passed as f64);
    r.require("all_trials", passed == trials.len());
    Ok(())
}

fn sparse_alpha(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    // Grid [0,1)² is one child of the pool root, so the root itself is not
    // a lone top cube carrying the whole mass.
    let grid = ComplexGrid::square(0.0, 1.0, c.grid.next_power_of_two())?;
    let depth = 1 + grid.nx().trailing_zeros();
    let pool = TreePool::new(DyadicCube::new(DyadicShift::ZERO, 1, (0, 0)), depth);
    let trials = map_indices(c.trials, |t| -> Result<(f64, bool, usize)> {
        let mut rng = trial_rng(c.seed, "sparse-alpha", t);
        let g = random_density(grid, &mut rng)?;
        let p = rng.gen_range(1.1..4.0);
        let s = sparse_select(&g, p, &pool)?;
        let v = verify_sparse(&s);
        Ok((v.alpha_measured, v.disjoint, s.cubes.len()))
    });
    let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;
    let alpha = trials.iter().map(|t| t.0).fold(f64::INFINITY, f64::min);
    r.param("trials", c.trials).param("claimed_alpha", 0.5);
    r.family(format!("descendants of [0,2)^2 down to depth {depth}"));
    r.measure("min_alpha", alpha);
    r.measure("max_family_size", trials.iter().map(|t| t.2).max().unwrap_or(0) as f64);
    r.require("alpha", alpha >= 0.5 * (1.0 - c.tol));
    r.require("single_grid", trials.iter().all(|t| t.1));
    Ok(())
}

fn cube_sum(r: &mut VerificationReport) -> Result<()> {
    let depth = 20;
    let ones = GridFunction::from_real_fn(ComplexGrid::square(0.0, 1.0, 64)?, |_| 1.0)?;
    let p = DyadicCube::new(DyadicShift::ZERO, 0, (0, 0));
    r.param("depth", depth).param("f", "1 on [0,1)^2");
    r.family("standard dyadic descendants of [0,1)^2");
    let tol = r.parameters["tol"].parse::<f64>().unwrap_or(0.0);
    for beta in [-0.5, 0.0, 0.5, 1.0] {
        let s = geometric_cube_sum(&p, beta, &ones, depth)?;
        let ratio = 2f64.powf(-(1.0 + beta));
        let tail = s.closed_form * ratio.powi(depth as i32 + 1);
        let gap = s.closed_form - s.partial_sum;
        r.measure(&format!("gap.beta={beta}"), gap).measure(&format!("tail_bound.beta={beta}"), tail);
        r.measure(&format!("c_beta.beta={beta}"), s.c_beta);
        r.require(&format!("beta={beta}"), gap >= -tol.abs() * s.closed_form && gap <= tail + tol * s.closed_form);
        if beta == 0.0 {
            r.require("c_0", (s.c_beta - 2.0).abs() <= 1e-6);
        }
    }
    Ok(())
}

fn one_third_cover(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    let trials = map_indices(c.cover_trials, |t| -> Result<(bool, f64)> {
        let mut rng = trial_rng(c.seed, "one-third-cover", t);
        let side = 10f64.powf(rng.gen_range(-4.0..4.0));
        let corner = Complex64::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3));
        let q = Cube::new(corner, side)?;
        let (_, d) = cover_cube(&q);
        Ok((d.contains_cube_exact(&q), d.side() / side))
    });
    let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;
    let max_ratio = trials.iter().map(|t| t.1).fold(0.0, f64::max);
    let contained = trials.iter().filter(|t| t.0).count();
    r.param("trials", c.cover_trials).param("sides", "log-uniform in [1e-4, 1e4]");
    r.family("shifted dyadic grids, shifts 0 and 1/3 per axis");
    r.measure("max_side_ratio", max_ratio).measure("min_side_ratio", trials.iter().map(|t| t.1).fold(f64::INFINITY, f64::min));
    r.measure("contained", contained as f64);
    r.require("containment", contained == trials.len());
    r.require("side_ratio", max_ratio <= 6.0 * (1.0 + c.tol));
    Ok(())
}

fn oscillation_growth(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    let grid = ComplexGrid::square(-1.0, 1.0, c.grid)?;
    let re = GridFunction::from_real_fn(grid, |z| z.re)?;
    let fam = CubeFamily::aligned(&grid);
    let lin = mean_oscillation_growth(&re, 1.0, &fam)?;
    let dev = lin.per_cube.iter().map(|p| (p.1 - 0.25).abs()).fold(0.0, f64::max);

    let grid = ComplexGrid::square(-2.0, 2.0, 128)?;
    let log = GridFunction::from_real_fn(grid, |z| z.norm().ln())?;
    let fam_log = CubeFamily::aligned_sizes(&grid, 2, 5);
    let bmo = mean_oscillation_growth(&log, 0.0, &fam_log)?;

    r.param("linear", format!("Re z, beta = 1, {0}x{0} over [-1,1)^2", c.grid));
    r.param("log", "log|z|, beta = 0, 128x128 over [-2,2)^2");
    r.family(format!("{}; {}", fam.description, fam_log.description));
    r.measure("linear.max_deviation_from_quarter", dev).measure("linear.cubes", lin.per_cube.len() as f64);
    r.measure("log.slope", bmo.slope).measure("log.max_ratio", bmo.max_ratio).measure("log.scales", bmo.per_scale.len() as f64);
    r.require("linear_quarter", dev <= 1e-12);
    r.require("log_slope", bmo.slope.abs() <= 0.1 * (1.0 + c.tol) && bmo.per_scale.len() >= 4);
    Ok(())
}

fn scaling(r: &mut VerificationReport) -> Result<()> {
    let tol = r.parameters["tol"].parse::<f64>().unwrap_or(0.0);
    let grid = ComplexGrid::square(-1.0, 1.0, 24)?;
    let f = GridFunction::from_real_fn(grid, |z| (-(z - Complex64::new(0.2, -0.1)).norm_sqr() * 4.0).exp())?;
    let (p, q) = (4.0 / 3.0, 8.0);
    let deltas = [0.5, 1.0, 2.0];
    r.param("p", p).param("q", q).param("deltas", "0.5, 1, 2").param("f", "exp(-4|z-(0.2-0.1i)|^2) on 24x24 over [-1,1)^2");
    r.family("dilated grids, one per delta");
    for (beta, expected) in [(0.25, 0.0), (0.5, 0.25)] {
        let s = dilation_scaling_check(&HomogeneousSymbol::AbsPow(beta), &f, p, q, &deltas)?;
        r.measure(&format!("measured.beta={beta}"), s.measured_exponent);
        r.measure(&format!("predicted.beta={beta}"), s.predicted_exponent);
        r.require(&format!("beta={beta}"), (s.measured_exponent - expected).abs() <= 0.05 * (1.0 + tol));
    }
    Ok(())
}

fn orlicz_reduction(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    let grid = ComplexGrid::square(0.0, 1.0, c.grid)?;
    let trials = map_indices(c.trials, |t| -> Result<f64> {
        let mut rng = trial_rng(c.seed, "orlicz-reduction", t);
        let mut f = random_density(grid, &mut rng)?;
        if f.max_abs() == 0.0 {
            f = f.map(|v| v + 1.0)?;
        }
        let q = random_cube(&grid, &mut rng)?;
        let p = rng.gen_range(1.05..6.0);
        let lux = orlicz_average(&f, &q, &YoungFunction::Power(p))?;
        let lp = normalized_lp_on_cube(&f, &q, p)?;
        Ok(if lp == 0.0 { lux.abs() } else { (lux - lp).abs() / lp })
    });
    let worst = trials.into_iter().collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    r.param("trials", c.trials).param("young", "pow:p, p uniform in [1.05, 6)");
    r.family("random cubes inside the grid square");
    r.measure("max_relative_error", worst);
    r.require("luxemburg_matches_lp", worst <= c.tol.max(0.0) && c.tol >= 0.0);
    Ok(())
}

fn associate(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    let points = 60;
    let powers = [1.25, 4.0 / 3.0, 1.5, 2.0, 3.0, 4.0];
    r.param("points", points).param("powers", "1.25, 4/3, 1.5, 2, 3, 4");
    r.family("log grid on [1e-3, 1e6]");
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for p in powers {
        let a = YoungFunction::Power(p);
        let ch = associate_check(&a, &associate_young(&a)?, points)?;
        lo = lo.min(ch.min_ratio);
        hi = hi.max(ch.max_ratio);
    }
    r.measure("min_ratio", lo).measure("max_ratio", hi);
    r.require("lower", lo >= 1.0 - c.tol);
    r.require("upper", hi <= 2.0 * (1.0 + c.tol));
    Ok(())
}

fn bpq(c: &VerifyConfig, r: &mut VerificationReport) -> Result<()> {
    let cases = 20;
    let t_max = 1e6;
    let mut worst_div = 0.0f64;
    let mut worst_conv = 0.0f64;
    let mut classified = 0;
    for t in 0..cases {
        let mut rng = trial_rng(c.seed, "bpq", t);
        let p = rng.gen_range(1.1..3.0);
        let q = p * rng.gen_range(1.0..4.0);
        let rr = rng.gen_range(1.0..p - 0.05);
        let div = bpq_check(&YoungFunction::Power(p), p, q, t_max)?;
        let conv = bpq_check(&YoungFunction::Power(rr), p, q, t_max)?;
        if !div.converges && conv.converges {
            classified += 1;
        }
        // pow:p gives ∫ dt/t; pow:r gives ∫_1^∞ t^{rq/p−q−1} dt = 1/(q − rq/p).
        worst_div = worst_div.max((div.integral_estimate - t_max.ln()).abs() / t_max.ln());
        let exact = 1.0 / (q - rr * q / p);
        worst_conv = worst_conv.max(conv.integral_estimate / exact - 1.0);
    }
    r.param("cases", cases).param("t_max", t_max);
    r.family("pow:p against pow:r with 1 <= r < p, q >= p");
    r.measure("classified", classified as f64);
    r.measure("divergent.max_relative_error", worst_div).measure("convergent.max_excess", worst_conv);
    r.require("classification", classified == cases);
    r.require("quadrature", worst_div <= 1e-6 * (1.0 + c.tol) && worst_conv <= c.tol);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::aligned_level;

    fn small() -> VerifyConfig {
        VerifyConfig { trials: 6, domination_trials: 3, domination_grid: 16, cover_trials: 200, ..VerifyConfig::default() }
    }

    #[test]
    fn suite_names() {
        assert_eq!(expand_suite(&["all"]).unwrap().len(), CHECK_NAMES.len());
        assert_eq!(expand_suite(&["bpq", " kolmogorov"]).unwrap(), vec!["bpq", "kolmogorov"]);
        assert!(matches!(expand_suite(&["nope"]), Err(Error::UnknownCheck(_))));
        let none: [&str; 0] = [];
        let o = run_verify(&none, &small(), None).unwrap();
        assert_eq!(o.exit_code, 0);
        assert!(o.reports.is_empty());
    }

    #[test]
    fn kolmogorov_default_passes() {
        let o = run_verify(&["kolmogorov"], &VerifyConfig::default(), None).unwrap();
        assert_eq!(o.exit_code, 0, "{}", o.reports[0].to_text());
    }

    #[test]
    fn every_check_passes_and_breaks() {
        let names: Vec<&str> = CHECK_NAMES.iter().copied().filter(|n| *n != "oscillation-growth").collect();
        let good = run_verify(&names, &small(), None).unwrap();
        for rep in &good.reports {
            assert!(rep.holds, "{}", rep.to_text());
        }
        let broken = VerifyConfig { tol: -1.0, ..small() };
        for rep in run_verify(&names, &broken, None).unwrap().reports {
            assert!(!rep.holds, "{} survived tol = -1", rep.check_name);
        }
    }

    #[test]
    fn shifted_grids_are_aligned() {
        for t in DyadicShift::ALL {
            for n in [8, 16] {
                assert!(aligned_level(&shifted_aligned_grid(t, n).unwrap(), t).is_some());
            }
        }
    }

    #[test]
    fn reports_are_written() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path().join("out");
        let o = run_verify(&["associate-young"], &small(), Some(&dir)).unwrap();
        let text = std::fs::read_to_string(dir.join("associate-young.report")).unwrap();
        assert_eq!(text, o.reports[0].to_text());
        assert!(dir.join("associate-young.json").exists());
    }
}

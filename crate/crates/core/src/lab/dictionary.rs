// Empirical lower bounds for ‖C_b‖_{L^p→L^q}: the best ratio over a finite
// dictionary of test functions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::witness::{necessity_witness, WitnessVariant};
use crate::error::{Error, Result};
use crate::grid::{lp_norm, ComplexGrid, Cube, GridFunction};
use crate::operators::commutator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TestFunction {
    Indicator(Cube),
    Gaussian { center: Complex64, width: f64 },
    /// `f_Q · g_Q` built from the symbol on `Q`.
    WitnessProduct(Cube),
    /// `f(z/δ)` for the inner function `f`.
    Dilate { inner: Box<TestFunction>, factor: f64 },
}

impl TestFunction {
    fn value_fn(&self, z: Complex64) -> Option<f64> {
        match self {
            TestFunction::Gaussian { center, width } => Some((-(z - center).norm_sqr() / (2.0 * width * width)).exp()),
            _ => None,
        }
    }

    pub fn realize(&self, grid: &ComplexGrid, b: &GridFunction) -> Result<GridFunction> {
        match self {
            TestFunction::Indicator(q) => crate::grid::shapes::cube_fraction(grid, q),
            TestFunction::Gaussian { .. } => GridFunction::from_real_fn(*grid, |z| self.value_fn(z).unwrap()),
            TestFunction::WitnessProduct(q) => {
                let (f, g) = necessity_witness(b, q, WitnessVariant::Linear)?;
                f.mul(&g)
            }
            TestFunction::Dilate { inner, factor } => {
                if !(*factor > 0.0) {
                    return Err(Error::InvalidParameter(format!("dilation factor must be positive, got {factor}")));
                }
                let scaled = match inner.as_ref() {
                    TestFunction::Indicator(q) => TestFunction::Indicator(Cube { corner: q.corner * factor, side: q.side * factor }),
                    TestFunction::Gaussian { center, width } => {
                        TestFunction::Gaussian { center: center * factor, width: width * factor }
                    }
                    TestFunction::WitnessProduct(q) => {
                        TestFunction::WitnessProduct(Cube { corner: q.corner * factor, side: q.side * factor })
                    }
                    TestFunction::Dilate { inner, factor: f2 } => TestFunction::Dilate { inner: inner.clone(), factor: f2 * factor },
                };
                scaled.realize(grid, b)
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Indicator(q) => write!(f, "indicator[{}, {}; {}]", q.corner.re, q.corner.im, q.side),
            TestFunction::Gaussian { center, width } => write!(f, "gaussian[{}, {}; {}]", center.re, center.im, width),
            TestFunction::WitnessProduct(q) => write!(f, "witness[{}, {}; {}]", q.corner.re, q.corner.im, q.side),
            TestFunction::Dilate { inner, factor } => write!(f, "dilate[{factor}]({inner})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dictionary {
    pub items: Vec<TestFunction>,
}

impl Dictionary {
    pub fn new(items: Vec<TestFunction>) -> Self {
        Self { items }
    }

    /// Sub-squares of the bounding cube at depths 0, 1, 2.
    pub fn indicators(grid: &ComplexGrid) -> Self {
        let root = grid.bounding_cube();
        let mut items = Vec::new();
        for depth in 0..3 {
            let n = 1usize << depth;
            let side = root.side / n as f64;
            for j in 0..n {
                for i in 0..n {
                    let corner = root.corner + Complex64::new(i as f64 * side, j as f64 * side);
                    items.push(TestFunction::Indicator(Cube { corner, side }));
                }
            }
        }
        Self::new(items)
    }

    /// `count` Gaussians centred in the middle half of the grid.
    pub fn gaussians(grid: &ComplexGrid, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let root = grid.bounding_cube();
        let c = root.center();
        let items = (0..count)
            .map(|_| {
                let off = Complex64::new(rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25)) * root.side;
                TestFunction::Gaussian { center: c + off, width: rng.gen_range(0.05..0.3) * root.side }
            })
            .collect();
        Self::new(items)
    }

    /// `f_Q g_Q` on centred cubes of half, quarter and eighth the grid side.
    pub fn witness_products(grid: &ComplexGrid) -> Self {
        let side_max = (grid.x1() - grid.x0()).min(grid.y1() - grid.y0());
        let c = Complex64::new(0.5 * (grid.x0() + grid.x1()), 0.5 * (grid.y0() + grid.y1()));
        let items = (1..=3)
            .map(|k| {
                let side = side_max / 2f64.powi(k);
                TestFunction::WitnessProduct(Cube { corner: c - Complex64::new(side, side) * 0.5, side })
            })
            .collect();
        Self::new(items)
    }

    /// Indicators at three scales, 8 seeded Gaussians and witness products
    /// at three scales.
    pub fn default_for(grid: &ComplexGrid, seed: u64) -> Self {
        Self::indicators(grid).union(&Self::gaussians(grid, 8, seed)).union(&Self::witness_products(grid))
    }

    /// Random cube indicators, inside the bounding cube.
    pub fn random_indicators(grid: &ComplexGrid, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let root = grid.bounding_cube();
        let items = (0..count)
            .map(|_| {
                let side = root.side * rng.gen_range(0.05..1.0f64);
                let slack = root.side - side;
                let corner = root.corner + Complex64::new(rng.gen_range(0.0..=slack), rng.gen_range(0.0..=slack));
                TestFunction::Indicator(Cube { corner, side })
            })
            .collect();
        Self::new(items)
    }

    pub fn with_dilates(&self, factors: &[f64]) -> Self {
        let mut items = self.items.clone();
        for item in &self.items {
            for &factor in factors {
                items.push(TestFunction::Dilate { inner: Box::new(item.clone()), factor });
            }
        }
        Self::new(items)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut items = self.items.clone();
        items.extend(other.items.iter().cloned());
        Self::new(items)
    }

    /// Parses `+`-separated parts: `default`, `indicators`, `gaussians:N`,
    /// `witness`, `random:N`, each optionally followed by `@SEED`.
    pub fn parse(spec: &str, grid: &ComplexGrid, seed: u64) -> Result<Self> {
        let mut out = Dictionary::new(Vec::new());
        for part in spec.split('+').map(str::trim).filter(|s| !s.is_empty()) {
            let (body, seed) = match part.split_once('@') {
                Some((b, s)) => (b, s.parse::<u64>().map_err(|_| Error::InvalidParameter(format!("bad seed in `{part}`")))?),
                None => (part, seed),
            };
            let count = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidParameter(format!("bad count in `{part}`")));
            let d = match body.split_once(':') {
                None if body == "default" => Self::default_for(grid, seed),
                None if body == "indicators" => Self::indicators(grid),
                None if body == "witness" => Self::witness_products(grid),
                Some(("gaussians", n)) => Self::gaussians(grid, count(n)?, seed),
                Some(("random", n)) => Self::random_indicators(grid, count(n)?, seed),
                _ => return Err(Error::InvalidParameter(format!("unknown dictionary part `{part}`"))),
            };
            out = out.union(&d);
        }
        Ok(out)
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Inverse of `Display` for indicators and Gaussians.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse test function `{s}`"));
        let (kind, rest) = s.split_once('[').ok_or_else(bad)?;
        let inner = rest.strip_suffix(']').ok_or_else(bad)?;
        let (xy, last) = inner.split_once(';').ok_or_else(bad)?;
        let (x, y) = xy.split_once(',').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (x, y, last) = (num(x)?, num(y)?, num(last)?);
        match kind {
            "indicator" => Ok(TestFunction::Indicator(Cube::new(Complex64::new(x, y), last)?)),
            "gaussian" => Ok(TestFunction::Gaussian { center: Complex64::new(x, y), width: last }),
            "witness" => Ok(TestFunction::WitnessProduct(Cube::new(Complex64::new(x, y), last)?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRatioReport {
    /// Lower bound for the operator norm on this grid.
    pub best_ratio: f64,
    pub argmax: String,
    pub ratios: Vec<(String, f64)>,
}

/// `max_f ‖C_b f‖_q / ‖f‖_p` over the dictionary.
pub fn norm_ratio_estimate(b: &GridFunction, p: f64, q: f64, dict: &Dictionary) -> Result<NormRatioReport> {
    if !(p > 1.0 && p < 2.0 && q > 2.0 && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("need 1 < p < 2 < q < ∞, got p = {p}, q = {q}")));
    }
    if dict.items.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    let grid = *b.grid();
    let mut ratios = Vec::with_capacity(dict.items.len());
    let (mut best_ratio, mut argmax) = (0.0f64, dict.items[0].to_string());
    for item in &dict.items {
        let f = item.realize(&grid, b)?;
        let denom = lp_norm(&f, p)?;
        let r = if denom == 0.0 { 0.0 } else { lp_norm(&commutator(b, &f)?, q)? / denom };
        if r > best_ratio {
            best_ratio = r;
            argmax = item.to_string();
        }
        ratios.push((item.to_string(), r));
    }
    Ok(NormRatioReport { best_ratio, argmax, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::riesz_potential;
    use crate::spaces::holder_seminorm_all_pairs;

    #[test]
    fn constant_symbol_is_zero_and_empty_rejected() {
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        let b = GridFunction::from_real_fn(grid, |_| 1.0).unwrap();
        let r = norm_ratio_estimate(&b, 1.5, 4.0, &Dictionary::default_for(&grid, 1)).unwrap();
        assert_eq!(r.best_ratio, 0.0);
        assert!(matches!(norm_ratio_estimate(&b, 1.5, 4.0, &Dictionary::new(vec![])), Err(Error::EmptyDictionary)));
        assert!(norm_ratio_estimate(&b, 2.5, 4.0, &Dictionary::indicators(&grid)).is_err());
    }

    #[test]
    fn default_dictionary_shape() {
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        let d = Dictionary::default_for(&grid, 5);
        assert_eq!(d.items.len(), 21 + 8 + 3);
        assert_eq!(Dictionary::parse("indicators+gaussians:8@5+witness", &grid, 0).unwrap(), d);
        assert!(Dictionary::parse("bogus", &grid, 0).is_err());
    }

    #[test]
    fn larger_dictionary_never_lowers_the_bound() {
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        let b = GridFunction::from_real_fn(grid, |z| z.norm().sqrt()).unwrap();
        let small = Dictionary::indicators(&grid);
        let big = small.union(&Dictionary::gaussians(&grid, 4, 2)).with_dilates(&[0.5]);
        let a = norm_ratio_estimate(&b, 1.5, 3.0, &small).unwrap().best_ratio;
        let c = norm_ratio_estimate(&b, 1.5, 3.0, &big).unwrap().best_ratio;
        assert!(c >= a && a > 0.0);
    }

    #[test]
    fn indicators_match_random_oracle_for_re_z() {
        let grid = ComplexGrid::square(-1.0, 1.0, 32).unwrap();
        let b = GridFunction::from_real_fn(grid, |z| z.re).unwrap();
        let dict = Dictionary::indicators(&grid);
        let base = norm_ratio_estimate(&b, 4.0 / 3.0, 8.0, &dict).unwrap().best_ratio;
        let oracle_dict = dict.union(&Dictionary::random_indicators(&grid, 10 * dict.items.len(), 77));
        let oracle = norm_ratio_estimate(&b, 4.0 / 3.0, 8.0, &oracle_dict).unwrap().best_ratio;
        assert!(base >= 0.95 * oracle, "{base} vs {oracle}");
    }

    #[test]
    fn holder_ceiling() {
        // |C_b f| ≤ [b]_β I_{1+β}|f| pointwise, with the own cell dropped on
        // the left; the gradient rule adds at most |∂b| h² |f| there, which
        // the inscribed-disk weight of I_{1+β} dominates for these symbols.
        let grid = ComplexGrid::square(-1.0, 1.0, 16).unwrap();
        let beta = 0.25;
        let b = GridFunction::from_real_fn(grid, |z| z.norm().powf(beta)).unwrap();
        let l = holder_seminorm_all_pairs(&b, beta).unwrap();
        let dict = Dictionary::default_for(&grid, 3);
        let (p, q) = (4.0 / 3.0, 8.0);
        let best = norm_ratio_estimate(&b, p, q, &dict).unwrap().best_ratio;
        let mut riesz_best = 0.0f64;
        for item in &dict.items {
            let f = item.realize(&grid, &b).unwrap();
            let r = lp_norm(&riesz_potential(&f.abs(), 1.0 + beta).unwrap(), q).unwrap() / lp_norm(&f, p).unwrap();
            riesz_best = riesz_best.max(r);
        }
        assert!(best <= l * riesz_best * (1.0 + 1e-6), "{best} vs {}", l * riesz_best);
    }

    #[test]
    fn descriptor_round_trip() {
        let t = TestFunction::Gaussian { center: Complex64::new(0.25, -0.5), width: 0.125 };
        assert_eq!(t.to_string().parse::<TestFunction>().unwrap(), t);
        let t = TestFunction::Indicator(Cube::new(Complex64::new(-1.0, 0.5), 0.75).unwrap());
        assert_eq!(t.to_string().parse::<TestFunction>().unwrap(), t);
    }
}

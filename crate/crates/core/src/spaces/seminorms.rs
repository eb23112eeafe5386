// Hölder, Campanato, BMO and Orlicz–Campanato seminorms as maxima over
// declared finite families.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::orlicz::orlicz_average_atoms;
use super::YoungFunction;
use crate::dyadic::{DyadicCube, DyadicShift};
use crate::error::{Error, Result};
use crate::grid::{ComplexGrid, Cube, GridFunction};
use crate::par::map_indices;

/// Finite set of cubes standing in for "all cubes".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeFamily {
    pub cubes: Vec<Cube>,
    pub description: String,
}

impl CubeFamily {
    pub fn new(cubes: Vec<Cube>, description: impl Into<String>) -> Self {
        Self { cubes, description: description.into() }
    }

    /// Cell-aligned cubes of `2^j` cells (`j ≥ 1`), moved by half a side,
    /// lying inside the grid. An even cell count keeps the cube centre on a
    /// cell boundary, so symmetric oscillations are sampled without bias.
    pub fn aligned(grid: &ComplexGrid) -> Self {
        Self::aligned_sizes(grid, 1, u32::MAX)
    }

    /// As [`CubeFamily::aligned`] restricted to `2^j` cells, `j ∈ [j_min, j_max]`.
    pub fn aligned_sizes(grid: &ComplexGrid, j_min: u32, j_max: u32) -> Self {
        let (nx, ny, h) = (grid.nx(), grid.ny(), grid.h());
        let mut cubes = Vec::new();
        let mut j = j_min.max(1);
        while j <= j_max && (1usize << j) <= nx.min(ny) {
            let m = 1usize << j;
            let stride = m / 2;
            let mut y = 0;
            while y + m <= ny {
                let mut x = 0;
                while x + m <= nx {
                    let corner = Complex64::new(grid.x0() + x as f64 * h, grid.y0() + y as f64 * h);
                    cubes.push(Cube { corner, side: m as f64 * h });
                    x += stride;
                }
                y += stride;
            }
            j += 1;
        }
        Self::new(cubes, format!("aligned: 2^j cells, j in [{}, {}], half-side stride", j_min.max(1), j - 1))
    }

    /// Cubes of `Dᵗ` at levels `[k_min, k_max]` that lie inside the grid.
    pub fn dyadic(grid: &ComplexGrid, t: DyadicShift, k_min: i32, k_max: i32) -> Result<Self> {
        let all = crate::dyadic::enumerate_shifted_cubes(t, k_min, k_max, &grid.bounding_cube())?;
        let tol = 1e-12 * grid.h();
        let inside = |q: &DyadicCube| {
            let c = q.to_cube();
            c.corner.re >= grid.x0() - tol
                && c.corner.im >= grid.y0() - tol
                && c.corner.re + c.side <= grid.x1() + tol
                && c.corner.im + c.side <= grid.y1() + tol
        };
        let cubes = all.iter().filter(|q| inside(q)).map(|q| q.to_cube()).collect();
        Ok(Self::new(cubes, format!("dyadic shift ({t}), levels [{k_min}, {k_max}], inside grid")))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut cubes = self.cubes.clone();
        cubes.extend_from_slice(&other.cubes);
        Self::new(cubes, format!("{} + {}", self.description, other.description))
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    fn ensure_nonempty(&self) -> Result<()> {
        if self.cubes.is_empty() {
            return Err(Error::InvalidParameter("cube family is empty".into()));
        }
        Ok(())
    }
}

/// Cells of `b` on `q` as `(b − b_Q, overlap area)`.
fn centered_atoms(b: &GridFunction, q: &Cube) -> Result<Vec<(Complex64, f64)>> {
    let cells = b.grid().overlap(q);
    if cells.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let vals = b.values();
    let mean = cells.iter().map(|&(i, w)| vals[i] * w).sum::<Complex64>() / q.area();
    Ok(cells.iter().map(|&(i, w)| (vals[i] - mean, w)).collect())
}

/// `∫_Q |b − b_Q|^p`.
pub fn oscillation(b: &GridFunction, q: &Cube, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(format!("oscillation needs p ≥ 1, got {p}")));
    }
    Ok(centered_atoms(b, q)?.iter().map(|(d, w)| w * d.norm().powf(p)).sum())
}

fn max_over(family: &CubeFamily, per_cube: impl Fn(&Cube) -> Result<f64> + Sync + Send) -> Result<f64> {
    family.ensure_nonempty()?;
    let vals = map_indices(family.cubes.len(), |i| per_cube(&family.cubes[i]));
    let mut best = 0.0f64;
    for v in vals {
        best = best.max(v?);
    }
    Ok(best)
}

fn campanato_unchecked(b: &GridFunction, p: f64, lambda: f64, family: &CubeFamily) -> Result<f64> {
    max_over(family, |q| Ok((q.side.powf(-lambda) * oscillation(b, q, p)?).powf(1.0 / p)))
}

/// `max_Q (r^{−λ} ∫_Q |b − b_Q|^p)^{1/p}` with `r` the side length.
pub fn campanato_seminorm(b: &GridFunction, p: f64, lambda: f64, family: &CubeFamily) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(format!("Campanato seminorm needs p ≥ 1, got {p}")));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("Campanato index must be ≥ 0, got {lambda}")));
    }
    campanato_unchecked(b, p, lambda, family)
}

/// `max_Q ⨍_Q |b − b_Q|`.
pub fn bmo_seminorm(b: &GridFunction, family: &CubeFamily) -> Result<f64> {
    campanato_seminorm(b, 1.0, 2.0, family)
}

/// `max_Q |Q|^{1−λ/2} ‖b − b_Q‖_{A,Q}`.
pub fn orlicz_campanato_seminorm(b: &GridFunction, a: &YoungFunction, lambda: f64, family: &CubeFamily) -> Result<f64> {
    a.validate()?;
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("index must be finite, got {lambda}")));
    }
    max_over(family, |q| {
        let atoms: Vec<(f64, f64)> = centered_atoms(b, q)?.iter().map(|(d, w)| (d.norm(), *w)).collect();
        Ok(q.area().powf(1.0 - lambda / 2.0) * orlicz_average_atoms(&atoms, q.area(), a))
    })
}

/// Which point pairs a Hölder quotient is maximized over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PairSample {
    All,
    Random { count: usize, seed: u64 },
    Explicit(Vec<(usize, usize)>),
}

impl PairSample {
    /// Every pair on grids up to 64×64 cells, a seeded subset beyond.
    pub fn auto(grid: &ComplexGrid, seed: u64) -> Self {
        if grid.len() <= 4096 {
            PairSample::All
        } else {
            PairSample::Random { count: 2_000_000, seed }
        }
    }
}

/// `max |b(x) − b(y)| / |x − y|^β` over the sampled pairs of cell centres.
pub fn holder_seminorm(b: &GridFunction, beta: f64, pairs: &PairSample) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidExponent(format!("Hölder exponent must lie in (0, 1], got {beta}")));
    }
    let grid = b.grid();
    let centers = grid.centers();
    let vals = b.values();
    let quotient = |i: usize, j: usize| -> f64 {
        if i == j {
            return 0.0;
        }
        (vals[i] - vals[j]).norm() / (centers[i] - centers[j]).norm().powf(beta)
    };
    let n = grid.len();
    Ok(match pairs {
        PairSample::All => map_indices(n, |i| ((i + 1)..n).map(|j| quotient(i, j)).fold(0.0, f64::max))
            .into_iter()
            .fold(0.0, f64::max),
        PairSample::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count).map(|_| quotient(rng.gen_range(0..n), rng.gen_range(0..n))).fold(0.0, f64::max)
        }
        PairSample::Explicit(list) => {
            if list.iter().any(|&(i, j)| i >= n || j >= n) {
                return Err(Error::InvalidParameter("pair index outside the grid".into()));
            }
            list.iter().map(|&(i, j)| quotient(i, j)).fold(0.0, f64::max)
        }
    })
}

pub fn holder_seminorm_all_pairs(b: &GridFunction, beta: f64) -> Result<f64> {
    holder_seminorm(b, beta, &PairSample::All)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    /// Campanato exponent, the power part of `A`.
    pub r: f64,
    /// `2 + rβ`, which puts both seminorms on the same scaling.
    pub lambda_star: f64,
    pub orlicz_value: f64,
    pub campanato_value: f64,
    /// Constant in `[b]_{L^{r,λ*}} ≤ C [b]_{A,β+2}`; 1 because `A(t) ≥ t^r`.
    pub constant: f64,
    pub holds: bool,
}

/// Compares `[b]_{L^{r,λ*}}` with `[b]_{A,β+2}` on the same family.
pub fn inclusion_check(b: &GridFunction, a: &YoungFunction, beta: f64, family: &CubeFamily) -> Result<InclusionReport> {
    a.validate()?;
    if a.log_exponent() < 0.0 {
        return Err(Error::UnsupportedYoung(format!("{a}: inclusion needs A(t) ≥ t^r, i.e. s ≥ 0")));
    }
    let r = a.power();
    let lambda_star = 2.0 + r * beta;
    let orlicz_value = orlicz_campanato_seminorm(b, a, beta + 2.0, family)?;
    let campanato_value = campanato_unchecked(b, r, lambda_star, family)?;
    Ok(InclusionReport {
        r,
        lambda_star,
        orlicz_value,
        campanato_value,
        constant: 1.0,
        holds: campanato_value <= orlicz_value * (1.0 + 1e-9),
    })
}

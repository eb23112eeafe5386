//! The shifted dyadic grids `Dᵗ = {2^k([0,1)² + m + (−1)^k t)}`,
//! `t ∈ {0, 1/3}²`, and the stopping-time constructions built on them.
//!
//! Cubes are stored as `(shift, level, offset)` and never as floating
//! corners. Per axis the corner is `2^k · n / 3` with the integer numerator
//! `n = 3m + (−1)^k τ`, `τ ∈ {0, 1}`; containment and tiling questions are
//! answered on these integers, floats appear only at geometry queries.

mod cube_sum;
mod cz;
pub(crate) mod exact;
mod sparse;
mod tree;

pub use cube_sum::{geometric_cube_sum, CubeSumReport};
pub use cz::{cz_decompose, good_bad_split, CzCube, CzDecomposition, CzProperties};
pub use sparse::{sparse_select, verify_sparse, SparseFamily, SparseVerification, TreePool};
pub use tree::{aligned_level, leaf_level_for, AggregateTree};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Cube;
use exact::{cmp_third, Dyadic};

/// One of the four shifts `t ∈ {0, 1/3}²`; `true` means a one-third shift
/// on that axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicShift {
    pub x_third: bool,
    pub y_third: bool,
}

impl DyadicShift {
    pub const ZERO: Self = Self { x_third: false, y_third: false };
    pub const ALL: [Self; 4] = [
        Self { x_third: false, y_third: false },
        Self { x_third: true, y_third: false },
        Self { x_third: false, y_third: true },
        Self { x_third: true, y_third: true },
    ];

    pub fn new(x_third: bool, y_third: bool) -> Self {
        Self { x_third, y_third }
    }

    pub fn components(&self) -> (f64, f64) {
        let c = |b: bool| if b { 1.0 / 3.0 } else { 0.0 };
        (c(self.x_third), c(self.y_third))
    }

    fn tau(&self) -> (i64, i64) {
        (self.x_third as i64, self.y_third as i64)
    }
}

impl fmt::Display for DyadicShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |b: bool| if b { "1/3" } else { "0" };
        write!(f, "{},{}", c(self.x_third), c(self.y_third))
    }
}

impl FromStr for DyadicShift {
    type Err = Error;

    /// Accepts `0,1/3`-style pairs (also `0.3333…` decimals) or an index `0..=3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("shift must be `a,b` with a, b ∈ {{0, 1/3}}, got `{s}`"));
        if let Ok(i) = s.trim().parse::<usize>() {
            return Self::ALL.get(i).copied().ok_or_else(bad);
        }
        let parse_one = |t: &str| -> Result<bool> {
            match t.trim() {
                "0" | "0.0" => Ok(false),
                "1/3" => Ok(true),
                other => match other.parse::<f64>() {
                    Ok(v) if (v - 1.0 / 3.0).abs() < 1e-6 => Ok(true),
                    Ok(v) if v == 0.0 => Ok(false),
                    _ => Err(bad()),
                },
            }
        };
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(Self::new(parse_one(a)?, parse_one(b)?))
    }
}

#[inline]
fn sign_of_level(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 { 1 } else { -1 }
}

#[inline]
fn pow2(k: i32) -> f64 {
    2f64.powi(k)
}

/// Cube `2^k([0,1)² + m + (−1)^k t)` of the grid `Dᵗ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub shift: DyadicShift,
    pub level: i32,
    pub offset: (i64, i64),
}

impl DyadicCube {
    pub fn new(shift: DyadicShift, level: i32, offset: (i64, i64)) -> Self {
        Self { shift, level, offset }
    }

    /// Corner numerators `n` with corner `2^k n / 3`.
    pub fn numerators(&self) -> (i64, i64) {
        let s = sign_of_level(self.level);
        let (tx, ty) = self.shift.tau();
        (3 * self.offset.0 + s * tx, 3 * self.offset.1 + s * ty)
    }

    fn from_numerators(shift: DyadicShift, level: i32, n: (i64, i64)) -> Self {
        let s = sign_of_level(level);
        let (tx, ty) = shift.tau();
        let mx = (n.0 - s * tx) / 3;
        let my = (n.1 - s * ty) / 3;
        debug_assert_eq!(3 * mx + s * tx, n.0);
        debug_assert_eq!(3 * my + s * ty, n.1);
        Self { shift, level, offset: (mx, my) }
    }

    pub fn side(&self) -> f64 {
        pow2(self.level)
    }

    pub fn area(&self) -> f64 {
        pow2(2 * self.level)
    }

    pub fn corner(&self) -> Complex64 {
        let (nx, ny) = self.numerators();
        let scale = pow2(self.level);
        Complex64::new(nx as f64 * scale / 3.0, ny as f64 * scale / 3.0)
    }

    pub fn to_cube(&self) -> Cube {
        Cube { corner: self.corner(), side: self.side() }
    }

    pub fn parent(&self) -> Self {
        let up = |n: i64| if n.rem_euclid(2) == 0 { n / 2 } else { (n - 3) / 2 };
        let (nx, ny) = self.numerators();
        Self::from_numerators(self.shift, self.level + 1, (up(nx), up(ny)))
    }

    pub fn ancestor(&self, level: i32) -> Self {
        let mut c = *self;
        while c.level < level {
            c = c.parent();
        }
        c
    }

    /// Children in the order lower-left, lower-right, upper-left, upper-right.
    pub fn children(&self) -> [Self; 4] {
        let (nx, ny) = self.numerators();
        let k = self.level - 1;
        let mk = |a: i64, b: i64| Self::from_numerators(self.shift, k, (a, b));
        [mk(2 * nx, 2 * ny), mk(2 * nx + 3, 2 * ny), mk(2 * nx, 2 * ny + 3), mk(2 * nx + 3, 2 * ny + 3)]
    }

    /// Descendants `depth` levels down (`4^depth` cubes).
    pub fn descendants(&self, depth: u32) -> Vec<Self> {
        let mut layer = vec![*self];
        for _ in 0..depth {
            layer = layer.iter().flat_map(|c| c.children()).collect();
        }
        layer
    }

    /// Exact containment of another dyadic cube (any shift).
    pub fn contains(&self, other: &Self) -> bool {
        if other.level > self.level {
            return false;
        }
        if other.shift == self.shift {
            return other.ancestor(self.level) == *self;
        }
        let (a, b) = (self.numerators(), other.numerators());
        let axis = |n: i64, m: i64| {
            let lo = Dyadic::scaled_int(n, self.level).cmp(&Dyadic::scaled_int(m, other.level)) != Ordering::Greater;
            let hi = Dyadic::scaled_int(m + 3, other.level).cmp(&Dyadic::scaled_int(n + 3, self.level))
                != Ordering::Greater;
            lo && hi
        };
        axis(a.0, b.0) && axis(a.1, b.1)
    }

    /// Exact interior-intersection test against another dyadic cube.
    pub fn intersects(&self, other: &Self) -> bool {
        let (a, b) = (self.numerators(), other.numerators());
        let axis = |n: i64, m: i64| {
            Dyadic::scaled_int(n, self.level).cmp(&Dyadic::scaled_int(m + 3, other.level)) == Ordering::Less
                && Dyadic::scaled_int(m, other.level).cmp(&Dyadic::scaled_int(n + 3, self.level)) == Ordering::Less
        };
        axis(a.0, b.0) && axis(a.1, b.1)
    }

    pub fn contains_point(&self, z: Complex64) -> bool {
        let (nx, ny) = self.numerators();
        let k = self.level;
        cmp_third(k, nx, z.re) != Ordering::Greater
            && cmp_third(k, nx + 3, z.re) == Ordering::Greater
            && cmp_third(k, ny, z.im) != Ordering::Greater
            && cmp_third(k, ny + 3, z.im) == Ordering::Greater
    }

    /// Exact test of `q ⊆ self` for a float cube `[a, a + s)²`, with `a + s`
    /// taken as the exact real sum.
    pub fn contains_cube_exact(&self, q: &Cube) -> bool {
        let (nx, ny) = self.numerators();
        let k = self.level;
        let side = Dyadic::from_f64(q.side);
        let axis = |n: i64, a: f64| {
            let a = Dyadic::from_f64(a);
            let hi = a.add(&side);
            Dyadic::scaled_int(n, k).cmp(&a.mul_int(3)) != Ordering::Greater
                && hi.mul_int(3).cmp(&Dyadic::scaled_int(n + 3, k)) != Ordering::Greater
        };
        axis(nx, q.corner.re) && axis(ny, q.corner.im)
    }

    /// The cube of `Dᵗ` at `level` that contains `z`.
    pub fn containing(shift: DyadicShift, level: i32, z: Complex64) -> Self {
        let s = sign_of_level(level);
        let (tx, ty) = shift.tau();
        let axis = |x: f64, tau: i64| -> i64 {
            // n ≡ sτ (mod 3) with 2^k n/3 ≤ x < 2^k (n+3)/3
            let guess = ((x / pow2(level) - (s * tau) as f64 / 3.0).floor()) as i64;
            let mut n = 3 * guess + s * tau;
            while cmp_third(level, n, x) == Ordering::Greater {
                n -= 3;
            }
            while cmp_third(level, n + 3, x) != Ordering::Greater {
                n += 3;
            }
            n
        };
        Self::from_numerators(shift, level, (axis(z.re, tx), axis(z.im, ty)))
    }
}

impl fmt::Display for DyadicCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {},{})", self.shift, self.level, self.offset.0, self.offset.1)
    }
}

/// All cubes of `Dᵗ` with levels in `[k_min, k_max]` that meet `bbox`.
/// Each level tiles `bbox`.
pub fn enumerate_shifted_cubes(t: DyadicShift, k_min: i32, k_max: i32, bbox: &Cube) -> Result<Vec<DyadicCube>> {
    if k_min > k_max {
        return Err(Error::InvalidRange { k_min, k_max });
    }
    let mut out = Vec::new();
    for k in k_min..=k_max {
        let lo = DyadicCube::containing(t, k, bbox.corner);
        let (n0x, n0y) = lo.numerators();
        let hi_x = bbox.corner.re + bbox.side;
        let hi_y = bbox.corner.im + bbox.side;
        let mut ny = n0y;
        while cmp_third(k, ny, hi_y) == Ordering::Less {
            let mut nx = n0x;
            while cmp_third(k, nx, hi_x) == Ordering::Less {
                out.push(DyadicCube::from_numerators(t, k, (nx, ny)));
                nx += 3;
            }
            ny += 3;
        }
    }
    Ok(out)
}

/// One-third trick: a shift `t` and a cube `Q_t ∈ Dᵗ` with `Q ⊆ Q_t` and
/// `ℓ(Q_t) ≤ 6 ℓ(Q)`. Levels with `ℓ(Q) ≤ 2^k ≤ 6 ℓ(Q)` are tried smallest
/// first, shifts in [`DyadicShift::ALL`] order.
pub fn cover_cube(q: &Cube) -> (DyadicShift, DyadicCube) {
    let approx = q.side.log2().floor() as i32;
    for k in (approx - 1)..=(approx + 4) {
        // ℓ ≤ 2^k  and  2^k ≤ 6ℓ  ⇔  2^{k−1}/3 ≤ ℓ
        let big_enough = Dyadic::scaled_int(1, k).cmp(&Dyadic::from_f64(q.side)) != Ordering::Less;
        let small_enough = cmp_third(k - 1, 1, q.side) != Ordering::Greater;
        if !(big_enough && small_enough) {
            continue;
        }
        for t in DyadicShift::ALL {
            let c = DyadicCube::containing(t, k, q.corner);
            if c.contains_cube_exact(q) {
                return (t, c);
            }
        }
    }
    panic!("one-third cover failed for cube {q:?}");
}

// Exact comparisons between floats and the rationals 2^k·n/3 that appear as
// shifted-grid corners. Every finite f64 is m·2^e, so multiplying through by 3
// keeps everything in integers.

use std::cmp::Ordering;

use num_bigint::BigInt;

#[derive(Debug, Clone)]
pub(crate) struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub(crate) fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "exact arithmetic on non-finite value");
        if x == 0.0 {
            return Self { mant: BigInt::from(0), exp: 0 };
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1 << 52), raw_exp - 1075) };
        Self { mant: BigInt::from(sign) * BigInt::from(m), exp: e }
    }

    /// `n · 2^k`
    pub(crate) fn scaled_int(n: i64, k: i32) -> Self {
        Self { mant: BigInt::from(n), exp: k as i64 }
    }

    pub(crate) fn mul_int(&self, k: i64) -> Self {
        Self { mant: &self.mant * k, exp: self.exp }
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        let e = self.exp.min(other.exp);
        Self { mant: self.aligned(e) + other.aligned(e), exp: e }
    }

    fn aligned(&self, e: i64) -> BigInt {
        &self.mant << ((self.exp - e) as usize)
    }

    pub(crate) fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        self.aligned(e).cmp(&other.aligned(e))
    }
}

/// Orders `2^k · n / 3` against `x`.
pub(crate) fn cmp_third(k: i32, n: i64, x: f64) -> Ordering {
    Dyadic::scaled_int(n, k).cmp(&Dyadic::from_f64(x).mul_int(3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirds_compare_exactly() {
        // 1/3 is not representable; the nearest double is below it.
        assert_eq!(cmp_third(0, 1, 1.0 / 3.0), Ordering::Greater);
        assert_eq!(cmp_third(1, 3, 2.0), Ordering::Equal);
        assert_eq!(cmp_third(-3, -6, -0.25), Ordering::Equal);
        assert_eq!(cmp_third(-3, -2, -1.0 / 12.0), Ordering::Less);
        assert_eq!(cmp_third(-2, 1, 0.1), Ordering::Less);
        assert_eq!(cmp_third(0, 0, -0.0), Ordering::Equal);
    }

    #[test]
    fn sums_are_exact() {
        let a = Dyadic::from_f64(0.1).add(&Dyadic::from_f64(0.2));
        assert_ne!(a.cmp(&Dyadic::from_f64(0.1 + 0.2)), Ordering::Equal);
        let b = Dyadic::from_f64(0.5).add(&Dyadic::from_f64(0.25));
        assert_eq!(b.cmp(&Dyadic::from_f64(0.75)), Ordering::Equal);
    }
}

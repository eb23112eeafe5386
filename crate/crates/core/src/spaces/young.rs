// Young functions t^r and t^r·log(e+t)^s: evaluation, inverse, associate,
// and the B_{p,q} integrability test.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum YoungFunction {
    /// `t^r`
    Power(f64),
    /// `t^r log(e+t)^s`; negative `s` appears only for associates.
    PowerLog(f64, f64),
}

/// Numerical shape checks on a log-spaced grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YoungCheck {
    pub zero_at_zero: bool,
    pub increasing: bool,
    pub convex: bool,
    pub superlinear: bool,
}

impl YoungCheck {
    pub fn holds(&self) -> bool {
        self.zero_at_zero && self.increasing && self.convex && self.superlinear
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

impl YoungFunction {
    pub fn power(&self) -> f64 {
        match *self {
            YoungFunction::Power(r) | YoungFunction::PowerLog(r, _) => r,
        }
    }

    pub fn log_exponent(&self) -> f64 {
        match *self {
            YoungFunction::Power(_) => 0.0,
            YoungFunction::PowerLog(_, s) => s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (r, s) = (self.power(), self.log_exponent());
        if !(r > 1.0 && r.is_finite() && s.is_finite()) {
            return Err(Error::UnsupportedYoung(format!("{self}: need r > 1 and finite parameters")));
        }
        Ok(())
    }

    /// `A(t)` without the sign check; `t` must be nonnegative.
    pub(crate) fn value(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        match *self {
            YoungFunction::Power(r) => t.powf(r),
            YoungFunction::PowerLog(r, s) => t.powf(r) * (E + t).ln().powf(s),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("Young function argument must be ≥ 0, got {t}")));
        }
        Ok(self.value(t))
    }

    /// `A^{−1}(y)` by bisection in `log t`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::Domain(format!("Young inverse argument must be ≥ 0, got {y}")));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        if y.is_infinite() {
            return Ok(f64::INFINITY);
        }
        let g = |x: f64| self.value(x.exp());
        let x0 = y.ln() / self.power();
        let (mut lo, mut hi) = (x0 - 1.0, x0 + 1.0);
        let mut step = 1.0;
        while g(lo) > y {
            step *= 2.0;
            lo -= step;
        }
        step = 1.0;
        while g(hi) < y {
            step *= 2.0;
            hi += step;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 1e-15 * lo.abs().max(hi.abs()).max(1.0) {
                break;
            }
            if g(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }

    pub fn check(&self) -> YoungCheck {
        let ts: Vec<f64> = std::iter::once(0.0).chain(log_grid(1e-6, 1e8, 400)).collect();
        let vals: Vec<f64> = ts.iter().map(|&t| self.value(t)).collect();
        let increasing = vals.windows(2).all(|w| w[1] > w[0]);
        let slopes: Vec<f64> = (1..ts.len()).map(|i| (vals[i] - vals[i - 1]) / (ts[i] - ts[i - 1])).collect();
        let convex = slopes.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
        // A(t)/t increasing for t ≥ 1 and unbounded along the grid.
        let ratios: Vec<f64> = ts.iter().zip(&vals).filter(|(t, _)| **t >= 1.0).map(|(t, v)| v / t).collect();
        let superlinear = ratios.windows(2).all(|w| w[1] > w[0]) && ratios.last() > ratios.first();
        YoungCheck { zero_at_zero: vals[0] == 0.0, increasing, convex, superlinear }
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YoungFunction::Power(r) => write!(f, "pow:{r}"),
            YoungFunction::PowerLog(r, s) => write!(f, "powlog:{r}:{s}"),
        }
    }
}

impl FromStr for YoungFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedYoung(format!("expected `pow:r` or `powlog:r:s`, got `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
        let a = match parts.as_slice() {
            ["pow", r] => YoungFunction::Power(num(r)?),
            ["powlog", r, e] => YoungFunction::PowerLog(num(r)?, num(e)?),
            _ => return Err(bad()),
        };
        a.validate()?;
        Ok(a)
    }
}

/// `t^{p′} log(e+t)^{(1+δ)p′/p}`: membership of `b` in its Orlicz–Campanato
/// class at index `β + 2` suffices at `q = p′` when `β ≤ 0`.
pub fn sufficient_young(p: f64, delta: f64) -> Result<YoungFunction> {
    if !(p > 1.0 && p.is_finite()) || !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("need p > 1 and δ > 0, got p = {p}, δ = {delta}")));
    }
    let pp = p / (p - 1.0);
    Ok(YoungFunction::PowerLog(pp, (1.0 + delta) * pp / p))
}

/// Descriptor equivalent to the associate: `t^r log^s ↦ t^{r′} log^{−s/(r−1)}`.
pub fn associate_young(a: &YoungFunction) -> Result<YoungFunction> {
    a.validate()?;
    let r = a.power();
    let rp = r / (r - 1.0);
    Ok(match *a {
        YoungFunction::Power(_) => YoungFunction::Power(rp),
        YoungFunction::PowerLog(_, s) if s == 0.0 => YoungFunction::Power(rp),
        YoungFunction::PowerLog(_, s) => YoungFunction::PowerLog(rp, -s / (r - 1.0)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssociateCheck {
    pub points: usize,
    /// Extremes of `A^{−1}(t) Ā^{−1}(t) / t` over the grid.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Smallest `C ≥ 1` with `t/C ≤ A^{−1}Ā^{−1}(t) ≤ 2Ct` on the grid.
    pub equivalence_constant: f64,
    /// `t ≤ A^{−1}Ā^{−1}(t) ≤ 2t` with relative slack `1e−10`.
    pub exact: bool,
}

/// Evaluates the associate inequality on `points` log-spaced `t ∈ [1e−3, 1e6]`.
pub fn associate_check(a: &YoungFunction, abar: &YoungFunction, points: usize) -> Result<AssociateCheck> {
    a.validate()?;
    abar.validate()?;
    if points < 2 {
        return Err(Error::InvalidParameter("associate check needs at least two points".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for t in log_grid(1e-3, 1e6, points) {
        let r = a.inverse(t)? * abar.inverse(t)? / t;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok(AssociateCheck {
        points,
        min_ratio: lo,
        max_ratio: hi,
        equivalence_constant: (1.0 / lo).max(hi / 2.0).max(1.0),
        exact: lo >= 1.0 - 1e-10 && hi <= 2.0 * (1.0 + 1e-10),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BpqReport {
    pub converges: bool,
    /// `∫_1^{t_max} A(t)^{q/p} t^{−q} dt/t`.
    pub integral_estimate: f64,
    /// Integrand `≍ t^{a−1} log(t)^{c}` at infinity with `a = rq/p − q`.
    pub power_exponent: f64,
    pub log_exponent: f64,
}

/// `B_{p,q}`: `∫_1^∞ A(t)^{q/p} t^{−q} dt/t < ∞`, classified from the
/// descriptor's growth at infinity; the integral up to `t_max` is reported.
pub fn bpq_check(a: &YoungFunction, p: f64, q: f64, t_max: f64) -> Result<BpqReport> {
    a.validate()?;
    if !(p > 1.0 && q >= p && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("B_{{p,q}} needs 1 < p ≤ q < ∞, got p = {p}, q = {q}")));
    }
    if !(t_max >= 1e3) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!("t_max must be at least 1e3, got {t_max}")));
    }
    let r = a.power();
    let power_exponent = r * q / p - q;
    let log_exponent = a.log_exponent() * q / p;
    let converges = if (r - p).abs() < 1e-12 { log_exponent < -1.0 } else { r < p };
    // t = e^u turns dt/t into du.
    let integrand = |u: f64| {
        let t = u.exp();
        a.value(t).powf(q / p) * (-q * u).exp()
    };
    let n = 20_000;
    let (u0, u1) = (0.0, t_max.ln());
    let h = (u1 - u0) / n as f64;
    let mut s = integrand(u0) + integrand(u1);
    for i in 1..n {
        s += integrand(u0 + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    Ok(BpqReport { converges, integral_estimate: s * h / 3.0, power_exponent, log_exponent })
}

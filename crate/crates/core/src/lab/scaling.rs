// Dilation covariance: for b(δz) = δ^β b(z) and f_δ(z) = f(z/δ),
// C_b f_δ(δu) = δ^{1+β} C_b f(u), so ‖C_b f_δ‖_q/‖f_δ‖_p scales like
// δ^{1+β−2(1/p−1/q)}. Grids are dilated with f, so sampling is exact.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::oscillation::least_squares_slope;
use crate::error::{Error, Result};
use crate::grid::{lp_norm, Cube, GridFunction};
use crate::operators::commutator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HomogeneousSymbol {
    Zero,
    Constant(f64),
    ReZ,
    Z,
    /// `|z|^β`
    AbsPow(f64),
    /// `log|z|`, not homogeneous.
    LogAbs,
    /// `χ_Q`, not homogeneous.
    Indicator(Cube),
}

impl HomogeneousSymbol {
    /// Degree `β` with `b(δz) = δ^β b(z)`; `None` when not homogeneous.
    /// The zero symbol is homogeneous of every degree and reports 0.
    pub fn degree(&self) -> Option<f64> {
        match *self {
            HomogeneousSymbol::Zero | HomogeneousSymbol::Constant(_) => Some(0.0),
            HomogeneousSymbol::ReZ | HomogeneousSymbol::Z => Some(1.0),
            HomogeneousSymbol::AbsPow(b) => Some(b),
            HomogeneousSymbol::LogAbs | HomogeneousSymbol::Indicator(_) => None,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let r = |x: f64| Complex64::new(x, 0.0);
        match *self {
            HomogeneousSymbol::Zero => r(0.0),
            HomogeneousSymbol::Constant(c) => r(c),
            HomogeneousSymbol::ReZ => r(z.re),
            HomogeneousSymbol::Z => z,
            HomogeneousSymbol::AbsPow(b) => r(z.norm().powf(b)),
            HomogeneousSymbol::LogAbs => r(z.norm().ln()),
            HomogeneousSymbol::Indicator(q) => r(if q.contains(z) { 1.0 } else { 0.0 }),
        }
    }

    pub fn sample(&self, grid: &crate::grid::ComplexGrid) -> Result<GridFunction> {
        GridFunction::from_fn(*grid, |z| self.eval(z))
    }
}

impl fmt::Display for HomogeneousSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomogeneousSymbol::Zero => write!(f, "zero"),
            HomogeneousSymbol::Constant(c) => write!(f, "const:{c}"),
            HomogeneousSymbol::ReZ => write!(f, "re"),
            HomogeneousSymbol::Z => write!(f, "z"),
            HomogeneousSymbol::AbsPow(b) => write!(f, "abspow:{b}"),
            HomogeneousSymbol::LogAbs => write!(f, "logabs"),
            HomogeneousSymbol::Indicator(q) => write!(f, "indicator:{}:{}:{}", q.corner.re, q.corner.im, q.side),
        }
    }
}

impl FromStr for HomogeneousSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown symbol `{s}`"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        Ok(match parts.as_slice() {
            ["zero"] => HomogeneousSymbol::Zero,
            ["const", c] => HomogeneousSymbol::Constant(num(c)?),
            ["re"] => HomogeneousSymbol::ReZ,
            ["z"] => HomogeneousSymbol::Z,
            ["abspow", b] => HomogeneousSymbol::AbsPow(num(b)?),
            ["logabs"] => HomogeneousSymbol::LogAbs,
            ["indicator", x, y, side] => HomogeneousSymbol::Indicator(Cube::new(Complex64::new(num(x)?, num(y)?), num(side)?)?),
            _ => return Err(bad()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub measured_exponent: f64,
    pub predicted_exponent: f64,
    pub holds: bool,
    /// All ratios vanish (e.g. `b ≡ 0`); the check holds trivially.
    pub vacuous: bool,
    /// `(δ, R(δ))`.
    pub ratios: Vec<(f64, f64)>,
}

/// Fits the log-log slope of `R(δ)` and compares with `1 + β − 2(1/p − 1/q)`.
pub fn dilation_scaling_check(
    symbol: &HomogeneousSymbol,
    f: &GridFunction,
    p: f64,
    q: f64,
    deltas: &[f64],
) -> Result<ScalingReport> {
    let beta = symbol
        .degree()
        .ok_or_else(|| Error::Precondition(format!("symbol `{symbol}` is not homogeneous")))?;
    if !(p >= 1.0 && q >= 1.0 && p.is_finite() && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("need finite p, q ≥ 1, got p = {p}, q = {q}")));
    }
    if deltas.len() < 2 || deltas.iter().any(|d| !(0.25..=4.0).contains(d)) {
        return Err(Error::InvalidParameter("need at least two dilations in [1/4, 4]".into()));
    }
    let predicted_exponent = 1.0 + beta - 2.0 * (1.0 / p - 1.0 / q);
    let mut ratios = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let grid = f.grid().dilated(delta)?;
        let fd = GridFunction::new(grid, f.values().to_vec())?;
        let b = symbol.sample(&grid)?;
        let denom = lp_norm(&fd, p)?;
        let r = if denom == 0.0 { 0.0 } else { lp_norm(&commutator(&b, &fd)?, q)? / denom };
        ratios.push((delta, r));
    }
    if ratios.iter().all(|r| r.1 == 0.0) {
        return Ok(ScalingReport { measured_exponent: predicted_exponent, predicted_exponent, holds: true, vacuous: true, ratios });
    }
    if ratios.iter().any(|r| r.1 == 0.0) {
        return Err(Error::Precondition("some dilations give a zero ratio".into()));
    }
    let logs: Vec<(f64, f64)> = ratios.iter().map(|&(d, r)| (d.ln(), r.ln())).collect();
    let measured_exponent = least_squares_slope(&logs);
    Ok(ScalingReport {
        measured_exponent,
        predicted_exponent,
        holds: (measured_exponent - predicted_exponent).abs() <= 0.05,
        vacuous: false,
        ratios,
    })
}

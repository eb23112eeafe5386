// ⨍_Q |b − b_Q| / |Q|^{β/2} over a cube family, with a log-log trend.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::GridFunction;
use crate::par::map_indices;
use crate::spaces::{oscillation, CubeFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub max_ratio: f64,
    /// `(side, ratio)` per family cube, in family order.
    pub per_cube: Vec<(f64, f64)>,
    /// `(side, max ratio at that side)`, sides increasing.
    pub per_scale: Vec<(f64, f64)>,
    /// Least-squares slope of `log max ratio` against `log side`.
    pub slope: f64,
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 { 0.0 } else { sxy / sxx }
}

pub fn mean_oscillation_growth(b: &GridFunction, beta: f64, family: &CubeFamily) -> Result<OscillationReport> {
    let per_cube: Vec<Result<(f64, f64)>> = map_indices(family.cubes.len(), |i| {
        let q = &family.cubes[i];
        Ok((q.side, oscillation(b, q, 1.0)? / q.area() / q.area().powf(beta / 2.0)))
    });
    let per_cube = per_cube.into_iter().collect::<Result<Vec<_>>>()?;
    let mut scales: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for &(s, r) in &per_cube {
        let e = scales.entry(s.to_bits()).or_insert((s, 0.0));
        e.1 = e.1.max(r);
    }
    let mut per_scale: Vec<(f64, f64)> = scales.into_values().collect();
    per_scale.sort_by(|a, b| a.0.total_cmp(&b.0));
    let logs: Vec<(f64, f64)> = per_scale.iter().filter(|p| p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    Ok(OscillationReport {
        max_ratio: per_cube.iter().map(|p| p.1).fold(0.0, f64::max),
        slope: least_squares_slope(&logs),
        per_cube,
        per_scale,
    })
}

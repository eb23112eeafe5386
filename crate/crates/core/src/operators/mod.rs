//! Quadrature operators on a [`ComplexGrid`](crate::grid::ComplexGrid):
//! the Cauchy transform and its commutator, the dyadic fractional
//! commutators with the four-grid domination check, the Riesz potential, and
//! fractional and Orlicz fractional maximal operators.
//!
//! Dense operators use direct `O(N²)` summation with a fixed order per output
//! point, so results are identical with or without the `parallel` feature.

mod cauchy;
mod dyadic_commutator;
mod maximal;
mod riesz;

pub use cauchy::{cauchy_transform, cauchy_transform_at, commutator, commutator_with, rect_inverse_integral, SelfCell};
pub use dyadic_commutator::{domination_check, domination_check_tol, dyadic_fractional_commutator, DominationReport, LevelWindow};
pub use maximal::{fractional_maximal, orlicz_fractional_maximal, CubePool};
pub use riesz::riesz_potential;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::spaces::YoungFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub self_cell_rule: String,
    pub eval_points: usize,
    /// Cube pool of a maximal operator, when one was used.
    pub pool: Option<CubePool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorResult {
    pub output: GridFunction,
    pub diagnostics: Diagnostics,
}

/// Operator selection for front ends that dispatch by name.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    Cauchy,
    Commutator(SelfCell),
    Riesz { alpha: f64 },
    FractionalMaximal { alpha: f64 },
    OrliczMaximal { beta: f64, young: YoungFunction },
}

/// Applies `op` to `f`, with `b` required by the commutator only.
pub fn apply(op: &OperatorSpec, f: &GridFunction, b: Option<&GridFunction>) -> Result<OperatorResult> {
    let n = f.len();
    let diag = |rule: &str, pool: Option<CubePool>| Diagnostics { self_cell_rule: rule.to_string(), eval_points: n, pool };
    Ok(match op {
        OperatorSpec::Cauchy => OperatorResult { output: cauchy_transform(f), diagnostics: diag("zero", None) },
        OperatorSpec::Commutator(rule) => {
            let b = b.ok_or_else(|| Error::InvalidParameter("commutator needs a symbol b".into()))?;
            OperatorResult { output: commutator_with(b, f, *rule)?, diagnostics: diag(rule.name(), None) }
        }
        OperatorSpec::Riesz { alpha } => OperatorResult {
            output: riesz_potential(f, *alpha)?,
            diagnostics: diag("inscribed-disk", None),
        },
        OperatorSpec::FractionalMaximal { alpha } => {
            let pool = CubePool::for_grid(f.grid());
            OperatorResult { output: fractional_maximal(f, *alpha, &pool)?, diagnostics: diag("own-cell", Some(pool)) }
        }
        OperatorSpec::OrliczMaximal { beta, young } => {
            let pool = CubePool::for_grid(f.grid());
            OperatorResult {
                output: orlicz_fractional_maximal(f, *beta, young, &pool)?,
                diagnostics: diag("own-cell", Some(pool)),
            }
        }
    })
}

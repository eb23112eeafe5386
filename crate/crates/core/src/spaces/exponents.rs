// β/2 = 1/p − 1/q − 1/2 and the four regimes it selects.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values within this distance of a regime boundary are snapped onto it.
const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    Constant,
    Hoelder,
    Bmo,
    Campanato,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Constant => "constant",
            CaseTag::Hoelder => "hoelder",
            CaseTag::Bmo => "bmo",
            CaseTag::Campanato => "campanato",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentData {
    pub p: f64,
    pub q: f64,
    pub p_prime: f64,
    pub beta: f64,
    pub phi: f64,
    /// `2 + φβ`, the Campanato index solving `(1/φ)(1 − λ/2) = −β/2`.
    pub lambda: f64,
    pub case_tag: CaseTag,
    /// `p′ = q`, where only a partial characterization is available.
    pub boundary_flag: bool,
}

/// Regime selected by `β`. For `1 < p < 2 < q` one always has `β < 1`, so
/// the constant regime is reachable only through this function.
pub fn case_for_beta(beta: f64) -> CaseTag {
    if beta.abs() < SNAP {
        CaseTag::Bmo
    } else if beta < 0.0 {
        CaseTag::Campanato
    } else if beta <= 1.0 + SNAP {
        CaseTag::Hoelder
    } else {
        CaseTag::Constant
    }
}

pub fn exponent_data(p: f64, q: f64) -> Result<ExponentData> {
    if !(p > 1.0 && p < 2.0 && q > 2.0 && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("need 1 < p < 2 < q < ∞, got p = {p}, q = {q}")));
    }
    let p_prime = p / (p - 1.0);
    let mut beta = 2.0 * (1.0 / p - 1.0 / q - 0.5);
    if beta.abs() < SNAP {
        beta = 0.0;
    }
    let case_tag = case_for_beta(beta);
    let phi = p_prime.max(q);
    Ok(ExponentData {
        p,
        q,
        p_prime,
        beta,
        phi,
        lambda: 2.0 + phi * beta,
        case_tag,
        boundary_flag: (p_prime - q).abs() < SNAP,
    })
}

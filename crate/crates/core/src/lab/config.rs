// Flat `key = value` configuration for the verify suite.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Trials for randomized checks other than the ones below.
    pub trials: usize,
    pub domination_trials: usize,
    pub domination_grid: usize,
    pub cover_trials: usize,
    /// Cells per side for the small grids of the randomized checks.
    pub grid: usize,
    /// Relative slack on exact inequalities; negative values force failures.
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0x5EED, trials: 100, domination_trials: 50, domination_grid: 64, cover_trials: 10_000, grid: 16, tol: 1e-9 }
    }
}

impl VerifyConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: n + 1, msg };
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            let int = |v: &str| -> Result<u64> {
                let parsed = match v.strip_prefix("0x").or_else(|| v.strip_prefix("0X")) {
                    Some(hex) => u64::from_str_radix(hex, 16),
                    None => v.parse::<u64>(),
                };
                parsed.map_err(|_| err(format!("`{k}` needs a nonnegative integer, got `{v}`")))
            };
            let size = |v: &str| -> Result<usize> {
                let x = int(v)?;
                if x == 0 {
                    return Err(err(format!("`{k}` must be positive")));
                }
                Ok(x as usize)
            };
            match k {
                "seed" => c.seed = int(v)?,
                "trials" => c.trials = size(v)?,
                "domination_trials" => c.domination_trials = size(v)?,
                "domination_grid" => c.domination_grid = size(v)?,
                "cover_trials" => c.cover_trials = size(v)?,
                "grid" => c.grid = size(v)?,
                "tol" => {
                    c.tol = v.parse::<f64>().ok().filter(|t| t.is_finite()).ok_or_else(|| err(format!("bad tolerance `{v}`")))?
                }
                _ => return Err(err(format!("unknown key `{k}`"))),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_defaults() {
        let c = VerifyConfig::parse("# comment\nseed = 0x10\n\ntol=-1 # broken\ntrials = 5\n").unwrap();
        assert_eq!(c.seed, 16);
        assert_eq!(c.tol, -1.0);
        assert_eq!(c.trials, 5);
        assert_eq!(c.domination_trials, 50);
        assert_eq!(VerifyConfig::parse("").unwrap(), VerifyConfig::default());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(VerifyConfig::parse("seed 3"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(VerifyConfig::parse("\nfoo = 1"), Err(Error::Parse { line: 2, .. })));
        assert!(VerifyConfig::parse("trials = 0").is_err());
        assert!(VerifyConfig::parse("tol = nan").is_err());
    }
}

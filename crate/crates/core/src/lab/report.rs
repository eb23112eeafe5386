// One report per check: a fixed-schema text form (17 significant digits)
// and a JSON form carrying the same fields.

use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, String>,
    pub measured: BTreeMap<String, f64>,
    pub holds: bool,
    /// Cube family, level window or dictionary the numbers were taken over.
    pub family: Option<String>,
    pub tool_version: String,
    pub seed: u64,
}

impl VerificationReport {
    pub fn new(check_name: &str, seed: u64) -> Self {
        Self {
            check_name: check_name.to_string(),
            parameters: BTreeMap::new(),
            measured: BTreeMap::new(),
            holds: true,
            family: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn measure(&mut self, key: &str, value: f64) -> &mut Self {
        self.measured.insert(key.to_string(), value);
        self
    }

    pub fn family(&mut self, description: impl Into<String>) -> &mut Self {
        self.family = Some(description.into());
        self
    }

    /// Records a sub-result and folds it into `holds`.
    pub fn require(&mut self, key: &str, ok: bool) -> &mut Self {
        self.parameters.insert(format!("holds.{key}"), ok.to_string());
        self.holds &= ok;
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "check = {}", self.check_name);
        let _ = writeln!(s, "holds = {}", self.holds);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "version = {}", self.tool_version);
        if let Some(f) = &self.family {
            let _ = writeln!(s, "family = {f}");
        }
        s.push_str("[parameters]\n");
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "{k} = {v}");
        }
        s.push_str("[measured]\n");
        for (k, v) in &self.measured {
            let _ = writeln!(s, "{k} = {v:.16e}");
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

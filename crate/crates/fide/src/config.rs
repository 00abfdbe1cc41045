//! Problem configuration files (JSON) and their mapping onto [`ProblemSpec`].

use std::path::Path;

use fide_core::solver::{ForcingSpec, ProblemSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub from: usize,
    pub to: usize,
    pub step: usize,
}

impl Sweep {
    /// Parses `from:to:step`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || CliError::Config(format!("invalid sweep {text:?}; expected from:to:step"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Result<Vec<usize>, _> = parts.iter().map(|p| p.trim().parse::<usize>()).collect();
        let nums = nums.map_err(|_| bad())?;
        Sweep { from: nums[0], to: nums[1], step: nums[2] }.validated()
    }

    pub fn validated(self) -> Result<Self, CliError> {
        if self.step == 0 || self.from > self.to {
            return Err(CliError::Config(format!(
                "empty sweep {}:{}:{}; need step >= 1 and from <= to",
                self.from, self.to, self.step
            )));
        }
        Ok(self)
    }

    pub fn values(&self) -> Vec<usize> {
        (self.from..=self.to).step_by(self.step).collect()
    }
}

/// On-disk problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub name: String,
    pub n: usize,
    pub a: Vec<f64>,
    pub alpha: f64,
    pub kernel: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mms_exact: Option<Vec<(f64, f64)>>,
    pub ics: Vec<f64>,
    /// Exact solution in `t` for error reports when the forcing is given directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(rename = "N_sweep", default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ProblemConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serialises");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        if self.n < 1 {
            return err("n must be at least 1".into());
        }
        if self.a.len() != self.n + 1 {
            return err(format!("a must have n + 1 = {} entries, got {}", self.n + 1, self.a.len()));
        }
        if self.ics.len() != self.n {
            return err(format!("ics must have n = {} entries, got {}", self.n, self.ics.len()));
        }
        match (&self.forcing, &self.mms_exact) {
            (Some(_), None) | (None, Some(_)) => {}
            _ => return err("exactly one of forcing and mms_exact must be given".into()),
        }
        if self.truncation.is_some() && self.sweep.is_some() {
            return err("give at most one of N and N_sweep".into());
        }
        if let Some(s) = self.sweep {
            s.validated()?;
        }
        Ok(())
    }

    pub fn from_spec(spec: &ProblemSpec) -> Self {
        let (forcing, mms_exact) = match &spec.forcing {
            ForcingSpec::Expression(f) => (Some(f.clone()), None),
            ForcingSpec::Mms(terms) => (None, Some(terms.clone())),
        };
        ProblemConfig {
            name: spec.name.clone(),
            n: spec.n(),
            a: spec.a.clone(),
            alpha: spec.alpha,
            kernel: spec.kernel.clone(),
            forcing,
            mms_exact,
            ics: spec.ics.clone(),
            exact: spec.exact.clone(),
            truncation: None,
            sweep: None,
        }
    }

    pub fn to_spec(&self) -> ProblemSpec {
        let forcing = match (&self.forcing, &self.mms_exact) {
            (Some(f), _) => ForcingSpec::Expression(f.clone()),
            (None, Some(m)) => ForcingSpec::Mms(m.clone()),
            (None, None) => unreachable!("validated config"),
        };
        ProblemSpec {
            name: self.name.clone(),
            a: self.a.clone(),
            alpha: self.alpha,
            kernel: self.kernel.clone(),
            forcing,
            ics: self.ics.clone(),
            exact: self.exact.clone(),
        }
    }

    /// SHA-256 of the canonical JSON of the problem data (truncation fields excluded).
    pub fn digest(&self) -> String {
        let problem = ProblemConfig { truncation: None, sweep: None, ..self.clone() };
        let canonical = serde_json::to_string(&problem).expect("config serialises");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

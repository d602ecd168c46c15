//! Evaluation settings shared by every series in the crate.
//!
//! Settings resolve in three layers: built-in defaults, an optional
//! `key = value` file (path taken from `CLAUSEN_CERT_CONFIG`), then explicit
//! overrides such as command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming the optional configuration file.
pub const CONFIG_ENV: &str = "CLAUSEN_CERT_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
    /// Minimum distance kept from every strict-inequality boundary.
    pub margin: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_terms: 200_000,
            margin: 1e-9,
        }
    }
}

/// Partial settings, as read from a file or the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_terms: Option<usize>,
    #[serde(alias = "delta")]
    pub margin: Option<f64>,
}

impl ConfigOverrides {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Reads the file named by [`CONFIG_ENV`], if the variable is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    fn apply(&self, cfg: &mut EvalConfig) {
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = self.max_terms {
            cfg.max_terms = v;
        }
        if let Some(v) = self.margin {
            cfg.margin = v;
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.rel_tol) {
            return Err(Error::Config(format!(
                "rel_tol must be > 0, got {}",
                self.rel_tol
            )));
        }
        if !ok(self.abs_tol) {
            return Err(Error::Config(format!(
                "abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if self.max_terms < 10 {
            return Err(Error::Config(format!(
                "max_terms must be >= 10, got {}",
                self.max_terms
            )));
        }
        if !ok(self.margin) {
            return Err(Error::Config(format!(
                "margin must be > 0, got {}",
                self.margin
            )));
        }
        Ok(())
    }

    /// Defaults, then `file`, then `flags`; the result is validated.
    pub fn layered(file: &ConfigOverrides, flags: &ConfigOverrides) -> Result<Self> {
        let mut cfg = EvalConfig::default();
        file.apply(&mut cfg);
        flags.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Convergence threshold for a series whose current value is `value`.
    pub fn threshold(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

//! `key = value` defaults file. Command-line flags always win.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

const KNOWN: &[&str] = &[
    "resolution",
    "samples",
    "seed",
    "points",
    "tolerance.identity",
    "tolerance.optimality",
    "tolerance.nullvector",
    "tolerance.factorization",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Config {
    pub resolution: Option<usize>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub points: Option<usize>,
    /// Suite name to tolerance.
    pub tolerance: BTreeMap<String, f64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| CliError::Usage(format!("config line {}: {msg}: {raw:?}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN.contains(&key) {
                return Err(bad("unknown key"));
            }
            match key {
                "resolution" => cfg.resolution = Some(value.parse().map_err(|_| bad("not an integer"))?),
                "samples" => cfg.samples = Some(value.parse().map_err(|_| bad("not an integer"))?),
                "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("not an integer"))?),
                "points" => cfg.points = Some(value.parse().map_err(|_| bad("not an integer"))?),
                _ => {
                    let tol: f64 = value.parse().map_err(|_| bad("not a number"))?;
                    if !(tol > 0.0) {
                        return Err(bad("tolerance must be positive"));
                    }
                    let suite = key.trim_start_matches("tolerance.");
                    cfg.tolerance.insert(suite.to_string(), tol);
                }
            }
        }
        Ok(cfg)
    }

    pub fn tolerance(&self, suite: &str) -> Option<f64> {
        self.tolerance.get(suite).copied()
    }
}

//! The `--shape` mini-language.
//!
//! ```text
//! ball:R[;n=N]                    ball of radius R in R^N (N defaults to 3)
//! harmonic:[n=N;]c0=a;c1=b;...    r(θ) = Σ c_j cos(jθ), θ measured from x_1
//! file:PATH                       polar table {"n": N, "theta": [...], "r": [...]}
//! ```

use std::f64::consts::PI;
use std::path::Path;

use hyperthick::StarShape;
use serde::{Deserialize, Serialize};

use crate::CliError;

const DEFAULT_DIM: usize = 3;
// Positivity of cosine series is checked on this many θ samples.
const POSITIVITY_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    Ball { n: usize, radius: f64 },
    Harmonic { n: usize, coefficients: Vec<f64> },
    Table { n: usize, path: String, theta: Vec<f64>, r: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    n: usize,
    theta: Vec<f64>,
    r: Vec<f64>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn domain(msg: impl Into<String>) -> CliError {
    CliError::Domain(hyperthick::Error::Domain(msg.into()))
}

fn parse_dim(v: &str) -> Result<usize, CliError> {
    let n: usize = v.parse().map_err(|_| usage(format!("bad dimension {v:?}")))?;
    if n < 2 {
        return Err(domain(format!("dimension must be at least 2, got {n}")));
    }
    Ok(n)
}

fn parse_float(v: &str) -> Result<f64, CliError> {
    v.trim().parse().map_err(|_| usage(format!("bad number {v:?}")))
}

impl ShapeSpec {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let (kind, body) = spec
            .split_once(':')
            .ok_or_else(|| usage(format!("shape {spec:?} needs a kind prefix (ball:, harmonic:, file:)")))?;
        match kind {
            "ball" => {
                let mut parts = body.split(';');
                let radius = parse_float(parts.next().unwrap_or(""))?;
                let mut n = DEFAULT_DIM;
                for part in parts {
                    match part.split_once('=') {
                        Some(("n", v)) => n = parse_dim(v)?,
                        _ => return Err(usage(format!("unexpected ball option {part:?}"))),
                    }
                }
                if !(radius > 0.0) || !radius.is_finite() {
                    return Err(domain(format!("ball radius must be positive, got {radius}")));
                }
                Ok(ShapeSpec::Ball { n, radius })
            }
            "harmonic" => {
                let mut n = DEFAULT_DIM;
                let mut coefficients: Vec<f64> = Vec::new();
                for part in body.split(';').filter(|p| !p.is_empty()) {
                    let (key, value) =
                        part.split_once('=').ok_or_else(|| usage(format!("expected key=value, got {part:?}")))?;
                    if key == "n" {
                        n = parse_dim(value)?;
                        continue;
                    }
                    let j: usize = key
                        .strip_prefix('c')
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| usage(format!("unknown harmonic key {key:?}")))?;
                    if coefficients.len() <= j {
                        coefficients.resize(j + 1, 0.0);
                    }
                    coefficients[j] = parse_float(value)?;
                }
                if coefficients.is_empty() {
                    return Err(usage("harmonic shape needs at least one coefficient"));
                }
                let min = (0..=POSITIVITY_SAMPLES)
                    .map(|i| cosine_series(&coefficients, PI * i as f64 / POSITIVITY_SAMPLES as f64))
                    .fold(f64::INFINITY, f64::min);
                if !(min > 0.0) {
                    return Err(domain(format!("cosine series is not positive (minimum {min})")));
                }
                Ok(ShapeSpec::Harmonic { n, coefficients })
            }
            "file" => Self::load_table(Path::new(body)),
            other => Err(usage(format!("unknown shape kind {other:?}"))),
        }
    }

    fn load_table(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let t: TableFile = serde_json::from_str(&text)
            .map_err(|e| usage(format!("{} is not a polar table: {e}", path.display())))?;
        if t.n < 2 {
            return Err(domain(format!("dimension must be at least 2, got {}", t.n)));
        }
        if t.theta.len() != t.r.len() || t.theta.len() < 2 {
            return Err(domain("theta and r must have the same length, at least 2"));
        }
        let ends_ok = t.theta[0].abs() <= 1e-12 && (t.theta[t.theta.len() - 1] - PI).abs() <= 1e-12;
        if !ends_ok || t.theta.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("theta must increase strictly from 0 to pi"));
        }
        if t.r.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(domain("every radius must be positive and finite"));
        }
        Ok(ShapeSpec::Table { n: t.n, path: path.display().to_string(), theta: t.theta, r: t.r })
    }

    pub fn dim(&self) -> usize {
        match self {
            ShapeSpec::Ball { n, .. } | ShapeSpec::Harmonic { n, .. } | ShapeSpec::Table { n, .. } => *n,
        }
    }

    /// An upper bound on the radius, for Monte Carlo sampling.
    pub fn bound(&self) -> f64 {
        match self {
            ShapeSpec::Ball { radius, .. } => *radius,
            ShapeSpec::Harmonic { coefficients, .. } => coefficients.iter().map(|c| c.abs()).sum(),
            ShapeSpec::Table { r, .. } => r.iter().copied().fold(0.0, f64::max),
        }
    }

    pub fn star(&self) -> StarShape {
        match self.clone() {
            ShapeSpec::Ball { n, radius } => StarShape::ball(n, radius),
            ShapeSpec::Harmonic { n, coefficients } => {
                StarShape::axisymmetric(n, move |theta| cosine_series(&coefficients, theta))
            }
            ShapeSpec::Table { n, theta, r, .. } => StarShape::axisymmetric(n, move |t| interpolate(&theta, &r, t)),
        }
    }
}

fn cosine_series(c: &[f64], theta: f64) -> f64 {
    c.iter().enumerate().map(|(j, cj)| cj * (j as f64 * theta).cos()).sum()
}

// Piecewise linear in θ; the table covers [0, π].
fn interpolate(theta: &[f64], r: &[f64], t: f64) -> f64 {
    let i = theta.partition_point(|&x| x <= t).clamp(1, theta.len() - 1);
    let (t0, t1) = (theta[i - 1], theta[i]);
    let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
    r[i - 1] + s * (r[i] - r[i - 1])
}

//! Invariant suites behind `hyperthick verify`.

use hyperthick::analysis::{
    nullvector_recover, random_direction, sphere_optimality_test, stationary_shape, DeformationSample, RANK_THRESHOLD,
};
use hyperthick::nsphere::{unit_ball_volume, unit_sphere_area};
use hyperthick::properties::{body_properties, linear_identity_residual, linear_identity_residual_flipped};
use hyperthick::stationary::factorization_residual;
use hyperthick::{Error, HarmonicPerturbation, StationaryParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::CliError;

// The flipped sign pattern has to miss by at least this much to count as rejected.
const IDENTITY_REJECT: f64 = 1e-3;
const RATIO_TARGET: f64 = 4.0;
const RATIO_SLACK: f64 = 0.5;
const RESAMPLINGS: usize = 20;
const BLOB_AMPLITUDE: f64 = 0.2;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub pass: bool,
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: &'static str, tolerance: f64) -> Self {
        Self { suite, pass: true, tolerance, checks: Vec::new() }
    }

    // Passes when value <= tolerance; NaN fails.
    fn at_most(&mut self, name: String, value: f64, tolerance: f64) {
        self.push(name, value <= tolerance, value, tolerance);
    }

    fn push(&mut self, name: String, pass: bool, value: f64, tolerance: f64) {
        self.pass &= pass;
        self.checks.push(Check { name, pass, value, tolerance });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn identity(nms: &[usize], m: usize, resolution: usize, tol: f64) -> Result<Report, CliError> {
    let mut report = Report::new("identity", tol);
    for &k in nms {
        for ecc in [0.3, 0.8, 1.0] {
            for lambda in [0.5, 1.0, 2.0] {
                let q = StationaryParams::new(k + m, m, lambda, ecc)?;
                let b = body_properties(&q, resolution)?;
                let scale = unit_sphere_area(q.n - 1) / unit_ball_volume(m) * b.thickness;
                let derived = linear_identity_residual(&b, &q).abs() / scale;
                let flipped = linear_identity_residual_flipped(&b, &q).abs() / scale;
                report.push(
                    format!("k={k} e={ecc} lambda={lambda}: derived residual (flipped {flipped:.3e})"),
                    derived <= tol && flipped > IDENTITY_REJECT,
                    derived,
                    tol,
                );
            }
        }
    }
    Ok(report)
}

pub fn sphere_optimality(
    pairs: &[(usize, usize)],
    trials: usize,
    amplitude: f64,
    seed: u64,
    tol: f64,
) -> Result<Report, CliError> {
    if !(amplitude > 0.0) {
        return Err(Error::Domain(format!("amplitude must be positive, got {amplitude}")).into());
    }
    let mut report = Report::new("sphere-optimality", tol);
    for &(n, m) in pairs {
        let pair_seed = seed + 10 * n as u64 + m as u64;
        let main = sphere_optimality_test(n, m, trials, amplitude, pair_seed)?;
        let worst = main.iter().map(|t| t.delta_t).fold(f64::NEG_INFINITY, f64::max);
        report.at_most(format!("(n,m)=({n},{m}): max dT at amplitude {amplitude}"), worst, tol);
        let small = sphere_optimality_test(n, m, trials, 0.4 * amplitude, pair_seed)?;
        let large = sphere_optimality_test(n, m, trials, 0.8 * amplitude, pair_seed)?;
        let spread = small
            .iter()
            .zip(&large)
            .map(|(s, l)| (l.delta_t / s.delta_t - RATIO_TARGET).abs())
            .fold(0.0, f64::max);
        report.at_most(format!("(n,m)=({n},{m}): max |dT(2a)/dT(a) - 4|"), spread, RATIO_SLACK);
    }
    Ok(report)
}

pub fn nullvector(nms: &[usize], lambda: f64, ecc: f64, seed: u64, tol: f64) -> Result<Report, CliError> {
    let mut report = Report::new("nullvector", tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &k in nms {
        let (n, m) = (k + 2, 2);
        let q = StationaryParams::new(n, m, lambda, ecc)?;
        let shape = stationary_shape(&q)?;
        let (mut cond, mut l_err, mut mu_err) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..RESAMPLINGS {
            let dirs = (0..n + 2).map(|_| random_direction(n, &mut rng)).collect();
            let sample = DeformationSample::from_shape(&shape, m, dirs)?;
            match nullvector_recover(&sample) {
                Ok(nv) => {
                    cond = cond.max(nv.condition);
                    l_err = l_err.max(rel(nv.lambda, lambda));
                    mu_err = mu_err.max(if q.mu == 0.0 { nv.mu_norm } else { rel(nv.mu_norm, q.mu.abs()) });
                }
                Err(Error::Rank { .. }) => cond = f64::INFINITY,
                Err(e) => return Err(e.into()),
            }
        }
        report.at_most(format!("(n,m)=({n},{m}): worst sigma_min/sigma_second"), cond, RANK_THRESHOLD);
        report.at_most(format!("(n,m)=({n},{m}): worst lambda relative error"), l_err, tol);
        report.at_most(format!("(n,m)=({n},{m}): worst |mu| relative error"), mu_err, tol);
    }
    let blob = HarmonicPerturbation::random(3, 3, &mut rng).star(BLOB_AMPLITUDE);
    let mut accepted = 0usize;
    for _ in 0..RESAMPLINGS {
        let dirs = (0..5).map(|_| random_direction(3, &mut rng)).collect();
        let sample = DeformationSample::from_shape(&blob, 2, dirs)?;
        accepted += nullvector_recover(&sample).is_ok() as usize;
    }
    report.at_most("non-stationary blob: samples passing the rank test".into(), accepted as f64, 0.0);
    Ok(report)
}

pub fn factorization(nms: &[usize], points: usize, seed: u64, tol: f64) -> Result<Report, CliError> {
    let mut report = Report::new("factorization", tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &k in nms {
        if k == 0 {
            return Err(Error::Domain("n - m must be at least 1".into()).into());
        }
        let worst = (0..points)
            .map(|_| factorization_residual(k, rng.random_range(-2.0..2.0)))
            .fold(0.0, f64::max);
        report.at_most(format!("k={k}: worst relative residual over {points} points"), worst, tol);
    }
    Ok(report)
}

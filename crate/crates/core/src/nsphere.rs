//! Gamma function and the unit ball / unit sphere measures in any dimension.
//!
//! Conventions: `unit_ball_volume(n)` is the n-volume of the unit ball in
//! R^n, `unit_sphere_area(k)` is the k-dimensional area of the unit sphere
//! S^k, which bounds the (k+1)-ball. So the sphere enclosing the n-ball is
//! `unit_sphere_area(n - 1)`.

use std::f64::consts::PI;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which Γ(x) is finite in f64.
const GAMMA_MAX_ARG: f64 = 171.0;

/// Γ(x) for real x > 0.
///
/// Integer and half-integer arguments are evaluated as exact factorial and
/// double-factorial products; everything else goes through a Lanczos
/// approximation (g = 7, 9 terms).
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("gamma needs a positive finite argument, got {x}")));
    }
    if x > GAMMA_MAX_ARG + 0.5 {
        return Ok(f64::INFINITY);
    }
    if x.fract() == 0.0 {
        // Γ(k) = (k-1)!
        let k = x as u64;
        return Ok((1..k).fold(1.0, |acc, j| acc * j as f64));
    }
    if (x - 0.5).fract() == 0.0 {
        // Γ(k + 1/2) = √π Π_{j<k} (j + 1/2)
        let k = (x - 0.5) as u64;
        return Ok((0..k).fold(PI.sqrt(), |acc, j| acc * (j as f64 + 0.5)));
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the series in its accurate range
        return PI / ((PI * x).sin() * lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power so t^(x+1/2) cannot overflow before e^-t pulls it back
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * sum
}

/// Volume of the unit n-ball, V_n = π^{n/2} / Γ(n/2 + 1). V_0 = 1.
pub fn unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    PI.powf(half) / gamma(half + 1.0).expect("n/2 + 1 is positive")
}

/// Area of the unit k-sphere, S_k = 2π^{(k+1)/2} / Γ((k+1)/2). S_0 = 2.
pub fn unit_sphere_area(k: usize) -> f64 {
    let half = (k as f64 + 1.0) / 2.0;
    2.0 * PI.powf(half) / gamma(half).expect("(k+1)/2 is positive")
}

/// Both measures for the n-ball and its bounding sphere.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BallMeasures {
    pub n: usize,
    /// V_n
    pub volume: f64,
    /// S_{n-1}; only defined for n >= 1.
    pub surface: Option<f64>,
}

pub fn ball_measures(n: usize) -> BallMeasures {
    BallMeasures {
        n,
        volume: unit_ball_volume(n),
        surface: n.checked_sub(1).map(unit_sphere_area),
    }
}

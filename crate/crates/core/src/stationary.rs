//! Stationary shapes: solutions of 1 − λ r^k − μ r^{k+1} cos θ = 0, k = n − m.
//!
//! θ is measured from the symmetry axis x_1 (the z axis of the cylindrical
//! chart). μ ≤ 0, so the centroid lies on the positive z side and a critical
//! shape has its cusp at z_+ > 0. The shape depends on (n, m) only through k.
//!
//! The support equation is written in the scaled variable
//! w = z (λ/(k+1))^{1/k}, where the axis crossings solve
//! |w|^k ((k+1) − k e w) = 1.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::CylPoint;
use crate::roots::bracketed_newton;
use crate::thickness::check_dims;

/// Multipliers (λ, μ) and eccentricity e of a stationary shape in R^n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryParams {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub ecc: f64,
    pub mu: f64,
}

impl StationaryParams {
    pub fn new(n: usize, m: usize, lambda: f64, ecc: f64) -> Result<Self> {
        check_dims(m, n)?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain(format!("lambda must be positive, got {lambda}")));
        }
        if !(ecc >= 0.0) || !ecc.is_finite() {
            return Err(domain(format!("eccentricity must be non-negative, got {ecc}")));
        }
        Ok(Self { n, m, lambda, ecc, mu: mu_from_ecc(n - m, lambda, ecc) })
    }

    /// From a (λ, μ) pair; the sign of μ is dropped (it only fixes orientation).
    pub fn from_mu(n: usize, m: usize, lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(domain(format!("lambda must be positive, got {lambda}")));
        }
        Self::new(n, m, lambda, e_from_mu(n - m, lambda, mu))
    }

    /// k = n − m
    pub fn nm(&self) -> usize {
        self.n - self.m
    }

    pub fn class(&self) -> ShapeClass {
        classify_unchecked(self.ecc)
    }

    /// Radius λ^{-1/k} of the e = 0 sphere.
    pub fn sphere_radius(&self) -> f64 {
        self.lambda.powf(-1.0 / self.nm() as f64)
    }

    /// Scale that maps z to the support variable w.
    pub fn w_scale(&self) -> f64 {
        let k = self.nm() as f64;
        (self.lambda / (k + 1.0)).powf(1.0 / k)
    }

    /// Same e with every length multiplied by c (λ → c^{-k} λ).
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        Self::new(self.n, self.m, self.lambda * c.powi(-(self.nm() as i32)), self.ecc)
    }
}

fn mu_coefficient(k: usize, lambda: f64) -> f64 {
    let k = k as f64;
    let p = (k + 1.0) / k;
    k * lambda.powf(p) / (k + 1.0).powf(p)
}

/// μ = −k λ^{(k+1)/k} / (k+1)^{(k+1)/k} · e
pub fn mu_from_ecc(nm: usize, lambda: f64, ecc: f64) -> f64 {
    if ecc == 0.0 {
        return 0.0;
    }
    -mu_coefficient(nm, lambda) * ecc
}

/// Inverse of `mu_from_ecc`, taking |μ|.
pub fn e_from_mu(nm: usize, lambda: f64, mu: f64) -> f64 {
    mu.abs() / mu_coefficient(nm, lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeClass {
    Sphere,
    Egg,
    Critical,
    Open,
}

impl std::fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Sphere => "sphere",
            Self::Egg => "egg",
            Self::Critical => "critical",
            Self::Open => "open",
        };
        f.write_str(s)
    }
}

/// Exact comparisons: 0 is a sphere, 1 is critical.
pub fn classify(ecc: f64) -> Result<ShapeClass> {
    if !(ecc >= 0.0) {
        return Err(domain(format!("eccentricity must be non-negative, got {ecc}")));
    }
    Ok(classify_unchecked(ecc))
}

fn classify_unchecked(ecc: f64) -> ShapeClass {
    if ecc == 0.0 {
        ShapeClass::Sphere
    } else if ecc < 1.0 {
        ShapeClass::Egg
    } else if ecc == 1.0 {
        ShapeClass::Critical
    } else {
        ShapeClass::Open
    }
}

/// |1 − λ r^k − μ r^{k+1} cos θ|
pub fn profile_residual(params: &StationaryParams, theta: f64, r: f64) -> f64 {
    let k = params.nm() as i32;
    (1.0 - params.lambda * r.powi(k) - params.mu * r.powi(k + 1) * theta.cos()).abs()
}

/// Boundary radius r(θ): the smallest positive root of the stationary equation.
pub fn radial_profile(params: &StationaryParams, theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    let k = params.nm();
    let lambda = params.lambda;
    let e = params.ecc;
    let c = theta.cos();
    if e == 0.0 {
        return Ok(params.sphere_radius());
    }
    match k {
        1 => {
            let d = one_minus_ecos(e, theta);
            if d < 0.0 {
                return Err(Error::NoRoot { theta });
            }
            Ok(2.0 / lambda / (1.0 + d.sqrt()))
        }
        2 if (e * c).abs() <= 1.0 => {
            let x = e * c;
            let d = one_minus_ecos(e, theta);
            if d < 0.0 {
                return Err(Error::NoRoot { theta });
            }
            // acos near x = 1 through the exact 1 - x
            let arc = if x > 0.5 { 2.0 * (0.5 * d).sqrt().asin() } else { x.acos() };
            Ok(3f64.sqrt() / (2.0 * lambda.sqrt()) / ((PI - arc) / 3.0).cos())
        }
        2 if e * c > 1.0 => Err(Error::NoRoot { theta }),
        _ => general_root(params, theta),
    }
}

/// 1 − e cos θ without cancellation near e cos θ = 1.
fn one_minus_ecos(e: f64, theta: f64) -> f64 {
    (1.0 - e) + 2.0 * e * (0.5 * theta).sin().powi(2)
}

/// The radius on the far side, r(π − θ): the same family in the mirrored
/// orientation r = a / (1 + sqrt(1 − e cos θ)) for k = 1.
pub fn radial_profile_reflected(params: &StationaryParams, theta: f64) -> Result<f64> {
    radial_profile(params, PI - theta)
}

fn general_root(params: &StationaryParams, theta: f64) -> Result<f64> {
    let k = params.nm() as i32;
    let lambda = params.lambda;
    let a = params.mu * theta.cos();
    let g = |r: f64| {
        let rk1 = r.powi(k - 1);
        let value = 1.0 - lambda * rk1 * r - a * rk1 * r * r;
        let slope = -(k as f64) * lambda * rk1 - (k as f64 + 1.0) * a * rk1 * r;
        (value, slope)
    };
    let r0 = params.sphere_radius();
    if a == 0.0 {
        return Ok(r0);
    }
    if a > 0.0 {
        // g decreases monotonically from g(0) = 1
        return bracketed_newton(g, 0.0, 2.0 * r0, r0);
    }
    // With q = e cos θ > 0, g falls to its minimum 1 − q^{-k} at
    // r* = z_c / q (z_c the critical z_+) and rises again.
    let kf = k as f64;
    let gap = one_minus_ecos(params.ecc, theta);
    if gap < 0.0 {
        return Err(Error::NoRoot { theta });
    }
    let q = 1.0 - gap;
    let r_star = ((kf + 1.0) / lambda).powf(1.0 / kf) / q;
    if q < 0.5 {
        return bracketed_newton(g, 0.0, r_star, r0);
    }
    // Near a double root: with u = r / r*, q^k g = (1 − u)² P(u) − (1 − q^k)
    // where P(u) = Σ j u^{j-1}. Solving for δ = 1 − u keeps full precision.
    let drop = -(kf * (-gap).ln_1p()).exp_m1();
    if drop == 0.0 {
        return Ok(r_star);
    }
    let f = |delta: f64| {
        let u = 1.0 - delta;
        let (mut p, mut dp) = (0.0, 0.0);
        for j in (1..=k).rev() {
            dp = dp * u + p;
            p = p * u + j as f64;
        }
        (delta * delta * p - drop, 2.0 * delta * p - delta * delta * dp)
    };
    let guess = (2.0 * drop / (kf * (kf + 1.0))).sqrt();
    let delta = bracketed_newton(f, 0.0, 1.0, guess)?;
    Ok(r_star * (1.0 - delta))
}

/// R²(z) = (λ + μz)^{-2/k} − z².
pub fn cylindrical_radius_squared(params: &StationaryParams, z: f64) -> Result<f64> {
    let base = params.lambda + params.mu * z;
    if !(base > 0.0) {
        return Err(Error::Pole { z, value: base });
    }
    Ok(base.powf(-2.0 / params.nm() as f64) - z * z)
}

/// d(R²)/dz.
pub fn cylindrical_radius_squared_slope(params: &StationaryParams, z: f64) -> Result<f64> {
    let base = params.lambda + params.mu * z;
    if !(base > 0.0) {
        return Err(Error::Pole { z, value: base });
    }
    let k = params.nm() as f64;
    Ok(-2.0 / k * params.mu * base.powf(-2.0 / k - 1.0) - 2.0 * z)
}

/// Meridian radius R(z). Tiny negative R² from rounding at the ends reads as 0.
pub fn cylindrical_radius(params: &StationaryParams, z: f64) -> Result<f64> {
    let r2 = cylindrical_radius_squared(params, z)?;
    let slack = 64.0 * f64::EPSILON * (z * z).max(params.sphere_radius().powi(2));
    if r2 < -slack {
        return Err(Error::OutsideSupport { z, r_squared: r2 });
    }
    Ok(r2.max(0.0).sqrt())
}

/// Axis crossings (z_−, z_+) of the meridian.
pub fn support_interval(params: &StationaryParams) -> Result<(f64, f64)> {
    if params.class() == ShapeClass::Open {
        return Err(Error::Unbounded { ecc: params.ecc });
    }
    let s = params.w_scale();
    Ok((-support_w_negative(params)? / s, support_w_positive(params)? / s))
}

/// Positive root of w^k ((k+1) − k e w) = 1 on (0, 1/e].
fn support_w_positive(params: &StationaryParams) -> Result<f64> {
    let k = params.nm() as i32;
    let kf = k as f64;
    let e = params.ecc;
    if e == 0.0 {
        return Ok((kf + 1.0).powf(-1.0 / kf));
    }
    if e == 1.0 {
        return Ok(1.0);
    }
    let h = |w: f64| {
        let wk1 = w.powi(k - 1);
        (wk1 * w * (kf + 1.0 - kf * e * w) - 1.0, kf * (kf + 1.0) * wk1 * (1.0 - e * w))
    };
    bracketed_newton(h, 0.0, 1.0 / e, 1.0)
}

/// t = |w| on the negative side: t^k ((k+1) + k e t) = 1.
fn support_w_negative(params: &StationaryParams) -> Result<f64> {
    let k = params.nm();
    let kf = k as f64;
    let e = params.ecc;
    if e == 1.0 {
        if let Some(t) = critical_negative_closed_form(k) {
            return Ok(t);
        }
    }
    let top = (kf + 1.0).powf(-1.0 / kf);
    if e == 0.0 {
        return Ok(top);
    }
    let ki = k as i32;
    let h = |t: f64| {
        let tk1 = t.powi(ki - 1);
        (tk1 * t * (kf + 1.0 + kf * e * t) - 1.0, kf * (kf + 1.0) * tk1 * (1.0 + e * t))
    };
    bracketed_newton(h, 0.0, top, top)
}

/// Closed forms for t = −w at the critical negative crossing.
fn critical_negative_closed_form(k: usize) -> Option<f64> {
    match k {
        1 => Some(2f64.sqrt() - 1.0),
        2 => Some(0.5),
        4 => Some(-critical_w_minus_nm4()),
        _ => None,
    }
}

/// Real root of the cofactor 4w³ + 3w² + 2w + 1 (Cardano), about −0.6058.
pub fn critical_w_minus_nm4() -> f64 {
    let s6 = 6f64.sqrt();
    ((15.0 * (4.0 * s6 - 9.0)).cbrt() - (15.0 * (4.0 * s6 + 9.0)).cbrt() - 3.0) / 12.0
}

/// Meridian sampled from z_− to z_+.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileCurve {
    pub params: StationaryParams,
    pub z_minus: f64,
    pub z_plus: f64,
    pub samples: Vec<CylPoint>,
}

/// `count` Chebyshev–Lobatto points on [z_−, z_+]; the end radii are exactly 0.
pub fn profile_curve(params: &StationaryParams, count: usize) -> Result<ProfileCurve> {
    if count < 2 {
        return Err(domain("a profile needs at least 2 points"));
    }
    let (z_minus, z_plus) = support_interval(params)?;
    let mid = 0.5 * (z_minus + z_plus);
    let half = 0.5 * (z_plus - z_minus);
    let last = count - 1;
    let samples = (0..count)
        .map(|j| {
            if j == 0 {
                return Ok(CylPoint { z: z_minus, radius: 0.0 });
            }
            if j == last {
                return Ok(CylPoint { z: z_plus, radius: 0.0 });
            }
            let z = mid - half * (PI * j as f64 / last as f64).cos();
            Ok(CylPoint { z, radius: cylindrical_radius(params, z)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProfileCurve { params: *params, z_minus, z_plus, samples })
}

/// Opening angle of the two-dimensional critical cusp, 2 arctan √2.
pub fn cusp_angle_2d() -> f64 {
    2.0 * 2f64.sqrt().atan()
}

/// Cusp angle measured on a sampled profile: the half-angle slope
/// R / (z_+ − z) from the two samples nearest z_+, linearly extrapolated to
/// the tip.
pub fn measured_cusp_angle(curve: &ProfileCurve) -> Result<f64> {
    let n = curve.samples.len();
    if n < 4 {
        return Err(domain("need at least 4 samples to measure the cusp"));
    }
    let near = curve.samples[n - 2];
    let far = curve.samples[n - 3];
    let (d1, d2) = (curve.z_plus - near.z, curve.z_plus - far.z);
    let (s1, s2) = (near.radius / d1, far.radius / d2);
    let slope = s1 - (s2 - s1) / (d2 - d1) * d1;
    Ok(2.0 * slope.atan())
}

/// Cartesian form of the k = 1 critical meridian with the cusp at z_+:
/// (2/λ)^4 − (4/λ − z)^2 (z² + R²).
pub fn critical_2d_implicit(lambda: f64, z: f64, radius: f64) -> f64 {
    (2.0 / lambda).powi(4) - (4.0 / lambda - z).powi(2) * (z * z + radius * radius)
}

/// 1 − (k+1) w^k + k w^{k+1} − (w − 1)² Σ_{j=1}^{k} j w^{j−1}, divided by the
/// largest term on either side.
pub fn factorization_residual(nm: usize, w: f64) -> f64 {
    let k = nm as i32;
    let kf = nm as f64;
    let lhs_terms = [1.0, (kf + 1.0) * w.powi(k), kf * w.powi(k + 1)];
    let lhs = lhs_terms[0] - lhs_terms[1] + lhs_terms[2];
    let mut cofactor = 0.0;
    let mut biggest = lhs_terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    for j in (1..=nm).rev() {
        cofactor = cofactor * w + j as f64;
        biggest = biggest.max((j as f64 * w.powi(j as i32 - 1)).abs() * (w - 1.0).powi(2));
    }
    let rhs = (w - 1.0).powi(2) * cofactor;
    (lhs - rhs).abs() / biggest
}

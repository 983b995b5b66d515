//! Volume, axial moment and thickness of stationary shapes.
//!
//! Multiplying the stationary equation by r and integrating over the sphere
//! gives the linear identity
//!
//! ```text
//! (S_{n-1} / V_m) T − λ n V − μ (n+1) M = 0
//! ```
//!
//! which is used both as a self-test and to recover T where only V and M have
//! closed forms.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::nsphere::{unit_ball_volume, unit_sphere_area};
use crate::quadrature::{cosine_mapped, gauss_legendre};
use crate::stationary::{
    critical_w_minus_nm4, cylindrical_radius_squared, radial_profile, support_interval, ShapeClass,
    StationaryParams,
};
use crate::thickness::BodyProperties;

pub const DEFAULT_RESOLUTION: usize = 256;

/// V and M by Gauss–Legendre along the axis (cosine-mapped so the end
/// behaviour of R is analytic), T by Gauss–Legendre in θ on r(θ).
pub fn body_properties(params: &StationaryParams, resolution: usize) -> Result<BodyProperties> {
    if params.class() == ShapeClass::Open {
        return Err(Error::Unbounded { ecc: params.ecc });
    }
    if resolution < 2 {
        return Err(domain("resolution must be at least 2"));
    }
    let n = params.n;
    let m = params.m;
    let (z_minus, z_plus) = support_interval(params)?;
    let half_power = 0.5 * (n as f64 - 1.0);
    let slice = unit_ball_volume(n - 1);
    let mut volume = 0.0;
    let mut moment = 0.0;
    let axis = cosine_mapped(resolution, z_minus, z_plus);
    for (&z, &w) in axis.nodes.iter().zip(&axis.weights) {
        let area = slice * cylindrical_radius_squared(params, z)?.max(0.0).powf(half_power);
        volume += w * area;
        moment += w * area * z;
    }

    let polar = gauss_legendre(resolution).mapped(0.0, PI);
    let mut sum = 0.0;
    for (&t, &w) in polar.nodes.iter().zip(&polar.weights) {
        sum += w * radial_profile(params, t)?.powi(m as i32) * t.sin().powi(n as i32 - 2);
    }
    let thickness = unit_ball_volume(m) / unit_sphere_area(n - 1) * unit_sphere_area(n - 2) * sum;
    Ok(BodyProperties::new(volume, moment, thickness))
}

fn identity_ratio(params: &StationaryParams) -> f64 {
    unit_sphere_area(params.n - 1) / unit_ball_volume(params.m)
}

/// (S_{n−1}/V_m) T − λ n V − μ (n+1) M
pub fn linear_identity_residual(props: &BodyProperties, params: &StationaryParams) -> f64 {
    let n = params.n as f64;
    identity_ratio(params) * props.thickness
        - params.lambda * n * props.volume
        - params.mu * (n + 1.0) * props.moment
}

/// Residual with the opposite multiplier signs,
/// (S_{n−1}/V_m) T + λ n V + μ (n+1) M.
pub fn linear_identity_residual_flipped(props: &BodyProperties, params: &StationaryParams) -> f64 {
    let n = params.n as f64;
    identity_ratio(params) * props.thickness
        + params.lambda * n * props.volume
        + params.mu * (n + 1.0) * props.moment
}

/// Residual divided by (S_{n−1}/V_m) T.
pub fn relative_identity_residual(props: &BodyProperties, params: &StationaryParams) -> f64 {
    linear_identity_residual(props, params).abs() / (identity_ratio(params) * props.thickness).abs()
}

/// T from V and M through the identity.
pub fn thickness_via_identity(volume: f64, moment: f64, params: &StationaryParams) -> f64 {
    let n = params.n as f64;
    (params.lambda * n * volume + params.mu * (n + 1.0) * moment) / identity_ratio(params)
}

/// M from T and V through the identity (μ ≠ 0).
fn moment_via_identity(volume: f64, thickness: f64, params: &StationaryParams) -> f64 {
    let n = params.n as f64;
    (identity_ratio(params) * thickness - params.lambda * n * volume) / (params.mu * (n + 1.0))
}

/// Elementary-function values where they exist: the sphere, (2,3) for any
/// e < 1 (and its e = 1 limit), and the critical (1,2), (1,3) and (1,5)
/// shapes. All in the orientation of this crate (centroid at z > 0).
pub fn closed_form(params: &StationaryParams) -> Option<BodyProperties> {
    let (n, m, lambda, e) = (params.n, params.m, params.lambda, params.ecc);
    if e == 0.0 {
        let rho = params.sphere_radius();
        return Some(BodyProperties::new(
            unit_ball_volume(n) * rho.powi(n as i32),
            0.0,
            unit_ball_volume(m) * rho.powi(m as i32),
        ));
    }
    match (m, n) {
        (2, 3) if e <= 1.0 => Some(closed_form_23(lambda, e)),
        (1, 2) if e == 1.0 => {
            let (t, a) = critical_12_t_a(lambda);
            Some(BodyProperties::new(a, moment_via_identity(a, t, params), t))
        }
        (1, 3) if e == 1.0 => {
            let l2 = 2f64.ln();
            let s3 = 3f64.sqrt();
            Some(BodyProperties::new(
                3.0 * s3 * PI * lambda.powf(-1.5) * (l2 - 0.375),
                27.0 / 32.0 * PI / (lambda * lambda) * (16.0 * l2 - 10.5),
                3.0 * s3 / (4.0 * lambda.sqrt()) * (3.0 - 2.0 * l2),
            ))
        }
        (1, 5) if e == 1.0 => {
            let (lo, hi) = critical_15_limits(lambda);
            let mu = params.mu;
            let v = critical_15_volume(lambda, mu, hi) - critical_15_volume(lambda, mu, lo);
            let mo = critical_15_moment(lambda, mu, hi) - critical_15_moment(lambda, mu, lo);
            Some(BodyProperties::new(v, mo, thickness_via_identity(v, mo, params)))
        }
        _ => None,
    }
}

fn closed_form_23(lambda: f64, e: f64) -> BodyProperties {
    let a = 2.0 / lambda;
    let sp = (1.0 + e).sqrt();
    let sm = (1.0 - e).sqrt();
    let v = 4.0 * PI * a.powi(3) / (3.0 * e)
        * ((2.0 * sm + 1.0) / (2.0 * (sm + 1.0).powi(2)) - (2.0 * sp + 1.0) / (2.0 * (sp + 1.0).powi(2)));
    let mo = -PI * a.powi(4) / (e * e)
        * (((sp + 1.0) / (sm + 1.0)).ln() + (3.0 * sp + 2.0) / (sp + 1.0).powi(2)
            - (3.0 * sm + 2.0) / (sm + 1.0).powi(2));
    let t = PI * a * a / e * (((1.0 + sp) / (1.0 + sm)).ln() + 1.0 / (1.0 + sp) - 1.0 / (1.0 + sm));
    BodyProperties::new(v, mo, t)
}

fn critical_12_t_a(lambda: f64) -> (f64, f64) {
    let s2 = 2f64.sqrt();
    let t = 4.0 * (3.0 + 2.0 * s2).ln() / (PI * lambda);
    let a = (8.0 * s2 - 8.0 * (1.0 + s2).ln()) / (lambda * lambda);
    (t, a)
}

fn critical_15_limits(lambda: f64) -> (f64, f64) {
    let scale = (5.0 / lambda).powf(0.25);
    (critical_w_minus_nm4() * scale, scale)
}

/// Antiderivative of V_4 R^4 for the critical k = 4 shape.
fn critical_15_volume(lambda: f64, mu: f64, z: f64) -> f64 {
    let b = lambda + mu * z;
    PI * PI / 2.0
        * (b.ln() / mu + z.powi(5) / 5.0
            - b.sqrt() * (12.0 * mu * mu * z * z - 16.0 * lambda * mu * z + 32.0 * lambda * lambda)
                / (15.0 * mu.powi(3)))
}

/// Antiderivative of V_4 R^4 z for the critical k = 4 shape.
fn critical_15_moment(lambda: f64, mu: f64, z: f64) -> f64 {
    let b = lambda + mu * z;
    let poly = 120.0 * mu.powi(3) * z.powi(3) - 144.0 * lambda * mu * mu * z * z
        + 192.0 * lambda * lambda * mu * z
        - 384.0 * lambda.powi(3);
    PI * PI / 2.0
        * (z / mu - lambda * b.ln() / (mu * mu) + z.powi(6) / 6.0 - b.sqrt() * poly / (210.0 * mu.powi(4)))
}

/// The closed-form expressions exactly as they are commonly quoted, without
/// the sign and magnitude corrections applied in `closed_form`. Kept so the
/// corrections stay checkable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotedForms {
    pub properties: BodyProperties,
    /// Quoted lower axis crossing, where one exists (k = 4).
    pub z_minus: Option<f64>,
}

pub fn quoted_closed_form(params: &StationaryParams) -> Option<QuotedForms> {
    let (n, m, lambda, e) = (params.n, params.m, params.lambda, params.ecc);
    match (m, n) {
        (2, 3) if e > 0.0 && e < 1.0 => {
            let c = closed_form_23(lambda, e);
            Some(QuotedForms {
                properties: BodyProperties::new(-c.volume, -c.moment, -c.thickness),
                z_minus: None,
            })
        }
        (1, 2) if e == 1.0 => {
            let (t, a) = critical_12_t_a(lambda);
            let s2 = 2f64.sqrt();
            let mo = (24.0 * (3.0 + 2.0 * s2).ln() - 32.0 * s2) / lambda.powi(3);
            Some(QuotedForms { properties: BodyProperties::new(a, mo, t), z_minus: None })
        }
        (1, 3) if e == 1.0 => Some(QuotedForms { properties: closed_form(params)?, z_minus: None }),
        (1, 5) if e == 1.0 => {
            let (lo, hi) = critical_15_limits(lambda);
            let mu = params.mu;
            let quoted_moment = |z: f64| {
                let b = lambda + mu * z;
                let poly = 120.0 * mu.powi(3) * z.powi(3) - 144.0 * lambda * mu * mu * z * z
                    + 192.0 * lambda * lambda * mu * z
                    - 384.0 * lambda.powi(3);
                PI * PI / 2.0 * (-lambda * b.ln() / (mu * mu) + z.powi(6) / 6.0 - b.sqrt() * poly / (210.0 * mu.powi(3)))
            };
            let v = critical_15_volume(lambda, mu, hi) - critical_15_volume(lambda, mu, lo);
            let mo = quoted_moment(hi) - quoted_moment(lo);
            Some(QuotedForms {
                properties: BodyProperties::new(v, mo, thickness_via_identity(v, mo, params)),
                z_minus: Some(-lo),
            })
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    ClosedForm,
}

/// Everything the CLI prints for one stationary shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertiesReport {
    pub params: StationaryParams,
    pub class: ShapeClass,
    #[serde(rename = "V")]
    pub volume: f64,
    #[serde(rename = "M")]
    pub moment: f64,
    #[serde(rename = "T")]
    pub thickness: f64,
    #[serde(rename = "T_via_identity")]
    pub thickness_via_identity: f64,
    pub residual: f64,
    pub method: Method,
    pub resolution: Option<usize>,
}

/// Closed form when asked for and available, quadrature otherwise.
pub fn properties_report(params: &StationaryParams, resolution: usize, prefer_closed: bool) -> Result<PropertiesReport> {
    let closed = if prefer_closed { closed_form(params) } else { None };
    let (props, method, res) = match closed {
        Some(p) => (p, Method::ClosedForm, None),
        None => (body_properties(params, resolution)?, Method::Quadrature, Some(resolution)),
    };
    Ok(PropertiesReport {
        params: *params,
        class: params.class(),
        volume: props.volume,
        moment: props.moment,
        thickness: props.thickness,
        thickness_via_identity: thickness_via_identity(props.volume, props.moment, params),
        residual: linear_identity_residual(&props, params),
        method,
        resolution: res,
    })
}

//! Scalar root finding used by the stationary-shape solvers.

use crate::error::{Error, Result};

/// Safeguarded Newton iteration on a sign-changing bracket [lo, hi].
///
/// Newton steps that leave the current bracket are replaced by bisection.
/// Iterates to machine precision: stops when the residual is exactly zero,
/// the step drops below a few ulps, or the bracket collapses.
pub fn bracketed_newton(
    mut f: impl FnMut(f64) -> (f64, f64),
    lo: f64,
    hi: f64,
    start: f64,
) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let fa = f(a).0;
    let fb = f(b).0;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Convergence(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    let a_negative = fa < 0.0;
    let mut x = if start > a && start < b { start } else { 0.5 * (a + b) };
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        let newton = x - fx / dfx;
        if dfx != 0.0 && (newton - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(newton);
        }
        if (fx < 0.0) == a_negative {
            a = x;
        } else {
            b = x;
        }
        let next = if dfx != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        let tol = 4.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE);
        if (next - x).abs() <= tol || (b - a) <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence(format!("no convergence on [{lo}, {hi}] after 200 steps")))
}

/// The single real root of a x³ + b x² + c x + d when the discriminant
/// admits only one (Cardano). Returns `None` when there are three real roots.
pub fn cubic_single_real_root(a: f64, b: f64, c: f64, d: f64) -> Option<f64> {
    // depress with x = t - b/(3a): t³ + p t + q = 0
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let t = (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt();
    Some(t - shift)
}

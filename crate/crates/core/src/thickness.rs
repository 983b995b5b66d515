//! Average m-dimensional thickness, volume and centroid functionals.
//!
//! For a star-shaped body r = f(n̂) in R^n the average m-dimensional
//! thickness through the origin is
//!
//! ```text
//! T(m, n) = V_m / S_{n-1} ∫ f^m dΩ
//! ```
//!
//! and the same quantity for an arbitrary body is the volume integral
//! `m V_m / S_{n-1} ∫ |x|^{m-n} dV`, which is what the Monte Carlo estimator
//! samples.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{check_unit, orthonormal_frame, Coords, Direction, DirectionGrid};
use crate::nsphere::{unit_ball_volume, unit_sphere_area};
use crate::quadrature::gauss_legendre;

pub type RadialFn = Arc<dyn Fn(&Direction) -> f64 + Send + Sync>;
pub type ContainsFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Star-shaped body given by its boundary radius in every direction.
#[derive(Clone)]
pub struct StarShape {
    dim: usize,
    radial: RadialFn,
}

impl std::fmt::Debug for StarShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StarShape").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl StarShape {
    pub fn new(dim: usize, radial: impl Fn(&Direction) -> f64 + Send + Sync + 'static) -> Self {
        Self { dim, radial: Arc::new(radial) }
    }

    /// Ball of the given radius centred on the origin.
    pub fn ball(dim: usize, radius: f64) -> Self {
        Self::new(dim, move |_| radius)
    }

    /// Body of revolution about x_1: `profile(θ)` with θ the angle to x_1.
    pub fn axisymmetric(dim: usize, profile: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(dim, move |d| profile(d.cos_polar().clamp(-1.0, 1.0).acos()))
    }

    /// Radius as a function of the Cartesian unit vector.
    pub fn from_unit_fn(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(dim, move |d| f(&d.unit_vector()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self, d: &Direction) -> f64 {
        (self.radial)(d)
    }

    /// c·f
    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.radial.clone();
        Self::new(self.dim, move |d| c * inner(d))
    }

    /// The shape rotated by the orthogonal matrix `q` (row-major n×n):
    /// f_rot(v̂) = f(qᵀ v̂).
    pub fn rotated(&self, q: &[f64]) -> Result<Self> {
        let n = self.dim;
        if q.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: q.len() });
        }
        let q: Vec<f64> = q.to_vec();
        let inner = self.radial.clone();
        Ok(Self::new(n, move |d| {
            let v = d.unit_vector();
            let back: Coords = (0..n).map(|j| (0..n).map(|i| q[i * n + j] * v[i]).sum()).collect();
            inner(&Direction::from_cartesian(&back).expect("rotation preserves norm"))
        }))
    }

    /// Indicator view: inside iff |x| ≤ f(x̂). `bound` must dominate f.
    pub fn to_indicator(&self, bound: f64) -> IndicatorBody {
        let shape = self.clone();
        IndicatorBody::new(self.dim, bound, move |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            match Direction::from_cartesian(x) {
                Ok(d) => {
                    let f = shape.radius(&d);
                    r2 <= f * f
                }
                Err(_) => true,
            }
        })
    }
}

/// Random smooth radial perturbation: a normalized sum of low-degree
/// monomials in the components of v̂, so |h| ≤ 1 on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPerturbation {
    dim: usize,
    terms: Vec<(f64, Vec<usize>)>,
}

impl HarmonicPerturbation {
    /// Always includes one monomial of each degree 1..=3 plus `extra` more.
    pub fn random(dim: usize, extra: usize, rng: &mut impl Rng) -> Self {
        let mut terms: Vec<(f64, Vec<usize>)> = Vec::new();
        for degree in (1..=3).chain((0..extra).map(|k| 1 + k % 3)) {
            let idx: Vec<usize> = (0..degree).map(|_| rng.random_range(0..dim)).collect();
            let c = rng.random_range(0.2..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            terms.push((c, idx));
        }
        let norm: f64 = terms.iter().map(|(c, _)| c.abs()).sum();
        terms.iter_mut().for_each(|(c, _)| *c /= norm);
        Self { dim, terms }
    }

    /// Σ c_t Π_{i in t} v̂_i from explicit terms, rescaled so Σ|c_t| = 1.
    pub fn from_terms(dim: usize, mut terms: Vec<(f64, Vec<usize>)>) -> Result<Self> {
        if terms.iter().flat_map(|(_, idx)| idx).any(|&i| i >= dim) {
            return Err(domain(format!("monomial index out of range for dimension {dim}")));
        }
        let norm: f64 = terms.iter().map(|(c, _)| c.abs()).sum();
        if !(norm > 0.0) {
            return Err(domain("perturbation needs a non-zero coefficient"));
        }
        terms.iter_mut().for_each(|(c, _)| *c /= norm);
        Ok(Self { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, unit: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, idx)| c * idx.iter().map(|&i| unit[i]).product::<f64>())
            .sum()
    }

    /// f = 1 + amplitude·h
    pub fn star(&self, amplitude: f64) -> StarShape {
        let h = self.clone();
        StarShape::from_unit_fn(self.dim, move |v| 1.0 + amplitude * h.eval(v))
    }
}

/// Body known only through a membership test.
#[derive(Clone)]
pub struct IndicatorBody {
    dim: usize,
    contains: ContainsFn,
    center: Coords,
    radius: f64,
}

impl std::fmt::Debug for IndicatorBody {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IndicatorBody")
            .field("dim", &self.dim)
            .field("center", &self.center)
            .field("radius", &self.radius)
            .finish_non_exhaustive()
    }
}

impl IndicatorBody {
    /// `contains` must be false outside the ball of radius `bound` about the origin.
    pub fn new(dim: usize, bound: f64, contains: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        Self { dim, contains: Arc::new(contains), center: smallvec::smallvec![0.0; dim], radius: bound }
    }

    /// Same, with the bounding ball centred elsewhere. Sampling then stays
    /// tight around bodies that sit far from the section point.
    pub fn with_bounding_ball(
        center: &[f64],
        radius: f64,
        contains: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self { dim: center.len(), contains: Arc::new(contains), center: center.into(), radius }
    }

    /// Solid ball.
    pub fn ball(center: &[f64], radius: f64) -> Self {
        let c: Coords = center.into();
        Self::with_bounding_ball(center, radius, move |x| {
            x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() <= radius * radius
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (self.contains)(x)
    }

    pub fn bounding_radius(&self) -> f64 {
        self.radius
    }

    pub fn bounding_center(&self) -> &[f64] {
        &self.center
    }
}

/// Value with one-sigma standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub accepted: u64,
}

/// Volume V, axial moment M = ∫ x_1 dV and thickness T of a body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BodyProperties {
    #[serde(rename = "V")]
    pub volume: f64,
    #[serde(rename = "M")]
    pub moment: f64,
    #[serde(rename = "T")]
    pub thickness: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_vector: Option<Vec<f64>>,
}

impl BodyProperties {
    pub fn new(volume: f64, moment: f64, thickness: f64) -> Self {
        Self { volume, moment, thickness, moment_vector: None }
    }

    pub fn centroid(&self) -> Result<Vec<f64>> {
        if !(self.volume > 0.0) {
            return Err(Error::DegenerateBody(format!("volume {}", self.volume)));
        }
        Ok(match &self.moment_vector {
            Some(mv) => mv.iter().map(|m| m / self.volume).collect(),
            None => vec![self.moment / self.volume],
        })
    }

    /// Mirror image through the plane x_1 = 0.
    pub fn reflected(&self) -> Self {
        let mut out = self.clone();
        out.moment = -out.moment;
        if let Some(mv) = out.moment_vector.as_mut() {
            mv[0] = -mv[0];
        }
        out
    }
}

pub(crate) fn check_dims(m: usize, n: usize) -> Result<()> {
    if m < 1 || m >= n {
        return Err(domain(format!("need 1 <= m < n, got m = {m}, n = {n}")));
    }
    Ok(())
}

fn check_grid(shape: &StarShape, grid: &DirectionGrid) -> Result<()> {
    if shape.dim() != grid.dim() {
        return Err(Error::DimensionMismatch { expected: shape.dim(), found: grid.dim() });
    }
    Ok(())
}

/// T(m, n) = V_m / S_{n-1} ∫ f^m dΩ.
pub fn average_thickness(shape: &StarShape, m: usize, grid: &DirectionGrid) -> Result<f64> {
    check_grid(shape, grid)?;
    let n = shape.dim();
    check_dims(m, n)?;
    let integral = grid.integrate(|d| shape.radius(d).powi(m as i32));
    Ok(unit_ball_volume(m) / unit_sphere_area(n - 1) * integral)
}

/// V = ∫ f^n / n dΩ.
pub fn volume(shape: &StarShape, grid: &DirectionGrid) -> Result<f64> {
    check_grid(shape, grid)?;
    let n = shape.dim();
    Ok(grid.integrate(|d| shape.radius(d).powi(n as i32)) / n as f64)
}

/// Moment vector ∫ x dV = ∫ f^{n+1}/(n+1) v̂ dΩ.
pub fn moment_vector(shape: &StarShape, grid: &DirectionGrid) -> Result<Vec<f64>> {
    check_grid(shape, grid)?;
    let n = shape.dim();
    let scale = 1.0 / (n as f64 + 1.0);
    Ok((0..n)
        .map(|i| grid.integrate(|d| shape.radius(d).powi(n as i32 + 1) * d.unit_vector()[i]) * scale)
        .collect())
}

/// Centroid G = moment / V.
pub fn centroid(shape: &StarShape, grid: &DirectionGrid) -> Result<Vec<f64>> {
    let v = volume(shape, grid)?;
    if !(v > 0.0) {
        return Err(Error::DegenerateBody(format!("volume {v}")));
    }
    Ok(moment_vector(shape, grid)?.into_iter().map(|m| m / v).collect())
}

/// Volume, moment and thickness of a star shape in one call.
pub fn star_properties(shape: &StarShape, m: usize, grid: &DirectionGrid) -> Result<BodyProperties> {
    let thickness = average_thickness(shape, m, grid)?;
    let volume = volume(shape, grid)?;
    let mv = moment_vector(shape, grid)?;
    Ok(BodyProperties { volume, moment: mv[0], thickness, moment_vector: Some(mv) })
}

const MC_CHUNK: u64 = 1 << 15;
const ORIGIN_GUARD: f64 = 1e-12;

/// Running mean / M2 for one batch, merged with Chan's formula.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
    hits: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Self { count, mean, m2, hits: self.hits + other.hits }
    }
}

fn uniform_in_ball(rng: &mut ChaCha8Rng, center: &[f64], radius: f64, out: &mut Coords) {
    loop {
        let mut r2 = 0.0;
        for o in out.iter_mut() {
            let u: f64 = rng.random_range(-1.0..1.0);
            *o = u;
            r2 += u * u;
        }
        if r2 <= 1.0 {
            break;
        }
    }
    out.iter_mut().zip(center).for_each(|(o, c)| *o = c + radius * *o);
}

/// Monte Carlo estimate of T(m, n) for an arbitrary body.
///
/// Points are drawn uniformly in the body's bounding ball; each contributes
/// `contains(x)·|x|^{m-n}`, scaled by `m V_m / S_{n-1}` and the ball volume.
/// Points within 1e-12 of the origin are redrawn. Chunks of 2^15 samples get
/// their own ChaCha stream, so the result depends only on (body, m, samples,
/// seed), not on the thread count.
pub fn thickness_montecarlo(body: &IndicatorBody, m: usize, samples: u64, seed: u64) -> Result<Estimate> {
    let n = body.dim();
    check_dims(m, n)?;
    if samples == 0 {
        return Err(domain("samples must be positive"));
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let power = m as i32 - n as i32;
    let moments = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let todo = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut acc = Moments::default();
            let mut x: Coords = smallvec::smallvec![0.0; n];
            for _ in 0..todo {
                let r = loop {
                    uniform_in_ball(&mut rng, body.bounding_center(), body.bounding_radius(), &mut x);
                    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if r >= ORIGIN_GUARD {
                        break r;
                    }
                };
                if body.contains(&x) {
                    acc.hits += 1;
                    acc.push(r.powi(power));
                } else {
                    acc.push(0.0);
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Moments::default(), Moments::merge);

    if moments.hits == 0 {
        return Err(Error::InsufficientSampling { accepted: 0, total: samples });
    }
    let ball = unit_ball_volume(n) * body.bounding_radius().powi(n as i32);
    let scale = m as f64 * unit_ball_volume(m) / unit_sphere_area(n - 1) * ball;
    let variance = moments.m2 / (moments.count as f64 - 1.0).max(1.0);
    Ok(Estimate {
        value: scale * moments.mean,
        stderr: scale * (variance / moments.count as f64).sqrt(),
        samples,
        accepted: moments.hits,
    })
}

/// Monte Carlo volume of the body, same sampling scheme.
pub fn volume_montecarlo(body: &IndicatorBody, samples: u64, seed: u64) -> Result<Estimate> {
    let n = body.dim();
    // |x|^0 weights: T(n, n) would be volume, so sample directly
    let chunks = samples.div_ceil(MC_CHUNK);
    let moments = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let todo = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut acc = Moments::default();
            let mut x: Coords = smallvec::smallvec![0.0; n];
            for _ in 0..todo {
                uniform_in_ball(&mut rng, body.bounding_center(), body.bounding_radius(), &mut x);
                let inside = body.contains(&x);
                acc.hits += inside as u64;
                acc.push(if inside { 1.0 } else { 0.0 });
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Moments::default(), Moments::merge);
    if moments.hits == 0 {
        return Err(Error::InsufficientSampling { accepted: 0, total: samples });
    }
    let ball = unit_ball_volume(n) * body.bounding_radius().powi(n as i32);
    let variance = moments.m2 / (moments.count as f64 - 1.0).max(1.0);
    Ok(Estimate {
        value: ball * moments.mean,
        stderr: ball * (variance / moments.count as f64).sqrt(),
        samples,
        accepted: moments.hits,
    })
}

/// Average area of the plane sections of a 3-body that contain `axis`:
/// T_ê = 1/(2π) ∫ f² / sqrt(1 - (n̂·ê)²) dΩ.
///
/// The kernel is singular at ±ê, so the integral is taken in a frame whose
/// pole is ê (Gauss–Legendre in the polar angle, trapezoid in azimuth), using
/// the resolution of `grid`.
pub fn axis_section_average(shape: &StarShape, axis: &[f64], grid: &DirectionGrid) -> Result<f64> {
    check_grid(shape, grid)?;
    if shape.dim() != 3 {
        return Err(domain("axis-section average is defined for n = 3"));
    }
    check_unit(axis, 3)?;
    let frame = orthonormal_frame(axis)?;
    let k = grid.resolution();
    let polar = gauss_legendre(k).mapped(0.0, PI);
    let mut total = 0.0;
    for (&t, &wt) in polar.nodes.iter().zip(&polar.weights) {
        let (st, ct) = t.sin_cos();
        let mut ring = 0.0;
        for j in 0..k {
            let p = TAU * j as f64 / k as f64;
            let (sp, cp) = p.sin_cos();
            let v: Coords = (0..3).map(|i| ct * frame[0][i] + st * (cp * frame[1][i] + sp * frame[2][i])).collect();
            let dot: f64 = v.iter().zip(axis).map(|(a, b)| a * b).sum();
            let perp = v.iter().zip(axis).map(|(a, b)| (a - dot * b).powi(2)).sum::<f64>().sqrt();
            let f = shape.radius(&Direction::from_cartesian(&v)?);
            ring += f * f * st / perp;
        }
        total += wt * ring * TAU / k as f64;
    }
    Ok(total / TAU)
}

/// Mean of `axis_section_average` over axes drawn from `axes` (weighted by
/// solid angle), which reproduces T(2, 3).
pub fn axis_averaged_section(shape: &StarShape, axes: &DirectionGrid, grid: &DirectionGrid) -> Result<f64> {
    if axes.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: axes.dim() });
    }
    let mut sum = 0.0;
    let mut wsum = 0.0;
    for (d, w) in axes.nodes() {
        let e = d.unit_vector();
        sum += w * axis_section_average(shape, &e, grid)?;
        wsum += w;
    }
    Ok(sum / wsum)
}

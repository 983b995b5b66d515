//! Checks on the variational problem itself: stationarity residuals, sphere
//! optimality under constrained perturbations, null-vector recovery of the
//! multipliers from boundary samples, and the two-disc dumbbell.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{check_unit, Direction, DirectionGrid, GridNode};
use crate::nsphere::{unit_ball_volume, unit_sphere_area};
use crate::stationary::{radial_profile, ShapeClass, StationaryParams};
use crate::thickness::{check_dims, thickness_montecarlo, Estimate, HarmonicPerturbation, IndicatorBody, StarShape};

/// The stationary shape as a star shape about the origin, axis x_1.
pub fn stationary_shape(params: &StationaryParams) -> Result<StarShape> {
    if params.class() == ShapeClass::Open {
        return Err(Error::Unbounded { ecc: params.ecc });
    }
    let p = *params;
    Ok(StarShape::axisymmetric(params.n, move |t| radial_profile(&p, t).unwrap_or(f64::NAN)))
}

/// max over grid nodes of |r^{m−1} − λ r^{n−1} − μ r^n cos θ| / r^{m−1},
/// θ measured from `axis`.
pub fn stationarity_residual(
    shape: &StarShape,
    m: usize,
    lambda: f64,
    mu: f64,
    axis: &[f64],
    grid: &DirectionGrid,
) -> Result<f64> {
    let n = shape.dim();
    check_dims(m, n)?;
    if grid.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: grid.dim() });
    }
    check_unit(axis, n)?;
    let k = (n - m) as i32;
    let worst = grid
        .nodes()
        .map(|(d, _)| {
            let r = shape.radius(&d);
            let c: f64 = d.unit_vector().iter().zip(axis).map(|(a, b)| a * b).sum();
            (1.0 - lambda * r.powi(k) - mu * r.powi(k + 1) * c).abs()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// A radial function tabulated on grid nodes, with the functionals needed by
/// the constraint projection.
struct NodeField<'a> {
    nodes: &'a [GridNode],
    n: usize,
}

impl NodeField<'_> {
    fn volume(&self, f: &[f64]) -> f64 {
        let n = self.n as i32;
        self.nodes.iter().zip(f).map(|(g, v)| g.weight * v.powi(n)).sum::<f64>() / self.n as f64
    }

    fn moments(&self, f: &[f64]) -> DVector<f64> {
        let n = self.n;
        let mut out = DVector::zeros(n);
        for (g, v) in self.nodes.iter().zip(f) {
            let w = g.weight * v.powi(n as i32 + 1) / (n as f64 + 1.0);
            for i in 0..n {
                out[i] += w * g.unit[i];
            }
        }
        out
    }

    /// ∂M_i/∂c_j for f → f + c·v̂.
    fn moment_jacobian(&self, f: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let mut jac = DMatrix::zeros(n, n);
        for (g, v) in self.nodes.iter().zip(f) {
            let w = g.weight * v.powi(n as i32);
            for i in 0..n {
                for j in 0..n {
                    jac[(i, j)] += w * g.unit[i] * g.unit[j];
                }
            }
        }
        jac
    }

    fn thickness(&self, f: &[f64], m: usize) -> f64 {
        let sum: f64 = self.nodes.iter().zip(f).map(|(g, v)| g.weight * v.powi(m as i32)).sum();
        unit_ball_volume(m) / unit_sphere_area(self.n - 1) * sum
    }

    /// Alternate a volume rescale and a first-harmonic shift until V and the
    /// moment vector match the targets to `PROJECTION_TOL`.
    fn project(&self, f: &mut [f64], volume: f64, moment: &DVector<f64>) -> Result<()> {
        let n = self.n;
        let scale = volume.powf(1.0 / n as f64);
        let mut residual = f64::INFINITY;
        for _ in 0..PROJECTION_MAX_ITER {
            let v = self.volume(f);
            let s = (volume / v).powf(1.0 / n as f64);
            f.iter_mut().for_each(|x| *x *= s);
            let gap = self.moments(f) - moment;
            let shift = self
                .moment_jacobian(f)
                .lu()
                .solve(&(-&gap))
                .ok_or_else(|| Error::Projection { iterations: 0, residual: gap.norm() })?;
            for (x, g) in f.iter_mut().zip(self.nodes) {
                *x += (0..n).map(|i| shift[i] * g.unit[i]).sum::<f64>();
            }
            let dv = (self.volume(f) - volume).abs() / volume;
            let dm = (self.moments(f) - moment).norm() / (volume * scale);
            residual = dv.max(dm);
            if residual <= PROJECTION_TOL {
                return Ok(());
            }
        }
        Err(Error::Projection { iterations: PROJECTION_MAX_ITER, residual })
    }
}

const PROJECTION_TOL: f64 = 1e-12;
const PROJECTION_MAX_ITER: usize = 50;

/// Grid used for the perturbation tests; fine enough to integrate the
/// degree-3 perturbations raised to the powers involved exactly.
fn perturbation_grid(n: usize) -> Result<DirectionGrid> {
    let res = match n {
        2 => 96,
        3 => 32,
        4 => 16,
        _ => 10,
    };
    crate::geometry::build_grid(n, res)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalityTrial {
    pub trial: usize,
    pub amplitude: f64,
    #[serde(rename = "deltaT")]
    pub delta_t: f64,
}

/// ΔT = T − V_m for `trials` random perturbations of the unit ball that keep
/// its volume and keep the centroid at the origin.
///
/// Trial i draws its perturbation from the ChaCha stream (seed, i), so the
/// same trial at a different amplitude sees the same shape direction.
pub fn sphere_optimality_test(
    n: usize,
    m: usize,
    trials: usize,
    amplitude: f64,
    seed: u64,
) -> Result<Vec<OptimalityTrial>> {
    check_dims(m, n)?;
    if !(0.0..=0.1).contains(&amplitude) {
        return Err(domain(format!("amplitude must lie in [0, 0.1], got {amplitude}")));
    }
    let grid = perturbation_grid(n)?;
    let nodes = grid.collect_nodes();
    let field = NodeField { nodes: &nodes, n };
    let target_v = unit_ball_volume(n);
    let origin = DVector::zeros(n);
    let baseline = unit_ball_volume(m);
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let h = HarmonicPerturbation::random(n, 2, &mut rng);
            let mut f: Vec<f64> = nodes.iter().map(|g| 1.0 + amplitude * h.eval(&g.unit)).collect();
            let delta_t = if amplitude == 0.0 {
                0.0
            } else {
                field.project(&mut f, target_v, &origin)?;
                field.thickness(&f, m) - baseline
            };
            Ok(OptimalityTrial { trial, amplitude, delta_t })
        })
        .collect()
}

/// Central-difference directional derivatives of T at a shape, along a
/// perturbation direction projected onto fixed volume and moment vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstVariation {
    pub base_thickness: f64,
    pub amplitudes: Vec<f64>,
    /// (T(+a) − T(−a)) / 2a for each amplitude.
    pub slopes: Vec<f64>,
    /// Richardson combination of the first two slopes.
    pub extrapolated: f64,
}

/// Perturbs f → f·(1 + a h), restores V and the moment vector, and measures
/// how T changes to first order.
pub fn first_variation(
    shape: &StarShape,
    m: usize,
    perturbation: &HarmonicPerturbation,
    amplitudes: &[f64],
    grid: &DirectionGrid,
) -> Result<FirstVariation> {
    let n = shape.dim();
    check_dims(m, n)?;
    if perturbation.dim() != n || grid.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: grid.dim() });
    }
    if amplitudes.len() < 2 {
        return Err(domain("need two amplitudes"));
    }
    let nodes = grid.collect_nodes();
    let field = NodeField { nodes: &nodes, n };
    let base: Vec<f64> = nodes.iter().map(|g| shape.radius(&g.direction)).collect();
    let volume = field.volume(&base);
    let moment = field.moments(&base);
    let base_thickness = field.thickness(&base, m);
    let h: Vec<f64> = nodes.iter().map(|g| perturbation.eval(&g.unit)).collect();
    let mut slopes = Vec::with_capacity(amplitudes.len());
    for &a in amplitudes {
        let side = |sign: f64| -> Result<f64> {
            let mut f: Vec<f64> = base.iter().zip(&h).map(|(r, hv)| r * (1.0 + sign * a * hv)).collect();
            field.project(&mut f, volume, &moment)?;
            Ok(field.thickness(&f, m))
        };
        slopes.push((side(1.0)? - side(-1.0)?) / (2.0 * a));
    }
    let (a1, a2) = (amplitudes[0], amplitudes[1]);
    let ratio = (a2 / a1).powi(2);
    let extrapolated = (ratio * slopes[0] - slopes[1]) / (ratio - 1.0);
    Ok(FirstVariation { base_thickness, amplitudes: amplitudes.to_vec(), slopes, extrapolated })
}

/// n + 2 boundary points and the matrix with rows
/// (r^{m−1}, r^{n−1}, r^n v̂_1, …, r^n v̂_n).
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationSample {
    pub m: usize,
    pub points: Vec<(f64, Direction)>,
    pub matrix: DMatrix<f64>,
}

impl DeformationSample {
    pub fn new(m: usize, points: Vec<(f64, Direction)>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(domain("no sample points"));
        };
        let n = first.1.dim();
        check_dims(m, n)?;
        if points.len() != n + 2 {
            return Err(Error::DimensionMismatch { expected: n + 2, found: points.len() });
        }
        let mut matrix = DMatrix::zeros(n + 2, n + 2);
        for (row, (r, d)) in points.iter().enumerate() {
            if d.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: d.dim() });
            }
            if !(*r > 0.0) {
                return Err(domain(format!("boundary radius must be positive, got {r}")));
            }
            matrix[(row, 0)] = r.powi(m as i32 - 1);
            matrix[(row, 1)] = r.powi(n as i32 - 1);
            let rn = r.powi(n as i32);
            for (i, v) in d.unit_vector().iter().enumerate() {
                matrix[(row, 2 + i)] = rn * v;
            }
        }
        Ok(Self { m, points, matrix })
    }

    /// Boundary points of `shape` along `directions`.
    pub fn from_shape(shape: &StarShape, m: usize, directions: Vec<Direction>) -> Result<Self> {
        let points = directions.into_iter().map(|d| (shape.radius(&d), d)).collect();
        Self::new(m, points)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 2
    }
}

/// Uniformly random direction on S^{n−1}.
pub fn random_direction(n: usize, rng: &mut impl Rng) -> Direction {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 <= 1.0 && r2 > 1e-6 {
            return Direction::from_cartesian(&x).expect("non-zero vector");
        }
    }
}

/// Multipliers read off the null vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullVector {
    pub lambda: f64,
    pub mu: Vec<f64>,
    /// |μ⃗|
    pub mu_norm: f64,
    /// σ_min / σ_second
    pub condition: f64,
    pub singular_values: Vec<f64>,
}

/// σ_min / σ_second below this counts as a one-dimensional null space.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Singular values in decreasing order.
pub fn singular_values(sample: &DeformationSample) -> Vec<f64> {
    let mut s: Vec<f64> = sample.matrix.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Null vector of the deformation matrix by SVD, scaled to a leading 1.
/// Since each row dotted with (1, −λ, −μ⃗) vanishes on a stationary
/// boundary, λ and μ⃗ are read off with a sign flip.
pub fn nullvector_recover(sample: &DeformationSample) -> Result<NullVector> {
    let size = sample.matrix.nrows();
    let svd = sample.matrix.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let (s_max, s_second, s_min) = (sv[0], sv[size - 2], sv[size - 1]);
    let condition = s_min / s_second;
    if !(condition < RANK_THRESHOLD) {
        return Err(Error::Rank {
            reason: format!("matrix has full rank (sigma_min / sigma_second = {condition:e})"),
            singular_values: sv,
        });
    }
    if s_second / s_max < RANK_THRESHOLD {
        return Err(Error::Rank { reason: "null space has dimension above 1".into(), singular_values: sv });
    }
    let null = v_t.row(order[size - 1]);
    if null[0].abs() < RANK_THRESHOLD * null.norm() {
        return Err(Error::Rank { reason: "null vector has no r^{m-1} component".into(), singular_values: sv });
    }
    let scaled: Vec<f64> = null.iter().map(|v| v / null[0]).collect();
    let mu: Vec<f64> = scaled[2..].iter().map(|v| -v).collect();
    Ok(NullVector {
        lambda: -scaled[1],
        mu_norm: mu.iter().map(|v| v * v).sum::<f64>().sqrt(),
        mu,
        condition,
        singular_values: sv,
    })
}

/// Two discs in the plane with total area A and centroid at distance G:
/// disc 1 (area A(1−γ)) centred on the section point, disc 2 (area γA)
/// centred on the axis at x_2 = G/γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DumbbellConfig {
    pub area: f64,
    pub centroid: f64,
    pub gamma: f64,
}

impl DumbbellConfig {
    pub fn new(area: f64, centroid: f64, gamma: f64) -> Result<Self> {
        if !(area > 0.0) || !(centroid > 0.0) {
            return Err(domain("area and centroid distance must be positive"));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(domain(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        let c = Self { area, centroid, gamma };
        if c.x2() <= c.r1() + c.r2() {
            return Err(Error::Geometry(format!(
                "discs overlap: x_2 = {} but r_1 + r_2 = {}",
                c.x2(),
                c.r1() + c.r2()
            )));
        }
        Ok(c)
    }

    pub fn a1(&self) -> f64 {
        self.area * (1.0 - self.gamma)
    }

    pub fn a2(&self) -> f64 {
        self.area * self.gamma
    }

    pub fn x2(&self) -> f64 {
        self.centroid * self.area / self.a2()
    }

    pub fn r1(&self) -> f64 {
        (self.a1() / PI).sqrt()
    }

    pub fn r2(&self) -> f64 {
        (self.a2() / PI).sqrt()
    }

    /// 2 sqrt(A/π), the supremum the construction approaches.
    pub fn bound(&self) -> f64 {
        2.0 * (self.area / PI).sqrt()
    }

    /// 2 sqrt(A_1/π) + A_2/(π x_2).
    pub fn asymptotic(&self) -> f64 {
        2.0 * self.r1() + self.a2() / (PI * self.x2())
    }
}

/// Monte Carlo T(1, 2) of the two-disc body, stratified by disc: each disc
/// is sampled in its own bounding ball and the estimates are added. Disc 1
/// uses the stream `seed` and disc 2 uses `seed + 1`, so sweeps over γ share
/// random numbers.
pub fn dumbbell_exact(config: &DumbbellConfig, samples: u64, seed: u64) -> Result<Estimate> {
    let d1 = IndicatorBody::ball(&[0.0, 0.0], config.r1());
    let d2 = IndicatorBody::ball(&[config.x2(), 0.0], config.r2());
    let e1 = thickness_montecarlo(&d1, 1, samples, seed)?;
    let e2 = thickness_montecarlo(&d2, 1, samples, seed.wrapping_add(1))?;
    Ok(Estimate {
        value: e1.value + e2.value,
        stderr: e1.stderr.hypot(e2.stderr),
        samples: e1.samples + e2.samples,
        accepted: e1.accepted + e2.accepted,
    })
}

pub const DUMBBELL_SAMPLES: u64 = 20_000_000;
pub const DUMBBELL_SEED: u64 = 2024;

/// Asymptotic value, or the Monte Carlo value with the default budget.
pub fn dumbbell_thickness(config: &DumbbellConfig, exact: bool) -> Result<f64> {
    if exact {
        Ok(dumbbell_exact(config, DUMBBELL_SAMPLES, DUMBBELL_SEED)?.value)
    } else {
        Ok(config.asymptotic())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DumbbellRow {
    pub gamma: f64,
    #[serde(rename = "T_asymptotic")]
    pub asymptotic: f64,
    #[serde(rename = "T_exact")]
    pub exact: f64,
    pub stderr: f64,
}

pub fn dumbbell_sweep(area: f64, centroid: f64, gammas: &[f64], samples: u64, seed: u64) -> Result<Vec<DumbbellRow>> {
    gammas
        .iter()
        .map(|&gamma| {
            let c = DumbbellConfig::new(area, centroid, gamma)?;
            let e = dumbbell_exact(&c, samples, seed)?;
            Ok(DumbbellRow { gamma, asymptotic: c.asymptotic(), exact: e.value, stderr: e.stderr })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_grid;
    use crate::stationary::mu_from_ecc;
    use approx::assert_relative_eq;

    #[test]
    fn residual_of_stationary_egg() {
        let q = StationaryParams::new(3, 2, 1.0, 0.5).unwrap();
        let shape = stationary_shape(&q).unwrap();
        let g = build_grid(3, 24).unwrap();
        let res = stationarity_residual(&shape, 2, 1.0, q.mu, &[1.0, 0.0, 0.0], &g).unwrap();
        assert!(res <= 1e-9, "{res}");
        let q = StationaryParams::new(5, 2, 1.7, 0.8).unwrap();
        let shape = stationary_shape(&q).unwrap();
        let g = build_grid(5, 8).unwrap();
        let res = stationarity_residual(&shape, 2, 1.7, q.mu, &[1.0, 0.0, 0.0, 0.0, 0.0], &g).unwrap();
        assert!(res <= 1e-9, "{res}");
    }

    #[test]
    fn residual_of_spheres() {
        let g = build_grid(4, 8).unwrap();
        let ball = StarShape::ball(4, 1.0);
        let axis = [0.0, 1.0, 0.0, 0.0];
        for m in 1..4 {
            assert_eq!(stationarity_residual(&ball, m, 1.0, 0.0, &axis, &g).unwrap(), 0.0);
            assert!(stationarity_residual(&ball, m, 2.0, 0.0, &axis, &g).unwrap() >= 0.5);
        }
    }

    #[test]
    fn optimality_zero_amplitude() {
        let out = sphere_optimality_test(3, 1, 5, 0.0, 1).unwrap();
        assert!(out.iter().all(|t| t.delta_t == 0.0));
        assert!(sphere_optimality_test(3, 1, 5, 0.2, 1).is_err());
    }

    #[test]
    fn optimality_disc() {
        let out = sphere_optimality_test(2, 1, 100, 0.05, 11).unwrap();
        assert!(out.iter().all(|t| t.delta_t <= 1e-12));
        let mut d: Vec<f64> = out.iter().map(|t| t.delta_t).collect();
        d.sort_by(f64::total_cmp);
        assert!(d[50] < 0.0);
    }

    #[test]
    fn optimality_is_second_order() {
        let small = sphere_optimality_test(3, 2, 20, 0.02, 5).unwrap();
        let large = sphere_optimality_test(3, 2, 20, 0.04, 5).unwrap();
        for (s, l) in small.iter().zip(&large) {
            let ratio = l.delta_t / s.delta_t;
            assert!((3.5..=4.5).contains(&ratio), "trial {}: {ratio}", s.trial);
        }
    }

    #[test]
    fn optimality_reproducible() {
        let a = sphere_optimality_test(3, 1, 8, 0.05, 3).unwrap();
        let b = sphere_optimality_test(3, 1, 8, 0.05, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn first_variation_vanishes_at_stationary_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = build_grid(3, 48).unwrap();
        let q = StationaryParams::new(3, 2, 1.0, 0.6).unwrap();
        let shape = stationary_shape(&q).unwrap();
        for _ in 0..3 {
            let h = HarmonicPerturbation::random(3, 2, &mut rng);
            let fv = first_variation(&shape, 2, &h, &[1e-3, 2e-3], &g).unwrap();
            assert!(fv.extrapolated.abs() <= 1e-6, "{fv:?}");
            assert!(fv.slopes.iter().all(|s| s.abs() <= 1e-6), "{fv:?}");
        }
        // a non-stationary shape moves at first order
        let lumpy = StarShape::axisymmetric(3, |t| 1.0 + 0.3 * (2.0 * t).cos());
        let h = HarmonicPerturbation::from_terms(3, vec![(1.0, vec![1, 1])]).unwrap();
        let off = first_variation(&lumpy, 2, &h, &[1e-3, 2e-3], &g).unwrap();
        assert!(off.extrapolated.abs() > 1e-3, "{off:?}");
    }

    fn sample_shape(params: &StationaryParams, rng: &mut ChaCha8Rng) -> DeformationSample {
        let shape = stationary_shape(params).unwrap();
        let dirs = (0..params.n + 2).map(|_| random_direction(params.n, rng)).collect();
        DeformationSample::from_shape(&shape, params.m, dirs).unwrap()
    }

    #[test]
    fn nullvector_on_egg() {
        let q = StationaryParams::new(3, 2, 1.0, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let nv = nullvector_recover(&sample_shape(&q, &mut rng)).unwrap();
            assert_relative_eq!(nv.lambda, 1.0, max_relative = 1e-6);
            assert_relative_eq!(nv.mu_norm, mu_from_ecc(1, 1.0, 0.5).abs(), max_relative = 1e-6);
            // μ⃗ points along x_1 with the sign of μ
            assert_relative_eq!(nv.mu[0], q.mu, max_relative = 1e-6);
            assert!(nv.condition < RANK_THRESHOLD);
        }
    }

    #[test]
    fn nullvector_on_sphere() {
        let q = StationaryParams::new(4, 1, 1.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let nv = nullvector_recover(&sample_shape(&q, &mut rng)).unwrap();
        assert_relative_eq!(nv.lambda, 1.0, max_relative = 1e-12);
        assert!(nv.mu_norm < 1e-12);
    }

    #[test]
    fn nullvector_rejects_blob() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = HarmonicPerturbation::random(3, 3, &mut rng);
        let blob = h.star(0.2);
        for _ in 0..10 {
            let dirs = (0..5).map(|_| random_direction(3, &mut rng)).collect();
            let s = DeformationSample::from_shape(&blob, 2, dirs).unwrap();
            match nullvector_recover(&s) {
                Err(Error::Rank { singular_values, .. }) => {
                    assert!(singular_values[4] / singular_values[0] > 1e-6)
                }
                other => panic!("blob passed the rank test: {other:?}"),
            }
        }
    }

    #[test]
    fn deformation_sample_shape_checks() {
        let d = Direction::new(&[0.3, 1.0]).unwrap();
        assert!(DeformationSample::new(1, vec![(1.0, d.clone()); 4]).is_err());
        assert!(DeformationSample::new(1, vec![(-1.0, d.clone()); 5]).is_err());
        assert_eq!(DeformationSample::new(2, vec![(1.0, d); 5]).unwrap().dim(), 3);
    }

    #[test]
    fn dumbbell_config() {
        let c = DumbbellConfig::new(PI, 10.0, 0.01).unwrap();
        assert_relative_eq!(c.x2(), 1000.0, max_relative = 1e-14);
        assert_relative_eq!(c.a1() + c.a2(), PI, max_relative = 1e-15);
        assert_relative_eq!(c.a2() * c.x2(), 10.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(c.asymptotic(), 2.0 * 0.99f64.sqrt() + 1e-5, max_relative = 1e-14);
        assert!(matches!(DumbbellConfig::new(PI, 0.05, 0.5), Err(Error::Geometry(_))));
        assert!(DumbbellConfig::new(PI, 1.0, 1.0).is_err());
    }

    #[test]
    fn dumbbell_asymptotics_approach_bound() {
        let mut last = 0.0;
        for g in [0.1, 0.05, 0.02, 0.01, 0.001] {
            let t = dumbbell_thickness(&DumbbellConfig::new(PI, 0.2, g).unwrap(), false).unwrap();
            assert!(t > last && t < 2.0);
            last = t;
        }
    }

    #[test]
    fn dumbbell_exact_small_budget() {
        let c = DumbbellConfig::new(PI, 0.2, 0.05).unwrap();
        let e = dumbbell_exact(&c, 400_000, 1).unwrap();
        assert!((e.value - c.asymptotic()).abs() < 4.0 * e.stderr + 0.5 * 0.05f64.powi(2));
    }
}

//! Hyperspherical coordinates, the solid-angle measure and tensor-product
//! quadrature grids over S^{n-1}.
//!
//! The chart is the usual one: for angles (φ_1, …, φ_{n-1}),
//!
//! ```text
//! x_1 = r cos φ_1
//! x_2 = r sin φ_1 cos φ_2
//! …
//! x_n = r sin φ_1 ⋯ sin φ_{n-1}
//! ```
//!
//! with φ_1..φ_{n-2} ∈ [0, π] and φ_{n-1} ∈ [0, 2π). The first Cartesian
//! axis x_1 is the pole, and is the symmetry axis for every axisymmetric
//! shape in this crate.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{domain, Error, Result};
use crate::quadrature::{gauss_gegenbauer, Rule};

/// Small inline vector for per-dimension data.
pub type Coords = SmallVec<[f64; 8]>;

/// Default cap on the number of nodes a grid may expand to.
pub const DEFAULT_NODE_BUDGET: u128 = 1 << 28;

const UNIT_TOLERANCE: f64 = 1e-12;

/// A point of S^{n-1}, stored by its angles.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    angles: Coords,
}

impl Direction {
    /// Validates the angle ranges for ambient dimension `angles.len() + 1`.
    pub fn new(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() {
            return Err(domain("a direction needs at least one angle (n >= 2)"));
        }
        let last = angles.len() - 1;
        for (i, &a) in angles.iter().enumerate() {
            let ok = if i == last {
                (0.0..TAU).contains(&a)
            } else {
                (0.0..=PI).contains(&a)
            };
            if !ok {
                return Err(domain(format!("angle phi_{} = {a} out of range", i + 1)));
            }
        }
        Ok(Self { angles: angles.into() })
    }

    /// Direction of a non-zero Cartesian vector.
    pub fn from_cartesian(x: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 2 {
            return Err(domain("a direction needs n >= 2"));
        }
        let mut tail_sq: f64 = x.iter().map(|v| v * v).sum();
        if tail_sq == 0.0 {
            return Err(domain("zero vector has no direction"));
        }
        let mut angles = Coords::with_capacity(n - 1);
        for i in 0..n - 2 {
            tail_sq -= x[i] * x[i];
            angles.push(tail_sq.max(0.0).sqrt().atan2(x[i]));
        }
        let mut az = x[n - 1].atan2(x[n - 2]);
        if az < 0.0 {
            az += TAU;
        }
        if az >= TAU {
            az = 0.0;
        }
        angles.push(az);
        Ok(Self { angles })
    }

    /// Ambient dimension n.
    pub fn dim(&self) -> usize {
        self.angles.len() + 1
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Unit Cartesian vector v̂.
    pub fn unit_vector(&self) -> Coords {
        let mut out = Coords::with_capacity(self.dim());
        let mut sin_prod = 1.0;
        for &a in &self.angles {
            let (s, c) = a.sin_cos();
            out.push(sin_prod * c);
            sin_prod *= s;
        }
        out.push(sin_prod);
        out
    }

    /// cos of the angle to the pole x_1, without building the full vector.
    pub fn cos_polar(&self) -> f64 {
        self.angles[0].cos()
    }
}

/// Cartesian point at radius `r` along `d`.
pub fn spherical_to_cartesian(r: f64, d: &Direction) -> Result<Coords> {
    if !(r >= 0.0) {
        return Err(domain(format!("radius must be non-negative, got {r}")));
    }
    Ok(d.unit_vector().into_iter().map(|v| r * v).collect())
}

/// Density of d_{n-1}Ω in the angle chart: sin^{n-2}φ_1 sin^{n-3}φ_2 ⋯ sin φ_{n-2}.
pub fn solid_angle_density(d: &Direction) -> f64 {
    let n = d.dim();
    d.angles
        .iter()
        .take(n.saturating_sub(2))
        .enumerate()
        .map(|(i, a)| a.sin().abs().powi((n - 2 - i) as i32))
        .product()
}

/// Polar angle θ ∈ [0, π] between `d` and a unit `axis`.
pub fn axis_polar_angle(d: &Direction, axis: &[f64]) -> Result<f64> {
    check_unit(axis, d.dim())?;
    let dot: f64 = d.unit_vector().iter().zip(axis).map(|(a, b)| a * b).sum();
    Ok(dot.clamp(-1.0, 1.0).acos())
}

pub(crate) fn check_unit(axis: &[f64], dim: usize) -> Result<()> {
    if axis.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: axis.len() });
    }
    let norm = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(domain(format!("axis must be a unit vector, |axis| = {norm}")));
    }
    Ok(())
}

/// Orthonormal basis of R^n whose first vector is `axis`.
pub fn orthonormal_frame(axis: &[f64]) -> Result<Vec<Coords>> {
    let n = axis.len();
    check_unit(axis, n)?;
    let mut frame: Vec<Coords> = vec![axis.into()];
    for k in 0..n {
        if frame.len() == n {
            break;
        }
        let mut v: Coords = (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
        for e in &frame {
            let dot: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(e).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|a| *a /= norm);
            frame.push(v);
        }
    }
    Ok(frame)
}

/// Point on the meridian of an axisymmetric body: axial z, transverse R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylPoint {
    pub z: f64,
    #[serde(rename = "R")]
    pub radius: f64,
}

/// Grid summary carried in CLI metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    pub n: usize,
    pub resolution: usize,
    pub node_count: u128,
}

/// Tensor-product quadrature over S^{n-1}.
///
/// Each polar angle φ_i uses a Gauss rule in cos φ_i whose weight function is
/// exactly that angle's sin-power density (Gauss–Gegenbauer), the azimuth
/// uses the periodic trapezoid rule. Nodes are never materialized: the rule
/// is stored per axis and expanded on the fly.
#[derive(Debug, Clone)]
pub struct DirectionGrid {
    dim: usize,
    resolution: usize,
    /// Per-axis angle nodes; weights already include the density.
    axes: Vec<Rule>,
}

/// Builder for grids with a refinement factor or a non-default node budget.
#[derive(Debug, Clone, Copy)]
pub struct GridBuilder {
    dim: usize,
    resolution: usize,
    refinement: usize,
    budget: u128,
}

impl GridBuilder {
    pub fn new(dim: usize, resolution: usize) -> Self {
        Self { dim, resolution, refinement: 1, budget: DEFAULT_NODE_BUDGET }
    }

    /// Multiplies the node count of the first axis (φ_1), where axisymmetric
    /// integrands concentrate their structure.
    pub fn refinement(mut self, factor: usize) -> Self {
        self.refinement = factor.max(1);
        self
    }

    pub fn node_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn build(self) -> Result<DirectionGrid> {
        let Self { dim: n, resolution, refinement, budget } = self;
        if n < 2 {
            return Err(domain(format!("direction grids need n >= 2, got {n}")));
        }
        if resolution < 2 {
            return Err(domain(format!("grid resolution must be >= 2, got {resolution}")));
        }
        let requested = (resolution as u128)
            .checked_pow((n - 1) as u32)
            .and_then(|c| c.checked_mul(refinement as u128))
            .unwrap_or(u128::MAX);
        if requested > budget {
            return Err(Error::NodeBudget { requested, budget });
        }
        let mut axes = Vec::with_capacity(n - 1);
        for i in 0..n - 2 {
            let count = if i == 0 { resolution * refinement } else { resolution };
            let power = (n - 2 - i) as f64;
            let rule = gauss_gegenbauer(count, 0.5 * (power - 1.0));
            // t = cos φ; map back to angles
            axes.push(Rule {
                nodes: rule.nodes.iter().map(|t| t.clamp(-1.0, 1.0).acos()).collect(),
                weights: rule.weights,
            });
        }
        let count = if n == 2 { resolution * refinement } else { resolution };
        axes.push(Rule {
            nodes: (0..count).map(|j| TAU * j as f64 / count as f64).collect(),
            weights: vec![TAU / count as f64; count],
        });
        Ok(DirectionGrid { dim: n, resolution, axes })
    }
}

/// Tensor grid with `resolution` nodes per axis.
pub fn build_grid(n: usize, resolution: usize) -> Result<DirectionGrid> {
    GridBuilder::new(n, resolution).build()
}

impl DirectionGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn node_count(&self) -> u128 {
        self.axes.iter().map(|a| a.len() as u128).product()
    }

    pub fn info(&self) -> GridInfo {
        GridInfo { n: self.dim, resolution: self.resolution, node_count: self.node_count() }
    }

    /// The per-axis rules (angles and density-weighted weights).
    pub fn axes(&self) -> &[Rule] {
        &self.axes
    }

    /// Σ weights, which approximates S_{n-1}.
    pub fn weight_sum(&self) -> f64 {
        self.axes.iter().map(|a| a.weights.iter().sum::<f64>()).product()
    }

    /// ∫ f dΩ over S^{n-1}.
    ///
    /// Sums are nested axis by axis, the outer axis in parallel with an
    /// order-preserving reduction, so results do not depend on thread count.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&Direction) -> f64 + Sync,
    {
        let outer = &self.axes[0];
        let template = Direction { angles: SmallVec::from_elem(0.0, self.dim - 1) };
        let parts: Vec<f64> = outer
            .nodes
            .par_iter()
            .zip(outer.weights.par_iter())
            .map(|(&a, &w)| {
                let mut d = template.clone();
                d.angles[0] = a;
                w * self.nested(1, &mut d, &f)
            })
            .collect();
        parts.iter().sum()
    }

    fn nested<F>(&self, axis: usize, d: &mut Direction, f: &F) -> f64
    where
        F: Fn(&Direction) -> f64,
    {
        if axis == self.axes.len() {
            return f(d);
        }
        let rule = &self.axes[axis];
        let mut sum = 0.0;
        for (&a, &w) in rule.nodes.iter().zip(&rule.weights) {
            d.angles[axis] = a;
            sum += w * self.nested(axis + 1, d, f);
        }
        sum
    }

    /// Every node with its weight, in lexicographic axis order.
    pub fn nodes(&self) -> impl Iterator<Item = (Direction, f64)> + '_ {
        let count = self.node_count() as usize;
        (0..count).map(move |mut flat| {
            let mut angles = SmallVec::from_elem(0.0, self.dim - 1);
            let mut weight = 1.0;
            for (i, rule) in self.axes.iter().enumerate().rev() {
                let k = flat % rule.len();
                flat /= rule.len();
                angles[i] = rule.nodes[k];
                weight *= rule.weights[k];
            }
            (Direction { angles }, weight)
        })
    }

    /// Materialized nodes with their unit vectors, for repeated evaluation.
    pub fn collect_nodes(&self) -> Vec<GridNode> {
        self.nodes()
            .map(|(direction, weight)| GridNode { unit: direction.unit_vector(), direction, weight })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct GridNode {
    pub direction: Direction,
    pub unit: Coords,
    pub weight: f64,
}

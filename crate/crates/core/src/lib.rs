//! Average cross-sectional thickness of n-dimensional bodies.
//!
//! T(m, n) is the mean m-volume of the m-dimensional planar sections of a body
//! in R^n through a fixed point, averaged over all orientations. This crate
//! evaluates it by quadrature over the sphere of directions and by Monte
//! Carlo, solves for the shapes that make T stationary at fixed volume and
//! fixed centroid, and checks the known closed forms against both.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod nsphere;
pub mod properties;
pub mod quadrature;
pub mod roots;
pub mod stationary;
pub mod thickness;

pub use analysis::{DeformationSample, DumbbellConfig, NullVector, OptimalityTrial};
pub use error::{Error, Result};
pub use geometry::{build_grid, CylPoint, Direction, DirectionGrid, GridBuilder, GridInfo};
pub use nsphere::{unit_ball_volume, unit_sphere_area, BallMeasures};
pub use properties::{PropertiesReport, DEFAULT_RESOLUTION};
pub use stationary::{ProfileCurve, ShapeClass, StationaryParams};
pub use thickness::{BodyProperties, Estimate, HarmonicPerturbation, IndicatorBody, StarShape};

/// Version string reported by the command-line tool.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

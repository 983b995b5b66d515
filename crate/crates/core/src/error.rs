use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("grid would need {requested} nodes, budget is {budget}")]
    NodeBudget { requested: u128, budget: u128 },

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("only {accepted} of {total} samples landed inside the body")]
    InsufficientSampling { accepted: u64, total: u64 },

    #[error("no positive boundary root in direction theta = {theta}")]
    NoRoot { theta: f64 },

    #[error("z = {z} lies outside the support (R^2 = {r_squared})")]
    OutsideSupport { z: f64, r_squared: f64 },

    #[error("lambda + mu z = {value} is not positive at z = {z}")]
    Pole { z: f64, value: f64 },

    #[error("e = {ecc} describes an open region without finite volume")]
    Unbounded { ecc: f64 },

    #[error("rank test failed: {reason} (singular values {singular_values:?})")]
    Rank {
        reason: String,
        singular_values: Vec<f64>,
    },

    #[error("constraint projection did not converge after {iterations} iterations (residual {residual:e})")]
    Projection { iterations: usize, residual: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("root finder did not converge: {0}")]
    Convergence(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI's JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NodeBudget { .. } => "node_budget",
            Error::DegenerateBody(_) => "degenerate_body",
            Error::InsufficientSampling { .. } => "insufficient_sampling",
            Error::NoRoot { .. } => "no_root",
            Error::OutsideSupport { .. } => "outside_support",
            Error::Pole { .. } => "pole",
            Error::Unbounded { .. } => "unbounded_region",
            Error::Rank { .. } => "rank",
            Error::Projection { .. } => "projection",
            Error::Geometry(_) => "geometry",
            Error::Convergence(_) => "convergence",
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

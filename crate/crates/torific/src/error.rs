//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample space needs at least 2 atoms, got {0}")]
    SampleSpaceTooSmall(usize),

    #[error("duplicate atom label `{0}`")]
    DuplicateLabel(String),

    #[error("{name} has length {got}, sample space has size {expected}")]
    LengthMismatch {
        name: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    /// `{1, F}` must be linearly independent; a constant F violates that.
    #[error("F is constant up to {spread:.3e}; it must take at least two distinct values")]
    ConstantStatistic { spread: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("x = {x} lies outside the domain {domain}")]
    Domain { x: f64, domain: String },

    #[error("metric is not positive at x = {x}: h = {h:.6e}")]
    NonPositiveMetric { x: f64, h: f64 },

    #[error("empty evaluation grid (domain/window intersection too small)")]
    EmptyGrid,

    #[error("need at least {need} samples, got {got}")]
    DegenerateSampling { need: usize, got: usize },

    #[error("all F values collapse into a single group under reduction")]
    DegenerateFamily,

    #[error(
        "curvature is not constant: median {lambda:.6e}, max deviation {deviation:.3e} > {tol:.3e}"
    )]
    NotConstantCurvature {
        lambda: f64,
        deviation: f64,
        tol: f64,
    },

    #[error("invariant K = Γ² − Γ′ varies by {deviation:.3e} over the grid (tol {tol:.3e})")]
    NonConstantInvariant { deviation: f64, tol: f64 },

    #[error("fitted canonical form does not reproduce the metric: max relative error {max_rel:.3e} (tol {tol:.3e})")]
    FitMismatch { max_rel: f64, tol: f64 },

    #[error("form `{0}` is not toric; no model map exists")]
    NotToric(&'static str),

    #[error("family spec: {0}")]
    Spec(String),

    #[error("family spec is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

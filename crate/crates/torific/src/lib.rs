//! Classification of one-dimensional dually flat (Hessian) manifolds by
//! sectional curvature, and numerical certification of the constant-curvature
//! models and their complex space forms.
//!
//! The crate works with three kinds of inputs:
//!
//! * finite exponential families given by value tables (see [`expfam`]),
//! * the built-in analytic families (Poisson, negative binomial, the
//!   constant-curvature models), and
//! * arbitrary metric curves with derivative jets (see [`hessian`]).
//!
//! [`classify::classify`] decides whether the sectional curvature
//! S = (1/2h)·(ln h)″ is constant, fits the metric to one of six canonical
//! shapes, decides toricity through the K = Γ² − Γ′ invariant, and produces
//! the affine map onto the model of matching curvature. [`spaceform`] builds
//! the disk/plane/projective-line geometry attached to each model and checks
//! the covering-map identities numerically; [`kahlerfn`] verifies the
//! closed-form Kähler function bases and the separation/lattice-invariance
//! dichotomy behind the toricity verdicts. [`mod@reduce`] handles reduction
//! and affine equivalence of finite families.

// Comparisons of the shape `!(x < tol)` are NaN-rejecting acceptance tests:
// a NaN residual must count as failure, which `x >= tol` would not do.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod expfam;
pub mod hessian;
pub mod interval;
pub mod kahlerfn;
pub mod reduce;
pub mod spaceform;

pub use classify::{classify, CanonicalForm, Classification, ClassifyOptions, FormKind, GridSpec};
pub use error::{Error, Result};
pub use expfam::{AnalyticFamily, FamilyInput, FamilySpec, FiniteExpFam, FiniteSampleSpace};
pub use hessian::{HasMetric, MetricCurve, MetricJet};
pub use interval::Interval;
pub use reduce::{binomial_equiv, equivalent, reduce, GroupElement, ReducedFamily};

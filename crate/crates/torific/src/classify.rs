//! Constant-curvature classification: decide constancy of S, fit the metric
//! to one of the six canonical forms, decide toricity, and produce the
//! affine model map φ onto the constant-curvature model of curvature −c.
//!
//! A constant-curvature metric on an interval is one of
//!
//! | h(x)                    | λ      | K = Γ² − Γ′ | toric |
//! |-------------------------|--------|-------------|-------|
//! | e^{ax+b}                | 0      | a²/4        | yes   |
//! | e^{b}                   | 0      | 0           | no    |
//! | a/(λ·cos²(√a·x+b))      | > 0    | −a          | no    |
//! | a/(λ·sinh²(√a·x+b))     | > 0    | a           | yes   |
//! | 1/(λ·(x+b)²)            | > 0    | 0           | no    |
//! | −a/(λ·cosh²(√a·x+b))    | < 0    | a           | yes   |
//!
//! The sign of K discriminates the three λ > 0 rows; for λ = 0 the split is
//! Γ ≈ 0 (constant) versus Γ ≠ 0 (exponential).

use crate::error::{Error, Result};
use crate::hessian::{christoffel, curvature, HasMetric, MetricCurve, MetricJet};
use crate::interval::Interval;
use crate::spaceform;

/// Default absolute tolerance for judging S (and K) constant over the grid.
pub const DEFAULT_CONSTANCY_TOL: f64 = 1e-7;

/// Default relative tolerance for the post-fit reconstruction check and the
/// pullback identity of the model map.
pub const DEFAULT_FIT_TOL: f64 = 1e-6;

/// Threshold for resolving values that sit on a measure-zero boundary
/// (λ = 0, Γ = 0, K = 0); exact zeros never occur in floats.
pub const ZERO_TOL: f64 = 1e-9;

/// Sign marker for the sinh-type form (which side of the pole the domain
/// lies on).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One of the six canonical constant-curvature metric shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormKind {
    /// h(x) = e^{a·x + b}, a ≠ 0.
    Exp { a: f64, b: f64 },
    /// h(x) = e^{b}.
    Const { b: f64 },
    /// h(x) = a/(λ·cos²(√a·x + b)).
    CosSq { a: f64, b: f64 },
    /// h(x) = a/(λ·sinh²(√a·x + b)); `eps` records the domain side of the
    /// pole at x = −b/√a (`Plus` ⇔ domain left of the pole).
    SinhSq { a: f64, b: f64, eps: Sign },
    /// h(x) = 1/(λ·(x + b)²).
    InvSq { b: f64 },
    /// h(x) = −a/(λ·cosh²(√a·x + b)).
    CoshSq { a: f64, b: f64 },
}

/// A canonical form together with its curvature constant λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalForm {
    pub kind: FormKind,
    pub lambda: f64,
}

impl CanonicalForm {
    pub fn tag(&self) -> &'static str {
        match self.kind {
            FormKind::Exp { .. } => "exp",
            FormKind::Const { .. } => "const",
            FormKind::CosSq { .. } => "cos_sq",
            FormKind::SinhSq { .. } => "sinh_sq",
            FormKind::InvSq { .. } => "inv_sq",
            FormKind::CoshSq { .. } => "cosh_sq",
        }
    }

    pub fn is_toric(&self) -> bool {
        matches!(
            self.kind,
            FormKind::Exp { .. } | FormKind::SinhSq { .. } | FormKind::CoshSq { .. }
        )
    }

    /// Evaluate the closed-form metric value.
    pub fn h(&self, x: f64) -> f64 {
        let l = self.lambda;
        match self.kind {
            FormKind::Exp { a, b } => (a * x + b).exp(),
            FormKind::Const { b } => b.exp(),
            FormKind::CosSq { a, b } => {
                let u = a.sqrt() * x + b;
                a / (l * u.cos() * u.cos())
            }
            FormKind::SinhSq { a, b, .. } => {
                let u = a.sqrt() * x + b;
                a / (l * u.sinh() * u.sinh())
            }
            FormKind::InvSq { b } => 1.0 / (l * (x + b) * (x + b)),
            FormKind::CoshSq { a, b } => {
                let u = a.sqrt() * x + b;
                -a / (l * u.cosh() * u.cosh())
            }
        }
    }

    /// The natural (maximal connected) positivity domain of the form; for
    /// the cos/inv cases this picks one component.
    pub fn natural_domain(&self) -> Interval {
        match self.kind {
            FormKind::Exp { .. } | FormKind::Const { .. } | FormKind::CoshSq { .. } => {
                Interval::ALL
            }
            FormKind::CosSq { a, b } => {
                let s = a.sqrt();
                Interval::open(
                    (-std::f64::consts::FRAC_PI_2 - b) / s,
                    (std::f64::consts::FRAC_PI_2 - b) / s,
                )
            }
            FormKind::SinhSq { a, b, eps } => {
                let pole = -b / a.sqrt();
                match eps {
                    Sign::Plus => Interval::open(f64::NEG_INFINITY, pole),
                    Sign::Minus => Interval::open(pole, f64::INFINITY),
                }
            }
            FormKind::InvSq { b } => Interval::open(-b, f64::INFINITY),
        }
    }

    /// The form as a metric curve with exact derivative jets on its natural
    /// domain.
    pub fn metric(&self) -> MetricCurve {
        let form = *self;
        let l = self.lambda;
        MetricCurve::new(self.natural_domain(), move |x| match form.kind {
            FormKind::Exp { a, b } => {
                let h = (a * x + b).exp();
                MetricJet {
                    h,
                    d1: a * h,
                    d2: a * a * h,
                    d3: a * a * a * h,
                }
            }
            FormKind::Const { b } => MetricJet {
                h: b.exp(),
                d1: 0.0,
                d2: 0.0,
                d3: 0.0,
            },
            FormKind::CosSq { a, b } => {
                let s = a.sqrt();
                let u = s * x + b;
                let t = u.tan();
                let h = a / (l * u.cos() * u.cos());
                MetricJet {
                    h,
                    d1: 2.0 * s * h * t,
                    d2: 2.0 * a * h * (3.0 * t * t + 1.0),
                    d3: 8.0 * a * s * h * t * (3.0 * t * t + 2.0),
                }
            }
            FormKind::SinhSq { a, b, .. } => {
                let s = a.sqrt();
                let u = s * x + b;
                let p = 1.0 / u.tanh();
                let h = a / (l * u.sinh() * u.sinh());
                MetricJet {
                    h,
                    d1: -2.0 * s * h * p,
                    d2: 2.0 * a * h * (3.0 * p * p - 1.0),
                    d3: 8.0 * a * s * h * p * (2.0 - 3.0 * p * p),
                }
            }
            FormKind::InvSq { b } => {
                let s = x + b;
                let h = 1.0 / (l * s * s);
                MetricJet {
                    h,
                    d1: -2.0 * h / s,
                    d2: 6.0 * h / (s * s),
                    d3: -24.0 * h / (s * s * s),
                }
            }
            FormKind::CoshSq { a, b } => {
                let s = a.sqrt();
                let u = s * x + b;
                let t = u.tanh();
                let h = -a / (l * u.cosh() * u.cosh());
                MetricJet {
                    h,
                    d1: -2.0 * s * h * t,
                    d2: 2.0 * a * h * (3.0 * t * t - 1.0),
                    d3: 8.0 * a * s * h * t * (2.0 - 3.0 * t * t),
                }
            }
        })
    }
}

/// The affine model map φ(x) = α·x + β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelMap {
    pub alpha: f64,
    pub beta: f64,
}

impl ModelMap {
    pub fn apply(&self, x: f64) -> f64 {
        self.alpha * x + self.beta
    }
}

/// Result of the classification pipeline for a constant-curvature input.
#[derive(Debug, Clone)]
pub struct Classification {
    /// Curvature constant λ (median of S over the grid, snapped to 0 when
    /// within [`ZERO_TOL`]).
    pub lambda: f64,
    /// Max |S − λ| observed over the grid.
    pub max_s_deviation: f64,
    pub form: CanonicalForm,
    pub toric: bool,
    /// Model constant c = −λ.
    pub c: f64,
    /// Affine map onto the model; present exactly for toric forms.
    pub phi: Option<ModelMap>,
    /// Domain of the model (ℝ for c ≥ 0, the negative half line for c < 0).
    pub model_domain: Option<Interval>,
    /// Max relative error of the fitted form against the metric.
    pub fit_residual: f64,
    /// Max relative error of h(x) vs h_c(φ(x))·φ′² over the grid (toric only).
    pub pullback_residual: Option<f64>,
}

/// Evaluation window and point count for the classification grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            lo: -10.0,
            hi: 10.0,
            count: 101,
        }
    }
}

impl GridSpec {
    pub fn points(&self, domain: &Interval) -> Result<Vec<f64>> {
        domain.grid(self.lo, self.hi, self.count)
    }
}

/// Tolerances and grid for [`classify`].
#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub grid: GridSpec,
    pub constancy_tol: f64,
    pub fit_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            grid: GridSpec::default(),
            constancy_tol: DEFAULT_CONSTANCY_TOL,
            fit_tol: DEFAULT_FIT_TOL,
        }
    }
}

/// Outcome of the constancy decision.
#[derive(Debug, Clone, Copy)]
pub struct ConstancyReport {
    pub constant: bool,
    /// Median of S over the grid.
    pub lambda: f64,
    pub max_deviation: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// NaN-propagating running maximum; a NaN residual must not be masked.
fn max_keep_nan(acc: f64, x: f64) -> f64 {
    if acc.is_nan() || x.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

/// Decide whether S is constant over the grid. λ is the median of the
/// samples; the decision is max |S − λ| < tol.
pub fn constancy_test(m: &MetricCurve, grid: &[f64], tol: f64) -> Result<ConstancyReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.len() < 11 {
        return Err(Error::DegenerateSampling {
            need: 11,
            got: grid.len(),
        });
    }
    let s: Vec<f64> = grid
        .iter()
        .map(|&x| curvature(m, x).map(|c| c.s))
        .collect::<Result<_>>()?;
    let lambda = median(s.clone());
    let max_deviation = s.iter().map(|v| (v - lambda).abs()).fold(0.0, max_keep_nan);
    Ok(ConstancyReport {
        constant: max_deviation < tol,
        lambda,
        max_deviation,
    })
}

/// The constant value of K = Γ² − Γ′ over the grid.
///
/// For a constant-curvature metric K is constant; its sign discriminates the
/// canonical forms. Errors with [`Error::NonConstantInvariant`] when the
/// samples vary beyond `tol` (relative to max(1, |K|)).
pub fn toricity_invariant(m: &MetricCurve, grid: &[f64], tol: f64) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let k: Vec<f64> = grid
        .iter()
        .map(|&x| curvature(m, x).map(|c| c.k))
        .collect::<Result<_>>()?;
    let kmed = median(k.clone());
    let dev = k.iter().map(|v| (v - kmed).abs()).fold(0.0, max_keep_nan);
    let scaled_tol = tol * kmed.abs().max(1.0);
    if !(dev < scaled_tol) {
        return Err(Error::NonConstantInvariant {
            deviation: dev,
            tol: scaled_tol,
        });
    }
    Ok(kmed)
}

/// Base point for parameter recovery: grid midpoint clamped to [−1, 1] and
/// back into the grid range (recovery near a pole amplifies float error).
pub fn default_base_point(grid: &[f64]) -> f64 {
    let (lo, hi) = (grid[0], *grid.last().unwrap());
    (0.5 * (lo + hi)).clamp(-1.0, 1.0).clamp(lo, hi)
}

fn artanh(y: f64) -> f64 {
    0.5 * ((1.0 + y) / (1.0 - y)).ln()
}

fn arcoth(y: f64) -> f64 {
    0.5 * ((y + 1.0) / (y - 1.0)).ln()
}

/// Recover canonical-form parameters at `base_x` and validate the
/// reconstruction against the metric over the grid (relative error < tol).
///
/// `k` is the constant value of Γ² − Γ′ established by
/// [`toricity_invariant`]; its sign picks the row, its magnitude is the
/// parameter a for the non-flat rows.
pub fn fit_form(
    m: &MetricCurve,
    lambda: f64,
    k: f64,
    grid: &[f64],
    base_x: f64,
    tol: f64,
) -> Result<CanonicalForm> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let gamma0 = christoffel(m, base_x)?.value;
    let h0 = m.eval(base_x)?.h;
    let k_zero = k.abs() < ZERO_TOL * gamma0.mul_add(gamma0, 0.0).max(1.0);

    let kind = if lambda == 0.0 {
        if gamma0.abs() < ZERO_TOL {
            FormKind::Const { b: h0.ln() }
        } else {
            let a = 2.0 * gamma0;
            FormKind::Exp {
                a,
                b: h0.ln() - a * base_x,
            }
        }
    } else if k_zero {
        // Γ = −1/(x + b) for the inverse-square row.
        FormKind::InvSq {
            b: -base_x - 1.0 / gamma0,
        }
    } else if k > 0.0 {
        let a = k;
        let s = a.sqrt();
        if lambda > 0.0 {
            // Γ = −√a·coth(√a·x + b).
            let b = arcoth(-gamma0 / s) - s * base_x;
            let pole = -b / s;
            let eps = if grid.iter().all(|&x| x < pole) {
                Sign::Plus
            } else if grid.iter().all(|&x| x > pole) {
                Sign::Minus
            } else {
                return Err(Error::FitMismatch {
                    max_rel: f64::INFINITY,
                    tol,
                });
            };
            FormKind::SinhSq { a, b, eps }
        } else {
            // Γ = −√a·tanh(√a·x + b).
            FormKind::CoshSq {
                a,
                b: artanh(-gamma0 / s) - s * base_x,
            }
        }
    } else {
        // K < 0 forces λ > 0 and the cos row: Γ = √a·tan(√a·x + b).
        let a = -k;
        let s = a.sqrt();
        FormKind::CosSq {
            a,
            b: (gamma0 / s).atan() - s * base_x,
        }
    };

    let form = CanonicalForm { kind, lambda };
    let max_rel = grid
        .iter()
        .map(|&x| {
            let h = m.eval(x).map(|j| j.h).unwrap_or(f64::NAN);
            (form.h(x) - h).abs() / h
        })
        .fold(0.0, max_keep_nan);
    if !(max_rel < tol) {
        return Err(Error::FitMismatch { max_rel, tol });
    }
    Ok(form)
}

/// The affine map φ onto the model of curvature −λ:
/// φ(x) = a·x + b − ln(a²) for the exponential row, ε·(√a·x + b) for the
/// sinh row and √a·x + b for the cosh row. Non-toric forms have no model
/// map.
pub fn model_map(form: &CanonicalForm) -> Result<ModelMap> {
    match form.kind {
        FormKind::Exp { a, b } => Ok(ModelMap {
            alpha: a,
            beta: b - (a * a).ln(),
        }),
        FormKind::SinhSq { a, b, eps } => {
            let e = eps.as_f64();
            Ok(ModelMap {
                alpha: e * a.sqrt(),
                beta: e * b,
            })
        }
        FormKind::CoshSq { a, b } => Ok(ModelMap {
            alpha: a.sqrt(),
            beta: b,
        }),
        _ => Err(Error::NotToric(form.tag())),
    }
}

/// Full pipeline: metric → constancy → invariant K → form fit → model map,
/// with the pullback identity h(x) = h_c(φ(x))·φ′² validated for toric
/// outputs.
pub fn classify<T: HasMetric>(input: &T, opts: &ClassifyOptions) -> Result<Classification> {
    let m = input.metric_curve();
    let grid = opts.grid.points(&m.domain())?;
    let cons = constancy_test(&m, &grid, opts.constancy_tol)?;
    if !cons.constant {
        return Err(Error::NotConstantCurvature {
            lambda: cons.lambda,
            deviation: cons.max_deviation,
            tol: opts.constancy_tol,
        });
    }
    let lambda = if cons.lambda.abs() < ZERO_TOL {
        0.0
    } else {
        cons.lambda
    };
    let k = toricity_invariant(&m, &grid, opts.constancy_tol)?;
    let base_x = default_base_point(&grid);
    let form = fit_form(&m, lambda, k, &grid, base_x, opts.fit_tol)?;
    let c = if lambda == 0.0 { 0.0 } else { -lambda };

    let (phi, model_domain, pullback_residual) = if form.is_toric() {
        let phi = model_map(&form)?;
        let domain = spaceform::model_domain(c);
        let hc = spaceform::model_metric(c);
        let alpha2 = phi.alpha * phi.alpha;
        let mut max_rel: f64 = 0.0;
        for &x in &grid {
            let y = phi.apply(x);
            if !domain.contains(y) {
                return Err(Error::FitMismatch {
                    max_rel: f64::INFINITY,
                    tol: opts.fit_tol,
                });
            }
            let h = m.eval(x)?.h;
            let rel = (hc.eval(y)?.h * alpha2 - h).abs() / h;
            max_rel = max_keep_nan(max_rel, rel);
        }
        if !(max_rel < opts.fit_tol) {
            return Err(Error::FitMismatch {
                max_rel,
                tol: opts.fit_tol,
            });
        }
        (Some(phi), Some(domain), Some(max_rel))
    } else {
        (None, None, None)
    };

    // Reconstruction residual for the report.
    let fit_residual = grid
        .iter()
        .map(|&x| {
            let h = m.eval(x).map(|j| j.h).unwrap_or(f64::NAN);
            (form.h(x) - h).abs() / h
        })
        .fold(0.0, max_keep_nan);

    Ok(Classification {
        lambda,
        max_s_deviation: cons.max_deviation,
        form,
        toric: form.is_toric(),
        c,
        phi,
        model_domain,
        fit_residual,
        pullback_residual,
    })
}

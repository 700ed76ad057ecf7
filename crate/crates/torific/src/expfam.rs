//! One-dimensional exponential families `p(x; θ) = exp{C(x) + θF(x) − ψ(θ)}`
//! over finite sample spaces, plus built-in analytic families.
//!
//! The log-partition function ψ and its derivatives up to fourth order are
//! computed exactly: ψ⁽ᵏ⁾(θ) is the k-th cumulant of `F` under the density at
//! θ, so the derivatives come from probability-weighted central moments, not
//! from differencing. Everywhere an exponential of `C + θF` appears, the
//! maximum exponent is subtracted first (|θF| can exceed 700).

use std::collections::HashSet;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::hessian::MetricCurve;
use crate::interval::Interval;
use crate::spaceform;

/// Smallest admissible spread `max F − min F`; below this, `{1, F}` is
/// treated as linearly dependent and construction fails.
pub const MIN_STATISTIC_SPREAD: f64 = 1e-12;

/// Overflow-safe `ln Σ exp(tᵢ)`.
pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Ordered finite sample space with distinct atom labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSampleSpace {
    labels: Vec<String>,
}

impl FiniteSampleSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::SampleSpaceTooSmall(labels.len()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(FiniteSampleSpace { labels })
    }

    /// Sample space `{"0", "1", ..., "m"}` of the given size.
    pub fn indexed(size: usize) -> Result<Self> {
        Self::new((0..size).map(|k| k.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// ψ and its first four derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

/// A 1-D exponential family over a finite sample space, given by the value
/// tables `C` (log base weights) and `F` (sufficient statistic).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteExpFam {
    space: FiniteSampleSpace,
    c: Vec<f64>,
    f: Vec<f64>,
}

impl FiniteExpFam {
    pub fn new(space: FiniteSampleSpace, c: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if c.len() != space.len() {
            return Err(Error::LengthMismatch {
                name: "C",
                expected: space.len(),
                got: c.len(),
            });
        }
        if f.len() != space.len() {
            return Err(Error::LengthMismatch {
                name: "F",
                expected: space.len(),
                got: f.len(),
            });
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("C"));
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("F"));
        }
        let spread = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - f.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread <= MIN_STATISTIC_SPREAD {
            return Err(Error::ConstantStatistic { spread });
        }
        Ok(FiniteExpFam { space, c, f })
    }

    pub fn space(&self) -> &FiniteSampleSpace {
        &self.space
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `ψ(θ) = ln Σₖ exp(C(xₖ) + θF(xₖ))`.
    pub fn log_partition(&self, theta: f64) -> f64 {
        let terms: Vec<f64> = self
            .c
            .iter()
            .zip(&self.f)
            .map(|(c, f)| c + theta * f)
            .collect();
        log_sum_exp(&terms)
    }

    /// The probability vector `p(xₖ; θ)`; entries are strictly positive and
    /// sum to 1 up to rounding.
    pub fn density(&self, theta: f64) -> Vec<f64> {
        let e: Vec<f64> = self
            .c
            .iter()
            .zip(&self.f)
            .map(|(c, f)| c + theta * f)
            .collect();
        let m = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = e.iter().map(|t| (t - m).exp()).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|v| v / s).collect()
    }

    /// ψ and its derivatives through order four.
    ///
    /// ψ′ = E\[F\], ψ″ = Var(F), ψ‴ = μ₃ and ψ⁗ = μ₄ − 3μ₂², all central
    /// moments taken under `density(θ)`.
    pub fn cumulants(&self, theta: f64) -> PotentialJet {
        let p = self.density(theta);
        let mean: f64 = p.iter().zip(&self.f).map(|(p, f)| p * f).sum();
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for (p, f) in p.iter().zip(&self.f) {
            let d = f - mean;
            let d2 = d * d;
            m2 += p * d2;
            m3 += p * d2 * d;
            m4 += p * d2 * d2;
        }
        PotentialJet {
            value: self.log_partition(theta),
            d1: mean,
            d2: m2,
            d3: m3,
            d4: m4 - 3.0 * m2 * m2,
        }
    }

    /// Fifth cumulant κ₅ = μ₅ − 10·μ₂·μ₃ (= ψ⁽⁵⁾).
    fn fifth_cumulant(&self, theta: f64) -> f64 {
        let p = self.density(theta);
        let mean: f64 = p.iter().zip(&self.f).map(|(p, f)| p * f).sum();
        let (mut m2, mut m3, mut m5) = (0.0, 0.0, 0.0);
        for (p, f) in p.iter().zip(&self.f) {
            let d = f - mean;
            let d2 = d * d;
            m2 += p * d2;
            m3 += p * d2 * d;
            m5 += p * d2 * d2 * d;
        }
        m5 - 10.0 * m2 * m3
    }

    /// The log-partition function as a [`PotentialCurve`] on all of ℝ.
    pub fn as_potential(&self) -> PotentialCurve {
        let fam = self.clone();
        let fam5 = self.clone();
        PotentialCurve::new(Interval::ALL, move |theta| fam.cumulants(theta))
            .with_fifth(move |theta| fam5.fifth_cumulant(theta))
    }
}

type JetFn = Arc<dyn Fn(f64) -> PotentialJet + Send + Sync>;
type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A potential ψ on an open interval with exact derivatives up to order 4,
/// and optionally an exact fifth derivative (used for the metric's third
/// derivative when available).
#[derive(Clone)]
pub struct PotentialCurve {
    domain: Interval,
    jet: JetFn,
    d5: Option<ScalarFn>,
}

impl PotentialCurve {
    pub fn new(domain: Interval, jet: impl Fn(f64) -> PotentialJet + Send + Sync + 'static) -> Self {
        PotentialCurve {
            domain,
            jet: Arc::new(jet),
            d5: None,
        }
    }

    pub fn with_fifth(mut self, d5: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d5 = Some(Arc::new(d5));
        self
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn eval(&self, x: f64) -> Result<PotentialJet> {
        if !self.domain.contains(x) {
            return Err(Error::Domain {
                x,
                domain: self.domain.to_string(),
            });
        }
        Ok((self.jet)(x))
    }

    pub(crate) fn jet_unchecked(&self, x: f64) -> PotentialJet {
        (self.jet)(x)
    }

    pub(crate) fn fifth_at(&self, x: f64) -> Option<f64> {
        self.d5.as_ref().map(|f| f(x))
    }
}

impl std::fmt::Debug for PotentialCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialCurve")
            .field("domain", &self.domain)
            .field("exact_fifth", &self.d5.is_some())
            .finish()
    }
}

/// Built-in families over infinite sample spaces, given in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticFamily {
    /// ψ(θ) = e^θ on ℝ.
    Poisson,
    /// ψ(θ) = −r·ln(1 − e^θ) on (−∞, 0), integer r ≥ 1.
    NegativeBinomial { r: u32 },
    /// The constant-curvature model of curvature −c. Carried directly by its
    /// metric h_c; no potential is exposed for it.
    Model { c: f64 },
}

impl AnalyticFamily {
    /// Closed-form potential, where one exists (`Model` has none).
    pub fn potential(&self) -> Option<PotentialCurve> {
        match *self {
            AnalyticFamily::Poisson => Some(
                PotentialCurve::new(Interval::ALL, |t| {
                    let e = t.exp();
                    PotentialJet {
                        value: e,
                        d1: e,
                        d2: e,
                        d3: e,
                        d4: e,
                    }
                })
                .with_fifth(|t| t.exp()),
            ),
            AnalyticFamily::NegativeBinomial { r } => {
                let r = f64::from(r);
                Some(
                    PotentialCurve::new(Interval::NEGATIVE, move |t| {
                        let u = t.exp();
                        let q = 1.0 - u;
                        PotentialJet {
                            value: -r * q.ln(),
                            d1: r * u / q,
                            d2: r * u / (q * q),
                            d3: r * u * (1.0 + u) / (q * q * q),
                            d4: r * u * (1.0 + u * (4.0 + u)) / (q * q * q * q),
                        }
                    })
                    .with_fifth(move |t| {
                        let u = t.exp();
                        let q = 1.0 - u;
                        r * u * (1.0 + u * (11.0 + u * (11.0 + u))) / q.powi(5)
                    }),
                )
            }
            AnalyticFamily::Model { .. } => None,
        }
    }

    /// The Fisher metric of the family, with exact derivative jets.
    pub fn metric(&self) -> MetricCurve {
        match *self {
            AnalyticFamily::Model { c } => spaceform::model_metric(c),
            _ => crate::hessian::metric_from_potential(
                &self.potential().expect("non-model families have a potential"),
            ),
        }
    }
}

// ---------------------------------------------------------------------------
// Family spec documents (JSON)
// ---------------------------------------------------------------------------

/// A parsed family spec document.
///
/// Two shapes are accepted:
/// `{"omega": [...], "C": [...], "F": [...]}` for a value table, or
/// `{"builtin": NAME, ...}` with parameter fields `n`, `r`, `c` for the
/// built-in catalogs (`binomial`, `poisson`, `negative_binomial`,
/// `categorical2`, `model`).
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Table {
        omega: Vec<String>,
        c: Vec<f64>,
        f: Vec<f64>,
    },
    Builtin {
        builtin: String,
        n: Option<u32>,
        r: Option<u32>,
        c: Option<f64>,
    },
}

/// A family built from a spec document: either a finite table or one of the
/// built-in analytic families.
#[derive(Debug, Clone)]
pub enum FamilyInput {
    Finite(FiniteExpFam),
    Analytic(AnalyticFamily),
}

impl FamilyInput {
    pub fn metric(&self) -> MetricCurve {
        match self {
            FamilyInput::Finite(fam) => {
                crate::hessian::metric_from_potential(&fam.as_potential())
            }
            FamilyInput::Analytic(a) => a.metric(),
        }
    }
}

fn json_f64_array(v: &Value, field: &str) -> Result<Vec<f64>> {
    let arr = v
        .get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Spec(format!("missing or non-array field `{field}`")))?;
    arr.iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| Error::Spec(format!("non-numeric entry in `{field}`")))
        })
        .collect()
}

impl FamilySpec {
    pub fn from_json(text: &str) -> Result<FamilySpec> {
        let v: Value = serde_json::from_str(text)?;
        if let Some(builtin) = v.get("builtin") {
            let builtin = builtin
                .as_str()
                .ok_or_else(|| Error::Spec("`builtin` must be a string".into()))?
                .to_string();
            let as_u32 = |field: &str| -> Result<Option<u32>> {
                match v.get(field) {
                    None => Ok(None),
                    Some(x) => x
                        .as_u64()
                        .and_then(|n| u32::try_from(n).ok())
                        .map(Some)
                        .ok_or_else(|| Error::Spec(format!("`{field}` must be a small non-negative integer"))),
                }
            };
            let c = match v.get("c") {
                None => None,
                Some(x) => Some(
                    x.as_f64()
                        .ok_or_else(|| Error::Spec("`c` must be a number".into()))?,
                ),
            };
            Ok(FamilySpec::Builtin {
                builtin,
                n: as_u32("n")?,
                r: as_u32("r")?,
                c,
            })
        } else if v.get("omega").is_some() {
            let omega = v
                .get("omega")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Spec("`omega` must be an array".into()))?
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(Error::Spec("`omega` entries must be strings".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FamilySpec::Table {
                omega,
                c: json_f64_array(&v, "C")?,
                f: json_f64_array(&v, "F")?,
            })
        } else {
            Err(Error::Spec(
                "expected either an `omega`/`C`/`F` table or a `builtin` entry".into(),
            ))
        }
    }

    pub fn to_json(&self) -> String {
        let v = match self {
            FamilySpec::Table { omega, c, f } => serde_json::json!({
                "omega": omega,
                "C": c,
                "F": f,
            }),
            FamilySpec::Builtin { builtin, n, r, c } => {
                let mut m = serde_json::Map::new();
                m.insert("builtin".into(), Value::String(builtin.clone()));
                if let Some(n) = n {
                    m.insert("n".into(), (*n).into());
                }
                if let Some(r) = r {
                    m.insert("r".into(), (*r).into());
                }
                if let Some(c) = c {
                    m.insert("c".into(), serde_json::json!(c));
                }
                Value::Object(m)
            }
        };
        serde_json::to_string_pretty(&v).expect("spec serialization cannot fail")
    }

    pub fn from_family(fam: &FiniteExpFam) -> FamilySpec {
        FamilySpec::Table {
            omega: fam.space().labels().to_vec(),
            c: fam.c().to_vec(),
            f: fam.f().to_vec(),
        }
    }

    /// Instantiate the spec.
    pub fn build(&self) -> Result<FamilyInput> {
        match self {
            FamilySpec::Table { omega, c, f } => {
                let space = FiniteSampleSpace::new(omega.clone())?;
                Ok(FamilyInput::Finite(FiniteExpFam::new(
                    space,
                    c.clone(),
                    f.clone(),
                )?))
            }
            FamilySpec::Builtin { builtin, n, r, c } => match builtin.as_str() {
                "binomial" => {
                    let n = n.ok_or_else(|| Error::Spec("binomial requires `n`".into()))?;
                    Ok(FamilyInput::Finite(crate::reduce::binomial(n)?))
                }
                "categorical2" => Ok(FamilyInput::Finite(crate::reduce::categorical2())),
                "poisson" => Ok(FamilyInput::Analytic(crate::reduce::poisson())),
                "negative_binomial" => {
                    let r =
                        r.ok_or_else(|| Error::Spec("negative_binomial requires `r`".into()))?;
                    Ok(FamilyInput::Analytic(crate::reduce::negative_binomial(r)?))
                }
                "model" => {
                    let c = c.ok_or_else(|| Error::Spec("model requires `c`".into()))?;
                    Ok(FamilyInput::Analytic(crate::reduce::model(c)))
                }
                other => Err(Error::Spec(format!("unknown builtin `{other}`"))),
            },
        }
    }
}

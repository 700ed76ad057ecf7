//! Metric data on an interval: the Fisher/Hessian metric h, its Christoffel
//! symbol Γ = h′/(2h), the sectional curvature S = Γ′/h and the invariant
//! K = Γ² − Γ′.
//!
//! In an affine coordinate the curvature of a Hessian metric is
//! S = (1/2h)·(ln h)″; writing Γ′ = ½(ln h)″ gives the form S = Γ′/h used
//! here, which reuses the exact metric jets instead of differencing.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expfam::{AnalyticFamily, FamilyInput, FiniteExpFam, PotentialCurve};
use crate::interval::Interval;

/// h and its first three derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub h: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

type MetricJetFn = Arc<dyn Fn(f64) -> MetricJet + Send + Sync>;

/// A positive metric on an open interval with derivatives up to order 3.
#[derive(Clone)]
pub struct MetricCurve {
    domain: Interval,
    jet: MetricJetFn,
}

impl MetricCurve {
    pub fn new(domain: Interval, jet: impl Fn(f64) -> MetricJet + Send + Sync + 'static) -> Self {
        MetricCurve {
            domain,
            jet: Arc::new(jet),
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Evaluate the jet, rejecting points outside the domain and reporting
    /// loss of positivity.
    pub fn eval(&self, x: f64) -> Result<MetricJet> {
        if !self.domain.contains(x) {
            return Err(Error::Domain {
                x,
                domain: self.domain.to_string(),
            });
        }
        let jet = (self.jet)(x);
        if !(jet.h > 0.0) {
            return Err(Error::NonPositiveMetric { x, h: jet.h });
        }
        Ok(jet)
    }
}

impl std::fmt::Debug for MetricCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricCurve")
            .field("domain", &self.domain)
            .finish()
    }
}

/// The metric h = ψ″ of a potential, with h′ = ψ‴ and h″ = ψ⁗ taken from the
/// potential's jet. h‴ = ψ⁽⁵⁾ uses the potential's exact fifth derivative
/// when present, otherwise a 5-point central difference of ψ⁗ (error
/// O(step⁴); only form-fit diagnostics consume h‴).
pub fn metric_from_potential(p: &PotentialCurve) -> MetricCurve {
    let domain = p.domain();
    let p = p.clone();
    MetricCurve::new(domain, move |x| {
        let jet = p.jet_unchecked(x);
        let d3 = p.fifth_at(x).unwrap_or_else(|| {
            // Shrink the step near a finite boundary so the stencil stays inside.
            let mut eps: f64 = 1e-2;
            let dist = (x - domain.lo()).min(domain.hi() - x);
            if dist.is_finite() {
                eps = eps.min(dist / 4.0);
            }
            let f = |y: f64| p.jet_unchecked(y).d4;
            (-f(x + 2.0 * eps) + 8.0 * f(x + eps) - 8.0 * f(x - eps) + f(x - 2.0 * eps))
                / (12.0 * eps)
        });
        MetricJet {
            h: jet.d2,
            d1: jet.d3,
            d2: jet.d4,
            d3,
        }
    })
}

/// Anything that presents a metric curve: finite families (through their
/// cumulants), analytic families (closed form), or a metric itself.
pub trait HasMetric {
    fn metric_curve(&self) -> MetricCurve;
}

impl HasMetric for FiniteExpFam {
    fn metric_curve(&self) -> MetricCurve {
        metric_from_potential(&self.as_potential())
    }
}

impl HasMetric for AnalyticFamily {
    fn metric_curve(&self) -> MetricCurve {
        self.metric()
    }
}

impl HasMetric for MetricCurve {
    fn metric_curve(&self) -> MetricCurve {
        self.clone()
    }
}

impl HasMetric for FamilyInput {
    fn metric_curve(&self) -> MetricCurve {
        self.metric()
    }
}

/// Γ and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// The unique Christoffel symbol of h: Γ = h′/(2h), with
/// Γ′ = (h″h − h′²)/(2h²) and Γ″ = (h²h‴ − 3hh′h″ + 2h′³)/(2h³).
pub fn christoffel(m: &MetricCurve, x: f64) -> Result<Christoffel> {
    let MetricJet { h, d1, d2, d3 } = m.eval(x)?;
    let h2 = h * h;
    Ok(Christoffel {
        value: d1 / (2.0 * h),
        d1: (d2 * h - d1 * d1) / (2.0 * h2),
        d2: (h2 * d3 - 3.0 * h * d1 * d2 + 2.0 * d1 * d1 * d1) / (2.0 * h2 * h),
    })
}

/// Pointwise curvature data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub x: f64,
    pub h: f64,
    pub gamma: f64,
    pub gamma_d1: f64,
    /// Sectional curvature S = Γ′/h.
    pub s: f64,
    /// Toricity invariant K = Γ² − Γ′.
    pub k: f64,
}

pub fn curvature(m: &MetricCurve, x: f64) -> Result<CurvatureSample> {
    let jet = m.eval(x)?;
    let gamma = christoffel(m, x)?;
    Ok(CurvatureSample {
        x,
        h: jet.h,
        gamma: gamma.value,
        gamma_d1: gamma.d1,
        s: gamma.d1 / jet.h,
        k: gamma.value * gamma.value - gamma.d1,
    })
}

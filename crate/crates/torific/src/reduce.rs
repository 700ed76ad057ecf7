//! Reduction of finite exponential families, equivalence under the affine
//! reparametrization group, recognition of binomial-equivalent families, and
//! the built-in catalogs.
//!
//! Two families over the same sample space define the same distributions
//! exactly when `(C, F) = g·(C′, F′)` for a group element
//! `g = (a, b, c, d)`, `a ≠ 0`, acting by
//! `g·(C, F) = (C + b·F + d·1, a·F + c·1)`; the log-partition functions are
//! then related by `ψ_{C,F}(θ) = ψ_{C′,F′}(aθ + b) + cθ + d`.

use crate::error::{Error, Result};
use crate::expfam::{log_sum_exp, AnalyticFamily, FiniteExpFam, FiniteSampleSpace};

/// Absolute tolerance used to group equal F-values during reduction.
/// Input files carry decimals, so bitwise equality is too strict.
pub const GROUPING_TOL: f64 = 1e-10;

/// Residual (∞-norm) below which the two linear systems of an equivalence
/// witness are accepted as consistent.
pub const WITNESS_TOL: f64 = 1e-9;

const MIN_A: f64 = 1e-12;

/// An element (a, b, c, d) of the reparametrization group, a ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GroupElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a.abs() > MIN_A) || !a.is_finite() {
            return Err(Error::Parameter(format!("group element needs |a| > {MIN_A}, got {a}")));
        }
        if !(b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::Parameter("group element entries must be finite".into()));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub fn identity() -> Self {
        GroupElement {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
        }
    }

    /// Group law: `(self ∘ other)·(C, F) = self·(other·(C, F))`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * other.a,
            b: other.b + self.b * other.a,
            c: self.a * other.c + self.c,
            d: other.d + self.b * other.c + self.d,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a: 1.0 / self.a,
            b: -self.b / self.a,
            c: -self.c / self.a,
            d: self.b * self.c / self.a - self.d,
        }
    }

    /// Apply to a family's tables: `(C + bF + d, aF + c)`.
    pub fn apply(&self, fam: &FiniteExpFam) -> FiniteExpFam {
        let c: Vec<f64> = fam
            .c()
            .iter()
            .zip(fam.f())
            .map(|(c, f)| c + self.b * f + self.d)
            .collect();
        let f: Vec<f64> = fam.f().iter().map(|f| self.a * f + self.c).collect();
        FiniteExpFam::new(fam.space().clone(), c, f)
            .expect("group action preserves family validity")
    }
}

/// A reduced family: atoms with equal F-value merged, values sorted.
#[derive(Debug, Clone)]
pub struct ReducedFamily {
    /// The reduced family over `{0, ..., p}` with `F(k) = values[k]`,
    /// `C(k) = weights[k]`.
    pub base: FiniteExpFam,
    /// Strictly increasing distinct F-values α₀ < ... < α_p.
    pub values: Vec<f64>,
    /// Log-sums ω_k = ln Σ e^{C(x)} over each group F⁻¹(α_k).
    pub weights: Vec<f64>,
}

/// Group atoms by F-value (tolerance [`GROUPING_TOL`]) and merge their
/// weights: e^{ω_k} = Σ_{F(x)=α_k} e^{C(x)}. The log-partition function is
/// unchanged: ψ of the reduced family equals ψ of the input at every θ.
pub fn reduce(fam: &FiniteExpFam) -> Result<ReducedFamily> {
    let mut order: Vec<usize> = (0..fam.len()).collect();
    order.sort_by(|&i, &j| fam.f()[i].total_cmp(&fam.f()[j]));

    let mut values = Vec::new();
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for &i in &order {
        let v = fam.f()[i];
        match values.last() {
            Some(&last) if v - last <= GROUPING_TOL => groups.last_mut().unwrap().push(fam.c()[i]),
            _ => {
                values.push(v);
                groups.push(vec![fam.c()[i]]);
            }
        }
    }
    if values.len() < 2 {
        return Err(Error::DegenerateFamily);
    }
    let weights: Vec<f64> = groups.iter().map(|g| log_sum_exp(g)).collect();
    let base = FiniteExpFam::new(
        FiniteSampleSpace::indexed(values.len())?,
        weights.clone(),
        values.clone(),
    )?;
    Ok(ReducedFamily {
        base,
        values,
        weights,
    })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    // Least squares y ≈ slope·x + intercept via centered normal equations.
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Search for a witness `g` with `(C₁, F₁) = g·(C₂, F₂)`.
///
/// Solves the two overdetermined linear systems `F₁ = a·F₂ + c·1` and
/// `C₁ − C₂ = b·F₂ + d·1` by least squares on the design matrix `[F₂ | 1]`
/// and accepts when both residuals stay below [`WITNESS_TOL`] in ∞-norm.
/// Families over sample spaces of different sizes are never equivalent.
/// Atoms are matched by index position.
pub fn equivalent(f1: &FiniteExpFam, f2: &FiniteExpFam) -> Option<GroupElement> {
    if f1.len() != f2.len() {
        return None;
    }
    let (a, c) = linear_fit(f2.f(), f1.f());
    if !(a.abs() > MIN_A) || !a.is_finite() || !c.is_finite() {
        return None;
    }
    let dc: Vec<f64> = f1.c().iter().zip(f2.c()).map(|(x, y)| x - y).collect();
    let (b, d) = linear_fit(f2.f(), &dc);
    if !(b.is_finite() && d.is_finite()) {
        return None;
    }
    let res_f = f1
        .f()
        .iter()
        .zip(f2.f())
        .map(|(y, x)| (y - (a * x + c)).abs())
        .fold(0.0, f64::max);
    let res_c = dc
        .iter()
        .zip(f2.f())
        .map(|(y, x)| (y - (b * x + d)).abs())
        .fold(0.0, f64::max);
    if res_f < WITNESS_TOL && res_c < WITNESS_TOL {
        Some(GroupElement { a, b, c, d })
    } else {
        None
    }
}

/// Max over the grid of |ψ₁(θ) − ψ₂(aθ + b) − cθ − d| for a candidate
/// witness. For a genuine witness this vanishes identically.
pub fn check_psi_identity(
    f1: &FiniteExpFam,
    f2: &FiniteExpFam,
    g: &GroupElement,
    grid: &[f64],
) -> f64 {
    grid.iter()
        .map(|&t| {
            (f1.log_partition(t) - f2.log_partition(g.a * t + g.b) - g.c * t - g.d).abs()
        })
        .fold(0.0, f64::max)
}

/// Reduce, then test equivalence with the binomial family over the reduced
/// sample space. Success pins the curvature of the input to −1/p.
pub fn binomial_equiv(fam: &FiniteExpFam) -> Result<Option<(u32, GroupElement)>> {
    let red = reduce(fam)?;
    let p = (red.base.len() - 1) as u32;
    Ok(equivalent(&red.base, &binomial(p)?).map(|g| (p, g)))
}

// ---------------------------------------------------------------------------
// Catalogs
// ---------------------------------------------------------------------------

fn ln_binomial_coeff(n: u32, k: u32) -> f64 {
    // ln C(n, k) = Σ_{j=1..k} ln((n + 1 − j)/j); exact enough for table use.
    let k = k.min(n - k.min(n));
    (1..=k)
        .map(|j| ((f64::from(n) + 1.0 - f64::from(j)) / f64::from(j)).ln())
        .sum()
}

/// The binomial family over `{0, ..., n}`: C(k) = ln C(n, k), F(k) = k.
pub fn binomial(n: u32) -> Result<FiniteExpFam> {
    if n < 1 {
        return Err(Error::Parameter("binomial needs n >= 1".into()));
    }
    let c = (0..=n).map(|k| ln_binomial_coeff(n, k)).collect();
    let f = (0..=n).map(f64::from).collect();
    FiniteExpFam::new(FiniteSampleSpace::indexed(n as usize + 1)?, c, f)
}

/// The two-point categorical family: C = (0, 0), F = (1, 0)
/// (indicator of the first atom).
pub fn categorical2() -> FiniteExpFam {
    FiniteExpFam::new(
        FiniteSampleSpace::indexed(2).expect("size 2 is valid"),
        vec![0.0, 0.0],
        vec![1.0, 0.0],
    )
    .expect("static table is valid")
}

/// ψ(θ) = e^θ on ℝ.
pub fn poisson() -> AnalyticFamily {
    AnalyticFamily::Poisson
}

/// ψ(θ) = −r·ln(1 − e^θ) on (−∞, 0), integer r ≥ 1.
pub fn negative_binomial(r: u32) -> Result<AnalyticFamily> {
    if r < 1 {
        return Err(Error::Parameter("negative_binomial needs r >= 1".into()));
    }
    Ok(AnalyticFamily::NegativeBinomial { r })
}

/// The constant-curvature model of curvature −c, represented by its metric.
pub fn model(c: f64) -> AnalyticFamily {
    AnalyticFamily::Model { c }
}

//! Model geometry for each curvature constant c: the model manifold
//! (ℝ for c ≥ 0, the negative half line for c < 0) with metric h_c, the
//! complex space form F(c) — hyperbolic disk, plane, or projective line —
//! the covering map τ_c onto its free torus locus, deck moves, the circle
//! action, and the numerical certification residuals (pullback isometry,
//! deck invariance, equivariance, Hopf factorization).
//!
//! The tangent bundle of the model is identified with a strip of ℂ via
//! z = x + i·ẋ; its Kähler metric is block diagonal, diag(h(x), h(x)).
//! The maps are
//!
//! τ_c(z) = e^z (c < 0),  2e^{z/2} (c = 0),  [e^z, 1] (c > 0),
//!
//! with deck group z ↦ z + 2kπi·ε(c), where ε(c) = 2 for c = 0 and 1
//! otherwise. All c > 0 computations run in the affine chart
//! w = z₀/z₁ of the projective line; homogeneous pairs are normalized on
//! construction so chordal distances stay stable.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hessian::{MetricCurve, MetricJet};
use crate::interval::Interval;

/// Fiber scale ε(c): 2 for the plane (c = 0), 1 otherwise.
pub fn epsilon(c: f64) -> f64 {
    if c == 0.0 {
        2.0
    } else {
        1.0
    }
}

/// The domain of the model of curvature −c.
pub fn model_domain(c: f64) -> Interval {
    if c < 0.0 {
        Interval::NEGATIVE
    } else {
        Interval::ALL
    }
}

/// The model metric h_c with exact derivative jets:
/// 1/(c·cosh²θ) for c > 0, e^θ for c = 0, −1/(c·sinh²θ) for c < 0.
pub fn model_metric(c: f64) -> MetricCurve {
    MetricCurve::new(model_domain(c), move |x| {
        if c > 0.0 {
            let t = x.tanh();
            let ch = x.cosh();
            let h = 1.0 / (c * ch * ch);
            MetricJet {
                h,
                d1: -2.0 * h * t,
                d2: h * (6.0 * t * t - 2.0),
                d3: h * t * (16.0 - 24.0 * t * t),
            }
        } else if c == 0.0 {
            let e = x.exp();
            MetricJet {
                h: e,
                d1: e,
                d2: e,
                d3: e,
            }
        } else {
            let p = 1.0 / x.tanh();
            let sh = x.sinh();
            let h = -1.0 / (c * sh * sh);
            MetricJet {
                h,
                d1: -2.0 * h * p,
                d2: h * (6.0 * p * p - 2.0),
                d3: h * p * (16.0 - 24.0 * p * p),
            }
        }
    })
}

/// The fiber lattice of the model: translations by multiples of 2π·ε(c)
/// in the fiber direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub c: f64,
}

impl Lattice {
    pub fn new(c: f64) -> Self {
        Lattice { c }
    }

    /// The generator step 2π·ε(c) ∈ {2π, 4π}.
    pub fn step(&self) -> f64 {
        TAU * epsilon(self.c)
    }
}

/// A point of the tangent bundle in the coordinate z = x + i·ẋ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentPoint {
    pub z: Complex64,
}

impl TangentPoint {
    pub fn new(base: f64, fiber: f64) -> Self {
        TangentPoint {
            z: Complex64::new(base, fiber),
        }
    }

    pub fn base(&self) -> f64 {
        self.z.re
    }

    pub fn fiber(&self) -> f64 {
        self.z.im
    }
}

impl From<Complex64> for TangentPoint {
    fn from(z: Complex64) -> Self {
        TangentPoint { z }
    }
}

/// A point of the space form F(c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceFormPoint {
    /// Unit disk point, |w| < 1 (c < 0).
    Disk(Complex64),
    /// Plane point (c = 0).
    Plane(Complex64),
    /// Projective-line point as a normalized homogeneous pair
    /// (|z₀|² + |z₁|² = 1), identified up to a unit-modulus scalar (c > 0).
    ProjLine(Complex64, Complex64),
}

impl SpaceFormPoint {
    /// Affine chart coordinate: the disk/plane coordinate itself, or
    /// w = z₀/z₁ on the projective line (undefined at [1, 0]).
    pub fn chart(&self) -> Result<Complex64> {
        match *self {
            SpaceFormPoint::Disk(w) | SpaceFormPoint::Plane(w) => Ok(w),
            SpaceFormPoint::ProjLine(z0, z1) => {
                if z1.norm() == 0.0 {
                    Err(Error::Domain {
                        x: f64::INFINITY,
                        domain: "affine chart z1 != 0".into(),
                    })
                } else {
                    Ok(z0 / z1)
                }
            }
        }
    }
}

/// Distance between two points of the same space form: modulus distance in
/// the disk/plane, chordal distance (sine of the Fubini–Study angle) on the
/// projective line. Mixed variants are infinitely far apart.
///
/// The chordal distance is computed as the wedge norm |p₀q₁ − p₁q₀| of the
/// normalized representatives; by the Lagrange identity this equals
/// √(1 − |⟨p,q⟩|²) but stays accurate down to rounding for nearly equal
/// points, where the inner-product form loses half the digits.
pub fn distance(p: &SpaceFormPoint, q: &SpaceFormPoint) -> f64 {
    match (p, q) {
        (SpaceFormPoint::Disk(a), SpaceFormPoint::Disk(b))
        | (SpaceFormPoint::Plane(a), SpaceFormPoint::Plane(b)) => (a - b).norm(),
        (SpaceFormPoint::ProjLine(a0, a1), SpaceFormPoint::ProjLine(b0, b1)) => {
            (a0 * b1 - a1 * b0).norm()
        }
        _ => f64::INFINITY,
    }
}

/// The covering map τ_c onto the free locus of F(c).
///
/// For c < 0 the base must satisfy Re z < 0 (the model domain); the image
/// then lies in the punctured disk. For c > 0 the homogeneous pair
/// (e^z, 1) is returned normalized (stably, for any Re z).
pub fn tau(c: f64, z: TangentPoint) -> Result<SpaceFormPoint> {
    let zc = z.z;
    if c < 0.0 && zc.re >= 0.0 {
        return Err(Error::Domain {
            x: zc.re,
            domain: "Re z < 0 (model domain for c < 0)".into(),
        });
    }
    Ok(if c < 0.0 {
        SpaceFormPoint::Disk(zc.exp())
    } else if c == 0.0 {
        SpaceFormPoint::Plane(2.0 * (zc / 2.0).exp())
    } else {
        let (x, y) = (zc.re, zc.im);
        let phase = Complex64::new(0.0, y).exp();
        if x <= 0.0 {
            let s = (1.0 + (2.0 * x).exp()).sqrt();
            SpaceFormPoint::ProjLine(x.exp() * phase / s, Complex64::new(1.0 / s, 0.0))
        } else {
            let s = (1.0 + (-2.0 * x).exp()).sqrt();
            SpaceFormPoint::ProjLine(phase / s, Complex64::new((-x).exp() / s, 0.0))
        }
    })
}

/// The circle action on F(c): multiplication by e^{2iπt} on the disk/plane
/// coordinate, or on the first homogeneous coordinate of the projective
/// line. t and t + 1 act identically.
pub fn torus_act(t: f64, p: &SpaceFormPoint) -> SpaceFormPoint {
    let rot = Complex64::new(0.0, TAU * t).exp();
    match *p {
        SpaceFormPoint::Disk(w) => SpaceFormPoint::Disk(rot * w),
        SpaceFormPoint::Plane(w) => SpaceFormPoint::Plane(rot * w),
        SpaceFormPoint::ProjLine(z0, z1) => SpaceFormPoint::ProjLine(rot * z0, z1),
    }
}

/// The k-th deck move: z ↦ z + 2kπi·ε(c). Composing with τ_c leaves the
/// image fixed.
pub fn deck(c: f64, k: i64, z: TangentPoint) -> TangentPoint {
    TangentPoint {
        z: z.z + Complex64::new(0.0, TAU * epsilon(c) * k as f64),
    }
}

/// The Kähler metric of the tangent bundle at z, in the (x, ẋ) frame:
/// diag(h(x), h(x)), independent of the fiber value.
pub fn dombrowski_metric(h: &MetricCurve, z: TangentPoint) -> Result<[[f64; 2]; 2]> {
    let v = h.eval(z.base())?.h;
    Ok([[v, 0.0], [0.0, v]])
}

/// The space-form metric at p applied to two tangent vectors expressed in
/// the affine chart:
/// Re(ū·v)·(−4/c)/(1 − |w|²)² on the disk, Re(ū·v) on the plane, and the
/// Fubini–Study chart expression Re(ū·v)·(4/c)/(1 + |w|²)² on the
/// projective line (normalized so the holomorphic sectional curvature is c).
pub fn target_metric(c: f64, p: &SpaceFormPoint, u: Complex64, v: Complex64) -> Result<f64> {
    let w = p.chart()?;
    let re = (u.conj() * v).re;
    Ok(match p {
        SpaceFormPoint::Disk(_) => {
            let n2 = w.norm_sqr();
            if n2 >= 1.0 {
                return Err(Error::Domain {
                    x: n2.sqrt(),
                    domain: "|w| < 1".into(),
                });
            }
            let d = 1.0 - n2;
            re * (-4.0 / c) / (d * d)
        }
        SpaceFormPoint::Plane(_) => re,
        SpaceFormPoint::ProjLine(..) => {
            let d = 1.0 + w.norm_sqr();
            re * (4.0 / c) / (d * d)
        }
    })
}

/// Derivative of τ_c in the affine chart: e^z for c ≠ 0 (chart maps are
/// z ↦ e^z), e^{z/2} for c = 0 (the chart map is z ↦ 2e^{z/2}).
pub fn tau_chart_derivative(c: f64, z: TangentPoint) -> Complex64 {
    if c == 0.0 {
        (z.z / 2.0).exp()
    } else {
        z.z.exp()
    }
}

/// Max deviation, over the grid and over the frame pairs (u, v) ∈ {1, i}²,
/// between the pulled-back space-form metric g(τ_*u, τ_*v) and the
/// block-diagonal metric diag(h, h) of the tangent bundle. For h = h_c this
/// residual is zero up to rounding: τ_c is a local isometry.
pub fn pullback_residual(c: f64, h: &MetricCurve, grid: &[TangentPoint]) -> Result<f64> {
    const FRAME: [Complex64; 2] = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
    let mut max = 0.0_f64;
    for &z in grid {
        let g = dombrowski_metric(h, z)?;
        let p = tau(c, z)?;
        let dz = tau_chart_derivative(c, z);
        for (i, &u) in FRAME.iter().enumerate() {
            for (j, &v) in FRAME.iter().enumerate() {
                let pulled = target_metric(c, &p, dz * u, dz * v)?;
                max = max.max((pulled - g[i][j]).abs());
            }
        }
    }
    Ok(max)
}

/// The sphere-lift of τ_c for c > 0: F(z) = (1 + e^{2·Re z})^{−1/2}·(e^z, 1).
fn sphere_lift_derivative(z: Complex64, u: Complex64) -> (Complex64, Complex64) {
    let e2x = (2.0 * z.re).exp();
    let s = (1.0 + e2x).sqrt();
    let ez = z.exp();
    let correction = e2x * u.re / (s * s * s);
    (u * ez / s - correction * ez, -correction * Complex64::ONE)
}

/// The canonical symplectic pairing Im⟨F_*u, F_*v⟩ of the sphere lift,
/// computed from the closed-form derivative of F. Equals
/// (Re u·Im v − Im u·Re v)/(4·cosh²(Re z)) identically.
pub fn hopf_pullback(z: Complex64, u: Complex64, v: Complex64) -> f64 {
    let (a0, a1) = sphere_lift_derivative(z, u);
    let (b0, b1) = sphere_lift_derivative(z, v);
    (a0.conj() * b0 + a1.conj() * b1).im
}

/// The closed form the Hopf pullback must reproduce.
pub fn hopf_closed_form(z: Complex64, u: Complex64, v: Complex64) -> f64 {
    let ch = z.re.cosh();
    (u.re * v.im - u.im * v.re) / (4.0 * ch * ch)
}

/// Distance between τ_c(z + 2πi·ε(c)·t) and the t-rotation of τ_c(z).
/// Fiber translation by the scaled lattice coordinate matches the circle
/// action exactly; the residual is rounding only.
pub fn equivariance_residual(c: f64, t: f64, z: TangentPoint) -> Result<f64> {
    let shifted = TangentPoint {
        z: z.z + Complex64::new(0.0, TAU * epsilon(c) * t),
    };
    let lhs = tau(c, shifted)?;
    let rhs = torus_act(t, &tau(c, z)?);
    Ok(distance(&lhs, &rhs))
}

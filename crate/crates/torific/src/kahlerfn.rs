//! Kähler functions on the tangent bundle of a 1-D Hessian manifold.
//!
//! In the coordinates (x, ẋ) a smooth f is Kähler exactly when
//!
//!   f_xx − f_ẋẋ = 2Γ·f_x   and   f_xẋ = Γ·f_ẋ,
//!
//! with Γ the Christoffel symbol of the metric. For each canonical
//! constant-curvature form the solution space is 4-dimensional, attaining
//! the dimension bound ½·n(n+1)+1 = 4 for a surface; [`basis_for`] returns a
//! closed-form basis. Whether that basis separates points of the tangent
//! bundle (or instead is invariant under a fiber translation lattice)
//! decides toricity.
//!
//! The catalog rows carry arbitrary constant fiber phases; since the PDE
//! coefficients depend on x only, any phase spans the same space. The
//! phase is set to 0 here.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Matrix4;

use crate::classify::{CanonicalForm, FormKind};
use crate::error::{Error, Result};
use crate::hessian::{christoffel, MetricCurve};

/// Minimum number of samples for a meaningful Gram rank.
pub const MIN_GRAM_SAMPLES: usize = 16;

/// Separation threshold: a pair of points counts as separated when some
/// basis function differs by more than this.
pub const SEPARATION_TOL: f64 = 1e-9;

/// Step for the finite-difference jets of user-supplied candidates.
pub const FD_STEP: f64 = 1e-4;

/// Value and derivatives of a candidate function at (x, ẋ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateJet {
    pub f: f64,
    pub fx: f64,
    pub fdx: f64,
    pub fxx: f64,
    pub fxdx: f64,
    pub fdxdx: f64,
}

type CandidateFn = Arc<dyn Fn(f64, f64) -> CandidateJet + Send + Sync>;

/// A candidate Kähler function on the tangent bundle with second-order jets.
#[derive(Clone)]
pub struct KahlerCandidate {
    label: String,
    eval: CandidateFn,
}

impl KahlerCandidate {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(f64, f64) -> CandidateJet + Send + Sync + 'static,
    ) -> Self {
        KahlerCandidate {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// The constant function 1.
    pub fn one() -> Self {
        KahlerCandidate::new("1", |_, _| CandidateJet {
            f: 1.0,
            fx: 0.0,
            fdx: 0.0,
            fxx: 0.0,
            fxdx: 0.0,
            fdxdx: 0.0,
        })
    }

    /// Product A(x)·B(ẋ) from one-variable jets (value, d1, d2).
    fn separable(
        label: impl Into<String>,
        a: impl Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
        b: impl Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
    ) -> Self {
        KahlerCandidate::new(label, move |x, xd| {
            let (av, a1, a2) = a(x);
            let (bv, b1, b2) = b(xd);
            CandidateJet {
                f: av * bv,
                fx: a1 * bv,
                fdx: av * b1,
                fxx: a2 * bv,
                fxdx: a1 * b1,
                fdxdx: av * b2,
            }
        })
    }

    /// Wrap a plain value function; jets come from 5-point central
    /// differences with step [`FD_STEP`] (derivative consistency then holds
    /// to O(step²) only).
    pub fn from_value_fn(
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let f = Arc::new(f);
        KahlerCandidate::new(label, move |x, xd| {
            let h = FD_STEP;
            let d1 = |g: &dyn Fn(f64) -> f64| {
                (-g(2.0 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2.0 * h)) / (12.0 * h)
            };
            let d2 = |g: &dyn Fn(f64) -> f64| {
                (-g(2.0 * h) + 16.0 * g(h) - 30.0 * g(0.0) + 16.0 * g(-h) - g(-2.0 * h))
                    / (12.0 * h * h)
            };
            let fb = f.clone();
            let along_x = move |e: f64| fb(x + e, xd);
            let fb = f.clone();
            let along_dx = move |e: f64| fb(x, xd + e);
            let fb = f.clone();
            let mixed = move |e: f64| {
                (fb(x + e, xd + e) - fb(x + e, xd - e) - fb(x - e, xd + e) + fb(x - e, xd - e))
                    / (4.0 * e * e)
            };
            CandidateJet {
                f: f(x, xd),
                fx: d1(&along_x),
                fdx: d1(&along_dx),
                fxx: d2(&along_x),
                fxdx: mixed(h),
                fdxdx: d2(&along_dx),
            }
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64, xd: f64) -> CandidateJet {
        (self.eval)(x, xd)
    }

    pub fn value(&self, x: f64, xd: f64) -> f64 {
        self.eval(x, xd).f
    }
}

impl std::fmt::Debug for KahlerCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KahlerCandidate({})", self.label)
    }
}

/// A basis of the Kähler function space attached to a canonical form.
#[derive(Debug, Clone)]
pub struct KahlerBasis {
    pub form: CanonicalForm,
    /// Exactly four functions; the first is the constant 1.
    pub functions: Vec<KahlerCandidate>,
    /// Fiber translation period under which every basis function is
    /// invariant; present exactly for the toric forms.
    pub fiber_period: Option<f64>,
}

/// Residuals (r₁, r₂) of the Kähler system at a point:
/// r₁ = f_xx − f_ẋẋ − 2Γ·f_x and r₂ = f_xẋ − Γ·f_ẋ.
pub fn pde_residual(
    f: &KahlerCandidate,
    m: &MetricCurve,
    x: f64,
    xd: f64,
) -> Result<(f64, f64)> {
    let gamma = christoffel(m, x)?.value;
    let j = f.eval(x, xd);
    Ok((
        j.fxx - j.fdxdx - 2.0 * gamma * j.fx,
        j.fxdx - gamma * j.fdx,
    ))
}

fn cos_jet(s: f64) -> impl Fn(f64) -> (f64, f64, f64) {
    move |t| {
        let u = s * t;
        (u.cos(), -s * u.sin(), -s * s * u.cos())
    }
}

fn sin_jet(s: f64) -> impl Fn(f64) -> (f64, f64, f64) {
    move |t| {
        let u = s * t;
        (u.sin(), s * u.cos(), -s * s * u.sin())
    }
}

/// The closed-form basis attached to a canonical form (fiber phase 0).
///
/// Periods: 4π/|a| for the exponential row, 2π/√a for the sinh and cosh
/// rows, none otherwise.
pub fn basis_for(form: &CanonicalForm) -> KahlerBasis {
    let one = KahlerCandidate::one();
    let (functions, fiber_period) = match form.kind {
        FormKind::Exp { a, .. } => {
            let half = a / 2.0;
            (
                vec![
                    one,
                    KahlerCandidate::separable(
                        "exp(a x)",
                        move |x| {
                            let e = (a * x).exp();
                            (e, a * e, a * a * e)
                        },
                        |_| (1.0, 0.0, 0.0),
                    ),
                    KahlerCandidate::separable(
                        "cos(a v/2) exp(a x/2)",
                        move |x| {
                            let e = (half * x).exp();
                            (e, half * e, half * half * e)
                        },
                        cos_jet(half),
                    ),
                    KahlerCandidate::separable(
                        "sin(a v/2) exp(a x/2)",
                        move |x| {
                            let e = (half * x).exp();
                            (e, half * e, half * half * e)
                        },
                        sin_jet(half),
                    ),
                ],
                Some(4.0 * PI / a.abs()),
            )
        }
        FormKind::Const { .. } => (
            vec![
                one,
                KahlerCandidate::new("x", |x, _| CandidateJet {
                    f: x,
                    fx: 1.0,
                    fdx: 0.0,
                    fxx: 0.0,
                    fxdx: 0.0,
                    fdxdx: 0.0,
                }),
                KahlerCandidate::new("v", |_, xd| CandidateJet {
                    f: xd,
                    fx: 0.0,
                    fdx: 1.0,
                    fxx: 0.0,
                    fxdx: 0.0,
                    fdxdx: 0.0,
                }),
                KahlerCandidate::new("(x^2 + v^2)/2", |x, xd| CandidateJet {
                    f: (x * x + xd * xd) / 2.0,
                    fx: x,
                    fdx: xd,
                    fxx: 1.0,
                    fxdx: 0.0,
                    fdxdx: 1.0,
                }),
            ],
            None,
        ),
        FormKind::CosSq { a, b } => {
            let s = a.sqrt();
            let sec = move |x: f64| {
                let u = s * x + b;
                let sec = 1.0 / u.cos();
                let tan = u.tan();
                (
                    sec,
                    s * sec * tan,
                    a * sec * (tan * tan + sec * sec),
                )
            };
            (
                vec![
                    one,
                    KahlerCandidate::new("tan(s x + b)", move |x, _| {
                        let u = s * x + b;
                        let sec2 = 1.0 / (u.cos() * u.cos());
                        CandidateJet {
                            f: u.tan(),
                            fx: s * sec2,
                            fdx: 0.0,
                            fxx: 2.0 * a * sec2 * u.tan(),
                            fxdx: 0.0,
                            fdxdx: 0.0,
                        }
                    }),
                    KahlerCandidate::separable("cosh(s v)/cos(s x + b)", sec, move |t| {
                        let u = s * t;
                        (u.cosh(), s * u.sinh(), a * u.cosh())
                    }),
                    KahlerCandidate::separable("sinh(s v)/cos(s x + b)", sec, move |t| {
                        let u = s * t;
                        (u.sinh(), s * u.cosh(), a * u.sinh())
                    }),
                ],
                None,
            )
        }
        FormKind::SinhSq { a, b, .. } => {
            let s = a.sqrt();
            let csch = move |x: f64| {
                let u = s * x + b;
                let csch = 1.0 / u.sinh();
                let coth = 1.0 / u.tanh();
                (
                    csch,
                    -s * csch * coth,
                    a * csch * (2.0 * coth * coth - 1.0),
                )
            };
            (
                vec![
                    one,
                    KahlerCandidate::new("coth(s x + b)", move |x, _| {
                        let u = s * x + b;
                        let coth = 1.0 / u.tanh();
                        let d = 1.0 - coth * coth;
                        CandidateJet {
                            f: coth,
                            fx: s * d,
                            fdx: 0.0,
                            fxx: -2.0 * a * coth * d,
                            fxdx: 0.0,
                            fdxdx: 0.0,
                        }
                    }),
                    KahlerCandidate::separable("cos(s v)/sinh(s x + b)", csch, cos_jet(s)),
                    KahlerCandidate::separable("sin(s v)/sinh(s x + b)", csch, sin_jet(s)),
                ],
                Some(2.0 * PI / s),
            )
        }
        FormKind::InvSq { b } => (
            vec![
                one,
                KahlerCandidate::new("1/(x + b)", move |x, _| {
                    let s = x + b;
                    CandidateJet {
                        f: 1.0 / s,
                        fx: -1.0 / (s * s),
                        fdx: 0.0,
                        fxx: 2.0 / (s * s * s),
                        fxdx: 0.0,
                        fdxdx: 0.0,
                    }
                }),
                KahlerCandidate::new("v/(x + b)", move |x, xd| {
                    let s = x + b;
                    CandidateJet {
                        f: xd / s,
                        fx: -xd / (s * s),
                        fdx: 1.0 / s,
                        fxx: 2.0 * xd / (s * s * s),
                        fxdx: -1.0 / (s * s),
                        fdxdx: 0.0,
                    }
                }),
                KahlerCandidate::new("(x^2 + v^2)/(x + b)", move |x, xd| {
                    let s = x + b;
                    let q = x * x + xd * xd;
                    CandidateJet {
                        f: q / s,
                        fx: 2.0 * x / s - q / (s * s),
                        fdx: 2.0 * xd / s,
                        fxx: 2.0 / s - 4.0 * x / (s * s) + 2.0 * q / (s * s * s),
                        fxdx: -2.0 * xd / (s * s),
                        fdxdx: 2.0 / s,
                    }
                }),
            ],
            None,
        ),
        FormKind::CoshSq { a, b } => {
            let s = a.sqrt();
            let sech = move |x: f64| {
                let u = s * x + b;
                let sech = 1.0 / u.cosh();
                let tanh = u.tanh();
                (
                    sech,
                    -s * sech * tanh,
                    a * sech * (tanh * tanh - sech * sech),
                )
            };
            (
                vec![
                    one,
                    KahlerCandidate::new("tanh(s x + b)", move |x, _| {
                        let u = s * x + b;
                        let t = u.tanh();
                        let d = 1.0 - t * t;
                        CandidateJet {
                            f: t,
                            fx: s * d,
                            fdx: 0.0,
                            fxx: -2.0 * a * t * d,
                            fxdx: 0.0,
                            fdxdx: 0.0,
                        }
                    }),
                    KahlerCandidate::separable("cos(s v)/cosh(s x + b)", sech, cos_jet(s)),
                    KahlerCandidate::separable("sin(s v)/cosh(s x + b)", sech, sin_jet(s)),
                ],
                Some(2.0 * PI / s),
            )
        }
    };
    KahlerBasis {
        form: *form,
        functions,
        fiber_period,
    }
}

/// Max over basis functions and samples of max(|r₁|, |r₂|).
pub fn verify_basis(
    basis: &KahlerBasis,
    m: &MetricCurve,
    samples: &[(f64, f64)],
) -> Result<f64> {
    let mut max = 0.0_f64;
    for f in &basis.functions {
        for &(x, xd) in samples {
            let (r1, r2) = pde_residual(f, m, x, xd)?;
            max = max.max(r1.abs()).max(r2.abs());
        }
    }
    Ok(max)
}

/// Rank of the 4×4 Gram matrix of the sampled function vectors.
///
/// Columns are normalized before forming the Gram matrix; eigenvalues below
/// 1e−8 of the largest do not count toward the rank.
pub fn gram_rank(functions: &[KahlerCandidate], samples: &[(f64, f64)]) -> Result<usize> {
    if samples.len() < MIN_GRAM_SAMPLES {
        return Err(Error::DegenerateSampling {
            need: MIN_GRAM_SAMPLES,
            got: samples.len(),
        });
    }
    assert_eq!(functions.len(), 4, "gram_rank expects a 4-function basis");
    let mut cols: Vec<Vec<f64>> = functions
        .iter()
        .map(|f| samples.iter().map(|&(x, xd)| f.value(x, xd)).collect())
        .collect();
    for col in &mut cols {
        let n = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.0 {
            col.iter_mut().for_each(|v| *v /= n);
        }
    }
    let gram = Matrix4::from_fn(|i, j| {
        cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum::<f64>()
    });
    let eigs = gram.symmetric_eigenvalues();
    let max = eigs.iter().cloned().fold(0.0, f64::max);
    Ok(eigs.iter().filter(|&&e| e > 1e-8 * max).count())
}

/// A pair of points of the tangent bundle, each as (x, ẋ).
pub type PointPair = ((f64, f64), (f64, f64));

/// True when every sampled pair of distinct points is told apart by some
/// basis function (difference above [`SEPARATION_TOL`]).
///
/// Callers probing toricity should include fiber-translate pairs
/// (x, ẋ) vs (x, ẋ + T) for the candidate periods T: a lattice-invariant
/// basis fails exactly on those.
pub fn separates_points(functions: &[KahlerCandidate], pairs: &[PointPair]) -> bool {
    pairs.iter().all(|&((px, pv), (qx, qv))| {
        functions
            .iter()
            .any(|f| (f.value(px, pv) - f.value(qx, qv)).abs() > SEPARATION_TOL)
    })
}

/// Max |f(x, ẋ + t) − f(x, ẋ)| over the basis functions and samples.
pub fn lattice_invariance_residual(
    functions: &[KahlerCandidate],
    t: f64,
    samples: &[(f64, f64)],
) -> f64 {
    let mut max = 0.0_f64;
    for f in functions {
        for &(x, xd) in samples {
            max = max.max((f.value(x, xd + t) - f.value(x, xd)).abs());
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Sign;
    use crate::reduce::poisson;

    fn form(kind: FormKind, lambda: f64) -> CanonicalForm {
        CanonicalForm { kind, lambda }
    }

    fn all_forms() -> Vec<CanonicalForm> {
        vec![
            form(FormKind::Exp { a: 1.3, b: 0.4 }, 0.0),
            form(FormKind::Const { b: 0.9 }, 0.0),
            form(FormKind::CosSq { a: 0.7, b: 0.2 }, 1.5),
            form(
                FormKind::SinhSq {
                    a: 1.1,
                    b: 0.3,
                    eps: Sign::Plus,
                },
                0.5,
            ),
            form(FormKind::InvSq { b: 2.0 }, 0.8),
            form(FormKind::CoshSq { a: 0.6, b: -0.5 }, -2.0),
        ]
    }

    fn interior_samples(m: &MetricCurve, n: usize) -> Vec<(f64, f64)> {
        // Low-discrepancy scatter: rank checks need points in general
        // position, not on a curve.
        let grid = m.domain().grid(-2.0, 2.0, n).unwrap();
        grid.iter()
            .enumerate()
            .map(|(i, &x)| {
                let t = (i as f64 * 0.618_033_988_749_895).fract();
                (x, -3.0 + 6.0 * t)
            })
            .collect()
    }

    #[test]
    fn flat_quadratic_solves_the_system() {
        let cf = form(FormKind::Const { b: 0.0 }, 0.0);
        let basis = basis_for(&cf);
        let m = cf.metric();
        let (r1, r2) = pde_residual(&basis.functions[3], &m, 0.7, -1.2).unwrap();
        assert_eq!((r1, r2), (0.0, 0.0));
        let (r1, r2) = pde_residual(&KahlerCandidate::one(), &m, 0.3, 0.4).unwrap();
        assert_eq!((r1, r2), (0.0, 0.0));
    }

    #[test]
    fn product_coordinate_fails_the_system() {
        // f = x·v against the Γ = 1/2 metric: r₂ = 1 − x/2, generically nonzero.
        let f = KahlerCandidate::new("x v", |x, xd| CandidateJet {
            f: x * xd,
            fx: xd,
            fdx: x,
            fxx: 0.0,
            fxdx: 1.0,
            fdxdx: 0.0,
        });
        let m = poisson().metric();
        let (_, r2) = pde_residual(&f, &m, 3.0, 1.0).unwrap();
        assert!(r2.abs() > 0.1);
    }

    #[test]
    fn every_catalog_row_solves_its_system() {
        for cf in all_forms() {
            let basis = basis_for(&cf);
            assert_eq!(basis.functions.len(), 4);
            let m = cf.metric();
            let samples = interior_samples(&m, 100);
            let r = verify_basis(&basis, &m, &samples).unwrap();
            assert!(r < 1e-8, "{}: residual {r}", cf.tag());
            assert_eq!(basis.fiber_period.is_some(), cf.is_toric());
        }
    }

    #[test]
    fn wrong_metric_rejects_a_basis() {
        let exp = form(FormKind::Exp { a: 1.0, b: 0.0 }, 0.0);
        let flat = form(FormKind::Const { b: 0.0 }, 0.0);
        let basis = basis_for(&exp);
        let m = flat.metric();
        let samples = interior_samples(&m, 50);
        let r = verify_basis(&basis, &m, &samples).unwrap();
        assert!(r > 0.1, "negative control residual {r}");
    }

    #[test]
    fn catalog_rows_have_full_gram_rank() {
        for cf in all_forms() {
            let m = cf.metric();
            let samples = interior_samples(&m, 40);
            let rank = gram_rank(&basis_for(&cf).functions, &samples).unwrap();
            assert_eq!(rank, 4, "{}", cf.tag());
        }
    }

    #[test]
    fn degenerate_function_lists_drop_rank() {
        let ones: Vec<_> = (0..4).map(|_| KahlerCandidate::one()).collect();
        let samples: Vec<_> = (0..20)
            .map(|i| {
                let t = (i as f64 * 0.618_033_988_749_895).fract();
                (i as f64 * 0.1, 1.0 - 2.0 * t)
            })
            .collect();
        assert_eq!(gram_rank(&ones, &samples).unwrap(), 1);

        let x = KahlerCandidate::from_value_fn("x", |x, _| x);
        let aff = KahlerCandidate::from_value_fn("2x+3", |x, _| 2.0 * x + 3.0);
        let v = KahlerCandidate::from_value_fn("v", |_, xd| xd);
        let funcs = vec![KahlerCandidate::one(), x, aff, v];
        assert_eq!(gram_rank(&funcs, &samples).unwrap(), 3);

        assert!(matches!(
            gram_rank(&funcs, &samples[..10]),
            Err(Error::DegenerateSampling { .. })
        ));
    }

    #[test]
    fn flat_basis_separates_but_periodic_bases_do_not() {
        let flat = basis_for(&form(FormKind::Const { b: 0.0 }, 0.0));
        let pairs = [((0.1, 0.2), (0.1, 6.4)), ((0.0, 0.0), (0.5, 0.0))];
        assert!(separates_points(&flat.functions, &pairs));

        // Every toric row is blind to a full fiber-period translation.
        for cf in all_forms().into_iter().filter(|f| f.is_toric()) {
            let basis = basis_for(&cf);
            let t = basis.fiber_period.unwrap();
            let x = match cf.kind {
                FormKind::SinhSq { .. } => -1.0,
                _ => 0.3,
            };
            let translated = [((x, 0.1), (x, 0.1 + t))];
            assert!(
                !separates_points(&basis.functions, &translated),
                "{} must not separate period translates",
                cf.tag()
            );
        }

        // The non-toric rows tell generic pairs apart, including 2π fiber
        // translates.
        for cf in all_forms().into_iter().filter(|f| !f.is_toric()) {
            let m = cf.metric();
            let samples = interior_samples(&m, 20);
            let pairs: Vec<_> = samples
                .iter()
                .map(|&(x, xd)| ((x, xd), (x, xd + 2.0 * PI)))
                .chain(samples.windows(2).map(|w| (w[0], w[1])))
                .collect();
            assert!(
                separates_points(&basis_for(&cf).functions, &pairs),
                "{} must separate points",
                cf.tag()
            );
        }
    }

    #[test]
    fn phase_shifted_rows_also_solve_the_system() {
        // The catalog fixes the fiber phase to 0; any constant phase inside
        // the cos/sin factors spans the same solution space because the
        // system's coefficients depend on x only. Spot-check the shifted
        // variants of the sinh and cosh rows.
        let a = 0.9_f64;
        let b = 0.3;
        let s = a.sqrt();

        let cosh_form = form(FormKind::CoshSq { a, b }, -1.3);
        let shifted = KahlerCandidate::new("cos(s v + b)/cosh(s x + b)", move |x, xd| {
            let u = s * x + b;
            let sech = 1.0 / u.cosh();
            let tanh = u.tanh();
            let (av, a1, a2) = (sech, -s * sech * tanh, a * sech * (tanh * tanh - sech * sech));
            let w = s * xd + b;
            let (bv, b1, b2) = (w.cos(), -s * w.sin(), -a * w.cos());
            CandidateJet {
                f: av * bv,
                fx: a1 * bv,
                fdx: av * b1,
                fxx: a2 * bv,
                fxdx: a1 * b1,
                fdxdx: av * b2,
            }
        });
        let m = cosh_form.metric();
        for &(x, xd) in &interior_samples(&m, 25) {
            let (r1, r2) = pde_residual(&shifted, &m, x, xd).unwrap();
            assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12, "({x}, {xd}): {r1}, {r2}");
        }

        let sinh_form = form(
            FormKind::SinhSq {
                a,
                b,
                eps: Sign::Plus,
            },
            0.7,
        );
        let shifted = KahlerCandidate::new("sin(s v + b)/sinh(s x + b)", move |x, xd| {
            let u = s * x + b;
            let csch = 1.0 / u.sinh();
            let coth = 1.0 / u.tanh();
            let (av, a1, a2) = (
                csch,
                -s * csch * coth,
                a * csch * (2.0 * coth * coth - 1.0),
            );
            let w = s * xd + b;
            let (bv, b1, b2) = (w.sin(), s * w.cos(), -a * w.sin());
            CandidateJet {
                f: av * bv,
                fx: a1 * bv,
                fdx: av * b1,
                fxx: a2 * bv,
                fxdx: a1 * b1,
                fdxdx: av * b2,
            }
        });
        let m = sinh_form.metric();
        for &(x, xd) in &interior_samples(&m, 25) {
            let (r1, r2) = pde_residual(&shifted, &m, x, xd).unwrap();
            assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12, "({x}, {xd}): {r1}, {r2}");
        }
    }

    #[test]
    fn lattice_invariance_at_the_period() {
        let samples: Vec<_> = (0..25)
            .map(|i| (-1.0 + 0.08 * i as f64, -2.0 + 0.16 * i as f64))
            .collect();
        let exp = basis_for(&form(FormKind::Exp { a: 1.7, b: 0.0 }, 0.0));
        let t = exp.fiber_period.unwrap();
        assert!(lattice_invariance_residual(&exp.functions, t, &samples) < 1e-12);
        assert!(lattice_invariance_residual(&exp.functions, t / 2.0, &samples) > 0.5);

        let cosh = basis_for(&form(FormKind::CoshSq { a: 0.8, b: 0.1 }, -1.0));
        let t = cosh.fiber_period.unwrap();
        assert!(lattice_invariance_residual(&cosh.functions, t, &samples) < 1e-12);
    }

    #[test]
    fn finite_difference_jets_agree_with_analytic_ones() {
        let cf = form(FormKind::CoshSq { a: 0.9, b: 0.2 }, -1.0);
        let s = 0.9_f64.sqrt();
        let analytic = &basis_for(&cf).functions[2];
        let fd = KahlerCandidate::from_value_fn("cos/cosh fd", move |x, xd| {
            (s * xd).cos() / (s * x + 0.2).cosh()
        });
        let (x, xd) = (0.4, -0.8);
        let ja = analytic.eval(x, xd);
        let jf = fd.eval(x, xd);
        for (a, b) in [
            (ja.f, jf.f),
            (ja.fx, jf.fx),
            (ja.fdx, jf.fdx),
            (ja.fxx, jf.fxx),
            (ja.fxdx, jf.fxdx),
            (ja.fdxdx, jf.fdxdx),
        ] {
            assert!((a - b).abs() < 1e-5 * a.abs().max(1.0), "{a} vs {b}");
        }
    }
}

//! Property tests for the family/reduction layer: normalization and
//! stability of the log-partition function, cumulants against a
//! finite-difference oracle, shift covariance, reduction invariance and
//! transitivity of the equivalence witness search.

use proptest::prelude::*;

use torific::reduce::{check_psi_identity, equivalent, reduce, GroupElement};
use torific::spaceform::{distance, tau, torus_act, TangentPoint};
use torific::{FiniteExpFam, FiniteSampleSpace};

fn family() -> impl Strategy<Value = FiniteExpFam> {
    (2usize..=8)
        .prop_flat_map(|size| {
            (
                prop::collection::vec(-5.0..5.0f64, size),
                prop::collection::vec(-5.0..5.0f64, size),
            )
        })
        .prop_filter_map("needs a non-constant statistic", |(c, f)| {
            FiniteExpFam::new(FiniteSampleSpace::indexed(c.len()).ok()?, c, f).ok()
        })
}

fn group_element() -> impl Strategy<Value = GroupElement> {
    (
        prop_oneof![0.25..4.0f64, -4.0..-0.25f64],
        -2.0..2.0f64,
        -2.0..2.0f64,
        -2.0..2.0f64,
    )
        .prop_map(|(a, b, c, d)| GroupElement::new(a, b, c, d).unwrap())
}

/// O(h⁶) central stencils for the first four derivatives (checked against
/// monomials: each row reproduces xᵏ exactly and annihilates degrees ≤ k+5).
fn central_derivative(f: impl Fn(f64) -> f64, x: f64, order: usize, h: f64) -> f64 {
    let g = |k: i32| f(x + h * f64::from(k));
    match order {
        1 => (-g(-3) + 9.0 * g(-2) - 45.0 * g(-1) + 45.0 * g(1) - 9.0 * g(2) + g(3)) / (60.0 * h),
        2 => {
            (2.0 * g(-3) - 27.0 * g(-2) + 270.0 * g(-1) - 490.0 * g(0) + 270.0 * g(1)
                - 27.0 * g(2)
                + 2.0 * g(3))
                / (180.0 * h * h)
        }
        3 => {
            (-7.0 * g(-4) + 72.0 * g(-3) - 338.0 * g(-2) + 488.0 * g(-1) - 488.0 * g(1)
                + 338.0 * g(2)
                - 72.0 * g(3)
                + 7.0 * g(4))
                / (240.0 * h * h * h)
        }
        4 => {
            (7.0 * g(-4) - 96.0 * g(-3) + 676.0 * g(-2) - 1952.0 * g(-1) + 2730.0 * g(0)
                - 1952.0 * g(1)
                + 676.0 * g(2)
                - 96.0 * g(3)
                + 7.0 * g(4))
                / (240.0 * h * h * h * h)
        }
        _ => unreachable!(),
    }
}

proptest! {
    #[test]
    fn density_is_normalized_and_psi_finite(fam in family(), theta in -30.0..30.0f64) {
        let p = fam.density(theta);
        prop_assert!(p.iter().all(|&v| v > 0.0));
        let sum: f64 = p.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum = {sum}");
        prop_assert!(fam.log_partition(theta).is_finite());
    }

    #[test]
    fn cumulants_match_finite_differences(fam in family(), theta in -2.0..2.0f64) {
        let jet = fam.cumulants(theta);
        let psi = |t: f64| fam.log_partition(t);
        let sigma = jet.d2.sqrt();
        for (order, exact) in [(1, jet.d1), (2, jet.d2), (3, jet.d3), (4, jet.d4)] {
            let fd = central_derivative(psi, theta, order, 1e-2);
            // Relative to the natural scale of the k-th cumulant, σᵏ: the
            // k-th cumulant itself can cross zero while the derivative is
            // genuinely of that size.
            let tol = 1e-5 * exact.abs().max(sigma.powi(order as i32)).max(1.0);
            prop_assert!(
                (fd - exact).abs() < tol,
                "order {order}: fd {fd} vs exact {exact}"
            );
        }
    }

    #[test]
    fn shifting_c_shifts_psi_and_fixes_density(fam in family(), d in -5.0..5.0f64, theta in -8.0..8.0f64) {
        let shifted = FiniteExpFam::new(
            fam.space().clone(),
            fam.c().iter().map(|c| c + d).collect(),
            fam.f().to_vec(),
        )
        .unwrap();
        prop_assert!((shifted.log_partition(theta) - fam.log_partition(theta) - d).abs() < 1e-12);
        for (a, b) in shifted.density(theta).iter().zip(fam.density(theta)) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn reduction_preserves_psi_on_random_families(fam in family()) {
        let red = match reduce(&fam) {
            Ok(red) => red,
            Err(_) => return Ok(()), // all values collapsed into one group
        };
        for i in 0..21 {
            let t = -8.0 + 0.8 * i as f64;
            prop_assert!((fam.log_partition(t) - red.base.log_partition(t)).abs() < 1e-10);
        }
    }

    #[test]
    fn equivalence_witnesses_compose(fam in family(), g1 in group_element(), g2 in group_element()) {
        let f2 = g1.apply(&fam);
        let f3 = g2.apply(&f2);
        prop_assert!(equivalent(&fam, &f2).is_some());
        prop_assert!(equivalent(&f2, &f3).is_some());
        let w = equivalent(&fam, &f3);
        prop_assert!(w.is_some(), "transitivity failed");
        let grid: Vec<f64> = (0..11).map(|i| -5.0 + f64::from(i)).collect();
        prop_assert!(check_psi_identity(&fam, &f3, &w.unwrap(), &grid) < 1e-8);
    }

    #[test]
    fn torus_action_is_one_periodic(c in -2.0..2.0f64, x in -4.0..-0.2f64, y in -3.0..3.0f64, t in -1.0..1.0f64) {
        let p = tau(c, TangentPoint::new(x, y)).unwrap();
        let d = distance(&torus_act(t, &p), &torus_act(t + 1.0, &p));
        prop_assert!(d < 1e-12, "period violated by {d}");
    }
}

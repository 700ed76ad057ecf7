//! Open intervals of the real line and grid construction on them.

use std::fmt;

use crate::error::{Error, Result};

/// Margin kept between a grid and a *finite* endpoint of the domain.
///
/// Metrics of the non-flat canonical families blow up at their domain
/// boundary; residuals evaluated right at the boundary are dominated by
/// that singularity rather than by implementation error.
pub const BOUNDARY_MARGIN: f64 = 0.1;

/// An open interval `(lo, hi)`; either endpoint may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// The whole real line.
    pub const ALL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// The negative half line `(-inf, 0)`.
    pub const NEGATIVE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: 0.0,
    };

    /// Open interval `(lo, hi)`. Panics if `lo >= hi` or an endpoint is NaN.
    pub fn open(lo: f64, hi: f64) -> Self {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN interval endpoint");
        assert!(lo < hi, "empty interval ({lo}, {hi})");
        Interval { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Evenly spaced grid on the intersection of this interval with
    /// `[lo, hi]`, insetting finite domain endpoints by [`BOUNDARY_MARGIN`].
    ///
    /// Returns [`Error::EmptyGrid`] when the intersection is too small.
    pub fn grid(&self, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
        let eff_lo = if self.lo.is_finite() {
            lo.max(self.lo + BOUNDARY_MARGIN)
        } else {
            lo
        };
        let eff_hi = if self.hi.is_finite() {
            hi.min(self.hi - BOUNDARY_MARGIN)
        } else {
            hi
        };
        if n < 2 || !(eff_lo < eff_hi) {
            return Err(Error::EmptyGrid);
        }
        let step = (eff_hi - eff_lo) / (n - 1) as f64;
        Ok((0..n).map(|i| eff_lo + step * i as f64).collect())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

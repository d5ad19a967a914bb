//! Extended real values for divergences that may be infinite.
//!
//! Divergences built from generators with `f(0+) = +inf` (Jeffreys, for
//! instance) become infinite on measures whose supports fail to overlap.
//! [`ExtendedReal`] keeps that case explicit: it wraps a non-NaN `f64` where
//! `+inf` is a meaningful value, not an overflow accident.

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// A real number or `+inf`, never NaN.
///
/// Ordering and addition follow IEEE semantics, so `+inf` absorbs sums and
/// dominates comparisons, which is exactly the arithmetic divergence
/// accumulation needs.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal(0.0);
    pub const INFINITY: ExtendedReal = ExtendedReal(f64::INFINITY);

    /// Wraps a value, rejecting NaN and `-inf`.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::Numeric("extended real cannot be NaN".into()));
        }
        if value == f64::NEG_INFINITY {
            return Err(Error::Numeric("extended real cannot be -inf".into()));
        }
        Ok(ExtendedReal(value))
    }

    /// The underlying `f64`; `+inf` stays `+inf`.
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// The finite value, or an error for `+inf`.
    pub fn finite(self) -> Result<f64> {
        if self.is_finite() {
            Ok(self.0)
        } else {
            Err(Error::Numeric("expected a finite value, found +inf".into()))
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        ExtendedReal(self.0 + rhs.0)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

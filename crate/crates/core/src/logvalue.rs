//! Nonnegative magnitudes stored as their base-10 logarithm.
//!
//! Runtimes such as the number field sieve at a few thousand bits are around
//! `10^41`, and qubit-to-size maps like `2^q` reach `10^hundreds`, so every
//! magnitude the model touches lives in log10 space. Zero is the one value
//! with no finite logarithm and is encoded as negative infinity.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

/// A value `x >= 0` held as `log10(x)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogValue<T> {
    log10: T,
}

impl<T: Scalar> LogValue<T> {
    pub fn from_log10(log10_magnitude: T) -> Self {
        debug_assert!(!log10_magnitude.is_nan());
        debug_assert!(log10_magnitude != T::infinity());
        Self {
            log10: log10_magnitude,
        }
    }

    /// `None` for negative or non-finite input.
    pub fn from_linear(x: T) -> Option<Self> {
        if x.is_nan() || x < T::zero() || x.is_infinite() {
            return None;
        }
        Some(Self { log10: x.log10() })
    }

    pub fn zero() -> Self {
        Self {
            log10: T::neg_infinity(),
        }
    }

    pub fn one() -> Self {
        Self { log10: T::zero() }
    }

    pub fn log10_magnitude(self) -> T {
        self.log10
    }

    pub fn is_zero(self) -> bool {
        self.log10 == T::neg_infinity()
    }

    /// Linear-scale value; `+inf` once it leaves the representable range.
    pub fn to_linear(self) -> T {
        T::lit(10.0).powf(self.log10)
    }

    /// `None` when dividing by zero.
    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        Some(Self {
            log10: self.log10 - rhs.log10,
        })
    }

    /// `self - rhs`, or `None` when the difference is not strictly positive.
    pub fn checked_sub(self, rhs: Self) -> Option<Self> {
        if rhs.is_zero() {
            return Some(self);
        }
        if self.log10 <= rhs.log10 {
            return None;
        }
        let gap = T::lit(10.0).powf(rhs.log10 - self.log10);
        let log10 = self.log10 + (-gap).ln_1p() / T::LN_10();
        if log10 == T::neg_infinity() || log10.is_nan() {
            return None;
        }
        Some(Self { log10 })
    }

    /// `self^exponent` for a linear-scale exponent.
    pub fn powf(self, exponent: T) -> Self {
        if self.is_zero() {
            return if exponent > T::zero() {
                Self::zero()
            } else {
                Self::one()
            };
        }
        Self {
            log10: self.log10 * exponent,
        }
    }

    pub fn sqrt(self) -> Self {
        Self {
            log10: self.log10 / T::lit(2.0),
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

impl<T: Scalar> fmt::Display for LogValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "10^{}", self.log10)
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<T: Scalar> std::ops::Mul for LogValue<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self {
            log10: self.log10 + rhs.log10,
        }
    }
}

impl<T: Scalar> std::ops::Add for LogValue<T> {
    type Output = Self;

        /// `log10(10^a + 10^b)` without leaving log space.
        fn add(self, rhs: Self) -> Self {
            let (hi, lo) = if self.log10 >= rhs.log10 {
                (self.log10, rhs.log10)
            } else {
                (rhs.log10, self.log10)
            };
            if lo == T::neg_infinity() {
                return Self { log10: hi };
            }
            let gap = T::lit(10.0).powf(lo - hi);
            Self {
                log10: hi + gap.ln_1p() / T::LN_10(),
            }
        }
}

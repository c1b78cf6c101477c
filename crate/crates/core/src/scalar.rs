//! Floating-point abstraction shared by every algorithm in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar used for exposures, thresholds and scores.
///
/// Implemented for `f32` and `f64`. All comparisons that decide criticality,
/// pivotality or default go through [`Scalar::tolerance`], so exact cases such
/// as a loan equal to its lender's threshold survive rounding.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Absolute tolerance for `>=` / `<` decisions.
    fn tolerance() -> Self;

    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 converts to every float type")
    }

    fn from_usize_lossy(value: usize) -> Self {
        Self::from_usize(value).expect("usize converts to every float type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `self >= other`, treating values within tolerance as equal.
    #[inline]
    fn at_least(self, other: Self) -> bool {
        self >= other - Self::tolerance()
    }

    /// `self < other` by more than the tolerance.
    #[inline]
    fn below(self, other: Self) -> bool {
        !self.at_least(other)
    }
}

impl Scalar for f64 {
    #[inline]
    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    #[inline]
    fn tolerance() -> Self {
        1e-4
    }
}

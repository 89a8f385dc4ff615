//! Scalar abstraction: the numeric kernels are generic over the float type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used throughout the model kernels: f32 or f64.
pub trait Real: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static {
    /// Lossless-enough conversion from f64 literals and RNG draws.
    fn from_f64_lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    /// Numerically stable logistic function 1 / (1 + exp(-x)).
    ///
    /// Evaluated in the branch that never exponentiates a large positive
    /// argument, so it cannot overflow even for |x| in the hundreds.
    fn sigmoid(self) -> Self {
        if self >= Self::zero() {
            Self::one() / (Self::one() + (-self).exp())
        } else {
            let e = self.exp();
            e / (Self::one() + e)
        }
    }

    /// Log-odds, the inverse of [`Real::sigmoid`] on (0, 1).
    fn logit(self) -> Self {
        (self / (Self::one() - self)).ln()
    }
}

impl Real for f32 {}
impl Real for f64 {}

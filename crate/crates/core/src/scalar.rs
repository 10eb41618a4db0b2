//! Scalar abstraction for the measurement layer.
//!
//! Board states, deltas, and mate distances are exact integers and stay
//! that way. Everything measured *about* them (metric distances, expansion
//! exponents, least-squares residuals, evaluator scores) is generic over
//! [`Real`] so the same code runs at f32 or f64; the crate root pins
//! `Scalar = f64` for the shipped tools.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar for measurements.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum<Self> + Debug + Display + Copy + Send + Sync + 'static
{
    /// Lossless-enough conversion from exact integer data.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer out of scalar range")
    }

    /// Conversion from a count.
    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count out of scalar range")
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + Sum<T>
        + Debug
        + Display
        + Copy
        + Send
        + Sync
        + 'static
{
}

//! Scalar abstraction shared by every model space.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type the geometry is computed in (`f32` or `f64`).
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("integer representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn half() -> Self {
        Self::of(0.5)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

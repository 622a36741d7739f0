//! Scalar traits the simulator is generic over.
//!
//! State evolution needs a real field with transcendental functions, so it is
//! written against [`Float`] (implemented for `f32` and `f64`). Schedule
//! arithmetic only needs the four field operations and an ordering, so it is
//! written against [`ScheduleScalar`], which additionally admits exact
//! rationals such as [`num_rational::BigRational`].

use std::fmt::{Debug, Display};

use nalgebra as na;
use num_traits as nt;

/// Floating point types usable as the real part of state amplitudes.
pub trait Float:
    Copy
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + nt::FloatConst
    + nt::FromPrimitive
    + nt::ToPrimitive
    + na::RealField
    + na::Scalar
{
    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    fn lit(x: f64) -> Self {
        <Self as nt::FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        nt::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Float for f32 {}
impl Float for f64 {}

/// Field-like scalars for schedule parameters (stage angles, hopping rates).
pub trait ScheduleScalar:
    Clone + Debug + PartialOrd + nt::Num + nt::FromPrimitive + nt::ToPrimitive
{
    fn from_f64_exact(x: f64) -> Self {
        <Self as nt::FromPrimitive>::from_f64(x).expect("finite f64 literal")
    }

    fn approx_f64(&self) -> f64 {
        nt::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl<T> ScheduleScalar for T where
    T: Clone + Debug + PartialOrd + nt::Num + nt::FromPrimitive + nt::ToPrimitive
{
}

pub type Complex<T> = num_complex::Complex<T>;

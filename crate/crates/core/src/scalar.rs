//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real floating-point scalar the simulator is generic over (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 constant representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
}

/// Complex amplitude over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

/// Largest of `1e-12`-style absolute tolerances and a few ulps of `scale`.
///
/// Lets the same tolerance constants work in `f32` builds, where the `f64`
/// figures would be unreachable.
#[inline]
pub(crate) fn tol<T: Real>(abs: f64, scale: T) -> T {
    let floor = T::epsilon() * T::lit(16.0) * scale.abs().max(T::one());
    T::lit(abs).max(floor)
}

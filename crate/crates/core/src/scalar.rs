//! Scalar abstraction shared by the linear-algebra and state layers.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar the dense routines are generic over.
///
/// Tolerances scale with the precision of the type: the double-precision
/// values are the documented defaults, single precision uses looser ones.
pub trait Real:
    Float + FloatConst + FromPrimitive + Default + Debug + Display + Sum + Send + Sync + 'static
{
    /// Relative eigenvalue cutoff below which a PSD spectrum is treated as zero.
    fn support_cutoff() -> Self;
    /// Absolute/relative tolerance used for Hermiticity, PSD and trace checks.
    fn check_tol() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn support_cutoff() -> Self {
        1e-10
    }
    fn check_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn support_cutoff() -> Self {
        1e-5
    }
    fn check_tol() -> Self {
        1e-4
    }
}

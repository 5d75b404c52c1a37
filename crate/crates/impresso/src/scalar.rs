//! Scalar abstraction over the floating-point types the image math runs on.

use num_traits::{Float, FloatConst, NumAssignOps};
use rustfft::FftNum;

/// Floating-point scalar for image planes and spectra.
///
/// Implemented for `f32` and `f64`. `FftNum` brings `Copy`, `FromPrimitive`,
/// `Send`, `Sync` and everything the FFT backend needs, so a single bound
/// covers the whole pipeline.
pub trait Scalar: Float + FloatConst + NumAssignOps + FftNum {}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Casts an `f64` constant into the scalar type.
///
/// Every finite `f64` converts to both supported types (lossily for `f32`),
/// so the conversion cannot fail on the values this crate feeds it.
#[inline]
pub fn cast<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("finite f64 constant converts to the scalar type")
}

/// Reads the scalar back as `f64` for reporting and serialization.
#[inline]
pub fn to_f64<T: Scalar>(v: T) -> f64 {
    v.to_f64().expect("scalar converts to f64")
}

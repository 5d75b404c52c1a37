//! Unsharp-mask sharpening and the gradient orientation field.

use crate::blur::{gaussian_blur, BlurParams};
use crate::raster::Plane;
use crate::scalar::{cast, Scalar};

/// Errors from sharpening and gradient extraction.
#[derive(Debug, thiserror::Error)]
pub enum EnhanceError {
    #[error("unsharp-mask weight must lie in [0.1, 0.9], got {0}")]
    InvalidWeight(f64),
    #[error("plane must be at least 3x3 for gradients, got {width}x{height}")]
    TooSmall { width: usize, height: usize },
}

/// Unsharp-mask parameters: mixing weight and the blur that produces the
/// low-pass component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsmParams {
    w: f64,
    pub blur: BlurParams,
}

impl UsmParams {
    /// Validates `0.1 <= w <= 0.9`.
    pub fn new(w: f64, blur: BlurParams) -> Result<Self, EnhanceError> {
        if !(0.1..=0.9).contains(&w) {
            return Err(EnhanceError::InvalidWeight(w));
        }
        Ok(Self { w, blur })
    }

    pub fn weight(&self) -> f64 {
        self.w
    }
}

/// Sharpens a plane: `out = (plane - w * blur(plane)) / (1 - w)`.
///
/// No clamping; sharpened L* values may leave [0, 100] and stay that way
/// until sRGB quantization.
pub fn usm_sharpen<T: Scalar>(plane: &Plane<T>, params: &UsmParams) -> Plane<T> {
    let low = gaussian_blur(plane, &params.blur);
    let w: T = cast(params.w);
    let inv: T = T::one() / (T::one() - w);
    let mut out = Plane::zeros(plane.width(), plane.height());
    for (i, v) in out.data_mut().iter_mut().enumerate() {
        *v = (plane.data()[i] - w * low.data()[i]) * inv;
    }
    out
}

/// Gradient magnitudes and line orientations of a plane.
///
/// `angle` holds directions in degrees modulo 180 (a stroke orientation has
/// no sign), `magnitude` is non-negative everywhere. After
/// [`smooth_orientations`] the magnitude plane carries window coherence in
/// [0, 1] instead of raw gradient strength.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationField<T> {
    pub magnitude: Plane<T>,
    pub angle: Plane<T>,
}

impl<T: Scalar> OrientationField<T> {
    pub fn width(&self) -> usize {
        self.magnitude.width()
    }

    pub fn height(&self) -> usize {
        self.magnitude.height()
    }
}

/// Folds degrees into [0, 180). The final re-check catches the rounding
/// case where adding 180 to a tiny negative remainder lands exactly on 180.
#[inline]
pub(crate) fn normalize_angle<T: Scalar>(deg: T) -> T {
    let half: T = cast(180.0);
    let mut a = deg % half;
    if a < T::zero() {
        a += half;
    }
    if a >= half {
        a -= half;
    }
    a
}

/// Computes Sobel gradients with edge replication.
///
/// Coordinates are raster-style (y grows downward), so `angle` is
/// `atan2(gy, gx)` folded into [0, 180): a vertical step edge yields 0
/// degrees, a horizontal one 90.
pub fn gradient_field<T: Scalar>(plane: &Plane<T>) -> Result<OrientationField<T>, EnhanceError> {
    let (w, h) = (plane.width(), plane.height());
    if w < 3 || h < 3 {
        return Err(EnhanceError::TooSmall {
            width: w,
            height: h,
        });
    }
    let mut magnitude = Plane::zeros(w, h);
    let mut angle = Plane::zeros(w, h);
    let two: T = cast(2.0);
    let deg: T = cast::<T>(180.0) / T::PI();
    for row in 0..h {
        for col in 0..w {
            let sample = |dr: isize, dc: isize| -> T {
                let r = (row as isize + dr).clamp(0, h as isize - 1) as usize;
                let c = (col as isize + dc).clamp(0, w as isize - 1) as usize;
                plane.at(r, c)
            };
            let gx = sample(-1, 1) - sample(-1, -1)
                + two * (sample(0, 1) - sample(0, -1))
                + sample(1, 1)
                - sample(1, -1);
            let gy = sample(1, -1) - sample(-1, -1)
                + two * (sample(1, 0) - sample(-1, 0))
                + sample(1, 1)
                - sample(-1, 1);
            magnitude.set(row, col, (gx * gx + gy * gy).sqrt());
            angle.set(row, col, normalize_angle(gy.atan2(gx) * deg));
        }
    }
    Ok(OrientationField { magnitude, angle })
}

/// Smooths orientations by averaging doubled-angle vectors weighted by
/// magnitude over a square window (truncated at plane edges), then halving
/// back into [0, 180).
///
/// Doubling makes 1 degree and 179 degrees near-identical instead of
/// opposite, so seams between similar orientations cannot average to the
/// perpendicular. The output magnitude plane holds the window coherence:
/// 1 where the window agrees on one orientation, 0 where orientations
/// cancel or carry no weight. Pixels in zero-weight windows get angle 0.
///
/// Panics if `window` is even or zero; the value is a configuration
/// constant, not data.
pub fn smooth_orientations<T: Scalar>(
    field: &OrientationField<T>,
    window: usize,
) -> OrientationField<T> {
    assert!(
        window >= 1 && window % 2 == 1,
        "window must be odd and at least 1"
    );
    let (w, h) = (field.width(), field.height());
    let r = (window / 2) as isize;
    let rad: T = T::PI() / cast::<T>(180.0);
    let deg: T = cast::<T>(180.0) / T::PI();
    let two: T = cast(2.0);
    let half: T = cast(0.5);
    let mut magnitude = Plane::zeros(w, h);
    let mut angle = Plane::zeros(w, h);
    for row in 0..h {
        for col in 0..w {
            let mut vx = T::zero();
            let mut vy = T::zero();
            let mut wsum = T::zero();
            for dr in -r..=r {
                let rr = row as isize + dr;
                if rr < 0 || rr >= h as isize {
                    continue;
                }
                for dc in -r..=r {
                    let cc = col as isize + dc;
                    if cc < 0 || cc >= w as isize {
                        continue;
                    }
                    let m = field.magnitude.at(rr as usize, cc as usize);
                    let doubled = field.angle.at(rr as usize, cc as usize) * two * rad;
                    vx += m * doubled.cos();
                    vy += m * doubled.sin();
                    wsum += m;
                }
            }
            if wsum > T::zero() {
                angle.set(row, col, normalize_angle(vy.atan2(vx) * half * deg));
                magnitude.set(row, col, (vx * vx + vy * vy).sqrt() / wsum);
            }
        }
    }
    OrientationField { magnitude, angle }
}

//! Separable Gaussian blur with edge replication.

use crate::raster::Plane;
use crate::scalar::{cast, Scalar};

/// Errors from blur parameter validation.
#[derive(Debug, thiserror::Error)]
pub enum BlurError {
    #[error("sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),
}

/// Gaussian blur parameters: standard deviation and the derived kernel radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlurParams {
    sigma: f64,
    radius: usize,
}

impl BlurParams {
    /// Validates `sigma > 0` and derives `radius = ceil(3 * sigma)`.
    pub fn new(sigma: f64) -> Result<Self, BlurError> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(BlurError::InvalidSigma(sigma));
        }
        let radius = (3.0 * sigma).ceil() as usize;
        Ok(Self { sigma, radius })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// One-dimensional kernel weights for offsets `-radius ..= radius`,
    /// normalized so their sum is 1 within 1e-9.
    pub fn weights(&self) -> Vec<f64> {
        let r = self.radius as isize;
        let inv = 1.0 / (2.0 * self.sigma * self.sigma);
        let raw: Vec<f64> = (-r..=r).map(|k| (-((k * k) as f64) * inv).exp()).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / sum).collect()
    }
}

/// Blurs a plane with the separable Gaussian kernel, replicating edge
/// pixels where the window leaves the plane.
///
/// Horizontal-then-vertical passes with clamped indices are exactly
/// equivalent to 2-D convolution with the product kernel under
/// replication, because the clamping acts per axis.
pub fn gaussian_blur<T: Scalar>(plane: &Plane<T>, params: &BlurParams) -> Plane<T> {
    let weights: Vec<T> = params.weights().into_iter().map(cast).collect();
    let r = params.radius() as isize;
    let (w, h) = (plane.width(), plane.height());

    let mut horizontal = Plane::zeros(w, h);
    for row in 0..h {
        for col in 0..w {
            let mut acc = T::zero();
            for (ki, &kw) in weights.iter().enumerate() {
                let src = (col as isize + ki as isize - r).clamp(0, w as isize - 1) as usize;
                acc += kw * plane.at(row, src);
            }
            horizontal.set(row, col, acc);
        }
    }

    let mut out = Plane::zeros(w, h);
    for col in 0..w {
        for row in 0..h {
            let mut acc = T::zero();
            for (ki, &kw) in weights.iter().enumerate() {
                let src = (row as isize + ki as isize - r).clamp(0, h as isize - 1) as usize;
                acc += kw * horizontal.at(src, col);
            }
            out.set(row, col, acc);
        }
    }
    out
}

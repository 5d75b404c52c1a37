//! Square-plane 2-D FFT on top of a 1-D FFT backend.
//!
//! Forward transforms are unnormalized; the inverse scales by 1/n² so that
//! `ifft2(fft2(x)) = x`. Spectra are stored row-major with the row index as
//! the y-frequency `v` and the column index as the x-frequency `u`, matching
//! the raster layout of the planes they come from.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::raster::Plane;
use crate::scalar::{cast, Scalar};

/// Errors from spectrum construction.
#[derive(Debug, thiserror::Error)]
pub enum FftError {
    #[error("plane must be square, got {width}x{height}")]
    NotSquare { width: usize, height: usize },
}

/// Complex 2-D spectrum of an n x n plane.
///
/// `at(v, u)` addresses the sample for x-frequency `u` and y-frequency `v`;
/// index 0 along each axis is DC, indices above n/2 alias to negative
/// frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    side: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> Spectrum<T> {
    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.side + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.side + col] = value;
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    /// Plane of spectral moduli, same layout as the spectrum.
    pub fn modulus(&self) -> Plane<T> {
        Plane::from_vec(
            self.side,
            self.side,
            self.data
                .iter()
                .map(|c| (c.re * c.re + c.im * c.im).sqrt())
                .collect(),
        )
    }

    /// Sum of squared moduli; Parseval's theorem ties it to the spatial
    /// energy as `sum(x^2) = sum(|F|^2) / n^2`.
    pub fn energy(&self) -> T {
        let mut acc = T::zero();
        for c in &self.data {
            acc += c.re * c.re + c.im * c.im;
        }
        acc
    }
}

/// Maps a spectral index to its signed frequency: indices above n/2 wrap
/// negative, the Nyquist index (even n) stays positive.
#[inline]
pub fn signed_frequency(index: usize, n: usize) -> isize {
    if index <= n / 2 {
        index as isize
    } else {
        index as isize - n as isize
    }
}

fn transpose<T: Scalar>(data: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); n * n];
    for r in 0..n {
        for c in 0..n {
            out[c * n + r] = data[r * n + c];
        }
    }
    out
}

fn fft2_dir<T: Scalar>(data: &mut Vec<Complex<T>>, n: usize, forward: bool) {
    let mut planner = FftPlanner::<T>::new();
    let fft = if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut t = transpose(data, n);
    for row in t.chunks_exact_mut(n) {
        fft.process(row);
    }
    *data = transpose(&t, n);
}

/// Unnormalized forward 2-D DFT of a square plane.
///
/// Any side length is handled; sides of at least 8 are what the callers in
/// this crate are specified for.
pub fn fft2<T: Scalar>(plane: &Plane<T>) -> Result<Spectrum<T>, FftError> {
    let (w, h) = (plane.width(), plane.height());
    if w != h {
        return Err(FftError::NotSquare {
            width: w,
            height: h,
        });
    }
    let mut data: Vec<Complex<T>> = plane
        .data()
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();
    fft2_dir(&mut data, w, true);
    Ok(Spectrum { side: w, data })
}

/// Inverse 2-D DFT scaled by 1/n², returning the real part.
pub fn ifft2<T: Scalar>(spectrum: &Spectrum<T>) -> Plane<T> {
    let n = spectrum.side;
    let mut data = spectrum.data.clone();
    fft2_dir(&mut data, n, false);
    let scale: T = T::one() / cast::<T>((n * n) as f64);
    Plane::from_vec(n, n, data.iter().map(|c| c.re * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct O(n^4) double-sum DFT straight from the definition.
    fn naive_dft(plane: &Plane<f64>) -> Vec<Complex<f64>> {
        let n = plane.width();
        let mut out = Vec::with_capacity(n * n);
        for v in 0..n {
            for u in 0..n {
                let mut acc = Complex::new(0.0, 0.0);
                for y in 0..n {
                    for x in 0..n {
                        let phase = -2.0 * std::f64::consts::PI * (u * x + v * y) as f64 / n as f64;
                        acc += Complex::new(phase.cos(), phase.sin()) * plane.at(y, x);
                    }
                }
                out.push(acc);
            }
        }
        out
    }

    fn pseudo_plane(n: usize, seed: u64) -> Plane<f64> {
        let mut state = seed;
        Plane::from_fn(n, n, |_, _| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) % 20000) as f64 / 100.0 - 100.0
        })
    }

    #[test]
    fn rejects_non_square_planes() {
        let plane = Plane::<f64>::zeros(8, 9);
        assert!(matches!(
            fft2(&plane),
            Err(FftError::NotSquare {
                width: 8,
                height: 9
            })
        ));
    }

    #[test]
    fn constant_plane_transforms_to_pure_dc() {
        let n = 16;
        let c = 42.5;
        let spec = fft2(&Plane::<f64>::filled(n, n, c)).unwrap();
        assert!((spec.at(0, 0).re - c * (n * n) as f64).abs() < 1e-9);
        assert!(spec.at(0, 0).im.abs() < 1e-9);
        for (i, z) in spec.data().iter().enumerate() {
            if i != 0 {
                assert!(z.norm() < 1e-8, "bin {i} holds {z}");
            }
        }
    }

    #[test]
    fn matches_naive_dft_on_8x8() {
        let plane = pseudo_plane(8, 123);
        let fast = fft2(&plane).unwrap();
        let slow = naive_dft(&plane);
        for (a, b) in fast.data().iter().zip(&slow) {
            assert!((a.re - b.re).abs() < 1e-6, "{a} vs {b}");
            assert!((a.im - b.im).abs() < 1e-6);
        }
    }

    #[test]
    fn matches_naive_dft_on_non_power_of_two() {
        let plane = pseudo_plane(12, 77);
        let fast = fft2(&plane).unwrap();
        let slow = naive_dft(&plane);
        for (a, b) in fast.data().iter().zip(&slow) {
            assert!((a.re - b.re).abs() < 1e-6);
            assert!((a.im - b.im).abs() < 1e-6);
        }
    }

    #[test]
    fn round_trip_recovers_the_plane() {
        let plane = pseudo_plane(32, 9);
        let back = ifft2(&fft2(&plane).unwrap());
        for (a, b) in back.data().iter().zip(plane.data()) {
            assert!((a - b).abs() / b.abs().max(1.0) < 1e-9);
        }
    }

    #[test]
    fn parseval_energy_balance() {
        let plane = pseudo_plane(16, 4242);
        let spec = fft2(&plane).unwrap();
        let spatial: f64 = plane.data().iter().map(|v| v * v).sum();
        let spectral = spec.energy() / (16.0 * 16.0);
        assert!((spatial - spectral).abs() / spatial < 1e-9);
    }

    #[test]
    fn signed_frequency_wraps_past_nyquist() {
        assert_eq!(signed_frequency(0, 8), 0);
        assert_eq!(signed_frequency(3, 8), 3);
        assert_eq!(signed_frequency(4, 8), 4);
        assert_eq!(signed_frequency(5, 8), -3);
        assert_eq!(signed_frequency(7, 8), -1);
    }

    #[test]
    fn f32_spectra_track_f64() {
        let n = 16;
        let p64 = pseudo_plane(n, 5);
        let p32 = Plane::from_vec(n, n, p64.data().iter().map(|&v| v as f32).collect());
        let s64 = fft2(&p64).unwrap();
        let s32 = fft2(&p32).unwrap();
        for (a, b) in s64.data().iter().zip(s32.data()) {
            assert!((a.re - b.re as f64).abs() < 0.5);
            assert!((a.im - b.im as f64).abs() < 0.5);
        }
    }
}

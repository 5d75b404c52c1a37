//! Brush-patch extraction and stroke-angle estimation.
//!
//! The painting's L* plane is scanned with grid-aligned windows; the window
//! with the smallest standard deviation becomes the brush texture patch.
//! Its dominant stroke angle comes from the angular distribution of the
//! patch's power spectrum: stroke ridges along direction theta concentrate
//! spectral power perpendicular to theta.

use crate::fft::{fft2, signed_frequency};
use crate::raster::{LabImage, Plane};
use crate::scalar::{cast, Scalar};

/// A power-spectrum bin must exceed this multiple of the mean bin to count
/// as a dominant orientation.
pub const DOMINANCE_RATIO: f64 = 2.0;

/// Errors from patch scanning and spectrum profiling.
#[derive(Debug, thiserror::Error)]
pub enum StrokeError {
    #[error("window {window} does not fit a {width}x{height} plane")]
    WindowTooLarge {
        window: usize,
        width: usize,
        height: usize,
    },
    #[error("patch must be square, got {width}x{height}")]
    NotSquare { width: usize, height: usize },
}

/// One scanned window position and its standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowEntry<T> {
    pub row: usize,
    pub col: usize,
    pub sd: T,
}

/// All grid-aligned windows of one scan, in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowScan<T> {
    pub window_w: usize,
    pub window_h: usize,
    pub stride: usize,
    pub entries: Vec<WindowEntry<T>>,
}

/// Population standard deviation (divide by N) of one window.
fn window_sd<T: Scalar>(plane: &Plane<T>, row: usize, col: usize, size: usize) -> T {
    let n: T = cast((size * size) as f64);
    let mut sum = T::zero();
    for r in row..row + size {
        for c in col..col + size {
            sum += plane.at(r, c);
        }
    }
    let mean = sum / n;
    let mut sq = T::zero();
    for r in row..row + size {
        for c in col..col + size {
            let d = plane.at(r, c) - mean;
            sq += d * d;
        }
    }
    (sq / n).sqrt()
}

/// Scans every grid-aligned square window (anchors at multiples of
/// `stride`) and records its population standard deviation.
///
/// The scan covers `(floor((H-window)/stride)+1) * (floor((W-window)/stride)+1)`
/// positions; windows are never clamped to the border, so a trailing strip
/// narrower than the window is simply not scanned. Panics if `stride` is 0.
pub fn scan_windows<T: Scalar>(
    plane: &Plane<T>,
    window: usize,
    stride: usize,
) -> Result<WindowScan<T>, StrokeError> {
    assert!(stride >= 1, "stride must be at least 1");
    let (w, h) = (plane.width(), plane.height());
    if window == 0 || window > w || window > h {
        return Err(StrokeError::WindowTooLarge {
            window,
            width: w,
            height: h,
        });
    }
    let mut entries = Vec::new();
    let mut row = 0;
    while row + window <= h {
        let mut col = 0;
        while col + window <= w {
            entries.push(WindowEntry {
                row,
                col,
                sd: window_sd(plane, row, col, window),
            });
            col += stride;
        }
        row += stride;
    }
    Ok(WindowScan {
        window_w: window,
        window_h: window,
        stride,
        entries,
    })
}

/// The selected brush texture patch.
#[derive(Debug, Clone, PartialEq)]
pub struct BrushPatch<T> {
    /// Square side in pixels.
    pub size: usize,
    /// L* samples of the selected window.
    pub l: Plane<T>,
    /// (row, col) of the window's top-left corner in the source painting.
    pub origin: (usize, usize),
    /// Selection score; recomputing the population SD over `l` reproduces it.
    pub sd: T,
    /// Stroke orientation in degrees [0, 180), or `None` when the patch has
    /// no dominant direction.
    pub dominant_angle: Option<T>,
}

/// Selects the window with the lowest standard deviation as brush patch.
///
/// Ties go to the smallest (row, col) in lexicographic order. The dominant
/// angle is only estimated for windows of side 8 or more; smaller patches
/// cannot carry a meaningful spectrum and get `None`.
pub fn select_brush_patch<T: Scalar>(
    painting: &LabImage<T>,
    window: usize,
    stride: usize,
) -> Result<BrushPatch<T>, StrokeError> {
    let scan = scan_windows(&painting.l, window, stride)?;
    // row-major scan order makes the first strict minimum the
    // lexicographically smallest among ties
    let mut best = &scan.entries[0];
    for entry in &scan.entries[1..] {
        if entry.sd < best.sd {
            best = entry;
        }
    }
    let l = painting.l.crop(best.row, best.col, window, window);
    let dominant_angle = if window >= 8 {
        dominant_angle(&angular_power_profile(&l)?)
    } else {
        None
    };
    Ok(BrushPatch {
        size: window,
        l,
        origin: (best.row, best.col),
        sd: best.sd,
        dominant_angle,
    })
}

/// Mean squared spectral magnitude per integer degree of frequency-space
/// orientation, over all non-DC samples.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularPowerProfile<T> {
    /// 180 bins; bin k holds the mean |F|^2 of samples whose orientation
    /// rounds to k degrees.
    pub bins: Vec<T>,
    /// Samples per bin; sums to side^2 - 1.
    pub counts: Vec<usize>,
}

/// Bins the power spectrum of the zero-meaned patch by frequency
/// orientation, 1 degree per bin.
///
/// The patch mean is subtracted before the transform so DC leakage cannot
/// dwarf the angular bins; the DC sample itself is excluded from binning.
/// Panics if the side is less than 8 (callers validate patch sizes).
pub fn angular_power_profile<T: Scalar>(
    patch: &Plane<T>,
) -> Result<AngularPowerProfile<T>, StrokeError> {
    let (w, h) = (patch.width(), patch.height());
    if w != h {
        return Err(StrokeError::NotSquare {
            width: w,
            height: h,
        });
    }
    assert!(w >= 8, "angular profiles need a side of at least 8");
    let n = w;
    let mean = patch.mean();
    let centered = patch.map(|v| v - mean);
    let spectrum = fft2(&centered).expect("centered patch is square");

    let mut sums = vec![T::zero(); 180];
    let mut counts = vec![0usize; 180];
    for r in 0..n {
        for c in 0..n {
            if r == 0 && c == 0 {
                continue;
            }
            let u = signed_frequency(c, n) as f64;
            let v = signed_frequency(r, n) as f64;
            let theta = v.atan2(u).to_degrees().rem_euclid(180.0);
            // 179.5+ rounds up to 180, which wraps to the 0-degree bin
            let bin = (theta.round() as usize) % 180;
            let z = spectrum.at(r, c);
            sums[bin] += z.re * z.re + z.im * z.im;
            counts[bin] += 1;
        }
    }
    let bins = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &k)| {
            if k > 0 {
                s / cast::<T>(k as f64)
            } else {
                T::zero()
            }
        })
        .collect();
    Ok(AngularPowerProfile { bins, counts })
}

/// Extracts the stroke orientation from a profile: the argmax bin plus 90
/// degrees (mod 180), because spectral power sits perpendicular to the
/// stroke ridges. Returns `None` when no bin reaches [`DOMINANCE_RATIO`]
/// times the mean bin power, or when the spectrum is empty.
pub fn dominant_angle<T: Scalar>(profile: &AngularPowerProfile<T>) -> Option<T> {
    let mut best = 0usize;
    let mut max = profile.bins[0];
    for (i, &b) in profile.bins.iter().enumerate().skip(1) {
        if b > max {
            max = b;
            best = i;
        }
    }
    if max <= T::zero() {
        return None;
    }
    let mut sum = T::zero();
    for &b in &profile.bins {
        sum += b;
    }
    let mean = sum / cast::<T>(180.0);
    if max < cast::<T>(DOMINANCE_RATIO) * mean {
        return None;
    }
    Some(cast(((best + 90) % 180) as f64))
}

//! Frequency-domain fusion of the brush patch into the photo's L* plane.
//!
//! The plane is covered by overlapping square tiles. Per tile, the brush
//! patch is rotated so its stroke runs perpendicular to the local gradient,
//! its unit-max spectral magnitude |P| becomes a gain mask, and the tile
//! spectrum is updated as `G = F + alpha * |P| .* F` off-DC while the DC bin
//! passes through untouched; the mean luminance of every tile is therefore
//! exactly preserved. Tiles are blended back by Hann-weighted overlap-add.

use std::path::{Path, PathBuf};

use crate::enhance::{normalize_angle, OrientationField};
use crate::fft::{fft2, ifft2, Spectrum};
use crate::io::save_plane_png;
use crate::raster::{LabImage, Plane};
use crate::scalar::{cast, to_f64, Scalar};
use crate::stroke::BrushPatch;

/// Errors from fusion configuration and execution.
#[derive(Debug, thiserror::Error)]
pub enum FusionError {
    #[error("patch size must be at least 8, got {0}")]
    PatchTooSmall(usize),
    #[error("blend alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("orientation window must be odd and at least 1, got {0}")]
    InvalidOrientationWindow(usize),
    #[error("overlap fraction {0:?} is not one of 1/8, 1/4, 1/2")]
    InvalidOverlap(String),
    #[error("patch side {patch} does not match the configured size {expected}")]
    SizeMismatch { patch: usize, expected: usize },
    #[error("plane {width}x{height} is smaller than the {patch}-pixel patch")]
    ImageSmallerThanPatch {
        width: usize,
        height: usize,
        patch: usize,
    },
    #[error("dimensions {left_w}x{left_h} and {right_w}x{right_h} do not match")]
    DimensionMismatch {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },
    #[error("failed to write tile dump: {0}")]
    DumpIo(String),
}

/// How far consecutive tiles move, as a fraction of the patch size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapFraction {
    Eighth,
    Quarter,
    Half,
}

impl OverlapFraction {
    pub fn denominator(self) -> usize {
        match self {
            OverlapFraction::Eighth => 8,
            OverlapFraction::Quarter => 4,
            OverlapFraction::Half => 2,
        }
    }

    /// Tile step in pixels; at least 1 for every patch size >= 8.
    pub fn step(self, patch_size: usize) -> usize {
        (patch_size / self.denominator()).max(1)
    }
}

impl std::str::FromStr for OverlapFraction {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self, FusionError> {
        match s {
            "1/8" => Ok(OverlapFraction::Eighth),
            "1/4" => Ok(OverlapFraction::Quarter),
            "1/2" => Ok(OverlapFraction::Half),
            other => Err(FusionError::InvalidOverlap(other.to_string())),
        }
    }
}

impl std::fmt::Display for OverlapFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OverlapFraction::Eighth => "1/8",
            OverlapFraction::Quarter => "1/4",
            OverlapFraction::Half => "1/2",
        })
    }
}

/// Validated fusion tunables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionConfig {
    pub patch_size: usize,
    pub overlap: OverlapFraction,
    pub blend_alpha: f64,
    pub usm: crate::enhance::UsmParams,
    pub orientation_window: usize,
}

impl FusionConfig {
    pub fn new(
        patch_size: usize,
        overlap: OverlapFraction,
        blend_alpha: f64,
        usm: crate::enhance::UsmParams,
        orientation_window: usize,
    ) -> Result<Self, FusionError> {
        if patch_size < 8 {
            return Err(FusionError::PatchTooSmall(patch_size));
        }
        if !(0.0..=1.0).contains(&blend_alpha) {
            return Err(FusionError::InvalidAlpha(blend_alpha));
        }
        if orientation_window == 0 || orientation_window.is_multiple_of(2) {
            return Err(FusionError::InvalidOrientationWindow(orientation_window));
        }
        Ok(Self {
            patch_size,
            overlap,
            blend_alpha,
            usm,
            orientation_window,
        })
    }

    pub fn step(&self) -> usize {
        self.overlap.step(self.patch_size)
    }
}

impl Default for FusionConfig {
    /// Patch 64, overlap 1/4, alpha 0.5, sharpening weight 0.6 with sigma
    /// 2.0, orientation window 9.
    fn default() -> Self {
        let usm = crate::enhance::UsmParams::new(
            0.6,
            crate::blur::BlurParams::new(2.0).expect("2.0 is a valid sigma"),
        )
        .expect("0.6 is a valid weight");
        FusionConfig::new(64, OverlapFraction::Quarter, 0.5, usm, 9)
            .expect("defaults satisfy the invariants")
    }
}

/// Half-sample-offset Hann weights: `sin^2(pi*(i+0.5)/n)`, strictly
/// positive everywhere so accumulated overlap weights can never be zero,
/// even at image corners covered by a single tile.
pub fn hann_window<T: Scalar>(n: usize) -> Plane<T> {
    let weights: Vec<f64> = (0..n)
        .map(|i| {
            let s = (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).sin();
            s * s
        })
        .collect();
    Plane::from_fn(n, n, |c, r| cast(weights[r] * weights[c]))
}

/// Tile anchors and the shared blending window.
#[derive(Debug, Clone, PartialEq)]
pub struct TileGrid<T> {
    /// (row, col) top-left anchors in raster order; bottom and right edge
    /// tiles are clamped inward so the grid covers the whole plane.
    pub tiles: Vec<(usize, usize)>,
    pub weight_window: Plane<T>,
}

fn axis_anchors(dim: usize, patch: usize, step: usize) -> Vec<usize> {
    let mut anchors = Vec::new();
    let mut a = 0;
    while a + patch <= dim {
        anchors.push(a);
        a += step;
    }
    let last = *anchors.last().expect("dim >= patch guarantees one anchor");
    if last + patch < dim {
        anchors.push(dim - patch);
    }
    anchors
}

impl<T: Scalar> TileGrid<T> {
    pub fn build(width: usize, height: usize, cfg: &FusionConfig) -> Result<Self, FusionError> {
        let patch = cfg.patch_size;
        if width < patch || height < patch {
            return Err(FusionError::ImageSmallerThanPatch {
                width,
                height,
                patch,
            });
        }
        let step = cfg.step();
        let rows = axis_anchors(height, patch, step);
        let cols = axis_anchors(width, patch, step);
        let mut tiles = Vec::with_capacity(rows.len() * cols.len());
        for &r in &rows {
            for &c in &cols {
                tiles.push((r, c));
            }
        }
        Ok(TileGrid {
            tiles,
            weight_window: hann_window(patch),
        })
    }
}

/// The brush patch as a frequency-domain filter.
#[derive(Debug, Clone)]
pub struct StrokeFilter<T> {
    /// Spectrum of the zero-mean patch with the DC bin forced to zero.
    pub base_spectrum: Spectrum<T>,
    /// Its modulus normalized to unit maximum; all zeros for a flat patch.
    pub magnitude: Plane<T>,
    /// Copied from the patch.
    pub stroke_angle: Option<T>,
}

/// Zero-means a square plane, transforms it, zeroes DC, and returns the
/// spectrum together with its unit-max-normalized modulus.
fn spectral_gain<T: Scalar>(plane: &Plane<T>) -> (Spectrum<T>, Plane<T>) {
    let mean = plane.mean();
    let centered = plane.map(|v| v - mean);
    let mut spectrum = fft2(&centered).expect("square by construction");
    spectrum.set(
        0,
        0,
        rustfft::num_complex::Complex::new(T::zero(), T::zero()),
    );
    let mut magnitude = spectrum.modulus();
    let mut max = T::zero();
    for &m in magnitude.data() {
        if m > max {
            max = m;
        }
    }
    if max > T::zero() {
        magnitude = magnitude.map(|m| m / max);
    }
    (spectrum, magnitude)
}

/// Builds the frequency-domain stroke filter from a brush patch.
pub fn make_stroke_filter<T: Scalar>(
    patch: &BrushPatch<T>,
    cfg: &FusionConfig,
) -> Result<StrokeFilter<T>, FusionError> {
    if patch.size != cfg.patch_size {
        return Err(FusionError::SizeMismatch {
            patch: patch.size,
            expected: cfg.patch_size,
        });
    }
    let (base_spectrum, magnitude) = spectral_gain(&patch.l);
    Ok(StrokeFilter {
        base_spectrum,
        magnitude,
        stroke_angle: patch.dominant_angle,
    })
}

/// Rotates a square plane about its center with bilinear sampling; samples
/// falling outside wrap around, treating the patch as periodic to match
/// its role as a DFT filter. `by = 0` is a bit-exact identity.
pub fn rotate_patch<T: Scalar>(plane: &Plane<T>, by_degrees: T) -> Plane<T> {
    assert_eq!(
        plane.width(),
        plane.height(),
        "rotation is defined for square patches"
    );
    let by = normalize_angle(by_degrees);
    if by == T::zero() {
        return plane.clone();
    }
    let n = plane.width();
    let ni = n as isize;
    let center: T = cast::<T>((n - 1) as f64) * cast::<T>(0.5);
    let rad = by * T::PI() / cast::<T>(180.0);
    let (sin, cos) = rad.sin_cos();
    let sample =
        |x: isize, y: isize| plane.at(y.rem_euclid(ni) as usize, x.rem_euclid(ni) as usize);
    Plane::from_fn(n, n, |col, row| {
        let dx = cast::<T>(col as f64) - center;
        let dy = cast::<T>(row as f64) - center;
        // inverse rotation pulls each output pixel from the source
        let sx = center + cos * dx + sin * dy;
        let sy = center - sin * dx + cos * dy;
        let x0 = sx.floor();
        let y0 = sy.floor();
        let fx = sx - x0;
        let fy = sy - y0;
        let (xi, yi) = (to_f64(x0) as isize, to_f64(y0) as isize);
        let one = T::one();
        (one - fy) * ((one - fx) * sample(xi, yi) + fx * sample(xi + 1, yi))
            + fy * ((one - fx) * sample(xi, yi + 1) + fx * sample(xi + 1, yi + 1))
    })
}

/// Magnitude-weighted mean orientation over a tile, rotated 90 degrees into
/// the stroke direction (strokes follow isophotes, perpendicular to the
/// gradient). Doubled-angle averaging keeps the wrap at 0/180 harmless.
pub fn tile_stroke_angle<T: Scalar>(
    field: &OrientationField<T>,
    row: usize,
    col: usize,
    size: usize,
) -> T {
    let rad = T::PI() / cast::<T>(180.0);
    let deg = cast::<T>(180.0) / T::PI();
    let two: T = cast(2.0);
    let half: T = cast(0.5);
    let mut vx = T::zero();
    let mut vy = T::zero();
    for r in row..row + size {
        for c in col..col + size {
            let m = field.magnitude.at(r, c);
            let doubled = field.angle.at(r, c) * two * rad;
            vx += m * doubled.cos();
            vy += m * doubled.sin();
        }
    }
    let gradient = if vx == T::zero() && vy == T::zero() {
        T::zero()
    } else {
        normalize_angle(vy.atan2(vx) * half * deg)
    };
    normalize_angle(gradient + cast::<T>(90.0))
}

/// Everything produced for one tile, kept for inspection and testing.
#[derive(Debug, Clone)]
pub struct TileOutcome<T> {
    pub row: usize,
    pub col: usize,
    /// Rotation applied to the patch, `None` when the patch had no
    /// dominant angle and was used as-is.
    pub rotation: Option<T>,
    pub input_spectrum: Spectrum<T>,
    pub fused_spectrum: Spectrum<T>,
    pub output: Plane<T>,
}

/// Execution knobs that do not change the mathematical result.
#[derive(Debug, Clone, Default)]
pub struct FuseOptions {
    /// Worker threads for per-tile processing; 0 or 1 runs sequentially.
    /// The output is bit-identical for every value.
    pub workers: usize,
    /// When set, writes per-tile `before`/`after` PNGs into this directory.
    pub dump_dir: Option<PathBuf>,
}

fn validate_fuse_inputs<T: Scalar>(
    plane: &Plane<T>,
    field: &OrientationField<T>,
    patch: &BrushPatch<T>,
    cfg: &FusionConfig,
) -> Result<TileGrid<T>, FusionError> {
    if patch.size != cfg.patch_size {
        return Err(FusionError::SizeMismatch {
            patch: patch.size,
            expected: cfg.patch_size,
        });
    }
    if field.width() != plane.width() || field.height() != plane.height() {
        return Err(FusionError::DimensionMismatch {
            left_w: plane.width(),
            left_h: plane.height(),
            right_w: field.width(),
            right_h: field.height(),
        });
    }
    TileGrid::build(plane.width(), plane.height(), cfg)
}

fn process_tile<T: Scalar>(
    plane: &Plane<T>,
    field: &OrientationField<T>,
    patch: &BrushPatch<T>,
    cfg: &FusionConfig,
    row: usize,
    col: usize,
) -> TileOutcome<T> {
    let n = cfg.patch_size;
    let tile = plane.crop(row, col, n, n);
    let input_spectrum = fft2(&tile).expect("tiles are square");

    let rotation = patch.dominant_angle.map(|patch_angle| {
        let target = tile_stroke_angle(field, row, col, n);
        normalize_angle(target - patch_angle)
    });
    let gain = match rotation {
        Some(by) => spectral_gain(&rotate_patch(&patch.l, by)).1,
        None => spectral_gain(&patch.l).1,
    };

    let alpha: T = cast(cfg.blend_alpha);
    let mut fused_spectrum = input_spectrum.clone();
    for (i, z) in fused_spectrum.data_mut().iter_mut().enumerate() {
        if i == 0 {
            continue; // DC passes through: tile mean is exactly preserved
        }
        let g = T::one() + alpha * gain.data()[i];
        *z = rustfft::num_complex::Complex::new(z.re * g, z.im * g);
    }
    let output = ifft2(&fused_spectrum);
    TileOutcome {
        row,
        col,
        rotation,
        input_spectrum,
        fused_spectrum,
        output,
    }
}

/// Runs fusion on every tile sequentially and returns the per-tile results
/// without blending them. Intended for inspection and oracle tests;
/// [`fuse_l`] is the production path.
pub fn fuse_tiles<T: Scalar>(
    plane: &Plane<T>,
    field: &OrientationField<T>,
    patch: &BrushPatch<T>,
    cfg: &FusionConfig,
) -> Result<Vec<TileOutcome<T>>, FusionError> {
    let grid = validate_fuse_inputs(plane, field, patch, cfg)?;
    Ok(grid
        .tiles
        .iter()
        .map(|&(r, c)| process_tile(plane, field, patch, cfg, r, c))
        .collect())
}

fn dump_tiles<T: Scalar>(
    dir: &Path,
    plane: &Plane<T>,
    cfg: &FusionConfig,
    tiles: &[(usize, usize)],
    outputs: &[Plane<T>],
) -> Result<(), FusionError> {
    std::fs::create_dir_all(dir).map_err(|e| FusionError::DumpIo(e.to_string()))?;
    let n = cfg.patch_size;
    for (&(row, col), output) in tiles.iter().zip(outputs) {
        let before = plane.crop(row, col, n, n);
        let base = dir.join(format!("tile_r{row:05}_c{col:05}"));
        save_plane_png(&before, &base.with_extension("before.png"), 0.0, 100.0)
            .map_err(|e| FusionError::DumpIo(e.to_string()))?;
        save_plane_png(output, &base.with_extension("after.png"), 0.0, 100.0)
            .map_err(|e| FusionError::DumpIo(e.to_string()))?;
    }
    Ok(())
}

/// Fuses the brush texture into the plane tile by tile and blends the
/// results with Hann-weighted overlap-add.
///
/// Tiles are processed independently (optionally across threads) and
/// accumulated in a fixed raster order, so the result is bit-identical for
/// any worker count.
pub fn fuse_l<T: Scalar>(
    plane: &Plane<T>,
    field: &OrientationField<T>,
    patch: &BrushPatch<T>,
    cfg: &FusionConfig,
    opts: &FuseOptions,
) -> Result<Plane<T>, FusionError> {
    let grid = validate_fuse_inputs(plane, field, patch, cfg)?;
    let tiles = &grid.tiles;

    let outputs: Vec<Plane<T>> = if opts.workers <= 1 {
        tiles
            .iter()
            .map(|&(r, c)| process_tile(plane, field, patch, cfg, r, c).output)
            .collect()
    } else {
        let mut slots: Vec<Option<Plane<T>>> = vec![None; tiles.len()];
        let chunk = tiles.len().div_ceil(opts.workers);
        std::thread::scope(|scope| {
            for (slot_chunk, tile_chunk) in slots.chunks_mut(chunk).zip(tiles.chunks(chunk)) {
                scope.spawn(move || {
                    for (slot, &(r, c)) in slot_chunk.iter_mut().zip(tile_chunk) {
                        *slot = Some(process_tile(plane, field, patch, cfg, r, c).output);
                    }
                });
            }
        });
        slots
            .into_iter()
            .map(|s| s.expect("every tile slot is filled"))
            .collect()
    };

    if let Some(dir) = &opts.dump_dir {
        dump_tiles(dir, plane, cfg, tiles, &outputs)?;
    }

    let n = cfg.patch_size;
    let (w, h) = (plane.width(), plane.height());
    let mut acc = Plane::<T>::zeros(w, h);
    let mut weight = Plane::<T>::zeros(w, h);
    for (&(row, col), output) in tiles.iter().zip(&outputs) {
        for r in 0..n {
            for c in 0..n {
                let wv = grid.weight_window.at(r, c);
                let prev = acc.at(row + r, col + c);
                acc.set(row + r, col + c, prev + wv * output.at(r, c));
                let pw = weight.at(row + r, col + c);
                weight.set(row + r, col + c, pw + wv);
            }
        }
    }
    for (a, &w) in acc.data_mut().iter_mut().zip(weight.data()) {
        debug_assert!(w > T::zero(), "the clamped grid covers every pixel");
        *a /= w;
    }
    Ok(acc)
}

/// Reassembles a Lab image from the fused L* plane and the original's
/// untouched chroma planes.
pub fn recombine<T: Scalar>(
    fused_l: Plane<T>,
    original: &LabImage<T>,
) -> Result<LabImage<T>, FusionError> {
    if fused_l.width() != original.width() || fused_l.height() != original.height() {
        return Err(FusionError::DimensionMismatch {
            left_w: fused_l.width(),
            left_h: fused_l.height(),
            right_w: original.width(),
            right_h: original.height(),
        });
    }
    Ok(LabImage::new(
        fused_l,
        original.a.clone(),
        original.b.clone(),
    ))
}

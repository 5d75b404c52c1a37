//! Impressionist oil-painting stylization.
//!
//! Turns a photograph and a reference painting into a stylized image in
//! three stages, all operating on CIE L*a*b* planes:
//!
//! 1. statistics transfer: the photo's per-channel mean and spread are
//!    matched to the painting's ([`transfer`]),
//! 2. lightness sharpening: unsharp masking with a configurable weight
//!    ([`enhance`]),
//! 3. stroke fusion: a brush patch is selected from the painting by a
//!    flatness scan ([`stroke`]), and its spectral magnitude is blended
//!    into each tile of the lightness plane in the frequency domain,
//!    rotated to follow the local edge orientation ([`fusion`]).
//!
//! Chroma passes through untouched; only lightness is sharpened and fused.
//! The numeric kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! [`pipeline`] module runs everything at `f64` and adds file I/O, trace
//! emission, and run summaries on top.
//!
//! The `Plane32`/`Plane64` family of aliases pins the two supported
//! precisions for callers that do not want to deal with the type
//! parameter.

pub mod blur;
pub mod color;
pub mod enhance;
pub mod fft;
pub mod fusion;
pub mod io;
pub mod pipeline;
pub mod raster;
pub mod scalar;
pub mod stroke;
pub mod transfer;

pub use blur::{gaussian_blur, BlurParams};
pub use color::{lab_to_rgb, lab_to_srgb8, rgb_to_lab, srgb8_to_lab};
pub use enhance::{gradient_field, smooth_orientations, usm_sharpen, OrientationField, UsmParams};
pub use fft::{fft2, ifft2, Spectrum};
pub use fusion::{
    fuse_l, recombine, FuseOptions, FusionConfig, OverlapFraction, StrokeFilter, TileGrid,
};
pub use io::{load_image, save_image, IoError};
pub use pipeline::{
    analyze, stylize, AnalyzeConfig, AnalyzeReport, PipelineError, RunConfig, RunSummary,
};
pub use raster::{LabImage, Plane, RgbImage};
pub use scalar::Scalar;
pub use stroke::{
    angular_power_profile, dominant_angle, scan_windows, select_brush_patch, AngularPowerProfile,
    BrushPatch, WindowScan,
};
pub use transfer::{channel_stats, transfer_color, ChannelStats, ColorTransferTrace};

/// Single-precision raster plane.
pub type Plane32 = raster::Plane<f32>;
/// Double-precision raster plane.
pub type Plane64 = raster::Plane<f64>;
/// Single-precision L*a*b* image.
pub type LabImage32 = raster::LabImage<f32>;
/// Double-precision L*a*b* image.
pub type LabImage64 = raster::LabImage<f64>;
/// Single-precision frequency-domain tile.
pub type Spectrum32 = fft::Spectrum<f32>;
/// Double-precision frequency-domain tile.
pub type Spectrum64 = fft::Spectrum<f64>;
/// Single-precision orientation field.
pub type OrientationField32 = enhance::OrientationField<f32>;
/// Double-precision orientation field.
pub type OrientationField64 = enhance::OrientationField<f64>;

//! PNG and JPEG file I/O for [`RgbImage`] and gray renderings of planes.

use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use image::{ExtendedColorType, ImageFormat, ImageReader};

use crate::raster::{Plane, RgbImage};
use crate::scalar::{to_f64, Scalar};

/// Errors from image file I/O.
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("unsupported image format (only PNG and JPEG are accepted): {0}")]
    UnsupportedFormat(PathBuf),
    #[error("failed to decode {path}: {message}")]
    Decode { path: PathBuf, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Loads a PNG or JPEG file as interleaved 8-bit sRGB.
///
/// Grayscale inputs are expanded to three equal channels and an alpha
/// channel, if present, is dropped. Any other on-disk format is rejected
/// with [`IoError::UnsupportedFormat`] before decoding.
pub fn load_image(path: &Path) -> Result<RgbImage, IoError> {
    let reader = ImageReader::open(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => IoError::FileNotFound(path.to_path_buf()),
        _ => IoError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    let reader = reader.with_guessed_format().map_err(|e| IoError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Jpeg) => {}
        _ => return Err(IoError::UnsupportedFormat(path.to_path_buf())),
    }
    let decoded = reader.decode().map_err(|e| IoError::Decode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let rgb = decoded.to_rgb8();
    let (w, h) = rgb.dimensions();
    Ok(RgbImage::new(w as usize, h as usize, rgb.into_raw()))
}

/// Writes the image as PNG regardless of the path's extension.
pub fn save_image(img: &RgbImage, path: &Path) -> Result<(), IoError> {
    image::save_buffer_with_format(
        path,
        img.data(),
        img.width() as u32,
        img.height() as u32,
        ExtendedColorType::Rgb8,
        ImageFormat::Png,
    )
    .map_err(|e| IoError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    })
}

/// Renders a plane to an 8-bit grayscale PNG, mapping `[lo, hi]` linearly
/// to `[0, 255]` and clamping values outside that range.
pub fn save_plane_png<T: Scalar>(
    plane: &Plane<T>,
    path: &Path,
    lo: f64,
    hi: f64,
) -> Result<(), IoError> {
    assert!(hi > lo, "gray mapping range must be non-empty");
    let scale = 255.0 / (hi - lo);
    let bytes: Vec<u8> = plane
        .data()
        .iter()
        .map(|&v| {
            let x = ((to_f64(v) - lo) * scale).clamp(0.0, 255.0);
            (x + 0.5).floor() as u8
        })
        .collect();
    image::save_buffer_with_format(
        path,
        &bytes,
        plane.width() as u32,
        plane.height() as u32,
        ExtendedColorType::L8,
        ImageFormat::Png,
    )
    .map_err(|e| IoError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    })
}

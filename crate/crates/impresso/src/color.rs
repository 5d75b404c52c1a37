//! sRGB (8-bit, D65) to CIE L*a*b* conversion and back.
//!
//! All per-pixel math runs in `f64` and is cast to the target scalar at the
//! plane boundary, so `f32` and `f64` planes see identical rounding up to
//! the final cast. The white point is taken as the exact row sums of the
//! RGB-to-XYZ matrix, which makes pure white map to L = 100, a = b = 0
//! without residue.

use crate::raster::{LabImage, Plane, RgbImage};
use crate::scalar::{cast, to_f64, Scalar};

/// Linear sRGB to XYZ (D65, 2 degree observer).
const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.41239079926595934, 0.357584339383878, 0.1804807884018343],
    [0.21263900587151027, 0.715168678767756, 0.07219231536073371],
    [0.01933081871559182, 0.11919477979462598, 0.9505321522496607],
];

/// XYZ back to linear sRGB; exact inverse of [`SRGB_TO_XYZ`] to f64 precision.
const XYZ_TO_SRGB: [[f64; 3]; 3] = [
    [3.2409699419045226, -1.537383177570094, -0.4986107602930034],
    [-0.9692436362808796, 1.8759675015077202, 0.04155505740717559],
    [
        0.05563007969699366,
        -0.20397695888897652,
        1.0569715142428786,
    ],
];

/// Reference white: row sums of [`SRGB_TO_XYZ`], i.e. the XYZ of RGB(1,1,1).
const WHITE: [f64; 3] = [0.9504559270516717, 1.0, 1.0890577507598784];

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

fn srgb_decode(c: u8) -> f64 {
    let v = c as f64 / 255.0;
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn srgb_encode(v: f64) -> f64 {
    if v <= 0.0031308 {
        12.92 * v
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

/// Converts one 8-bit sRGB pixel to L*a*b*.
pub fn srgb8_to_lab(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let lin = [srgb_decode(r), srgb_decode(g), srgb_decode(b)];
    let mut xyz = [0.0; 3];
    for (i, row) in SRGB_TO_XYZ.iter().enumerate() {
        xyz[i] = row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2];
    }
    let fx = lab_f(xyz[0] / WHITE[0]);
    let fy = lab_f(xyz[1] / WHITE[1]);
    let fz = lab_f(xyz[2] / WHITE[2]);
    (116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

/// Converts one L*a*b* triple back to 8-bit sRGB.
///
/// Out-of-gamut values are clamped to [0, 255] per channel before
/// round-half-up quantization, so any finite input maps to a valid pixel.
pub fn lab_to_srgb8(l: f64, a: f64, b: f64) -> [u8; 3] {
    let fy = (l + 16.0) / 116.0;
    let fx = a / 500.0 + fy;
    let fz = fy - b / 200.0;
    let xr = {
        let c = fx * fx * fx;
        if c > EPSILON {
            c
        } else {
            (116.0 * fx - 16.0) / KAPPA
        }
    };
    let yr = if l > KAPPA * EPSILON {
        fy * fy * fy
    } else {
        l / KAPPA
    };
    let zr = {
        let c = fz * fz * fz;
        if c > EPSILON {
            c
        } else {
            (116.0 * fz - 16.0) / KAPPA
        }
    };
    let xyz = [xr * WHITE[0], yr * WHITE[1], zr * WHITE[2]];
    let mut out = [0u8; 3];
    for (i, row) in XYZ_TO_SRGB.iter().enumerate() {
        let lin = row[0] * xyz[0] + row[1] * xyz[1] + row[2] * xyz[2];
        let encoded = srgb_encode(lin) * 255.0;
        out[i] = (encoded.clamp(0.0, 255.0) + 0.5).floor() as u8;
    }
    out
}

/// Converts an interleaved sRGB image to three L*a*b* planes.
pub fn rgb_to_lab<T: Scalar>(img: &RgbImage) -> LabImage<T> {
    let (w, h) = (img.width(), img.height());
    let mut l = Vec::with_capacity(w * h);
    let mut a = Vec::with_capacity(w * h);
    let mut b = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let [pr, pg, pb] = img.pixel(x, y);
            let (vl, va, vb) = srgb8_to_lab(pr, pg, pb);
            l.push(cast::<T>(vl));
            a.push(cast::<T>(va));
            b.push(cast::<T>(vb));
        }
    }
    LabImage::new(
        Plane::from_vec(w, h, l),
        Plane::from_vec(w, h, a),
        Plane::from_vec(w, h, b),
    )
}

/// Converts L*a*b* planes back to an interleaved 8-bit sRGB image.
pub fn lab_to_rgb<T: Scalar>(lab: &LabImage<T>) -> RgbImage {
    let (w, h) = (lab.width(), lab.height());
    let mut data = Vec::with_capacity(w * h * 3);
    for row in 0..h {
        for col in 0..w {
            let px = lab_to_srgb8(
                to_f64(lab.l.at(row, col)),
                to_f64(lab.a.at(row, col)),
                to_f64(lab.b.at(row, col)),
            );
            data.extend_from_slice(&px);
        }
    }
    RgbImage::new(w, h, data)
}

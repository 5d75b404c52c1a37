//! Global color statistics transfer in L*a*b* space.
//!
//! The content image is re-centered per channel, scaled by the ratio of the
//! style's standard deviation over its own, and shifted onto the style mean.
//! Nothing clamps here; out-of-gamut values survive until the final sRGB
//! quantization so the matched statistics stay exact.

use serde::Serialize;

use crate::raster::{LabImage, Plane};
use crate::scalar::{cast, to_f64, Scalar};

/// Threshold below which a content channel's standard deviation is treated
/// as degenerate and its scale ratio pinned to 1.
pub const DEGENERATE_SD: f64 = 1e-6;

/// Per-channel means and population standard deviations of a Lab image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelStats<T> {
    pub mean_l: T,
    pub mean_a: T,
    pub mean_b: T,
    pub sd_l: T,
    pub sd_a: T,
    pub sd_b: T,
}

impl<T: Scalar> ChannelStats<T> {
    pub fn means(&self) -> [T; 3] {
        [self.mean_l, self.mean_a, self.mean_b]
    }

    pub fn sds(&self) -> [T; 3] {
        [self.sd_l, self.sd_a, self.sd_b]
    }
}

/// Intermediate products of [`transfer_color`], kept for inspection.
///
/// `centered` holds the mean-subtracted content channels, `scaled` the same
/// after ratio scaling, `ratios` the per-channel scale factors, and
/// `degenerate` marks channels whose ratio was pinned to 1 because the
/// content standard deviation fell below [`DEGENERATE_SD`].
#[derive(Debug, Clone)]
pub struct ColorTransferTrace<T> {
    pub centered: LabImage<T>,
    pub scaled: LabImage<T>,
    pub ratios: [T; 3],
    pub degenerate: [bool; 3],
}

fn plane_mean_sd<T: Scalar>(plane: &Plane<T>) -> (T, T) {
    // two sequential f64 passes; deterministic regardless of scalar type
    let n = plane.data().len() as f64;
    let mut sum = 0.0;
    for &v in plane.data() {
        sum += to_f64(v);
    }
    let mean = sum / n;
    let mut sq = 0.0;
    for &v in plane.data() {
        let d = to_f64(v) - mean;
        sq += d * d;
    }
    (cast(mean), cast((sq / n).sqrt()))
}

/// Per-channel arithmetic mean and population standard deviation (divide by
/// N, not N-1) over all pixels.
pub fn channel_stats<T: Scalar>(img: &LabImage<T>) -> ChannelStats<T> {
    let (mean_l, sd_l) = plane_mean_sd(&img.l);
    let (mean_a, sd_a) = plane_mean_sd(&img.a);
    let (mean_b, sd_b) = plane_mean_sd(&img.b);
    ChannelStats {
        mean_l,
        mean_a,
        mean_b,
        sd_l,
        sd_a,
        sd_b,
    }
}

/// Applies per-channel statistics transfer:
/// `out = (content - mean_content) * (sd_style / sd_content) + mean_style`.
///
/// A content channel with standard deviation below [`DEGENERATE_SD`] gets
/// ratio 1, which collapses it onto the style mean; the trace records which
/// channels took that path.
pub fn transfer_color<T: Scalar>(
    content: &LabImage<T>,
    style_stats: &ChannelStats<T>,
    content_stats: &ChannelStats<T>,
) -> (LabImage<T>, ColorTransferTrace<T>) {
    let mut ratios = [T::one(); 3];
    let mut degenerate = [false; 3];
    let content_sds = content_stats.sds();
    let style_sds = style_stats.sds();
    for c in 0..3 {
        if to_f64(content_sds[c]) < DEGENERATE_SD {
            degenerate[c] = true;
        } else {
            ratios[c] = style_sds[c] / content_sds[c];
        }
    }

    let content_means = content_stats.means();
    let style_means = style_stats.means();
    let mut centered = Vec::with_capacity(3);
    let mut scaled = Vec::with_capacity(3);
    let mut out = Vec::with_capacity(3);
    for (c, plane) in content.planes().into_iter().enumerate() {
        let cen = plane.map(|v| v - content_means[c]);
        let sca = cen.map(|v| v * ratios[c]);
        out.push(sca.map(|v| v + style_means[c]));
        centered.push(cen);
        scaled.push(sca);
    }
    let [ol, oa, ob] = <[Plane<T>; 3]>::try_from(out).unwrap();
    let [cl, ca, cb] = <[Plane<T>; 3]>::try_from(centered).unwrap();
    let [sl, sa, sb] = <[Plane<T>; 3]>::try_from(scaled).unwrap();
    (
        LabImage::new(ol, oa, ob),
        ColorTransferTrace {
            centered: LabImage::new(cl, ca, cb),
            scaled: LabImage::new(sl, sa, sb),
            ratios,
            degenerate,
        },
    )
}

//! End-to-end stylization and analysis runs.
//!
//! All pipeline math runs on `f64` planes: load both images, convert to
//! L*a*b*, match the photo's channel statistics to the painting, sharpen
//! lightness, extract the orientation field from a blurred-then-sharpened
//! copy, select the brush patch from the painting, fuse it tile by tile
//! into the lightness plane, and recombine with the untouched chroma.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::blur::{gaussian_blur, BlurError};
use crate::color::{lab_to_rgb, rgb_to_lab};
use crate::enhance::{gradient_field, smooth_orientations, usm_sharpen, EnhanceError};
use crate::fft::FftError;
use crate::fusion::{fuse_l, recombine, FuseOptions, FusionConfig, FusionError};
use crate::io::{load_image, save_image, save_plane_png, IoError};
use crate::raster::{LabImage, Plane, RgbImage};
use crate::scalar::to_f64;
use crate::stroke::{angular_power_profile, scan_windows, select_brush_patch, StrokeError};
use crate::transfer::{channel_stats, transfer_color, ChannelStats};

/// Errors from pipeline runs; the CLI separates I/O failures (exit 2) from
/// processing failures (exit 3) via [`PipelineError::is_io`].
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Blur(#[from] BlurError),
    #[error(transparent)]
    Enhance(#[from] EnhanceError),
    #[error(transparent)]
    Stroke(#[from] StrokeError),
    #[error(transparent)]
    Fft(#[from] FftError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error("failed to write {path}: {message}")]
    Emit { path: PathBuf, message: String },
}

impl PipelineError {
    /// True for failures reading or writing files, as opposed to
    /// processing failures.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            PipelineError::Io(_)
                | PipelineError::Emit { .. }
                | PipelineError::Fusion(FusionError::DumpIo(_))
        )
    }
}

/// Everything a stylization run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub content_path: PathBuf,
    pub style_path: PathBuf,
    pub output_path: PathBuf,
    pub fusion: FusionConfig,
    /// Stride of the brush-patch scan over the painting.
    pub stride: usize,
    /// Bypass the statistics transfer (ablation); fusion still runs.
    pub skip_color_transfer: bool,
    /// Recorded for reproducibility of synthetic-data runs; the pipeline
    /// itself is deterministic and never draws random numbers.
    pub seed: u64,
    /// Write intermediate planes and the transfer trace next to the output.
    pub emit_trace: bool,
    /// Worker threads for tile fusion; any value produces identical bytes.
    pub workers: usize,
    /// Write the run summary as JSON here.
    pub summary_path: Option<PathBuf>,
    /// Write per-tile before/after PNGs here.
    pub dump_tiles: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for everything but the three paths.
    pub fn new(content: PathBuf, style: PathBuf, output: PathBuf) -> Self {
        RunConfig {
            content_path: content,
            style_path: style,
            output_path: output,
            fusion: FusionConfig::default(),
            stride: 64,
            skip_color_transfer: false,
            seed: 0,
            emit_trace: false,
            workers: 1,
            summary_path: None,
            dump_tiles: None,
        }
    }
}

/// Per-run record: config echo, channel statistics, and patch facts.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub content_path: String,
    pub style_path: String,
    pub output_path: String,
    pub width: usize,
    pub height: usize,
    pub patch_size: usize,
    pub overlap: String,
    pub blend_alpha: f64,
    pub usm_weight: f64,
    pub usm_sigma: f64,
    pub orientation_window: usize,
    pub stride: usize,
    pub skip_color_transfer: bool,
    pub seed: u64,
    pub content_stats: ChannelStats<f64>,
    pub style_stats: ChannelStats<f64>,
    /// Statistics of the Lab image entering sharpening and fusion; equals
    /// `style_stats` (up to degenerate channels) unless the transfer was
    /// skipped.
    pub post_transfer_stats: ChannelStats<f64>,
    /// Per-channel scale ratios of the transfer; absent when skipped.
    pub transfer_ratios: Option<[f64; 3]>,
    /// Channels whose ratio was pinned to 1; absent when skipped.
    pub degenerate_channels: Option<[bool; 3]>,
    pub patch_origin: (usize, usize),
    pub patch_sd: f64,
    pub patch_dominant_angle: Option<f64>,
    /// Mean L* of the final quantized image.
    pub output_mean_l: f64,
}

fn emit(path: &Path, contents: &str) -> Result<(), PipelineError> {
    std::fs::write(path, contents).map_err(|e| PipelineError::Emit {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn lab_csv(img: &LabImage<f64>) -> String {
    let mut out = String::with_capacity(img.width() * img.height() * 24);
    out.push_str("row,col,L,a,b\n");
    for row in 0..img.height() {
        for col in 0..img.width() {
            // `{}` prints the shortest decimal that parses back to the
            // same f64, so the CSV is a lossless dump
            writeln!(
                out,
                "{},{},{},{},{}",
                row,
                col,
                img.l.at(row, col),
                img.a.at(row, col),
                img.b.at(row, col)
            )
            .expect("writing to a String cannot fail");
        }
    }
    out
}

fn plane_bounds(plane: &Plane<f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in plane.data() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, lo + 0.5)
    } else {
        (lo, hi)
    }
}

/// Runs the full stylization chain and writes the output PNG; returns the
/// final image and the run summary.
pub fn stylize(cfg: &RunConfig) -> Result<(RgbImage, RunSummary), PipelineError> {
    let content = load_image(&cfg.content_path)?;
    let style = load_image(&cfg.style_path)?;
    let content_lab: LabImage<f64> = rgb_to_lab(&content);
    let style_lab: LabImage<f64> = rgb_to_lab(&style);
    let content_stats = channel_stats(&content_lab);
    let style_stats = channel_stats(&style_lab);

    let (working, trace) = if cfg.skip_color_transfer {
        (content_lab, None)
    } else {
        let (img, tr) = transfer_color(&content_lab, &style_stats, &content_stats);
        (img, Some(tr))
    };
    let post_transfer_stats = channel_stats(&working);

    let enhanced = usm_sharpen(&working.l, &cfg.fusion.usm);
    // orientation reads the blurred-then-sharpened copy: coarse, stable edges
    let boundary = usm_sharpen(
        &gaussian_blur(&working.l, &cfg.fusion.usm.blur),
        &cfg.fusion.usm,
    );
    let field = smooth_orientations(&gradient_field(&boundary)?, cfg.fusion.orientation_window);

    let patch = select_brush_patch(&style_lab, cfg.fusion.patch_size, cfg.stride)?;

    let opts = FuseOptions {
        workers: cfg.workers,
        dump_dir: cfg.dump_tiles.clone(),
    };
    let fused = fuse_l(&enhanced, &field, &patch, &cfg.fusion, &opts)?;
    let out_lab = recombine(fused, &working)?;
    let out_rgb = lab_to_rgb(&out_lab);
    save_image(&out_rgb, &cfg.output_path)?;

    let final_lab: LabImage<f64> = rgb_to_lab(&out_rgb);
    let summary = RunSummary {
        content_path: cfg.content_path.display().to_string(),
        style_path: cfg.style_path.display().to_string(),
        output_path: cfg.output_path.display().to_string(),
        width: out_rgb.width(),
        height: out_rgb.height(),
        patch_size: cfg.fusion.patch_size,
        overlap: cfg.fusion.overlap.to_string(),
        blend_alpha: cfg.fusion.blend_alpha,
        usm_weight: cfg.fusion.usm.weight(),
        usm_sigma: cfg.fusion.usm.blur.sigma(),
        orientation_window: cfg.fusion.orientation_window,
        stride: cfg.stride,
        skip_color_transfer: cfg.skip_color_transfer,
        seed: cfg.seed,
        content_stats,
        style_stats,
        post_transfer_stats,
        transfer_ratios: trace.as_ref().map(|t| {
            [
                to_f64(t.ratios[0]),
                to_f64(t.ratios[1]),
                to_f64(t.ratios[2]),
            ]
        }),
        degenerate_channels: trace.as_ref().map(|t| t.degenerate),
        patch_origin: patch.origin,
        patch_sd: to_f64(patch.sd),
        patch_dominant_angle: patch.dominant_angle,
        output_mean_l: to_f64(final_lab.l.mean()),
    };

    if let Some(path) = &cfg.summary_path {
        let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        emit(path, &json)?;
    }

    if cfg.emit_trace {
        let stem = cfg
            .output_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "output".to_string());
        let dir = cfg
            .output_path
            .parent()
            .map(|p| p.to_path_buf())
            .unwrap_or_default()
            .join(format!("{stem}_trace"));
        std::fs::create_dir_all(&dir).map_err(|e| PipelineError::Emit {
            path: dir.clone(),
            message: e.to_string(),
        })?;

        emit(&dir.join("post_transfer_lab.csv"), &lab_csv(&working))?;
        save_image(&lab_to_rgb(&working), &dir.join("post_transfer.png"))?;
        save_plane_png(&enhanced, &dir.join("enhanced_l.png"), 0.0, 100.0)?;
        save_plane_png(&field.angle, &dir.join("orientation_angle.png"), 0.0, 180.0)?;
        save_plane_png(
            &field.magnitude,
            &dir.join("orientation_coherence.png"),
            0.0,
            1.0,
        )?;
        save_plane_png(&patch.l, &dir.join("patch.png"), 0.0, 100.0)?;
        if let Some(t) = &trace {
            let (lo, hi) = plane_bounds(&t.centered.l);
            save_plane_png(&t.centered.l, &dir.join("centered_l.png"), lo, hi)?;
            let (lo, hi) = plane_bounds(&t.scaled.l);
            save_plane_png(&t.scaled.l, &dir.join("scaled_l.png"), lo, hi)?;
        }
        let trace_json = serde_json::json!({
            "ratios": summary.transfer_ratios,
            "degenerate_channels": summary.degenerate_channels,
            "content_stats": summary.content_stats,
            "style_stats": summary.style_stats,
            "post_transfer_stats": summary.post_transfer_stats,
        });
        emit(
            &dir.join("trace.json"),
            &serde_json::to_string_pretty(&trace_json).unwrap(),
        )?;
    }

    Ok((out_rgb, summary))
}

/// What to analyze and where to put the results.
#[derive(Debug, Clone)]
pub struct AnalyzeConfig {
    pub style_path: PathBuf,
    pub window: usize,
    pub stride: usize,
    pub out_dir: PathBuf,
    /// Also render the painting's orientation field as an angle map PNG.
    pub angle_map: bool,
}

/// Results of an analysis run; the files live in `AnalyzeConfig::out_dir`.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub origin: (usize, usize),
    pub sd: f64,
    pub dominant_angle: Option<f64>,
    pub window_count: usize,
}

impl AnalyzeReport {
    /// The one-line human-readable summary the CLI prints.
    pub fn summary_line(&self) -> String {
        let angle = match self.dominant_angle {
            Some(a) => format!("{a:.1} deg"),
            None => "none".to_string(),
        };
        format!(
            "patch origin ({}, {}), sd {:.6}, dominant angle {}",
            self.origin.0, self.origin.1, self.sd, angle
        )
    }
}

/// Scans a painting, writes the brush patch PNG, the window-scan CSV
/// (`row,col,sd`), the angular power CSV (`degree,power,count`), and
/// optionally an angle map; returns the patch facts.
pub fn analyze(cfg: &AnalyzeConfig) -> Result<AnalyzeReport, PipelineError> {
    let style = load_image(&cfg.style_path)?;
    let style_lab: LabImage<f64> = rgb_to_lab(&style);

    let scan = scan_windows(&style_lab.l, cfg.window, cfg.stride)?;
    let patch = select_brush_patch(&style_lab, cfg.window, cfg.stride)?;
    let profile = angular_power_profile(&patch.l)?;

    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| PipelineError::Emit {
        path: cfg.out_dir.clone(),
        message: e.to_string(),
    })?;

    save_plane_png(&patch.l, &cfg.out_dir.join("patch.png"), 0.0, 100.0)?;

    let mut scan_csv = String::from("row,col,sd\n");
    for e in &scan.entries {
        writeln!(scan_csv, "{},{},{}", e.row, e.col, e.sd).expect("string write");
    }
    emit(&cfg.out_dir.join("window_scan.csv"), &scan_csv)?;

    let mut power_csv = String::from("degree,power,count\n");
    for (deg, (power, count)) in profile.bins.iter().zip(&profile.counts).enumerate() {
        writeln!(power_csv, "{},{},{}", deg, power, count).expect("string write");
    }
    emit(&cfg.out_dir.join("angular_power.csv"), &power_csv)?;

    if cfg.angle_map {
        let field = smooth_orientations(&gradient_field(&style_lab.l)?, 9);
        save_plane_png(&field.angle, &cfg.out_dir.join("angle_map.png"), 0.0, 180.0)?;
    }

    Ok(AnalyzeReport {
        origin: patch.origin,
        sd: to_f64(patch.sd),
        dominant_angle: patch.dominant_angle,
        window_count: scan.entries.len(),
    })
}

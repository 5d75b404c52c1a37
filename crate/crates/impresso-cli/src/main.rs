//! Command-line front end: `stylize` renders a photo in the style of a
//! reference oil painting, `analyze` inspects a painting's stroke texture.
//!
//! Exit codes are stable for scripting: 0 success, 1 usage, 2 file I/O,
//! 3 processing.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use impresso::{
    analyze, stylize, AnalyzeConfig, BlurParams, FusionConfig, OverlapFraction, PipelineError,
    RunConfig, UsmParams,
};

#[derive(Parser)]
#[command(
    name = "impresso",
    version,
    about = "Impressionist oil-painting stylization",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a photo in the style of a reference painting
    Stylize(StylizeArgs),
    /// Scan a painting: brush patch, window flatness, angular power
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct StylizeArgs {
    /// Photo to stylize (PNG or JPEG)
    #[arg(short, long, value_name = "FILE")]
    content: PathBuf,

    /// Reference painting (PNG or JPEG)
    #[arg(short, long, value_name = "FILE")]
    style: PathBuf,

    /// Output PNG
    #[arg(short, long, value_name = "FILE")]
    output: PathBuf,

    /// Brush patch side in pixels, 8 or larger
    #[arg(long, default_value_t = 64, value_name = "PX")]
    patch_size: usize,

    /// Stride of the brush-patch scan over the painting
    #[arg(long, default_value_t = 64, value_name = "PX")]
    stride: usize,

    /// Tile overlap as a fraction of the patch: 1/8, 1/4 or 1/2
    #[arg(long, default_value = "1/4", value_parser = parse_overlap)]
    overlap: OverlapFraction,

    /// Stroke blend strength; 0 leaves the lightness plane unchanged
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,

    /// Sharpening weight w in (D1 - w.D2)/(1 - w), within [0.1, 0.9]
    #[arg(long, default_value_t = 0.6, value_name = "W")]
    usm_weight: f64,

    /// Gaussian sigma of the sharpening blur
    #[arg(long, default_value_t = 2.0, value_name = "SIGMA")]
    usm_sigma: f64,

    /// Odd window for orientation smoothing
    #[arg(long, default_value_t = 9, value_name = "PX")]
    orientation_window: usize,

    /// Skip the color-statistics transfer (ablation)
    #[arg(long)]
    skip_color_transfer: bool,

    /// Write intermediate planes and the transfer trace next to the output
    #[arg(long)]
    emit_trace: bool,

    /// Write a JSON run summary to this file
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,

    /// Write per-tile before/after PNGs into this directory
    #[arg(long, value_name = "DIR")]
    dump_tiles: Option<PathBuf>,

    /// Worker threads for tile fusion; the output is byte-identical for
    /// any count
    #[arg(long, default_value_t = 1, value_name = "N")]
    workers: usize,

    /// Recorded in the summary for reproducing synthetic inputs
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Painting to analyze (PNG or JPEG)
    #[arg(short, long, value_name = "FILE")]
    style: PathBuf,

    /// Scan window side in pixels
    #[arg(long, default_value_t = 64, value_name = "PX")]
    window: usize,

    /// Scan stride in pixels
    #[arg(long, default_value_t = 64, value_name = "PX")]
    stride: usize,

    /// Directory for patch.png, window_scan.csv and angular_power.csv
    #[arg(long, default_value = ".", value_name = "DIR")]
    out_dir: PathBuf,

    /// Also render the painting's orientation field as angle_map.png
    #[arg(long)]
    angle_map: bool,
}

fn parse_overlap(s: &str) -> Result<OverlapFraction, String> {
    s.parse()
        .map_err(|e: impresso::fusion::FusionError| e.to_string())
}

enum CliError {
    Usage(String),
    Pipeline(PipelineError),
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::Pipeline(e)
    }
}

fn run_stylize(args: StylizeArgs) -> Result<(), CliError> {
    // parameter ranges are enforced by the library constructors; surface
    // violations as usage errors before any file is touched
    let usage = |m: String| CliError::Usage(m);
    if args.stride == 0 {
        return Err(usage("--stride must be at least 1".into()));
    }
    if args.workers == 0 {
        return Err(usage("--workers must be at least 1".into()));
    }
    let blur = BlurParams::new(args.usm_sigma).map_err(|e| usage(e.to_string()))?;
    let usm = UsmParams::new(args.usm_weight, blur).map_err(|e| usage(e.to_string()))?;
    let fusion = FusionConfig::new(
        args.patch_size,
        args.overlap,
        args.alpha,
        usm,
        args.orientation_window,
    )
    .map_err(|e| usage(e.to_string()))?;

    let cfg = RunConfig {
        content_path: args.content,
        style_path: args.style,
        output_path: args.output,
        fusion,
        stride: args.stride,
        skip_color_transfer: args.skip_color_transfer,
        seed: args.seed,
        emit_trace: args.emit_trace,
        workers: args.workers,
        summary_path: args.summary,
        dump_tiles: args.dump_tiles,
    };
    let (image, summary) = stylize(&cfg)?;
    println!(
        "wrote {} ({}x{})",
        summary.output_path,
        image.width(),
        image.height()
    );
    let angle = summary
        .patch_dominant_angle
        .map(|a| format!("{a:.1} deg"))
        .unwrap_or_else(|| "none".into());
    println!(
        "patch origin ({}, {}), sd {:.4}, dominant angle {angle}",
        summary.patch_origin.0, summary.patch_origin.1, summary.patch_sd
    );
    Ok(())
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    if args.stride == 0 {
        return Err(CliError::Usage("--stride must be at least 1".into()));
    }
    if args.window == 0 {
        return Err(CliError::Usage("--window must be at least 1".into()));
    }
    let cfg = AnalyzeConfig {
        style_path: args.style,
        window: args.window,
        stride: args.stride,
        out_dir: args.out_dir,
        angle_map: args.angle_map,
    };
    let report = analyze(&cfg)?;
    println!("{}", report.summary_line());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version print to stdout and succeed; everything
            // else is a usage error on stderr
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    let result = match cli.command {
        Command::Stylize(args) => run_stylize(args),
        Command::Analyze(args) => run_analyze(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Pipeline(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 3 })
        }
    }
}

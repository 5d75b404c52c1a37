//! Regenerates the bundled sample images in `assets/`.
//!
//! The repository ships five deterministic 512x512 synthetic PNGs: two
//! photograph-like scenes and three painting-like textures (two with a
//! uniform stroke direction, one pointillist). Everything is derived from
//! fixed ChaCha8 seeds, so the files are bit-reproducible:
//!
//! ```text
//! cargo run --release -p impresso --example generate_samples
//! ```
//!
//! After writing the files the generator prints the patch facts the test
//! suite relies on (selection origin, sd, dominant stroke angle).

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use impresso::{rgb_to_lab, save_image, select_brush_patch, LabImage64, RgbImage};

const N: usize = 512;

/// Smooth tileable noise: a random lattice sampled with smoothstep
/// bilinear interpolation, values in [-1, 1].
struct ValueNoise {
    cells: usize,
    lattice: Vec<f64>,
}

impl ValueNoise {
    fn new(rng: &mut ChaCha8Rng, cells: usize) -> Self {
        let lattice = (0..cells * cells)
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        ValueNoise { cells, lattice }
    }

    /// Samples at (x, y) in lattice-cell units, wrapping.
    fn at(&self, x: f64, y: f64) -> f64 {
        let fade = |t: f64| t * t * (3.0 - 2.0 * t);
        let n = self.cells as f64;
        let (x, y) = (x.rem_euclid(n), y.rem_euclid(n));
        let (x0, y0) = (
            x.floor() as usize % self.cells,
            y.floor() as usize % self.cells,
        );
        let (x1, y1) = ((x0 + 1) % self.cells, (y0 + 1) % self.cells);
        let (u, v) = (fade(x.fract()), fade(y.fract()));
        let g = |cx: usize, cy: usize| self.lattice[cy * self.cells + cx];
        let top = g(x0, y0) * (1.0 - u) + g(x1, y0) * u;
        let bot = g(x0, y1) * (1.0 - u) + g(x1, y1) * u;
        top * (1.0 - v) + bot * v
    }
}

fn px(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn build(f: impl Fn(usize, usize) -> (f64, f64, f64)) -> RgbImage {
    let mut data = Vec::with_capacity(N * N * 3);
    for y in 0..N {
        for x in 0..N {
            let (r, g, b) = f(x, y);
            data.push(px(r));
            data.push(px(g));
            data.push(px(b));
        }
    }
    RgbImage::new(N, N, data)
}

/// Lake at dusk: gradient sky with a sun glow, hill silhouette, streaked
/// water. Smooth mid-range values so sharpening stays inside the gamut.
fn photo_lake() -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let coarse = ValueNoise::new(&mut rng, 8);
    let fine = ValueNoise::new(&mut rng, 48);
    build(|x, y| {
        let fx = x as f64 / N as f64;
        let fy = y as f64 / N as f64;
        let horizon = 0.52 + 0.04 * (fx * 7.0).sin() * (fx * 2.3 + 0.8).cos();
        let sun = {
            let dx = fx - 0.68;
            let dy = fy - 0.30;
            (-(dx * dx + dy * dy) / (2.0 * 0.06 * 0.06)).exp()
        };
        let grain = 5.0 * fine.at(fx * 48.0, fy * 48.0) + 7.0 * coarse.at(fx * 8.0, fy * 8.0);
        if fy < horizon {
            let t = fy / horizon;
            let r = 150.0 + 70.0 * t + 45.0 * sun + grain;
            let g = 160.0 + 40.0 * t + 30.0 * sun + grain;
            let b = 200.0 - 30.0 * t + 10.0 * sun + grain;
            (r, g, b)
        } else if fy < horizon + 0.10 + 0.05 * (fx * 9.0 + 1.7).sin().abs() {
            // hill band
            let r = 70.0 + grain * 0.8;
            let g = 88.0 + 14.0 * coarse.at(fx * 8.0 + 3.0, fy * 8.0) + grain * 0.8;
            let b = 78.0 + grain * 0.8;
            (r, g, b)
        } else {
            // water: streaks stretched horizontally
            let t = (fy - horizon) / (1.0 - horizon);
            let streak = 9.0 * fine.at(fx * 48.0, fy * 170.0);
            let r = 90.0 + 45.0 * t + streak + grain;
            let g = 110.0 + 35.0 * t + streak + grain;
            let b = 150.0 + 15.0 * t + streak + grain;
            (r, g, b)
        }
    })
}

/// Dunes: warm gradient with rolling ridge bands.
fn photo_dunes() -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let coarse = ValueNoise::new(&mut rng, 8);
    let fine = ValueNoise::new(&mut rng, 48);
    build(|x, y| {
        let fx = x as f64 / N as f64;
        let fy = y as f64 / N as f64;
        let wobble = 0.08 * (fx * std::f64::consts::TAU * 1.5).sin()
            + 0.05 * coarse.at(fx * 8.0 + 11.0, fy * 8.0);
        let ridges = 16.0 * ((fy + wobble) * std::f64::consts::TAU * 5.0).sin() * (0.3 + 0.7 * fy);
        let grain = 6.0 * fine.at(fx * 48.0, fy * 48.0) + 5.0 * coarse.at(fx * 8.0, fy * 8.0);
        let r = 205.0 - 75.0 * fy + ridges + grain;
        let g = 170.0 - 70.0 * fy + ridges * 0.9 + grain;
        let b = 125.0 - 55.0 * fy + ridges * 0.7 + grain;
        (r, g, b)
    })
}

/// Painting-like texture with stroke ridges along `stroke_deg` (image
/// space, y down, mod 180). Two sinusoids across the stroke normal give
/// the ridges; slow phase drift and grain keep them organic.
fn stroke_painting(
    seed: u64,
    stroke_deg: f64,
    lambda: (f64, f64),
    amp: (f64, f64),
    palette: impl Fn(f64, f64) -> (f64, f64, f64),
) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drift = ValueNoise::new(&mut rng, 6);
    let grain = ValueNoise::new(&mut rng, 64);
    let normal = (stroke_deg + 90.0).to_radians();
    let (nx, ny) = (normal.cos(), normal.sin());
    build(|x, y| {
        let fx = x as f64 / N as f64;
        let fy = y as f64 / N as f64;
        let t = x as f64 * nx + y as f64 * ny;
        let phase = 2.4 * drift.at(fx * 6.0, fy * 6.0);
        let ridge = amp.0 * (std::f64::consts::TAU * t / lambda.0 + phase).cos()
            + amp.1 * (std::f64::consts::TAU * t / lambda.1 + 1.9 * phase).cos();
        let tone = ridge + 5.0 * grain.at(fx * 64.0, fy * 64.0);
        let (r, g, b) = palette(fx, fy);
        (r + tone, g + tone, b + tone * 0.9)
    })
}

/// Sunset palette: warm center fading to violet corners, strokes at 30.
fn painting_sunset() -> RgbImage {
    stroke_painting(303, 30.0, (9.0, 17.0), (13.0, 9.0), |fx, fy| {
        let dx = fx - 0.5;
        let dy = fy - 0.72;
        let d = (dx * dx + dy * dy).sqrt();
        let warm = (1.0 - d * 1.5).clamp(0.0, 1.0);
        let r = 135.0 + 95.0 * warm;
        let g = 85.0 + 75.0 * warm;
        let b = 120.0 - 35.0 * warm + 30.0 * d;
        (r, g, b)
    })
}

/// Cool reeds palette, strokes at 120.
fn painting_reeds() -> RgbImage {
    stroke_painting(404, 120.0, (8.0, 15.0), (14.0, 8.0), |fx, fy| {
        let r = 70.0 + 25.0 * fy + 15.0 * fx;
        let g = 115.0 + 20.0 * (1.0 - fy);
        let b = 95.0 + 35.0 * fy;
        (r, g, b)
    })
}

/// Pointillist field: thousands of small color dabs over a gentle
/// gradient; no preferred stroke direction.
fn painting_dots() -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    // flat base with only soft wash variation: a directional base gradient
    // would put low-frequency power along one orientation and hand the
    // patch a spurious dominant angle
    let wash = ValueNoise::new(&mut rng, 5);
    let mut canvas = vec![0.0f64; N * N * 3];
    for y in 0..N {
        for x in 0..N {
            let fx = x as f64 / N as f64;
            let fy = y as f64 / N as f64;
            let i = (y * N + x) * 3;
            canvas[i] = 158.0 + 6.0 * wash.at(fx * 5.0, fy * 5.0);
            canvas[i + 1] = 148.0 + 6.0 * wash.at(fx * 5.0 + 2.0, fy * 5.0);
            canvas[i + 2] = 108.0 + 6.0 * wash.at(fx * 5.0, fy * 5.0 + 2.0);
        }
    }
    for _ in 0..9000 {
        let cx = rng.gen_range(0..N) as i64;
        let cy = rng.gen_range(0..N) as i64;
        let radius = rng.gen_range(2..=4) as i64;
        let dr = rng.gen_range(-26.0..26.0);
        let dg = rng.gen_range(-26.0..26.0);
        let db = rng.gen_range(-26.0..26.0);
        for dy in -radius..=radius {
            for dx in -radius..=radius {
                if dx * dx + dy * dy > radius * radius {
                    continue;
                }
                let x = (cx + dx).rem_euclid(N as i64) as usize;
                let y = (cy + dy).rem_euclid(N as i64) as usize;
                let i = (y * N + x) * 3;
                canvas[i] = 0.3 * canvas[i] + 0.7 * (canvas[i] + dr);
                canvas[i + 1] = 0.3 * canvas[i + 1] + 0.7 * (canvas[i + 1] + dg);
                canvas[i + 2] = 0.3 * canvas[i + 2] + 0.7 * (canvas[i + 2] + db);
            }
        }
    }
    let data = canvas.iter().map(|&v| px(v)).collect();
    RgbImage::new(N, N, data)
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../assets");
    std::fs::create_dir_all(&dir).expect("create assets dir");

    let images: [(&str, RgbImage); 5] = [
        ("photo_lake.png", photo_lake()),
        ("photo_dunes.png", photo_dunes()),
        ("painting_sunset.png", painting_sunset()),
        ("painting_reeds.png", painting_reeds()),
        ("painting_dots.png", painting_dots()),
    ];

    for (name, img) in &images {
        let path = dir.join(name);
        save_image(img, &path).expect("write sample");
        let lab: LabImage64 = rgb_to_lab(img);
        println!(
            "{name}: {}x{}, mean L* {:.3}",
            img.width(),
            img.height(),
            lab.l.mean()
        );
        if name.starts_with("painting") {
            let patch = select_brush_patch(&lab, 64, 64).expect("patch");
            let angle = patch
                .dominant_angle
                .map(|a| format!("{a:.1} deg"))
                .unwrap_or_else(|| "none".into());
            println!(
                "  patch origin {:?}, sd {:.4}, dominant angle {angle}",
                patch.origin, patch.sd
            );
        }
    }
}

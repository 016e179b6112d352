//! Helpers shared by the CLI integration tests: a deterministic synthetic
//! image generator and process-spawning utilities.
#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trained_filter::frame_io::write_pgm;
use trained_filter::LumaPlane;

/// A detailed, noise-free synthetic test image: a gradient base layered
/// with solid rectangles and ellipses, sinusoidal texture patches, and
/// lines. Deterministic in `seed`.
///
/// Structured content like this is what the per-class filters can actually
/// learn; uncorrelated pixel noise would only poison the training pairs.
pub fn synthetic_plane(width: usize, height: usize, seed: u64) -> LumaPlane {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = width as f64;
    let h = height as f64;
    let mut img = vec![0.0f64; width * height];

    // Gradient base with a random orientation.
    let base = rng.gen_range(25.0..75.0);
    let span = rng.gen_range(90.0..170.0);
    let flip_x = rng.gen_bool(0.5);
    let flip_y = rng.gen_bool(0.5);
    for y in 0..height {
        for x in 0..width {
            let gx = if flip_x { w - 1.0 - x as f64 } else { x as f64 };
            let gy = if flip_y { h - 1.0 - y as f64 } else { y as f64 };
            img[y * width + x] = base + span * (gx + gy) / (w + h);
        }
    }

    // Solid rectangles and ellipses, blended over the background.
    for _ in 0..rng.gen_range(12..=20) {
        let cx = rng.gen_range(0.0..w);
        let cy = rng.gen_range(0.0..h);
        let rx = rng.gen_range(w * 0.03..w * 0.18);
        let ry = rng.gen_range(h * 0.03..h * 0.18);
        let value = rng.gen_range(0.0..255.0);
        let ellipse = rng.gen_bool(0.5);
        stamp(&mut img, width, height, cx, cy, rx, ry, |old, x, y| {
            let inside = if ellipse {
                let dx = (x - cx) / rx;
                let dy = (y - cy) / ry;
                dx * dx + dy * dy <= 1.0
            } else {
                true
            };
            if inside {
                0.35 * old + 0.65 * value
            } else {
                old
            }
        });
    }

    // Sinusoidal texture inside elliptic patches.
    for _ in 0..rng.gen_range(4..=8) {
        let cx = rng.gen_range(0.0..w);
        let cy = rng.gen_range(0.0..h);
        let rx = rng.gen_range(w * 0.05..w * 0.20);
        let ry = rng.gen_range(h * 0.05..h * 0.20);
        let amp = rng.gen_range(8.0..36.0);
        let fx = rng.gen_range(0.05..0.45);
        let fy = rng.gen_range(0.05..0.45);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        stamp(&mut img, width, height, cx, cy, rx, ry, |old, x, y| {
            let dx = (x - cx) / rx;
            let dy = (y - cy) / ry;
            if dx * dx + dy * dy <= 1.0 {
                old + amp * (fx * x + fy * y + phase).sin()
            } else {
                old
            }
        });
    }

    // Lines of varying thickness.
    for _ in 0..rng.gen_range(3..=7) {
        let x0 = rng.gen_range(0.0..w);
        let y0 = rng.gen_range(0.0..h);
        let x1 = rng.gen_range(0.0..w);
        let y1 = rng.gen_range(0.0..h);
        let half = rng.gen_range(1..=4) as f64 / 2.0;
        let value = rng.gen_range(0.0..255.0);
        for y in 0..height {
            for x in 0..width {
                if segment_distance(x as f64, y as f64, x0, y0, x1, y1) <= half {
                    let p = &mut img[y * width + x];
                    *p = 0.3 * *p + 0.7 * value;
                }
            }
        }
    }

    LumaPlane::from_fn(width, height, |x, y| {
        img[y * width + x].round().clamp(0.0, 255.0) as u8
    })
    .expect("generator dimensions are valid")
}

/// Applies `f` over the bounding box of an (cx, cy, rx, ry) region.
#[allow(clippy::too_many_arguments)]
fn stamp<F>(
    img: &mut [f64],
    width: usize,
    height: usize,
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
    f: F,
) where
    F: Fn(f64, f64, f64) -> f64,
{
    let x_lo = (cx - rx).floor().max(0.0) as usize;
    let x_hi = ((cx + rx).ceil() as usize).min(width.saturating_sub(1));
    let y_lo = (cy - ry).floor().max(0.0) as usize;
    let y_hi = ((cy + ry).ceil() as usize).min(height.saturating_sub(1));
    for y in y_lo..=y_hi {
        for x in x_lo..=x_hi {
            let p = &mut img[y * width + x];
            *p = f(*p, x as f64, y as f64);
        }
    }
}

fn segment_distance(px: f64, py: f64, x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    let (dx, dy) = (x1 - x0, y1 - y0);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - x0) * dx + (py - y0) * dy) / len2).clamp(0.0, 1.0)
    };
    let (nx, ny) = (x0 + t * dx, y0 + t * dy);
    ((px - nx).powi(2) + (py - ny).powi(2)).sqrt()
}

/// Writes a synthetic image to `<dir>/<name>.pgm` and returns its path.
pub fn write_synthetic_pgm(
    dir: &Path,
    name: &str,
    width: usize,
    height: usize,
    seed: u64,
) -> std::path::PathBuf {
    let path = dir.join(format!("{name}.pgm"));
    write_pgm(&path, &synthetic_plane(width, height, seed)).expect("write test image");
    path
}

/// Path of the compiled `trained-filter` binary under test.
pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_trained-filter")
}

/// Runs the binary with `args`, returning the raw process output.
pub fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn trained-filter")
}

/// Runs the binary and asserts a zero exit status, returning stdout.
pub fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed with {:?}\nstderr: {}",
        args,
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 stdout")
}

/// One parsed row of the `name,stage,mse,psnr,ssim` CSV; empty metric
/// fields parse to `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub name: String,
    pub stage: String,
    pub mse: Option<f64>,
    pub psnr: Option<f64>,
    pub ssim: Option<f64>,
}

/// Parses CSV text (header included) into rows.
pub fn parse_csv(text: &str) -> Vec<CsvRow> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("name,stage,mse,psnr,ssim"),
        "unexpected CSV header"
    );
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 5, "malformed CSV row: {line}");
            let parse = |s: &str| {
                if s.is_empty() {
                    None
                } else if s == "inf" {
                    Some(f64::INFINITY)
                } else {
                    Some(s.parse::<f64>().expect("numeric CSV field"))
                }
            };
            CsvRow {
                name: fields[0].to_string(),
                stage: fields[1].to_string(),
                mse: parse(fields[2]),
                psnr: parse(fields[3]),
                ssim: parse(fields[4]),
            }
        })
        .collect()
}

/// The row for a given (name, stage), panicking when absent.
pub fn row<'a>(rows: &'a [CsvRow], name: &str, stage: &str) -> &'a CsvRow {
    rows.iter()
        .find(|r| r.name == name && r.stage == stage)
        .unwrap_or_else(|| panic!("no CSV row for ({name}, {stage})"))
}

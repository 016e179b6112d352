//! Reference degradations: the controlled stand-ins for a cheap transform
//! codec, an out-of-focus capture, and a resolution drop. Training pairs a
//! degraded-then-enhanced plane with its pristine source, so these must be
//! deterministic and cheap rather than faithful to any particular encoder.

use crate::convolve::separable_replicate;
use crate::plane::{plane_from_values, round_clamp, LumaPlane};
use crate::{Error, Result};

/// Block-transform compression settings. `quality` follows the common
/// 1–100 convention (lower is coarser); the default matches the aggressive
/// setting used to provoke visible blocking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressionSpec {
    pub quality: u8,
}

impl Default for CompressionSpec {
    fn default() -> Self {
        CompressionSpec { quality: 20 }
    }
}

/// Separable Gaussian blur settings: kernel taps `exp(-k²/2σ²)` for
/// `k ∈ [-radius, radius]`, normalized to sum 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    pub radius: usize,
    pub sigma: f64,
}

impl Default for GaussianSpec {
    fn default() -> Self {
        GaussianSpec {
            radius: 2,
            sigma: 1.0,
        }
    }
}

impl GaussianSpec {
    fn validate(&self) -> Result<()> {
        if self.radius == 0 {
            return Err(Error::InvalidParameter(
                "gaussian radius must be at least 1".into(),
            ));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gaussian sigma must be finite and positive (got {})",
                self.sigma
            )));
        }
        Ok(())
    }

    pub(crate) fn taps(&self) -> Vec<f64> {
        let r = self.radius as isize;
        let mut taps: Vec<f64> = (-r..=r)
            .map(|k| (-((k * k) as f64) / (2.0 * self.sigma * self.sigma)).exp())
            .collect();
        let sum: f64 = taps.iter().sum();
        for t in &mut taps {
            *t /= sum;
        }
        taps
    }
}

/// The 8×8 luminance quantization table from the classic baseline
/// transform-coding standard (Annex K).
const BASE_LUMA_QUANT: [[i64; 8]; 8] = [
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
];

/// Quality-scaled quantization table, using the common integer convention:
/// `scale = 5000/quality` below 50, `200 - 2*quality` otherwise, and each
/// entry `clamp(floor((base*scale + 50) / 100), 1, 255)`.
fn scaled_quant_table(quality: u8) -> [[f64; 8]; 8] {
    let q = quality as i64;
    let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
    let mut table = [[0.0f64; 8]; 8];
    for (r, row) in BASE_LUMA_QUANT.iter().enumerate() {
        for (c, &base) in row.iter().enumerate() {
            table[r][c] = ((base * scale + 50) / 100).clamp(1, 255) as f64;
        }
    }
    table
}

/// Orthonormal 8-point DCT-II basis scaled so that a forward transform of a
/// block equals `B · block · Bᵀ` in the convention the quantization table
/// expects (DC of a constant block is 8× the constant).
fn dct_basis() -> [[f64; 8]; 8] {
    let mut basis = [[0.0f64; 8]; 8];
    for (u, row) in basis.iter_mut().enumerate() {
        let cu = if u == 0 { 1.0 / 2.0f64.sqrt() } else { 1.0 };
        for (x, b) in row.iter_mut().enumerate() {
            *b = 0.5 * cu * ((2 * x + 1) as f64 * u as f64 * std::f64::consts::PI / 16.0).cos();
        }
    }
    basis
}

/// Simulates blocky transform compression of a plane: independent 8×8
/// blocks are level-shifted, transformed, quantized with the quality-scaled
/// table (round half away from zero), dequantized and inverse-transformed.
/// Planes that are not block-aligned are padded by border replication and
/// cropped back afterwards.
pub fn compress_blocky(plane: &LumaPlane, spec: &CompressionSpec) -> Result<LumaPlane> {
    if spec.quality == 0 || spec.quality > 100 {
        return Err(Error::InvalidParameter(format!(
            "compression quality must be in 1..=100 (got {})",
            spec.quality
        )));
    }
    let (w, h) = plane.dimensions();
    let basis = dct_basis();
    let quant = scaled_quant_table(spec.quality);
    let mut out = vec![0u8; w * h];

    let mut block = [[0.0f64; 8]; 8];
    let mut coef = [[0.0f64; 8]; 8];
    for by in (0..h).step_by(8) {
        for bx in (0..w).step_by(8) {
            // Load with border replication (handles the padded right/bottom
            // blocks of non-multiple-of-8 planes) and level shift.
            for (r, row) in block.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = plane.get_clamped((bx + c) as isize, (by + r) as isize) as f64 - 128.0;
                }
            }
            // coef = B · block · Bᵀ, quantize/dequantize in place.
            for (u, crow) in coef.iter_mut().enumerate() {
                for (v, cv) in crow.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for x in 0..8 {
                        for y in 0..8 {
                            acc += basis[u][y] * basis[v][x] * block[y][x];
                        }
                    }
                    let q = quant[u][v];
                    *cv = (acc / q).round() * q;
                }
            }
            // block = Bᵀ · coef · B, shift back, round and store.
            for r in 0..8 {
                let py = by + r;
                if py >= h {
                    break;
                }
                for c in 0..8 {
                    let px = bx + c;
                    if px >= w {
                        continue;
                    }
                    let mut acc = 0.0;
                    for u in 0..8 {
                        for v in 0..8 {
                            acc += basis[u][r] * basis[v][c] * coef[u][v];
                        }
                    }
                    out[py * w + px] = round_clamp(acc + 128.0);
                }
            }
        }
    }
    LumaPlane::new(w, h, out)
}

/// Separable Gaussian blur with border replication. Both passes run in real
/// arithmetic with one final round/clamp.
pub fn gaussian_blur(plane: &LumaPlane, spec: &GaussianSpec) -> Result<LumaPlane> {
    spec.validate()?;
    let values = separable_replicate(plane, &spec.taps());
    plane_from_values(plane.width(), plane.height(), &values)
}

/// Halves both dimensions by averaging disjoint 2×2 blocks. Requires even
/// width and height.
pub fn downsample_2x(plane: &LumaPlane) -> Result<LumaPlane> {
    let (w, h) = plane.dimensions();
    if w % 2 != 0 || h % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "downsampling requires even dimensions (got {w}x{h})"
        )));
    }
    let (ow, oh) = (w / 2, h / 2);
    let mut out = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        for x in 0..ow {
            let sum = plane.get(2 * x, 2 * y) as f64
                + plane.get(2 * x + 1, 2 * y) as f64
                + plane.get(2 * x, 2 * y + 1) as f64
                + plane.get(2 * x + 1, 2 * y + 1) as f64;
            out.push(round_clamp(sum / 4.0));
        }
    }
    LumaPlane::new(ow, oh, out)
}

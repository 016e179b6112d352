//! Objective quality metrics: MSE, PSNR and single-scale SSIM.
//!
//! All accumulations run in a fixed row-major order so repeated
//! evaluations of the same planes are bit-identical.

use crate::plane::LumaPlane;
use crate::{Error, Result};

/// Parameters of the SSIM computation.
///
/// The defaults are the conventional ones for 8-bit imagery: an 8×8
/// sliding window moved one pixel at a time, `k1 = 0.01`, `k2 = 0.03`,
/// dynamic range 255, and unit exponents on the luminance, contrast and
/// structure terms. `c3 = None` selects the standard coupling `C3 = C2/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimSpec {
    pub window: usize,
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub c3: Option<f64>,
}

impl Default for SsimSpec {
    fn default() -> Self {
        SsimSpec {
            window: 8,
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 255.0,
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            c3: None,
        }
    }
}

impl SsimSpec {
    fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(Error::InvalidParameter(format!(
                "SSIM window must span at least 2 pixels (got {})",
                self.window
            )));
        }
        for (name, value) in [
            ("k1", self.k1),
            ("k2", self.k2),
            ("dynamic_range", self.dynamic_range),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "SSIM {name} must be a positive finite number (got {value})"
                )));
            }
        }
        if let Some(c3) = self.c3 {
            if !(c3.is_finite() && c3 > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "SSIM c3 must be a positive finite number (got {c3})"
                )));
            }
        }
        Ok(())
    }
}

/// MSE, PSNR and SSIM of one plane pair, bundled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub mse: f64,
    pub psnr: f64,
    pub ssim: f64,
}

fn check_geometry(reference: &LumaPlane, candidate: &LumaPlane) -> Result<()> {
    if !reference.same_geometry(candidate) {
        return Err(Error::GeometryMismatch {
            left_width: reference.width(),
            left_height: reference.height(),
            right_width: candidate.width(),
            right_height: candidate.height(),
        });
    }
    Ok(())
}

/// Mean squared error between two planes of identical geometry.
pub fn mse(reference: &LumaPlane, candidate: &LumaPlane) -> Result<f64> {
    check_geometry(reference, candidate)?;
    let mut sum = 0.0f64;
    for (&r, &c) in reference.samples().iter().zip(candidate.samples()) {
        let d = r as f64 - c as f64;
        sum += d * d;
    }
    Ok(sum / reference.samples().len() as f64)
}

/// Peak signal-to-noise ratio in decibels for an 8-bit signal:
/// `10·log10(255² / mse)`. A zero MSE maps to `+∞`.
///
/// # Panics
///
/// Panics if `mse` is negative (or NaN) — a squared error can never be.
pub fn psnr(mse: f64) -> f64 {
    assert!(mse >= 0.0, "mean squared error must be non-negative (got {mse})");
    if mse == 0.0 {
        return f64::INFINITY;
    }
    10.0 * (255.0 * 255.0 / mse).log10()
}

/// Raises a term to its exponent, passing unit exponents through
/// untouched. Besides skipping work in the default configuration, this
/// keeps a (legitimately) negative structure term from turning into NaN,
/// which `powf` would produce for fractional exponents.
fn weighted(term: f64, exponent: f64) -> f64 {
    if exponent == 1.0 {
        term
    } else {
        term.powf(exponent)
    }
}

/// Mean structural similarity over all `window`×`window` positions at
/// stride 1.
///
/// Per window, with means μ, sample variances s² (N−1 divisor) and sample
/// covariance s_xy:
///
/// ```text
/// l = (2·μx·μy + C1) / (μx² + μy² + C1)      C1 = (k1·L)²
/// c = (2·sx·sy + C2) / (sx² + sy² + C2)      C2 = (k2·L)²
/// s = (s_xy + C3)   / (sx·sy + C3)           C3 = C2/2 unless overridden
/// ```
///
/// and the window score is `l^α · c^β · s^γ`.
pub fn ssim(reference: &LumaPlane, candidate: &LumaPlane, spec: &SsimSpec) -> Result<f64> {
    spec.validate()?;
    check_geometry(reference, candidate)?;
    let (width, height) = reference.dimensions();
    if width < spec.window || height < spec.window {
        return Err(Error::PlaneTooSmall {
            width,
            height,
            window: spec.window,
        });
    }

    let c1 = (spec.k1 * spec.dynamic_range).powi(2);
    let c2 = (spec.k2 * spec.dynamic_range).powi(2);
    let c3 = spec.c3.unwrap_or(c2 / 2.0);
    let n = (spec.window * spec.window) as f64;

    let mut total = 0.0f64;
    let mut windows = 0u64;
    for top in 0..=height - spec.window {
        for left in 0..=width - spec.window {
            let mut sum_x = 0.0f64;
            let mut sum_y = 0.0f64;
            for row in top..top + spec.window {
                for col in left..left + spec.window {
                    sum_x += reference.get(col, row) as f64;
                    sum_y += candidate.get(col, row) as f64;
                }
            }
            let mean_x = sum_x / n;
            let mean_y = sum_y / n;

            // One pass for all three second moments so identical planes
            // yield bitwise-identical sxx, syy and sxy.
            let mut sxx = 0.0f64;
            let mut syy = 0.0f64;
            let mut sxy = 0.0f64;
            for row in top..top + spec.window {
                for col in left..left + spec.window {
                    let dx = reference.get(col, row) as f64 - mean_x;
                    let dy = candidate.get(col, row) as f64 - mean_y;
                    sxx += dx * dx;
                    syy += dy * dy;
                    sxy += dx * dy;
                }
            }
            let scale = 1.0 / (n - 1.0);
            let var_x = sxx * scale;
            let var_y = syy * scale;
            let cov = sxy * scale;
            let sd_x = var_x.max(0.0).sqrt();
            let sd_y = var_y.max(0.0).sqrt();

            let luminance = (2.0 * mean_x * mean_y + c1) / (mean_x * mean_x + mean_y * mean_y + c1);
            let contrast = (2.0 * sd_x * sd_y + c2) / (var_x + var_y + c2);
            let structure = (cov + c3) / (sd_x * sd_y + c3);

            total += weighted(luminance, spec.alpha)
                * weighted(contrast, spec.beta)
                * weighted(structure, spec.gamma);
            windows += 1;
        }
    }
    Ok(total / windows as f64)
}

/// Computes all three metrics for a plane pair in one call.
pub fn evaluate(
    reference: &LumaPlane,
    candidate: &LumaPlane,
    spec: &SsimSpec,
) -> Result<Evaluation> {
    let mse = mse(reference, candidate)?;
    let ssim = ssim(reference, candidate, spec)?;
    Ok(Evaluation {
        mse,
        psnr: psnr(mse),
        ssim,
    })
}

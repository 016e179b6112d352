//! The enhancement modules under repair: artifact smoothing, peaking
//! (unsharp-style sharpening), and bilinear 2× upscaling. Each is a cheap
//! module of the kind a trained filter is meant to clean up after.

use crate::convolve::separable_replicate;
use crate::degrade::GaussianSpec;
use crate::plane::{plane_from_values, round_clamp, LumaPlane};
use crate::{Error, Result};

/// Peaking settings: the separable 3-tap kernel `(-alpha, 1+2*alpha,
/// -alpha)`, applied horizontally then vertically. `alpha = 0` is the
/// identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakingSpec {
    pub alpha: f64,
}

impl Default for PeakingSpec {
    fn default() -> Self {
        PeakingSpec { alpha: 0.2 }
    }
}

/// Gaussian smoothing used to hide compression artifacts. Identical to
/// [`crate::degrade::gaussian_blur`] sample for sample; it is exposed here
/// separately because in this pipeline it plays the enhancement role.
pub fn smooth_artifacts(plane: &LumaPlane, spec: &GaussianSpec) -> Result<LumaPlane> {
    crate::degrade::gaussian_blur(plane, spec)
}

/// Sharpens with the separable peaking kernel. Both passes run in real
/// arithmetic; the result is rounded and clamped once.
pub fn peaking_filter(plane: &LumaPlane, spec: &PeakingSpec) -> Result<LumaPlane> {
    if !(spec.alpha.is_finite() && spec.alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "peaking alpha must be finite and non-negative (got {})",
            spec.alpha
        )));
    }
    let taps = [-spec.alpha, 1.0 + 2.0 * spec.alpha, -spec.alpha];
    let values = separable_replicate(plane, &taps);
    plane_from_values(plane.width(), plane.height(), &values)
}

/// Doubles both dimensions by bilinear interpolation. Each low-resolution
/// cell `(row i, col j)` with neighbours
///
/// ```text
/// D0 = LR(i, j)    D1 = LR(i, j+1)
/// D2 = LR(i+1, j)  D3 = LR(i+1, j+1)
/// ```
///
/// (border-replicated on the last row/column) produces the 2×2 output block
/// at `(2i, 2j)`:
///
/// ```text
/// B0 = (0.75·D0 + 0.25·D1)·0.75 + (0.75·D2 + 0.25·D3)·0.25
/// B1 = (0.25·D0 + 0.75·D1)·0.75 + (0.25·D2 + 0.75·D3)·0.25
/// B2 = (0.75·D0 + 0.25·D1)·0.25 + (0.75·D2 + 0.25·D3)·0.75
/// B3 = (0.25·D0 + 0.75·D1)·0.25 + (0.25·D2 + 0.75·D3)·0.75
/// ```
pub fn bilinear_upscale_2x(plane: &LumaPlane) -> LumaPlane {
    let (w, h) = plane.dimensions();
    let (ow, oh) = (2 * w, 2 * h);
    let mut out = vec![0u8; ow * oh];
    for i in 0..h {
        for j in 0..w {
            let d0 = plane.get(j, i) as f64;
            let d1 = plane.get_clamped(j as isize + 1, i as isize) as f64;
            let d2 = plane.get_clamped(j as isize, i as isize + 1) as f64;
            let d3 = plane.get_clamped(j as isize + 1, i as isize + 1) as f64;
            let top = [0.75 * d0 + 0.25 * d1, 0.25 * d0 + 0.75 * d1];
            let bottom = [0.75 * d2 + 0.25 * d3, 0.25 * d2 + 0.75 * d3];
            let b = [
                top[0] * 0.75 + bottom[0] * 0.25,
                top[1] * 0.75 + bottom[1] * 0.25,
                top[0] * 0.25 + bottom[0] * 0.75,
                top[1] * 0.25 + bottom[1] * 0.75,
            ];
            let (oy, ox) = (2 * i, 2 * j);
            out[oy * ow + ox] = round_clamp(b[0]);
            out[oy * ow + ox + 1] = round_clamp(b[1]);
            out[(oy + 1) * ow + ox] = round_clamp(b[2]);
            out[(oy + 1) * ow + ox + 1] = round_clamp(b[3]);
        }
    }
    LumaPlane::new(ow, oh, out).expect("doubled dimensions are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrade::gaussian_blur;

    #[test]
    fn smooth_matches_blur_exactly() {
        let p = LumaPlane::from_fn(17, 11, |x, y| (x * 13 + y * 29) as u8).unwrap();
        let spec = GaussianSpec::default();
        assert_eq!(
            smooth_artifacts(&p, &spec).unwrap(),
            gaussian_blur(&p, &spec).unwrap()
        );
    }

    #[test]
    fn peaking_zero_alpha_is_identity() {
        let p = LumaPlane::from_fn(9, 9, |x, y| ((x * 40) ^ (y * 25)) as u8).unwrap();
        assert_eq!(peaking_filter(&p, &PeakingSpec { alpha: 0.0 }).unwrap(), p);
    }

    #[test]
    fn peaking_preserves_constants() {
        let p = LumaPlane::constant(6, 6, 93).unwrap();
        assert_eq!(peaking_filter(&p, &PeakingSpec::default()).unwrap(), p);
    }

    #[test]
    fn peaking_overshoots_an_isolated_column() {
        // Columns (0, 100, 0), identical rows: the vertical pass is a
        // no-op, the horizontal pass gives -0.2*0 + 1.4*100 - 0.2*0 = 140.
        let p = LumaPlane::from_fn(3, 3, |x, _| if x == 1 { 100 } else { 0 }).unwrap();
        let out = peaking_filter(&p, &PeakingSpec::default()).unwrap();
        assert_eq!(out.get(1, 1), 140);
        // Side columns undershoot below zero and clamp.
        assert_eq!(out.get(0, 1), 0);
        assert_eq!(out.get(2, 1), 0);
    }

    #[test]
    fn peaking_rounds_once_not_per_pass() {
        // Rows 0 and 1 are (0, 9, 0), row 2 is flat zero. The horizontal
        // pass puts 12.6 at (1,0) and (1,1); the vertical pass at (1,1)
        // yields 1.4*12.6 - 0.2*12.6 - 0.2*0 = 15.12 -> 15. Rounding the
        // intermediate to 13 would give 1.2*13 = 15.6 -> 16 instead.
        let p = LumaPlane::from_fn(3, 3, |x, y| if x == 1 && y < 2 { 9 } else { 0 }).unwrap();
        let out = peaking_filter(&p, &PeakingSpec::default()).unwrap();
        assert_eq!(out.get(1, 1), 15);
    }

    #[test]
    fn peaking_rejects_bad_alpha() {
        let p = LumaPlane::constant(3, 3, 0).unwrap();
        assert!(peaking_filter(&p, &PeakingSpec { alpha: -0.1 }).is_err());
        assert!(peaking_filter(&p, &PeakingSpec { alpha: f64::INFINITY }).is_err());
    }

    #[test]
    fn bilinear_weights_match_hand_computation() {
        // Horizontal alternation: D = (0, 100, 0, 100) for the top-left
        // cell gives B0 = 25, B1 = 75.
        let p = LumaPlane::new(2, 2, vec![0, 100, 0, 100]).unwrap();
        let out = bilinear_upscale_2x(&p);
        assert_eq!(out.dimensions(), (4, 4));
        assert_eq!(out.get(0, 0), 25);
        assert_eq!(out.get(1, 0), 75);
        assert_eq!(out.get(0, 1), 25);
        assert_eq!(out.get(1, 1), 75);

        // Vertical alternation: D = (0, 0, 100, 100) gives B0 = 25, B2 = 75.
        let p = LumaPlane::new(2, 2, vec![0, 0, 100, 100]).unwrap();
        let out = bilinear_upscale_2x(&p);
        assert_eq!(out.get(0, 0), 25);
        assert_eq!(out.get(0, 1), 75);
        assert_eq!(out.get(1, 0), 25);
        assert_eq!(out.get(1, 1), 75);

        // All four corners distinct: B = (17.5, 22.5, 27.5, 32.5), which
        // rounds half away from zero to (18, 23, 28, 33).
        let p = LumaPlane::new(2, 2, vec![10, 20, 30, 40]).unwrap();
        let out = bilinear_upscale_2x(&p);
        assert_eq!(
            [out.get(0, 0), out.get(1, 0), out.get(0, 1), out.get(1, 1)],
            [18, 23, 28, 33]
        );
    }

    #[test]
    fn bilinear_replicates_last_row_and_column() {
        let p = LumaPlane::new(2, 1, vec![0, 200]).unwrap();
        let out = bilinear_upscale_2x(&p);
        assert_eq!(out.dimensions(), (4, 2));
        // Rightmost cell replicates D1 = D3 = 200: B1 = 200 exactly.
        assert_eq!(out.get(3, 0), 200);
        assert_eq!(out.get(3, 1), 200);
        // Rows are identical because the vertical neighbour is replicated.
        assert_eq!(out.row(0), out.row(1));
    }

    #[test]
    fn bilinear_preserves_constants() {
        let p = LumaPlane::constant(5, 4, 144).unwrap();
        let out = bilinear_upscale_2x(&p);
        assert_eq!(out.dimensions(), (10, 8));
        assert!(out.samples().iter().all(|&s| s == 144));
    }
}

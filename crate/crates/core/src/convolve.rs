//! Separable FIR filtering with border replication, shared by the blur and
//! peaking paths. Both passes run in real arithmetic; callers round once.

use crate::plane::LumaPlane;

/// Applies `taps` horizontally then vertically with border replication and
/// returns the real-valued result (no rounding). `taps.len()` must be odd.
pub(crate) fn separable_replicate(plane: &LumaPlane, taps: &[f64]) -> Vec<f64> {
    debug_assert!(taps.len() % 2 == 1, "kernel length must be odd");
    let (w, h) = plane.dimensions();
    let radius = (taps.len() / 2) as isize;

    // Horizontal pass on integer samples.
    let mut horizontal = vec![0.0f64; w * h];
    for y in 0..h {
        let row = plane.row(y);
        for x in 0..w {
            let mut acc = 0.0;
            for (k, tap) in taps.iter().enumerate() {
                let sx = (x as isize + k as isize - radius).clamp(0, w as isize - 1) as usize;
                acc += tap * row[sx] as f64;
            }
            horizontal[y * w + x] = acc;
        }
    }

    // Vertical pass on the real intermediate.
    let mut out = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, tap) in taps.iter().enumerate() {
                let sy = (y as isize + k as isize - radius).clamp(0, h as isize - 1) as usize;
                acc += tap * horizontal[sy * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_kernel_preserves_samples() {
        let p = LumaPlane::from_fn(5, 4, |x, y| (x * 40 + y * 9) as u8).unwrap();
        let out = separable_replicate(&p, &[1.0]);
        let expected: Vec<f64> = p.samples().iter().map(|&s| s as f64).collect();
        assert_eq!(out, expected);
    }

    #[test]
    fn averaging_kernel_replicates_borders() {
        // 1x3 row [0, 90, 0] with a 3-tap box: left output averages the
        // replicated left edge twice.
        let p = LumaPlane::new(3, 1, vec![0, 90, 0]).unwrap();
        let t = 1.0 / 3.0;
        let out = separable_replicate(&p, &[t, t, t]);
        assert!((out[0] - 30.0).abs() < 1e-12);
        assert!((out[1] - 30.0).abs() < 1e-12);
        assert!((out[2] - 30.0).abs() < 1e-12);
    }
}

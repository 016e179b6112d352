//! Aperture extraction and pixel classification.
//!
//! Every pixel is described by the 13 samples of a diamond-shaped aperture
//! (offsets with `|dx| + |dy| <= 2`). ADRC — adaptive dynamic range coding
//! reduced to one bit per sample — turns the aperture into a 13-bit pattern
//! by comparing each sample against the aperture mean. An optional
//! complexity bit (standard deviation, dynamic range, or entropy test)
//! doubles the class count to separate flat from busy regions.

use crate::plane::LumaPlane;
use crate::{Error, Result};

/// Number of samples in the diamond aperture.
pub const APERTURE_SIZE: usize = 13;

/// Position of the center pixel in the aperture scan order.
pub const CENTER_INDEX: usize = 6;

/// Aperture offsets `(dx, dy)` in scan order: `dy` from -2 to 2, and within
/// each row `dx` covering `|dx| <= 2 - |dy|`.
pub const APERTURE_OFFSETS: [(i32, i32); APERTURE_SIZE] = [
    (0, -2),
    (-1, -1),
    (0, -1),
    (1, -1),
    (-2, 0),
    (-1, 0),
    (0, 0),
    (1, 0),
    (2, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (0, 2),
];

/// The 13 real-valued samples of one diamond aperture, in scan order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aperture {
    samples: [f64; APERTURE_SIZE],
}

impl Aperture {
    pub fn new(samples: [f64; APERTURE_SIZE]) -> Self {
        Aperture { samples }
    }

    pub fn samples(&self) -> &[f64; APERTURE_SIZE] {
        &self.samples
    }

    pub fn center(&self) -> f64 {
        self.samples[CENTER_INDEX]
    }

    /// The aperture average, the reference level for the ADRC bits.
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / APERTURE_SIZE as f64
    }
}

/// A class index: 13 ADRC bits, optionally extended by one complexity bit
/// at bit 13.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(u16);

impl ClassId {
    pub fn from_bits(bits: u16) -> Self {
        ClassId(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Which complexity measure, if any, contributes bit 13 of the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityMode {
    /// Plain 13-bit ADRC classes.
    None,
    /// Population standard deviation of the aperture >= threshold.
    Std,
    /// Dynamic range (max - min) of the aperture >= threshold.
    DynamicRange,
    /// Shannon entropy of the aperture value histogram >= threshold (bits).
    Entropy,
}

pub const DEFAULT_STD_THRESHOLD: f64 = 10.0;
pub const DEFAULT_RANGE_THRESHOLD: f64 = 32.0;
pub const DEFAULT_ENTROPY_THRESHOLD: f64 = 2.0;

/// Classification settings: the complexity mode and its threshold. The
/// threshold is ignored when `mode` is [`ComplexityMode::None`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierSpec {
    pub mode: ComplexityMode,
    pub threshold: f64,
}

impl ClassifierSpec {
    /// Plain ADRC, 13-bit classes.
    pub fn adrc_only() -> Self {
        ClassifierSpec {
            mode: ComplexityMode::None,
            threshold: 0.0,
        }
    }

    /// ADRC plus a standard-deviation bit at the default threshold.
    pub fn adrc_with_std() -> Self {
        ClassifierSpec {
            mode: ComplexityMode::Std,
            threshold: DEFAULT_STD_THRESHOLD,
        }
    }

    /// ADRC plus a dynamic-range bit at the default threshold.
    pub fn adrc_with_range() -> Self {
        ClassifierSpec {
            mode: ComplexityMode::DynamicRange,
            threshold: DEFAULT_RANGE_THRESHOLD,
        }
    }

    /// ADRC plus an entropy bit at the default threshold.
    pub fn adrc_with_entropy() -> Self {
        ClassifierSpec {
            mode: ComplexityMode::Entropy,
            threshold: DEFAULT_ENTROPY_THRESHOLD,
        }
    }

    /// Number of bits in a class produced by this spec: 13, or 14 with a
    /// complexity bit.
    pub fn class_bits(&self) -> u8 {
        match self.mode {
            ComplexityMode::None => APERTURE_SIZE as u8,
            _ => APERTURE_SIZE as u8 + 1,
        }
    }

    /// Number of distinct classes, `2^class_bits`.
    pub fn class_count(&self) -> usize {
        1usize << self.class_bits()
    }
}

/// Reads the diamond aperture centered at (x, y), replicating the border
/// for offsets that fall outside the plane.
pub fn extract_aperture(plane: &LumaPlane, x: usize, y: usize) -> Result<Aperture> {
    if x >= plane.width() || y >= plane.height() {
        return Err(Error::OutOfRange {
            x,
            y,
            width: plane.width(),
            height: plane.height(),
        });
    }
    Ok(aperture_at(plane, x, y))
}

/// Aperture read without the range check, for the per-pixel loops that
/// iterate the plane directly.
pub(crate) fn aperture_at(plane: &LumaPlane, x: usize, y: usize) -> Aperture {
    let mut samples = [0.0f64; APERTURE_SIZE];
    for (slot, (dx, dy)) in samples.iter_mut().zip(APERTURE_OFFSETS) {
        *slot = plane.get_clamped(x as isize + dx as isize, y as isize + dy as isize) as f64;
    }
    Aperture { samples }
}

/// 1-bit ADRC pattern of the aperture: bit `k` is set when sample `k` is
/// strictly above the aperture mean (ties classify as 0).
pub fn adrc_bits(aperture: &Aperture) -> u16 {
    let mean = aperture.mean();
    let mut bits = 0u16;
    for (k, &sample) in aperture.samples.iter().enumerate() {
        if sample > mean {
            bits |= 1 << k;
        }
    }
    bits
}

/// Evaluates the complexity test selected by `spec`. Always false for
/// [`ComplexityMode::None`].
pub fn complexity_bit(aperture: &Aperture, spec: &ClassifierSpec) -> bool {
    match spec.mode {
        ComplexityMode::None => false,
        ComplexityMode::Std => population_std(&aperture.samples) >= spec.threshold,
        ComplexityMode::DynamicRange => {
            let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
            for &s in &aperture.samples {
                min = min.min(s);
                max = max.max(s);
            }
            max - min >= spec.threshold
        }
        ComplexityMode::Entropy => shannon_entropy(&aperture.samples) >= spec.threshold,
    }
}

/// Full class of an aperture: ADRC bits, plus the complexity bit at
/// bit 13 when the spec carries one.
pub fn classify(aperture: &Aperture, spec: &ClassifierSpec) -> ClassId {
    let mut bits = adrc_bits(aperture);
    if spec.mode != ComplexityMode::None && complexity_bit(aperture, spec) {
        bits |= 1 << APERTURE_SIZE;
    }
    ClassId(bits)
}

fn population_std(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    var.sqrt()
}

/// Shannon entropy (bits) of the empirical value distribution: groups equal
/// samples and evaluates `-sum p log2 p`.
fn shannon_entropy(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("aperture samples are not NaN"));
    let n = sorted.len() as f64;
    let mut entropy = 0.0;
    let mut run = 0usize;
    for (i, &v) in sorted.iter().enumerate() {
        run += 1;
        let end_of_run = i + 1 == sorted.len() || sorted[i + 1] != v;
        if end_of_run {
            let p = run as f64 / n;
            entropy -= p * p.log2();
            run = 0;
        }
    }
    entropy
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(values: [f64; 13]) -> Aperture {
        Aperture::new(values)
    }

    #[test]
    fn offsets_form_the_diamond_in_scan_order() {
        assert_eq!(APERTURE_OFFSETS.len(), APERTURE_SIZE);
        assert!(APERTURE_OFFSETS
            .iter()
            .all(|&(dx, dy)| dx.abs() + dy.abs() <= 2));
        assert_eq!(APERTURE_OFFSETS[CENTER_INDEX], (0, 0));
        // Strictly increasing in (dy, dx) order.
        for pair in APERTURE_OFFSETS.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            assert!((a.1, a.0) < (b.1, b.0), "{a:?} !< {b:?}");
        }
    }

    #[test]
    fn extract_reads_in_scan_order_and_replicates() {
        let p = LumaPlane::from_fn(7, 7, |x, y| (10 * y + x) as u8).unwrap();
        let a = extract_aperture(&p, 3, 3).unwrap();
        assert_eq!(
            a.samples(),
            &[13.0, 22.0, 23.0, 24.0, 31.0, 32.0, 33.0, 34.0, 35.0, 42.0, 43.0, 44.0, 53.0]
        );
        assert_eq!(a.center(), 33.0);

        // At the corner every out-of-plane offset clamps to row/col 0.
        let a = extract_aperture(&p, 0, 0).unwrap();
        assert_eq!(
            a.samples(),
            &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 10.0, 10.0, 11.0, 20.0]
        );

        assert!(matches!(
            extract_aperture(&p, 7, 0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn adrc_center_spike_sets_only_the_center_bit() {
        let mut v = [0.0; 13];
        v[CENTER_INDEX] = 200.0;
        // Mean is 200/13 ≈ 15.4: only the center sample exceeds it.
        assert_eq!(adrc_bits(&ap(v)), 1 << CENTER_INDEX);
        assert_eq!(
            classify(&ap(v), &ClassifierSpec::adrc_only()).bits(),
            64
        );
    }

    #[test]
    fn adrc_constant_aperture_is_class_zero() {
        // Every sample ties with the mean, and ties classify as 0.
        let a = ap([42.0; 13]);
        assert_eq!(adrc_bits(&a), 0);
    }

    #[test]
    fn adrc_is_invariant_under_positive_affine_maps() {
        let a = ap([3.0, 9.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0, 8.0]);
        let scaled = ap(a.samples().map(|s| 2.0 * s + 31.0));
        assert_eq!(adrc_bits(&a), adrc_bits(&scaled));
    }

    #[test]
    fn std_bit_thresholds_population_sigma() {
        let spec = ClassifierSpec::adrc_with_std();
        assert!(!complexity_bit(&ap([100.0; 13]), &spec));
        // Half at 0, rest near 255: sigma far above 10.
        let mut v = [0.0; 13];
        for slot in v.iter_mut().take(6) {
            *slot = 255.0;
        }
        assert!(complexity_bit(&ap(v), &spec));

        // Exactly at the threshold counts as complex (>=).
        let mut at = [0.0; 13];
        at[0] = 1.0;
        let sigma = population_std(&at);
        let spec = ClassifierSpec {
            mode: ComplexityMode::Std,
            threshold: sigma,
        };
        assert!(complexity_bit(&ap(at), &spec));
    }

    #[test]
    fn range_bit_thresholds_max_minus_min() {
        let spec = ClassifierSpec::adrc_with_range();
        let mut v = [10.0; 13];
        v[3] = 41.0;
        assert!(!complexity_bit(&ap(v), &spec), "range 31 < 32");
        v[3] = 42.0;
        assert!(complexity_bit(&ap(v), &spec), "range 32 >= 32");
    }

    #[test]
    fn entropy_of_uniform_aperture_is_zero() {
        assert_eq!(shannon_entropy(&[7.0; 13]), 0.0);
    }

    #[test]
    fn entropy_of_balanced_two_level_region_is_one_bit() {
        // An even split of two values is the p = 1/2 binary case.
        assert_eq!(shannon_entropy(&[5.0, 9.0, 5.0, 9.0]), 1.0);
        // 13 samples cannot split evenly; the closest 6/7 split lands just
        // under one bit.
        let mut v = [5.0; 13];
        for slot in v.iter_mut().take(6) {
            *slot = 9.0;
        }
        let h = shannon_entropy(&v);
        let expected = {
            let (p6, p7) = (6.0f64 / 13.0, 7.0f64 / 13.0);
            -(p6 * p6.log2() + p7 * p7.log2())
        };
        assert!((h - expected).abs() < 1e-15);
        assert!((h - 0.9957274520849255).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_at_most_log2_of_sample_count() {
        // All-distinct samples maximize the histogram entropy.
        let v: [f64; 13] = std::array::from_fn(|i| i as f64);
        let h = shannon_entropy(&v);
        assert!((h - (13.0f64).log2()).abs() < 1e-12);
    }

    #[test]
    fn classify_packs_the_complexity_bit_at_bit_13() {
        let mut v = [0.0; 13];
        v[CENTER_INDEX] = 200.0;
        let a = ap(v);
        let plain = classify(&a, &ClassifierSpec::adrc_only());
        let with_std = classify(&a, &ClassifierSpec::adrc_with_std());
        assert_eq!(plain.bits(), 64);
        // sigma of the spike aperture is ≈ 53: complex.
        assert_eq!(with_std.bits(), 64 | (1 << 13));
        assert!(with_std.bits() < 1 << 14);
    }

    #[test]
    fn class_bit_widths_follow_the_mode() {
        assert_eq!(ClassifierSpec::adrc_only().class_bits(), 13);
        assert_eq!(ClassifierSpec::adrc_with_std().class_bits(), 14);
        assert_eq!(ClassifierSpec::adrc_only().class_count(), 8192);
        assert_eq!(ClassifierSpec::adrc_with_std().class_count(), 16384);
    }
}

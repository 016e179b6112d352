//! Offline training: per-class normal-equation accumulation and the
//! least-squares solve.
//!
//! For a class c with training pairs (aperture j, target j), the optimal
//! 13-tap weights minimize `e² = Σ_j (target_j − Σ_i w(i)·ap_j(i))²`.
//! Setting the derivative with respect to each tap to zero gives the
//! normal equations `A·w = b` with
//!
//! ```text
//! A[k][i] = Σ_j ap_j(k) · ap_j(i)      b[k] = Σ_j ap_j(k) · target_j
//! ```
//!
//! accumulated here in double precision and solved by Gaussian elimination
//! with partial pivoting. Classes with too few samples, or whose system is
//! numerically singular, fall back to the identity filter so an
//! under-trained table can never corrupt a pixel.
//!
//! Apertures are read from the *enhanced* plane (classification sits after
//! the enhancement module in the processing chain), and the target sample
//! comes from the pristine plane at the same position.

use crate::classify::{aperture_at, classify, Aperture, ClassId, ClassifierSpec, APERTURE_SIZE};
use crate::lut::{CoefficientTable, SolveFlag, TableEntry};
use crate::plane::LumaPlane;
use crate::{Error, Result};

/// Default minimum sample count for a class to be solved rather than fall
/// back to the identity filter (twice the aperture size).
pub const DEFAULT_MIN_SAMPLES: u64 = 2 * APERTURE_SIZE as u64;

/// Relative pivot threshold for the singularity test: a pivot below this
/// fraction of the largest initial diagonal entry aborts the solve.
const PIVOT_EPSILON: f64 = 1e-9;

/// One training observation: the aperture read from the processed plane,
/// the target sample from the reference plane, and the class the aperture
/// falls into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingPair {
    pub aperture: Aperture,
    pub target: f64,
    pub class: ClassId,
}

/// Running normal equations for one class: `ata` is Σ outer(ap, ap), `atb`
/// is Σ ap·target, `count` the number of pairs seen.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassAccumulator {
    ata: [[f64; APERTURE_SIZE]; APERTURE_SIZE],
    atb: [f64; APERTURE_SIZE],
    count: u64,
}

impl Default for ClassAccumulator {
    fn default() -> Self {
        ClassAccumulator {
            ata: [[0.0; APERTURE_SIZE]; APERTURE_SIZE],
            atb: [0.0; APERTURE_SIZE],
            count: 0,
        }
    }
}

impl ClassAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reassembles an accumulator from raw normal-equation parts, e.g.
    /// state checkpointed by a distributed training job. `ata` must be
    /// exactly symmetric, as [`add`](ClassAccumulator::add) would have
    /// left it.
    #[allow(clippy::needless_range_loop)]
    pub fn from_parts(
        ata: [[f64; APERTURE_SIZE]; APERTURE_SIZE],
        atb: [f64; APERTURE_SIZE],
        count: u64,
    ) -> Result<Self> {
        for k in 0..APERTURE_SIZE {
            for i in k + 1..APERTURE_SIZE {
                if ata[k][i] != ata[i][k] {
                    return Err(Error::InvalidParameter(format!(
                        "ata must be symmetric: entry ({k},{i}) = {} but ({i},{k}) = {}",
                        ata[k][i], ata[i][k]
                    )));
                }
            }
        }
        Ok(ClassAccumulator { ata, atb, count })
    }

    /// Adds one (aperture, target) observation.
    ///
    /// `ata` stays exactly symmetric: entry (k,i) and entry (i,k) receive
    /// the identical product sequence.
    pub fn add(&mut self, aperture: &Aperture, target: f64) {
        debug_assert!((0.0..=255.0).contains(&target), "target {target} out of range");
        let s = aperture.samples();
        for k in 0..APERTURE_SIZE {
            let row = &mut self.ata[k];
            let sk = s[k];
            for (i, &si) in s.iter().enumerate() {
                row[i] += sk * si;
            }
            self.atb[k] += sk * target;
        }
        self.count += 1;
    }

    /// Elementwise sum with another accumulator.
    pub fn merge(&mut self, other: &ClassAccumulator) {
        for (row, other_row) in self.ata.iter_mut().zip(&other.ata) {
            for (v, o) in row.iter_mut().zip(other_row) {
                *v += o;
            }
        }
        for (v, o) in self.atb.iter_mut().zip(&other.atb) {
            *v += o;
        }
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn ata(&self) -> &[[f64; APERTURE_SIZE]; APERTURE_SIZE] {
        &self.ata
    }

    pub fn atb(&self) -> &[f64; APERTURE_SIZE] {
        &self.atb
    }
}

/// Accumulators for every class of a classifier, indexed by [`ClassId`].
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatorSet {
    class_bits: u8,
    classes: Vec<ClassAccumulator>,
}

impl AccumulatorSet {
    /// Empty accumulators for a `class_bits`-bit classifier.
    pub fn new(class_bits: u8) -> Result<Self> {
        if !(APERTURE_SIZE as u8..=16).contains(&class_bits) {
            return Err(Error::InvalidParameter(format!(
                "class bits must be in 13..=16 (got {class_bits})"
            )));
        }
        Ok(AccumulatorSet {
            class_bits,
            classes: vec![ClassAccumulator::default(); 1usize << class_bits],
        })
    }

    /// Empty accumulators sized for `spec`'s classes.
    pub fn for_spec(spec: &ClassifierSpec) -> Self {
        AccumulatorSet::new(spec.class_bits()).expect("classifier bit widths are 13 or 14")
    }

    pub fn class_bits(&self) -> u8 {
        self.class_bits
    }

    pub fn class(&self, class: ClassId) -> Option<&ClassAccumulator> {
        self.classes.get(class.index())
    }

    /// Total number of accumulated pairs across all classes.
    pub fn total_count(&self) -> u64 {
        self.classes.iter().map(|c| c.count).sum()
    }

    /// Folds one training pair into its class.
    pub fn accumulate(&mut self, pair: &TrainingPair) -> Result<()> {
        let index = pair.class.index();
        if index >= self.classes.len() {
            return Err(Error::ClassOutOfRange {
                class: pair.class.bits(),
                class_bits: self.class_bits,
            });
        }
        self.classes[index].add(&pair.aperture, pair.target);
        Ok(())
    }

    /// Accumulates every pixel of an (enhanced, target) plane pair:
    /// aperture and class from the enhanced plane, target sample from the
    /// reference at the same position.
    pub fn accumulate_plane(
        &mut self,
        enhanced: &LumaPlane,
        target: &LumaPlane,
        spec: &ClassifierSpec,
    ) -> Result<()> {
        if spec.class_bits() != self.class_bits {
            return Err(Error::ClassBitsMismatch {
                spec_bits: spec.class_bits(),
                table_bits: self.class_bits,
            });
        }
        if !enhanced.same_geometry(target) {
            return Err(Error::GeometryMismatch {
                left_width: enhanced.width(),
                left_height: enhanced.height(),
                right_width: target.width(),
                right_height: target.height(),
            });
        }
        for y in 0..enhanced.height() {
            for x in 0..enhanced.width() {
                let aperture = aperture_at(enhanced, x, y);
                let class = classify(&aperture, spec);
                self.classes[class.index()].add(&aperture, target.get(x, y) as f64);
            }
        }
        Ok(())
    }

    /// Elementwise sum of two accumulator sets (associative, commutative;
    /// the empty set is the identity).
    pub fn merge(&mut self, other: &AccumulatorSet) -> Result<()> {
        if self.class_bits != other.class_bits {
            return Err(Error::ClassBitsMismatch {
                spec_bits: other.class_bits,
                table_bits: self.class_bits,
            });
        }
        for (mine, theirs) in self.classes.iter_mut().zip(&other.classes) {
            mine.merge(theirs);
        }
        Ok(())
    }

    /// Solves every class and assembles the coefficient table.
    pub fn solve(&self, min_samples: u64) -> CoefficientTable {
        self.solve_regularized(min_samples, 0.0)
    }

    /// [`solve`](AccumulatorSet::solve) with a ridge term added to the
    /// diagonal of every class system (0 = plain least squares).
    pub fn solve_regularized(&self, min_samples: u64, ridge: f64) -> CoefficientTable {
        let entries = self
            .classes
            .iter()
            .map(|acc| {
                let (weights, flag) = solve_class_regularized(acc, min_samples, ridge);
                TableEntry {
                    weights,
                    count: acc.count,
                    flag,
                }
            })
            .collect();
        CoefficientTable::new(self.class_bits, entries)
            .expect("accumulator set has one entry per class")
    }
}

/// Solves one class's normal equations. Returns the least-squares weights
/// when the class has at least `min_samples` pairs and the system is
/// numerically nonsingular; the identity filter otherwise.
pub fn solve_class(acc: &ClassAccumulator, min_samples: u64) -> ([f64; APERTURE_SIZE], SolveFlag) {
    solve_class_regularized(acc, min_samples, 0.0)
}

/// [`solve_class`] with a ridge term added to the diagonal (0 = plain
/// least squares).
pub fn solve_class_regularized(
    acc: &ClassAccumulator,
    min_samples: u64,
    ridge: f64,
) -> ([f64; APERTURE_SIZE], SolveFlag) {
    if acc.count < min_samples {
        return (TableEntry::identity(acc.count).weights, SolveFlag::IdentityFallback);
    }
    let mut a = acc.ata;
    if ridge != 0.0 {
        for (k, row) in a.iter_mut().enumerate() {
            row[k] += ridge;
        }
    }
    match gaussian_solve(a, acc.atb) {
        Some(weights) => (weights, SolveFlag::Solved),
        None => (TableEntry::identity(acc.count).weights, SolveFlag::IdentityFallback),
    }
}

/// Gaussian elimination with partial (row) pivoting. Returns `None` when a
/// pivot falls below `PIVOT_EPSILON` × the largest initial diagonal entry,
/// i.e. the system is treated as singular.
#[allow(clippy::needless_range_loop)]
fn gaussian_solve(
    mut a: [[f64; APERTURE_SIZE]; APERTURE_SIZE],
    mut b: [f64; APERTURE_SIZE],
) -> Option<[f64; APERTURE_SIZE]> {
    let n = APERTURE_SIZE;
    let max_diag = (0..n).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    if max_diag == 0.0 {
        return None;
    }
    let tolerance = PIVOT_EPSILON * max_diag;

    for col in 0..n {
        // Partial pivoting: bring the largest remaining entry of this
        // column to the diagonal.
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .expect("column range is non-empty");
        if a[pivot_row][col].abs() < tolerance {
            return None;
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            b.swap(pivot_row, col);
        }
        let pivot = a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[row][col] = 0.0;
            for k in col + 1..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }

    // Back substitution.
    let mut x = [0.0f64; APERTURE_SIZE];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

/// The complete off-line training process: enhance every degraded plane,
/// pair each enhanced pixel's aperture with the target sample, accumulate
/// per class, and solve.
///
/// `target_planes[i]` must have the geometry of `enhancer(degraded_planes[i])`
/// (for the up-scaling embodiment the degraded planes are half-size).
pub fn train<F>(
    target_planes: &[LumaPlane],
    degraded_planes: &[LumaPlane],
    mut enhancer: F,
    spec: &ClassifierSpec,
    min_samples: u64,
) -> Result<CoefficientTable>
where
    F: FnMut(&LumaPlane) -> Result<LumaPlane>,
{
    if target_planes.len() != degraded_planes.len() {
        return Err(Error::InvalidParameter(format!(
            "{} target planes but {} degraded planes",
            target_planes.len(),
            degraded_planes.len()
        )));
    }
    let mut set = AccumulatorSet::for_spec(spec);
    for (target, degraded) in target_planes.iter().zip(degraded_planes) {
        let enhanced = enhancer(degraded)?;
        set.accumulate_plane(&enhanced, target, spec)?;
    }
    Ok(set.solve(min_samples))
}

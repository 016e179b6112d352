//! Runtime repair: classify each pixel and apply its class's trained
//! 13-tap filter.
//!
//! This is the cheap half of the system — per pixel it costs one aperture
//! read, one classification, one table lookup and a 13-element dot
//! product. All the optimization effort lives in the offline
//! [`train`](crate::train) stage.

use crate::classify::{aperture_at, classify, ClassId, ClassifierSpec};
use crate::lut::CoefficientTable;
use crate::plane::{plane_from_values, LumaPlane};
use crate::{Error, Result};

fn check_bits(table: &CoefficientTable, spec: &ClassifierSpec) -> Result<()> {
    if table.class_bits() != spec.class_bits() {
        return Err(Error::ClassBitsMismatch {
            spec_bits: spec.class_bits(),
            table_bits: table.class_bits(),
        });
    }
    Ok(())
}

/// Filtered sample values before rounding, in row-major order.
///
/// Exposed separately from [`repair_plane`] so training-error evaluations
/// can measure the filter's real-valued output rather than the quantized
/// one.
pub fn filter_values(
    plane: &LumaPlane,
    table: &CoefficientTable,
    spec: &ClassifierSpec,
) -> Result<Vec<f64>> {
    check_bits(table, spec)?;
    let mut values = Vec::with_capacity(plane.width() * plane.height());
    for y in 0..plane.height() {
        for x in 0..plane.width() {
            let aperture = aperture_at(plane, x, y);
            let class = classify(&aperture, spec);
            let entry = table
                .get(class)
                .expect("classifier output fits the table's class range");
            let filtered: f64 = aperture
                .samples()
                .iter()
                .zip(&entry.weights)
                .map(|(s, w)| s * w)
                .sum();
            values.push(filtered);
        }
    }
    Ok(values)
}

/// Applies the per-class filters to a plane, rounding each output sample
/// to the nearest integer and clamping to [0, 255].
pub fn repair_plane(
    plane: &LumaPlane,
    table: &CoefficientTable,
    spec: &ClassifierSpec,
) -> Result<LumaPlane> {
    let values = filter_values(plane, table, spec)?;
    plane_from_values(plane.width(), plane.height(), &values)
}

/// The class of every pixel, row-major. Useful for inspecting class
/// coverage and for per-class error breakdowns.
pub fn classify_map(plane: &LumaPlane, spec: &ClassifierSpec) -> Vec<ClassId> {
    let mut classes = Vec::with_capacity(plane.width() * plane.height());
    for y in 0..plane.height() {
        for x in 0..plane.width() {
            classes.push(classify(&aperture_at(plane, x, y), spec));
        }
    }
    classes
}

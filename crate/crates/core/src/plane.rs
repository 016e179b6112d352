//! 8-bit single-channel image planes.

use crate::{Error, Result};

/// A width × height grid of 8-bit luma samples in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LumaPlane {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl LumaPlane {
    /// Wraps row-major samples. Dimensions must be at least 1×1 and
    /// `samples.len()` must equal `width * height`.
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyPlane { width, height });
        }
        if samples.len() != width * height {
            return Err(Error::PlaneGeometry {
                width,
                height,
                samples: samples.len(),
            });
        }
        Ok(LumaPlane {
            width,
            height,
            samples,
        })
    }

    /// A plane with every sample set to `value`.
    pub fn constant(width: usize, height: usize, value: u8) -> Result<Self> {
        LumaPlane::new(width, height, vec![value; width * height])
    }

    /// Builds a plane by evaluating `f(x, y)` at every position.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyPlane { width, height });
        }
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        LumaPlane::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    /// Sample at (x, y). Panics when out of range; use [`get_clamped`]
    /// for border-replicated access.
    ///
    /// [`get_clamped`]: LumaPlane::get_clamped
    pub fn get(&self, x: usize, y: usize) -> u8 {
        assert!(x < self.width && y < self.height, "({x},{y}) out of range");
        self.samples[y * self.width + x]
    }

    /// Sample at signed (x, y) with coordinates clamped to the plane,
    /// i.e. border replication.
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.samples[cy * self.width + cx]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    /// True when both planes have the same dimensions.
    pub fn same_geometry(&self, other: &LumaPlane) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// Converts a filtered real value back to an 8-bit sample: round half away
/// from zero, then clamp to [0, 255]. Every real→pixel conversion in the
/// crate goes through here.
pub(crate) fn round_clamp(value: f64) -> u8 {
    // f64::round is round-half-away-from-zero.
    let r = value.round();
    if r <= 0.0 {
        0
    } else if r >= 255.0 {
        255
    } else {
        r as u8
    }
}

/// Builds a plane from real-valued samples via [`round_clamp`].
pub(crate) fn plane_from_values(width: usize, height: usize, values: &[f64]) -> Result<LumaPlane> {
    LumaPlane::new(width, height, values.iter().map(|&v| round_clamp(v)).collect())
}

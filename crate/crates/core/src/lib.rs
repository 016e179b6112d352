//! Classification-based least-squares trained filters for repairing the
//! output of low-quality video enhancement modules.
//!
//! The pipeline has an offline half and a runtime half. Offline, a
//! high-quality reference is pushed through a simulated degradation (blocky
//! compression, Gaussian blur, or decimation) and then through the
//! enhancement module under repair (artifact smoothing, peaking, or bilinear
//! upscaling). Every pixel of the enhanced output contributes a training
//! pair: its 13-pixel diamond aperture and the reference sample at the same
//! position. Pairs are bucketed by an ADRC bit pattern (optionally extended
//! with one complexity bit), and a 13-tap linear filter is fitted per bucket
//! by least squares. At runtime the same classification selects the fitted
//! taps from a look-up table and a single dot product repairs each pixel.
//!
//! Module map:
//!
//! - [`plane`] / [`frame_io`]: 8-bit luma planes, raw 4:2:2 sequences, PGM.
//! - [`degrade`]: reference degradations that stand in for a cheap codec,
//!   an out-of-focus blur, and a resolution drop.
//! - [`enhance`]: the enhancement modules being repaired.
//! - [`classify`]: diamond apertures, ADRC bits, complexity bits.
//! - [`train`]: per-class normal-equation accumulation and the solver.
//! - [`lut`]: the coefficient table and its on-disk format.
//! - [`repair`]: runtime classification + filtering.
//! - [`metrics`]: MSE / PSNR / SSIM used to grade each stage.
//!
//! ```
//! use trained_filter::classify::ClassifierSpec;
//! use trained_filter::degrade::{gaussian_blur, GaussianSpec};
//! use trained_filter::enhance::{peaking_filter, PeakingSpec};
//! use trained_filter::plane::LumaPlane;
//! use trained_filter::repair::repair_plane;
//! use trained_filter::train::train;
//!
//! // A small detailed source, blurred and then peaked back.
//! let source = LumaPlane::from_fn(32, 32, |x, y| {
//!     (((x * 7) ^ (y * 5)) % 256) as u8
//! })?;
//! let blur = GaussianSpec::default();
//! let peek = PeakingSpec::default();
//! let degraded = gaussian_blur(&source, &blur)?;
//!
//! let spec = ClassifierSpec::adrc_with_std();
//! let table = train(
//!     std::slice::from_ref(&source),
//!     std::slice::from_ref(&degraded),
//!     |p| peaking_filter(p, &peek),
//!     &spec,
//!     26,
//! )?;
//! let enhanced = peaking_filter(&degraded, &peek)?;
//! let repaired = repair_plane(&enhanced, &table, &spec)?;
//! assert_eq!(repaired.width(), 32);
//! # Ok::<(), trained_filter::Error>(())
//! ```

pub mod classify;
mod convolve;
pub mod degrade;
pub mod enhance;
mod error;
pub mod frame_io;
pub mod lut;
pub mod metrics;
pub mod plane;
pub mod repair;
pub mod train;

pub use error::{Error, Result};
pub use plane::LumaPlane;

//! The three repair scenarios and their parameter defaults.

use clap::ValueEnum;

use trained_filter::classify::ClassifierSpec;
use trained_filter::degrade::{
    compress_blocky, downsample_2x, gaussian_blur, CompressionSpec, GaussianSpec,
};
use trained_filter::enhance::{bilinear_upscale_2x, peaking_filter, smooth_artifacts, PeakingSpec};
use trained_filter::{LumaPlane, Result};

use crate::{ClassModeArg, PipelineArgs};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum EmbodimentKind {
    /// Blocky compression repaired through artifact smoothing.
    Deblock,
    /// Gaussian blur repaired through peaking.
    Deblur,
    /// 2× decimation repaired through bilinear up-scaling.
    Upscale,
}

/// A fully resolved processing chain: degradation, enhancement and
/// classifier, with every parameter pinned.
pub struct Pipeline {
    pub kind: EmbodimentKind,
    pub compression: CompressionSpec,
    pub blur: GaussianSpec,
    pub peaking: PeakingSpec,
    pub classifier: ClassifierSpec,
}

impl Pipeline {
    /// The embodiment's defaults, with any explicit flag overrides applied.
    ///
    /// Defaults per embodiment:
    /// - deblock: compress at quality 20, smooth with radius 2 / sigma 1,
    ///   classify with ADRC plus the standard-deviation bit;
    /// - deblur: blur with radius 2 / sigma 1, peak with alpha 0.2,
    ///   classify with ADRC plus the standard-deviation bit;
    /// - upscale: decimate 2×, up-scale bilinearly, classify with plain
    ///   ADRC (complexity bits do not help here).
    pub fn from_args(args: &PipelineArgs) -> Pipeline {
        let kind = args.embodiment;
        let mut compression = CompressionSpec::default();
        if let Some(quality) = args.quality {
            compression.quality = quality;
        }
        let mut blur = GaussianSpec::default();
        if let Some(radius) = args.radius {
            blur.radius = radius;
        }
        if let Some(sigma) = args.sigma {
            blur.sigma = sigma;
        }
        let mut peaking = PeakingSpec::default();
        if let Some(alpha) = args.alpha {
            peaking.alpha = alpha;
        }

        let mut classifier = match kind {
            EmbodimentKind::Deblock | EmbodimentKind::Deblur => ClassifierSpec::adrc_with_std(),
            EmbodimentKind::Upscale => ClassifierSpec::adrc_only(),
        };
        if let Some(mode) = args.class_mode {
            classifier = match mode {
                ClassModeArg::None => ClassifierSpec::adrc_only(),
                ClassModeArg::Std => ClassifierSpec::adrc_with_std(),
                ClassModeArg::Dr => ClassifierSpec::adrc_with_range(),
                ClassModeArg::Entropy => ClassifierSpec::adrc_with_entropy(),
            };
        }
        if let Some(threshold) = args.class_threshold {
            classifier.threshold = threshold;
        }

        Pipeline {
            kind,
            compression,
            blur,
            peaking,
            classifier,
        }
    }

    /// The simulated degradation for one luma plane.
    pub fn degrade_plane(&self, plane: &LumaPlane) -> Result<LumaPlane> {
        match self.kind {
            EmbodimentKind::Deblock => compress_blocky(plane, &self.compression),
            EmbodimentKind::Deblur => gaussian_blur(plane, &self.blur),
            EmbodimentKind::Upscale => downsample_2x(plane),
        }
    }

    /// The enhancement module under repair, for one luma plane.
    pub fn enhance_plane(&self, plane: &LumaPlane) -> Result<LumaPlane> {
        match self.kind {
            EmbodimentKind::Deblock => smooth_artifacts(plane, &self.blur),
            EmbodimentKind::Deblur => peaking_filter(plane, &self.peaking),
            EmbodimentKind::Upscale => Ok(bilinear_upscale_2x(plane)),
        }
    }

    /// Whether the degraded stage has different geometry than the source
    /// (true only for the up-scaling embodiment, whose degraded stage
    /// cannot be scored against the original).
    pub fn degraded_changes_geometry(&self) -> bool {
        self.kind == EmbodimentKind::Upscale
    }

    /// How chroma planes travel through [`degrade_plane`]: geometry-changing
    /// stages resample chroma with the same operator so the frame stays
    /// valid 4:2:2; geometry-preserving stages pass chroma through.
    pub fn degrade_chroma(&self, plane: &LumaPlane) -> Result<LumaPlane> {
        match self.kind {
            EmbodimentKind::Upscale => downsample_2x(plane),
            _ => Ok(plane.clone()),
        }
    }

    /// Chroma counterpart of [`enhance_plane`]; see [`degrade_chroma`].
    ///
    /// [`degrade_chroma`]: Pipeline::degrade_chroma
    pub fn enhance_chroma(&self, plane: &LumaPlane) -> Result<LumaPlane> {
        match self.kind {
            EmbodimentKind::Upscale => Ok(bilinear_upscale_2x(plane)),
            _ => Ok(plane.clone()),
        }
    }
}

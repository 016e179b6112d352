//! The six subcommands.

use std::fs;
use std::path::PathBuf;

use trained_filter::lut::CoefficientTable;
use trained_filter::metrics::{mse, psnr, ssim, SsimSpec};
use trained_filter::repair::repair_plane;
use trained_filter::train::AccumulatorSet;
use trained_filter::{Error, Result};

use crate::embodiment::Pipeline;
use crate::media::{
    atomic_replace, atomic_write_text, expand_inputs, input_name, stage_path, Media,
};
use crate::{EvaluateCmd, ExperimentCmd, GeometryArgs, RepairCmd, StageCmd, TrainCmd, TrainingArgs};

const CSV_HEADER: &str = "name,stage,mse,psnr,ssim\n";

struct Scores {
    mse: f64,
    psnr: f64,
    ssim: f64,
}

/// Scores `candidate` against `reference`: the MSE is averaged over all
/// frames (and the PSNR derived from that average), the SSIM is the mean
/// of the per-frame scores.
fn score(reference: &Media, candidate: &Media) -> Result<Scores> {
    let refs = reference.luma_planes();
    let cands = candidate.luma_planes();
    if refs.len() != cands.len() {
        return Err(Error::InvalidParameter(format!(
            "reference has {} frames but candidate has {}",
            refs.len(),
            cands.len()
        )));
    }
    let spec = SsimSpec::default();
    let mut mse_sum = 0.0;
    let mut ssim_sum = 0.0;
    for (r, c) in refs.iter().zip(&cands) {
        mse_sum += mse(r, c)?;
        ssim_sum += ssim(r, c, &spec)?;
    }
    let n = refs.len() as f64;
    let mean_mse = mse_sum / n;
    Ok(Scores {
        mse: mean_mse,
        psnr: psnr(mean_mse),
        ssim: ssim_sum / n,
    })
}

/// One CSV row; `None` scores produce the empty-field form used when a
/// stage cannot be compared against the source (different geometry).
fn csv_row(name: &str, stage: &str, scores: Option<&Scores>) -> String {
    match scores {
        // f64 formatting renders infinity as "inf", which is exactly the
        // promised spelling for an infinite PSNR.
        Some(s) => format!(
            "{},{},{:.2},{:.2},{:.4}\n",
            name, stage, s.mse, s.psnr, s.ssim
        ),
        None => format!("{name},{stage},,,\n"),
    }
}

pub fn degrade(cmd: StageCmd) -> Result<()> {
    let pipeline = Pipeline::from_args(&cmd.pipeline);
    let input = Media::load(&cmd.input, &cmd.geometry)?;
    let output = input.map(
        |p| pipeline.degrade_plane(p),
        |c| pipeline.degrade_chroma(c),
    )?;
    output.save(&cmd.out)
}

pub fn enhance(cmd: StageCmd) -> Result<()> {
    let pipeline = Pipeline::from_args(&cmd.pipeline);
    let input = Media::load(&cmd.input, &cmd.geometry)?;
    let output = input.map(
        |p| pipeline.enhance_plane(p),
        |c| pipeline.enhance_chroma(c),
    )?;
    output.save(&cmd.out)
}

/// Degrades and enhances every corpus frame per the pipeline, accumulating
/// (enhanced, original) training pairs, and solves the per-class filters.
fn train_table(
    inputs: &[PathBuf],
    geometry: &GeometryArgs,
    pipeline: &Pipeline,
    training: &TrainingArgs,
) -> Result<CoefficientTable> {
    let files = expand_inputs(inputs)?;
    let frame_cap = training.max_frames.unwrap_or(usize::MAX);
    let mut set = AccumulatorSet::for_spec(&pipeline.classifier);
    for file in &files {
        let media = Media::load(file, geometry)?;
        for target in media.luma_planes().into_iter().take(frame_cap) {
            let degraded = pipeline.degrade_plane(target)?;
            let enhanced = pipeline.enhance_plane(&degraded)?;
            set.accumulate_plane(&enhanced, target, &pipeline.classifier)?;
        }
    }
    Ok(set.solve_regularized(training.min_samples, training.ridge))
}

pub fn train(cmd: TrainCmd) -> Result<()> {
    let pipeline = Pipeline::from_args(&cmd.pipeline);
    let table = train_table(&cmd.inputs, &cmd.geometry, &pipeline, &cmd.training)?;
    atomic_replace(&cmd.lut, |tmp| table.write_to_file(tmp))
}

pub fn repair(cmd: RepairCmd) -> Result<()> {
    let pipeline = Pipeline::from_args(&cmd.pipeline);
    let table = CoefficientTable::read_from_file(&cmd.lut)?;
    let input = Media::load(&cmd.input, &cmd.geometry)?;
    let output = input.map(
        |p| repair_plane(p, &table, &pipeline.classifier),
        |c| Ok(c.clone()),
    )?;
    output.save(&cmd.out)
}

pub fn evaluate(cmd: EvaluateCmd) -> Result<()> {
    let reference = Media::load(&cmd.reference, &cmd.geometry)?;
    let candidate = Media::load(&cmd.candidate, &cmd.geometry)?;
    let scores = score(&reference, &candidate)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push_str(&csv_row(
        &input_name(&cmd.candidate),
        &cmd.stage,
        Some(&scores),
    ));
    match &cmd.out {
        Some(path) => atomic_write_text(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

pub fn experiment(cmd: ExperimentCmd) -> Result<()> {
    let pipeline = Pipeline::from_args(&cmd.pipeline);
    fs::create_dir_all(&cmd.out).map_err(|e| Error::io(cmd.out.clone(), e))?;

    let table = train_table(&cmd.corpus, &cmd.geometry, &pipeline, &cmd.training)?;
    atomic_replace(&cmd.out.join("table.tflt"), |tmp| table.write_to_file(tmp))?;

    let mut csv = String::from(CSV_HEADER);
    for input in &cmd.test_inputs {
        let pristine = Media::load(input, &cmd.geometry)?;
        let degraded = pristine.map(
            |p| pipeline.degrade_plane(p),
            |c| pipeline.degrade_chroma(c),
        )?;
        let enhanced = degraded.map(
            |p| pipeline.enhance_plane(p),
            |c| pipeline.enhance_chroma(c),
        )?;
        let repaired = enhanced.map(
            |p| repair_plane(p, &table, &pipeline.classifier),
            |c| Ok(c.clone()),
        )?;

        degraded.save(&stage_path(&cmd.out, input, "degraded"))?;
        enhanced.save(&stage_path(&cmd.out, input, "enhanced"))?;
        repaired.save(&stage_path(&cmd.out, input, "repaired"))?;

        let name = input_name(input);
        if pipeline.degraded_changes_geometry() {
            csv.push_str(&csv_row(&name, "degraded", None));
        } else {
            csv.push_str(&csv_row(&name, "degraded", Some(&score(&pristine, &degraded)?)));
        }
        csv.push_str(&csv_row(&name, "enhanced", Some(&score(&pristine, &enhanced)?)));
        csv.push_str(&csv_row(&name, "repaired", Some(&score(&pristine, &repaired)?)));
    }
    atomic_write_text(&cmd.out.join("results.csv"), &csv)
}

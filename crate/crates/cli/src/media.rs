//! Input/output plumbing: format detection, corpus expansion and atomic
//! file writes.

use std::fs;
use std::path::{Path, PathBuf};

use trained_filter::frame_io::{read_pgm, read_sequence, write_pgm, write_sequence, Yuv422Frame};
use trained_filter::{Error, LumaPlane, Result};

use crate::GeometryArgs;

/// One loaded input: either a single grayscale image or a raw 4:2:2
/// sequence. The variant is remembered so outputs keep the input's format.
pub enum Media {
    Pgm(LumaPlane),
    Yuv(Vec<Yuv422Frame>),
}

fn is_pgm(path: &Path) -> bool {
    path.extension()
        .map(|e| e.eq_ignore_ascii_case("pgm"))
        .unwrap_or(false)
}

impl Media {
    /// Reads an input, deciding the format by extension: `.pgm` is a binary
    /// PGM image, anything else headerless raw YUV 4:2:2 (which requires
    /// the geometry flags).
    pub fn load(path: &Path, geometry: &GeometryArgs) -> Result<Media> {
        if is_pgm(path) {
            return Ok(Media::Pgm(read_pgm(path)?));
        }
        let (width, height) = match (geometry.width, geometry.height) {
            (Some(w), Some(h)) => (w, h),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "raw YUV input {} needs --width and --height",
                    path.display()
                )))
            }
        };
        Ok(Media::Yuv(read_sequence(path, width, height)?))
    }

    /// Writes this media to `path` in its own format, atomically.
    pub fn save(&self, path: &Path) -> Result<()> {
        match self {
            Media::Pgm(plane) => atomic_replace(path, |tmp| write_pgm(tmp, plane)),
            Media::Yuv(frames) => atomic_replace(path, |tmp| write_sequence(tmp, frames)),
        }
    }

    /// The luma planes of every frame, in order.
    pub fn luma_planes(&self) -> Vec<&LumaPlane> {
        match self {
            Media::Pgm(plane) => vec![plane],
            Media::Yuv(frames) => frames.iter().map(|f| f.luma()).collect(),
        }
    }

    /// Applies `luma_op` to every luma plane and `chroma_op` to every
    /// chroma plane, preserving the media kind.
    pub fn map<L, C>(&self, mut luma_op: L, mut chroma_op: C) -> Result<Media>
    where
        L: FnMut(&LumaPlane) -> Result<LumaPlane>,
        C: FnMut(&LumaPlane) -> Result<LumaPlane>,
    {
        match self {
            Media::Pgm(plane) => Ok(Media::Pgm(luma_op(plane)?)),
            Media::Yuv(frames) => {
                let mut out = Vec::with_capacity(frames.len());
                for frame in frames {
                    out.push(Yuv422Frame::new(
                        luma_op(frame.luma())?,
                        chroma_op(frame.chroma_u())?,
                        chroma_op(frame.chroma_v())?,
                    )?);
                }
                Ok(Media::Yuv(out))
            }
        }
    }
}

/// Expands a mixed list of files and directories into an ordered list of
/// input files. Directories contribute their `.pgm` / `.yuv` / `.raw`
/// entries sorted by name; explicitly listed files are taken as-is.
pub fn expand_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| Error::io(path.clone(), e))?
                .collect::<std::io::Result<Vec<_>>>()
                .map_err(|e| Error::io(path.clone(), e))?
                .into_iter()
                .map(|entry| entry.path())
                .filter(|p| {
                    p.is_file()
                        && p.extension()
                            .map(|e| {
                                e.eq_ignore_ascii_case("pgm")
                                    || e.eq_ignore_ascii_case("yuv")
                                    || e.eq_ignore_ascii_case("raw")
                            })
                            .unwrap_or(false)
                })
                .collect();
            entries.sort();
            if entries.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "directory {} contains no .pgm/.yuv/.raw inputs",
                    path.display()
                )));
            }
            files.extend(entries);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

/// The short display name of an input, used in CSV rows.
pub fn input_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// `<stem>.<stage>.<ext>` inside `dir`, for experiment stage files.
pub fn stage_path(dir: &Path, input: &Path, stage: &str) -> PathBuf {
    let stem = input_name(input);
    let ext = input
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "raw".to_string());
    dir.join(format!("{stem}.{stage}.{ext}"))
}

/// Runs `write` against a temporary file in `dest`'s directory, then
/// renames it over `dest` — so a failure never leaves a partial output.
pub fn atomic_replace<F>(dest: &Path, write: F) -> Result<()>
where
    F: FnOnce(&Path) -> Result<()>,
{
    let dir = match dest.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let tmp = tempfile::Builder::new()
        .prefix(".trained-filter.")
        .tempfile_in(dir)
        .map_err(|e| Error::io(dest.to_path_buf(), e))?
        .into_temp_path();
    write(&tmp)?;
    tmp.persist(dest)
        .map_err(|e| Error::io(dest.to_path_buf(), e.error))?;
    Ok(())
}

/// Atomically writes a text file (used for CSV output).
pub fn atomic_write_text(dest: &Path, text: &str) -> Result<()> {
    atomic_replace(dest, |tmp| {
        fs::write(tmp, text).map_err(|e| Error::io(dest.to_path_buf(), e))
    })
}

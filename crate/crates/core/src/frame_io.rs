//! Reading and writing raw 4:2:2 sequences and binary PGM images.
//!
//! Raw sequences are headerless planar YUV 4:2:2, 8 bits per sample: for
//! each frame, width×height luma bytes, then (width/2)×height bytes for
//! each chroma plane. Geometry comes from the caller; a file is valid when
//! its length is a positive multiple of `2 * width * height`.

use std::fs;
use std::path::Path;

use crate::plane::LumaPlane;
use crate::{Error, Result};

/// One planar YUV 4:2:2 frame. Chroma planes are half the luma width and
/// full height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Yuv422Frame {
    y: LumaPlane,
    u: LumaPlane,
    v: LumaPlane,
}

impl Yuv422Frame {
    /// Assembles a frame, checking that the luma width is even and both
    /// chroma planes are (width/2) × height.
    pub fn new(y: LumaPlane, u: LumaPlane, v: LumaPlane) -> Result<Self> {
        if !y.width().is_multiple_of(2) {
            return Err(Error::OddLumaWidth { width: y.width() });
        }
        let (cw, ch) = (y.width() / 2, y.height());
        for chroma in [&u, &v] {
            if chroma.width() != cw || chroma.height() != ch {
                return Err(Error::ChromaGeometry {
                    expected_width: cw,
                    expected_height: ch,
                    actual_width: chroma.width(),
                    actual_height: chroma.height(),
                });
            }
        }
        Ok(Yuv422Frame { y, u, v })
    }

    /// A frame with the given luma and neutral (128) chroma.
    pub fn from_luma(y: LumaPlane) -> Result<Self> {
        let (cw, ch) = (y.width() / 2, y.height());
        if !y.width().is_multiple_of(2) {
            return Err(Error::OddLumaWidth { width: y.width() });
        }
        let u = LumaPlane::constant(cw, ch, 128)?;
        let v = LumaPlane::constant(cw, ch, 128)?;
        Yuv422Frame::new(y, u, v)
    }

    pub fn width(&self) -> usize {
        self.y.width()
    }

    pub fn height(&self) -> usize {
        self.y.height()
    }

    pub fn luma(&self) -> &LumaPlane {
        &self.y
    }

    pub fn chroma_u(&self) -> &LumaPlane {
        &self.u
    }

    pub fn chroma_v(&self) -> &LumaPlane {
        &self.v
    }

    pub fn into_luma(self) -> LumaPlane {
        self.y
    }

    /// Replaces the luma plane, keeping chroma. The new plane must keep
    /// the frame a valid 4:2:2 layout.
    pub fn with_luma(&self, y: LumaPlane) -> Result<Self> {
        Yuv422Frame::new(y, self.u.clone(), self.v.clone())
    }
}

/// Reads every frame of a raw planar 4:2:2 file with the given geometry.
pub fn read_sequence(path: impl AsRef<Path>, width: usize, height: usize) -> Result<Vec<Yuv422Frame>> {
    let path = path.as_ref();
    if width == 0 || height == 0 {
        return Err(Error::EmptyPlane { width, height });
    }
    if !width.is_multiple_of(2) {
        return Err(Error::OddLumaWidth { width });
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let luma_len = width * height;
    let chroma_len = (width / 2) * height;
    let frame_len = luma_len + 2 * chroma_len;
    if bytes.is_empty() || bytes.len() % frame_len != 0 {
        return Err(Error::SequenceSize {
            path: path.to_path_buf(),
            file_len: bytes.len() as u64,
            frame_len: frame_len as u64,
            width,
            height,
        });
    }
    let mut frames = Vec::with_capacity(bytes.len() / frame_len);
    for chunk in bytes.chunks_exact(frame_len) {
        let y = LumaPlane::new(width, height, chunk[..luma_len].to_vec())?;
        let u = LumaPlane::new(
            width / 2,
            height,
            chunk[luma_len..luma_len + chroma_len].to_vec(),
        )?;
        let v = LumaPlane::new(width / 2, height, chunk[luma_len + chroma_len..].to_vec())?;
        frames.push(Yuv422Frame::new(y, u, v)?);
    }
    Ok(frames)
}

/// Writes frames as a raw planar 4:2:2 file. All frames must share one
/// geometry and the list must be non-empty.
pub fn write_sequence(path: impl AsRef<Path>, frames: &[Yuv422Frame]) -> Result<()> {
    let path = path.as_ref();
    let first = frames.first().ok_or(Error::EmptySequence)?;
    let (w, h) = (first.width(), first.height());
    let mut bytes = Vec::with_capacity(frames.len() * 2 * w * h);
    for (index, frame) in frames.iter().enumerate() {
        if frame.width() != w || frame.height() != h {
            return Err(Error::MixedGeometry {
                index,
                expected_width: w,
                expected_height: h,
                width: frame.width(),
                height: frame.height(),
            });
        }
        bytes.extend_from_slice(frame.luma().samples());
        bytes.extend_from_slice(frame.chroma_u().samples());
        bytes.extend_from_slice(frame.chroma_v().samples());
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Reads a binary 8-bit PGM (`P5`, maxval 255). `#` comments are accepted
/// anywhere in the header; the ASCII (`P2`) and 16-bit variants are
/// rejected.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<LumaPlane> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let fail = |reason: &str| Error::PgmFormat {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };

    let mut pos = 0usize;
    let mut token = |bytes: &[u8]| -> Option<String> {
        // Skip whitespace and # comments.
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        (pos > start).then(|| String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    let magic = token(&bytes).ok_or_else(|| fail("missing magic"))?;
    match magic.as_str() {
        "P5" => {}
        "P2" => return Err(fail("ASCII PGM (P2) is not supported, expected binary P5")),
        other => return Err(fail(&format!("not a PGM file (magic {other:?})"))),
    }
    let mut number = |name: &str| -> Result<usize> {
        token(&bytes)
            .ok_or_else(|| fail(&format!("missing {name}")))?
            .parse::<usize>()
            .map_err(|_| fail(&format!("malformed {name}")))
    };
    let width = number("width")?;
    let height = number("height")?;
    let maxval = number("maxval")?;
    if maxval != 255 {
        return Err(fail(&format!(
            "maxval {maxval} is not supported, only 8-bit (255)"
        )));
    }
    // Exactly one whitespace byte separates the header from the samples.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(fail("missing separator after maxval"));
    }
    pos += 1;
    let data = &bytes[pos..];
    if data.len() != width * height {
        return Err(fail(&format!(
            "expected {} samples, found {}",
            width * height,
            data.len()
        )));
    }
    LumaPlane::new(width, height, data.to_vec())
}

/// Writes a plane as binary 8-bit PGM.
pub fn write_pgm(path: impl AsRef<Path>, plane: &LumaPlane) -> Result<()> {
    let path = path.as_ref();
    let mut bytes = format!("P5\n{} {}\n255\n", plane.width(), plane.height()).into_bytes();
    bytes.extend_from_slice(plane.samples());
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

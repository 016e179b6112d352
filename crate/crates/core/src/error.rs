use std::path::PathBuf;

/// Crate-wide error type.
///
/// Variants are grouped by origin: plane/frame construction, file parsing,
/// parameter validation, and internal invariants that should never fire.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("plane geometry {width}x{height} does not match {samples} samples")]
    PlaneGeometry {
        width: usize,
        height: usize,
        samples: usize,
    },

    #[error("plane dimensions must be at least 1x1 (got {width}x{height})")]
    EmptyPlane { width: usize, height: usize },

    #[error("4:2:2 frame requires even luma width (got {width})")]
    OddLumaWidth { width: usize },

    #[error(
        "chroma plane is {actual_width}x{actual_height}, expected {expected_width}x{expected_height}"
    )]
    ChromaGeometry {
        expected_width: usize,
        expected_height: usize,
        actual_width: usize,
        actual_height: usize,
    },

    #[error(
        "{path}: size {file_len} bytes is not a positive multiple of the \
         {frame_len}-byte frame implied by {width}x{height} 4:2:2"
    )]
    SequenceSize {
        path: PathBuf,
        file_len: u64,
        frame_len: u64,
        width: usize,
        height: usize,
    },

    #[error("sequence contains no frames")]
    EmptySequence,

    #[error("frame 0 is {expected_width}x{expected_height} but frame {index} is {width}x{height}")]
    MixedGeometry {
        index: usize,
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    #[error("{path}: {reason}")]
    PgmFormat { path: PathBuf, reason: String },

    #[error("geometry mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    GeometryMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coordinates ({x},{y}) out of range for {width}x{height} plane")]
    OutOfRange {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },

    #[error("plane {width}x{height} is smaller than the {window}x{window} comparison window")]
    PlaneTooSmall {
        width: usize,
        height: usize,
        window: usize,
    },

    #[error("class {class} out of range for a {class_bits}-bit table")]
    ClassOutOfRange { class: u16, class_bits: u8 },

    #[error("classifier produces {spec_bits}-bit classes but the table stores {table_bits}-bit classes")]
    ClassBitsMismatch { spec_bits: u8, table_bits: u8 },

    #[error("coefficient table: {0}")]
    LutFormat(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// An [`Error::Io`] tagged with the file it concerns.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

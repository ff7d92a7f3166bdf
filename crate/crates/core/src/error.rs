use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
///
/// Every parser failure is a structured variant; no loader panics on
/// malformed input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("point cloud truncated: {length} bytes is not a multiple of 16 (complete records end at byte {valid_end})")]
    TruncatedPointCloud { length: usize, valid_end: usize },

    #[error("point {index}: non-finite coordinate ({component})")]
    NonFinitePoint { index: usize, component: &'static str },

    #[error("calibration is missing required key {key:?}")]
    MissingCalibKey { key: &'static str },

    #[error("calibration key {key:?}: expected {expected} values, found {found}")]
    CalibValueCount {
        key: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: {message}")]
    LabelParse { line: usize, message: String },

    #[error("not valid UTF-8 text: {0}")]
    NotUtf8(#[from] std::str::Utf8Error),

    #[error("malformed number {token:?}: {source}")]
    BadNumber {
        token: String,
        #[source]
        source: std::num::ParseFloatError,
    },

    #[error("image decode failed: {0}")]
    ImageDecode(#[from] image::ImageError),

    #[error("depth map must be a single-channel 16-bit PNG, found {found}")]
    DepthBitDepth { found: String },

    #[error("depth value {value} mm at pixel {index} is not representable in 16-bit raw units")]
    DepthOutOfRange { value: f64, index: usize },

    #[error("image must be 8-bit RGB, found {found}")]
    ImageFormat { found: String },

    #[error("severity {severity} is out of range for pattern {pattern} (valid: 1..={max})")]
    SeverityOutOfRange {
        pattern: &'static str,
        severity: u8,
        max: u8,
    },

    #[error("severity table: {0}")]
    SeverityTable(String),

    #[error("pattern {pattern} cannot be applied to a single frame; it operates on an ordered sequence")]
    NeedsSequence { pattern: &'static str },

    #[error("frame ids are not consecutive: expected {expected}, found {found}")]
    NonSequentialFrames { expected: i64, found: i64 },

    #[error("no frames found under {dir}")]
    EmptyDataset { dir: PathBuf },

    #[error("frame {stem:?}: missing {artifact} file")]
    IncompleteFrame { stem: String, artifact: &'static str },

    #[error("empty ground truth: no evaluated ground-truth boxes")]
    EmptyGroundTruth,

    #[error("frame {frame}: duplicate track id {track_id}")]
    DuplicateTrackId { frame: i64, track_id: i64 },

    #[error("label has no {field}, required for {context}")]
    MissingLabelField {
        field: &'static str,
        context: &'static str,
    },

    #[error("depth maps have different dimensions: {0}x{1} vs {2}x{3}")]
    DepthShapeMismatch(u32, u32, u32, u32),

    #[error("no valid ground-truth pixels (m = 0)")]
    NoValidDepthPixels,

    #[error("prediction is absent at {count} ground-truth pixels (first at index {first})")]
    MissingPredictedDepth { count: usize, first: usize },

    #[error("robustness is undefined: {reason}")]
    UndefinedRobustness { reason: String },

    #[error("cannot aggregate an empty set of robustness scores")]
    EmptyRobustnessSet,

    #[error("report needs exactly one clean result, found {found}")]
    CleanBaseline { found: usize },

    #[error("unknown report format {0:?} (expected json, csv, or markdown)")]
    UnknownFormat(String),

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

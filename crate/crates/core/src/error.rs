use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid spin value {0}; entries must be -1 or +1")]
    InvalidSpin(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large for exact analysis: {what} = {value} exceeds {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("kernel is not reversible w.r.t. the target measure (max violation {violation:.3e})")]
    NotReversible { violation: f64 },

    #[error("energy is constant; smallest nonzero energy gap is undefined")]
    FlatLandscape,

    #[error("empty schedule")]
    EmptySchedule,

    #[error("bad IDX magic number {found:#010x} in {path}")]
    BadMagic { path: PathBuf, found: u32 },

    #[error("truncated IDX payload in {path}: expected {expected} bytes, found {actual}")]
    Truncated {
        path: PathBuf,
        expected: usize,
        actual: usize,
    },

    #[error("image/label count mismatch: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },

    #[error("class {class} has {available} samples, {requested} requested")]
    InsufficientSamples {
        class: usize,
        available: usize,
        requested: usize,
    },

    #[error("MNIST file {missing} not found in {dir}; expected train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-images-idx3-ubyte, t10k-labels-idx1-ubyte (set RSA_MNIST_DIR)")]
    MissingDataset { dir: PathBuf, missing: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

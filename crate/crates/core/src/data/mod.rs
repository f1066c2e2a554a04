//! Dataset ingestion, experiment configuration and result files.

mod config;
mod idx;
mod mnist;
mod results;

pub use config::{DatasetSpec, ExperimentConfig, ModelSpec, SCHEMA_VERSION};
pub use idx::{dataset_from_idx, parse_idx, read_idx, IdxFile, IMAGE_MAGIC, LABEL_MAGIC};
pub use mnist::{
    check_mnist_dir, default_mnist_dir, load_mnist, make_splits, split_indices, subsample, Mnist, MnistSpec,
    SplitMode, MNIST_CLASSES, MNIST_DIR_ENV, MNIST_FILES,
};
pub use results::{
    read_results, round_sig6, write_results, CurvePoint, OutputFormat, Record, ResultRecord, ResultRow,
};

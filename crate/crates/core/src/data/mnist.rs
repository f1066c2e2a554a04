//! MNIST loading and class-balanced splits.

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::idx::{dataset_from_idx, read_idx};
use crate::energy::ClassifierDataset;
use crate::error::{Error, Result};
use crate::rng;

pub const MNIST_DIR_ENV: &str = "RSA_MNIST_DIR";
pub const MNIST_FILES: [&str; 4] =
    ["train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"];
pub const MNIST_CLASSES: usize = 10;

/// `$RSA_MNIST_DIR`, else `data/mnist` under the workspace root.
pub fn default_mnist_dir() -> PathBuf {
    std::env::var_os(MNIST_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist"))
}

pub fn check_mnist_dir(dir: &Path) -> Result<()> {
    for f in MNIST_FILES {
        if !dir.join(f).is_file() {
            return Err(Error::MissingDataset { dir: dir.to_path_buf(), missing: f.to_string() });
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Mnist {
    pub train: ClassifierDataset,
    pub test: ClassifierDataset,
}

pub fn load_mnist(dir: &Path) -> Result<Mnist> {
    check_mnist_dir(dir)?;
    let load = |images: &str, labels: &str| {
        dataset_from_idx(&read_idx(dir.join(images))?, &read_idx(dir.join(labels))?, MNIST_CLASSES)
    };
    Ok(Mnist { train: load(MNIST_FILES[0], MNIST_FILES[1])?, test: load(MNIST_FILES[2], MNIST_FILES[3])? })
}

/// Disjoint class-balanced train and test index sets drawn from one dataset.
pub fn split_indices(
    targets: &[u8],
    classes: usize,
    train_per_class: usize,
    test_per_class: usize,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (s, &t) in targets.iter().enumerate() {
        by_class[t as usize].push(s);
    }
    let mut rng = rng::seeded(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (class, idx) in by_class.iter_mut().enumerate() {
        let requested = train_per_class + test_per_class;
        if idx.len() < requested {
            return Err(Error::InsufficientSamples { class, available: idx.len(), requested });
        }
        idx.shuffle(&mut rng);
        train.extend_from_slice(&idx[..train_per_class]);
        test.extend_from_slice(&idx[train_per_class..requested]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn make_splits(
    data: &ClassifierDataset,
    train_per_class: usize,
    test_per_class: usize,
    seed: u64,
) -> Result<(ClassifierDataset, ClassifierDataset)> {
    let (train, test) = split_indices(data.targets(), data.classes(), train_per_class, test_per_class, seed)?;
    Ok((data.select(&train), data.select(&test)))
}

/// `size` samples drawn uniformly without replacement, kept in original order.
pub fn subsample(data: &ClassifierDataset, size: usize, seed: u64) -> Result<ClassifierDataset> {
    if size > data.len() {
        return Err(Error::InvalidArgument(format!("cannot subsample {size} from {} samples", data.len())));
    }
    let mut idx = rand::seq::index::sample(&mut rng::seeded(seed), data.len(), size).into_vec();
    idx.sort_unstable();
    Ok(data.select(&idx))
}

/// Where train and test samples come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    /// Train on the standard training file, test on the standard test file.
    #[default]
    Standard,
    /// Pool both files and draw disjoint per-class train/test sets. The
    /// standard training file has fewer than 6,000 images of some digits.
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MnistSpec {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub split: SplitMode,
    #[serde(default)]
    pub train_per_class: Option<usize>,
    #[serde(default)]
    pub test_per_class: Option<usize>,
    /// Keep only this many uniformly chosen training samples.
    #[serde(default)]
    pub train_subsample: Option<usize>,
}

impl MnistSpec {
    pub fn resolved_dir(&self) -> PathBuf {
        self.dir.clone().unwrap_or_else(default_mnist_dir)
    }

    pub fn load(&self, seed: u64) -> Result<Mnist> {
        let raw = load_mnist(&self.resolved_dir())?;
        let mut out = match self.split {
            SplitMode::Standard => {
                let pick = |d: &ClassifierDataset, per: Option<usize>, s: u64| match per {
                    Some(p) => split_indices(d.targets(), MNIST_CLASSES, p, 0, s).map(|(i, _)| d.select(&i)),
                    None => Ok(d.clone()),
                };
                Mnist {
                    train: pick(&raw.train, self.train_per_class, seed)?,
                    test: pick(&raw.test, self.test_per_class, seed ^ 1)?,
                }
            }
            SplitMode::Pooled => {
                let pooled = concat(&raw.train, &raw.test)?;
                let (train, test) =
                    make_splits(&pooled, self.train_per_class.unwrap_or(6000), self.test_per_class.unwrap_or(1000), seed)?;
                Mnist { train, test }
            }
        };
        if let Some(size) = self.train_subsample {
            out.train = subsample(&out.train, size, seed)?;
        }
        Ok(out)
    }
}

fn concat(a: &ClassifierDataset, b: &ClassifierDataset) -> Result<ClassifierDataset> {
    let mut inputs = Vec::with_capacity((a.len() + b.len()) * a.features());
    for d in [a, b] {
        for s in 0..d.len() {
            inputs.extend_from_slice(d.sample(s));
        }
    }
    let targets = a.targets().iter().chain(b.targets()).copied().collect();
    ClassifierDataset::new(inputs, targets, a.features(), a.classes())
}

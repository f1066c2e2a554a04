//! Versioned JSON experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::mnist::{check_mnist_dir, MnistSpec};
use crate::anneal::{AnnealSchedule, Kernel};
use crate::energy::Reduction;
use crate::error::{Error, Result};
use crate::experiments::{RobustnessSpec, SweepSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DatasetSpec {
    Mnist(MnistSpec),
    /// Uniform `±1` patterns with uniform `±1` labels.
    Synthetic { patterns: usize, dim: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    Perceptron,
    CrossEntropy {
        #[serde(default)]
        reduction: Reduction,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub dataset: DatasetSpec,
    pub model: ModelSpec,
    pub schedule: AnnealSchedule,
    pub replicas: usize,
    pub seed: u64,
    #[serde(default)]
    pub kernel: Kernel,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Trajectory sampling interval; no trajectory when absent.
    #[serde(default)]
    pub record_every: Option<u64>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub robustness: Option<RobustnessSpec>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be at least 1".into()));
        }
        self.schedule.validate()?;
        match &self.dataset {
            DatasetSpec::Mnist(m) => {
                check_mnist_dir(&m.resolved_dir())?;
                if matches!(self.model, ModelSpec::Perceptron) {
                    return Err(Error::Config("MNIST needs the cross-entropy model".into()));
                }
            }
            DatasetSpec::Synthetic { patterns, dim, .. } => {
                if *patterns == 0 || *dim == 0 {
                    return Err(Error::Config("synthetic patterns and dim must be positive".into()));
                }
                if !matches!(self.model, ModelSpec::Perceptron) {
                    return Err(Error::Config("synthetic patterns need the perceptron model".into()));
                }
            }
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        if let Some(r) = &self.robustness {
            r.validate()?;
        }
        Ok(())
    }

    /// SHA-256 of the canonical (key-sorted, compact) JSON form.
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serialises");
        let digest = Sha256::digest(value.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

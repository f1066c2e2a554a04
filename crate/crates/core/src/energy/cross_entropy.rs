//! Softmax cross-entropy of a single binary `K × d` weight matrix.

use serde::{Deserialize, Serialize};

use super::{check_dim, EnergyModel};
use crate::error::{Error, Result};
use crate::spin::SpinVector;

/// `n` samples of `d` features in `[0, 1]` with class targets in `[0, K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierDataset {
    inputs: Vec<f32>,
    targets: Vec<u8>,
    features: usize,
    classes: usize,
}

impl ClassifierDataset {
    pub fn new(inputs: Vec<f32>, targets: Vec<u8>, features: usize, classes: usize) -> Result<Self> {
        if features == 0 || classes == 0 {
            return Err(Error::InvalidArgument("features and classes must be positive".into()));
        }
        if inputs.len() != targets.len() * features {
            return Err(Error::LengthMismatch { expected: targets.len() * features, actual: inputs.len() });
        }
        if let Some(v) = inputs.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidArgument(format!("feature value {v} outside [0, 1]")));
        }
        if let Some(&t) = targets.iter().find(|&&t| t as usize >= classes) {
            return Err(Error::InvalidArgument(format!("target {t} outside [0, {classes})")));
        }
        Ok(Self { inputs, targets, features, classes })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn features(&self) -> usize {
        self.features
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn targets(&self) -> &[u8] {
        &self.targets
    }

    pub fn sample(&self, s: usize) -> &[f32] {
        &self.inputs[s * self.features..(s + 1) * self.features]
    }

    /// Samples at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut inputs = Vec::with_capacity(indices.len() * self.features);
        let mut targets = Vec::with_capacity(indices.len());
        for &s in indices {
            inputs.extend_from_slice(self.sample(s));
            targets.push(self.targets[s]);
        }
        Self { inputs, targets, features: self.features, classes: self.classes }
    }

    /// Number of weights of the matching `K × d` classifier.
    pub fn weight_dim(&self) -> usize {
        self.classes * self.features
    }
}

/// How per-sample losses are combined into the energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    #[default]
    Sum,
    Mean,
}

/// Index of the largest entry; ties go to the smallest index.
pub fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = k;
        }
    }
    best
}

fn log_sum_exp(row: &[f64]) -> f64 {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + row.iter().map(|&v| (v - max).exp()).sum::<f64>().ln()
}

/// log-sum-exp of `row` with entry `k` replaced by `value`.
fn log_sum_exp_replacing(row: &[f64], k: usize, value: f64) -> f64 {
    let entry = |c: usize| if c == k { value } else { row[c] };
    let max = (0..row.len()).map(entry).fold(f64::NEG_INFINITY, f64::max);
    max + (0..row.len()).map(|c| (entry(c) - max).exp()).sum::<f64>().ln()
}

/// Cross-entropy energy `-Σ_s log softmax(W x_s)_{t_s}` for weights laid out
/// row-major as `W[k * d + j]`.
#[derive(Debug, Clone)]
pub struct CrossEntropyEnergy {
    data: ClassifierDataset,
    reduction: Reduction,
    // column-sparse copy of the inputs: for feature j, (sample, value) pairs
    // with nonzero value, in col_start[j]..col_start[j + 1]
    col_start: Vec<usize>,
    col_sample: Vec<u32>,
    col_value: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct CrossEntropyCache {
    logits: Vec<f64>,
    lse: Vec<f64>,
    total: f64,
}

impl CrossEntropyCache {
    pub fn logits(&self) -> &[f64] {
        &self.logits
    }
}

impl CrossEntropyEnergy {
    pub fn new(data: ClassifierDataset) -> Self {
        Self::with_reduction(data, Reduction::Sum)
    }

    pub fn with_reduction(data: ClassifierDataset, reduction: Reduction) -> Self {
        let d = data.features;
        let mut counts = vec![0usize; d];
        for x in data.inputs.iter().enumerate().filter(|(_, &v)| v != 0.0) {
            counts[x.0 % d] += 1;
        }
        let mut col_start = vec![0usize; d + 1];
        for j in 0..d {
            col_start[j + 1] = col_start[j] + counts[j];
        }
        let nnz = col_start[d];
        let mut col_sample = vec![0u32; nnz];
        let mut col_value = vec![0f64; nnz];
        let mut fill = col_start.clone();
        for s in 0..data.len() {
            for (j, &v) in data.sample(s).iter().enumerate() {
                if v != 0.0 {
                    col_sample[fill[j]] = s as u32;
                    col_value[fill[j]] = v as f64;
                    fill[j] += 1;
                }
            }
        }
        Self { data, reduction, col_start, col_sample, col_value }
    }

    pub fn dataset(&self) -> &ClassifierDataset {
        &self.data
    }

    pub fn reduction(&self) -> Reduction {
        self.reduction
    }

    fn scale(&self) -> f64 {
        match self.reduction {
            Reduction::Sum => 1.0,
            Reduction::Mean => 1.0 / self.data.len().max(1) as f64,
        }
    }

    /// Row-major `n × K` matrix of class scores.
    pub fn logits(&self, w: &SpinVector) -> Result<Vec<f64>> {
        check_dim(self.data.weight_dim(), w)?;
        let (d, k_count) = (self.data.features, self.data.classes);
        let mut logits = vec![0f64; self.data.len() * k_count];
        for (s, row) in logits.chunks_mut(k_count).enumerate() {
            let x = self.data.sample(s);
            for (k, out) in row.iter_mut().enumerate() {
                let weights = &w.values()[k * d..(k + 1) * d];
                *out = weights.iter().zip(x).map(|(&wv, &xv)| wv as f64 * xv as f64).sum();
            }
        }
        Ok(logits)
    }

    pub fn cross_entropy_energy(&self, w: &SpinVector) -> Result<f64> {
        let logits = self.logits(w)?;
        Ok(self.total_from_logits(&logits) * self.scale())
    }

    fn total_from_logits(&self, logits: &[f64]) -> f64 {
        logits
            .chunks(self.data.classes)
            .zip(&self.data.targets)
            .map(|(row, &t)| log_sum_exp(row) - row[t as usize])
            .sum()
    }

    /// Argmax accuracy with lowest-index tie breaking.
    pub fn classification_accuracy(&self, w: &SpinVector) -> Result<f64> {
        let logits = self.logits(w)?;
        if self.data.is_empty() {
            return Ok(0.0);
        }
        let correct = logits
            .chunks(self.data.classes)
            .zip(&self.data.targets)
            .filter(|(row, &t)| argmax_lowest(row) == t as usize)
            .count();
        Ok(correct as f64 / self.data.len() as f64)
    }

    fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.col_start[j]..self.col_start[j + 1];
        self.col_sample[r.clone()].iter().map(|&s| s as usize).zip(self.col_value[r].iter().copied())
    }
}

impl EnergyModel for CrossEntropyEnergy {
    type Cache = CrossEntropyCache;

    fn dim(&self) -> usize {
        self.data.weight_dim()
    }

    fn energy(&self, w: &SpinVector) -> f64 {
        self.cross_entropy_energy(w).expect("weight dimension matches K * d")
    }

    fn init_cache(&self, w: &SpinVector) -> CrossEntropyCache {
        let logits = self.logits(w).expect("weight dimension matches K * d");
        let lse: Vec<f64> = logits.chunks(self.data.classes).map(log_sum_exp).collect();
        let total = self.total_from_logits(&logits);
        CrossEntropyCache { logits, lse, total }
    }

    fn cached_energy(&self, cache: &CrossEntropyCache) -> f64 {
        cache.total * self.scale()
    }

    fn flip_delta(&self, cache: &CrossEntropyCache, w: &SpinVector, i: usize) -> f64 {
        let (d, kc) = (self.data.features, self.data.classes);
        let (k, j) = (i / d, i % d);
        let step = -2.0 * w.get(i) as f64;
        let mut delta = 0.0;
        for (s, x) in self.column(j) {
            let row = &cache.logits[s * kc..(s + 1) * kc];
            let next = row[k] + step * x;
            let lse = log_sum_exp_replacing(row, k, next);
            let target_shift = if self.data.targets[s] as usize == k { step * x } else { 0.0 };
            delta += (lse - cache.lse[s]) - target_shift;
        }
        delta * self.scale()
    }

    fn commit_flip(&self, cache: &mut CrossEntropyCache, w: &SpinVector, i: usize) {
        let (d, kc) = (self.data.features, self.data.classes);
        let (k, j) = (i / d, i % d);
        let step = -2.0 * w.get(i) as f64;
        for (s, x) in self.column(j) {
            let t = self.data.targets[s] as usize;
            let row = &mut cache.logits[s * kc..(s + 1) * kc];
            let old = cache.lse[s] - row[t];
            row[k] += step * x;
            let lse = log_sum_exp(row);
            cache.total += (lse - row[t]) - old;
            cache.lse[s] = lse;
        }
    }

    fn accuracy(&self, w: &SpinVector) -> Option<f64> {
        self.classification_accuracy(w).ok()
    }
}

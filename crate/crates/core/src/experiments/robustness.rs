use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::mean_ci;
use super::sweep::with_jobs;
use super::train::{check_scale, run_point, PointParams, RunLabel, Task};
use crate::anneal::{AnnealSchedule, GammaSchedule};
use crate::data::{CurvePoint, ExperimentConfig};
use crate::energy::EnergyModel;
use crate::error::{Error, Result};
use crate::rng;
use crate::spin::SpinVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationMode {
    /// Exactly `round(p N)` distinct coordinates.
    #[default]
    ExactCount,
    /// Each coordinate independently with probability `p`.
    Bernoulli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaluationTarget {
    /// The replica with the lowest final training loss.
    #[default]
    BestReplica,
    PerReplica,
}

fn default_repetitions() -> u32 {
    1000
}

fn default_confidence() -> f64 {
    0.95
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessSpec {
    pub p_values: Vec<f64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default)]
    pub mode: PerturbationMode,
    #[serde(default)]
    pub target: EvaluationTarget,
    /// Train one model per coupling value; empty means the base schedule's.
    #[serde(default)]
    pub gammas: Vec<f64>,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

impl RobustnessSpec {
    pub fn new(p_values: Vec<f64>, repetitions: u32) -> Self {
        Self {
            p_values,
            repetitions,
            mode: PerturbationMode::ExactCount,
            target: EvaluationTarget::BestReplica,
            gammas: Vec::new(),
            confidence: 0.95,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_values.is_empty() || self.p_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config("p values must be a non-empty list in [0, 1]".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("robustness needs at least one repetition".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessPoint {
    pub p: f64,
    /// Flips per repetition in exact-count mode; expected flips otherwise.
    pub flips: usize,
    pub mean_accuracy: f64,
    pub ci_half_width: f64,
}

fn perturb<R: Rng>(w: &SpinVector, p: f64, mode: PerturbationMode, rng: &mut R) -> SpinVector {
    let mut out = w.clone();
    match mode {
        PerturbationMode::ExactCount => {
            let k = (p * w.len() as f64).round() as usize;
            for i in sample(rng, w.len(), k) {
                out.flip(i);
            }
        }
        PerturbationMode::Bernoulli => {
            for i in 0..w.len() {
                if rng.gen::<f64>() < p {
                    out.flip(i);
                }
            }
        }
    }
    out
}

/// Accuracy of `w` under random flips, for every `p` in the spec.
/// Repetition `r` of the `k`-th `p` draws from stream `(k, r)` of `seed`.
pub fn robustness_eval<M: EnergyModel>(
    w: &SpinVector,
    model: &M,
    spec: &RobustnessSpec,
    seed: u64,
) -> Result<Vec<RobustnessPoint>> {
    spec.validate()?;
    crate::energy::check_dim(model.dim(), w)?;
    let accuracy = |v: &SpinVector| {
        model.accuracy(v).ok_or_else(|| Error::InvalidArgument("model does not report an accuracy".into()))
    };
    let base = accuracy(w)?;
    spec.p_values
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let flips = (p * w.len() as f64).round() as usize;
            if p == 0.0 {
                return Ok(RobustnessPoint { p, flips: 0, mean_accuracy: base, ci_half_width: 0.0 });
            }
            let values: Vec<f64> = (0..spec.repetitions)
                .into_par_iter()
                .map(|r| {
                    let mut rng = rng::stream(seed, rng::stream_id(k as u32, r));
                    accuracy(&perturb(w, p, spec.mode, &mut rng))
                })
                .collect::<Result<_>>()?;
            let ci = mean_ci(&values, spec.confidence);
            Ok(RobustnessPoint { p, flips, mean_accuracy: ci.mean, ci_half_width: ci.half_width })
        })
        .collect()
}

/// Curves for one trained model, as evaluated by [`robustness_command`].
#[derive(Debug, Clone)]
pub struct RobustnessCurve {
    pub gamma: f64,
    pub replica: usize,
    pub train_accuracy: f64,
    pub points: Vec<RobustnessPoint>,
}

/// Trains one model per coupling value and perturbs it: the MNIST test set
/// for classifiers, the training patterns for the perceptron task.
pub fn robustness_command(cfg: &ExperimentConfig, full_scale: bool, jobs: usize) -> Result<(Vec<RobustnessCurve>, Vec<CurvePoint>)> {
    let spec = cfg.robustness.as_ref().ok_or_else(|| Error::Config("config has no \"robustness\" section".into()))?;
    spec.validate()?;
    check_scale(cfg, &cfg.schedule, full_scale)?;
    let task = Task::load(cfg)?;
    with_jobs(jobs, || robustness_on(&task, cfg, spec))
}

pub fn robustness_on(task: &Task, cfg: &ExperimentConfig, spec: &RobustnessSpec) -> Result<(Vec<RobustnessCurve>, Vec<CurvePoint>)> {
    let hash = cfg.hash();
    let base = PointParams::from_config(cfg);
    let (bi, bf, g0) = base.summary();
    let gammas = if spec.gammas.is_empty() { vec![g0] } else { spec.gammas.clone() };
    let mut curves = Vec::new();
    let mut rows = Vec::new();
    for (point, &gamma) in gammas.iter().enumerate() {
        let schedule = AnnealSchedule::exponential_with_gamma(
            bi,
            bf,
            GammaSchedule::Constant { gamma },
            cfg.schedule.iterations(),
        )?;
        let params = PointParams { schedule, ..base.clone() };
        let label = RunLabel {
            config_hash: &hash,
            command: "robustness",
            seed: cfg.seed,
            point: point as u32,
            repetition: 0,
            record_every: None,
        };
        let trained = run_point(task, &params, &label)?;
        let replicas: Vec<usize> = match spec.target {
            EvaluationTarget::BestReplica => vec![trained.record.best_replica],
            EvaluationTarget::PerReplica => (0..trained.weights.len()).collect(),
        };
        for a in replicas {
            let w = &trained.weights[a];
            let seed = rng::derive_seed(cfg.seed, (point as u64) << 16 | a as u64);
            let points = match task {
                Task::Perceptron(m) => robustness_eval(w, m, spec, seed)?,
                Task::Classifier { test, .. } => robustness_eval(w, test, spec, seed)?,
            };
            for pt in &points {
                rows.push(CurvePoint {
                    run_id: format!("{}-robustness-p{point}-a{a}", &hash[..12]),
                    config_hash: hash.clone(),
                    gamma,
                    replica: a,
                    p: pt.p,
                    flips: pt.flips,
                    mean_accuracy: pt.mean_accuracy,
                    ci_half_width: pt.ci_half_width,
                    repetitions: spec.repetitions,
                });
            }
            curves.push(RobustnessCurve { gamma, replica: a, train_accuracy: trained.record.replica_train_accuracy[a], points });
        }
    }
    Ok((curves, rows))
}

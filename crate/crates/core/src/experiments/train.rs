use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::anneal::{run_from, AnnealSchedule, ChainState, GammaSchedule, Kernel, RunOptions, RunStats};
use crate::data::{DatasetSpec, ExperimentConfig, ModelSpec, ResultRecord};
use crate::energy::{generate_synthetic, CrossEntropyEnergy, EnergyModel, PerceptronEnergy};
use crate::error::{Error, Result};
use crate::rng;
use crate::spin::{ReplicaEnsemble, SpinVector};

/// MNIST runs longer than this need `full_scale`.
pub const DESK_SCALE_ITERATIONS: u64 = 50_000;

/// A loaded dataset with its energy model(s).
#[derive(Debug, Clone)]
pub enum Task {
    Perceptron(PerceptronEnergy),
    Classifier { train: CrossEntropyEnergy, test: CrossEntropyEnergy },
}

impl Task {
    pub fn load(cfg: &ExperimentConfig) -> Result<Self> {
        match (&cfg.dataset, cfg.model) {
            (DatasetSpec::Synthetic { patterns, dim, seed }, ModelSpec::Perceptron) => {
                Ok(Task::Perceptron(PerceptronEnergy::new(generate_synthetic(*patterns, *dim, *seed))?))
            }
            (DatasetSpec::Mnist(spec), ModelSpec::CrossEntropy { reduction }) => {
                let data = spec.load(cfg.seed)?;
                Ok(Task::Classifier {
                    train: CrossEntropyEnergy::with_reduction(data.train, reduction),
                    test: CrossEntropyEnergy::with_reduction(data.test, reduction),
                })
            }
            _ => Err(Error::Config("dataset and model kinds do not match".into())),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Task::Perceptron(m) => m.dim(),
            Task::Classifier { train, .. } => train.dim(),
        }
    }

    /// Accuracy on the training data.
    pub fn train_accuracy(&self, w: &SpinVector) -> Result<f64> {
        match self {
            Task::Perceptron(m) => m.train_accuracy(w),
            Task::Classifier { train, .. } => train.classification_accuracy(w),
        }
    }

    /// Held-out `(loss, accuracy)`, if the task has a test set.
    pub fn test_metrics(&self, w: &SpinVector) -> Result<Option<(f64, f64)>> {
        match self {
            Task::Perceptron(_) => Ok(None),
            Task::Classifier { test, .. } => {
                Ok(Some((test.cross_entropy_energy(w)?, test.classification_accuracy(w)?)))
            }
        }
    }
}

/// What varies between sweep points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointParams {
    pub schedule: AnnealSchedule,
    pub replicas: usize,
    pub kernel: Kernel,
}

impl PointParams {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Self { schedule: cfg.schedule.clone(), replicas: cfg.replicas, kernel: cfg.kernel }
    }

    /// `(β_i, β_f, γ)` for reporting; `γ` is the final value of a varying coupling.
    pub fn summary(&self) -> (f64, f64, f64) {
        match &self.schedule {
            AnnealSchedule::Exponential { beta_initial, beta_final, gamma, .. } => {
                let g = match *gamma {
                    GammaSchedule::Constant { gamma } => gamma,
                    GammaSchedule::Exponential { r#final, .. } => r#final,
                };
                (*beta_initial, *beta_final, g)
            }
            AnnealSchedule::Piecewise { stages } => {
                let last = stages.last().expect("validated schedule");
                (stages[0].beta, last.beta, last.gamma)
            }
        }
    }
}

/// A finished annealing run.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub record: ResultRecord,
    pub weights: Vec<SpinVector>,
    pub stats: RunStats,
}

impl TrainOutcome {
    pub fn best_weights(&self) -> &SpinVector {
        &self.weights[self.record.best_replica]
    }
}

/// Labels attached to a run's record.
#[derive(Debug, Clone)]
pub struct RunLabel<'a> {
    pub config_hash: &'a str,
    pub command: &'a str,
    pub seed: u64,
    pub point: u32,
    pub repetition: u32,
    pub record_every: Option<u64>,
}

fn anneal<M: EnergyModel>(
    model: &M,
    params: &PointParams,
    rng_seed: u64,
    stream: u64,
    record_every: Option<u64>,
) -> (Vec<SpinVector>, RunStats) {
    let mut rng = rng::stream(rng_seed, stream);
    let ensemble = ReplicaEnsemble::random(params.replicas, model.dim(), &mut rng);
    let state = ChainState::new(model, ensemble, rng).expect("ensemble matches the model");
    let opts = RunOptions { replicas: params.replicas, kernel: params.kernel, record_every, record_accuracy: false };
    let (state, stats) = run_from(model, &params.schedule, &opts, state);
    (state.ensemble().replicas().to_vec(), stats)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Anneals one `(point, repetition)` on its own rng stream and evaluates every replica.
pub fn run_point(task: &Task, params: &PointParams, label: &RunLabel<'_>) -> Result<TrainOutcome> {
    params.schedule.validate()?;
    if params.replicas == 0 {
        return Err(Error::Config("replicas must be at least 1".into()));
    }
    let stream = rng::stream_id(label.point, label.repetition);
    let (weights, stats) = match task {
        Task::Perceptron(m) => anneal(m, params, label.seed, stream, label.record_every),
        Task::Classifier { train, .. } => anneal(train, params, label.seed, stream, label.record_every),
    };
    let train_loss = stats.final_energies.clone();
    let train_acc: Vec<f64> = weights.iter().map(|w| task.train_accuracy(w)).collect::<Result<_>>()?;
    let test: Vec<(f64, f64)> = weights.iter().filter_map(|w| task.test_metrics(w).transpose()).collect::<Result<_>>()?;
    let test_loss: Vec<f64> = test.iter().map(|t| t.0).collect();
    let test_acc: Vec<f64> = test.iter().map(|t| t.1).collect();
    let best = stats.best_replica();
    let (beta_initial, beta_final, gamma) = params.summary();
    let has_test = !test.is_empty();
    let record = ResultRecord {
        run_id: format!(
            "{}-{}-p{}-r{}",
            &label.config_hash[..label.config_hash.len().min(12)],
            label.command,
            label.point,
            label.repetition
        ),
        config_hash: label.config_hash.to_string(),
        command: label.command.to_string(),
        seed: label.seed,
        point: label.point,
        repetition: label.repetition,
        beta_initial,
        beta_final,
        gamma,
        replicas: params.replicas,
        kernel: params.kernel,
        iterations: stats.iterations,
        active_transitions: stats.active_transitions,
        best_replica: best,
        train_loss: train_loss[best],
        train_accuracy: Some(train_acc[best]),
        test_loss: has_test.then(|| test_loss[best]),
        test_accuracy: has_test.then(|| test_acc[best]),
        mean_train_loss: mean(&train_loss),
        mean_train_accuracy: Some(mean(&train_acc)),
        mean_test_loss: has_test.then(|| mean(&test_loss)),
        mean_test_accuracy: has_test.then(|| mean(&test_acc)),
        replica_train_loss: train_loss,
        replica_train_accuracy: train_acc,
        replica_test_loss: test_loss,
        replica_test_accuracy: test_acc,
        trajectory: stats.trajectory.iter().map(|p| (p.iteration, p.total_energy)).collect(),
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    };
    Ok(TrainOutcome { record, weights, stats })
}

/// Refuses MNIST schedules beyond desk scale unless `full_scale` is set.
pub fn check_scale(cfg: &ExperimentConfig, schedule: &AnnealSchedule, full_scale: bool) -> Result<()> {
    if matches!(cfg.dataset, DatasetSpec::Mnist(_)) && schedule.iterations() > DESK_SCALE_ITERATIONS && !full_scale {
        return Err(Error::Config(format!(
            "{} iterations exceeds the desk-scale limit of {DESK_SCALE_ITERATIONS}; pass --full-scale",
            schedule.iterations()
        )));
    }
    Ok(())
}

/// One training run of the configured experiment.
pub fn train_command(cfg: &ExperimentConfig, full_scale: bool) -> Result<TrainOutcome> {
    check_scale(cfg, &cfg.schedule, full_scale)?;
    let task = Task::load(cfg)?;
    train_on(&task, cfg)
}

/// Like [`train_command`] with an already loaded task.
pub fn train_on(task: &Task, cfg: &ExperimentConfig) -> Result<TrainOutcome> {
    let hash = cfg.hash();
    let label = RunLabel {
        config_hash: &hash,
        command: "train",
        seed: cfg.seed,
        point: 0,
        repetition: 0,
        record_every: cfg.record_every,
    };
    run_point(task, &PointParams::from_config(cfg), &label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(iterations: u64, replicas: usize) -> ExperimentConfig {
        ExperimentConfig {
            schema_version: 1,
            dataset: DatasetSpec::Synthetic { patterns: 20, dim: 51, seed: 1 },
            model: ModelSpec::Perceptron,
            schedule: AnnealSchedule::exponential(0.1, 1000.0, iterations).unwrap(),
            replicas,
            seed: 5,
            kernel: Kernel::Combined,
            output: None,
            record_every: Some(1000),
            sweep: None,
            robustness: None,
        }
    }

    #[test]
    fn perceptron_training_reaches_zero_energy() {
        let cfg = config(20_000, 3);
        let out = train_command(&cfg, false).unwrap();
        assert_eq!(out.record.train_loss, 0.0);
        assert_eq!(out.record.train_accuracy, Some(1.0));
        assert_eq!(out.record.replica_train_loss.len(), 3);
        assert_eq!(out.record.test_accuracy, None);
        assert_eq!(out.record.trajectory.len(), 21);
        assert_eq!(out.weights.len(), 3);
    }

    #[test]
    fn reruns_match_except_timestamp() {
        let cfg = config(3_000, 2);
        let mut a = train_command(&cfg, false).unwrap().record;
        let mut b = train_command(&cfg, false).unwrap().record;
        a.timestamp = 0;
        b.timestamp = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn zero_iterations_keep_the_random_start() {
        let cfg = config(0, 1);
        let out = train_command(&cfg, false).unwrap();
        assert_eq!(out.record.active_transitions, 0);
        assert_eq!(out.record.iterations, 0);
    }
}

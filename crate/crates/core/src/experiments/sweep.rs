use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{mean_ci, MeanCi};
use super::train::{check_scale, run_point, PointParams, RunLabel, Task};
use crate::anneal::{AnnealSchedule, GammaSchedule};
use crate::data::{ExperimentConfig, ResultRecord};
use crate::error::{Error, Result};

fn default_confidence() -> f64 {
    0.95
}

fn default_repetitions() -> u32 {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SweepGrid {
    /// Constant coupling values; optionally crossed with replica counts.
    Gamma {
        values: Vec<f64>,
        #[serde(default)]
        replicas: Vec<usize>,
    },
    /// Every `(β_i, β_f)` pair with `β_i ≤ β_f`.
    Beta { initial: Vec<f64>, r#final: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub grid: SweepGrid,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let empty = match &self.grid {
            SweepGrid::Gamma { values, .. } => values.is_empty(),
            SweepGrid::Beta { initial, r#final } => initial.is_empty() || r#final.is_empty(),
        };
        if empty {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("sweep needs at least one repetition".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Config("confidence must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Grid points in their fixed order; a point's index selects its rng streams.
    pub fn points(&self, base: &ExperimentConfig) -> Result<Vec<PointParams>> {
        let base_point = PointParams::from_config(base);
        let iterations = base.schedule.iterations();
        let (bi, bf, _) = base_point.summary();
        let mut out = Vec::new();
        match &self.grid {
            SweepGrid::Gamma { values, replicas } => {
                let ys = if replicas.is_empty() { vec![base.replicas] } else { replicas.clone() };
                for &y in &ys {
                    for &g in values {
                        let schedule = AnnealSchedule::exponential_with_gamma(
                            bi,
                            bf,
                            GammaSchedule::Constant { gamma: g },
                            iterations,
                        )?;
                        out.push(PointParams { schedule, replicas: y, ..base_point.clone() });
                    }
                }
            }
            SweepGrid::Beta { initial, r#final } => {
                let (_, _, g) = base_point.summary();
                for &i in initial {
                    for &f in r#final {
                        if f < i {
                            continue;
                        }
                        let schedule =
                            AnnealSchedule::exponential_with_gamma(i, f, GammaSchedule::Constant { gamma: g }, iterations)?;
                        out.push(PointParams { schedule, ..base_point.clone() });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Aggregate over the repetitions of one grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSummary {
    pub point: u32,
    pub beta_initial: f64,
    pub beta_final: f64,
    pub gamma: f64,
    pub replicas: usize,
    pub train_loss: MeanCi,
    pub train_accuracy: MeanCi,
    pub test_loss: Option<MeanCi>,
    pub test_accuracy: Option<MeanCi>,
    pub active_transitions: MeanCi,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// One record per `(point, repetition)`, ordered by point then repetition.
    pub records: Vec<ResultRecord>,
    pub summaries: Vec<PointSummary>,
}

/// Runs `jobs` closures concurrently (0 = rayon's default).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Runs `points` in parallel, each repetition on stream `(point, repetition)`
/// of `cfg.seed`, so results do not depend on scheduling order.
pub fn run_sweep(
    task: &Task,
    cfg: &ExperimentConfig,
    command: &str,
    points: &[PointParams],
    repetitions: u32,
    confidence: f64,
    jobs: usize,
) -> Result<SweepResult> {
    let hash = cfg.hash();
    let jobs_list: Vec<(u32, u32)> =
        (0..points.len() as u32).flat_map(|p| (0..repetitions).map(move |r| (p, r))).collect();
    let records: Vec<ResultRecord> = with_jobs(jobs, || {
        jobs_list
            .par_iter()
            .map(|&(p, r)| {
                let label = RunLabel {
                    config_hash: &hash,
                    command,
                    seed: cfg.seed,
                    point: p,
                    repetition: r,
                    record_every: cfg.record_every,
                };
                run_point(task, &points[p as usize], &label).map(|o| o.record)
            })
            .collect::<Result<_>>()
    })?;
    let summaries = summarize(&records, confidence);
    Ok(SweepResult { records, summaries })
}

pub fn summarize(records: &[ResultRecord], confidence: f64) -> Vec<PointSummary> {
    let mut out: Vec<PointSummary> = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let p = records[start].point;
        let end = start + records[start..].iter().take_while(|r| r.point == p).count();
        let group = &records[start..end];
        let ci = |f: &dyn Fn(&ResultRecord) -> Option<f64>| -> Option<MeanCi> {
            let v: Vec<f64> = group.iter().filter_map(f).collect();
            (!v.is_empty()).then(|| mean_ci(&v, confidence))
        };
        let first = &group[0];
        out.push(PointSummary {
            point: p,
            beta_initial: first.beta_initial,
            beta_final: first.beta_final,
            gamma: first.gamma,
            replicas: first.replicas,
            train_loss: ci(&|r| Some(r.train_loss)).expect("non-empty group"),
            train_accuracy: ci(&|r| r.train_accuracy).unwrap_or(MeanCi { mean: f64::NAN, half_width: f64::NAN, n: 0 }),
            test_loss: ci(&|r| r.test_loss),
            test_accuracy: ci(&|r| r.test_accuracy),
            active_transitions: ci(&|r| Some(r.active_transitions as f64)).expect("non-empty group"),
        });
        start = end;
    }
    out
}

fn sweep_command(cfg: &ExperimentConfig, full_scale: bool, jobs: usize, command: &str, want_gamma: bool) -> Result<SweepResult> {
    let spec = cfg.sweep.as_ref().ok_or_else(|| Error::Config("config has no \"sweep\" section".into()))?;
    spec.validate()?;
    if matches!(spec.grid, SweepGrid::Gamma { .. }) != want_gamma {
        return Err(Error::Config(format!("sweep grid kind does not match {command}")));
    }
    check_scale(cfg, &cfg.schedule, full_scale)?;
    let points = spec.points(cfg)?;
    let task = Task::load(cfg)?;
    run_sweep(&task, cfg, command, &points, spec.repetitions, spec.confidence, jobs)
}

pub fn sweep_gamma(cfg: &ExperimentConfig, full_scale: bool, jobs: usize) -> Result<SweepResult> {
    sweep_command(cfg, full_scale, jobs, "sweep-gamma", true)
}

pub fn sweep_beta(cfg: &ExperimentConfig, full_scale: bool, jobs: usize) -> Result<SweepResult> {
    sweep_command(cfg, full_scale, jobs, "sweep-beta", false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anneal::Kernel;
    use crate::data::{DatasetSpec, ModelSpec};

    fn config() -> ExperimentConfig {
        ExperimentConfig {
            schema_version: 1,
            dataset: DatasetSpec::Synthetic { patterns: 15, dim: 31, seed: 2 },
            model: ModelSpec::Perceptron,
            schedule: AnnealSchedule::exponential(0.1, 100.0, 2_000).unwrap(),
            replicas: 3,
            seed: 9,
            kernel: Kernel::Combined,
            output: None,
            record_every: None,
            sweep: Some(SweepSpec {
                grid: SweepGrid::Gamma { values: vec![0.0, 0.5, 1.0], replicas: vec![] },
                repetitions: 2,
                confidence: 0.95,
            }),
            robustness: None,
        }
    }

    fn strip(mut v: Vec<ResultRecord>) -> Vec<ResultRecord> {
        for r in &mut v {
            r.timestamp = 0;
        }
        v
    }

    #[test]
    fn one_row_per_point_and_repetition() {
        let res = sweep_gamma(&config(), false, 1).unwrap();
        assert_eq!(res.records.len(), 6);
        let keys: Vec<(u32, u32)> = res.records.iter().map(|r| (r.point, r.repetition)).collect();
        assert_eq!(keys, vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]);
        assert_eq!(res.summaries.len(), 3);
        assert_eq!(res.summaries[1].gamma, 0.5);
        assert!(sweep_beta(&config(), false, 1).is_err());
    }

    #[test]
    fn points_are_order_independent() {
        let cfg = config();
        let all = strip(sweep_gamma(&cfg, false, 2).unwrap().records);
        // the same point alone, placed first in a different grid
        let mut alone = cfg.clone();
        alone.sweep.as_mut().unwrap().grid = SweepGrid::Gamma { values: vec![1.0], replicas: vec![] };
        let task = Task::load(&alone).unwrap();
        let points = alone.sweep.as_ref().unwrap().points(&alone).unwrap();
        // index 2 in the full grid; re-run it under that index
        let mut shifted = points.clone();
        shifted.insert(0, points[0].clone());
        shifted.insert(0, points[0].clone());
        let res = strip(run_sweep(&task, &cfg, "sweep-gamma", &shifted, 2, 0.95, 1).unwrap().records);
        let a: Vec<_> = all.iter().filter(|r| r.point == 2).map(|r| (r.active_transitions, r.train_loss)).collect();
        let b: Vec<_> = res.iter().filter(|r| r.point == 2).map(|r| (r.active_transitions, r.train_loss)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn beta_grid_skips_inverted_pairs() {
        let mut cfg = config();
        cfg.sweep = Some(SweepSpec {
            grid: SweepGrid::Beta { initial: vec![1.0, 10.0], r#final: vec![5.0, 100.0] },
            repetitions: 1,
            confidence: 0.95,
        });
        let points = cfg.sweep.as_ref().unwrap().points(&cfg).unwrap();
        assert_eq!(points.len(), 3);
    }
}

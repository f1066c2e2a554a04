// Coupling sweep on the perceptron task, ten repetitions per point.

use replicated_annealing::anneal::AnnealSchedule;
use replicated_annealing::data::{DatasetSpec, ExperimentConfig, ModelSpec};
use replicated_annealing::experiments::{sweep_gamma, SweepGrid, SweepSpec};

fn main() -> replicated_annealing::Result<()> {
    let cfg = ExperimentConfig {
        schema_version: 1,
        dataset: DatasetSpec::Synthetic { patterns: 40, dim: 101, seed: 3 },
        model: ModelSpec::Perceptron,
        schedule: AnnealSchedule::exponential(0.1, 1000.0, 30_000)?,
        replicas: 3,
        seed: 11,
        kernel: Default::default(),
        output: None,
        record_every: None,
        sweep: Some(SweepSpec {
            grid: SweepGrid::Gamma { values: vec![0.0, 0.2, 0.4, 0.8, 1.6, 3.2], replicas: vec![3, 5] },
            repetitions: 10,
            confidence: 0.95,
        }),
        robustness: None,
    };
    let res = sweep_gamma(&cfg, false, 0)?;
    println!(" y  gamma   train accuracy      active transitions");
    for s in &res.summaries {
        println!(
            "{:>2}  {:>5}   {:.4} ± {:.4}     {:>8.0} ± {:.0}",
            s.replicas,
            s.gamma,
            s.train_accuracy.mean,
            s.train_accuracy.half_width,
            s.active_transitions.mean,
            s.active_transitions.half_width
        );
    }
    Ok(())
}

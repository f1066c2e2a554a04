//! Anneal a binary perceptron on random patterns, once with independent
//! replicas and once with a coupling between them.

use replicated_annealing::anneal::{run, AnnealSchedule, GammaSchedule, Kernel, RunOptions};
use replicated_annealing::energy::{generate_synthetic, EnergyModel, PerceptronEnergy};

fn main() -> replicated_annealing::Result<()> {
    let model = PerceptronEnergy::new(generate_synthetic(30, 100, 1))?;
    let opts = RunOptions { replicas: 10, kernel: Kernel::Combined, record_every: Some(50_000), record_accuracy: false };

    for gamma in [0.0, 0.8] {
        let schedule =
            AnnealSchedule::exponential_with_gamma(0.1, 1000.0, GammaSchedule::Constant { gamma }, 200_000)?;
        let (state, stats) = run(&model, &schedule, &opts, 7)?;
        let best = stats.best_replica();
        let w = state.ensemble().replica(best);
        println!("gamma = {gamma}");
        for p in &stats.trajectory {
            println!("  it {:>7}  sum of energies {:.1}", p.iteration, p.total_energy);
        }
        println!(
            "  best replica {best}: energy {}, accuracy {:.3}, {} active of {} proposals",
            model.energy(w),
            model.accuracy(w).unwrap_or(f64::NAN),
            stats.active_transitions,
            stats.iterations
        );
    }
    Ok(())
}

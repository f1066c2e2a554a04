//! Finite-horizon check of the convergence criterion for two cooling schedules.

use replicated_annealing::anneal::azencott_lengths;
use replicated_annealing::exact::validate_schedule;

fn main() -> replicated_annealing::Result<()> {
    let (m, kappa) = (1.0, std::f64::consts::E);
    let n = 10_000;

    let betas: Vec<f64> = (1..=n).map(|k| ((k + 1) as f64).ln()).collect();
    let lengths = azencott_lengths(&betas, m, kappa, 1.0, 1.0)?;
    let slow: Vec<(f64, f64)> = betas.iter().zip(&lengths).map(|(&b, &t)| (b, t as f64)).collect();
    let fast: Vec<(f64, f64)> = (1..=n).map(|k| ((k as f64).ln(), 1.0)).collect();

    for (name, stages) in [("Azencott lengths", &slow), ("one step per stage", &fast)] {
        let r = validate_schedule(stages, m, kappa)?;
        println!(
            "{name:>20}: {:?}, final {:.1}, tail slope {:.3}, steps {}",
            r.verdict,
            r.final_value,
            r.tail_slope,
            stages.iter().map(|s| s.1).sum::<f64>()
        );
    }
    Ok(())
}

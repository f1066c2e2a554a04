//! Train one model per coupling on 30 random patterns and measure how the
//! training accuracy survives random weight flips.

use replicated_annealing::data::ExperimentConfig;
use replicated_annealing::experiments::robustness_command;

fn main() -> replicated_annealing::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/synthetic_robustness.json");
    let cfg = ExperimentConfig::load(path)?;
    let (curves, _) = robustness_command(&cfg, false, 0)?;

    print!("{:>6}", "p");
    for c in &curves {
        print!("  gamma={:<5}", c.gamma);
    }
    println!();
    for i in 0..curves[0].points.len() {
        print!("{:>6}", curves[0].points[i].p);
        for c in &curves {
            let pt = &c.points[i];
            print!("  {:.3}±{:.3}", pt.mean_accuracy, pt.ci_half_width);
        }
        println!();
    }
    Ok(())
}

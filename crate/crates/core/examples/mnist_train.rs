//! Desk-scale MNIST run: 10,000 training images, 50,000 proposals, one replica.
//!
//! Needs the four IDX files in `data/mnist` or in the directory named by
//! `RSA_MNIST_DIR` (`scripts/fetch_mnist.sh` downloads them).

use replicated_annealing::data::{check_mnist_dir, default_mnist_dir, ExperimentConfig};
use replicated_annealing::experiments::train_command;

fn main() -> replicated_annealing::Result<()> {
    if let Err(e) = check_mnist_dir(&default_mnist_dir()) {
        eprintln!("{e}");
        return Ok(());
    }
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/mnist_desk.json");
    let cfg = ExperimentConfig::load(path)?;
    let out = train_command(&cfg, false)?;
    let r = &out.record;
    println!("train loss {:.4}, accuracy {:.4}", r.train_loss, r.train_accuracy.unwrap_or(f64::NAN));
    println!("test  loss {:.4}, accuracy {:.4}", r.test_loss.unwrap_or(f64::NAN), r.test_accuracy.unwrap_or(f64::NAN));
    println!("{} active transitions in {:.1?}", r.active_transitions, out.stats.wall_clock);
    Ok(())
}

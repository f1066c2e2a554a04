//! Run a short training job, append its record to CSV and JSONL files and read them back.

use replicated_annealing::anneal::AnnealSchedule;
use replicated_annealing::data::{read_results, write_results, DatasetSpec, ExperimentConfig, ModelSpec, OutputFormat, ResultRecord};
use replicated_annealing::experiments::train_command;

fn main() -> replicated_annealing::Result<()> {
    let cfg = ExperimentConfig {
        schema_version: 1,
        dataset: DatasetSpec::Synthetic { patterns: 20, dim: 51, seed: 5 },
        model: ModelSpec::Perceptron,
        schedule: AnnealSchedule::exponential(0.1, 100.0, 10_000)?,
        replicas: 2,
        seed: 4,
        kernel: Default::default(),
        output: None,
        record_every: Some(2_500),
        sweep: None,
        robustness: None,
    };
    println!("config hash {}", cfg.hash());
    let record = train_command(&cfg, false)?.record;

    let dir = std::env::temp_dir().join("rsa-results-example");
    std::fs::create_dir_all(&dir)?;
    for (name, format) in [("runs.csv", OutputFormat::Csv), ("runs.jsonl", OutputFormat::Jsonl)] {
        let path = dir.join(name);
        let _ = std::fs::remove_file(&path);
        write_results(std::slice::from_ref(&record), &path, format)?;
        let back: Vec<ResultRecord> = read_results(&path, format)?;
        println!("{}: {} row(s), trajectory {:?}", path.display(), back.len(), back[0].trajectory);
    }
    Ok(())
}

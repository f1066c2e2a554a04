use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use replicated_annealing::anneal::{azencott_lengths, Kernel};
use replicated_annealing::data::{write_results, ExperimentConfig, OutputFormat, Record};
use replicated_annealing::exact::{validate_schedule, Verdict};
use replicated_annealing::experiments::{
    exact_verify_command, robustness_command, sweep_beta, sweep_gamma, train_command, VerifyOptions,
};
use replicated_annealing::Result;

#[derive(Parser)]
#[command(name = "rsa", version, about = "Replicated simulated annealing experiments and exact checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the output file extension.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long, value_enum)]
    kernel: Option<Kernel>,
    /// Allow MNIST schedules beyond 50,000 iterations.
    #[arg(long)]
    full_scale: bool,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// `β_k = ln(k + 1)` with Azencott stage lengths.
    Azencott,
    /// `β_k = ln k` with unit stage lengths.
    LogK,
}

#[derive(Args)]
struct ScheduleArgs {
    /// JSON array of `[beta, length]` pairs.
    #[arg(long, conflicts_with = "preset")]
    stages: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Preset::Azencott)]
    preset: Preset,
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = std::f64::consts::E)]
    kappa: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    mc_steps: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// One annealing run of the configured experiment.
    Train(RunArgs),
    /// Grid over initial and final inverse temperatures.
    SweepBeta(RunArgs),
    /// Grid over the coupling, optionally crossed with replica counts.
    SweepGamma(RunArgs),
    /// Accuracy under random weight flips.
    Robustness(RunArgs),
    /// Exact checks on the bundled small landscapes.
    ExactVerify(VerifyArgs),
    /// Finite-horizon convergence criterion of a cooling schedule.
    ValidateSchedule(ScheduleArgs),
}

fn load(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(kernel) = args.kernel {
        cfg.kernel = kernel;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn save<R: Record>(rows: &[R], cfg: &ExperimentConfig, args: &RunArgs) -> Result<Option<PathBuf>> {
    let Some(path) = cfg.output.clone() else { return Ok(None) };
    let format = args.format.unwrap_or_else(|| OutputFormat::from_path(&path));
    write_results(rows, &path, format)?;
    Ok(Some(path))
}

fn write_json(value: &serde_json::Value, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    println!("{text}");
    Ok(())
}

fn schedule_stages(args: &ScheduleArgs) -> Result<Vec<(f64, f64)>> {
    if let Some(path) = &args.stages {
        return Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?);
    }
    Ok(match args.preset {
        Preset::Azencott => {
            let betas: Vec<f64> = (1..=args.horizon).map(|k| ((k + 1) as f64).ln()).collect();
            let lengths = azencott_lengths(&betas, args.m, args.kappa, 1.0, 1.0)?;
            betas.into_iter().zip(lengths).map(|(b, t)| (b, t as f64)).collect()
        }
        Preset::LogK => (1..=args.horizon).map(|k| ((k as f64).ln(), 1.0)).collect(),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Train(args) => {
            let cfg = load(&args)?;
            let outcome = train_command(&cfg, args.full_scale)?;
            let path = save(std::slice::from_ref(&outcome.record), &cfg, &args)?;
            write_json(&json!({ "config": args.config, "seed": cfg.seed, "output": path, "record": outcome.record }), None)?;
        }
        Command::SweepBeta(args) => {
            let cfg = load(&args)?;
            let res = sweep_beta(&cfg, args.full_scale, args.jobs)?;
            let path = save(&res.records, &cfg, &args)?;
            write_json(&json!({ "config": args.config, "seed": cfg.seed, "output": path, "points": res.summaries }), None)?;
        }
        Command::SweepGamma(args) => {
            let cfg = load(&args)?;
            let res = sweep_gamma(&cfg, args.full_scale, args.jobs)?;
            let path = save(&res.records, &cfg, &args)?;
            write_json(&json!({ "config": args.config, "seed": cfg.seed, "output": path, "points": res.summaries }), None)?;
        }
        Command::Robustness(args) => {
            let cfg = load(&args)?;
            let (_, rows) = robustness_command(&cfg, args.full_scale, args.jobs)?;
            let path = save(&rows, &cfg, &args)?;
            write_json(&json!({ "config": args.config, "seed": cfg.seed, "output": path, "curve": rows }), None)?;
        }
        Command::ExactVerify(args) => {
            let opts = VerifyOptions { seed: args.seed, mc_steps: args.mc_steps, ..VerifyOptions::default() };
            let report = exact_verify_command(&opts)?;
            write_json(&serde_json::to_value(&report)?, args.out.as_ref())?;
            return Ok(report.passed);
        }
        Command::ValidateSchedule(args) => {
            let stages = schedule_stages(&args)?;
            let report = validate_schedule(&stages, args.m, args.kappa)?;
            let trace_tail = &report.trace[report.trace.len().saturating_sub(5)..];
            write_json(
                &json!({
                    "verdict": report.verdict,
                    "final_value": report.final_value,
                    "tail_slope": report.tail_slope,
                    "exposure_diverges": report.exposure_diverges,
                    "stages": stages.len(),
                    "trace_tail": trace_tail,
                    "note": report.note,
                }),
                args.out.as_ref(),
            )?;
            return Ok(report.verdict == Verdict::Pass);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

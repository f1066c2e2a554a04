//! Result records and their CSV / JSON-lines persistence.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::anneal::Kernel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl OutputFormat {
    /// `jsonl` for `.jsonl`/`.json` paths, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "json") => OutputFormat::Jsonl,
            _ => OutputFormat::Csv,
        }
    }
}

/// Rounds to 6 significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn round_all(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round_sig6).collect()
}

/// One annealing run: a training run, or one `(point, repetition)` of a sweep.
/// Loss and accuracy without a prefix refer to the replica with the lowest
/// final training loss; `mean_*` average over replicas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub run_id: String,
    pub config_hash: String,
    pub command: String,
    pub seed: u64,
    pub point: u32,
    pub repetition: u32,
    pub beta_initial: f64,
    pub beta_final: f64,
    pub gamma: f64,
    pub replicas: usize,
    pub kernel: Kernel,
    pub iterations: u64,
    pub active_transitions: u64,
    pub best_replica: usize,
    pub train_loss: f64,
    pub train_accuracy: Option<f64>,
    pub test_loss: Option<f64>,
    pub test_accuracy: Option<f64>,
    pub mean_train_loss: f64,
    pub mean_train_accuracy: Option<f64>,
    pub mean_test_loss: Option<f64>,
    pub mean_test_accuracy: Option<f64>,
    pub replica_train_loss: Vec<f64>,
    pub replica_train_accuracy: Vec<f64>,
    pub replica_test_loss: Vec<f64>,
    pub replica_test_accuracy: Vec<f64>,
    /// `(iteration, total energy)` samples.
    pub trajectory: Vec<(u64, f64)>,
    /// Unix seconds at completion; the only field that differs between reruns.
    pub timestamp: u64,
}

/// One point of a robustness curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub run_id: String,
    pub config_hash: String,
    pub gamma: f64,
    pub replica: usize,
    pub p: f64,
    pub flips: usize,
    pub mean_accuracy: f64,
    pub ci_half_width: f64,
    pub repetitions: u32,
}

/// A record type with a fixed CSV layout.
pub trait Record: Serialize + DeserializeOwned + Clone {
    type Row: Serialize + DeserializeOwned;
    const HEADER: &'static [&'static str];
    fn to_row(&self) -> Self::Row;
    fn from_row(row: Self::Row) -> Result<Self>;
    /// The record as persisted: floats at 6 significant digits.
    fn rounded(&self) -> Self;
}

impl Record for CurvePoint {
    type Row = CurvePoint;
    const HEADER: &'static [&'static str] =
        &["run_id", "config_hash", "gamma", "replica", "p", "flips", "mean_accuracy", "ci_half_width", "repetitions"];

    fn to_row(&self) -> Self::Row {
        self.clone()
    }

    fn from_row(row: Self::Row) -> Result<Self> {
        Ok(row)
    }

    fn rounded(&self) -> Self {
        CurvePoint {
            gamma: round_sig6(self.gamma),
            p: round_sig6(self.p),
            mean_accuracy: round_sig6(self.mean_accuracy),
            ci_half_width: round_sig6(self.ci_half_width),
            ..self.clone()
        }
    }
}

/// Flat CSV form of [`ResultRecord`]; lists are `;`-separated and trajectory
/// samples are `iteration:energy`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ResultRow {
    run_id: String,
    config_hash: String,
    command: String,
    seed: u64,
    point: u32,
    repetition: u32,
    beta_initial: f64,
    beta_final: f64,
    gamma: f64,
    replicas: usize,
    kernel: Kernel,
    iterations: u64,
    active_transitions: u64,
    best_replica: usize,
    train_loss: f64,
    train_accuracy: Option<f64>,
    test_loss: Option<f64>,
    test_accuracy: Option<f64>,
    mean_train_loss: f64,
    mean_train_accuracy: Option<f64>,
    mean_test_loss: Option<f64>,
    mean_test_accuracy: Option<f64>,
    replica_train_loss: String,
    replica_train_accuracy: String,
    replica_test_loss: String,
    replica_test_accuracy: String,
    trajectory: String,
    timestamp: u64,
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn split(s: &str) -> Result<Vec<f64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(|t| t.parse().map_err(|_| Error::Config(format!("bad number {t:?} in list")))).collect()
}

fn parse_sample(t: &str) -> Result<(u64, f64)> {
    let bad = || Error::Config(format!("bad trajectory sample {t:?}"));
    let (it, e) = t.split_once(':').ok_or_else(bad)?;
    Ok((it.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?))
}

impl Record for ResultRecord {
    type Row = ResultRow;
    const HEADER: &'static [&'static str] = &[
        "run_id",
        "config_hash",
        "command",
        "seed",
        "point",
        "repetition",
        "beta_initial",
        "beta_final",
        "gamma",
        "replicas",
        "kernel",
        "iterations",
        "active_transitions",
        "best_replica",
        "train_loss",
        "train_accuracy",
        "test_loss",
        "test_accuracy",
        "mean_train_loss",
        "mean_train_accuracy",
        "mean_test_loss",
        "mean_test_accuracy",
        "replica_train_loss",
        "replica_train_accuracy",
        "replica_test_loss",
        "replica_test_accuracy",
        "trajectory",
        "timestamp",
    ];

    fn to_row(&self) -> ResultRow {
        let r = self.clone();
        ResultRow {
            run_id: r.run_id,
            config_hash: r.config_hash,
            command: r.command,
            seed: r.seed,
            point: r.point,
            repetition: r.repetition,
            beta_initial: r.beta_initial,
            beta_final: r.beta_final,
            gamma: r.gamma,
            replicas: r.replicas,
            kernel: r.kernel,
            iterations: r.iterations,
            active_transitions: r.active_transitions,
            best_replica: r.best_replica,
            train_loss: r.train_loss,
            train_accuracy: r.train_accuracy,
            test_loss: r.test_loss,
            test_accuracy: r.test_accuracy,
            mean_train_loss: r.mean_train_loss,
            mean_train_accuracy: r.mean_train_accuracy,
            mean_test_loss: r.mean_test_loss,
            mean_test_accuracy: r.mean_test_accuracy,
            replica_train_loss: join(&r.replica_train_loss),
            replica_train_accuracy: join(&r.replica_train_accuracy),
            replica_test_loss: join(&r.replica_test_loss),
            replica_test_accuracy: join(&r.replica_test_accuracy),
            trajectory: r.trajectory.iter().map(|(it, e)| format!("{it}:{e}")).collect::<Vec<_>>().join(";"),
            timestamp: r.timestamp,
        }
    }

    fn from_row(r: ResultRow) -> Result<Self> {
        let trajectory = if r.trajectory.is_empty() {
            Vec::new()
        } else {
            r.trajectory.split(';').map(parse_sample).collect::<Result<_>>()?
        };
        Ok(ResultRecord {
            replica_train_loss: split(&r.replica_train_loss)?,
            replica_train_accuracy: split(&r.replica_train_accuracy)?,
            replica_test_loss: split(&r.replica_test_loss)?,
            replica_test_accuracy: split(&r.replica_test_accuracy)?,
            trajectory,
            run_id: r.run_id,
            config_hash: r.config_hash,
            command: r.command,
            seed: r.seed,
            point: r.point,
            repetition: r.repetition,
            beta_initial: r.beta_initial,
            beta_final: r.beta_final,
            gamma: r.gamma,
            replicas: r.replicas,
            kernel: r.kernel,
            iterations: r.iterations,
            active_transitions: r.active_transitions,
            best_replica: r.best_replica,
            train_loss: r.train_loss,
            train_accuracy: r.train_accuracy,
            test_loss: r.test_loss,
            test_accuracy: r.test_accuracy,
            mean_train_loss: r.mean_train_loss,
            mean_train_accuracy: r.mean_train_accuracy,
            mean_test_loss: r.mean_test_loss,
            mean_test_accuracy: r.mean_test_accuracy,
            timestamp: r.timestamp,
        })
    }

    fn rounded(&self) -> Self {
        let r = |x: Option<f64>| x.map(round_sig6);
        ResultRecord {
            beta_initial: round_sig6(self.beta_initial),
            beta_final: round_sig6(self.beta_final),
            gamma: round_sig6(self.gamma),
            train_loss: round_sig6(self.train_loss),
            train_accuracy: r(self.train_accuracy),
            test_loss: r(self.test_loss),
            test_accuracy: r(self.test_accuracy),
            mean_train_loss: round_sig6(self.mean_train_loss),
            mean_train_accuracy: r(self.mean_train_accuracy),
            mean_test_loss: r(self.mean_test_loss),
            mean_test_accuracy: r(self.mean_test_accuracy),
            replica_train_loss: round_all(&self.replica_train_loss),
            replica_train_accuracy: round_all(&self.replica_train_accuracy),
            replica_test_loss: round_all(&self.replica_test_loss),
            replica_test_accuracy: round_all(&self.replica_test_accuracy),
            trajectory: self.trajectory.iter().map(|&(it, e)| (it, round_sig6(e))).collect(),
            ..self.clone()
        }
    }
}

/// Appends `records` to `path`. A CSV header is written only when the file
/// is new or empty, so an empty batch on a fresh path yields a header-only file.
pub fn write_results<R: Record>(records: &[R], path: impl AsRef<Path>, format: OutputFormat) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
            if fresh {
                w.write_record(R::HEADER)?;
            }
            for r in records {
                w.serialize(r.rounded().to_row())?;
            }
            w.flush()?;
        }
        OutputFormat::Jsonl => {
            let mut w = std::io::BufWriter::new(file);
            for r in records {
                serde_json::to_writer(&mut w, &r.rounded())?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn read_results<R: Record>(path: impl AsRef<Path>, format: OutputFormat) -> Result<Vec<R>> {
    let file = std::fs::File::open(path)?;
    match format {
        OutputFormat::Csv => csv::Reader::from_reader(file)
            .deserialize::<R::Row>()
            .map(|row| R::from_row(row?))
            .collect(),
        OutputFormat::Jsonl => BufReader::new(file)
            .lines()
            .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
            .map(|l| Ok(serde_json::from_str(&l?)?))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample_record(rep: u32) -> ResultRecord {
        ResultRecord {
            run_id: format!("abc-sweep-gamma-p0-r{rep}"),
            config_hash: "abc".into(),
            command: "sweep-gamma".into(),
            seed: 11,
            point: 0,
            repetition: rep,
            beta_initial: 100.0,
            beta_final: 100_000.0,
            gamma: 0.4,
            replicas: 2,
            kernel: Kernel::Combined,
            iterations: 50_000,
            active_transitions: 6_360,
            best_replica: 1,
            train_loss: 1.234_567_89,
            train_accuracy: Some(0.881_875_4),
            test_loss: None,
            test_accuracy: None,
            mean_train_loss: 1.3,
            mean_train_accuracy: Some(0.87),
            mean_test_loss: None,
            mean_test_accuracy: None,
            replica_train_loss: vec![1.4, 1.234_567_89],
            replica_train_accuracy: vec![0.86, 0.881_875_4],
            replica_test_loss: vec![],
            replica_test_accuracy: vec![],
            trajectory: vec![(0, 2.302_585_093), (100, 1.9)],
            timestamp: 1_700_000_000,
        }
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(round_sig6(1.234_567_89), 1.234_57);
        assert_eq!(round_sig6(0.000_123_456_78), 0.000_123_457);
        assert_eq!(round_sig6(271_733.4), 271_733.0);
        assert_eq!(round_sig6(0.0), 0.0);
    }

    #[test]
    fn empty_csv_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_results::<ResultRecord>(&[], &p, OutputFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("run_id,config_hash,command"));
    }

    #[test]
    fn round_trip_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let records = vec![sample_record(0), sample_record(1)];
        for format in [OutputFormat::Csv, OutputFormat::Jsonl] {
            let p = dir.path().join(format!("out.{format:?}"));
            write_results(&records, &p, format).unwrap();
            let back: Vec<ResultRecord> = read_results(&p, format).unwrap();
            let expected: Vec<ResultRecord> = records.iter().map(Record::rounded).collect();
            assert_eq!(back, expected);
            assert_eq!(back[0].train_loss, 1.234_57);
        }
    }

    #[test]
    fn appends_without_repeating_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_results(&[sample_record(0)], &p, OutputFormat::Csv).unwrap();
        write_results(&[sample_record(1)], &p, OutputFormat::Csv).unwrap();
        let back: Vec<ResultRecord> = read_results(&p, OutputFormat::Csv).unwrap();
        assert_eq!(back.iter().map(|r| r.repetition).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn curve_points_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("curve.csv");
        let pt = CurvePoint {
            run_id: "r".into(),
            config_hash: "h".into(),
            gamma: 1.6,
            replica: 3,
            p: 0.001,
            flips: 0,
            mean_accuracy: 0.998_166_666_7,
            ci_half_width: 0.0,
            repetitions: 1000,
        };
        write_results(std::slice::from_ref(&pt), &p, OutputFormat::Csv).unwrap();
        let back: Vec<CurvePoint> = read_results(&p, OutputFormat::Csv).unwrap();
        assert_eq!(back, vec![pt.rounded()]);
        assert_eq!(OutputFormat::from_path(Path::new("a/b.jsonl")), OutputFormat::Jsonl);
    }
}

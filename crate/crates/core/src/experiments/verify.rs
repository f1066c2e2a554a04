use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::anneal::{azencott_lengths, Kernel};
use crate::energy::TableEnergy;
use crate::error::Result;
use crate::exact::{
    build_kernel_matrix, build_kernel_matrix_with, compute_constants, dense_region_mass, detailed_balance_violation,
    empirical_law, enumerate_qbar, fixtures, limit_distribution_check, stationary_and_gap, total_variation,
    validate_schedule, ExactTables, Verdict,
};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Chain length for the Monte-Carlo comparison; the second half is kept.
    pub mc_steps: u64,
    /// Random tables per `(N, y)` in the enumeration suite.
    pub random_tables: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 0, mc_steps: 1_000_000, random_tables: 20 }
    }
}

fn check(suite: &'static str, name: impl Into<String>, value: f64, threshold: f64, passed: bool) -> Check {
    Check { suite, name: name.into(), passed, value, threshold }
}

fn at_most(suite: &'static str, name: impl Into<String>, value: f64, threshold: f64) -> Check {
    check(suite, name, value, threshold, value <= threshold)
}

const GRID: [f64; 3] = [0.0, 0.5, 2.0];

pub fn enumeration_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for n in 1..=4 {
        for y in 1..=3 {
            for t in 0..opts.random_tables {
                let table = fixtures::random_integer_table(n, 4, opts.seed ^ (n * 100 + y * 10) as u64 ^ (t as u64) << 20);
                for beta in GRID {
                    for gamma in GRID {
                        let q = enumerate_qbar(&table, y, beta, gamma)?;
                        worst = worst.max(q.max_relative_gap());
                        worst_z = worst_z.max((q.log_z - q.log_z_folded).abs());
                    }
                }
            }
        }
    }
    Ok(vec![
        at_most("enumeration", "direct vs folded Qbar, max relative gap", worst, 1e-10),
        at_most("enumeration", "direct vs folded ln Z, max gap", worst_z, 1e-10),
    ])
}

/// Every `(N, y)` with `Ny ≤ 8`, on the crafted landscapes and a random table.
fn balance_fixtures(seed: u64) -> Vec<(String, TableEnergy, usize)> {
    let mut out = Vec::new();
    for n in 1..=8usize {
        for y in 1..=8 / n {
            out.push((format!("random N={n} y={y}"), fixtures::random_integer_table(n, 3, seed + (n * 10 + y) as u64), y));
        }
    }
    out.push(("double well y=2".into(), fixtures::double_well(), 2));
    out.push(("cluster y=2".into(), fixtures::cluster_and_isolated(), 2));
    out.push(("three spin y=2".into(), fixtures::three_spin(), 2));
    out
}

pub fn balance_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut worst_balance: f64 = 0.0;
    let mut worst_stationary: f64 = 0.0;
    let mut worst_rows: f64 = 0.0;
    for (_, table, y) in balance_fixtures(opts.seed) {
        for (beta, gamma) in [(0.5, 0.5), (1.0, 2.0), (2.0, 0.0)] {
            let qbar = ExactTables::new(&table, y, beta, gamma)?.qbar;
            for kernel in [Kernel::TwoStage, Kernel::Combined] {
                let k = build_kernel_matrix(&table, y, beta, gamma, kernel)?;
                worst_rows = worst_rows.max(k.max_row_sum_error());
                worst_balance = worst_balance.max(detailed_balance_violation(&k, &qbar));
                let s = stationary_and_gap(&k, &qbar)?;
                let linf = s.stationary.iter().zip(&qbar).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                worst_stationary = worst_stationary.max(linf);
            }
        }
    }
    Ok(vec![
        at_most("balance", "row sums, max |Σ_z K(x,z) - 1|", worst_rows, 1e-12),
        at_most("balance", "detailed balance, max violation", worst_balance, 1e-12),
        at_most("balance", "stationary vector vs Qbar, L∞", worst_stationary, 1e-10),
    ])
}

/// A kernel with the sign of `ΔE` flipped must be caught by the balance check.
pub fn mutation_suite() -> Result<Vec<Check>> {
    let table = fixtures::three_spin();
    let (beta, gamma) = (1.0, 1.0);
    let qbar = ExactTables::new(&table, 2, beta, gamma)?.qbar;
    let broken = |de: f64, dh: f64, b: f64| f64::min(1.0, (b * de + dh).exp());
    let k = build_kernel_matrix_with(&table, 2, beta, gamma, &broken)?;
    let v = detailed_balance_violation(&k, &qbar);
    Ok(vec![check("mutation", "sign-flipped acceptance is detected", v, 1e-12, v > 1e-12)])
}

pub fn monte_carlo_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let table = fixtures::three_spin();
    let exact = ExactTables::new(&table, 2, 1.0, 1.0)?.qbar;
    let mut out = Vec::new();
    for kernel in [Kernel::Combined, Kernel::TwoStage] {
        let emp = empirical_law(&table, 2, 1.0, 1.0, kernel, opts.mc_steps, opts.mc_steps / 2, opts.seed)?;
        out.push(at_most("monte-carlo", format!("{kernel:?} chain vs Qbar, TV distance"), total_variation(&emp, &exact), 0.05));
    }
    Ok(out)
}

/// Slope of `-ln ψ` over `β ∈ [5, 15]` and the `ψ e^{βm}` bracket.
pub const GAP_BRACKET_LIMIT: f64 = 10.0;

pub fn gap_suite() -> Result<Vec<Check>> {
    let betas: Vec<f64> = (0..=20).map(|k| 5.0 + 0.5 * k as f64).collect();
    let mut out = Vec::new();
    for (y, gamma) in [(1usize, 0.0), (2, 0.5)] {
        let c = compute_constants(&fixtures::double_well(), y, gamma, &betas, Kernel::Combined)?;
        out.push(at_most(
            "gap",
            format!("double well y={y} γ={gamma}: |slope - m| / m (m = {})", c.m),
            (c.gap_slope - c.m).abs() / c.m,
            0.05,
        ));
        out.push(at_most("gap", format!("double well y={y} γ={gamma}: C/c bracket ratio"), c.bracket_ratio(), GAP_BRACKET_LIMIT));
    }
    Ok(out)
}

pub fn limit_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, table, y) in [
        ("cluster y=2", fixtures::cluster_and_isolated(), 2usize),
        ("double well y=2", fixtures::double_well(), 2),
        ("three spin y=3", fixtures::three_spin(), 3),
    ] {
        let r = limit_distribution_check(&table, y, 1.0, 50.0, 50.0)?;
        out.push(at_most("limits", format!("{name}: mass outside N0"), r.mass_outside_n0, 1e-6));
        out.push(at_most("limits", format!("{name}: Qbar(·|N0) vs μ0(·|N0), L∞"), r.conditional_linf, 1e-6));
        out.push(at_most("limits", format!("{name}: γ=50 law vs uniform on aligned minima, L∞"), r.aligned_uniform_linf, 1e-6));
    }
    Ok(out)
}

/// True properties of the cluster fixture: the uniform value at `γ = 0`, a
/// strict gain from any positive coupling, and the aligned limit `5/6`.
pub fn dense_suite() -> Result<Vec<Check>> {
    let table = fixtures::cluster_and_isolated();
    let center = fixtures::cluster_center();
    let mass = |g: f64| dense_region_mass(&table, 2, g, &center, 1, 50.0);
    let m0 = mass(0.0)?;
    let mut min_gain = f64::INFINITY;
    for k in 1..=12 {
        min_gain = min_gain.min(mass(0.25 * k as f64)? - m0);
    }
    Ok(vec![
        at_most("dense", "γ=0 mass vs (5/6)²", (m0 - 25.0 / 36.0).abs(), 1e-12),
        check("dense", "min over γ ∈ {0.25..3} of mass(γ) - mass(0)", min_gain, 0.0, min_gain > 0.0),
        at_most("dense", "γ=50 mass vs 5/6", (mass(50.0)? - 5.0 / 6.0).abs(), 1e-6),
    ])
}

pub fn schedule_suite() -> Result<Vec<Check>> {
    let horizon = 10_000;
    let betas: Vec<f64> = (1..=horizon).map(|k| ((k + 1) as f64).ln()).collect();
    let lengths = azencott_lengths(&betas, 1.0, std::f64::consts::E, 1.0, 1.0)?;
    let stages: Vec<(f64, f64)> = betas.iter().zip(&lengths).map(|(&b, &t)| (b, t as f64)).collect();
    let good = validate_schedule(&stages, 1.0, std::f64::consts::E)?;
    let fast: Vec<(f64, f64)> = (1..=horizon).map(|k| ((k as f64).ln(), 1.0)).collect();
    let bad = validate_schedule(&fast, 1.0, std::f64::consts::E)?;
    Ok(vec![
        check("schedule", "Azencott lengths PASS", good.final_value, -10.0, good.verdict == Verdict::Pass),
        check("schedule", "T_k = 1, β_k = ln k FAILS", bad.final_value, -10.0, bad.verdict == Verdict::Fail),
    ])
}

/// Runs every suite on the bundled landscapes.
pub fn exact_verify_command(opts: &VerifyOptions) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut checks = Vec::new();
    checks.extend(enumeration_suite(opts)?);
    checks.extend(balance_suite(opts)?);
    checks.extend(mutation_suite()?);
    checks.extend(monte_carlo_suite(opts)?);
    checks.extend(gap_suite()?);
    checks.extend(limit_suite()?);
    checks.extend(dense_suite()?);
    checks.extend(schedule_suite()?);
    Ok(VerifyReport { passed: checks.iter().all(|c| c.passed), checks, seconds: start.elapsed().as_secs_f64() })
}

//! Finite-horizon checks of the cooling-schedule convergence conditions.

use serde::Serialize;

use super::constants::linear_fit;
use crate::error::{Error, Result};

/// Verdicts need the final criterion value below `-DIVERGENCE_THRESHOLD`.
pub const DIVERGENCE_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleReport {
    pub verdict: Verdict,
    /// `-Σ_{k≤n} T_k e^{-β_k m} + n ln κ`, one entry per stage.
    pub trace: Vec<f64>,
    pub final_value: f64,
    /// Least-squares slope of the last quarter of the trace.
    pub tail_slope: f64,
    /// Whether `Σ T_k e^{-β_k m}` looks divergent: the last dyadic block of
    /// stages contributes at least 0.9 times the block before it.
    pub exposure_diverges: bool,
    pub note: &'static str,
}

const NOTE: &str = "finite-horizon proxy: PASS means final value < -10 and negative slope over the last quarter; \
the underlying condition is asymptotic";

/// Evaluates `-Σ_k T_k e^{-β_k m} + n ln κ` along `(β_k, T_k)`.
pub fn validate_schedule(stages: &[(f64, f64)], m: f64, kappa: f64) -> Result<ScheduleReport> {
    if stages.is_empty() {
        return Err(Error::EmptySchedule);
    }
    if !(m >= 0.0 && kappa >= 1.0) {
        return Err(Error::InvalidArgument(format!("need m >= 0 and kappa >= 1, got {m}, {kappa}")));
    }
    let log_kappa = kappa.ln();
    let exposure: Vec<f64> = stages.iter().map(|&(beta, t)| t * (-beta * m).exp()).collect();
    let mut trace = Vec::with_capacity(stages.len());
    let mut acc = 0.0;
    for (k, e) in exposure.iter().enumerate() {
        acc += e;
        trace.push(-acc + (k + 1) as f64 * log_kappa);
    }
    let n = trace.len();
    let tail_start = n - (n / 4).max(2).min(n);
    let xs: Vec<f64> = (tail_start..n).map(|k| (k + 1) as f64).collect();
    let tail_slope = if xs.len() >= 2 { linear_fit(&xs, &trace[tail_start..]).0 } else { f64::NAN };
    let final_value = trace[n - 1];
    let verdict = if final_value < -DIVERGENCE_THRESHOLD && tail_slope < 0.0 { Verdict::Pass } else { Verdict::Fail };
    Ok(ScheduleReport {
        verdict,
        final_value,
        tail_slope,
        exposure_diverges: dyadic_ratio(&exposure) >= 0.9,
        trace,
        note: NOTE,
    })
}

fn dyadic_ratio(terms: &[f64]) -> f64 {
    let n = terms.len();
    if n < 4 {
        return f64::NAN;
    }
    let last: f64 = terms[n / 2..].iter().sum();
    let prev: f64 = terms[n / 4..n / 2].iter().sum();
    last / prev
}

/// Constants entering the error-propagation bound for joint `(β, γ)` schedules.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundConstants {
    pub m: f64,
    pub b: f64,
    pub b_prime: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub c: f64,
    pub eps0: f64,
}

/// Iterates `ε_n ≤ κ₂ e^{-(β_n B + γ_n B')} + κ₃ (1 - C e^{-β_n m})^{T_n} ε_{n-1}`
/// along `(β_n, γ_n, T_n)`. Heuristic: the constants are fitted, not proven.
pub fn heuristic_error_bound(stages: &[(f64, f64, f64)], k: &BoundConstants) -> Result<Vec<f64>> {
    if stages.is_empty() {
        return Err(Error::EmptySchedule);
    }
    let mut eps = k.eps0;
    Ok(stages
        .iter()
        .map(|&(beta, gamma, t)| {
            let contraction = (1.0 - k.c * (-beta * k.m).exp()).clamp(0.0, 1.0);
            eps = k.kappa2 * (-(beta * k.b + gamma * k.b_prime)).exp() + k.kappa3 * contraction.powf(t) * eps;
            eps
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn azencott_choice_passes() {
        let stages: Vec<(f64, f64)> =
            (1..=10_000).map(|k| ((k as f64 + 1.0).ln(), 2.0 * (k as f64 + 1.0))).collect();
        let r = validate_schedule(&stages, 1.0, std::f64::consts::E).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.final_value + 10_000.0).abs() < 1e-6);
        assert!((r.trace[9] + 10.0).abs() < 1e-9);
        assert!(r.exposure_diverges);
    }

    #[test]
    fn too_fast_cooling_fails() {
        let stages: Vec<(f64, f64)> = (1..=10_000).map(|k| ((k as f64).ln(), 1.0)).collect();
        let r = validate_schedule(&stages, 1.0, std::f64::consts::E).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let harmonic: f64 = (1..=10_000).map(|k| 1.0 / k as f64).sum();
        assert!((r.final_value - (10_000.0 - harmonic)).abs() < 1e-6);
        assert!(r.exposure_diverges);
    }

    #[test]
    fn flat_landscape_passes() {
        let stages = vec![(3.0, 1.0); 50];
        let r = validate_schedule(&stages, 0.0, 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.final_value, -50.0);
    }

    #[test]
    fn summable_exposure_detected() {
        let stages: Vec<(f64, f64)> = (1..=1000).map(|k| (2.0 * (k as f64).ln(), 1.0)).collect();
        let r = validate_schedule(&stages, 1.0, 1.0).unwrap();
        assert!(!r.exposure_diverges);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn errors() {
        assert!(matches!(validate_schedule(&[], 1.0, 1.0), Err(Error::EmptySchedule)));
        assert!(validate_schedule(&[(1.0, 1.0)], -1.0, 1.0).is_err());
    }

    #[test]
    fn bound_decays_under_slow_cooling() {
        let k = BoundConstants { m: 1.0, b: 1.0, b_prime: 1.0, kappa2: 1.0, kappa3: 1.0, c: 0.5, eps0: 1.0 };
        let stages: Vec<(f64, f64, f64)> =
            (1..=200).map(|n| ((n as f64 + 1.0).ln(), 0.1 * n as f64, 10.0 * (n as f64 + 1.0))).collect();
        let eps = heuristic_error_bound(&stages, &k).unwrap();
        assert!(eps.last().unwrap() < &0.05);
    }
}

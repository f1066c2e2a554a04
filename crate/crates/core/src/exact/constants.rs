//! Landscape constants and fitted bound constants for one instance.

use serde::Serialize;

use super::elevation::elevation_of;
use super::matrix::{gap_curve, MAX_MATRIX_BITS};
use super::tables::{normalize_log, EnsembleSpace};
use crate::anneal::{log_cosh_stable, Kernel};
use crate::energy::TableEnergy;
use crate::error::{Error, Result};

/// Smallest energy jump above the ground level, `min{E(σ) - E_min : E(σ) ≠ E_min}`.
pub fn smallest_gap(values: &[f64]) -> Result<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    values
        .iter()
        .map(|&e| e - min)
        .filter(|&d| d > 1e-12 * min.abs().max(1.0))
        .min_by(f64::total_cmp)
        .ok_or(Error::FlatLandscape)
}

/// Smallest interaction jump `log cosh(γy) - log cosh(γ(y-2))`.
pub fn interaction_gap(gamma: f64, y: usize) -> f64 {
    log_cosh_stable(gamma * y as f64) - log_cosh_stable(gamma * (y as f64 - 2.0))
}

/// Ordinary least-squares slope and intercept.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceConstants {
    pub n: usize,
    pub y: usize,
    pub gamma: f64,
    /// Ground level `min E` of a single configuration.
    pub e_min: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "Bprime")]
    pub b_prime: f64,
    pub m: f64,
    /// `max_n ||Qbar_{β_n} - Qbar_{β_{n+1}}||_∞ e^{β_n B}` over the grid, at least 1.
    pub kappa1: f64,
    pub betas: Vec<f64>,
    pub psi_values: Vec<f64>,
    /// Slope of `-ln ψ(β)` against `β`.
    pub gap_slope: f64,
    /// `min` and `max` of `ψ(β) e^{βm}` over the grid.
    pub c_lower: f64,
    pub c_upper: f64,
    /// Ensembles at total energy `y · E_min`.
    #[serde(rename = "N0")]
    pub n0: Vec<usize>,
    /// The aligned ones among them.
    #[serde(rename = "tildeN0")]
    pub tilde_n0: Vec<usize>,
}

impl ConvergenceConstants {
    pub fn bracket_ratio(&self) -> f64 {
        self.c_upper / self.c_lower
    }
}

/// Computes every constant for `(table, y, γ)`, with `ψ` and `κ₁` evaluated on
/// `betas` (sorted increasing, at least two points).
pub fn compute_constants(
    table: &TableEnergy,
    y: usize,
    gamma: f64,
    betas: &[f64],
    kernel: Kernel,
) -> Result<ConvergenceConstants> {
    if betas.len() < 2 || betas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("need an increasing grid of at least two betas".into()));
    }
    let b = smallest_gap(table.values())?;
    let space = EnsembleSpace::new(table, y)?;
    let bits = space.n * y;
    if bits > MAX_MATRIX_BITS {
        return Err(Error::SizeLimit { what: "N*y (constants)", value: bits, limit: MAX_MATRIX_BITS });
    }
    let e_min = table.values().iter().copied().fold(f64::INFINITY, f64::min);
    // elevation is invariant under shifting E, so measure it from the ground level
    let shifted: Vec<f64> = space.total_energy.iter().map(|e| e - y as f64 * e_min).collect();
    let m = elevation_of(&shifted, bits);

    let laws: Vec<Vec<f64>> = betas.iter().map(|&beta| normalize_log(&space.log_weights(beta, gamma)).0).collect();
    let kappa1 = laws
        .windows(2)
        .zip(betas)
        .map(|(pair, &beta)| {
            let sup = pair[0].iter().zip(&pair[1]).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            sup * (beta * b).exp()
        })
        .fold(1.0, f64::max);

    let psi_values = gap_curve(table, y, gamma, betas, kernel)?;
    let log_psi: Vec<f64> = psi_values.iter().map(|p| -p.ln()).collect();
    let (gap_slope, _) = linear_fit(betas, &log_psi);
    let scaled: Vec<f64> = psi_values.iter().zip(betas).map(|(p, beta)| p * (beta * m).exp()).collect();
    let c_lower = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let c_upper = scaled.iter().copied().fold(0.0, f64::max);

    Ok(ConvergenceConstants {
        n: space.n,
        y,
        gamma,
        e_min,
        b,
        b_prime: interaction_gap(gamma, y),
        m,
        kappa1,
        betas: betas.to_vec(),
        psi_values,
        gap_slope,
        c_lower,
        c_upper,
        n0: space.ground_states(),
        tilde_n0: space.aligned_ground_states(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::fixtures;

    #[test]
    fn smallest_gap_examples() {
        assert_eq!(smallest_gap(&[0.0, 0.7, 1.3, 0.0]).unwrap(), 0.7);
        assert!(matches!(smallest_gap(&[0.0; 4]), Err(Error::FlatLandscape)));
    }

    #[test]
    fn interaction_gap_examples() {
        assert!((interaction_gap(3.0, 2) - 5.306_858_962_724_06).abs() < 1e-9);
        assert!((interaction_gap(3.0, 3) - 5.997_524_330_2).abs() < 1e-9);
        for y in 2..6 {
            let mut prev = 0.0;
            for g in [0.1, 0.5, 1.0, 2.0, 5.0] {
                let bp = interaction_gap(g, y);
                assert!(bp > prev && bp <= 2.0 * g + 1e-12);
                prev = bp;
            }
        }
        // y = 2 keeps a ln 2 deficit from cosh(0) = 1
        assert!((interaction_gap(20.0, 2) - (40.0 - std::f64::consts::LN_2)).abs() < 1e-9);
        for y in 3..6 {
            assert!((interaction_gap(20.0, y) - 40.0).abs() < 1e-9);
        }
    }

    #[test]
    fn flat_landscape_reported() {
        let flat = TableEnergy::flat(2).unwrap();
        let r = compute_constants(&flat, 1, 0.0, &[1.0, 2.0], Kernel::Combined);
        assert!(matches!(r, Err(Error::FlatLandscape)));
    }

    #[test]
    fn double_well_constants() {
        let betas: Vec<f64> = (5..=15).map(f64::from).collect();
        let c = compute_constants(&fixtures::double_well(), 1, 0.0, &betas, Kernel::Combined).unwrap();
        assert_eq!(c.b, 0.5);
        assert_eq!(c.m, 1.5);
        assert_eq!(c.n0, vec![7]);
        assert_eq!(c.tilde_n0, vec![7]);
        assert!((c.gap_slope - c.m).abs() / c.m < 0.05);
        assert!(c.kappa1 >= 1.0);
    }
}

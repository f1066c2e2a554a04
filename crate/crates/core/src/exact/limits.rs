//! Low-temperature limits of the replicated measure and dense-cluster mass.

use serde::Serialize;

use super::constants::smallest_gap;
use super::tables::{EnsembleSpace, ExactTables};
use crate::energy::TableEnergy;
use crate::error::{Error, Result};
use crate::spin::SpinVector;

pub const DEFAULT_BETA_LARGE: f64 = 50.0;
pub const DEFAULT_GAMMA_LARGE: f64 = 50.0;

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub beta_large: f64,
    pub gamma: f64,
    pub gamma_large: f64,
    pub n0_size: usize,
    pub tilde_n0_size: usize,
    /// `Qbar(N_0^c)` at `(β_large, γ)`.
    pub mass_outside_n0: f64,
    /// `e^{-β_large B} 2^{Ny}`, or 0 on a flat landscape.
    pub outside_bound: f64,
    /// `L∞` distance between `Qbar(· | N_0)` and `μ_0(· | N_0)`.
    pub conditional_linf: f64,
    /// `L∞` distance between `Qbar` at `(β_large, γ_large)` and the uniform law on `~N_0`.
    pub aligned_uniform_linf: f64,
}

impl LimitReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.mass_outside_n0 <= self.outside_bound.max(tol) && self.conditional_linf <= tol && self.aligned_uniform_linf <= tol
    }
}

pub fn limit_distribution_check(
    table: &TableEnergy,
    y: usize,
    gamma: f64,
    beta_large: f64,
    gamma_large: f64,
) -> Result<LimitReport> {
    let space = EnsembleSpace::new(table, y)?;
    let n0 = space.ground_states();
    let tilde = space.aligned_ground_states();
    let mut in_n0 = vec![false; space.states()];
    for &x in &n0 {
        in_n0[x] = true;
    }

    let t = ExactTables::from_space(&space, beta_large, gamma);
    let inside: f64 = n0.iter().map(|&x| t.qbar[x]).sum();
    let mass_outside_n0: f64 = (0..space.states()).filter(|&x| !in_n0[x]).map(|x| t.qbar[x]).sum();
    let mu_inside: f64 = n0.iter().map(|&x| t.mu0[x]).sum();
    let conditional_linf = n0
        .iter()
        .map(|&x| (t.qbar[x] / inside - t.mu0[x] / mu_inside).abs())
        .fold(0.0, f64::max);
    let outside_bound = match smallest_gap(table.values()) {
        Ok(b) => (-beta_large * b).exp() * space.states() as f64,
        Err(Error::FlatLandscape) => 0.0,
        Err(e) => return Err(e),
    };

    let hot = ExactTables::from_space(&space, beta_large, gamma_large);
    let uniform = 1.0 / tilde.len() as f64;
    let mut is_tilde = vec![false; space.states()];
    for &x in &tilde {
        is_tilde[x] = true;
    }
    let aligned_uniform_linf = (0..space.states())
        .map(|x| (hot.qbar[x] - if is_tilde[x] { uniform } else { 0.0 }).abs())
        .fold(0.0, f64::max);

    Ok(LimitReport {
        beta_large,
        gamma,
        gamma_large,
        n0_size: n0.len(),
        tilde_n0_size: tilde.len(),
        mass_outside_n0,
        outside_bound,
        conditional_linf,
        aligned_uniform_linf,
    })
}

fn is_global_minimum(table: &TableEnergy, code: usize) -> bool {
    let min = table.values().iter().copied().fold(f64::INFINITY, f64::min);
    table.at(code) - min <= 1e-12 * min.abs().max(1.0)
}

/// `Qbar_{β_large, γ}` mass of the event that every replica lies in `B_R(σ)`.
pub fn dense_region_mass(
    table: &TableEnergy,
    y: usize,
    gamma: f64,
    center: &SpinVector,
    radius: usize,
    beta_large: f64,
) -> Result<f64> {
    let space = EnsembleSpace::new(table, y)?;
    let n = space.n;
    if center.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: center.len() });
    }
    let c = center.to_index();
    if !is_global_minimum(table, c) {
        return Err(Error::InvalidArgument("ball center must be a global minimizer".into()));
    }
    let mask = (1usize << n) - 1;
    let inside = |x: usize| (0..y).all(|a| ((x >> (a * n) & mask) ^ c).count_ones() as usize <= radius);
    let t = ExactTables::from_space(&space, beta_large, gamma);
    Ok((0..space.states()).filter(|&x| inside(x)).map(|x| t.qbar[x]).sum())
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimumEntry {
    pub index: usize,
    pub spins: Vec<i8>,
    /// `(R, k)`: number of global minima in the Hamming ball of radius `R`, centre included.
    pub ball_counts: Vec<(usize, usize)>,
    /// Largest `R` with `k = 1`; `N` when the minimum is unique.
    pub isolation_radius: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimaReport {
    pub n: usize,
    pub min_energy: f64,
    pub minima: Vec<MinimumEntry>,
}

impl MinimaReport {
    pub fn entry(&self, index: usize) -> Option<&MinimumEntry> {
        self.minima.iter().find(|m| m.index == index)
    }

    /// Whether minimum `index` is `(R, k)`-dense.
    pub fn is_dense(&self, index: usize, r: usize, k: usize) -> bool {
        self.entry(index).is_some_and(|m| m.ball_counts.iter().any(|&(rr, kk)| rr == r && kk == k))
    }

    pub fn is_isolated(&self, index: usize, r: usize) -> bool {
        self.entry(index).is_some_and(|m| m.isolation_radius >= r)
    }
}

pub fn classify_minima(table: &TableEnergy, r_grid: &[usize]) -> MinimaReport {
    let n = table.values().len().trailing_zeros() as usize;
    let min_energy = table.values().iter().copied().fold(f64::INFINITY, f64::min);
    let minima: Vec<usize> = (0..table.values().len()).filter(|&x| is_global_minimum(table, x)).collect();
    let entries = minima
        .iter()
        .map(|&x| {
            let distances: Vec<usize> = minima.iter().map(|&z| (x ^ z).count_ones() as usize).collect();
            let ball_counts = r_grid.iter().map(|&r| (r, distances.iter().filter(|&&d| d <= r).count())).collect();
            let nearest = distances.iter().copied().filter(|&d| d > 0).min();
            MinimumEntry {
                index: x,
                spins: SpinVector::from_index(x, n).values().to_vec(),
                ball_counts,
                isolation_radius: nearest.map_or(n, |d| d - 1),
            }
        })
        .collect();
    MinimaReport { n, min_energy, minima: entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::fixtures;

    #[test]
    fn flat_conditional_is_mu0() {
        let r = limit_distribution_check(&TableEnergy::flat(2).unwrap(), 2, 0.7, 50.0, 50.0).unwrap();
        assert_eq!(r.n0_size, 16);
        assert_eq!(r.mass_outside_n0, 0.0);
        assert!(r.conditional_linf < 1e-15);
        assert!(r.aligned_uniform_linf < 1e-6);
    }

    #[test]
    fn gamma_zero_is_uniform_on_n0() {
        let table = fixtures::cluster_and_isolated();
        let space = EnsembleSpace::new(&table, 1).unwrap();
        let t = ExactTables::from_space(&space, 50.0, 0.0);
        for x in space.ground_states() {
            assert!((t.qbar[x] - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cluster_fixture_classification() {
        let report = classify_minima(&fixtures::cluster_and_isolated(), &[0, 1, 2, 3]);
        assert_eq!(report.minima.len(), 6);
        assert!(report.is_dense(0b1111, 1, 5));
        assert!(report.is_isolated(0, 2));
        assert!(!report.is_isolated(0, 3));
        assert_eq!(report.entry(0).unwrap().isolation_radius, 2);
    }

    #[test]
    fn unique_minimum_isolated_everywhere() {
        let t = TableEnergy::new(2, vec![1.0, 0.0, 2.0, 3.0]).unwrap();
        let report = classify_minima(&t, &[0, 1]);
        assert_eq!(report.minima[0].isolation_radius, 2);
        assert!(report.is_isolated(1, 1));
    }

    #[test]
    fn dense_mass_at_zero_coupling() {
        let table = fixtures::cluster_and_isolated();
        let mass = dense_region_mass(&table, 2, 0.0, &fixtures::cluster_center(), 1, 50.0).unwrap();
        assert!((mass - 25.0 / 36.0).abs() < 1e-12);
        let all = dense_region_mass(&table, 2, 1.3, &fixtures::cluster_center(), 4, 50.0).unwrap();
        assert!((all - 1.0).abs() < 1e-12);
        let not_min = SpinVector::new(vec![1, 1, -1, -1]).unwrap();
        assert!(dense_region_mass(&table, 2, 0.0, &not_min, 1, 50.0).is_err());
    }
}

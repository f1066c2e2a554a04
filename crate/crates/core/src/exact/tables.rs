//! Enumeration of the replicated measure on `Σ^y` for tiny `(N, y)`.

use serde::Serialize;

use crate::anneal::log_cosh_stable;
use crate::energy::TableEnergy;
use crate::error::{Error, Result};

pub const MAX_TABLE_BITS: usize = 16;
pub const MAX_DIRECT_N: usize = 10;

pub(crate) fn check_table_size(n: usize, y: usize) -> Result<()> {
    if y == 0 {
        return Err(Error::InvalidArgument("need at least one replica".into()));
    }
    if n * y > MAX_TABLE_BITS {
        return Err(Error::SizeLimit { what: "N*y", value: n * y, limit: MAX_TABLE_BITS });
    }
    Ok(())
}

/// Per-ensemble quantities shared by every exact computation. Ensemble `x`
/// packs replica `a`'s configuration code in bits `aN..(a+1)N`.
#[derive(Debug, Clone)]
pub struct EnsembleSpace {
    pub n: usize,
    pub y: usize,
    /// `Σ_a E(s^a)`.
    pub total_energy: Vec<f64>,
    /// Replica fields `Σ_a s^a_i`, row-major `states × N`.
    pub fields: Vec<i32>,
}

impl EnsembleSpace {
    pub fn new(table: &TableEnergy, y: usize) -> Result<Self> {
        let n = table.values().len().trailing_zeros() as usize;
        check_table_size(n, y)?;
        let states = 1usize << (n * y);
        let mask = (1usize << n) - 1;
        let mut total_energy = Vec::with_capacity(states);
        let mut fields = vec![0i32; states * n];
        for x in 0..states {
            let mut e = 0.0;
            for a in 0..y {
                let code = x >> (a * n) & mask;
                e += table.at(code);
                for i in 0..n {
                    fields[x * n + i] += if code >> i & 1 == 1 { 1 } else { -1 };
                }
            }
            total_energy.push(e);
        }
        Ok(Self { n, y, total_energy, fields })
    }

    pub fn states(&self) -> usize {
        self.total_energy.len()
    }

    pub fn field_row(&self, x: usize) -> &[i32] {
        &self.fields[x * self.n..(x + 1) * self.n]
    }

    /// `Σ_i log cosh(γ Σ_a s^a_i)` for every ensemble.
    pub fn interaction(&self, gamma: f64) -> Vec<f64> {
        (0..self.states())
            .map(|x| self.field_row(x).iter().map(|&f| log_cosh_stable(gamma * f as f64)).sum())
            .collect()
    }

    /// Unnormalised log-weights `-β Σ_a E + Σ_i log cosh(γ f_i)`.
    pub fn log_weights(&self, beta: f64, gamma: f64) -> Vec<f64> {
        self.interaction(gamma)
            .into_iter()
            .zip(&self.total_energy)
            .map(|(h, &e)| h - beta * e)
            .collect()
    }

    /// Smallest total energy over the space.
    pub fn min_total(&self) -> f64 {
        self.total_energy.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Ensembles whose total energy is minimal (`y · min E`).
    pub fn ground_states(&self) -> Vec<usize> {
        let min = self.min_total();
        let tol = 1e-12 * min.abs().max(1.0);
        (0..self.states()).filter(|&x| self.total_energy[x] - min <= tol).collect()
    }

    /// Ground states in which all replicas coincide.
    pub fn aligned_ground_states(&self) -> Vec<usize> {
        let mask = (1usize << self.n) - 1;
        self.ground_states()
            .into_iter()
            .filter(|&x| (1..self.y).all(|a| x >> (a * self.n) & mask == x & mask))
            .collect()
    }
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|&v| (v - max).exp()).sum::<f64>().ln()
}

pub(crate) fn normalize_log(log_w: &[f64]) -> (Vec<f64>, f64) {
    let lz = log_sum_exp(log_w);
    (log_w.iter().map(|&v| (v - lz).exp()).collect(), lz)
}

/// The replicated measure and its coupling-only part at one `(β, γ)`.
#[derive(Debug, Clone, Serialize)]
pub struct ExactTables {
    pub n: usize,
    pub y: usize,
    pub beta: f64,
    pub gamma: f64,
    /// `μ_0 ∝ exp(Σ_i log cosh(γ Σ_a s^a_i))`.
    pub mu0: Vec<f64>,
    /// `Qbar_{β,γ}`, from the folded log-cosh form.
    pub qbar: Vec<f64>,
    /// `ln Z` of the folded form (`Z = 2^N Z'` for the full partition sum).
    pub log_z_folded: f64,
}

impl ExactTables {
    pub fn new(table: &TableEnergy, y: usize, beta: f64, gamma: f64) -> Result<Self> {
        let space = EnsembleSpace::new(table, y)?;
        Ok(Self::from_space(&space, beta, gamma))
    }

    pub fn from_space(space: &EnsembleSpace, beta: f64, gamma: f64) -> Self {
        let (mu0, _) = normalize_log(&space.interaction(gamma));
        let (qbar, log_z_folded) = normalize_log(&space.log_weights(beta, gamma));
        Self { n: space.n, y: space.y, beta, gamma, mu0, qbar, log_z_folded }
    }

    /// `ln Z(y, β, γ) = N ln 2 + ln Z'`.
    pub fn log_partition(&self) -> f64 {
        self.n as f64 * std::f64::consts::LN_2 + self.log_z_folded
    }
}

/// Both routes to `Qbar` and the partition function of the joint measure.
#[derive(Debug, Clone, Serialize)]
pub struct QbarEnumeration {
    /// Marginal of the joint measure over `(σ, {s^a})`, summing `σ` explicitly.
    pub direct: Vec<f64>,
    /// `exp(-βΣE + Σ_i log cosh(γ f_i)) / Z'`.
    pub folded: Vec<f64>,
    /// `ln Z` from the explicit double sum.
    pub log_z: f64,
    /// `ln Z` implied by the folded route (`N ln 2 + ln Z'`).
    pub log_z_folded: f64,
}

impl QbarEnumeration {
    /// Largest entrywise relative difference between the two routes.
    pub fn max_relative_gap(&self) -> f64 {
        self.direct
            .iter()
            .zip(&self.folded)
            .map(|(&d, &f)| (d - f).abs() / d.abs().max(f.abs()).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

/// Enumerates `Qbar` by the explicit `Σ^{y+1}` sum and by the log-cosh fold.
pub fn enumerate_qbar(table: &TableEnergy, y: usize, beta: f64, gamma: f64) -> Result<QbarEnumeration> {
    let space = EnsembleSpace::new(table, y)?;
    let n = space.n;
    if n > MAX_DIRECT_N {
        return Err(Error::SizeLimit { what: "N (direct route)", value: n, limit: MAX_DIRECT_N });
    }
    let centers: Vec<Vec<i32>> = (0..1usize << n)
        .map(|c| (0..n).map(|i| if c >> i & 1 == 1 { 1 } else { -1 }).collect())
        .collect();
    let mut joint = Vec::with_capacity(centers.len());
    let direct_log: Vec<f64> = (0..space.states())
        .map(|x| {
            // Σ_a <σ, s^a> = Σ_i σ_i f_i
            let f = space.field_row(x);
            joint.clear();
            joint.extend(centers.iter().map(|sigma| {
                let overlap: i32 = sigma.iter().zip(f).map(|(s, fi)| s * fi).sum();
                -beta * space.total_energy[x] + gamma * overlap as f64
            }));
            log_sum_exp(&joint)
        })
        .collect();
    let (direct, log_z) = normalize_log(&direct_log);
    let (folded, lz_folded) = normalize_log(&space.log_weights(beta, gamma));
    Ok(QbarEnumeration {
        direct,
        folded,
        log_z,
        log_z_folded: lz_folded + n as f64 * std::f64::consts::LN_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_replica_single_spin_example() {
        // index 1 is +1: E(+1) = 0, E(-1) = 1
        let table = TableEnergy::new(1, vec![1.0, 0.0]).unwrap();
        let q = enumerate_qbar(&table, 2, 1.0, 1.0).unwrap();
        // ensemble index 3 = (+,+); exact value cosh2 / (cosh2 + 2/e + cosh2/e²)
        assert!((q.folded[3] - 0.751_370_330_020_999).abs() < 1e-12);
        assert!(q.max_relative_gap() < 1e-12);
        // direct Z = Σ_σ Σ_{s1,s2} exp(-βΣE + γ σ (s1 + s2))
        let mut z = 0.0;
        for s1 in [1.0f64, -1.0] {
            for s2 in [1.0f64, -1.0] {
                let e = (s1 < 0.0) as u8 as f64 + (s2 < 0.0) as u8 as f64;
                for sigma in [1.0f64, -1.0] {
                    z += (-e + sigma * (s1 + s2)).exp();
                }
            }
        }
        assert!((q.log_z - z.ln()).abs() < 1e-12);
        assert!((q.log_z_folded - z.ln()).abs() < 1e-12);
    }

    #[test]
    fn flat_energy_gives_mu0() {
        let table = TableEnergy::flat(3).unwrap();
        let t = ExactTables::new(&table, 2, 3.0, 0.7).unwrap();
        for (a, b) in t.qbar.iter().zip(&t.mu0) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn no_coupling_single_replica_is_gibbs() {
        let table = TableEnergy::new(2, vec![0.0, 1.0, 2.5, 0.3]).unwrap();
        let t = ExactTables::new(&table, 1, 1.3, 0.0).unwrap();
        let z: f64 = table.values().iter().map(|e| (-1.3 * e).exp()).sum();
        for (x, q) in t.qbar.iter().enumerate() {
            assert!((q - (-1.3 * table.at(x)).exp() / z).abs() < 1e-15);
        }
    }

    #[test]
    fn size_limits() {
        let table = TableEnergy::flat(9).unwrap();
        assert!(matches!(EnsembleSpace::new(&table, 2), Err(Error::SizeLimit { .. })));
        let table = TableEnergy::flat(11).unwrap();
        assert!(matches!(enumerate_qbar(&table, 1, 1.0, 1.0), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn aligned_ground_states_are_diagonal() {
        let table = TableEnergy::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let space = EnsembleSpace::new(&table, 2).unwrap();
        assert_eq!(space.ground_states(), vec![0, 3, 12, 15]);
        assert_eq!(space.aligned_ground_states(), vec![0, 15]);
    }
}

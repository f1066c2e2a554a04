//! Empirical laws of the simulated chain, for comparison with the exact ones.

use super::tables::check_table_size;
use crate::anneal::{ChainState, Kernel};
use crate::energy::TableEnergy;
use crate::error::{Error, Result};

/// `½ Σ |p - q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Visit frequencies of the ensemble index over steps `burn_in..steps` of a
/// chain at fixed `(β, γ)` started from a uniform random ensemble.
#[allow(clippy::too_many_arguments)]
pub fn empirical_law(
    table: &TableEnergy,
    y: usize,
    beta: f64,
    gamma: f64,
    kernel: Kernel,
    steps: u64,
    burn_in: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = table.values().len().trailing_zeros() as usize;
    check_table_size(n, y)?;
    if burn_in >= steps {
        return Err(Error::InvalidArgument("burn-in must be shorter than the run".into()));
    }
    let mut state = ChainState::random(table, y, seed);
    let mut counts = vec![0u64; 1 << (n * y)];
    let mut index = state.ensemble().to_index();
    for it in 0..steps {
        let out = state.step(table, beta, gamma, kernel);
        if out.accepted {
            index ^= 1 << (out.proposal.replica * n + out.proposal.coordinate);
        }
        if it >= burn_in {
            counts[index] += 1;
        }
    }
    debug_assert_eq!(index, state.ensemble().to_index());
    let total = (steps - burn_in) as f64;
    Ok(counts.into_iter().map(|c| c as f64 / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactTables;

    #[test]
    fn tv_examples() {
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
    }

    #[test]
    fn chain_matches_exact_law_on_two_spins() {
        let table = TableEnergy::new(2, vec![0.0, 1.0, 2.0, 0.5]).unwrap();
        let emp = empirical_law(&table, 1, 1.0, 0.0, Kernel::Combined, 200_000, 10_000, 4).unwrap();
        let exact = ExactTables::new(&table, 1, 1.0, 0.0).unwrap();
        assert!(total_variation(&emp, &exact.qbar) < 0.02);
    }
}

//! Library results against slow, direct computations.

use proptest::prelude::*;
use replicated_annealing::energy::TableEnergy;
use replicated_annealing::exact::{compute_elevation_m, fixtures, smallest_gap, ExactTables};

/// Lowest achievable path maximum from `x` to `z`, by exhaustive DFS over
/// simple paths on the single-flip graph.
fn minimax_by_paths(w: &[f64], bits: usize, x: usize, z: usize) -> f64 {
    fn dfs(w: &[f64], bits: usize, at: usize, z: usize, seen: &mut Vec<bool>, peak: f64, best: &mut f64) {
        if peak >= *best {
            return;
        }
        if at == z {
            *best = peak;
            return;
        }
        for b in 0..bits {
            let next = at ^ (1 << b);
            if !seen[next] {
                seen[next] = true;
                dfs(w, bits, next, z, seen, peak.max(w[next]), best);
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; w.len()];
    seen[x] = true;
    let mut best = f64::INFINITY;
    dfs(w, bits, x, z, &mut seen, w[x], &mut best);
    best
}

fn brute_force_m(table: &TableEnergy, y: usize) -> f64 {
    let n = table.values().len().trailing_zeros() as usize;
    let bits = n * y;
    let mask = (1usize << n) - 1;
    let w: Vec<f64> = (0..1usize << bits).map(|x| (0..y).map(|a| table.at(x >> (a * n) & mask)).sum()).collect();
    let mut m = f64::NEG_INFINITY;
    for x in 0..w.len() {
        for z in 0..w.len() {
            m = m.max(minimax_by_paths(&w, bits, x, z) - w[x] - w[z]);
        }
    }
    m
}

#[test]
fn elevation_matches_path_enumeration_on_fixtures() {
    for (table, y) in [
        (fixtures::double_well(), 1usize),
        (fixtures::three_spin(), 1),
        (fixtures::cluster_and_isolated(), 1),
        (TableEnergy::new(2, vec![0.0, 3.0, 1.0, 0.5]).unwrap(), 2),
        (TableEnergy::new(1, vec![0.0, 2.0]).unwrap(), 3),
    ] {
        assert_eq!(compute_elevation_m(&table, y).unwrap(), brute_force_m(&table, y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elevation_matches_path_enumeration(values in prop::collection::vec(0u8..6, 16), shape in 0usize..4) {
        // (N, y) with 2^{Ny} <= 16
        let (n, y) = [(4, 1), (2, 2), (1, 4), (3, 1)][shape];
        let table = TableEnergy::new(n, values[..1 << n].iter().map(|&v| v as f64).collect()).unwrap();
        prop_assert_eq!(compute_elevation_m(&table, y).unwrap(), brute_force_m(&table, y));
    }
}

#[test]
fn smallest_gap_and_ground_mass_on_double_well() {
    let table = fixtures::double_well();
    assert_eq!(smallest_gap(table.values()).unwrap(), 0.5);
    // one replica, no coupling: Boltzmann weights of the four levels
    let t = ExactTables::new(&table, 1, 2.0, 0.0).unwrap();
    let weights: Vec<f64> = table.values().iter().map(|e| (-2.0 * e).exp()).collect();
    let z: f64 = weights.iter().sum();
    for (q, w) in t.qbar.iter().zip(&weights) {
        assert!((q - w / z).abs() < 1e-15);
    }
}

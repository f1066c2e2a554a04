//! Elevation constant of the replicated landscape on the `Ny`-cube.

use super::matrix::MAX_MATRIX_BITS;
use super::tables::EnsembleSpace;
use crate::energy::TableEnergy;
use crate::error::{Error, Result};

/// `m = max_{x,z} [H(x,z) - E(x) - E(z)]` where `E` is the total replica
/// energy and `H(x,z)` the smallest achievable maximum of `E` along a
/// single-flip path from `x` to `z`.
pub fn compute_elevation_m(table: &TableEnergy, y: usize) -> Result<f64> {
    let space = EnsembleSpace::new(table, y)?;
    let bits = space.n * y;
    if bits > MAX_MATRIX_BITS {
        return Err(Error::SizeLimit { what: "N*y (elevation)", value: bits, limit: MAX_MATRIX_BITS });
    }
    Ok(elevation_of(&space.total_energy, bits))
}

/// Works on any node-weighted hypercube. Vertices are activated in order of
/// weight; when the vertex of weight `h` joins components `A` and `B`, every
/// pair across them has minimax height exactly `h`, and the worst pair is the
/// pair of component minima.
pub fn elevation_of(weights: &[f64], bits: usize) -> f64 {
    let size = weights.len();
    debug_assert_eq!(size, 1 << bits);
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));

    let mut parent: Vec<usize> = (0..size).collect();
    let mut lowest = weights.to_vec();
    let mut active = vec![false; size];
    let mut m = order.first().map_or(0.0, |&v| -weights[v]);

    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }

    for &v in &order {
        let h = weights[v];
        active[v] = true;
        for b in 0..bits {
            let u = v ^ 1 << b;
            if !active[u] {
                continue;
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                continue;
            }
            m = f64::max(m, h - lowest[ru] - lowest[rv]);
            parent[ru] = rv;
            lowest[rv] = lowest[rv].min(lowest[ru]);
        }
    }
    m
}

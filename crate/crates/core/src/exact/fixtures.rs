//! Small crafted landscapes used by the verification suites.

use crate::energy::TableEnergy;
use crate::spin::SpinVector;

/// Two wells at all-ones (depth 0) and all-minus-ones (0.5) on `N = 3`,
/// separated by a ridge of height 2 on the one-plus configurations and a
/// shoulder of height 1 on the two-plus configurations. Elevation `m = 1.5`.
pub fn double_well() -> TableEnergy {
    TableEnergy::from_fn(3, |w| {
        let plus = w.values().iter().filter(|&&s| s == 1).count();
        match plus {
            3 => 0.0,
            2 => 1.0,
            1 => 2.0,
            _ => 0.5,
        }
    })
    .expect("N = 3 is valid")
}

/// `N = 4`: the all-ones configuration and its four neighbours are global
/// minima (a cluster of five), all-minus-ones is a sixth, isolated minimum,
/// everything else has energy 1.
pub fn cluster_and_isolated() -> TableEnergy {
    TableEnergy::from_fn(4, |w| {
        let plus = w.values().iter().filter(|&&s| s == 1).count();
        if plus >= 3 || plus == 0 {
            0.0
        } else {
            1.0
        }
    })
    .expect("N = 4 is valid")
}

pub fn cluster_center() -> SpinVector {
    SpinVector::ones(4)
}

/// `N = 3` landscape with energies in `{0, 1, 2}` used for chain-versus-oracle runs.
pub fn three_spin() -> TableEnergy {
    TableEnergy::new(3, vec![2.0, 1.0, 0.0, 1.0, 1.0, 2.0, 1.0, 0.0]).expect("N = 3 is valid")
}

/// Deterministic integer-valued energies in `0..=levels` from a seed.
pub fn random_integer_table(n: usize, levels: u32, seed: u64) -> TableEnergy {
    use rand::Rng;
    let mut rng = crate::rng::seeded(seed);
    let values = (0..1usize << n).map(|_| rng.gen_range(0..=levels) as f64).collect();
    TableEnergy::new(n, values).expect("valid size")
}

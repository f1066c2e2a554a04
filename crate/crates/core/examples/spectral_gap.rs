//! The spectral gap of the chain at fixed β decays like e^{-βm}, where m is
//! the elevation of the landscape. Fit it on a double well.

use replicated_annealing::anneal::Kernel;
use replicated_annealing::exact::{compute_constants, compute_elevation_m, fixtures, gap_curve};

fn main() -> replicated_annealing::Result<()> {
    let table = fixtures::double_well();
    let betas: Vec<f64> = (0..=20).map(|k| 5.0 + 0.5 * k as f64).collect();

    for (y, gamma) in [(1, 0.0), (2, 0.5)] {
        let m = compute_elevation_m(&table, y)?;
        let psi = gap_curve(&table, y, gamma, &betas, Kernel::Combined)?;
        println!("y = {y}, gamma = {gamma}, elevation m = {m}");
        for (b, p) in betas.iter().zip(&psi).step_by(4) {
            println!("  beta {b:>5.1}  gap {p:.3e}  gap·e^(beta m) {:.4}", p * (b * m).exp());
        }
        let c = compute_constants(&table, y, gamma, &betas, Kernel::Combined)?;
        println!(
            "  fitted slope {:.4}, bracket [{:.4}, {:.4}], B = {}, B' = {:.4}, kappa1 = {:.3}",
            c.gap_slope, c.c_lower, c.c_upper, c.b, c.b_prime, c.kappa1
        );
    }
    Ok(())
}

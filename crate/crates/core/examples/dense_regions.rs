// Six global minima on four spins: five form a Hamming ball around all-ones,
// the sixth (all minus ones) sits alone. The coupling shifts mass toward the
// cluster, up to the limit where every aligned minimum is equally likely.

use replicated_annealing::exact::{classify_minima, dense_region_mass, fixtures};

fn main() -> replicated_annealing::Result<()> {
    let table = fixtures::cluster_and_isolated();
    let report = classify_minima(&table, &[1, 2]);
    for m in &report.minima {
        println!("minimum {:04b}: ball counts {:?}, isolated up to radius {}", m.index, m.ball_counts, m.isolation_radius);
    }

    let center = fixtures::cluster_center();
    println!("\n gamma   mass of radius-1 ball around all-ones (y = 2, beta = 50)");
    for k in 0..=12 {
        let gamma = 0.25 * k as f64;
        println!(" {gamma:5.2}   {:.4}", dense_region_mass(&table, 2, gamma, &center, 1, 50.0)?);
    }
    println!(" 50.00   {:.4}   (5/6 = {:.4})", dense_region_mass(&table, 2, 50.0, &center, 1, 50.0)?, 5.0 / 6.0);
    Ok(())
}

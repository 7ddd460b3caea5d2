//! The complement of the mapped image inside the symmetric two-qudit
//! subspace: its dimension, the lower bound `g_d` on the geometric measure
//! of its states, and a few random members.
//!
//! cargo run --release --example entangled_subspace -- 10

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symmap::subspace::{
    gd_sweep, hat_state_entanglement, random_hat_state, sigma_min_bound, sweep_csv,
    DEFAULT_G_STARTS,
};

fn main() -> symmap::Result<()> {
    let d_max: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let rows = gd_sweep(d_max, DEFAULT_G_STARTS, 0)?;
    print!("{}", sweep_csv(&rows));

    println!("\n d  sigma bound  g_d     min E over 20 random states");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for row in rows.iter().filter(|r| r.hat_dim > 0) {
        let mut min_e = f64::INFINITY;
        for _ in 0..20 {
            min_e = min_e.min(hat_state_entanglement(&random_hat_state(row.d, &mut rng)?)?);
        }
        println!(
            "{:>2}  {:>11.4}  {:.4}  {min_e:.4}",
            row.d,
            sigma_min_bound(2 * (row.d - 1))?,
            row.g_d.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

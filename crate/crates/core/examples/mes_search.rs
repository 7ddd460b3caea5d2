//! Searches for highly entangled symmetric states with both proxies and
//! compares the winner with the known candidate.
//!
//! cargo run --release --example mes_search -- 8 200 7

use symmap::geomeasure::{geometric_measure, mes_candidate, DEFAULT_STARTS};
use symmap::search::best_of_both;

fn main() -> symmap::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);
    let restarts: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    let record = best_of_both(n, restarts, seed)?;
    println!("N = {n}, {restarts} restarts per proxy, seed {seed}");
    println!("winning proxy   {:?}", record.config.proxy);
    println!("E(omega*)       {:.6}", record.geometric_value);
    println!("lower bound     {:.6}", record.lower_bound);
    println!("converged       {}/{}", record.restarts_converged, restarts);
    println!("wall time       {:.1} s", record.wall_time_s);
    let omega: Vec<String> = record
        .omega_star
        .iter()
        .map(|w| format!("{w:.3}"))
        .collect();
    println!("omega*          ({})", omega.join(", "));
    if let Ok(mes) = mes_candidate(n) {
        let e = geometric_measure(&mes, DEFAULT_STARTS, seed).value;
        println!("E(candidate)    {e:.6}");
    }
    Ok(())
}

//! Schmidt ranks of mapped Dicke, W and GHZ states next to the closed form.
//!
//! cargo run --example schmidt_ranks -- 12

use symmap::bipartite::{mapped_dicke_rank, schmidt, DEFAULT_SCHMIDT_TOL};
use symmap::{dicke, ghz, map_pure, w_state};

fn main() -> symmap::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(12);
    println!(" k  closed-form  numerical  leading coefficients");
    for k in 0..=n {
        let sd = schmidt(&map_pure(&dicke(n, k)?)?, DEFAULT_SCHMIDT_TOL);
        let lead: Vec<String> = sd
            .coefficients
            .iter()
            .take(3)
            .map(|s| format!("{s:.4}"))
            .collect();
        println!(
            "{k:>2}  {:>11}  {:>9}  {}",
            mapped_dicke_rank(n, k)?,
            sd.rank,
            lead.join(" ")
        );
    }
    for (name, state) in [("W", w_state(n)?), ("GHZ", ghz(n)?)] {
        println!(
            "{name:>3}: rank {}",
            schmidt(&map_pure(&state)?, DEFAULT_SCHMIDT_TOL).rank
        );
    }
    Ok(())
}

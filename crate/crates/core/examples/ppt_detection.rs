//! Detects entanglement of noisy W states through the partial transpose of
//! their two-qudit image.
//!
//! cargo run --example ppt_detection -- 6

use symmap::bipartite::{ppt_is_entangled, ppt_threshold};
use symmap::{map_mixed, SymmetricDensity};

fn main() -> symmap::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    for p in [0.0, 0.01, 0.03, 0.04, 0.1, 0.5, 1.0] {
        let v = ppt_is_entangled(&map_mixed(&SymmetricDensity::w_mixture(n, p)?)?)?;
        println!(
            "p = {p:<5} min eigenvalue {:+.3e}  {}",
            v.min_eigenvalue,
            if v.entangled {
                "entangled"
            } else {
                "not detected"
            }
        );
    }
    let w = ppt_threshold(|p| map_mixed(&SymmetricDensity::w_mixture(n, p)?), 0.0, 1.0)?;
    let g = ppt_threshold(
        |p| map_mixed(&SymmetricDensity::ghz_mixture(n, p)?),
        0.0,
        1.0,
    )?;
    println!("\ndetection threshold, W mixture:   p > {:.5}", w.threshold);
    println!("detection threshold, GHZ mixture: p > {:.5}", g.threshold);
    Ok(())
}

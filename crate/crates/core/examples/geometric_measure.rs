//! Geometric measure of known highly entangled symmetric states and of the
//! published search optima, with the Schmidt lower bound and the upper bound
//! `1 - 1/(N+1)`.
//!
//! cargo run --release --example geometric_measure

use symmap::geomeasure::{geometric_measure, mapped_lower_bound, mes_candidate, DEFAULT_STARTS};
use symmap::search::{published_e, published_omega};
use symmap::SymmetricState;

fn main() -> symmap::Result<()> {
    let seed = 1;
    println!(" N   E(candidate)  E(omega*)  reported  lower bound  upper bound");
    for n in (4..=30).step_by(2) {
        let candidate = mes_candidate(n)
            .ok()
            .map(|s| geometric_measure(&s, DEFAULT_STARTS, seed).value);
        let omega = SymmetricState::from_real(&published_omega(n)?)?;
        let e = geometric_measure(&omega, DEFAULT_STARTS, seed);
        println!(
            "{n:>2}   {:>12}  {:>9.4}  {:>8.3}  {:>11.4}  {:>11.4}",
            candidate.map_or("-".to_string(), |v| format!("{v:.4}")),
            e.value,
            published_e(n).unwrap_or(f64::NAN),
            mapped_lower_bound(&omega)?,
            1.0 - 1.0 / (n as f64 + 1.0)
        );
    }
    Ok(())
}

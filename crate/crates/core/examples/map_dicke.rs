//! Maps the Dicke states of N qubits onto two qudits and prints their
//! amplitude matrices.
//!
//! cargo run --example map_dicke -- 4

use symmap::mapping::{decompose, map_pure};
use symmap::{dicke, BipartiteSymmetricState};

fn print_matrix(psi: &BipartiteSymmetricState) {
    let a = psi.amplitudes();
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols())
            .map(|j| format!("{:7.4}", a[(i, j)].re))
            .collect();
        println!("    [{}]", row.join(" "));
    }
}

fn main() -> symmap::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(4);
    println!("N = {n} qubits -> two qudits of dimension {}", n / 2 + 1);
    for k in 0..=n {
        let psi = map_pure(&dicke(n, k)?)?;
        let dec = decompose(&psi)?;
        println!("\nM(D_{n}^{k})   image weight {:.3}", dec.weights.0);
        print_matrix(&psi);
    }
    Ok(())
}

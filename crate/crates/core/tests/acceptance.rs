//! Reproduction gate: runs every check at its pinned tolerance, prints one
//! line per check and fails if any check fails or overruns its budget.
//!
//! `SYMMAP_ACCEPTANCE_ONLY=1,6,10` restricts the run to a subset.

use std::process::ExitCode;

use symmap::verify;

const SEED: u64 = 42;

fn main() -> ExitCode {
    let only: Vec<u8> = std::env::var("SYMMAP_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect())
        .unwrap_or_default();
    println!("acceptance checks, seed {SEED}");
    let report = match verify::run(SEED, &only, |c| println!("{}", c.line())) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance run aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.ok())
        .map(|c| c.id.to_string())
        .collect();
    println!(
        "{} of {} checks passed",
        report.checks.len() - failed.len(),
        report.checks.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing checks: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}

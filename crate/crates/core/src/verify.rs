//! Reproduction checks with pinned tolerances.
//!
//! [`run`] evaluates each check and returns a [`VerifyReport`]. Every check
//! records its numerical metrics next to a pass/fail verdict and a time
//! budget. The metrics depend only on the seed, so two runs with the same
//! seed give byte-identical [`VerifyReport::payload`]s; check 12 asserts
//! exactly that by running checks 1 to 11 a second time.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bipartite::{
    mapped_dicke_rank, ppt_threshold, reduced_state, schmidt, DEFAULT_SCHMIDT_TOL,
};
use crate::error::Result;
use crate::geomeasure::{
    geometric_measure, mapped_lower_bound, mes_candidate, overlap_and_gradient, DEFAULT_STARTS,
};
use crate::mapping::{complement_projector, map_mixed, map_pure, SymmetricDensity};
use crate::optim;
use crate::search::{self, best_of_both, default_restarts};
use crate::subspace::{self, hat_dimension, sigma_min_bound, ImageOverlap, DEFAULT_G_STARTS};
use crate::symcore::{binom_f64, dicke, ghz, w_state, QubitState, SymmetricState};

pub const CHECK_COUNT: u8 = 12;

/// Mapped Dicke states of four qubits in the `psi_ij` basis,
/// ordered `(00, 01, 02, 11, 12, 22)`.
const FOUR_QUBIT_IMAGES: [[f64; 6]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [
        0.0,
        0.0,
        0.577_350_269_189_625_8,
        0.816_496_580_927_726,
        0.0,
        0.0,
    ],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
];

const PPT_TARGET: f64 = 0.034;
const PPT_TOL: f64 = 5e-4;
const MES_TOL: f64 = 1e-3;
const PUBLISHED_TOL: f64 = 3e-3;
const SEARCH_TOL: f64 = 1e-3;
const SEARCH_SIZES: [usize; 4] = [8, 10, 12, 20];
/// Reported search optima, shown but not gated.
const SEARCH_SOFT_TARGETS: [f64; 4] = [0.835, 0.856, 0.914, 0.925];
const G_TARGETS: [(usize, f64); 3] = [(3, 0.667), (4, 0.550), (5, 0.514)];
const G_TOL: f64 = 1e-3;
const GRADIENT_REL_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub title: &'static str,
    /// Numerical verdict at the pinned tolerance.
    pub passed: bool,
    pub summary: String,
    pub metrics: Value,
    #[serde(skip)]
    pub elapsed_s: f64,
    #[serde(skip)]
    pub budget_s: Option<f64>,
}

impl CheckResult {
    pub fn within_budget(&self) -> bool {
        self.budget_s.is_none_or(|b| self.elapsed_s <= b)
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_budget()
    }

    pub fn line(&self) -> String {
        let budget = match self.budget_s {
            Some(b) => format!("{:.1}s / {b:.0}s", self.elapsed_s),
            None => format!("{:.1}s", self.elapsed_s),
        };
        let verdict = match (self.passed, self.within_budget()) {
            (true, true) => "PASS",
            (true, false) => "FAIL (time)",
            _ => "FAIL",
        };
        format!(
            "[{verdict:>11}] {:>2}. {:<34} {}  ({budget})",
            self.id, self.title, self.summary
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(CheckResult::ok)
    }

    /// Seed, verdicts and metrics; no timings.
    pub fn payload(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.line());
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.ok()).count();
        out.push_str(&format!(
            "{} of {} checks passed\n",
            self.checks.len() - failed,
            self.checks.len()
        ));
        out
    }
}

/// Runs the selected checks (all when `only` is empty). Check 12 reruns
/// checks 1 to 11 and compares payloads.
pub fn run(seed: u64, only: &[u8], mut progress: impl FnMut(&CheckResult)) -> Result<VerifyReport> {
    let wanted = |id: u8| only.is_empty() || only.contains(&id);
    let mut checks = Vec::new();
    for id in 1..CHECK_COUNT {
        if wanted(id) {
            let c = run_check(id, seed)?;
            progress(&c);
            checks.push(c);
        }
    }
    if wanted(CHECK_COUNT) {
        let started = Instant::now();
        let first = VerifyReport {
            seed,
            checks: if checks.len() == (CHECK_COUNT - 1) as usize {
                checks.clone()
            } else {
                (1..CHECK_COUNT)
                    .map(|id| run_check(id, seed))
                    .collect::<Result<_>>()?
            },
        };
        let second = VerifyReport {
            seed,
            checks: (1..CHECK_COUNT)
                .map(|id| run_check(id, seed))
                .collect::<Result<_>>()?,
        };
        let a = serde_json::to_string(&first.payload()).expect("json");
        let b = serde_json::to_string(&second.payload()).expect("json");
        let c = CheckResult {
            id: CHECK_COUNT,
            title: "determinism",
            passed: a == b,
            summary: format!(
                "two runs at seed {seed}: payloads {} ({} bytes)",
                if a == b { "identical" } else { "differ" },
                a.len()
            ),
            metrics: json!({ "payload_bytes": a.len(), "identical": a == b }),
            elapsed_s: started.elapsed().as_secs_f64(),
            budget_s: None,
        };
        progress(&c);
        checks.push(c);
    }
    Ok(VerifyReport { seed, checks })
}

/// Runs one check, `1..=11`.
pub fn run_check(id: u8, seed: u64) -> Result<CheckResult> {
    let started = Instant::now();
    let (title, budget, (passed, summary, metrics)) = match id {
        1 => ("four-qubit Dicke images", 1.0, four_qubit_images()?),
        2 => ("fidelity preservation", 5.0, fidelity_preservation(seed)?),
        3 => ("separability preservation", 5.0, separability(seed)?),
        4 => ("Schmidt ranks", 10.0, schmidt_ranks()?),
        5 => ("reduced-state diagonals", 10.0, reduced_diagonals()?),
        6 => ("PPT threshold, W mixture N=6", 30.0, ppt_w_mixture()?),
        7 => ("E of known MES candidates", 120.0, mes_measures(seed)?),
        8 => ("E of published omega*", 600.0, published_measures(seed)?),
        9 => ("proxy search", 1800.0, proxy_search(seed)?),
        10 => ("subspace constants", 300.0, subspace_constants(seed)?),
        11 => ("bounds and gradients", 120.0, properties(seed)?),
        _ => {
            return Err(crate::Error::Domain(format!(
                "check {id} outside 1..={CHECK_COUNT}"
            )))
        }
    };
    Ok(CheckResult {
        id,
        title,
        passed,
        summary,
        metrics,
        elapsed_s: started.elapsed().as_secs_f64(),
        budget_s: Some(budget),
    })
}

type Outcome = (bool, String, Value);

fn check_rng(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn random_state<R: Rng>(rng: &mut R, n: usize) -> Result<SymmetricState> {
    let g = optim::gaussian_vector(rng, 2 * (n + 1));
    SymmetricState::normalized(
        (0..=n)
            .map(|k| Complex64::new(g[2 * k], g[2 * k + 1]))
            .collect(),
    )
}

fn random_qubit<R: Rng>(rng: &mut R) -> QubitState {
    let (theta, phi) = optim::random_sphere_point(rng);
    QubitState::from_bloch(theta, phi)
}

fn even_sizes(max: usize) -> impl Iterator<Item = usize> {
    (2..=max).step_by(2)
}

fn four_qubit_images() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (k, want) in FOUR_QUBIT_IMAGES.iter().enumerate() {
        let got = map_pure(&dicke(4, k)?)?.psi_coeffs();
        for (g, w) in got.iter().zip(want) {
            worst = worst.max((g - w).norm());
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max deviation {worst:.1e} (tol 1e-12)"),
        json!({ "max_deviation": worst }),
    ))
}

fn fidelity_preservation(seed: u64) -> Result<Outcome> {
    let mut rng = check_rng(seed, 2);
    let mut worst = 0.0f64;
    for n in even_sizes(12) {
        for _ in 0..200 {
            let a = random_state(&mut rng, n)?;
            let b = random_state(&mut rng, n)?;
            let direct = a.fidelity(&b)?;
            let mapped = map_pure(&a)?.inner(&map_pure(&b)?).norm_sqr();
            worst = worst.max((direct - mapped).abs());
        }
    }
    Ok((
        worst <= 1e-10,
        format!("1200 pairs, max |F - F'| {worst:.1e} (tol 1e-10)"),
        json!({ "pairs": 1200, "max_deviation": worst }),
    ))
}

fn separability(seed: u64) -> Result<Outcome> {
    let mut rng = check_rng(seed, 3);
    let mut worst = 0.0f64;
    for n in even_sizes(12) {
        let h = n / 2;
        for _ in 0..100 {
            let q = random_qubit(&mut rng);
            let image = map_pure(&q.product_state(n)?)?;
            let local: Vec<Complex64> = (0..=h)
                .map(|i| {
                    binom_f64(h, i as i64).sqrt() * q.a0.powu((h - i) as u32) * q.a1.powu(i as u32)
                })
                .collect();
            let amps = image.amplitudes();
            for i in 0..=h {
                for j in 0..=h {
                    worst = worst.max((amps[(i, j)] - local[i] * local[j]).norm());
                }
            }
        }
    }
    Ok((
        worst <= 1e-10,
        format!("600 product states, max deviation {worst:.1e} (tol 1e-10)"),
        json!({ "states": 600, "max_deviation": worst }),
    ))
}

fn schmidt_ranks() -> Result<Outcome> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for n in even_sizes(20) {
        for k in 0..=n {
            let numeric = schmidt(&map_pure(&dicke(n, k)?)?, DEFAULT_SCHMIDT_TOL).rank;
            if numeric != mapped_dicke_rank(n, k)? {
                mismatches.push(format!("D({n},{k})"));
            }
            checked += 1;
        }
        for (name, state) in [("W", w_state(n)?), ("GHZ", ghz(n)?)] {
            if schmidt(&map_pure(&state)?, DEFAULT_SCHMIDT_TOL).rank != 2 {
                mismatches.push(format!("{name}({n})"));
            }
            checked += 1;
        }
    }
    Ok((
        mismatches.is_empty(),
        format!("{checked} states, {} mismatches", mismatches.len()),
        json!({ "checked": checked, "mismatches": mismatches }),
    ))
}

fn reduced_diagonals() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for n in even_sizes(16) {
        let h = n / 2;
        for k in 0..=n {
            let rho = reduced_state(&map_pure(&dicke(n, k)?)?);
            for i in 0..=h {
                let want = binom_f64(h, i as i64) * binom_f64(h, k as i64 - i as i64)
                    / binom_f64(n, k as i64);
                worst = worst.max((rho[(i, i)] - want).norm());
            }
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max deviation {worst:.1e} (tol 1e-12)"),
        json!({ "max_deviation": worst }),
    ))
}

fn ppt_w_mixture() -> Result<Outcome> {
    let t = ppt_threshold(|p| map_mixed(&SymmetricDensity::w_mixture(6, p)?), 0.0, 1.0)?;
    let dev = (t.threshold - PPT_TARGET).abs();
    Ok((
        dev <= PPT_TOL,
        format!("p* = {:.6} (target {PPT_TARGET} +- {PPT_TOL})", t.threshold),
        json!({ "threshold": t.threshold, "lo": t.lo, "hi": t.hi, "probes": t.trace.len() }),
    ))
}

fn mes_measures(seed: u64) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for &(n, want) in &search::MES_E {
        let e = geometric_measure(&mes_candidate(n)?, DEFAULT_STARTS, seed).value;
        if (e - want).abs() > MES_TOL {
            failed.push(format!("N={n}: {e:.4} vs {want}"));
        }
        rows.push(json!({ "n": n, "value": e, "target": want }));
    }
    Ok(summarize(failed, rows, MES_TOL, 6))
}

fn published_measures(seed: u64) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for &(n, want) in &search::PUBLISHED_OMEGA_E {
        let e = search::verify_published(n, seed)?;
        if (e - want).abs() > PUBLISHED_TOL {
            failed.push(format!("N={n}: {e:.4} vs {want}"));
        }
        rows.push(json!({ "n": n, "value": e, "target": want }));
    }
    Ok(summarize(failed, rows, PUBLISHED_TOL, 14))
}

fn summarize(failed: Vec<String>, rows: Vec<Value>, tol: f64, total: usize) -> Outcome {
    let summary = if failed.is_empty() {
        format!("{total}/{total} within {tol:e}")
    } else {
        format!(
            "{}/{total} within {tol:e}; off: {}",
            total - failed.len(),
            failed.join(", ")
        )
    };
    (failed.is_empty(), summary, json!({ "rows": rows }))
}

fn proxy_search(seed: u64) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for (&n, soft) in SEARCH_SIZES.iter().zip(SEARCH_SOFT_TARGETS) {
        let floor = search::mes_e(n).expect("tabulated");
        let restarts = default_restarts(n);
        let rec = best_of_both(n, restarts, seed)?;
        if rec.geometric_value < floor - SEARCH_TOL {
            failed.push(format!("N={n}: {:.4} < {floor}", rec.geometric_value));
        }
        rows.push(json!({
            "n": n,
            "restarts": restarts,
            "proxy": rec.config.proxy,
            "value": rec.geometric_value,
            "floor": floor,
            "soft_target": soft,
            "meets_soft_target": rec.geometric_value >= soft - SEARCH_TOL,
            "omega_star": rec.omega_star,
        }));
    }
    let best: Vec<String> = rows
        .iter()
        .map(|r| format!("{}:{:.4}", r["n"], r["value"].as_f64().unwrap_or(f64::NAN)))
        .collect();
    let summary = if failed.is_empty() {
        format!("E* {} all >= candidate - 1e-3", best.join(" "))
    } else {
        format!("E* {}; below floor: {}", best.join(" "), failed.join(", "))
    };
    Ok((failed.is_empty(), summary, json!({ "rows": rows })))
}

fn subspace_constants(seed: u64) -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut values = Vec::new();
    for d in 3..=20 {
        let g = subspace::g_d(d, DEFAULT_G_STARTS, seed)?;
        values.push(json!({ "d": d, "g_d": g.value, "converged": g.converged }));
        if let Some(&(_, want)) = G_TARGETS.iter().find(|(dd, _)| *dd == d) {
            if (g.value - want).abs() > G_TOL {
                notes.push(format!("g_{d} = {:.4} vs {want}", g.value));
            }
        } else if g.value >= 0.5 {
            notes.push(format!("g_{d} = {:.4} >= 0.5", g.value));
        }
    }
    let mut rank_errors = 0;
    for d in 2..=20 {
        let rank = complement_projector(2 * (d - 1))?.rank();
        if rank != hat_dimension(d)? {
            rank_errors += 1;
            notes.push(format!("rank mismatch at d={d}: {rank}"));
        }
    }
    let first: Vec<String> = values[..3]
        .iter()
        .map(|v| format!("{:.4}", v["g_d"].as_f64().unwrap_or(f64::NAN)))
        .collect();
    let summary = if notes.is_empty() {
        format!("g_3..5 = {}; g_6..20 < 0.5; ranks exact", first.join(", "))
    } else {
        format!("g_3..5 = {}; off: {}", first.join(", "), notes.join(", "))
    };
    Ok((
        notes.is_empty(),
        summary,
        json!({ "g": values, "rank_errors": rank_errors }),
    ))
}

fn properties(seed: u64) -> Result<Outcome> {
    let mut rng = check_rng(seed, 11);
    let mut notes = Vec::new();

    let mut worst_lower = f64::NEG_INFINITY;
    let mut worst_upper = f64::NEG_INFINITY;
    for n in even_sizes(12) {
        let ceiling = 1.0 - 1.0 / (n as f64 + 1.0);
        for _ in 0..100 {
            let s = random_state(&mut rng, n)?;
            let e = geometric_measure(&s, DEFAULT_STARTS, seed).value;
            worst_lower = worst_lower.max(mapped_lower_bound(&s)? - e);
            worst_upper = worst_upper.max(e - ceiling);
        }
    }
    if worst_lower > 1e-6 {
        notes.push(format!("lower bound exceeds E by {worst_lower:.1e}"));
    }
    if worst_upper > 1e-6 {
        notes.push(format!("E exceeds 1 - 1/(N+1) by {worst_upper:.1e}"));
    }

    let mut worst_sigma = f64::NEG_INFINITY;
    for d in 2..=10 {
        let n = 2 * (d - 1);
        let bound = sigma_min_bound(n)?;
        let g = subspace::g_d(d, DEFAULT_G_STARTS, seed)?.value;
        worst_sigma = worst_sigma.max(bound - g);
    }
    if worst_sigma > 1e-6 {
        notes.push(format!("sigma bound exceeds g_d by {worst_sigma:.1e}"));
    }

    let mut worst_grad = 0.0f64;
    for _ in 0..50 {
        let n = 2 * rng.random_range(1..=10usize);
        let s = random_state(&mut rng, n)?;
        let (theta, phi) = optim::random_sphere_point(&mut rng);
        let (_, g) = overlap_and_gradient(s.coeffs(), theta, phi);
        let f = |x: &[f64]| overlap_and_gradient(s.coeffs(), x[0], x[1]).0;
        worst_grad = worst_grad.max(relative_gap(
            &g,
            &optim::central_gradient(&f, &[theta, phi], 1e-6),
        ));

        let d = rng.random_range(3..=8usize);
        let model = ImageOverlap::new(d)?;
        let x = optim::gaussian_vector(&mut rng, 2 * d);
        let (_, g) = model.value_and_gradient(&x, false);
        let f = |p: &[f64]| model.value_and_gradient(p, false).0;
        worst_grad = worst_grad.max(relative_gap(&g, &optim::central_gradient(&f, &x, 1e-6)));
    }
    if worst_grad > GRADIENT_REL_TOL {
        notes.push(format!("gradient gap {worst_grad:.1e}"));
    }

    let summary = if notes.is_empty() {
        format!("bounds hold on 600 states; gradient gap {worst_grad:.1e}")
    } else {
        notes.join("; ")
    };
    Ok((
        notes.is_empty(),
        summary,
        json!({
            "lower_bound_excess": worst_lower,
            "ceiling_excess": worst_upper,
            "sigma_bound_excess": worst_sigma,
            "gradient_relative_gap": worst_grad,
        }),
    ))
}

/// `|a - b| / max(|b|, 1e-8)` in the Euclidean norm.
fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / scale.max(1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_checks_pass() {
        for id in [1, 4, 5, 6] {
            let c = run_check(id, 0).unwrap();
            assert!(c.passed, "{}", c.line());
        }
    }

    #[test]
    fn payload_omits_timings() {
        let report = run(3, &[1], |_| {}).unwrap();
        let text = serde_json::to_string(&report.payload()).unwrap();
        assert!(!text.contains("elapsed") && !text.contains("budget"));
        assert!(report.table().ends_with("1 of 1 checks passed\n"));
        assert!(run_check(13, 0).is_err());
    }
}

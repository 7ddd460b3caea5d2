//! Checks against independent computations: full qubit-register
//! constructions, log-gamma arithmetic, grid searches and explicit
//! projectors.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::ln_gamma;

use symmap::bipartite::{
    bipartite_geometric_measure, mapped_dicke_rank, ppt_is_entangled, ppt_threshold, schmidt,
    BISECTION_WIDTH, DEFAULT_SCHMIDT_TOL,
};
use symmap::geomeasure::geometric_measure;
use symmap::mapping::{image_projector, map_mixed, map_pure, BipartiteDensity, SymmetricDensity};
use symmap::optim::gaussian_vector;
use symmap::search::{optimize_proxy, Proxy, SearchConfig};
use symmap::subspace::{self, random_hat_state, sigma_min_bound, ImageOverlap};
use symmap::symcore::{dicke, mu_table, product_overlap, QubitState, SymmetricState};

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> SymmetricState {
    let g = gaussian_vector(rng, 2 * (n + 1));
    SymmetricState::normalized(
        (0..=n)
            .map(|k| Complex64::new(g[2 * k], g[2 * k + 1]))
            .collect(),
    )
    .unwrap()
}

fn ln_binom(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

#[test]
fn mapping_factors_match_log_gamma() {
    for n in (2..=30).step_by(2) {
        let h = n / 2;
        let mu = mu_table(n).unwrap();
        for i in 0..=h {
            for j in i..=h {
                let mut log = ln_binom(h, i) + ln_binom(h, j) - ln_binom(n, i + j);
                if i != j {
                    log += 2f64.ln();
                }
                let want = (0.5 * log).exp();
                assert!((mu.get(i, j) - want).abs() < 1e-12, "N={n} ({i},{j})");
            }
        }
    }
}

/// `|D_n^k>` as a vector over all `2^n` bit strings.
fn register_dicke(n: usize, k: usize) -> Vec<f64> {
    let hits = (0..1usize << n)
        .filter(|x| x.count_ones() as usize == k)
        .count();
    let amp = 1.0 / (hits as f64).sqrt();
    (0..1usize << n)
        .map(|x| {
            if x.count_ones() as usize == k {
                amp
            } else {
                0.0
            }
        })
        .collect()
}

#[test]
fn dicke_images_match_register_construction() {
    // split the register into two halves and read off the overlap with
    // |D_h^i>|D_h^j>; this is the qudit amplitude A_ij
    for n in [2usize, 4, 6, 8, 10] {
        let h = n / 2;
        let halves: Vec<Vec<f64>> = (0..=h).map(|i| register_dicke(h, i)).collect();
        for k in 0..=n {
            let full = register_dicke(n, k);
            let image = map_pure(&dicke(n, k).unwrap()).unwrap();
            for i in 0..=h {
                for j in 0..=h {
                    let mut overlap = 0.0;
                    for (x, hx) in halves[i].iter().enumerate() {
                        if *hx == 0.0 {
                            continue;
                        }
                        for (y, hy) in halves[j].iter().enumerate() {
                            overlap += hx * hy * full[(x << h) | y];
                        }
                    }
                    let got = image.amplitudes()[(i, j)];
                    assert!(
                        (got.re - overlap).abs() < 1e-12 && got.im.abs() < 1e-15,
                        "N={n} k={k} ({i},{j}): {got} vs {overlap}"
                    );
                }
            }
        }
    }
}

#[test]
fn mapped_rank_never_exceeds_symmetric_tensor_rank() {
    for n in (2..=20).step_by(2) {
        for k in 0..=n / 2 {
            let rank = schmidt(
                &map_pure(&dicke(n, k).unwrap()).unwrap(),
                DEFAULT_SCHMIDT_TOL,
            )
            .rank;
            assert!(rank <= n - k + 1);
            assert_eq!(rank, mapped_dicke_rank(n, k).unwrap());
        }
    }
}

#[test]
fn pure_entangled_images_are_npt() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in (2..=12).step_by(2) {
        for _ in 0..20 {
            let psi = map_pure(&random_state(&mut rng, n)).unwrap();
            assert!(schmidt(&psi, DEFAULT_SCHMIDT_TOL).rank >= 2);
            assert!(
                ppt_is_entangled(&BipartiteDensity::pure(&psi))
                    .unwrap()
                    .entangled
            );
        }
    }
}

#[test]
fn ghz_mixture_threshold_regression() {
    let t = ppt_threshold(
        |p| map_mixed(&SymmetricDensity::ghz_mixture(4, p)?),
        0.0,
        1.0,
    )
    .unwrap();
    assert!(
        (t.threshold - 0.0625).abs() <= BISECTION_WIDTH,
        "{}",
        t.threshold
    );
    assert!(t.threshold > 0.0 && t.threshold < 1.0);
}

/// Dense `(theta, phi)` grid followed by compass refinement.
fn grid_oracle(state: &SymmetricState) -> f64 {
    use std::f64::consts::PI;
    let fid = |t: f64, p: f64| product_overlap(state, &QubitState::from_bloch(t, p)).norm_sqr();
    let steps = 400;
    let (mut best, mut t, mut p) = (0.0, 0.0, 0.0);
    for a in 0..=steps {
        for b in 0..steps {
            let (ta, pb) = (
                PI * a as f64 / steps as f64,
                2.0 * PI * b as f64 / steps as f64,
            );
            let f = fid(ta, pb);
            if f > best {
                (best, t, p) = (f, ta, pb);
            }
        }
    }
    let mut step = PI / steps as f64;
    while step > 1e-10 {
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let f = fid(t + dt, p + dp);
            if f > best {
                (best, t, p) = (f, t + dt, p + dp);
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    1.0 - best
}

#[test]
fn four_qubit_measure_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    for _ in 0..20 {
        let s = random_state(&mut rng, 4);
        let e = geometric_measure(&s, 64, 3).value;
        let oracle = grid_oracle(&s);
        assert!((e - oracle).abs() < 1e-5, "{e} vs {oracle}");
    }
}

#[test]
fn quartic_form_matches_image_projector() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in (2..=20).step_by(2) {
        let d = n / 2 + 1;
        let projector = image_projector(n).unwrap();
        let form = ImageOverlap::new(d).unwrap();
        for _ in 0..5 {
            let g = gaussian_vector(&mut rng, 2 * d);
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            let a: Vec<Complex64> = (0..d)
                .map(|i| Complex64::new(g[i], g[d + i]) / norm)
                .collect();
            let aa: Vec<Complex64> = (0..d * d).map(|r| a[r / d] * a[r % d]).collect();
            let pa = projector.matrix() * nalgebra::DVector::from_vec(aa.clone());
            let direct: f64 = aa
                .iter()
                .zip(pa.iter())
                .map(|(x, y)| (x.conj() * y).re)
                .sum();
            assert!((form.value(&a) - direct).abs() < 1e-10, "N={n}");
        }
    }
}

#[test]
fn sigma_bound_is_below_g() {
    for d in 3..=10 {
        let g = subspace::g_d(d, 64, 2).unwrap().value;
        assert!(sigma_min_bound(2 * (d - 1)).unwrap() <= g + 1e-6, "d={d}");
    }
}

#[test]
fn complement_states_respect_g() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for d in 3..=6 {
        let g = subspace::g_d(d, 128, 9).unwrap().value;
        for _ in 0..50 {
            let psi = random_hat_state(d, &mut rng).unwrap();
            let e = subspace::hat_state_entanglement(&psi).unwrap();
            assert!(e >= g - 1e-6, "d={d}: {e} < {g}");
            assert!(schmidt(&psi, DEFAULT_SCHMIDT_TOL).rank >= 2);
            if d == 4 {
                assert!(e >= 0.5);
            }
            assert!((bipartite_geometric_measure(&psi) - e).abs() < 1e-15);
        }
    }
}

#[test]
fn complex_and_real_minimizers_agree() {
    for d in 3..=6 {
        let complex = subspace::g_d(d, 128, 4).unwrap().value;
        let real = subspace::g_d_real(d, 128, 4).unwrap().value;
        eprintln!("d={d}: complex {complex:.12} real {real:.12}");
        assert!(complex <= real + 1e-6);
        assert!((complex - real).abs() < 1e-6);
    }
}

#[test]
fn two_qubit_search_finds_bell_level() {
    // exhaustive: E over a grid of real omega on the unit sphere in R^3
    let mut best = 0.0f64;
    for a in 0..=60 {
        for b in 0..120 {
            let (t, p) = (
                std::f64::consts::PI * a as f64 / 60.0,
                std::f64::consts::PI * b as f64 / 60.0,
            );
            let w = [t.cos(), t.sin() * p.cos(), t.sin() * p.sin()];
            let e = grid_oracle_coarse(&SymmetricState::from_real(&w).unwrap());
            best = best.max(e);
        }
    }
    assert!((best - 0.5).abs() < 1e-3, "{best}");
    let record = optimize_proxy(&SearchConfig::new(2, Proxy::PurityDeficit, 3)).unwrap();
    assert!((record.geometric_value - 0.5).abs() < 1e-8);
}

fn grid_oracle_coarse(state: &SymmetricState) -> f64 {
    use std::f64::consts::PI;
    let mut best = 0.0f64;
    for a in 0..=40 {
        for b in 0..80 {
            let q = QubitState::from_bloch(PI * a as f64 / 40.0, 2.0 * PI * b as f64 / 80.0);
            best = best.max(product_overlap(state, &q).norm_sqr());
        }
    }
    1.0 - best
}

#[test]
fn search_records_are_reproducible_and_bounded() {
    let cfg = SearchConfig {
        n_restarts: 40,
        ..SearchConfig::new(4, Proxy::PurityDeficit, 12)
    };
    let a = optimize_proxy(&cfg).unwrap();
    let b = optimize_proxy(&cfg).unwrap();
    assert_eq!(
        serde_json::to_string(&a.numerical_payload()).unwrap(),
        serde_json::to_string(&b.numerical_payload()).unwrap()
    );
    assert!((a.geometric_value - 0.667).abs() < 2e-3);
    assert!(a.geometric_value >= a.lower_bound - 1e-6);
    assert!(a.geometric_value <= 1.0 - 1.0 / 5.0 + 1e-6);
    let norm: f64 = a.omega_star.iter().map(|w| w * w).sum();
    assert!((norm - 1.0).abs() < 1e-10);
}

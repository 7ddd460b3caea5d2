//! The complement `S^` of the mapped image inside the two-qudit symmetric
//! subspace, and the lower bound `g_d = min_a <aa|Pi_S~|aa>` on the geometric
//! measure of every state in it.
//!
//! `<aa|Pi_S~|aa> = sum_k |a^T M^(k) a|^2`, where `M^(k)` is the (real,
//! symmetric) amplitude matrix of `M(|D_N^k>)`, supported on `i + j = k`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::bipartite::bipartite_geometric_measure;
use crate::error::{Error, Result};
use crate::mapping::{decompose, BipartiteSymmetricState};
use crate::optim::{self, AscentOptions};
use crate::symcore::{check_even, mu_table, QuditState, STATE_TOL};

/// Starts used by [`g_d`] when the caller does not choose.
pub const DEFAULT_G_STARTS: usize = 128;
/// Benchmark line: every antisymmetric two-qudit state has `E >= 1/2`.
pub const ANTISYMMETRIC_BOUND: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct MKMatrix {
    pub d: usize,
    pub k: usize,
    pub matrix: DMatrix<f64>,
}

impl MKMatrix {
    /// `a^T M a` (no conjugation).
    pub fn bilinear(&self, a: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.d {
            for j in 0..self.d {
                let m = self.matrix[(i, j)];
                if m != 0.0 {
                    acc += a[i] * m * a[j];
                }
            }
        }
        acc
    }

    /// Smallest absolute eigenvalue.
    pub fn sigma_min(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .map(|v| v.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// `M^(k)_ii = delta_{k,2i} mu_ii`, `M^(k)_ij = (sqrt(2)/2) delta_{k,i+j} mu_ij`.
pub fn mk_matrices(n_qubits: usize) -> Result<Vec<MKMatrix>> {
    let mu = mu_table(n_qubits)?;
    let d = mu.dim();
    Ok((0..=n_qubits)
        .map(|k| {
            let matrix = DMatrix::from_fn(d, d, |i, j| {
                if i + j != k {
                    0.0
                } else if i == j {
                    mu.get(i, i)
                } else {
                    std::f64::consts::FRAC_1_SQRT_2 * mu.get(i, j)
                }
            });
            MKMatrix { d, k, matrix }
        })
        .collect())
}

/// `sum_k sigma_min(M^(k))^2`; only the middle sector contributes.
pub fn sigma_min_bound(n_qubits: usize) -> Result<f64> {
    Ok(mk_matrices(n_qubits)?
        .iter()
        .map(|m| m.sigma_min().powi(2))
        .sum())
}

/// `dim S^ = (d-1)(d-2)/2`
pub fn hat_dimension(d: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::Domain(format!("d = {d}: need d >= 2")));
    }
    Ok((d - 1) * (d - 2) / 2)
}

/// Evaluates `<aa|Pi_S~|aa> / |a|^4` and its gradient for `a = x + i y`,
/// parameters laid out as `[x_0..x_{d-1}, y_0..y_{d-1}]`. With `real_only`
/// the parameters are `x` alone.
#[derive(Debug, Clone)]
pub struct ImageOverlap {
    d: usize,
    /// `w[i][j] = M^(i+j)_{ij}`
    w: Vec<Vec<f64>>,
}

impl ImageOverlap {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("d = {d}: need d >= 2")));
        }
        let mats = mk_matrices(2 * (d - 1))?;
        let w = (0..d)
            .map(|i| (0..d).map(|j| mats[i + j].matrix[(i, j)]).collect())
            .collect();
        Ok(Self { d, w })
    }

    fn sectors(&self, a: &[Complex64]) -> Vec<Complex64> {
        let mut q = vec![Complex64::new(0.0, 0.0); 2 * self.d - 1];
        for i in 0..self.d {
            for j in 0..self.d {
                q[i + j] += a[i] * self.w[i][j] * a[j];
            }
        }
        q
    }

    /// `sum_k |a^T M^(k) a|^2 / |a|^4`
    pub fn value(&self, a: &[Complex64]) -> f64 {
        let n: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        self.sectors(a).iter().map(|z| z.norm_sqr()).sum::<f64>() / (n * n)
    }

    pub fn value_and_gradient(&self, params: &[f64], real_only: bool) -> (f64, Vec<f64>) {
        let d = self.d;
        let a = self.unpack(params, real_only);
        let q = self.sectors(&a);
        let raw: f64 = q.iter().map(|z| z.norm_sqr()).sum();
        let n: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        // holomorphic derivative sum_k conj(q_k) dq_k/da_j
        let big_g: Vec<Complex64> = (0..d)
            .map(|j| {
                (0..d)
                    .map(|m| q[j + m].conj() * 2.0 * self.w[j][m] * a[m])
                    .sum()
            })
            .collect();
        let n2 = n * n;
        let n3 = n2 * n;
        let value = raw / n2;
        let mut grad = Vec::with_capacity(params.len());
        for j in 0..d {
            grad.push(2.0 * big_g[j].re / n2 - 2.0 * raw / n3 * 2.0 * a[j].re);
        }
        if !real_only {
            for j in 0..d {
                grad.push(-2.0 * big_g[j].im / n2 - 2.0 * raw / n3 * 2.0 * a[j].im);
            }
        }
        (value, grad)
    }

    pub fn unpack(&self, params: &[f64], real_only: bool) -> Vec<Complex64> {
        let d = self.d;
        (0..d)
            .map(|j| {
                if real_only {
                    Complex64::new(params[j], 0.0)
                } else {
                    Complex64::new(params[j], params[d + j])
                }
            })
            .collect()
    }
}

/// Rotates the global phase so that `a_0` is real and nonnegative.
fn fix_gauge(params: &mut [f64]) {
    let d = params.len() / 2;
    let a0 = Complex64::new(params[0], params[d]);
    if a0.norm() < 1e-12 {
        return;
    }
    let u = a0.conj() / a0.norm();
    for j in 0..d {
        let z = Complex64::new(params[j], params[d + j]) * u;
        params[j] = z.re;
        params[d + j] = z.im;
    }
    params[d] = 0.0;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GdResult {
    pub d: usize,
    pub value: f64,
    /// Unit-norm minimizer, `a_0` real and nonnegative.
    pub minimizer: Vec<[f64; 2]>,
    pub n_starts: usize,
    pub converged: bool,
}

impl GdResult {
    pub fn minimizer_state(&self) -> QuditState {
        QuditState::new(
            self.minimizer
                .iter()
                .map(|z| Complex64::new(z[0], z[1]))
                .collect(),
        )
        .expect("stored normalized")
    }
}

/// `g_d = min_a <aa|Pi_S~|aa>` over complex unit vectors, multi-start.
pub fn g_d(d: usize, n_starts: usize, seed: u64) -> Result<GdResult> {
    minimize_image_overlap(d, n_starts, seed, false)
}

/// Same minimization restricted to real vectors `a`.
pub fn g_d_real(d: usize, n_starts: usize, seed: u64) -> Result<GdResult> {
    minimize_image_overlap(d, n_starts, seed, true)
}

fn minimize_image_overlap(
    d: usize,
    n_starts: usize,
    seed: u64,
    real_only: bool,
) -> Result<GdResult> {
    if n_starts == 0 {
        return Err(Error::Domain("n_starts must be at least 1".into()));
    }
    let model = ImageOverlap::new(d)?;
    let n_params = if real_only { d } else { 2 * d };
    let opts = AscentOptions {
        max_iters: 2000,
        grad_tol: 1e-11,
        ftol: 0.0,
    };
    let runs: Vec<(f64, Vec<f64>, bool)> = (0..n_starts)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let x0 = optim::gaussian_vector(&mut rng, n_params);
            let out = optim::maximize(
                |x| {
                    let (v, g) = model.value_and_gradient(x, real_only);
                    (-v, g.into_iter().map(|gi| -gi).collect())
                },
                x0,
                &opts,
                |x| {
                    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    x.iter_mut().for_each(|v| *v /= n);
                    if !real_only {
                        fix_gauge(x);
                    }
                },
            );
            (-out.value, out.x, out.converged)
        })
        .collect();
    let (value, x, converged) = runs
        .into_iter()
        .reduce(|best, r| if r.0 < best.0 { r } else { best })
        .expect("n_starts >= 1");
    let mut a = model.unpack(&x, real_only);
    let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    a.iter_mut().for_each(|z| *z /= n);
    if a[0].norm() > 1e-12 {
        let u = a[0].conj() / a[0].norm();
        a.iter_mut().for_each(|z| *z *= u);
    }
    Ok(GdResult {
        d,
        value,
        minimizer: a.iter().map(|z| [z.re, z.im]).collect(),
        n_starts,
        converged,
    })
}

/// Geometric measure of a state in `S^`; bounded below by `g_d`.
pub fn hat_state_entanglement(psi: &BipartiteSymmetricState) -> Result<f64> {
    let dec = decompose(psi)?;
    let residual = dec.weights.0.sqrt();
    if residual > STATE_TOL {
        return Err(Error::NotInHatSubspace(residual));
    }
    Ok(bipartite_geometric_measure(psi))
}

/// Random unit vector of `S^` (requires `d >= 3`).
pub fn random_hat_state<R: rand::Rng>(d: usize, rng: &mut R) -> Result<BipartiteSymmetricState> {
    if hat_dimension(d)? == 0 {
        return Err(Error::Domain(format!("S^ is empty for d = {d}")));
    }
    check_even(2 * (d - 1))?;
    loop {
        let g = optim::gaussian_vector(rng, 2 * d * d);
        let amps = DMatrix::from_fn(d, d, |i, j| {
            let (lo, hi) = (i.min(j), i.max(j));
            Complex64::new(g[lo * d + hi], g[d * d + lo * d + hi])
        });
        let sym = BipartiteSymmetricState::from_amplitudes(amps)?;
        let hat = decompose(&sym)?.hat;
        let n = hat.norm_sqr().sqrt();
        if n > 1e-6 {
            return Ok(hat.scaled(1.0 / n));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GdRow {
    pub d: usize,
    /// `None` when `S^` is empty (d = 2).
    pub g_d: Option<f64>,
    pub hat_dim: usize,
    pub antisym_bound: f64,
}

/// `g_d` for `d = 2..=d_max`.
pub fn gd_sweep(d_max: usize, n_starts: usize, seed: u64) -> Result<Vec<GdRow>> {
    if !(2..=20).contains(&d_max) {
        return Err(Error::Domain(format!("d_max = {d_max} outside 2..=20")));
    }
    (2..=d_max)
        .map(|d| {
            let hat_dim = hat_dimension(d)?;
            let g = if hat_dim == 0 {
                None
            } else {
                Some(g_d(d, n_starts, seed)?.value)
            };
            Ok(GdRow {
                d,
                g_d: g,
                hat_dim,
                antisym_bound: ANTISYMMETRIC_BOUND,
            })
        })
        .collect()
}

/// CSV with header `d,g_d,hat_dim,antisym_bound`, LF line endings; an empty
/// complement is written as `NA`.
pub fn sweep_csv(rows: &[GdRow]) -> String {
    let mut out = String::from("d,g_d,hat_dim,antisym_bound\n");
    for r in rows {
        let g = r.g_d.map_or_else(|| "NA".to_string(), |v| format!("{v:?}"));
        let _ = writeln!(out, "{},{},{},{:?}", r.d, g, r.hat_dim, r.antisym_bound);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mk_examples() {
        let mats = mk_matrices(4).unwrap();
        assert_eq!(mats.len(), 5);
        let mu = mu_table(4).unwrap();
        let m2 = &mats[2].matrix;
        let off = std::f64::consts::FRAC_1_SQRT_2 * mu.get(0, 2);
        assert!((m2[(0, 2)] - off).abs() < 1e-15 && (m2[(2, 0)] - off).abs() < 1e-15);
        assert!((m2[(1, 1)] - mu.get(1, 1)).abs() < 1e-15);
        assert_eq!(m2[(0, 0)], 0.0);
        let m0 = &mats[0].matrix;
        assert_eq!(m0[(0, 0)], 1.0);
        assert_eq!(m0.iter().filter(|v| **v != 0.0).count(), 1);
        for m in mats.iter().filter(|m| m.k % 2 == 1) {
            assert!((0..3).all(|i| m.matrix[(i, i)] == 0.0));
            assert_eq!(m.matrix, m.matrix.transpose());
        }
        assert!(mk_matrices(3).is_err());
    }

    #[test]
    fn sigma_min_for_n4() {
        // eigenvalues of the anti-diagonal M^(2): mu_11 and +-mu_02/sqrt(2)
        let mu = mu_table(4).unwrap();
        let expect = (std::f64::consts::FRAC_1_SQRT_2 * mu.get(0, 2)).min(mu.get(1, 1));
        assert!((sigma_min_bound(4).unwrap() - expect * expect).abs() < 1e-14);
        assert!((sigma_min_bound(4).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        for n in (2..=20).step_by(2) {
            assert!(sigma_min_bound(n).unwrap() > 0.0);
        }
    }

    #[test]
    fn hat_dimensions() {
        assert_eq!(hat_dimension(3).unwrap(), 1);
        assert_eq!(hat_dimension(2).unwrap(), 0);
        assert_eq!(hat_dimension(11).unwrap(), 45);
        assert_eq!(hat_dimension(11).unwrap(), 20 * 18 / 8);
        assert!(hat_dimension(1).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let model = ImageOverlap::new(5).unwrap();
        let x = [0.3, -0.2, 0.5, 0.1, 0.7, 0.0, 0.4, -0.3, 0.2, -0.6];
        let (_, g) = model.value_and_gradient(&x, false);
        let f = |p: &[f64]| model.value_and_gradient(p, false).0;
        let fd = optim::central_gradient(&f, &x, 1e-6);
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() <= 1e-5 * a.abs().max(1e-3), "{a} vs {b}");
        }
    }

    #[test]
    fn g3_matches_two_thirds() {
        let r = g_d(3, 32, 5).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-9, "{}", r.value);
        let a = r.minimizer_state();
        let model = ImageOverlap::new(3).unwrap();
        assert!((model.value(a.amps()) - r.value).abs() < 1e-12);
    }

    #[test]
    fn hat_state_membership() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let hat4 = BipartiteSymmetricState::from_psi_coeffs(
            3,
            &[
                c(0.0),
                c(0.0),
                c(-(2.0f64 / 3.0).sqrt()),
                c(1.0 / 3f64.sqrt()),
                c(0.0),
                c(0.0),
            ],
        )
        .unwrap();
        let e = hat_state_entanglement(&hat4).unwrap();
        assert!(e >= 2.0 / 3.0 - 1e-6);
        let psi11 = BipartiteSymmetricState::from_psi_coeffs(
            3,
            &[c(0.0), c(0.0), c(0.0), c(1.0), c(0.0), c(0.0)],
        )
        .unwrap();
        assert!(matches!(
            hat_state_entanglement(&psi11),
            Err(Error::NotInHatSubspace(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let rows = vec![
            GdRow {
                d: 2,
                g_d: None,
                hat_dim: 0,
                antisym_bound: 0.5,
            },
            GdRow {
                d: 3,
                g_d: Some(2.0 / 3.0),
                hat_dim: 1,
                antisym_bound: 0.5,
            },
        ];
        assert_eq!(
            sweep_csv(&rows),
            "d,g_d,hat_dim,antisym_bound\n2,NA,0,0.5\n3,0.6666666666666666,1,0.5\n"
        );
    }
}

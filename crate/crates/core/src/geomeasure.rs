//! Geometric measure of entanglement of symmetric N-qubit states.
//!
//! For symmetric states the closest product state can be taken symmetric,
//! `|phi>^{(x)N}`, so the search runs over the Bloch sphere. Each start is
//! refined by BFGS ascent on the squared overlap using its analytic gradient.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::bipartite::{schmidt, DEFAULT_SCHMIDT_TOL};
use crate::error::{Error, Result};
use crate::mapping::map_pure;
use crate::optim::{self, AscentOptions};
use crate::symcore::{binom_f64, product_overlap, QubitState, SymmetricState};

/// Lattice starts used when the caller does not choose.
pub const DEFAULT_STARTS: usize = 64;
/// Uniform-random starts added on top of the lattice.
pub const RANDOM_STARTS: usize = 16;
const TIE_TOL: f64 = 1e-12;

/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>` with `theta` in `[0, pi]`
/// and `phi` in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub theta: f64,
    pub phi: f64,
}

impl BlochPoint {
    /// Folds arbitrary angles into the canonical ranges; the qubit state is
    /// unchanged up to a global phase.
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(2.0 * PI);
        let mut phi = phi;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn qubit(&self) -> QubitState {
        QubitState::from_bloch(self.theta, self.phi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricResult {
    /// `E = 1 - max |<phi^N|psi>|^2`
    pub value: f64,
    pub argmax: BlochPoint,
    pub n_starts: usize,
    /// Whether the winning start met the gradient criterion.
    pub converged: bool,
}

/// Squared overlap `|<phi(theta,phi)^N|psi>|^2` and its gradient in
/// `(theta, phi)`.
pub fn overlap_and_gradient(coeffs: &[Complex64], theta: f64, phi: f64) -> (f64, [f64; 2]) {
    let n = coeffs.len() - 1;
    let (s, c) = (0.5 * theta).sin_cos();
    let mut g = Complex64::new(0.0, 0.0);
    let mut dg_theta = Complex64::new(0.0, 0.0);
    let mut dg_phi = Complex64::new(0.0, 0.0);
    for (k, ck) in coeffs.iter().enumerate() {
        let root = binom_f64(n, k as i64).sqrt();
        let a = root * c.powi((n - k) as i32) * s.powi(k as i32);
        let mut da = 0.0;
        if k < n {
            da -= 0.5 * (n - k) as f64 * c.powi((n - k - 1) as i32) * s.powi(k as i32 + 1);
        }
        if k > 0 {
            da += 0.5 * k as f64 * c.powi((n - k) as i32 + 1) * s.powi(k as i32 - 1);
        }
        let phase = Complex64::from_polar(1.0, -(k as f64) * phi) * ck;
        g += a * phase;
        dg_theta += root * da * phase;
        dg_phi += Complex64::new(0.0, -(k as f64)) * a * phase;
    }
    let val = g.norm_sqr();
    let grad = [2.0 * (g.conj() * dg_theta).re, 2.0 * (g.conj() * dg_phi).re];
    (val, grad)
}

fn better(a: &(f64, BlochPoint, bool), b: &(f64, BlochPoint, bool)) -> bool {
    if (a.0 - b.0).abs() <= TIE_TOL {
        (a.1.theta, a.1.phi) < (b.1.theta, b.1.phi)
    } else {
        a.0 > b.0
    }
}

/// Multi-start maximization of the overlap with symmetric product states.
///
/// Starts: `n_starts` Fibonacci-lattice points plus [`RANDOM_STARTS`]
/// uniform points drawn from `seed`. The result is independent of thread
/// scheduling.
pub fn geometric_measure(state: &SymmetricState, n_starts: usize, seed: u64) -> GeometricResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = optim::fibonacci_sphere(n_starts);
    starts.extend((0..RANDOM_STARTS).map(|_| optim::random_sphere_point(&mut rng)));
    let coeffs = state.coeffs();
    let opts = AscentOptions::default();

    let runs: Vec<(f64, BlochPoint, bool)> = starts
        .par_iter()
        .map(|&(theta, phi)| {
            let out = optim::maximize(
                |x| {
                    let (v, g) = overlap_and_gradient(coeffs, x[0], x[1]);
                    (v, g.to_vec())
                },
                vec![theta, phi],
                &opts,
                |_| {},
            );
            let point = BlochPoint::canonical(out.x[0], out.x[1]);
            let fid = product_overlap(state, &point.qubit()).norm_sqr();
            (fid, point, out.converged)
        })
        .collect();

    let best = runs
        .into_iter()
        .reduce(|acc, r| if better(&r, &acc) { r } else { acc })
        .expect("at least one start");
    GeometricResult {
        value: (1.0 - best.0).max(0.0),
        argmax: best.1,
        n_starts: starts.len(),
        converged: best.2,
    }
}

/// `1 - s_max^2` of the mapped state; never exceeds the geometric measure.
pub fn mapped_lower_bound(state: &SymmetricState) -> Result<f64> {
    let s = schmidt(&map_pure(state)?, DEFAULT_SCHMIDT_TOL).max_coefficient();
    Ok(1.0 - s * s)
}

/// Known candidates for maximally entangled symmetric states, N in
/// {4, 6, 8, 10, 12, 20}.
pub fn mes_candidate(n_qubits: usize) -> Result<SymmetricState> {
    let mut c = vec![0.0; n_qubits + 1];
    match n_qubits {
        4 => {
            c[0] = (1.0f64 / 3.0).sqrt();
            c[3] = (2.0f64 / 3.0).sqrt();
        }
        6 => {
            c[1] = 0.5f64.sqrt();
            c[5] = 0.5f64.sqrt();
        }
        8 => {
            // published to three digits; renormalized below
            c[1] = 0.672;
            c[6] = 0.741;
        }
        10 => {
            let a = 1.133;
            c[1] = 1.0;
            c[5] = a;
            c[9] = -1.0;
        }
        12 => {
            c[1] = 7f64.sqrt();
            c[6] = -(11f64.sqrt());
            c[11] = -(7f64.sqrt());
        }
        20 => {
            c[0] = 187f64.sqrt();
            c[5] = 627f64.sqrt();
            c[10] = 247f64.sqrt();
            c[15] = -(627f64.sqrt());
            c[20] = 187f64.sqrt();
        }
        _ => return Err(Error::NotTabulated(n_qubits)),
    }
    SymmetricState::from_real(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{dicke, ghz};

    #[test]
    fn canonical_angles() {
        let p = BlochPoint::canonical(-0.3, 0.2);
        assert!((p.theta - 0.3).abs() < 1e-15 && (p.phi - (0.2 + PI)).abs() < 1e-15);
        let p = BlochPoint::canonical(0.4, -0.1);
        assert!((p.phi - (2.0 * PI - 0.1)).abs() < 1e-15);
        // same qubit up to phase
        let a = QubitState::from_bloch(-0.3, 0.2);
        let b = BlochPoint::canonical(-0.3, 0.2).qubit();
        let ov = a.a0.conj() * b.a0 + a.a1.conj() * b.a1;
        assert!((ov.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn separable_and_ghz() {
        let r = geometric_measure(&dicke(6, 0).unwrap(), DEFAULT_STARTS, 1);
        assert!(r.value.abs() < 1e-12);
        let r = geometric_measure(&ghz(4).unwrap(), DEFAULT_STARTS, 1);
        assert!((r.value - 0.5).abs() < 1e-10);
        assert!(r.converged);
        assert_eq!(r.n_starts, DEFAULT_STARTS + RANDOM_STARTS);
    }

    #[test]
    fn mes_vectors() {
        let s = mes_candidate(4).unwrap();
        let want = [(1.0f64 / 3.0).sqrt(), 0.0, 0.0, (2.0f64 / 3.0).sqrt(), 0.0];
        for (c, w) in s.coeffs().iter().zip(want) {
            assert!((c.re - w).abs() < 1e-15);
        }
        let s = mes_candidate(12).unwrap();
        assert!((s.coeffs()[1].re - 7f64.sqrt() / 5.0).abs() < 1e-15);
        assert!((s.coeffs()[6].re + 11f64.sqrt() / 5.0).abs() < 1e-15);
        assert!((s.coeffs()[11].re + 7f64.sqrt() / 5.0).abs() < 1e-15);
        let s = mes_candidate(20).unwrap();
        assert_eq!(s.coeffs().iter().filter(|c| c.norm() > 0.0).count(), 5);
        assert!(matches!(mes_candidate(14), Err(Error::NotTabulated(14))));
    }

    #[test]
    fn ghz_bound_is_tight() {
        for n in [4, 6, 10] {
            let g = ghz(n).unwrap();
            assert!((mapped_lower_bound(&g).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!(mapped_lower_bound(&dicke(5, 2).unwrap()).is_err());
    }
}

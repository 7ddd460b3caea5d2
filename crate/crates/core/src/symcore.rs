//! Dicke-basis states, qubit and qudit vectors, exact binomials and the
//! mapping factors `mu_ij`.
//!
//! An N-qubit permutation-symmetric state is stored by its N+1 amplitudes
//! over the Dicke basis `|D_N^k>`, k = 0..N. No global phase is imposed;
//! compare states through [`SymmetricState::fidelity`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the squared norm of multi-component states.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on scalar identities and single-particle states.
pub const SCALAR_TOL: f64 = 1e-12;
/// Largest `n` for which [`binomial`] is exact.
pub const MAX_BINOMIAL_N: u32 = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Exact binomial coefficient `C(n, k)`; zero outside `0 <= k <= n`.
pub fn binomial(n: u32, k: i64) -> Result<u64> {
    if n > MAX_BINOMIAL_N {
        return Err(Error::Overflow {
            n,
            max: MAX_BINOMIAL_N,
        });
    }
    if k < 0 || k > n as i64 {
        return Ok(0);
    }
    let k = (k as u64).min(n as u64 - k as u64);
    // running product C(n-k+i, i) stays integral at every step
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (n as u128 - k as u128 + i as u128) / i as u128;
    }
    u64::try_from(acc).map_err(|_| Error::Overflow {
        n,
        max: MAX_BINOMIAL_N,
    })
}

/// `C(n, k)` as a float. Callers guarantee `n <= 64`.
pub(crate) fn binom_f64(n: usize, k: i64) -> f64 {
    binomial(n as u32, k).expect("n within exact range") as f64
}

pub(crate) fn check_even(n_qubits: usize) -> Result<usize> {
    if n_qubits % 2 == 1 {
        return Err(Error::UnsupportedParity(n_qubits));
    }
    if n_qubits == 0 {
        return Err(Error::Domain("N must be a positive even integer".into()));
    }
    if n_qubits as u32 > MAX_BINOMIAL_N {
        return Err(Error::Domain(format!(
            "N = {n_qubits} exceeds the supported maximum {MAX_BINOMIAL_N}"
        )));
    }
    Ok(n_qubits / 2)
}

/// Pure N-qubit symmetric state in the Dicke basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricState {
    n_qubits: usize,
    coeffs: Vec<Complex64>,
}

impl SymmetricState {
    /// Builds a state from Dicke amplitudes `c_0..c_N`; the squared norm must be
    /// one within [`STATE_TOL`].
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain(
                "a symmetric state needs at least N = 1 (two coefficients)".into(),
            ));
        }
        if coeffs.len() - 1 > MAX_BINOMIAL_N as usize {
            return Err(Error::Domain(format!(
                "N = {} exceeds the supported maximum {MAX_BINOMIAL_N}",
                coeffs.len() - 1
            )));
        }
        let norm_sqr: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized {
                norm_sqr,
                tol: STATE_TOL,
            });
        }
        Ok(Self {
            n_qubits: coeffs.len() - 1,
            coeffs,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut coeffs: Vec<Complex64>) -> Result<Self> {
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        coeffs.iter_mut().for_each(|c| *c /= norm);
        Self::new(coeffs)
    }

    /// Real amplitudes, rescaled to unit norm.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::normalized(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `<self|other>`
    pub fn inner(&self, other: &SymmetricState) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits + 1,
                got: other.n_qubits + 1,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`
    pub fn fidelity(&self, other: &SymmetricState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Same state with the global phase `e^{i phase}` applied.
    pub fn with_phase(&self, phase: f64) -> Self {
        let u = Complex64::from_polar(1.0, phase);
        Self {
            n_qubits: self.n_qubits,
            coeffs: self.coeffs.iter().map(|c| c * u).collect(),
        }
    }

    /// Image under the collective bit flip, `c_k -> c_{N-k}`.
    pub fn bit_flipped(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            coeffs: self.coeffs.iter().rev().copied().collect(),
        }
    }
}

/// Single-qubit pure state `a0|0> + a1|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub a0: Complex64,
    pub a1: Complex64,
}

impl QubitState {
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let norm_sqr = a0.norm_sqr() + a1.norm_sqr();
        if (norm_sqr - 1.0).abs() > SCALAR_TOL {
            return Err(Error::NotNormalized {
                norm_sqr,
                tol: SCALAR_TOL,
            });
        }
        Ok(Self { a0, a1 })
    }

    pub fn zero() -> Self {
        Self { a0: ONE, a1: ZERO }
    }

    pub fn one() -> Self {
        Self { a0: ZERO, a1: ONE }
    }

    /// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self {
            a0: Complex64::new((theta / 2.0).cos(), 0.0),
            a1: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    /// Dicke amplitudes of `|phi>^{(x)N}`:
    /// `sqrt(C(N,k)) a0^{N-k} a1^k`.
    pub fn product_state(&self, n_qubits: usize) -> Result<SymmetricState> {
        let coeffs = (0..=n_qubits)
            .map(|k| {
                binom_f64(n_qubits, k as i64).sqrt()
                    * self.a0.powu((n_qubits - k) as u32)
                    * self.a1.powu(k as u32)
            })
            .collect();
        SymmetricState::normalized(coeffs)
    }
}

/// Single-qudit pure state `sum_i a_i |i>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuditState {
    amps: Vec<Complex64>,
}

impl QuditState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Domain("qudit dimension must be positive".into()));
        }
        let norm_sqr: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > SCALAR_TOL {
            return Err(Error::NotNormalized {
                norm_sqr,
                tol: SCALAR_TOL,
            });
        }
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }
}

/// Mapping factors `mu_ij`, `0 <= i <= j <= N/2`, stored as a full symmetric
/// `(N/2+1) x (N/2+1)` table.
#[derive(Debug, Clone, PartialEq)]
pub struct MuTable {
    n_qubits: usize,
    values: Vec<Vec<f64>>,
}

impl MuTable {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Local dimension `d = N/2 + 1`.
    pub fn dim(&self) -> usize {
        self.n_qubits / 2 + 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }
}

/// Mapping factors for even `N`:
/// `mu_ii = C(N/2,i)/sqrt(C(N,2i))`,
/// `mu_ij = sqrt(2 C(N/2,i) C(N/2,j) / C(N,i+j))` for `i != j`.
pub fn mu_table(n_qubits: usize) -> Result<MuTable> {
    let half = check_even(n_qubits)?;
    let d = half + 1;
    let entry = |i: usize, j: usize| -> Result<f64> {
        let ci = binomial(half as u32, i as i64)? as f64;
        let cj = binomial(half as u32, j as i64)? as f64;
        let cn = binomial(n_qubits as u32, (i + j) as i64)? as f64;
        Ok(if i == j {
            ci / cn.sqrt()
        } else {
            (2.0 * ci * cj / cn).sqrt()
        })
    };
    let values = (0..d)
        .map(|i| (0..d).map(|j| entry(i.min(j), i.max(j))).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(MuTable { n_qubits, values })
}

/// `f(k, N) = sum_{i<=j, i+j=k} mu_ij^2`; identically one by Chu-Vandermonde.
pub fn f_norm(k: i64, n_qubits: usize) -> Result<f64> {
    if k < 0 || k > n_qubits as i64 {
        return Err(Error::Domain(format!("k = {k} outside 0..={n_qubits}")));
    }
    let mu = mu_table(n_qubits)?;
    let k = k as usize;
    let d = mu.dim();
    Ok((0..d)
        .filter_map(|i| {
            let j = k.checked_sub(i)?;
            (j >= i && j < d).then(|| mu.get(i, j).powi(2))
        })
        .sum())
}

/// `<phi^{(x)N}|psi> = sum_k conj(sqrt(C(N,k)) phi_0^{N-k} phi_1^k) c_k`
pub fn product_overlap(state: &SymmetricState, phi: &QubitState) -> Complex64 {
    let n = state.n_qubits();
    state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let amp =
                binom_f64(n, k as i64).sqrt() * phi.a0.powu((n - k) as u32) * phi.a1.powu(k as u32);
            amp.conj() * c
        })
        .sum()
}

/// Dicke state `|D_N^k>`.
pub fn dicke(n_qubits: usize, k: usize) -> Result<SymmetricState> {
    if n_qubits == 0 || k > n_qubits {
        return Err(Error::Domain(format!(
            "Dicke state requires 0 <= k <= N with N >= 1, got N = {n_qubits}, k = {k}"
        )));
    }
    let mut coeffs = vec![ZERO; n_qubits + 1];
    coeffs[k] = ONE;
    SymmetricState::new(coeffs)
}

/// `(|D_N^0> + |D_N^N>)/sqrt(2)`
pub fn ghz(n_qubits: usize) -> Result<SymmetricState> {
    if n_qubits == 0 {
        return Err(Error::Domain("GHZ state requires N >= 1".into()));
    }
    let mut coeffs = vec![ZERO; n_qubits + 1];
    coeffs[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    coeffs[n_qubits] = coeffs[0];
    SymmetricState::new(coeffs)
}

/// `|W_N> = |D_N^1>`
pub fn w_state(n_qubits: usize) -> Result<SymmetricState> {
    dicke(n_qubits, 1)
}

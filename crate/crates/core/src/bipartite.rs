//! Schmidt analysis, the PPT test and scalar entanglement measures for
//! two-qudit states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::mapping::{validate_density, BipartiteDensity, BipartiteSymmetricState};

/// Default relative cut for the Schmidt rank.
pub const DEFAULT_SCHMIDT_TOL: f64 = 1e-8;
/// A partial transpose eigenvalue below this flags entanglement.
pub const NPT_THRESHOLD: f64 = -1e-10;
/// Final bracket width of [`ppt_threshold`].
pub const BISECTION_WIDTH: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtData {
    /// Descending singular values of the amplitude matrix.
    pub coefficients: Vec<f64>,
    pub rank: usize,
    pub tolerance: f64,
}

impl SchmidtData {
    pub fn max_coefficient(&self) -> f64 {
        self.coefficients.first().copied().unwrap_or(0.0)
    }
}

/// `rho_A = tr_B |psi><psi| = A A^dagger`
pub fn reduced_state(psi: &BipartiteSymmetricState) -> CMatrix {
    let a = psi.amplitudes();
    a * a.adjoint()
}

/// Singular values of the amplitude matrix with a rank cut relative to the
/// largest one.
pub fn schmidt(psi: &BipartiteSymmetricState, tolerance: f64) -> SchmidtData {
    let mut coefficients: Vec<f64> = psi
        .amplitudes()
        .clone()
        .singular_values()
        .iter()
        .copied()
        .collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    let cut = tolerance * coefficients[0];
    let rank = coefficients.iter().filter(|&&s| s > cut).count();
    SchmidtData {
        coefficients,
        rank,
        tolerance,
    }
}

/// Closed-form Schmidt rank of `M(|D_N^k>)`: `k+1` for `k <= N/2`, else
/// `N-k+1`.
pub fn mapped_dicke_rank(n_qubits: usize, k: usize) -> Result<usize> {
    crate::symcore::check_even(n_qubits)?;
    if k > n_qubits {
        return Err(Error::Domain(format!("k = {k} outside 0..={n_qubits}")));
    }
    Ok(if k <= n_qubits / 2 {
        k + 1
    } else {
        n_qubits - k + 1
    })
}

/// Transposes the second factor: `<ij|rho^T_B|kl> = <il|rho|kj>`.
pub fn partial_transpose(rho: &BipartiteDensity) -> CMatrix {
    let d = rho.dim();
    let m = rho.matrix();
    CMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        m[(i * d + l, k * d + j)]
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptVerdict {
    /// True when the partial transpose has an eigenvalue below `-1e-10`.
    pub entangled: bool,
    pub min_eigenvalue: f64,
}

pub fn ppt_is_entangled(rho: &BipartiteDensity) -> Result<PptVerdict> {
    validate_density(rho.matrix())?;
    let min_eigenvalue = linalg::hermitian_eigenvalues(&partial_transpose(rho))[0];
    Ok(PptVerdict {
        entangled: min_eigenvalue < NPT_THRESHOLD,
        min_eigenvalue,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub threshold: f64,
    pub lo: f64,
    pub hi: f64,
    /// Every probed `(p, min eigenvalue of the partial transpose)`.
    pub trace: Vec<(f64, f64)>,
}

/// Bisects `p` in `[lo, hi]` for the onset of a negative partial transpose.
///
/// Requires `family(lo)` PPT and `family(hi)` NPT; detection is assumed
/// monotone in between. Stops at bracket width [`BISECTION_WIDTH`] and
/// returns the bracket midpoint.
pub fn ppt_threshold<F>(family: F, lo: f64, hi: f64) -> Result<ThresholdResult>
where
    F: Fn(f64) -> Result<BipartiteDensity>,
{
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Bracket(format!("empty interval [{lo}, {hi}]")));
    }
    let mut trace = Vec::new();
    let mut probe = |p: f64| -> Result<bool> {
        let v = ppt_is_entangled(&family(p)?)?;
        trace.push((p, v.min_eigenvalue));
        Ok(v.entangled)
    };
    if probe(lo)? {
        return Err(Error::Bracket(format!("state at p = {lo} is already NPT")));
    }
    if !probe(hi)? {
        return Err(Error::Bracket(format!("state at p = {hi} is still PPT")));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > BISECTION_WIDTH {
        let mid = 0.5 * (a + b);
        if probe(mid)? {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(ThresholdResult {
        threshold: 0.5 * (a + b),
        lo: a,
        hi: b,
        trace,
    })
}

/// `1 - tr(rho_A^2)`
pub fn purity_deficit(rho_a: &CMatrix) -> f64 {
    1.0 - rho_a.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// `det(rho_A)`
pub fn det_measure(rho_a: &CMatrix) -> f64 {
    rho_a.clone().determinant().re
}

/// `1 - s_max^2`: one minus the largest overlap with a product state.
pub fn bipartite_geometric_measure(psi: &BipartiteSymmetricState) -> f64 {
    let s = schmidt(psi, DEFAULT_SCHMIDT_TOL).max_coefficient();
    1.0 - s * s
}

//! Embedding of the N-qubit symmetric subspace into the symmetric subspace of
//! two qudits of dimension `d = N/2 + 1`.
//!
//! Two-qudit states are stored as amplitude matrices: `sum_ij A_ij |ij>` with
//! `A = A^T` on the symmetric subspace. The basis `psi_ij` (i <= j) used for
//! printing is a view on the same data: `psi_ii` carries `A_ii` and `psi_ij`
//! carries `sqrt(2) A_ij`. Product-space indices are flattened as `i*d + j`.
//!
//! The Dicke state `|D_N^k>` maps to the matrix with entries
//! `sqrt(C(N/2,i) C(N/2,j) / C(N,k))` on the anti-diagonal `i + j = k`, which
//! reproduces the factors of [`crate::symcore::mu_table`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, PSD_FLOOR};
use crate::symcore::{binom_f64, check_even, QubitState, QuditState, SymmetricState, STATE_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pure two-qudit state on the symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteSymmetricState {
    amps: CMatrix,
}

impl BipartiteSymmetricState {
    /// Wraps a square amplitude matrix; rejects matrices that are not
    /// symmetric within `1e-10`.
    pub fn from_amplitudes(amps: CMatrix) -> Result<Self> {
        if amps.nrows() != amps.ncols() || amps.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: amps.nrows(),
                got: amps.ncols(),
            });
        }
        let asym = symmetry_defect(&amps);
        if asym > STATE_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { amps })
    }

    /// Builds the state `sum_{i<=j} coeffs[(i,j)] |psi_ij>` from coefficients
    /// in lexicographic `(i, j)`, `i <= j` order.
    pub fn from_psi_coeffs(d: usize, coeffs: &[Complex64]) -> Result<Self> {
        let expected = d * (d + 1) / 2;
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        let mut amps = CMatrix::zeros(d, d);
        for ((i, j), c) in psi_pairs(d).zip(coeffs) {
            if i == j {
                amps[(i, i)] = *c;
            } else {
                amps[(i, j)] = c * std::f64::consts::FRAC_1_SQRT_2;
                amps[(j, i)] = amps[(i, j)];
            }
        }
        Ok(Self { amps })
    }

    /// The product state `|a>|a>`.
    pub fn product(a: &QuditState) -> Self {
        let v = a.amps();
        Self {
            amps: CMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j]),
        }
    }

    /// Coefficients over `psi_ij`, lexicographic in `(i, j)` with `i <= j`.
    pub fn psi_coeffs(&self) -> Vec<Complex64> {
        psi_pairs(self.dim())
            .map(|(i, j)| {
                if i == j {
                    self.amps[(i, i)]
                } else {
                    self.amps[(i, j)] * std::f64::consts::SQRT_2
                }
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.amps.nrows()
    }

    pub fn amplitudes(&self) -> &CMatrix {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Flattened vector in the product basis, index `i*d + j`.
    pub fn to_vector(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d * d).map(|r| self.amps[(r / d, r % d)]).collect()
    }

    fn from_vector(d: usize, v: &[Complex64]) -> Self {
        Self {
            amps: CMatrix::from_fn(d, d, |i, j| v[i * d + j]),
        }
    }

    pub(crate) fn scaled(&self, s: f64) -> Self {
        Self {
            amps: self.amps.map(|z| z * s),
        }
    }
}

/// `(i, j)` pairs with `i <= j` in lexicographic order.
pub fn psi_pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |i| (i..d).map(move |j| (i, j)))
}

fn symmetry_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i + 1..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    worst
}

/// Images `M(|D_N^k>)`, k = 0..N.
#[derive(Debug, Clone)]
pub struct MappedBasis {
    n_qubits: usize,
    vectors: Vec<BipartiteSymmetricState>,
}

impl MappedBasis {
    pub fn new(n_qubits: usize) -> Result<Self> {
        let half = check_even(n_qubits)?;
        let d = half + 1;
        let vectors = (0..=n_qubits)
            .map(|k| {
                let norm = binom_f64(n_qubits, k as i64);
                let amps = CMatrix::from_fn(d, d, |i, j| {
                    if i + j == k {
                        let w = binom_f64(half, i as i64) * binom_f64(half, j as i64) / norm;
                        Complex64::new(w.sqrt(), 0.0)
                    } else {
                        ZERO
                    }
                });
                BipartiteSymmetricState { amps }
            })
            .collect();
        Ok(Self { n_qubits, vectors })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.n_qubits / 2 + 1
    }

    pub fn vectors(&self) -> &[BipartiteSymmetricState] {
        &self.vectors
    }

    /// `d^2 x (N+1)` isometry whose k-th column is `M(|D_N^k>)`.
    pub fn isometry(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d * d, self.n_qubits + 1, |r, k| {
            self.vectors[k].amps[(r / d, r % d)]
        })
    }

    /// `sum_k c_k M(|D_N^k>)`
    pub fn apply(&self, coeffs: &[Complex64]) -> BipartiteSymmetricState {
        let d = self.dim();
        let mut amps = CMatrix::zeros(d, d);
        for (k, c) in coeffs.iter().enumerate() {
            for i in k.saturating_sub(d - 1)..=k.min(d - 1) {
                amps[(i, k - i)] += c * self.vectors[k].amps[(i, k - i)];
            }
        }
        BipartiteSymmetricState { amps }
    }

    /// `<M(D_N^k)|psi>` for every k.
    pub fn coefficients(&self, psi: &BipartiteSymmetricState) -> Vec<Complex64> {
        self.vectors.iter().map(|v| v.inner(psi)).collect()
    }
}

/// `M(|Psi>) = sum_k c_k M(|D_N^k>)`
pub fn map_pure(state: &SymmetricState) -> Result<BipartiteSymmetricState> {
    let basis = MappedBasis::new(state.n_qubits())?;
    Ok(basis.apply(state.coeffs()))
}

/// Mixed state on the N-qubit symmetric subspace, in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricDensity {
    n_qubits: usize,
    matrix: CMatrix,
}

impl SymmetricDensity {
    /// Validates Hermiticity, unit trace and positivity (eigenvalue floor
    /// `-1e-10`).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        validate_density(&matrix)?;
        if matrix.nrows() < 2 {
            return Err(Error::InvalidDensity("need N >= 1".into()));
        }
        Ok(Self {
            n_qubits: matrix.nrows() - 1,
            matrix,
        })
    }

    pub fn pure(state: &SymmetricState) -> Self {
        let c = nalgebra::DVector::from_column_slice(state.coeffs());
        Self {
            n_qubits: state.n_qubits(),
            matrix: &c * c.adjoint(),
        }
    }

    /// `Pi_S / (N+1)`: the identity in the Dicke basis, normalized.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = n_qubits + 1;
        Self {
            n_qubits,
            matrix: CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        }
    }

    /// `p * a + (1 - p) * b` for `p` in `[0, 1]`.
    pub fn mix(p: f64, a: &Self, b: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("mixing weight {p} outside [0, 1]")));
        }
        if a.n_qubits != b.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: a.n_qubits + 1,
                got: b.n_qubits + 1,
            });
        }
        Ok(Self {
            n_qubits: a.n_qubits,
            matrix: a.matrix.map(|z| z * p) + b.matrix.map(|z| z * (1.0 - p)),
        })
    }

    /// `p |W_N><W_N| + (1-p) Pi_S/(N+1)`
    pub fn w_mixture(n_qubits: usize, p: f64) -> Result<Self> {
        let w = crate::symcore::w_state(n_qubits)?;
        Self::mix(p, &Self::pure(&w), &Self::maximally_mixed(n_qubits))
    }

    /// `p |GHZ_N><GHZ_N| + (1-p) Pi_S/(N+1)`
    pub fn ghz_mixture(n_qubits: usize, p: f64) -> Result<Self> {
        let g = crate::symcore::ghz(n_qubits)?;
        Self::mix(p, &Self::pure(&g), &Self::maximally_mixed(n_qubits))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Density matrix on two qudits, product-basis index `i*d + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteDensity {
    d: usize,
    matrix: CMatrix,
}

impl BipartiteDensity {
    pub fn new(d: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != d * d || matrix.ncols() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                got: matrix.nrows(),
            });
        }
        validate_density(&matrix)?;
        Ok(Self { d, matrix })
    }

    pub fn pure(psi: &BipartiteSymmetricState) -> Self {
        let v = nalgebra::DVector::from_vec(psi.to_vector());
        Self {
            d: psi.dim(),
            matrix: &v * v.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

pub(crate) fn validate_density(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidDensity("matrix is not square".into()));
    }
    let herm = linalg::hermitian_defect(m);
    if herm > STATE_TOL {
        return Err(Error::InvalidDensity(format!(
            "not Hermitian (defect {herm:e})"
        )));
    }
    let tr = linalg::trace(m);
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
    }
    let min = linalg::hermitian_eigenvalues(m)[0];
    if min < PSD_FLOOR {
        return Err(Error::InvalidDensity(format!(
            "negative eigenvalue {min:e}"
        )));
    }
    Ok(())
}

/// `V rho V^dagger`, with `V` the isometry of [`MappedBasis::isometry`].
pub fn map_mixed(rho: &SymmetricDensity) -> Result<BipartiteDensity> {
    validate_density(&rho.matrix)?;
    let basis = MappedBasis::new(rho.n_qubits)?;
    let v = basis.isometry();
    let matrix = &v * &rho.matrix * v.adjoint();
    Ok(BipartiteDensity {
        d: basis.dim(),
        matrix,
    })
}

/// Qudit `phi_i = sqrt(C(N/2,i)) Phi_0^{N/2-i} Phi_1^i` with
/// `M(|Phi>^{(x)N}) = |phi>|phi>`.
pub fn separable_image(phi: &QubitState, n_qubits: usize) -> Result<QuditState> {
    let half = check_even(n_qubits)?;
    let amps = (0..=half)
        .map(|i| {
            binom_f64(half, i as i64).sqrt()
                * phi.a0.powu((half - i) as u32)
                * phi.a1.powu(i as u32)
        })
        .collect();
    QuditState::new(amps)
}

/// Orthogonal projector on a subspace of `C^d (x) C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceProjector {
    d: usize,
    matrix: CMatrix,
}

impl SubspaceProjector {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    /// Eigenvalue count above `1e-8`.
    pub fn rank(&self) -> usize {
        linalg::projector_rank(&self.matrix)
    }

    /// `<psi|P|psi>`
    pub fn expectation(&self, psi: &BipartiteSymmetricState) -> f64 {
        let v = nalgebra::DVector::from_vec(psi.to_vector());
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }

    pub fn apply(&self, psi: &BipartiteSymmetricState) -> BipartiteSymmetricState {
        let v = nalgebra::DVector::from_vec(psi.to_vector());
        let out = &self.matrix * v;
        BipartiteSymmetricState::from_vector(self.d, out.as_slice())
    }
}

/// Swap operator `S|ab> = |ba>` on `C^d (x) C^d`.
pub fn swap_operator(d: usize) -> CMatrix {
    let mut s = CMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            s[(b * d + a, a * d + b)] = Complex64::new(1.0, 0.0);
        }
    }
    s
}

/// `Pi_S = (1 + S)/2`, projector on the full two-qudit symmetric subspace.
pub fn swap_symmetric_projector(d: usize) -> SubspaceProjector {
    let matrix = (linalg::identity(d * d) + swap_operator(d)) / Complex64::new(2.0, 0.0);
    SubspaceProjector { d, matrix }
}

/// `Pi_S~ = sum_k M(D_N^k) M(D_N^k)^dagger`
pub fn image_projector(n_qubits: usize) -> Result<SubspaceProjector> {
    let basis = MappedBasis::new(n_qubits)?;
    let v = basis.isometry();
    Ok(SubspaceProjector {
        d: basis.dim(),
        matrix: &v * v.adjoint(),
    })
}

/// `Pi_S^ = Pi_S - Pi_S~`
pub fn complement_projector(n_qubits: usize) -> Result<SubspaceProjector> {
    let tilde = image_projector(n_qubits)?;
    let full = swap_symmetric_projector(tilde.d);
    Ok(SubspaceProjector {
        d: tilde.d,
        matrix: full.matrix - tilde.matrix,
    })
}

/// Split of a symmetric two-qudit state into its image and complement parts.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub tilde: BipartiteSymmetricState,
    pub hat: BipartiteSymmetricState,
    /// Squared norms of the two parts.
    pub weights: (f64, f64),
}

/// Projects a symmetric state onto the image subspace and its complement.
pub fn decompose(psi: &BipartiteSymmetricState) -> Result<Decomposition> {
    let asym = symmetry_defect(&psi.amps);
    if asym > STATE_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let d = psi.dim();
    if d < 2 {
        return Err(Error::Domain("local dimension must be at least 2".into()));
    }
    let basis = MappedBasis::new(2 * (d - 1))?;
    let tilde = basis.apply(&basis.coefficients(psi));
    let hat = BipartiteSymmetricState {
        amps: &psi.amps - &tilde.amps,
    };
    let weights = (tilde.norm_sqr(), hat.norm_sqr());
    Ok(Decomposition {
        tilde,
        hat,
        weights,
    })
}

/// Serializable view of an amplitude matrix: `[re, im]` per entry, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeMatrix {
    pub d: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&BipartiteSymmetricState> for AmplitudeMatrix {
    fn from(psi: &BipartiteSymmetricState) -> Self {
        let d = psi.dim();
        Self {
            d,
            entries: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| [psi.amps[(i, j)].re, psi.amps[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<&AmplitudeMatrix> for BipartiteSymmetricState {
    type Error = Error;

    fn try_from(m: &AmplitudeMatrix) -> Result<Self> {
        if m.entries.len() != m.d || m.entries.iter().any(|r| r.len() != m.d) {
            return Err(Error::DimensionMismatch {
                expected: m.d,
                got: m.entries.len(),
            });
        }
        let amps = DMatrix::from_fn(m.d, m.d, |i, j| {
            Complex64::new(m.entries[i][j][0], m.entries[i][j][1])
        });
        Self::from_amplitudes(amps)
    }
}

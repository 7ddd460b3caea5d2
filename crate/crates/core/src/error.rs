use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported parity: N = {0} is odd, the mapping is defined for even N only")]
    UnsupportedParity(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("binomial overflow: C({n}, k) exceeds the exact range (n <= {max})")]
    Overflow { n: u32, max: u32 },

    #[error("state is not normalized: squared norm {norm_sqr} (tolerance {tol:e})")]
    NotNormalized { norm_sqr: f64, tol: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("state is not in the two-qudit symmetric subspace (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("state is not in the complementary subspace (residual {0:e})")]
    NotInHatSubspace(f64),

    #[error("no tabulated state for N = {0}")]
    NotTabulated(usize),

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Bracket(_) => 3,
            _ => 2,
        }
    }
}

use thiserror::Error;

/// Failure modes surfaced by the operator layer, the bound engines and the
/// file formats. Anything not covered here is a programming error and panics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("operator is not Hermitian: max asymmetry {asymmetry:.3e} exceeds 1e-12")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPositive { min_eig: f64 },

    #[error("trace is {trace:.12} but must be 1 within 1e-10")]
    TraceNotOne { trace: f64 },

    #[error("expectation value has imaginary part {imag:.3e}; inputs are corrupted")]
    ComplexExpectation { imag: f64 },

    #[error("state vector is not normalized: norm {norm:.12}")]
    NotNormalized { norm: f64 },

    #[error("no bipartite split attached to shape; required for this operation")]
    MissingSplit,

    #[error("infeasible witness coefficients: |X|_inf = {norm:.6} exceeds 1")]
    InfeasibleCoefficients { norm: f64 },

    #[error("optimizer failed: {0}")]
    Optimizer(String),

    #[error("no state in the symmetric family matches c = {c}: lambda = {lambda:.6} outside [0, 1]")]
    SymmetricFamilyInfeasible { c: f64, lambda: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown catalog entry '{0}'")]
    UnknownCatalogEntry(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("report verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced by construction and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entries must be finite")]
    NonFiniteEntries,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("subspace is not consistent under the requested evolution: {0}")]
    Inconsistent(String),

    #[error("operator lies outside the map domain (residual {residual:.3e})")]
    OutsideDomain { residual: f64 },

    #[error("malformed state: {0}")]
    MalformedState(String),

    #[error("reduced equilibrium state is singular (min eigenvalue {0:.3e})")]
    SingularState(f64),

    #[error("vanishing denominator in assignment construction")]
    VanishingDenominator,

    #[error("constructed span is not spanned by states")]
    NotStateSpanned,

    #[error("conditional mutual information {0:.3e} exceeds tolerance")]
    NotMarkov(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown gallery case `{0}`")]
    UnknownCase(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

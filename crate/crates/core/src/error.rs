use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    Dimension(usize, usize),

    #[error("matrix is not Hermitian (largest deviation {0:e})")]
    NotHermitian(f64),

    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("malformed matrix: {0}")]
    Shape(String),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("observable '{0}' is not dichotomic (its square is not the identity)")]
    NotDichotomic(String),

    #[error("unknown observable '{label}' at point '{point}'")]
    UnknownObservable { label: String, point: String },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("instance has {0} observables; exhaustive search is limited to {max}", max = crate::ks::MAX_SEARCH_OBSERVABLES)]
    InstanceTooLarge(usize),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("polynomial degree {0} exceeds the supported maximum of {max}", max = crate::ks::MAX_POLY_DEGREE)]
    PolynomialDegree(usize),

    #[error("atom '{0}' has no truth value")]
    UnboundAtom(String),
}

pub type Result<T> = std::result::Result<T, Error>;

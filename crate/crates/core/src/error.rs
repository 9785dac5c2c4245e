use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate form: eigenvalue {eigenvalue:e} is within tolerance of zero")]
    DegenerateForm { eigenvalue: f64 },

    #[error("gram matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("unexpected signature ({pos},{neg}), wanted ({want_pos},{want_neg})")]
    Signature {
        pos: usize,
        neg: usize,
        want_pos: usize,
        want_neg: usize,
    },

    #[error("null vector: self-pairing {0:e} is zero")]
    NullVector(f64),

    #[error("vectors do not span a negative plane")]
    NotNegativePlane,

    #[error("incidence failure: {0}")]
    Incidence(String),

    #[error("point lies on the singular locus (R = {0:e})")]
    SingularLocus(f64),

    #[error("tangent vector is not horizontal (residual {0:e})")]
    NotHorizontal(f64),

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },

    #[error("series tail bound {tail:e} exceeds tolerance {tol:e}")]
    Truncation { tail: f64, tol: f64 },

    #[error("vector is not regular with respect to the configuration")]
    Regularity,

    #[error("vectors lie in different components")]
    ComponentMismatch,

    #[error("orientation test is ambiguous (det {0:e})")]
    Ambiguous(f64),

    #[error("singular gram matrix")]
    SingularGram,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("basis is not a standard decomposition: {0}")]
    NotStandard(String),

    #[error("endomorphism is not in co(V): {0}")]
    NotConformal(String),

    #[error("ad_D has no integer diagonalization; minimal polynomial (low→high) {minimal_polynomial:?}")]
    Spectrum { minimal_polynomial: Vec<String> },

    #[error("grading violated: {0}")]
    Grading(String),

    #[error("Jacobi identity fails on ({}, {}, {}) = {value}", labels[0], labels[1], labels[2])]
    Jacobi {
        triple: [usize; 3],
        labels: [String; 3],
        value: String,
    },

    #[error("derivation identity fails on pair ({0}, {1}): {2}")]
    Derivation(usize, usize, String),

    #[error("value outside the expected subspace: {0}")]
    NotInSpan(String),

    #[error("tensor lacks curvature symmetries: {0}")]
    RawTensor(String),

    #[error("tensor is not a Weyl-type tensor: {0}")]
    NotWeyl(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error reflects malformed input rather than a failed invariant.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. } | Error::Invalid(_) | Error::Parse(_) | Error::Json(_)
        )
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

use thiserror::Error;

/// Errors produced by the bound pipelines.
#[derive(Debug, Error)]
pub enum Error {
    /// Coefficient extraction did not reach the requested accuracy before the
    /// sample budget ran out.
    #[error(
        "series does not decay at requested precision (tail {tail:.3e} after {samples} samples)"
    )]
    NoDecay { tail: f64, samples: usize },

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("polynomials share a root (relative resultant {resultant:.3e})")]
    NotCoprime { resultant: f64 },

    #[error("polynomial has a root on the unit circle (|z| = {modulus})")]
    RootOnCircle { modulus: f64 },

    #[error("zero or pole outside the open unit disk (|z| = {modulus})")]
    OutsideDisk { modulus: f64 },

    #[error("trigonometric polynomial is negative on the circle (min {min:.3e})")]
    NotNonnegative { min: f64 },

    #[error("circle roots could not be paired for spectral factorization")]
    UnpairedRoots,

    #[error("eigenvalue backend failed: {0}")]
    Eigen(String),

    #[error("cone solver stalled: {0}")]
    SolverStall(String),

    #[error(
        "constraint refinement failed to reduce violation ({violation:.3e} after {rounds} rounds)"
    )]
    RefinementStall { violation: f64, rounds: usize },

    #[error("all restarts diverged (best partial error {best:.6e})")]
    Diverged { best: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid function spec: {0}")]
    Spec(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Wraps the error with a pipeline-stage label.
    pub fn with_context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

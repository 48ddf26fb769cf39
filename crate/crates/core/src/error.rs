use alloc::string::String;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data violates a structural invariant (spectrum sum, sign, symmetry).
    #[error("validation error: {0}")]
    Validation(String),

    /// The finite basis misses more norm than the caller tolerates.
    #[error("basis truncation deficit {deficit:.3e} exceeds {limit:.1e}; increase the basis size or quadrature order")]
    Truncation { deficit: f64, limit: f64 },

    /// A wavefunction handed to the coefficient builder is not normalized.
    #[error("amplitude is not normalized: quadrature norm {norm:.12}")]
    NotNormalized { norm: f64 },

    /// An iterative routine ran out of iterations.
    #[error("{routine} did not converge: {detail}")]
    NonConvergence { routine: &'static str, detail: String },

    /// The overlap matrix stayed ill-conditioned after basis reduction.
    #[error("ill-conditioned overlap matrix (condition {condition:.3e})")]
    IllConditioned { condition: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::Error::Domain(alloc::format!($($arg)*))
    };
}

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::Validation(alloc::format!($($arg)*))
    };
}

pub(crate) use domain;
pub(crate) use invalid;

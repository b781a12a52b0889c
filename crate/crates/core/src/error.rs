use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph6 parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },

    #[error("graph on {n} vertices does not fit the single-byte graph6 header (n <= 62)")]
    UnsupportedSize { n: usize },

    #[error("refusing to enumerate labeled graphs on {n} vertices (limit is {limit})")]
    SizeLimit { n: usize, limit: usize },

    #[error("integer overflow while counting closed walks of length {length}")]
    Overflow { length: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("odd girth violation: shortest odd cycle has length {found}, but k = {required} requires odd girth >= {required}")]
    GirthViolation { found: usize, required: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("sequence length {n} is below the required length {required}")]
    SizeTooSmall { n: usize, required: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_odd_k(k: usize, min: usize) -> Result<()> {
    if k.is_multiple_of(2) || k < min {
        return Err(Error::InvalidArgument(format!(
            "k must be an odd integer >= {min}, got {k}"
        )));
    }
    Ok(())
}

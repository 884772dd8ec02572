use thiserror::Error;

/// Errors raised by the rumor laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to converge or produced an inconsistent result.
    #[error("numeric fault: {0}")]
    NumericFault(String),

    #[error("invalid vertex: {0}")]
    InvalidVertex(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn ensure_degree(d: u32, min: u32) -> Result<()> {
    if d < min {
        return Err(domain(format!("d must be >= {min}, got {d}")));
    }
    Ok(())
}

pub(crate) fn ensure_probability(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(domain(format!("p must lie in (0, 1], got {p}")));
    }
    Ok(())
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular boundary: {0}")]
    Boundary(String),

    #[error("division by zero: {0}")]
    Division(String),

    #[error("parameter c = {c} is at or near a pole of the hypergeometric series")]
    Pole { c: String },

    #[error("hypergeometric series did not converge after {terms} terms (partial sum = {partial_re:.6e} + {partial_im:.6e}i, last |term| = {last_term_abs:.3e})")]
    Convergence { terms: usize, partial_re: f64, partial_im: f64, last_term_abs: f64 },

    #[error("degenerate matching system: |det| = {det_abs:.3e} below {threshold:.3e}")]
    DegenerateMatching { det_abs: f64, threshold: f64 },

    #[error("integration failed at t = {t}: {reason} after {steps} steps")]
    Integration { t: f64, steps: usize, reason: String },

    #[error("amplitude extraction is ill-conditioned: condition number {condition:.3e}")]
    Extraction { condition: f64 },

    #[error("usage error: {0}")]
    Usage(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

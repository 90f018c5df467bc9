use thiserror::Error;

/// Errors surfaced by the numerical kernels.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested operation is not defined for this subordinator model.
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    /// An adaptive quadrature or inversion failed to meet its tolerance.
    #[error("nonconvergence in {what}: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        tolerance: f64,
    },

    /// An integral was detected to diverge (reported as an outcome, not a bug).
    #[error("divergent integral: {0}")]
    Divergence(String),

    /// Two inversion orders disagree beyond tolerance.
    #[error("oscillation in {what}: N vs 2N estimates differ by {estimate:.3e}")]
    Oscillation { what: &'static str, estimate: f64 },

    /// Floating-point precision exhausted (Gaver-Stehfest digit collapse, overflow guards).
    #[error("precision loss: {0}")]
    Precision(String),

    /// Sampled time grid too coarse for the requested operation.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// Subordinator paths could not cover the target times after repeated extension.
    #[error("horizon exhausted after {attempts} doublings (target t = {target})")]
    HorizonExhausted { attempts: usize, target: f64 },

    /// A quasi-Monte Carlo estimate whose standard error exceeds the allowed bound.
    #[error("QMC variance too large: se {se:.3e} exceeds {bound:.3e} of value")]
    QmcVariance { se: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

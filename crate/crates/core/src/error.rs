use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("outside the domain of validity: {0}")]
    Domain(String),

    #[error("matrix of size {n} exceeds the {precision} precision cap of {cap}")]
    PrecisionEscalationRequired {
        n: usize,
        cap: usize,
        precision: &'static str,
    },

    #[error("generating function has a pole at xi = 2")]
    Pole,

    #[error("recurrence coefficient r_{n} = {value:e} is too close to zero to divide by")]
    SmallDivisor { n: usize, value: f64 },

    #[error("factor 1 - r_{n}^2 vanishes")]
    Degenerate { n: usize },

    #[error("square-root branch is ambiguous: {0}")]
    Branch(String),

    #[error("{m} quadrature nodes requested, cap is {cap}")]
    Resource { m: usize, cap: usize },

    #[error("integration step collapsed near t = {t}")]
    Singularity { t: f64 },

    #[error("trajectory lost accuracy after t = {last_t}")]
    Instability { last_t: f64 },

    #[error("slow convergence: {0}")]
    SlowConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

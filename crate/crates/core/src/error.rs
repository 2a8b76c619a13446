use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a constitutive function.
    #[error("{quantity} out of domain: {value}")]
    Domain { quantity: &'static str, value: f64 },

    #[error("rejected input: {0}")]
    RejectedInput(String),

    #[error("no two-shock solution: {0}")]
    NoTwoShock(String),

    #[error("infeasible closure: {0}")]
    InfeasibleClosure(String),

    /// The oscillator right-hand side has no value at the origin.
    #[error("g is undefined at ({x}, {xdot})")]
    UndefinedPoint { x: f64, xdot: f64 },

    #[error("trajectory left the exterior domain at t = {t} (x = {x}, xdot = {xdot})")]
    IntegrationDomain { t: f64, x: f64, xdot: f64 },

    #[error("cannot dominate profile: {0}")]
    CannotDominate(String),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

impl Error {
    pub(crate) fn rejected(msg: impl Into<String>) -> Self {
        Error::RejectedInput(msg.into())
    }
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid raw parameter `{name}` = {value}: must be finite and > 0")]
    InvalidRaw { name: &'static str, value: f64 },

    #[error("beta ({beta}) must exceed theta ({theta}) for a positive gamma")]
    NonPositiveGamma { beta: f64, theta: f64 },

    #[error("invalid parameters r = {r}, gamma = {gamma}: both must be finite and > 0")]
    InvalidParams { r: f64, gamma: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("outside the domain: {0}")]
    DomainError(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("{name} = {value} is out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("multipliers are not complex: a^2 - 4b = {discriminant}")]
    NotComplexRegime { discriminant: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

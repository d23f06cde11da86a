use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function}: argument {value} outside the domain {domain}")]
    Domain {
        function: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error("{what} did not converge: {detail}")]
    NonConvergent { what: &'static str, detail: String },

    #[error("terms grow in magnitude; the sum diverges")]
    Divergent,

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("series have different q or degree caps")]
    Incompatible,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid policy: {0}")]
    Policy(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

/// Errors shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("floor certification for {base}^({c}) failed beyond {max_bits} bits of precision")]
    PrecisionOverflow { base: u64, c: String, max_bits: u32 },

    #[error("range [{lo}, {hi}) needs {needed} bytes, over the {budget}-byte sieve budget")]
    RangeTooLarge {
        lo: u64,
        hi: u64,
        needed: u64,
        budget: u64,
    },

    #[error("malformed exponent `{input}`: {reason}")]
    ExponentParse { input: String, reason: String },

    #[error("exponent {0} must be positive")]
    NonPositiveExponent(String),

    #[error("exponent {0} must not be an integer here")]
    IntegerExponent(String),

    #[error("{path}:{line}: cannot parse zero ordinate: {reason}")]
    ZeroTableParse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}:{line}: zero ordinates must increase ({value} after {previous})")]
    ZeroTableOrder {
        path: PathBuf,
        line: usize,
        value: f64,
        previous: f64,
    },

    #[error("zero table `{source_name}` ends at gamma = {max_gamma}, below T = {t}")]
    ZeroTableExhausted {
        source_name: String,
        t: f64,
        max_gamma: f64,
    },

    #[error("{0}")]
    Domain(String),

    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

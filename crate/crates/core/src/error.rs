use std::fmt;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("branch count b={0} is odd; the product of an odd number of transpositions is never the identity")]
    OddBranchCount(u32),

    #[error("b={b} < 2k-2={min} for k={k}: the cover would have negative genus")]
    NegativeGenus { k: u32, b: u32, min: u32 },

    #[error("degree {k} exceeds the configured capacity bound {bound}")]
    Capacity { k: usize, bound: usize },

    #[error("invariant violation: {what}{}", Witness(.witness))]
    InvariantViolation { what: String, witness: Option<String> },

    #[error("search exhausted at ceiling {ceiling} without meeting the target")]
    SearchExhausted {
        ceiling: u64,
        /// Sampled `(degree, ratio)` pairs along the sweep.
        trajectory: Vec<(u64, String)>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache I/O: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invariant(what: impl Into<String>) -> Self {
        Error::InvariantViolation {
            what: what.into(),
            witness: None,
        }
    }

    pub(crate) fn invariant_with(what: impl Into<String>, witness: impl fmt::Display) -> Self {
        Error::InvariantViolation {
            what: what.into(),
            witness: Some(witness.to_string()),
        }
    }
}

struct Witness<'a>(&'a Option<String>);

impl fmt::Display for Witness<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(w) => write!(f, " (witness: {w})"),
            None => Ok(()),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

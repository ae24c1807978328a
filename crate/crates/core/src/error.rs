use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("connection set is empty")]
    EmptyConnectionSet,

    #[error("element {element} is not in the ambient group")]
    OutsideAmbient { element: String },

    /// A guard bound on an exhaustive computation was exceeded. Raised before
    /// any work is done, so results are never silently truncated.
    #[error("{what} too large: {actual} exceeds the guard bound {limit}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("isomorphism search exceeded the node budget of {limit}")]
    SearchLimit { limit: u64 },

    #[error("unsupported route: {0}")]
    UnsupportedRoute(String),

    /// Two routes that must agree did not, or a numeric residue exceeded its
    /// alarm threshold.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True for the resource-style failures (guards and search budgets).
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::SearchLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

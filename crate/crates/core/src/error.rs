use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// The variants map one-to-one onto the CLI exit classes: malformed input,
/// inputs that are not similar enough for the requested parameters, a weave
/// step that found no admissible element, and exhausted resource budgets.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("similarity error: {0}")]
    Similarity(String),

    #[error("infeasible: no element of type {wanted} at distance > {limit} from {exclusion} excluded elements ({context})")]
    Infeasible {
        wanted: String,
        limit: usize,
        exclusion: usize,
        context: String,
    },

    #[error("infeasible: {0}")]
    InfeasibleSplice(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn similarity(msg: impl Into<String>) -> Self {
        Error::Similarity(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// True for the errors that mean "these parameters cannot produce a weave"
    /// rather than "the input is malformed".
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Similarity(_) | Error::Infeasible { .. } | Error::InfeasibleSplice(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

use crate::config::ConfigError;
use crate::model::ModelError;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Config(#[from] ConfigError),

    /// An exact enumeration was asked to cover more stations than its guard allows.
    #[error("{context} supports at most {limit} stations, got {n}")]
    TooManyStations {
        context: &'static str,
        n: usize,
        limit: usize,
    },

    /// Grid search would exceed the policy-evaluation budget.
    #[error("grid search needs {evaluations} policy evaluations, over the {limit} limit; increase the step")]
    GridBudget { evaluations: u128, limit: u64 },

    /// The ratio rule only orders stations under a pure series or parallel structure.
    #[error("ratio sequencing requires a pure series or parallel structure; use sequence enumeration for nested structures")]
    NestedStructure,

    #[error("frontier must not be empty")]
    EmptyFrontier,

    #[error("non-finite input: {what}")]
    NonFinite { what: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

//! Threshold optimizers and the weight sweep that drives them.

pub mod ga;
pub mod grid;
pub mod nelder_mead;
pub mod sweep;

pub use ga::{ga_minimize, GaParams};
pub use grid::{grid_search, GridParams, MAX_GRID_EVALUATIONS};
pub use nelder_mead::{local_minimize, LocalResult, LocalSearchParams};
pub use sweep::{default_weights, weight_range, weight_sweep, SweepMethod, SweepPoint};

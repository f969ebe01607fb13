//! Inspection policy optimization for sequential screening systems.
//!
//! A stream of containers passes a set of sensor stations. Each station
//! reads a noisy Gaussian signal, compares it against a threshold, and
//! votes; a Boolean rule over the votes (ANY, ALL, or a nested mix)
//! accepts or rejects the container. Inspection stops as soon as the votes
//! collected so far decide the outcome, so the visiting order drives the
//! expected cost and time while the thresholds drive the error rates.
//!
//! A policy is a visit order plus one threshold per station. This crate
//! evaluates policies exactly ([`evaluation`]), orders stations optimally
//! for fixed thresholds ([`sequencing`]), optimizes thresholds by grid
//! search, Nelder-Mead, or a genetic algorithm swept over cost/time
//! weights ([`solvers`]), extracts Pareto frontiers ([`pareto`]), and
//! cross-checks everything by seeded Monte Carlo ([`simulation`]).
//!
//! The `poe-inspect` binary drives all of this from a TOML config
//! ([`config`]) and writes frontier CSVs ([`runner`]).

// Reference constants (ported erf coefficients, frozen test values) keep
// their full published digits; rounding them to f64 is the compiler's job.
#![allow(clippy::excessive_precision)]

pub mod config;
pub mod evaluation;
pub mod model;
pub mod pareto;
pub mod runner;
pub mod sequencing;
pub mod simulation;
pub mod solvers;
pub mod stats;

mod error;

pub use error::Error;

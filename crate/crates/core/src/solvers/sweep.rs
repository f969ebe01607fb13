//! Scalarization sweep: one threshold optimization per weight pair, with
//! the visit order collapsed out by the ratio rule (or enumeration).
//!
//! Sweeps run in parallel across weights. Each weight's work is fully
//! self-contained and deterministically seeded, and results are collected
//! in weight order, so output is identical whatever the worker count.

use rayon::prelude::*;

use crate::evaluation::Evaluation;
use crate::model::{ModelError, Policy, SystemModel, WeightPair};
use crate::sequencing;
use crate::solvers::ga::{ga_minimize, GaParams};
use crate::solvers::grid::{grid_search, GridParams};
use crate::solvers::nelder_mead::{local_minimize, LocalSearchParams};
use crate::Error;

/// Threshold optimizer to run for each weight.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepMethod {
    Grid(GridParams),
    Local(LocalSearchParams),
    Ga(GaParams),
}

/// Best policy found for one weight pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub weight: WeightPair,
    pub policy: Policy,
    pub evaluation: Evaluation,
}

/// The standard sweep `w1 = 0, 0.004, ..., 1` (251 pairs).
pub fn default_weights() -> Vec<WeightPair> {
    weight_range(0.0, 0.004, 1.0).expect("valid range")
}

/// Weight pairs `w1 = start, start + step, ...` through `end`, with
/// `w2 = 1 - w1`. The endpoint snaps onto `end` exactly; `start == end`
/// yields the single pair.
pub fn weight_range(start: f64, step: f64, end: f64) -> Result<Vec<WeightPair>, ModelError> {
    if !(start.is_finite() && end.is_finite() && (0.0..=1.0).contains(&start) && end <= 1.0) {
        return Err(ModelError::new(
            "weights",
            format!("range [{start}, {end}] must sit inside [0, 1]"),
        ));
    }
    if end < start {
        return Err(ModelError::new(
            "weights",
            format!("range start {start} exceeds end {end}"),
        ));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(ModelError::new(
            "weights",
            format!("step must be positive, got {step}"),
        ));
    }
    let m = ((end - start) / step + 1e-9).floor() as usize;
    (0..=m)
        .map(|k| WeightPair::from_cost_weight((start + k as f64 * step).min(end)))
        .collect()
}

/// Optimizes thresholds for every weight pair and returns one policy per
/// weight, in input order.
pub fn weight_sweep(
    model: &SystemModel,
    method: &SweepMethod,
    weights: &[WeightPair],
) -> Result<Vec<SweepPoint>, Error> {
    if weights.is_empty() {
        return Err(ModelError::new("weights", "at least one weight pair required").into());
    }
    match method {
        SweepMethod::Grid(params) => {
            // One shared grid pass; each weight just re-reads the argmin.
            let evaluated = grid_search(model, params)?;
            let points = weights
                .par_iter()
                .map(|&weight| {
                    let mut best = 0;
                    let mut best_f = f64::INFINITY;
                    for (i, (_, eval)) in evaluated.iter().enumerate() {
                        let f = weight.w1() * eval.total_cost + weight.w2() * eval.total_time;
                        if f < best_f {
                            best_f = f;
                            best = i;
                        }
                    }
                    let (policy, evaluation) = evaluated[best].clone();
                    SweepPoint {
                        weight,
                        policy,
                        evaluation,
                    }
                })
                .collect();
            Ok(points)
        }
        SweepMethod::Local(params) => {
            sequencing::ensure_sequenceable(model)?;
            let (lo, hi) = model.threshold_box();
            let n = model.station_count();
            params.validate(n, (lo, hi)).map_err(Error::Model)?;
            let midpoint = vec![(lo + hi) / 2.0; n];
            let starts: &[Vec<f64>] = if params.initial_thresholds.is_empty() {
                std::slice::from_ref(&midpoint)
            } else {
                &params.initial_thresholds
            };
            weights
                .par_iter()
                .map(|&weight| {
                    let objective = |t: &[f64]| {
                        sequencing::collapsed_fitness(model, t, weight)
                            .expect("model checked before sweep")
                    };
                    let mut best: Option<crate::solvers::nelder_mead::LocalResult> = None;
                    for start in starts {
                        let result = local_minimize(objective, start, (lo, hi), params);
                        if best.as_ref().is_none_or(|b| result.value < b.value) {
                            best = Some(result);
                        }
                    }
                    let best = best.expect("at least one start");
                    finish_point(model, &best.thresholds, weight)
                })
                .collect()
        }
        SweepMethod::Ga(params) => {
            sequencing::ensure_sequenceable(model)?;
            params.validate().map_err(Error::Model)?;
            let n = model.station_count();
            weights
                .par_iter()
                .enumerate()
                .map(|(k, &weight)| {
                    let objective = |t: &[f64]| {
                        sequencing::collapsed_fitness(model, t, weight)
                            .expect("model checked before sweep")
                    };
                    let per_weight = GaParams {
                        seed: derive_seed(params.seed, k as u64),
                        ..params.clone()
                    };
                    let (thresholds, _) =
                        ga_minimize(objective, n, model.threshold_box(), &per_weight)?;
                    finish_point(model, &thresholds, weight)
                })
                .collect()
        }
    }
}

fn finish_point(
    model: &SystemModel,
    thresholds: &[f64],
    weight: WeightPair,
) -> Result<SweepPoint, Error> {
    let (policy, evaluation) = sequencing::best_policy(model, thresholds, weight)?;
    Ok(SweepPoint {
        weight,
        policy,
        evaluation,
    })
}

/// SplitMix64 finalizer over `base ^ (index * golden)`: spreads one user
/// seed into uncorrelated per-weight seeds.
fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

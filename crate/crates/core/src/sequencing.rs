//! Optimal visiting order for a fixed threshold vector.
//!
//! Pure series and parallel rules admit an exact greedy order: sort
//! stations by weighted per-visit burden over the probability that the
//! visit ends the inspection. Nested rules fall back to exhaustive
//! permutation search.

use itertools::Itertools;

use crate::evaluation::{self, Evaluation};
use crate::model::{Policy, PureStructure, SystemModel, WeightPair};
use crate::stats;
use crate::Error;

/// Guard for exhaustive permutation search (n! sequences).
pub const MAX_ENUMERATED_STATIONS: usize = 8;

/// Optimal visit order for a pure series or parallel structure.
///
/// Stations are sorted ascending by `(w1 * c_i + w2 * t_i) / s_i`, where
/// `s_i` is the probability that visiting station `i` stops the chain:
/// `1 - p_i` for a series rule, `p_i` for a parallel rule, with `p_i` the
/// marginal pass probability. A zero stop probability sorts last (the
/// station can never end the inspection); exact ties break toward the
/// lower station index.
pub fn ratio_sequence(
    model: &SystemModel,
    thresholds: &[f64],
    weights: WeightPair,
) -> Result<Vec<usize>, Error> {
    let n = model.station_count();
    let kind = model
        .structure
        .pure_structure(n)
        .ok_or(Error::NestedStructure)?;
    let mut keyed: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let station = &model.stations[i];
            let burden = weights.w1() * station.cost
                + weights.w2() * evaluation::station_time(station, thresholds[i]);
            let pass = stats::pass_probability(station, thresholds[i], model.prior).value();
            let stop = match kind {
                PureStructure::Series => 1.0 - pass,
                PureStructure::Parallel => pass,
            };
            let ratio = if stop == 0.0 {
                f64::INFINITY
            } else {
                burden / stop
            };
            (ratio, i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(keyed.into_iter().map(|(_, i)| i).collect())
}

/// Exhaustive minimum over all n! visit orders.
///
/// Returns the best `(sequence, fitness)`; among exact ties the
/// lexicographically smallest sequence wins. Guarded by
/// [`MAX_ENUMERATED_STATIONS`].
pub fn enumerate_sequences(
    model: &SystemModel,
    thresholds: &[f64],
    weights: WeightPair,
) -> Result<(Vec<usize>, f64), Error> {
    let n = model.station_count();
    if n > MAX_ENUMERATED_STATIONS {
        return Err(Error::TooManyStations {
            context: "sequence enumeration",
            n,
            limit: MAX_ENUMERATED_STATIONS,
        });
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for sequence in (0..n).permutations(n) {
        let policy = Policy::new(sequence, thresholds.to_vec());
        let f = evaluation::fitness(model, &policy, weights)?;
        // Strict < keeps the first (lexicographically smallest) argmin.
        if best.as_ref().is_none_or(|(_, fb)| f < *fb) {
            best = Some((policy.sequence, f));
        }
    }
    Ok(best.expect("at least one station"))
}

/// Best visit order and its fitness for a fixed threshold vector.
///
/// Pure structures use the ratio rule with closed-form chain fitness;
/// nested structures fall back to [`enumerate_sequences`].
pub fn optimal_sequence(
    model: &SystemModel,
    thresholds: &[f64],
    weights: WeightPair,
) -> Result<(Vec<usize>, f64), Error> {
    match model.structure.pure_structure(model.station_count()) {
        Some(kind) => {
            let sequence = ratio_sequence(model, thresholds, weights)?;
            let (fa, fr) = evaluation::system_error_probabilities(model, thresholds);
            let penalty = evaluation::misclassification_cost(model, fa, fr);
            let (cost, time) = match kind {
                PureStructure::Series => evaluation::series_cost_time(model, thresholds, &sequence),
                PureStructure::Parallel => {
                    evaluation::parallel_cost_time(model, thresholds, &sequence)
                }
            };
            let fitness = weights.w1() * (penalty + cost) + weights.w2() * time;
            Ok((sequence, fitness))
        }
        None => enumerate_sequences(model, thresholds, weights),
    }
}

/// Fitness of the threshold vector under its best visit order. This is the
/// objective the threshold optimizers minimize.
pub fn collapsed_fitness(
    model: &SystemModel,
    thresholds: &[f64],
    weights: WeightPair,
) -> Result<f64, Error> {
    optimal_sequence(model, thresholds, weights).map(|(_, f)| f)
}

/// Full policy at the best visit order, with its exact evaluation.
pub fn best_policy(
    model: &SystemModel,
    thresholds: &[f64],
    weights: WeightPair,
) -> Result<(Policy, Evaluation), Error> {
    let (sequence, _) = optimal_sequence(model, thresholds, weights)?;
    let policy = Policy::new(sequence, thresholds.to_vec());
    let eval = evaluation::evaluate_policy(model, &policy)?;
    Ok((policy, eval))
}

/// Confirms sequencing can run for this model: valid, and either pure or
/// small enough to enumerate.
pub(crate) fn ensure_sequenceable(model: &SystemModel) -> Result<(), Error> {
    model.validate()?;
    let n = model.station_count();
    if model.structure.pure_structure(n).is_none() && n > MAX_ENUMERATED_STATIONS {
        return Err(Error::TooManyStations {
            context: "sequence enumeration",
            n,
            limit: MAX_ENUMERATED_STATIONS,
        });
    }
    Ok(())
}

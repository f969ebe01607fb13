//! Policy evaluation.
//!
//! Error probabilities condition on the container state exactly: station
//! decisions are independent given the state, so PFA/PFR are product folds
//! over the structure. Expected inspection cost and time use the chain
//! model of the underlying formulas: each station's decision is treated as
//! an independent event with its prior-marginal flag probability, and the
//! walk stops as soon as the collected decisions pin down the system
//! output. Cross-station correlation induced by a shared container state
//! is deliberately not modeled (it is O(prior) and vanishes at
//! screening-scale priors); the Monte Carlo module draws from the matching
//! per-station mixture so both routes estimate the same quantities.

use crate::model::{Policy, Station, SystemModel};
use crate::stats::{self, Probability};
use crate::Error;

/// Guard for the exact outcome enumeration (2^n prefixes worst case).
pub const MAX_EVALUATION_STATIONS: usize = 20;

/// Everything the exact evaluator knows about one policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// P(system accepts | container suspect).
    pub false_accept: Probability,
    /// P(system rejects | container clean).
    pub false_reject: Probability,
    /// Expected misclassification penalty per container.
    pub misclassification_cost: f64,
    /// Expected station operating cost per container.
    pub inspection_cost: f64,
    /// `misclassification_cost + inspection_cost`.
    pub total_cost: f64,
    /// Expected inspection time per container.
    pub total_time: f64,
}

/// Dwell time `a * exp(b * T)` of one station at threshold `T`.
pub fn station_time(station: &Station, threshold: f64) -> f64 {
    station.time_a * (station.time_b * threshold).exp()
}

/// System-level `(false_accept, false_reject)` for one threshold vector.
///
/// Station decisions are conditionally independent given the container
/// state, so each probability is a product-form fold over the structure.
pub fn system_error_probabilities(
    model: &SystemModel,
    thresholds: &[f64],
) -> (Probability, Probability) {
    let flag_clean: Vec<f64> = model
        .stations
        .iter()
        .zip(thresholds)
        .map(|(s, &t)| stats::type1_error(s, t).value())
        .collect();
    let flag_suspect: Vec<f64> = model
        .stations
        .iter()
        .zip(thresholds)
        .map(|(s, &t)| stats::type2_error(s, t).complement().value())
        .collect();
    let false_reject = model.structure.reject_probability(&flag_clean);
    let false_accept = 1.0 - model.structure.reject_probability(&flag_suspect);
    (
        Probability::clamped(false_accept),
        Probability::clamped(false_reject),
    )
}

/// Expected misclassification penalty:
/// `prior * P(FA) * c_FA + (1 - prior) * P(FR) * c_FR`.
pub fn misclassification_cost(
    model: &SystemModel,
    false_accept: Probability,
    false_reject: Probability,
) -> f64 {
    model.prior * false_accept.value() * model.cost_false_accept
        + (1.0 - model.prior) * false_reject.value() * model.cost_false_reject
}

/// Evaluates a policy exactly.
///
/// The model is assumed valid; the policy is checked. Fails for more than
/// [`MAX_EVALUATION_STATIONS`] stations.
pub fn evaluate_policy(model: &SystemModel, policy: &Policy) -> Result<Evaluation, Error> {
    debug_assert!(model.validate().is_ok());
    policy.validate(model)?;
    let n = model.station_count();
    if n > MAX_EVALUATION_STATIONS {
        return Err(Error::TooManyStations {
            context: "policy evaluation",
            n,
            limit: MAX_EVALUATION_STATIONS,
        });
    }

    let (false_accept, false_reject) = system_error_probabilities(model, &policy.thresholds);
    let misclassification = misclassification_cost(model, false_accept, false_reject);
    let (inspection_cost, total_time) = expected_cost_time(model, policy);

    Ok(Evaluation {
        false_accept,
        false_reject,
        misclassification_cost: misclassification,
        inspection_cost,
        total_cost: misclassification + inspection_cost,
        total_time,
    })
}

/// Weighted objective `w1 * total_cost + w2 * total_time`.
pub fn fitness(
    model: &SystemModel,
    policy: &Policy,
    weights: crate::model::WeightPair,
) -> Result<f64, Error> {
    let eval = evaluate_policy(model, policy)?;
    Ok(weights.w1() * eval.total_cost + weights.w2() * eval.total_time)
}

/// Expected inspection cost and time under short-circuit stopping.
///
/// Walks the binary tree of decision outcomes in visit order, weighting each
/// prefix by the product of per-station marginal decision probabilities. A
/// station's cost and time accrue whenever it is reached; a branch ends once
/// the partial decisions determine the system output. On pure chains this
/// telescopes to the running-product closed forms, so the two routes agree
/// to the last bit up to summation order.
fn expected_cost_time(model: &SystemModel, policy: &Policy) -> (f64, f64) {
    let n = model.station_count();
    let pass: Vec<f64> = model
        .stations
        .iter()
        .zip(&policy.thresholds)
        .map(|(s, &t)| stats::pass_probability(s, t, model.prior).value())
        .collect();
    let times: Vec<f64> = model
        .stations
        .iter()
        .zip(&policy.thresholds)
        .map(|(s, &t)| station_time(s, t))
        .collect();

    struct Walk<'a> {
        model: &'a SystemModel,
        sequence: &'a [usize],
        pass: &'a [f64],
        times: &'a [f64],
        decisions: Vec<Option<bool>>,
        cost: f64,
        time: f64,
    }

    impl Walk<'_> {
        /// `weight`: probability of the decision prefix leading here.
        fn visit(&mut self, pos: usize, weight: f64) {
            let station = self.sequence[pos];
            self.cost += weight * self.model.stations[station].cost;
            self.time += weight * self.times[station];
            for decision in [false, true] {
                let branch = if decision {
                    weight * (1.0 - self.pass[station])
                } else {
                    weight * self.pass[station]
                };
                if branch == 0.0 {
                    continue;
                }
                self.decisions[station] = Some(decision);
                if self
                    .model
                    .structure
                    .evaluate_partial(&self.decisions)
                    .is_none()
                {
                    self.visit(pos + 1, branch);
                }
                self.decisions[station] = None;
            }
        }
    }

    let mut walk = Walk {
        model,
        sequence: &policy.sequence,
        pass: &pass,
        times: &times,
        decisions: vec![None; n],
        cost: 0.0,
        time: 0.0,
    };
    walk.visit(0, 1.0);
    (walk.cost, walk.time)
}

/// Closed-form expected inspection cost and time for a pure series (ANY)
/// rule: station `i` in the chain is reached iff every earlier station
/// passed, so the reach probability is a running product of pass
/// probabilities.
pub fn series_cost_time(model: &SystemModel, thresholds: &[f64], sequence: &[usize]) -> (f64, f64) {
    chain_cost_time(model, thresholds, sequence, true)
}

/// Closed-form twin of [`series_cost_time`] for a pure parallel (ALL) rule:
/// the chain continues only while stations flag, so reach probabilities
/// multiply the flag probabilities instead.
pub fn parallel_cost_time(
    model: &SystemModel,
    thresholds: &[f64],
    sequence: &[usize],
) -> (f64, f64) {
    chain_cost_time(model, thresholds, sequence, false)
}

fn chain_cost_time(
    model: &SystemModel,
    thresholds: &[f64],
    sequence: &[usize],
    continue_on_pass: bool,
) -> (f64, f64) {
    let mut reach = 1.0;
    let mut cost = 0.0;
    let mut time = 0.0;
    for &i in sequence {
        let station = &model.stations[i];
        cost += reach * station.cost;
        time += reach * station_time(station, thresholds[i]);
        let pass = stats::pass_probability(station, thresholds[i], model.prior).value();
        reach *= if continue_on_pass { pass } else { 1.0 - pass };
    }
    (cost, time)
}

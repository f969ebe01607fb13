//! Monte Carlo validation of the analytic evaluator.
//!
//! Three stratified passes: one under the prior for cost and time, one on
//! all-clean containers for the false-reject rate, one on all-suspect
//! containers for the false-accept rate. Every sample owns a dedicated RNG
//! stream derived from (pass, sample index), and partial sums are reduced
//! in fixed chunk order, so results depend only on the seed, never on the
//! worker count.
//!
//! The prior pass draws the container state independently at every visited
//! station before drawing that station's reading, so station decisions are
//! independent Bernoulli events with their prior-mixed marginal rates: the
//! exact distribution whose expectations the chain closed forms compute.
//! (A single shared state per container would add cross-station
//! correlation of order prior * (1 - prior) that the chain model
//! deliberately ignores.) Error-rate passes condition on the state, where
//! the analytic probabilities are exact either way.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::evaluation;
use crate::model::{ModelError, Policy, SystemModel};
use crate::Error;

/// Samples per chunk; fixed so the summation tree never changes.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    /// Estimated P(accept | suspect), from the all-suspect pass.
    pub false_accept: Estimate,
    /// Estimated P(reject | clean), from the all-clean pass.
    pub false_reject: Estimate,
    /// Mean inspection cost per container under the prior.
    pub mean_cost: Estimate,
    /// Mean inspection time per container under the prior.
    pub mean_time: Estimate,
    /// Samples drawn in each of the three passes.
    pub samples_per_pass: u64,
    pub seed: u64,
}

/// Simulates `n_samples` containers through the policy, three times over
/// (once per estimator family).
pub fn simulate(
    model: &SystemModel,
    policy: &Policy,
    n_samples: u64,
    seed: u64,
) -> Result<SimulationResult, Error> {
    debug_assert!(model.validate().is_ok());
    policy.validate(model)?;
    if n_samples == 0 {
        return Err(ModelError::new("n_samples", "at least one sample required").into());
    }

    let base = ChaCha8Rng::seed_from_u64(seed);
    let prior_pass = run_pass(model, policy, &base, n_samples, Pass::Prior);
    let clean_pass = run_pass(model, policy, &base, n_samples, Pass::AllClean);
    let suspect_pass = run_pass(model, policy, &base, n_samples, Pass::AllSuspect);

    let n = n_samples as f64;
    Ok(SimulationResult {
        false_accept: proportion(suspect_pass.accepts, n_samples),
        false_reject: proportion(clean_pass.rejects, n_samples),
        mean_cost: mean(prior_pass.cost_sum, prior_pass.cost_sumsq, n),
        mean_time: mean(prior_pass.time_sum, prior_pass.time_sumsq, n),
        samples_per_pass: n_samples,
        seed,
    })
}

#[derive(Clone, Copy)]
enum Pass {
    Prior,
    AllClean,
    AllSuspect,
}

impl Pass {
    fn stream_tag(self) -> u64 {
        match self {
            Pass::Prior => 0,
            Pass::AllClean => 1,
            Pass::AllSuspect => 2,
        }
    }
}

#[derive(Default, Clone, Copy)]
struct PassSums {
    cost_sum: f64,
    cost_sumsq: f64,
    time_sum: f64,
    time_sumsq: f64,
    rejects: u64,
    accepts: u64,
}

fn run_pass(
    model: &SystemModel,
    policy: &Policy,
    base: &ChaCha8Rng,
    n_samples: u64,
    pass: Pass,
) -> PassSums {
    let n = model.station_count();
    let times: Vec<f64> = model
        .stations
        .iter()
        .zip(&policy.thresholds)
        .map(|(s, &t)| evaluation::station_time(s, t))
        .collect();
    let tag = pass.stream_tag() << 62;

    let n_chunks = n_samples.div_ceil(CHUNK);
    let partials: Vec<PassSums> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut sums = PassSums::default();
            let mut decisions: Vec<Option<bool>> = vec![None; n];
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n_samples);
            for k in lo..hi {
                let mut rng = base.clone();
                rng.set_stream(tag | k);

                decisions.fill(None);
                let mut cost = 0.0;
                let mut time = 0.0;
                let mut outcome = None;
                for &i in &policy.sequence {
                    let station = &model.stations[i];
                    cost += station.cost;
                    time += times[i];
                    // The prior pass mixes the state at each station, so
                    // decisions are independent across stations exactly as
                    // the chain expectations assume.
                    let suspect = match pass {
                        Pass::Prior => rng.gen::<f64>() < model.prior,
                        Pass::AllClean => false,
                        Pass::AllSuspect => true,
                    };
                    let (mu, sigma) = if suspect {
                        (1.0, station.sigma1)
                    } else {
                        (0.0, station.sigma0)
                    };
                    let z: f64 = rng.sample(StandardNormal);
                    let reading = mu + sigma * z;
                    decisions[i] = Some(reading > policy.thresholds[i]);
                    outcome = model.structure.evaluate_partial(&decisions);
                    if outcome.is_some() {
                        break;
                    }
                }
                let rejected = outcome.expect("all stations decided");

                sums.cost_sum += cost;
                sums.cost_sumsq += cost * cost;
                sums.time_sum += time;
                sums.time_sumsq += time * time;
                if rejected {
                    sums.rejects += 1;
                } else {
                    sums.accepts += 1;
                }
            }
            sums
        })
        .collect();

    // Sequential fold in chunk order keeps the float sums reproducible.
    let mut total = PassSums::default();
    for p in partials {
        total.cost_sum += p.cost_sum;
        total.cost_sumsq += p.cost_sumsq;
        total.time_sum += p.time_sum;
        total.time_sumsq += p.time_sumsq;
        total.rejects += p.rejects;
        total.accepts += p.accepts;
    }
    total
}

fn proportion(count: u64, n_samples: u64) -> Estimate {
    let n = n_samples as f64;
    let p = count as f64 / n;
    Estimate {
        value: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
    }
}

fn mean(sum: f64, sumsq: f64, n: f64) -> Estimate {
    let m = sum / n;
    let variance = if n > 1.0 {
        ((sumsq - n * m * m) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Estimate {
        value: m,
        std_error: (variance / n).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BooleanStructure, Station, SystemModel};

    fn parallel3() -> SystemModel {
        SystemModel::new(
            vec![
                Station::new(0.16, 0.3, 1.0, 20.0, -3.0),
                Station::new(0.2, 0.2, 1.0, 20.0, -3.0),
                Station::new(0.22, 0.26, 1.0, 20.0, -3.0),
            ],
            0.0002,
            100_000.0,
            500.0,
            BooleanStructure::parallel(3),
        )
    }

    fn policy() -> Policy {
        Policy::new(vec![1, 0, 2], vec![0.0, 0.85, 0.0])
    }

    #[test]
    fn estimates_agree_with_the_exact_evaluator() {
        let model = parallel3();
        let policy = policy();
        let exact = evaluation::evaluate_policy(&model, &policy).unwrap();
        let sim = simulate(&model, &policy, 200_000, 7).unwrap();

        // Probabilities: z-test against the analytic standard error, which
        // stays valid when the sampled count is zero.
        let n = sim.samples_per_pass as f64;
        let se_fa =
            (exact.false_accept.value() * (1.0 - exact.false_accept.value()) / n).sqrt();
        assert!((sim.false_accept.value - exact.false_accept.value()).abs() <= 4.0 * se_fa);
        let se_fr =
            (exact.false_reject.value() * (1.0 - exact.false_reject.value()) / n).sqrt();
        assert!((sim.false_reject.value - exact.false_reject.value()).abs() <= 4.0 * se_fr);

        // Means: the sample standard error is reliable here.
        assert!((sim.mean_cost.value - exact.inspection_cost).abs() <= 4.0 * sim.mean_cost.std_error);
        assert!((sim.mean_time.value - exact.total_time).abs() <= 4.0 * sim.mean_time.std_error);
        assert!(sim.mean_cost.std_error > 0.0);
    }

    #[test]
    fn same_seed_is_bit_identical_and_thread_independent() {
        let model = parallel3();
        let policy = policy();
        let a = simulate(&model, &policy, 150_000, 99).unwrap();
        let b = simulate(&model, &policy, 150_000, 99).unwrap();
        assert_eq!(a, b);

        for threads in [1, 4] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let c = pool.install(|| simulate(&model, &policy, 150_000, 99).unwrap());
            assert_eq!(a.mean_cost.value.to_bits(), c.mean_cost.value.to_bits());
            assert_eq!(a.mean_time.value.to_bits(), c.mean_time.value.to_bits());
            assert_eq!(a.false_accept, c.false_accept);
            assert_eq!(a.false_reject, c.false_reject);
        }
    }

    #[test]
    fn different_seeds_differ() {
        let model = parallel3();
        let policy = policy();
        let a = simulate(&model, &policy, 10_000, 1).unwrap();
        let b = simulate(&model, &policy, 10_000, 2).unwrap();
        assert_ne!(a.mean_time.value.to_bits(), b.mean_time.value.to_bits());
    }

    #[test]
    fn sample_count_is_validated() {
        let model = parallel3();
        assert!(simulate(&model, &policy(), 0, 1).is_err());
        // A single sample per pass is legal; standard errors collapse to 0.
        let one = simulate(&model, &policy(), 1, 1).unwrap();
        assert_eq!(one.mean_cost.std_error, 0.0);
    }

    #[test]
    fn forced_passes_pin_the_container_state() {
        // With sigma tiny and T = 0.5, a clean container (r ~ 0) never
        // flags and a suspect one (r ~ 1) always does: under ALL the
        // false-reject and false-accept rates are exactly 0.
        let model = SystemModel::new(
            vec![Station::new(1e-6, 1e-6, 1.0, 1.0, 0.0); 2],
            0.5,
            1.0,
            1.0,
            BooleanStructure::parallel(2),
        );
        let policy = Policy::new(vec![0, 1], vec![0.5, 0.5]);
        let sim = simulate(&model, &policy, 5_000, 3).unwrap();
        assert_eq!(sim.false_reject.value, 0.0);
        assert_eq!(sim.false_accept.value, 0.0);
    }
}

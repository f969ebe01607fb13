//! Exercises the analytic evaluator against the brute-force oracle on
//! randomized models, plus structural properties the metrics must obey.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{assert_close, oracle_evaluate, random_model, random_policy, random_pure_model};
use poe_inspect::evaluation::{
    evaluate_policy, fitness, parallel_cost_time, series_cost_time,
};
use poe_inspect::model::{Policy, PureStructure, WeightPair};

#[test]
fn evaluator_matches_brute_force_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..300 {
        let n = 2 + round % 5;
        let model = random_model(&mut rng, n);
        let policy = random_policy(&mut rng, &model);
        let got = evaluate_policy(&model, &policy).unwrap();
        let want = oracle_evaluate(&model, &policy);

        let label = format!("round {round} (n = {n})");
        assert_close(
            got.false_accept.value(),
            want.false_accept,
            1e-12,
            &format!("{label} false_accept"),
        );
        assert_close(
            got.false_reject.value(),
            want.false_reject,
            1e-12,
            &format!("{label} false_reject"),
        );
        let cost_tol = 1e-10 * want.total_cost.abs().max(1.0);
        assert_close(
            got.misclassification_cost,
            want.misclassification_cost,
            cost_tol,
            &format!("{label} misclassification_cost"),
        );
        assert_close(
            got.inspection_cost,
            want.inspection_cost,
            1e-10 * want.inspection_cost.max(1.0),
            &format!("{label} inspection_cost"),
        );
        assert_close(
            got.total_cost,
            want.total_cost,
            cost_tol,
            &format!("{label} total_cost"),
        );
        assert_close(
            got.total_time,
            want.total_time,
            1e-10 * want.total_time.max(1.0),
            &format!("{label} total_time"),
        );
    }
}

#[test]
fn chain_closed_forms_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for round in 0..200 {
        let n = 2 + round % 5;
        let series = round % 2 == 0;
        let model = random_pure_model(&mut rng, n, series);
        let policy = random_policy(&mut rng, &model);
        let (cost, time) = match model.structure.pure_structure(n).unwrap() {
            PureStructure::Series => series_cost_time(&model, &policy.thresholds, &policy.sequence),
            PureStructure::Parallel => {
                parallel_cost_time(&model, &policy.thresholds, &policy.sequence)
            }
        };
        let want = oracle_evaluate(&model, &policy);
        assert_close(
            cost,
            want.inspection_cost,
            1e-10 * want.inspection_cost.max(1.0),
            "closed-form cost",
        );
        assert_close(
            time,
            want.total_time,
            1e-10 * want.total_time.max(1.0),
            "closed-form time",
        );
    }
}

/// Raising any single threshold makes every station flag less often, so
/// the reject side can only shrink: PFR non-increasing, PFA non-decreasing.
#[test]
fn error_rates_are_monotone_in_each_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for round in 0..100 {
        let n = 2 + round % 4;
        let model = random_model(&mut rng, n);
        let policy = random_policy(&mut rng, &model);
        let base = evaluate_policy(&model, &policy).unwrap();
        for i in 0..n {
            let mut bumped = policy.clone();
            bumped.thresholds[i] = (bumped.thresholds[i] + 0.07).min(1.0);
            let after = evaluate_policy(&model, &bumped).unwrap();
            assert!(
                after.false_reject.value() <= base.false_reject.value() + 1e-15,
                "PFR rose when threshold {i} rose"
            );
            assert!(
                after.false_accept.value() + 1e-15 >= base.false_accept.value(),
                "PFA fell when threshold {i} rose"
            );
        }
    }
}

/// The weighted objective is linear in the weight pair for a fixed policy.
#[test]
fn fitness_is_linear_in_the_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let model = random_model(&mut rng, 3);
        let policy = random_policy(&mut rng, &model);
        let wa = WeightPair::from_cost_weight(0.2).unwrap();
        let wb = WeightPair::from_cost_weight(0.9).unwrap();
        let mid = WeightPair::from_cost_weight(0.5 * 0.2 + 0.5 * 0.9).unwrap();
        let fa = fitness(&model, &policy, wa).unwrap();
        let fb = fitness(&model, &policy, wb).unwrap();
        let fm = fitness(&model, &policy, mid).unwrap();
        assert_close(
            fm,
            0.5 * fa + 0.5 * fb,
            1e-10 * fm.abs().max(1.0),
            "weight linearity",
        );
    }
}

#[test]
fn metrics_stay_inside_hard_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for round in 0..200 {
        let n = 1 + round % 6;
        let model = random_pure_model(&mut rng, n, round % 2 == 0);
        let policy = random_policy(&mut rng, &model);
        let eval = evaluate_policy(&model, &policy).unwrap();

        let pfa = eval.false_accept.value();
        let pfr = eval.false_reject.value();
        assert!((0.0..=1.0).contains(&pfa) && (0.0..=1.0).contains(&pfr));

        let first = policy.sequence[0];
        let all_costs: f64 = model.stations.iter().map(|s| s.cost).sum();
        assert!(eval.inspection_cost >= model.stations[first].cost - 1e-12);
        assert!(eval.inspection_cost <= all_costs + 1e-12);
        assert!(eval.total_time > 0.0);
        assert_close(
            eval.total_cost,
            eval.misclassification_cost + eval.inspection_cost,
            1e-12 * eval.total_cost.max(1.0),
            "total cost split",
        );
    }
}

/// A policy with a station index out of range must be rejected, not
/// evaluated.
#[test]
fn invalid_policies_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let model = random_model(&mut rng, 3);
    let bad_station = Policy::new(vec![0, 1, 3], vec![0.5, 0.5, 0.5]);
    assert!(evaluate_policy(&model, &bad_station).is_err());
    let repeated = Policy::new(vec![0, 1, 1], vec![0.5, 0.5, 0.5]);
    assert!(evaluate_policy(&model, &repeated).is_err());
    let out_of_box = Policy::new(vec![0, 1, 2], vec![0.5, 0.5, 1.5]);
    assert!(evaluate_policy(&model, &out_of_box).is_err());
}

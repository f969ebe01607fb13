//! Non-dominated filtering and frontier comparison in (cost, time) space.
//! Both objectives are minimized.

use crate::evaluation::Evaluation;
use crate::model::{Policy, WeightPair};
use crate::Error;

/// One candidate policy with its two objective values and, when it came
/// from a weight sweep, the weights that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoPoint {
    pub policy: Policy,
    pub cost: f64,
    pub time: f64,
    pub weight: Option<WeightPair>,
}

impl ParetoPoint {
    pub fn new(policy: Policy, evaluation: &Evaluation, weight: Option<WeightPair>) -> Self {
        ParetoPoint {
            policy,
            cost: evaluation.total_cost,
            time: evaluation.total_time,
            weight,
        }
    }
}

/// Keeps the points no other point weakly dominates (lower or equal in
/// both objectives, strictly lower in one).
///
/// Exact (cost, time) duplicates keep only the earliest input point. The
/// result is sorted by ascending cost (hence descending time). O(m log m).
pub fn non_dominated_filter(points: Vec<ParetoPoint>) -> Vec<ParetoPoint> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .cost
            .total_cmp(&points[b].cost)
            .then(points[a].time.total_cmp(&points[b].time))
            .then(a.cmp(&b))
    });
    // Scanning in cost order, a point survives iff its time beats every
    // cheaper-or-equal point seen so far. The input-order tiebreak above
    // makes the earliest of exact duplicates the survivor.
    let mut keep = vec![false; points.len()];
    let mut best_time = f64::INFINITY;
    for &i in &order {
        if points[i].time < best_time {
            keep[i] = true;
            best_time = points[i].time;
        }
    }
    let mut kept: Vec<ParetoPoint> = points
        .into_iter()
        .zip(&keep)
        .filter_map(|(p, &k)| k.then_some(p))
        .collect();
    kept.sort_by(|a, b| a.cost.total_cmp(&b.cost));
    kept
}

/// Directed distance from frontier `a` to frontier `b`: the largest
/// nearest-neighbor gap, max over `p` in `a` of min over `q` in `b` of the
/// Euclidean distance after each axis is min-max normalized over the
/// points of both frontiers.
///
/// Zero means every point of `a` coincides with some point of `b`. An axis
/// with zero span contributes zero. Errors when either frontier is empty.
pub fn frontier_distance(a: &[ParetoPoint], b: &[ParetoPoint]) -> Result<f64, Error> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyFrontier);
    }
    let all = a.iter().chain(b.iter());
    let mut cost_min = f64::INFINITY;
    let mut cost_max = f64::NEG_INFINITY;
    let mut time_min = f64::INFINITY;
    let mut time_max = f64::NEG_INFINITY;
    for p in all {
        cost_min = cost_min.min(p.cost);
        cost_max = cost_max.max(p.cost);
        time_min = time_min.min(p.time);
        time_max = time_max.max(p.time);
    }
    let cost_span = if cost_max > cost_min {
        cost_max - cost_min
    } else {
        1.0
    };
    let time_span = if time_max > time_min {
        time_max - time_min
    } else {
        1.0
    };

    let mut worst = 0.0f64;
    for p in a {
        let mut nearest = f64::INFINITY;
        for q in b {
            let dc = (p.cost - q.cost) / cost_span;
            let dt = (p.time - q.time) / time_span;
            nearest = nearest.min((dc * dc + dt * dt).sqrt());
        }
        worst = worst.max(nearest);
    }
    Ok(worst)
}

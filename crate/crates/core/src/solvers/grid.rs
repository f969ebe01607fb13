//! Exhaustive search over a uniform threshold grid crossed with all visit
//! orders.

use itertools::Itertools;

use crate::evaluation::{self, Evaluation};
use crate::model::{ModelError, Policy, SystemModel};
use crate::Error;

/// Cap on `(grid points)^n * n!` policy evaluations.
pub const MAX_GRID_EVALUATIONS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridParams {
    /// Spacing of the threshold grid along each axis.
    pub step: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams { step: 0.05 }
    }
}

impl GridParams {
    pub(crate) fn validate(&self, model: &SystemModel) -> Result<(), ModelError> {
        let (lo, hi) = model.threshold_box();
        if !(self.step.is_finite() && self.step > 0.0 && self.step <= hi - lo) {
            return Err(ModelError::new(
                "grid.step",
                format!("step must lie in (0, {}], got {}", hi - lo, self.step),
            ));
        }
        Ok(())
    }
}

/// Uniform axis `lo, lo + step, ...` through `hi`.
///
/// The point count is `floor((hi - lo) / step) + 1` with a 1e-9 relative
/// tolerance, and the last point snaps onto `hi` when the span is an exact
/// multiple of the step; `hi` is simply not reached otherwise.
pub fn grid_axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let m = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=m).map(|k| (lo + k as f64 * step).min(hi)).collect()
}

/// Evaluates every policy on the grid: all threshold combinations crossed
/// with all station permutations.
///
/// Output order is deterministic: threshold vectors vary the last station
/// fastest, and permutations run lexicographically within each vector.
/// Errors without evaluating anything when the policy count would exceed
/// [`MAX_GRID_EVALUATIONS`].
pub fn grid_search(
    model: &SystemModel,
    params: &GridParams,
) -> Result<Vec<(Policy, Evaluation)>, Error> {
    model.validate()?;
    params.validate(model)?;
    let n = model.station_count();
    let (lo, hi) = model.threshold_box();
    let axis = grid_axis(lo, hi, params.step);
    let m = axis.len() as u128;

    let mut total: u128 = 1;
    for i in 1..=n as u128 {
        total = total.saturating_mul(m).saturating_mul(i);
    }
    if total > MAX_GRID_EVALUATIONS as u128 {
        return Err(Error::GridBudget {
            evaluations: total,
            limit: MAX_GRID_EVALUATIONS,
        });
    }

    let permutations: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut results = Vec::with_capacity(total as usize);
    let mut indices = vec![0usize; n];
    loop {
        let thresholds: Vec<f64> = indices.iter().map(|&k| axis[k]).collect();
        for sequence in &permutations {
            let policy = Policy::new(sequence.clone(), thresholds.clone());
            let eval = evaluation::evaluate_policy(model, &policy)?;
            results.push((policy, eval));
        }
        // Odometer increment, last station fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(results);
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < axis.len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}

//! Nelder-Mead simplex minimization with box clamping.
//!
//! Derivative-free, which matters here: short-circuit expected time is
//! continuous but kinked wherever the optimal visit order changes.

use crate::model::ModelError;

/// Multi-start configuration. `initial_thresholds` lists one start per
/// entry; leave it empty for a single start at the box midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSearchParams {
    pub initial_thresholds: Vec<Vec<f64>>,
    pub max_iterations: usize,
    pub convergence_tol: f64,
}

impl Default for LocalSearchParams {
    fn default() -> Self {
        LocalSearchParams {
            initial_thresholds: Vec::new(),
            max_iterations: 1000,
            convergence_tol: 1e-9,
        }
    }
}

impl LocalSearchParams {
    pub(crate) fn validate(&self, dim: usize, bounds: (f64, f64)) -> Result<(), ModelError> {
        if self.max_iterations == 0 {
            return Err(ModelError::new(
                "local.max_iterations",
                "must be at least 1",
            ));
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol >= 0.0) {
            return Err(ModelError::new(
                "local.tol",
                "must be nonnegative and finite",
            ));
        }
        let (lo, hi) = bounds;
        for (i, start) in self.initial_thresholds.iter().enumerate() {
            let inside = start.len() == dim
                && start.iter().all(|t| t.is_finite() && (lo..=hi).contains(t));
            if !inside {
                return Err(ModelError::new(
                    "local.starts",
                    format!(
                        "start {} must list {dim} thresholds inside [{lo}, {hi}]",
                        i + 1
                    ),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalResult {
    pub thresholds: Vec<f64>,
    pub value: f64,
    /// True when the simplex diameter dropped below the tolerance before
    /// the iteration budget ran out.
    pub converged: bool,
    pub iterations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `objective` over the box `[lo, hi]^dim` starting from `start`.
///
/// Every trial point is clamped into the box coordinate-wise, so the
/// objective is never called outside it. Deterministic: no randomness, and
/// exact fitness ties are broken by simplex position.
pub fn local_minimize<F: FnMut(&[f64]) -> f64>(
    mut objective: F,
    start: &[f64],
    bounds: (f64, f64),
    params: &LocalSearchParams,
) -> LocalResult {
    let (lo, hi) = bounds;
    let dim = start.len();
    let clamp = |x: &mut Vec<f64>| {
        for v in x.iter_mut() {
            *v = v.clamp(lo, hi);
        }
    };

    // Initial simplex: the start plus one vertex per coordinate, stepped by
    // 5% of the box span (flipped inward at the upper wall).
    let h = 0.05 * (hi - lo);
    let mut base = start.to_vec();
    clamp(&mut base);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let f0 = objective(&base);
    simplex.push((base.clone(), f0));
    for i in 0..dim {
        let mut v = base.clone();
        v[i] = if v[i] + h <= hi { v[i] + h } else { v[i] - h };
        let f = objective(&v);
        simplex.push((v, f));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iterations {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

        let diameter = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        if diameter < params.convergence_tol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; dim];
        for (v, _) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }
        let worst = simplex[dim].clone();
        let towards = |scale: f64| {
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + scale * (c - w))
                .collect();
            clamp(&mut x);
            x
        };

        let reflected = towards(REFLECT);
        let f_reflected = objective(&reflected);
        if f_reflected < simplex[0].1 {
            let expanded = towards(EXPAND);
            let f_expanded = objective(&expanded);
            simplex[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_reflected);
            continue;
        }
        let contracted = if f_reflected < worst.1 {
            // Outside contraction, halfway toward the reflection.
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(c, r)| c + CONTRACT * (r - c))
                .collect();
            clamp(&mut x);
            x
        } else {
            towards(-CONTRACT)
        };
        let f_contracted = objective(&contracted);
        if f_contracted < worst.1.min(f_reflected) {
            simplex[dim] = (contracted, f_contracted);
            continue;
        }
        // Shrink everything toward the best vertex. Convex combinations of
        // in-box points stay in the box.
        let best = simplex[0].0.clone();
        for (v, f) in simplex[1..].iter_mut() {
            for (x, b) in v.iter_mut().zip(&best) {
                *x = b + SHRINK * (*x - b);
            }
            *f = objective(v);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (thresholds, value) = simplex.swap_remove(0);
    LocalResult {
        thresholds,
        value,
        converged,
        iterations,
    }
}

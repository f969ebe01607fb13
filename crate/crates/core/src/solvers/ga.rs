//! Real-coded genetic algorithm over a box.
//!
//! Tournament selection, blend (BLX-0.5) crossover, Gaussian mutation plus
//! an occasional gene-pair swap, elitism. Seeded and single-threaded, so a
//! given seed fully determines the run.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq)]
pub struct GaParams {
    pub population_size: usize,
    pub generations: usize,
    /// Probability a child is a blend of two parents rather than a copy of
    /// one.
    pub crossover_rate: f64,
    /// Per-gene probability of a Gaussian perturbation.
    pub mutation_rate: f64,
    /// Top individuals copied unchanged into the next generation.
    pub elite_count: usize,
    /// Individuals drawn per tournament.
    pub tournament_size: usize,
    /// Mutation standard deviation as a fraction of the box span.
    pub mutation_scale: f64,
    /// Probability a child gets two genes exchanged. When coordinates play
    /// near-interchangeable roles the landscape has mirror minima that
    /// Gaussian steps cannot hop between; a swap can.
    pub swap_rate: f64,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 80,
            generations: 100,
            crossover_rate: 0.8,
            mutation_rate: 0.1,
            elite_count: 2,
            tournament_size: 2,
            mutation_scale: 0.1,
            swap_rate: 0.1,
            seed: 0,
        }
    }
}

impl GaParams {
    pub(crate) fn validate(&self) -> Result<(), ModelError> {
        if self.population_size < 2 {
            return Err(ModelError::new(
                "ga.population_size",
                "at least 2 individuals required",
            ));
        }
        if self.elite_count >= self.population_size {
            return Err(ModelError::new(
                "ga.elite_count",
                "must be smaller than the population",
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(ModelError::new("ga.crossover_rate", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(ModelError::new("ga.mutation_rate", "must lie in [0, 1]"));
        }
        if self.tournament_size == 0 {
            return Err(ModelError::new("ga.tournament_size", "must be at least 1"));
        }
        if !(self.mutation_scale.is_finite() && self.mutation_scale > 0.0) {
            return Err(ModelError::new("ga.mutation_scale", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.swap_rate) {
            return Err(ModelError::new("ga.swap_rate", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Minimizes `objective` over `[lo, hi]^dim`, returning the best point ever
/// evaluated and its value.
pub fn ga_minimize<F: FnMut(&[f64]) -> f64>(
    mut objective: F,
    dim: usize,
    bounds: (f64, f64),
    params: &GaParams,
) -> Result<(Vec<f64>, f64), ModelError> {
    params.validate()?;
    if dim == 0 {
        return Err(ModelError::new("ga.dim", "dimension must be at least 1"));
    }
    let (lo, hi) = bounds;
    let span = hi - lo;
    let sigma = params.mutation_scale * span;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut population: Vec<(Vec<f64>, f64)> = (0..params.population_size)
        .map(|_| {
            let genes: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..=hi)).collect();
            let fit = objective(&genes);
            (genes, fit)
        })
        .collect();

    let mut best = best_of(&population).clone();

    for _ in 0..params.generations {
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| population[a].1.total_cmp(&population[b].1).then(a.cmp(&b)));

        let mut next: Vec<(Vec<f64>, f64)> = order[..params.elite_count]
            .iter()
            .map(|&i| population[i].clone())
            .collect();

        while next.len() < params.population_size {
            let a = tournament(&population, params.tournament_size, &mut rng);
            let b = tournament(&population, params.tournament_size, &mut rng);
            let mut genes = if rng.gen::<f64>() < params.crossover_rate {
                blend(&population[a].0, &population[b].0, bounds, &mut rng)
            } else {
                population[a].0.clone()
            };
            for g in genes.iter_mut() {
                if rng.gen::<f64>() < params.mutation_rate {
                    let z: f64 = rng.sample(StandardNormal);
                    *g = (*g + sigma * z).clamp(lo, hi);
                }
            }
            if dim >= 2 && rng.gen::<f64>() < params.swap_rate {
                let i = rng.gen_range(0..dim);
                let j = (i + rng.gen_range(1..dim)) % dim;
                genes.swap(i, j);
            }
            let fit = objective(&genes);
            next.push((genes, fit));
        }
        population = next;

        let gen_best = best_of(&population);
        if gen_best.1 < best.1 {
            best = gen_best.clone();
        }
    }

    Ok(best)
}

fn best_of(population: &[(Vec<f64>, f64)]) -> &(Vec<f64>, f64) {
    let mut best = &population[0];
    for individual in &population[1..] {
        if individual.1 < best.1 {
            best = individual;
        }
    }
    best
}

fn tournament(population: &[(Vec<f64>, f64)], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut winner = rng.gen_range(0..population.len());
    for _ in 1..size {
        let contender = rng.gen_range(0..population.len());
        if population[contender].1 < population[winner].1 {
            winner = contender;
        }
    }
    winner
}

/// BLX-0.5: each gene is drawn uniformly from the parents' interval widened
/// by half its length on both sides, then clipped to the box.
fn blend(a: &[f64], b: &[f64], bounds: (f64, f64), rng: &mut ChaCha8Rng) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let (lo_g, hi_g) = if x <= y { (x, y) } else { (y, x) };
            let d = hi_g - lo_g;
            rng.gen_range((lo_g - 0.5 * d)..=(hi_g + 0.5 * d))
                .clamp(bounds.0, bounds.1)
        })
        .collect()
}

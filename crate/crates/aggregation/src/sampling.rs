use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{AggregationError, EvaluatorPopulation};

/// Numerically stable logistic function.
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// The population win probability at a compatibility gap: the average over
/// evaluators of the logistic of sensitivity times gap. Exceeds one half as
/// soon as the gap is positive and any sensitivity is.
pub fn pairwise_win_probability(
    delta_v: i64,
    population: &EvaluatorPopulation,
) -> Result<f64, AggregationError> {
    population.validate()?;
    let k = population.len() as f64;
    let sum: f64 = population
        .evaluators
        .iter()
        .map(|e| sigmoid(e.alpha * delta_v as f64))
        .sum();
    Ok(sum / k)
}

/// Counts from sampled pairwise comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairwiseSample {
    pub wins_first: u64,
    pub wins_second: u64,
}

impl PairwiseSample {
    pub fn total(&self) -> u64 {
        self.wins_first + self.wins_second
    }

    pub fn rate_first(&self) -> f64 {
        self.wins_first as f64 / self.total() as f64
    }
}

/// Draws `m` pairwise comparisons between two candidates with the given
/// compatibility scores: each draw picks an evaluator uniformly and samples
/// the winner from the logistic of that evaluator's utility difference.
/// Deterministic for a fixed seed.
#[allow(clippy::too_many_arguments)]
pub fn sample_pairwise_outcomes(
    population: &EvaluatorPopulation,
    instance: &str,
    first: &str,
    v_first: i64,
    second: &str,
    v_second: i64,
    m: u64,
    seed: u64,
) -> Result<PairwiseSample, AggregationError> {
    population.validate()?;
    let probabilities: Vec<f64> = population
        .evaluators
        .iter()
        .map(|e| {
            let u_first = e.quality(instance, first) + e.alpha * v_first as f64;
            let u_second = e.quality(instance, second) + e.alpha * v_second as f64;
            sigmoid(u_first - u_second)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = PairwiseSample {
        wins_first: 0,
        wins_second: 0,
    };
    for _ in 0..m {
        let evaluator = rng.gen_range(0..probabilities.len());
        if rng.gen::<f64>() < probabilities[evaluator] {
            sample.wins_first += 1;
        } else {
            sample.wins_second += 1;
        }
    }
    Ok(sample)
}

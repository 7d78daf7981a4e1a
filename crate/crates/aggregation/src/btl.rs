use std::collections::BTreeMap;

use serde::Serialize;

use crate::{
    pairwise_win_probability, sample_pairwise_outcomes, AggregationError, EvaluatorPopulation,
};

/// Win counts over candidate pairs: `wins[i][j]` is how often candidate i
/// beat candidate j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseCounts {
    candidates: Vec<String>,
    wins: Vec<Vec<u64>>,
}

impl PairwiseCounts {
    pub fn new(candidates: Vec<String>) -> PairwiseCounts {
        let n = candidates.len();
        PairwiseCounts {
            candidates,
            wins: vec![vec![0; n]; n],
        }
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    fn index_of(&self, name: &str) -> usize {
        self.candidates
            .iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("unknown candidate {name:?}"))
    }

    pub fn add_wins(&mut self, winner: &str, loser: &str, count: u64) {
        let w = self.index_of(winner);
        let l = self.index_of(loser);
        self.wins[w][l] += count;
    }

    pub fn wins_of(&self, winner: &str, loser: &str) -> u64 {
        self.wins[self.index_of(winner)][self.index_of(loser)]
    }

    fn total_wins(&self, i: usize) -> u64 {
        self.wins[i].iter().sum()
    }

    fn total_losses(&self, i: usize) -> u64 {
        (0..self.candidates.len()).map(|j| self.wins[j][i]).sum()
    }

    fn comparisons(&self, i: usize, j: usize) -> u64 {
        self.wins[i][j] + self.wins[j][i]
    }

    /// Connected components of the comparison graph (an edge wherever a pair
    /// was compared at least once).
    fn components(&self) -> Vec<Vec<String>> {
        let n = self.candidates.len();
        let mut component = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            component[start] = count;
            while let Some(v) = stack.pop() {
                #[allow(clippy::needless_range_loop)]
                for u in 0..n {
                    if component[u] == usize::MAX && self.comparisons(v, u) > 0 {
                        component[u] = count;
                        stack.push(u);
                    }
                }
            }
            count += 1;
        }
        let mut out = vec![Vec::new(); count];
        for (i, &c) in component.iter().enumerate() {
            out[c].push(self.candidates[i].clone());
        }
        out
    }
}

/// Fitted scores on the log scale, gauge-fixed to sum to zero.
#[derive(Debug, Clone, Serialize)]
pub struct ScoreTable {
    pub scores: BTreeMap<String, f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl ScoreTable {
    pub fn score(&self, name: &str) -> f64 {
        self.scores[name]
    }

    pub fn difference(&self, a: &str, b: &str) -> f64 {
        self.score(a) - self.score(b)
    }
}

/// Maximum-likelihood pairwise score fit by minorization-maximization.
///
/// Iterates the standard strength update until the largest change of any
/// gauge-fixed log score drops below `tolerance` or `max_iters` is reached.
/// The comparison graph must be connected and every candidate must have at
/// least one win and one loss for the maximizer to be finite.
pub fn fit_btl(
    counts: &PairwiseCounts,
    tolerance: f64,
    max_iters: usize,
) -> Result<ScoreTable, AggregationError> {
    let n = counts.candidates.len();
    if n < 2 {
        let scores = counts
            .candidates
            .iter()
            .map(|c| (c.clone(), 0.0))
            .collect();
        return Ok(ScoreTable {
            scores,
            iterations: 0,
            converged: true,
        });
    }
    let components = counts.components();
    if components.len() > 1 {
        return Err(AggregationError::Disconnected(components));
    }
    for i in 0..n {
        if counts.total_wins(i) == 0 {
            return Err(AggregationError::DegenerateCounts(
                counts.candidates[i].clone(),
                "wins",
            ));
        }
        if counts.total_losses(i) == 0 {
            return Err(AggregationError::DegenerateCounts(
                counts.candidates[i].clone(),
                "losses",
            ));
        }
    }

    let mut strengths = vec![1.0f64; n];
    let mut log_scores = gauge_fixed_logs(&strengths);
    let mut converged = false;
    let mut iterations = 0;
    for iter in 0..max_iters {
        iterations = iter + 1;
        let mut next = vec![0.0f64; n];
        for i in 0..n {
            let wins = counts.total_wins(i) as f64;
            let denominator: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| counts.comparisons(i, j) as f64 / (strengths[i] + strengths[j]))
                .sum();
            next[i] = wins / denominator;
        }
        // Normalize strengths to a product of one for numeric stability.
        let log_mean = next.iter().map(|s| s.ln()).sum::<f64>() / n as f64;
        let scale = log_mean.exp();
        next.iter_mut().for_each(|s| *s /= scale);

        let next_logs = gauge_fixed_logs(&next);
        let max_change = log_scores
            .iter()
            .zip(&next_logs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        strengths = next;
        log_scores = next_logs;
        if max_change < tolerance {
            converged = true;
            break;
        }
    }

    let scores = counts
        .candidates
        .iter()
        .cloned()
        .zip(log_scores)
        .collect();
    Ok(ScoreTable {
        scores,
        iterations,
        converged,
    })
}

fn gauge_fixed_logs(strengths: &[f64]) -> Vec<f64> {
    let logs: Vec<f64> = strengths.iter().map(|s| s.ln()).collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    logs.into_iter().map(|l| l - mean).collect()
}

/// One sample-size point of the consistency sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub sample_size: u64,
    pub median_abs_error: f64,
    pub sign_correct: usize,
    pub seeds: usize,
}

/// Fits two-candidate data at growing sample sizes and reports the median
/// absolute error of the fitted score difference against the analytic value
/// implied by the population, per seed batch.
pub fn consistency_sweep(
    population: &EvaluatorPopulation,
    delta_v: i64,
    sample_sizes: &[u64],
    seeds: &[u64],
    tolerance: f64,
    max_iters: usize,
) -> Result<Vec<SweepPoint>, AggregationError> {
    let p_true = pairwise_win_probability(delta_v, population)?;
    let true_delta = (p_true / (1.0 - p_true)).ln();
    let mut curve = Vec::with_capacity(sample_sizes.len());
    for &m in sample_sizes {
        let mut errors = Vec::with_capacity(seeds.len());
        let mut sign_correct = 0;
        for &seed in seeds {
            let sample =
                sample_pairwise_outcomes(population, "", "first", delta_v, "second", 0, m, seed)?;
            let mut counts =
                PairwiseCounts::new(vec!["first".to_string(), "second".to_string()]);
            counts.add_wins("first", "second", sample.wins_first);
            counts.add_wins("second", "first", sample.wins_second);
            let fitted = fit_btl(&counts, tolerance, max_iters)?;
            let diff = fitted.difference("first", "second");
            errors.push((diff - true_delta).abs());
            if diff.signum() == true_delta.signum() {
                sign_correct += 1;
            }
        }
        errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if errors.len() % 2 == 1 {
            errors[errors.len() / 2]
        } else {
            (errors[errors.len() / 2 - 1] + errors[errors.len() / 2]) / 2.0
        };
        curve.push(SweepPoint {
            sample_size: m,
            median_abs_error: median,
            sign_correct,
            seeds: seeds.len(),
        });
    }
    Ok(curve)
}

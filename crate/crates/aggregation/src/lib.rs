//! Benchmark aggregation and pairwise score fitting.
//!
//! Evaluator rankings aggregate by pairwise strict majority into a
//! tournament (cycles are preserved, never resolved). Random-utility
//! evaluators with signature sensitivity generate pairwise outcomes whose
//! win probabilities average the per-evaluator logistics, and a
//! minorization-maximization fit recovers scores from sampled outcomes.
//! The regret-weighting model makes underprovision cost a
//! sensitivity-weighted multiple of overprovision, a gap ratio computed
//! here exactly.

mod btl;
mod population;
mod profile;
mod sampling;

pub use btl::{consistency_sweep, fit_btl, PairwiseCounts, ScoreTable, SweepPoint};
pub use population::{
    lambda_eff, population_scores_asymmetric, AsymmetryReport, Evaluator, EvaluatorPopulation,
    QualityEntry,
};
pub use profile::{
    check_deterministic_inheritance, majority_pairwise, minority_counterexample, BenchmarkProfile,
    InheritanceReport, Tournament,
};
pub use sampling::{pairwise_win_probability, sample_pairwise_outcomes, sigmoid, PairwiseSample};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AggregationError {
    #[error("population has no evaluators")]
    EmptyPopulation,
    #[error("population parameter: {0}")]
    BadParameter(String),
    #[error("ranking {0} is not a permutation of the candidate set")]
    BadRanking(usize),
    #[error("comparison graph is disconnected; components: {0:?}")]
    Disconnected(Vec<Vec<String>>),
    #[error("candidate {0:?} has no {1}; its score is unbounded")]
    DegenerateCounts(String, &'static str),
    #[error("all sensitivities are zero; the weighted average is undefined")]
    ZeroAlphas,
    #[error("population json: {0}")]
    Json(String),
}

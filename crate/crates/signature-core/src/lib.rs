//! Workload signatures, measured warrants, and structural compatibility scoring.
//!
//! An instance (a string over a finite alphabet) implies a set of structural
//! features, its *signature*. The *warrant* is the subset of those features
//! actually backed by evidence. A compatibility table scores how strongly an
//! implementation string commits to each feature. The beyond-warrant score
//! sums compatibility over the features implied but not warranted: a positive
//! value at some instance means the implementation carries structure the
//! evidence does not support.
//!
//! Everything is table-driven from a [`ScenarioConfig`], which round-trips
//! through JSON bit-exactly.

mod alphabet;
mod scenario;
mod scoring;
mod validate;

pub use alphabet::{Alphabet, Instance, InstanceIter, Instances};
pub use scenario::{
    CompatEntry, Feature, Pattern, Rule, RuleSet, ScenarioConfig, WitnessKit,
};
pub use scoring::{beyond_warrant_score, compatibility_score, warranted_score};
pub use validate::{validate_scenario, ValidationReport, Violation};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet symbols are not distinct: {0:?} repeats")]
    DuplicateSymbol(char),
    #[error("pad symbol {0:?} is not a member of the alphabet")]
    PadNotInAlphabet(char),
    #[error("instance {text:?} contains {bad:?}, which is outside the alphabet")]
    MalformedInstance { text: String, bad: char },
    #[error("feature label is empty")]
    EmptyFeature,
    #[error("compatibility value {0} is outside {{-1, 0, +1}}")]
    CompatOutOfRange(i8),
    #[error("scenario json: {0}")]
    Json(#[from] serde_json::Error),
}

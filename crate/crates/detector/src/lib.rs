//! Bounded-domain overspecification detection and its companions.
//!
//! The detector enumerates every instance up to a length cap, runs the
//! pipeline program on each, and scores the output's beyond-warrant
//! commitment. On the bounded domain this is a complete decision procedure
//! with exhaustively countable cost. The dovetailing semi-decider covers the
//! unbounded domain one budget at a time and accepts exactly the positive
//! instances. The gadget builder turns a Turing machine and input word into
//! a total pipeline whose overspecification verdict encodes whether the
//! machine halts — the reason no unbounded decision procedure exists.

mod cross;
mod decide;
mod gadget;
mod report;
mod semidecide;

pub use cross::{cross_check, CrossCheckReport};
pub use decide::{decide_overspecification, decide_with_trace, ScanRow};
pub use gadget::build_halting_gadget;
pub use report::{DetectionReport, SemiDecisionOutcome, SemiStatus};
pub use semidecide::semidecide_overspecified;
// Machine descriptors are part of this crate's surface: gadget construction
// consumes them.
pub use pipeline_vm::{TmDescriptor, TmMove, TmRuleDescriptor};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("program: {0}")]
    Parse(#[from] pipeline_vm::ParseError),
    #[error("machine: {0}")]
    Tm(#[from] pipeline_vm::TmError),
    #[error("scenario: {0}")]
    Scenario(#[from] signature_core::ScenarioError),
    #[error("evaluation: {0}")]
    Eval(#[from] pipeline_vm::EvalError),
    #[error("gadget construction requires the '#' pad symbol, scenario uses {0:?}")]
    UnsupportedPad(char),
}

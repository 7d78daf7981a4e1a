//! Repair operators over program indices and the fixed-point demonstrator.
//!
//! A repair operator is a total text-to-text transformation intended to
//! remove overspecification. The conservative discipline — leave every
//! clean pipeline unchanged — sounds harmless, but pairing any conservative
//! operator with the self-referential gadget family produces a program that
//! is its own repair yet provably overspecified on the bounded domain. The
//! constructor here builds that program, runs the detection, and reports
//! both halves of the argument; the audit helpers check conservativeness
//! and uniform elimination over program suites and exhibit the three-way
//! trade-off between them and domain restriction.

mod audit;
mod fixed_point;
mod gadget_map;
mod operator;

pub use audit::{
    check_conservative_on_domain, check_uniform_elimination_on_domain, ConservativenessReport,
    EliminationReport,
};
pub use fixed_point::{construct_overspecified_fixed_point, BranchSample, FixedPointReport};
pub use gadget_map::{make_gadget_map, GadgetMap};
pub use operator::{
    builtin_repair_operators, registry_for, CustomTransform, RepairKind, RepairOperator,
    PHI_ORACLE,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepairError {
    #[error("detector: {0}")]
    Detector(#[from] detector::DetectorError),
    #[error("evaluation: {0}")]
    Eval(#[from] pipeline_vm::EvalError),
    #[error("program: {0}")]
    Parse(#[from] pipeline_vm::ParseError),
    #[error("unknown repair operator {0:?}")]
    UnknownOperator(String),
}

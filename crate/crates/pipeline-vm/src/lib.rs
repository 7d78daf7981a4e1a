//! A toy pipeline language whose canonical program text is its own index.
//!
//! Programs are S-expressions over a small node set: string constants,
//! input access, pairing accessors, concatenation, equality, branching,
//! pad-pattern matching, bounded Turing-machine simulation, arithmetic
//! squaring, and the reflective trio EVAL / SPECIALIZE / ORACLE. Because
//! indices are canonical texts, specialization is a pure text
//! transformation and enumeration is string generation.
//!
//! Evaluation is budgeted: every node visit costs one step, a TM
//! simulation costs one step per machine step, and reflective subcalls
//! draw from the caller's remaining budget. Exhausting the budget yields
//! the `Diverged` outcome, the artifact's stand-in for nontermination.

mod ast;
mod enumerate;
mod eval;
mod parser;
mod smn;
mod tm;

pub use ast::{ProgramAst, ProgramIndex};
pub use enumerate::{enumerate_programs, program_stream, ProgramEnumerator, DEFAULT_ENUM_CHARSET};
pub use eval::{
    eval, eval_index, eval_within, EvalError, EvalOutcome, EvalStatus, Fuel, OracleFailure,
    OracleRegistry, VmError,
};
pub use parser::ParseError;
pub use smn::{
    kleene_fixed_point, pair, self_application_operator, smn_specialize, unpair,
    SELF_APPLICATION_TEMPLATE,
};
pub use tm::{simulate, TmDescriptor, TmError, TmMove, TmRule, TmRuleDescriptor, TmRun, TmToken};

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::ast::{ProgramAst, ProgramIndex, PAD_CHAR};
use crate::smn::{smn_specialize, unpair};
use crate::tm::TmStepper;

/// Non-divergence evaluation faults. Divergence is not an error: it is the
/// `Diverged` outcome. These are configuration problems the caller must fix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown oracle {0:?}")]
    UnknownOracle(String),
    #[error("oracle {name:?}: {message}")]
    OracleConfig { name: String, message: String },
}

/// How a host oracle reports failure: it ran out of the caller's budget, or
/// it is misconfigured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleFailure {
    OutOfFuel,
    Config(String),
}

/// A step meter. Every AST node visit costs one unit; a machine simulation
/// costs one unit per machine step. Reflective subcomputations draw from the
/// same meter, optionally through a capped child (see [`eval_within`]).
#[derive(Debug)]
pub struct Fuel {
    remaining: u64,
}

struct OutOfFuel;

impl Fuel {
    pub fn new(budget: u64) -> Fuel {
        Fuel { remaining: budget }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    fn tick(&mut self) -> Result<(), OutOfFuel> {
        if self.remaining == 0 {
            return Err(OutOfFuel);
        }
        self.remaining -= 1;
        Ok(())
    }

    fn spend(&mut self, amount: u64) {
        self.remaining -= amount;
    }

    fn refund(&mut self, amount: u64) {
        self.remaining += amount;
    }

    fn drain(&mut self) {
        self.remaining = 0;
    }
}

/// Outcome status: a halted run carries its output; a diverged run is one
/// that exhausted its budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalStatus {
    Halted(String),
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOutcome {
    pub status: EvalStatus,
    pub steps_used: u64,
}

impl EvalOutcome {
    pub fn halted(&self) -> bool {
        matches!(self.status, EvalStatus::Halted(_))
    }

    pub fn output(&self) -> Option<&str> {
        match &self.status {
            EvalStatus::Halted(s) => Some(s),
            EvalStatus::Diverged => None,
        }
    }
}

pub type OracleFn =
    dyn Fn(&str, &mut Fuel, &OracleRegistry) -> Result<String, OracleFailure> + Send + Sync;

/// Named host functions callable from ORACLE nodes. Immutable once built;
/// an oracle receives the active registry at call time, so oracles that
/// evaluate programs can resolve oracle calls those programs make —
/// including calls back to themselves.
#[derive(Clone, Default)]
pub struct OracleRegistry {
    map: HashMap<String, Arc<OracleFn>>,
}

impl OracleRegistry {
    pub fn new() -> OracleRegistry {
        OracleRegistry::default()
    }

    pub fn register<F>(&mut self, name: impl Into<String>, f: F)
    where
        F: Fn(&str, &mut Fuel, &OracleRegistry) -> Result<String, OracleFailure>
            + Send
            + Sync
            + 'static,
    {
        self.map.insert(name.into(), Arc::new(f));
    }

    /// Registers a plain total string function with flat cost.
    pub fn register_pure<F>(&mut self, name: impl Into<String>, f: F)
    where
        F: Fn(&str) -> String + Send + Sync + 'static,
    {
        self.register(name, move |arg, _fuel, _reg| Ok(f(arg)));
    }

    pub fn get(&self, name: &str) -> Option<&Arc<OracleFn>> {
        self.map.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }
}

impl std::fmt::Debug for OracleRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut names: Vec<&String> = self.map.keys().collect();
        names.sort();
        f.debug_struct("OracleRegistry").field("oracles", &names).finish()
    }
}

enum Stop {
    OutOfFuel,
    Fault(EvalError),
}

impl From<OutOfFuel> for Stop {
    fn from(_: OutOfFuel) -> Stop {
        Stop::OutOfFuel
    }
}

/// Evaluates a program on an input with a fresh budget.
///
/// Deterministic; once a (program, input) pair halts at some budget, every
/// larger budget yields the identical outcome.
pub fn eval(
    program: &ProgramAst,
    input: &str,
    budget: u64,
    registry: &OracleRegistry,
) -> Result<EvalOutcome, EvalError> {
    let mut fuel = Fuel::new(budget);
    eval_within(program, input, &mut fuel, budget, registry)
}

/// Either failure mode of running a program from its index.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VmError {
    #[error(transparent)]
    Parse(#[from] crate::ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Parses and evaluates a program index.
pub fn eval_index(
    index: &ProgramIndex,
    input: &str,
    budget: u64,
    registry: &OracleRegistry,
) -> Result<EvalOutcome, VmError> {
    let ast = index.ast()?;
    Ok(eval(&ast, input, budget, registry)?)
}

/// Evaluates against an existing meter, capped: the run may spend at most
/// `min(cap, fuel.remaining())` steps, and exactly the steps spent are
/// charged to `fuel`. This is the contract oracles use for internal
/// evaluations — the caller's remaining budget is the allowance.
pub fn eval_within(
    program: &ProgramAst,
    input: &str,
    fuel: &mut Fuel,
    cap: u64,
    registry: &OracleRegistry,
) -> Result<EvalOutcome, EvalError> {
    let granted = cap.min(fuel.remaining());
    fuel.spend(granted);
    let mut child = Fuel::new(granted);
    let result = eval_term(program, input, &mut child, registry);
    let used = granted - child.remaining();
    fuel.refund(child.remaining());
    match result {
        Ok(value) => Ok(EvalOutcome {
            status: EvalStatus::Halted(value),
            steps_used: used,
        }),
        Err(Stop::OutOfFuel) => Ok(EvalOutcome {
            status: EvalStatus::Diverged,
            steps_used: used,
        }),
        Err(Stop::Fault(e)) => Err(e),
    }
}

/// One evaluation move: either a finished value or a tail jump into the
/// next program position. EVAL and IF are the nodes through which nesting
/// can grow with the budget rather than the syntax (self-application loops,
/// fixed points that re-embed their own text), so their continuations are
/// trampolined; everything else recurses on syntax depth only.
enum Step {
    Value(String),
    Tail(ProgramAst, String),
}

fn eval_term(
    term: &ProgramAst,
    input: &str,
    fuel: &mut Fuel,
    registry: &OracleRegistry,
) -> Result<String, Stop> {
    let mut step = eval_node(term, input, fuel, registry)?;
    loop {
        match step {
            Step::Value(v) => return Ok(v),
            Step::Tail(program, sub_input) => {
                step = eval_node(&program, &sub_input, fuel, registry)?;
            }
        }
    }
}

fn eval_node(
    term: &ProgramAst,
    input: &str,
    fuel: &mut Fuel,
    registry: &OracleRegistry,
) -> Result<Step, Stop> {
    fuel.tick()?;
    let value = match term {
        ProgramAst::Const(s) => s.clone(),
        ProgramAst::Input => input.to_string(),
        ProgramAst::First => unpair(input).0.to_string(),
        ProgramAst::Second => unpair(input).1.to_string(),
        ProgramAst::Concat(a, b) => {
            let mut v = eval_term(a, input, fuel, registry)?;
            v.push_str(&eval_term(b, input, fuel, registry)?);
            v
        }
        ProgramAst::Eq(a, b) => {
            let va = eval_term(a, input, fuel, registry)?;
            let vb = eval_term(b, input, fuel, registry)?;
            truth(va == vb)
        }
        ProgramAst::If(c, t, e) => {
            let cond = eval_term(c, input, fuel, registry)?;
            let branch = if cond.is_empty() { e } else { t };
            return Ok(Step::Tail(branch.as_ref().clone(), input.to_string()));
        }
        ProgramAst::MatchPad(lit) => truth(pad_suffix(input, lit).is_some()),
        ProgramAst::PadCount(lit) => pad_suffix(input, lit)
            .map(|n| n.to_string())
            .unwrap_or_default(),
        ProgramAst::SimTm { tm, input: it, steps } => {
            let word = eval_term(it, input, fuel, registry)?;
            let max_steps: u64 = eval_term(steps, input, fuel, registry)?
                .parse()
                .unwrap_or(0);
            let mut stepper = TmStepper::new(tm, &word);
            let mut halted = false;
            let mut executed = 0u64;
            loop {
                if stepper.at_halt() {
                    halted = true;
                    break;
                }
                if executed == max_steps {
                    break;
                }
                fuel.tick()?;
                stepper.step();
                executed += 1;
            }
            truth(halted)
        }
        ProgramAst::Sq(t) => {
            let v: u64 = eval_term(t, input, fuel, registry)?.parse().unwrap_or(0);
            v.saturating_mul(v).to_string()
        }
        ProgramAst::Num(k) => k.to_string(),
        ProgramAst::Eval(index_term, input_term) => {
            let index_text = eval_term(index_term, input, fuel, registry)?;
            let sub_input = eval_term(input_term, input, fuel, registry)?;
            return match ProgramAst::parse(&index_text) {
                Ok(sub) => Ok(Step::Tail(sub, sub_input)),
                Err(_) => {
                    // An unparsable index denotes the everywhere-undefined
                    // function: the call never returns at any budget.
                    fuel.drain();
                    Err(Stop::OutOfFuel)
                }
            };
        }
        ProgramAst::Specialize(prog_term, const_term) => {
            let prog_text = eval_term(prog_term, input, fuel, registry)?;
            let constant = eval_term(const_term, input, fuel, registry)?;
            match ProgramIndex::parse(&prog_text) {
                Ok(index) => smn_specialize(&index, &constant)
                    .expect("canonical index specializes")
                    .into_string(),
                Err(_) => String::new(),
            }
        }
        ProgramAst::Oracle(name, arg) => {
            let value = eval_term(arg, input, fuel, registry)?;
            let oracle = registry
                .get(name)
                .cloned()
                .ok_or_else(|| Stop::Fault(EvalError::UnknownOracle(name.clone())))?;
            match oracle(&value, fuel, registry) {
                Ok(v) => v,
                Err(OracleFailure::OutOfFuel) => return Err(Stop::OutOfFuel),
                Err(OracleFailure::Config(message)) => {
                    return Err(Stop::Fault(EvalError::OracleConfig {
                        name: name.clone(),
                        message,
                    }))
                }
            }
        }
    };
    Ok(Step::Value(value))
}

fn truth(b: bool) -> String {
    if b {
        "1".to_string()
    } else {
        String::new()
    }
}

/// If `input` is `lit` followed by zero or more pad characters, the pad
/// count; otherwise None.
fn pad_suffix(input: &str, lit: &str) -> Option<usize> {
    let rest = input.strip_prefix(lit)?;
    if rest.chars().all(|c| c == PAD_CHAR) {
        Some(rest.chars().count())
    } else {
        None
    }
}

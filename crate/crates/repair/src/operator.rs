use std::sync::Arc;

use pipeline_vm::{eval, eval_within, EvalStatus, Fuel, OracleRegistry, ProgramAst, ProgramIndex};
use signature_core::{beyond_warrant_score, Instance, ScenarioConfig};

use crate::gadget_map::make_gadget_map;

/// The oracle name repair operators are registered under. Gadget programs
/// call their operator through this name.
pub const PHI_ORACLE: &str = "PHI";

/// Signature for caller-supplied transformations.
pub type CustomTransform = dyn Fn(&ProgramIndex) -> ProgramIndex + Send + Sync;

#[derive(Clone)]
pub enum RepairKind {
    /// Leaves every index unchanged. Trivially conservative, repairs nothing.
    Identity,
    /// Replaces every constant equal to the committing implementation with
    /// the empty implementation. Repairs by brute force; not conservative
    /// (it rewrites clean programs that merely mention the literal).
    LiteralRewrite,
    /// Maps every index to the empty-output program. Uniformly eliminating,
    /// maximally non-conservative: the selection pipeline collapses.
    ConstantEpsilon,
    /// Runs bounded detection internally and wraps a found witness family to
    /// output the empty implementation. Falls back to the identity when the
    /// internal verdict is 0 or any internal evaluation exhausts its budget;
    /// the fallback is what terminates self-referential regress.
    DetectorBacked { max_len: usize, budget: u64 },
    /// A caller-supplied total text-to-text transformation.
    HostCustom(Arc<CustomTransform>),
}

impl std::fmt::Debug for RepairKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RepairKind::Identity => write!(f, "Identity"),
            RepairKind::LiteralRewrite => write!(f, "LiteralRewrite"),
            RepairKind::ConstantEpsilon => write!(f, "ConstantEpsilon"),
            RepairKind::DetectorBacked { max_len, budget } => f
                .debug_struct("DetectorBacked")
                .field("max_len", max_len)
                .field("budget", budget)
                .finish(),
            RepairKind::HostCustom(_) => write!(f, "HostCustom(..)"),
        }
    }
}

/// A named total transformation on program indices.
#[derive(Debug, Clone)]
pub struct RepairOperator {
    pub name: String,
    pub kind: RepairKind,
}

enum InternalScan {
    Witness(Instance),
    Clean,
    DivergedObserved,
}

impl RepairOperator {
    pub fn identity() -> RepairOperator {
        RepairOperator {
            name: "identity".into(),
            kind: RepairKind::Identity,
        }
    }

    pub fn literal_rewrite() -> RepairOperator {
        RepairOperator {
            name: "rewrite-literal".into(),
            kind: RepairKind::LiteralRewrite,
        }
    }

    pub fn constant_epsilon() -> RepairOperator {
        RepairOperator {
            name: "constant-epsilon".into(),
            kind: RepairKind::ConstantEpsilon,
        }
    }

    pub fn detector_backed(max_len: usize, budget: u64) -> RepairOperator {
        RepairOperator {
            name: "detector-backed".into(),
            kind: RepairKind::DetectorBacked { max_len, budget },
        }
    }

    pub fn host_custom(
        name: impl Into<String>,
        transform: impl Fn(&ProgramIndex) -> ProgramIndex + Send + Sync + 'static,
    ) -> RepairOperator {
        RepairOperator {
            name: name.into(),
            kind: RepairKind::HostCustom(Arc::new(transform)),
        }
    }

    /// Whether the operator is meant to satisfy the conservative discipline.
    pub fn intended_conservative(&self) -> bool {
        matches!(
            self.kind,
            RepairKind::Identity | RepairKind::DetectorBacked { .. }
        )
    }

    /// Applies the transformation host-side: internal evaluations run on
    /// fresh budgets from the operator's own cap.
    pub fn transform(
        &self,
        e: &ProgramIndex,
        cfg: &ScenarioConfig,
        registry: &OracleRegistry,
    ) -> ProgramIndex {
        self.apply(e, cfg, registry, None)
    }

    fn apply(
        &self,
        e: &ProgramIndex,
        cfg: &ScenarioConfig,
        registry: &OracleRegistry,
        fuel: Option<&mut Fuel>,
    ) -> ProgramIndex {
        match &self.kind {
            RepairKind::Identity => e.clone(),
            RepairKind::ConstantEpsilon => ProgramAst::Const(String::new()).index(),
            RepairKind::HostCustom(transform) => transform(e),
            RepairKind::LiteralRewrite => {
                let Ok(ast) = e.ast() else { return e.clone() };
                rewrite_literal(&ast, &cfg.witness_kit.y_plus, &cfg.witness_kit.epsilon).index()
            }
            RepairKind::DetectorBacked { max_len, budget } => {
                let Ok(ast) = e.ast() else { return e.clone() };
                let scan = self.internal_detect(&ast, *max_len, *budget, cfg, registry, fuel);
                match scan {
                    InternalScan::Witness(witness) => wrap_witness_family(&ast, &witness, cfg),
                    InternalScan::Clean | InternalScan::DivergedObserved => e.clone(),
                }
            }
        }
    }

    /// Bounded detection in operator position: scans the domain in order and
    /// stops at the first witness or the first budget-exhausted evaluation.
    /// Oracle-side, each evaluation draws the caller's remaining budget
    /// capped at the operator's own; host-side each gets the cap fresh.
    fn internal_detect(
        &self,
        ast: &ProgramAst,
        max_len: usize,
        budget: u64,
        cfg: &ScenarioConfig,
        registry: &OracleRegistry,
        mut fuel: Option<&mut Fuel>,
    ) -> InternalScan {
        for x in cfg.alphabet.instances_up_to(max_len) {
            let outcome = match fuel.as_deref_mut() {
                Some(meter) => eval_within(ast, x.as_str(), meter, budget, registry),
                None => eval(ast, x.as_str(), budget, registry),
            };
            let Ok(outcome) = outcome else {
                // Configuration faults inside an operator's own detection
                // count as failed repair attempts, not crashes.
                return InternalScan::DivergedObserved;
            };
            match outcome.status {
                EvalStatus::Diverged => return InternalScan::DivergedObserved,
                EvalStatus::Halted(output) => {
                    if beyond_warrant_score(&x, &output, cfg) > 0 {
                        return InternalScan::Witness(x);
                    }
                }
            }
        }
        InternalScan::Clean
    }

    /// Registers this operator under [`PHI_ORACLE`] so gadget programs can
    /// invoke it. Reentrant: the oracle may be called from evaluations it
    /// itself started.
    pub fn register(&self, registry: &mut OracleRegistry, cfg: &ScenarioConfig) {
        let operator = self.clone();
        let cfg = cfg.clone();
        registry.register(PHI_ORACLE, move |arg, fuel, active_registry| {
            match ProgramIndex::parse(arg) {
                Ok(index) => Ok(operator
                    .apply(&index, &cfg, active_registry, Some(fuel))
                    .into_string()),
                // Total on arbitrary text: non-indices pass through.
                Err(_) => Ok(arg.to_string()),
            }
        });
    }
}

fn rewrite_literal(ast: &ProgramAst, from: &str, to: &str) -> ProgramAst {
    let recurse = |t: &ProgramAst| Box::new(rewrite_literal(t, from, to));
    match ast {
        ProgramAst::Const(s) if s == from => ProgramAst::Const(to.to_string()),
        ProgramAst::Const(_)
        | ProgramAst::Input
        | ProgramAst::First
        | ProgramAst::Second
        | ProgramAst::MatchPad(_)
        | ProgramAst::PadCount(_)
        | ProgramAst::Num(_) => ast.clone(),
        ProgramAst::Concat(a, b) => ProgramAst::Concat(recurse(a), recurse(b)),
        ProgramAst::Eq(a, b) => ProgramAst::Eq(recurse(a), recurse(b)),
        ProgramAst::If(c, t, e) => ProgramAst::If(recurse(c), recurse(t), recurse(e)),
        ProgramAst::SimTm { tm, input, steps } => ProgramAst::SimTm {
            tm: tm.clone(),
            input: recurse(input),
            steps: recurse(steps),
        },
        ProgramAst::Sq(t) => ProgramAst::Sq(recurse(t)),
        ProgramAst::Eval(a, b) => ProgramAst::Eval(recurse(a), recurse(b)),
        ProgramAst::Specialize(a, b) => ProgramAst::Specialize(recurse(a), recurse(b)),
        ProgramAst::Oracle(name, t) => ProgramAst::Oracle(name.clone(), recurse(t)),
    }
}

/// Wraps a program to output the empty implementation on the witness's pad
/// family, leaving all other instances to the original program.
fn wrap_witness_family(ast: &ProgramAst, witness: &Instance, cfg: &ScenarioConfig) -> ProgramIndex {
    let base = witness.strip_pads(cfg.alphabet.pad());
    ProgramAst::If(
        Box::new(ProgramAst::MatchPad(base.as_str().to_string())),
        Box::new(ProgramAst::Const(cfg.witness_kit.epsilon.clone())),
        Box::new(ast.clone()),
    )
    .index()
}

/// The shipped operator set: the trivially conservative identity, the
/// non-conservative literal rewriter, the uniformly eliminating constant
/// collapse, and the conservative detector-backed repair.
pub fn builtin_repair_operators(_cfg: &ScenarioConfig) -> Vec<RepairOperator> {
    vec![
        RepairOperator::identity(),
        RepairOperator::literal_rewrite(),
        RepairOperator::constant_epsilon(),
        RepairOperator::detector_backed(2, 600),
    ]
}

/// A registry with the operator installed as PHI and its gadget map as G:
/// everything a self-referential construction needs.
pub fn registry_for(phi: &RepairOperator, cfg: &ScenarioConfig) -> OracleRegistry {
    let mut registry = OracleRegistry::new();
    phi.register(&mut registry, cfg);
    make_gadget_map(cfg).register(&mut registry, "G");
    registry
}

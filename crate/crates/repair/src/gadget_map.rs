use pipeline_vm::{OracleRegistry, ProgramAst, ProgramIndex};
use signature_core::ScenarioConfig;

use crate::operator::PHI_ORACLE;

/// The self-referential gadget family: a total index map G where G(e) is the
/// two-case program
///
/// ```text
/// if PHI(e) = e and the input lies on the witness pad family
///     then output the committing implementation
///     else output the empty implementation
/// ```
///
/// The operator is consulted at evaluation time through the PHI oracle; the
/// map itself is pure text construction.
#[derive(Debug, Clone)]
pub struct GadgetMap {
    x0: String,
    y_plus: String,
    epsilon: String,
}

/// Builds the gadget map for a scenario. The operator it interrogates is
/// whatever is registered under [`PHI_ORACLE`] when the gadget runs.
pub fn make_gadget_map(cfg: &ScenarioConfig) -> GadgetMap {
    GadgetMap {
        x0: cfg.witness_kit.x0.clone(),
        y_plus: cfg.witness_kit.y_plus.clone(),
        epsilon: cfg.witness_kit.epsilon.clone(),
    }
}

impl GadgetMap {
    pub fn apply(&self, e: &ProgramIndex) -> ProgramIndex {
        let e_const = || Box::new(ProgramAst::Const(e.as_str().to_string()));
        let fixed_point_test = ProgramAst::Eq(
            Box::new(ProgramAst::Oracle(PHI_ORACLE.to_string(), e_const())),
            e_const(),
        );
        // AND through nested IF: both conditions or the empty branch.
        let both = ProgramAst::If(
            Box::new(fixed_point_test),
            Box::new(ProgramAst::MatchPad(self.x0.clone())),
            Box::new(ProgramAst::Const(String::new())),
        );
        ProgramAst::If(
            Box::new(both),
            Box::new(ProgramAst::Const(self.y_plus.clone())),
            Box::new(ProgramAst::Const(self.epsilon.clone())),
        )
        .index()
    }

    /// Registers the map as a plain text-to-text oracle.
    pub fn register(&self, registry: &mut OracleRegistry, name: impl Into<String>) {
        let map = self.clone();
        registry.register_pure(name, move |arg| match ProgramIndex::parse(arg) {
            Ok(index) => map.apply(&index).into_string(),
            Err(_) => arg.to_string(),
        });
    }
}

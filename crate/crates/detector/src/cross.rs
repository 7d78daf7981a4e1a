use pipeline_vm::{OracleRegistry, ProgramIndex};
use serde::Serialize;
use signature_core::ScenarioConfig;

use crate::{
    decide_overspecification, semidecide_overspecified, DetectionReport, DetectorError,
    SemiDecisionOutcome,
};

/// Agreement report between the bounded decision procedure and the
/// dovetailing semi-decider on the same program.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub decide: DetectionReport,
    pub semidecide: SemiDecisionOutcome,
    pub consistent: bool,
    pub notes: Vec<String>,
}

/// Runs both procedures and checks the two oracle-agreement implications:
/// a bounded witness must be semi-accepted given enough stages, and a
/// semi-accepted witness inside the bounded domain must be decided positive.
pub fn cross_check(
    program: &ProgramIndex,
    max_len: usize,
    cfg: &ScenarioConfig,
    budget: u64,
    stage_limit: u64,
    registry: &OracleRegistry,
) -> Result<CrossCheckReport, DetectorError> {
    let decide = decide_overspecification(program, max_len, cfg, budget, registry)?;
    let semidecide = semidecide_overspecified(program, cfg, stage_limit, registry)?;
    let mut notes = Vec::new();
    let mut consistent = true;

    if decide.verdict == 1 && !semidecide.accepted() {
        consistent = false;
        notes.push(format!(
            "bounded witness {:?} exists but the semi-decider exhausted {} stages",
            decide.witness, semidecide.stage_reached
        ));
    }
    if let (true, Some(witness)) = (semidecide.accepted(), semidecide.witness.as_deref()) {
        if witness.chars().count() <= max_len && decide.verdict != 1 {
            consistent = false;
            notes.push(format!(
                "semi-decider witness {witness:?} lies inside the bounded domain \
                 but the bounded verdict is 0"
            ));
        }
    }
    if decide.verdict == 1 && semidecide.accepted() && decide.witness != semidecide.witness {
        notes.push(format!(
            "witnesses differ: bounded {:?}, dovetailed {:?}",
            decide.witness, semidecide.witness
        ));
    }

    Ok(CrossCheckReport {
        decide,
        semidecide,
        consistent,
        notes,
    })
}

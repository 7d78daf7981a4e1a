use detector::decide_overspecification;
use pipeline_vm::{OracleRegistry, ProgramIndex};
use serde::Serialize;
use signature_core::ScenarioConfig;

use crate::operator::RepairOperator;
use crate::RepairError;

/// Conservativeness audit: for every program whose bounded detection is
/// clean, the operator must return it unchanged.
#[derive(Debug, Clone, Serialize)]
pub struct ConservativenessReport {
    pub operator: String,
    pub programs_checked: usize,
    /// Programs with a clean verdict that the operator nevertheless rewrote.
    pub violations: Vec<String>,
}

impl ConservativenessReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_conservative_on_domain(
    phi: &RepairOperator,
    programs: &[ProgramIndex],
    n_cap: usize,
    cfg: &ScenarioConfig,
    budget: u64,
    registry: &OracleRegistry,
) -> Result<ConservativenessReport, RepairError> {
    let mut violations = Vec::new();
    for e in programs {
        let detection = decide_overspecification(e, n_cap, cfg, budget, registry)?;
        if detection.verdict == 0 && phi.transform(e, cfg, registry) != *e {
            violations.push(e.as_str().to_string());
        }
    }
    Ok(ConservativenessReport {
        operator: phi.name.clone(),
        programs_checked: programs.len(),
        violations,
    })
}

/// Uniform-elimination audit: every transformed program must be clean on the
/// bounded domain.
#[derive(Debug, Clone, Serialize)]
pub struct EliminationReport {
    pub operator: String,
    pub programs_checked: usize,
    /// Programs whose transformed form still shows a positive verdict.
    pub violations: Vec<String>,
}

impl EliminationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_uniform_elimination_on_domain(
    phi: &RepairOperator,
    programs: &[ProgramIndex],
    n_cap: usize,
    cfg: &ScenarioConfig,
    budget: u64,
    registry: &OracleRegistry,
) -> Result<EliminationReport, RepairError> {
    let mut violations = Vec::new();
    for e in programs {
        let repaired = phi.transform(e, cfg, registry);
        let detection = decide_overspecification(&repaired, n_cap, cfg, budget, registry)?;
        if detection.verdict != 0 {
            violations.push(e.as_str().to_string());
        }
    }
    Ok(EliminationReport {
        operator: phi.name.clone(),
        programs_checked: programs.len(),
        violations,
    })
}

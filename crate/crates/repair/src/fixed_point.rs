use detector::{decide_overspecification, DetectionReport};
use pipeline_vm::{eval, kleene_fixed_point, EvalStatus};
use serde::Serialize;
use signature_core::ScenarioConfig;

use crate::gadget_map::make_gadget_map;
use crate::operator::{registry_for, RepairOperator};
use crate::RepairError;

/// Which gadget clause fired on a sampled input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchSample {
    pub input: String,
    /// "committing", "empty", or "diverged".
    pub branch: String,
}

/// The demonstrator's full output: the constructed fixed point, whether the
/// operator fixes it, its bounded detection, and the spot-checked
/// fixed-point law.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub phi_name: String,
    pub e_star: String,
    pub phi_of_e_star_equals_e_star: bool,
    pub detection: DetectionReport,
    pub fixed_point_spot_check_ok: bool,
    pub gadget_branch_taken: Vec<BranchSample>,
}

/// Builds the gadget family for the operator, takes its fixed point, and
/// reports the two claims: the operator fixes the constructed index, and the
/// constructed index is overspecified on the bounded domain.
///
/// For a non-conservative operator the report instead shows the collapse:
/// the fixed-point index is not fixed, its outputs are all empty, and the
/// detection verdict is 0. That outcome is expected behavior, so it is
/// reported, never asserted.
pub fn construct_overspecified_fixed_point(
    phi: &RepairOperator,
    cfg: &ScenarioConfig,
    n_cap: usize,
    budget: u64,
) -> Result<FixedPointReport, RepairError> {
    let registry = registry_for(phi, cfg);
    let e_star = kleene_fixed_point("G", &registry)?;

    let transformed = phi.transform(&e_star, cfg, &registry);
    let fixed = transformed == e_star;

    let detection = decide_overspecification(&e_star, n_cap, cfg, budget, &registry)?;

    // Spot check of the fixed-point law on the small domain.
    let g_of_e_star = make_gadget_map(cfg).apply(&e_star);
    let left = e_star.ast()?;
    let right = g_of_e_star.ast()?;
    let mut spot_ok = true;
    for x in cfg.alphabet.instances_up_to(3) {
        let lhs = eval(&left, x.as_str(), budget, &registry)?;
        let rhs = eval(&right, x.as_str(), budget, &registry)?;
        if lhs.status != rhs.status {
            spot_ok = false;
            break;
        }
    }

    // Which clause fires where.
    let x0 = &cfg.witness_kit.x0;
    let samples = [
        x0.clone(),
        format!("{x0}{}", cfg.alphabet.pad()),
        format!("{x0}{0}{0}", cfg.alphabet.pad()),
        "b".to_string(),
        String::new(),
    ];
    let mut gadget_branch_taken = Vec::new();
    for input in samples {
        let outcome = eval(&left, &input, budget, &registry)?;
        let branch = match outcome.status {
            EvalStatus::Diverged => "diverged",
            EvalStatus::Halted(ref out) if out == &cfg.witness_kit.y_plus => "committing",
            EvalStatus::Halted(_) => "empty",
        };
        gadget_branch_taken.push(BranchSample {
            input,
            branch: branch.to_string(),
        });
    }

    Ok(FixedPointReport {
        phi_name: phi.name.clone(),
        e_star: e_star.into_string(),
        phi_of_e_star_equals_e_star: fixed,
        detection,
        fixed_point_spot_check_ok: spot_ok,
        gadget_branch_taken,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 60_000;

    #[test]
    fn identity_operator_realizes_both_claims() {
        let cfg = ScenarioConfig::default_scenario();
        let report = construct_overspecified_fixed_point(
            &RepairOperator::identity(),
            &cfg,
            2,
            BUDGET,
        )
        .unwrap();
        assert!(report.phi_of_e_star_equals_e_star);
        assert_eq!(report.detection.verdict, 1);
        assert_eq!(report.detection.witness.as_deref(), Some("a"));
        assert!(report.fixed_point_spot_check_ok);
        assert_eq!(report.gadget_branch_taken[0].branch, "committing");
        assert_eq!(report.gadget_branch_taken[3].branch, "empty");
    }

    #[test]
    fn detector_backed_operator_realizes_both_claims() {
        let cfg = ScenarioConfig::default_scenario();
        let report = construct_overspecified_fixed_point(
            &RepairOperator::detector_backed(2, 600),
            &cfg,
            2,
            BUDGET,
        )
        .unwrap();
        assert!(
            report.phi_of_e_star_equals_e_star,
            "internal budget exhaustion must force the identity fallback"
        );
        assert_eq!(report.detection.verdict, 1);
        assert_eq!(report.detection.witness.as_deref(), Some("a"));
        assert!(report.fixed_point_spot_check_ok);
    }

    #[test]
    fn constant_collapse_shows_the_epsilon_outcome() {
        let cfg = ScenarioConfig::default_scenario();
        let report = construct_overspecified_fixed_point(
            &RepairOperator::constant_epsilon(),
            &cfg,
            2,
            BUDGET,
        )
        .unwrap();
        assert!(!report.phi_of_e_star_equals_e_star);
        assert_eq!(report.detection.verdict, 0);
        assert!(report
            .gadget_branch_taken
            .iter()
            .all(|s| s.branch == "empty"));
    }
}

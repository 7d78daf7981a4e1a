use pipeline_vm::{eval, EvalStatus, OracleRegistry, ProgramIndex};
use serde::Serialize;
use signature_core::{beyond_warrant_score, ScenarioConfig};

use crate::{DetectionReport, DetectorError};

/// One scanned instance, for trace output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub instance: String,
    /// Output when the evaluation halted.
    pub output: Option<String>,
    /// Beyond-warrant score of (instance, output); absent when diverged.
    pub v_bw: Option<i64>,
    pub steps: u64,
}

/// Decides the overspecification predicate on the domain of instances of
/// length at most `max_len`.
///
/// Instances are enumerated in length-lexicographic order with a fresh
/// budget each; the scan stops at the first positive beyond-warrant score.
/// Evaluations that exhaust the budget are recorded and treated as
/// non-witnesses.
pub fn decide_overspecification(
    program: &ProgramIndex,
    max_len: usize,
    cfg: &ScenarioConfig,
    budget: u64,
    registry: &OracleRegistry,
) -> Result<DetectionReport, DetectorError> {
    let (report, _) = scan(program, max_len, cfg, budget, registry, false)?;
    Ok(report)
}

/// As [`decide_overspecification`], also returning one row per scanned
/// instance.
pub fn decide_with_trace(
    program: &ProgramIndex,
    max_len: usize,
    cfg: &ScenarioConfig,
    budget: u64,
    registry: &OracleRegistry,
) -> Result<(DetectionReport, Vec<ScanRow>), DetectorError> {
    scan(program, max_len, cfg, budget, registry, true)
}

fn scan(
    program: &ProgramIndex,
    max_len: usize,
    cfg: &ScenarioConfig,
    budget: u64,
    registry: &OracleRegistry,
    trace: bool,
) -> Result<(DetectionReport, Vec<ScanRow>), DetectorError> {
    let ast = program.ast()?;
    let mut report = DetectionReport {
        verdict: 0,
        witness: None,
        instances_scanned: 0,
        n_cap: max_len,
        eval_steps_total: 0,
        budget_exceeded_on: Vec::new(),
    };
    let mut rows = Vec::new();
    for x in cfg.alphabet.instances_up_to(max_len) {
        let outcome = eval(&ast, x.as_str(), budget, registry)?;
        report.instances_scanned += 1;
        report.eval_steps_total += outcome.steps_used;
        match outcome.status {
            EvalStatus::Diverged => {
                report.budget_exceeded_on.push(x.as_str().to_string());
                if trace {
                    rows.push(ScanRow {
                        instance: x.as_str().to_string(),
                        output: None,
                        v_bw: None,
                        steps: outcome.steps_used,
                    });
                }
            }
            EvalStatus::Halted(output) => {
                let score = beyond_warrant_score(&x, &output, cfg);
                if trace {
                    rows.push(ScanRow {
                        instance: x.as_str().to_string(),
                        output: Some(output),
                        v_bw: Some(score),
                        steps: outcome.steps_used,
                    });
                }
                if score > 0 {
                    report.verdict = 1;
                    report.witness = Some(x.as_str().to_string());
                    break;
                }
            }
        }
    }
    Ok((report, rows))
}

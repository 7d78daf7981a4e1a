use pipeline_vm::{eval, EvalStatus, OracleRegistry, ProgramIndex};
use signature_core::{beyond_warrant_score, Instance, ScenarioConfig};

use crate::{DetectorError, SemiDecisionOutcome, SemiStatus};

/// Dovetails evaluation over the unbounded instance domain.
///
/// At stage t the procedure runs the program on the first t + 1 instances of
/// the length-lexicographic enumeration, each with a budget of t steps, and
/// accepts as soon as some halted output has positive beyond-warrant score.
/// Scoring is charged outside the stage budget.
///
/// An instance that halts with a non-positive score at some stage halts
/// identically at every later stage (budget monotonicity), so it is settled
/// once and never re-simulated; only instances still diverging are retried
/// with bigger budgets. This keeps large stage limits tractable without
/// changing the accepted witness or stage.
pub fn semidecide_overspecified(
    program: &ProgramIndex,
    cfg: &ScenarioConfig,
    stage_limit: u64,
    registry: &OracleRegistry,
) -> Result<SemiDecisionOutcome, DetectorError> {
    let ast = program.ast()?;
    let mut enumeration = cfg.alphabet.instance_stream();
    let mut instances: Vec<Instance> = Vec::new();
    // Indices (ascending) of instances not yet settled as non-witnesses.
    let mut pending: Vec<usize> = Vec::new();

    for stage in 0..=stage_limit {
        if let Some(next) = enumeration.next() {
            pending.push(instances.len());
            instances.push(next);
        }
        let mut still_pending = Vec::with_capacity(pending.len());
        let mut accepted = None;
        for &j in &pending {
            if accepted.is_some() {
                still_pending.push(j);
                continue;
            }
            let x = &instances[j];
            let outcome = eval(&ast, x.as_str(), stage, registry)?;
            match outcome.status {
                EvalStatus::Diverged => still_pending.push(j),
                EvalStatus::Halted(output) => {
                    if beyond_warrant_score(x, &output, cfg) > 0 {
                        accepted = Some(x.as_str().to_string());
                    }
                    // Settled either way: a witness accepts, a non-witness
                    // stays a non-witness at every larger budget.
                }
            }
        }
        if let Some(witness) = accepted {
            return Ok(SemiDecisionOutcome {
                status: SemiStatus::Accepted,
                witness: Some(witness),
                stage_reached: stage,
            });
        }
        pending = still_pending;
    }

    Ok(SemiDecisionOutcome {
        status: SemiStatus::Exhausted,
        witness: None,
        stage_reached: stage_limit,
    })
}

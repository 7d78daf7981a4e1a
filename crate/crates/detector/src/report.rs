use serde::Serialize;

/// Verdict of the bounded decision procedure, with its witness and cost
/// counters. `verdict` is the value of the overspecification predicate on
/// the bounded domain: 1 with the first (length-lex) witness, else 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetectionReport {
    pub verdict: u8,
    pub witness: Option<String>,
    pub instances_scanned: u64,
    pub n_cap: usize,
    pub eval_steps_total: u64,
    /// Instances whose evaluation exhausted the budget. Surfaced rather than
    /// silently scored, since bounded execution cannot confirm totality.
    pub budget_exceeded_on: Vec<String>,
}

impl DetectionReport {
    pub fn overspecified(&self) -> bool {
        self.verdict == 1
    }

    pub fn clean(&self) -> bool {
        self.verdict == 0 && self.budget_exceeded_on.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SemiStatus {
    Accepted,
    Exhausted,
}

/// Outcome of the dovetailing semi-decider.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiDecisionOutcome {
    pub status: SemiStatus,
    pub witness: Option<String>,
    pub stage_reached: u64,
}

impl SemiDecisionOutcome {
    pub fn accepted(&self) -> bool {
        self.status == SemiStatus::Accepted
    }
}

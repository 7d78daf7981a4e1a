use crate::{Instance, ScenarioConfig};

/// The structural compatibility score v(x, y): the sum of V(y, s) over every
/// feature s in the signature S(x).
pub fn compatibility_score(x: &Instance, y: &str, cfg: &ScenarioConfig) -> i64 {
    cfg.signature(x).iter().map(|s| cfg.compat(y, s)).sum()
}

/// The beyond-warrant score: the sum of V(y, s) over the features implied by
/// the signature but absent from the warrant, S(x) \ W(x). A positive value
/// means y commits to structure the evidence for x does not support.
pub fn beyond_warrant_score(x: &Instance, y: &str, cfg: &ScenarioConfig) -> i64 {
    let warrant = cfg.warrant(x);
    cfg.signature(x)
        .iter()
        .filter(|s| !warrant.contains(*s))
        .map(|s| cfg.compat(y, s))
        .sum()
}

/// The warranted remainder: the sum of V(y, s) over W(x). Together with the
/// beyond-warrant score this decomposes the full compatibility score.
pub fn warranted_score(x: &Instance, y: &str, cfg: &ScenarioConfig) -> i64 {
    cfg.warrant(x).iter().map(|s| cfg.compat(y, s)).sum()
}

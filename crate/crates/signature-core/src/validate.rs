use serde::Serialize;

use crate::ScenarioConfig;

/// One failed scenario check, naming what broke and where.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

/// Outcome of [`validate_scenario`]: all violations found, in check order.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub checks_run: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn record(&mut self, check: &str, detail: String) {
        self.ok = false;
        self.violations.push(Violation {
            check: check.to_string(),
            detail,
        });
    }
}

/// Checks every scenario and witness-kit invariant for padding depths
/// 0..=check_bound and instances up to length check_bound.
///
/// Violations are report content, not errors: a malformed scenario yields a
/// report naming the first offending instance, depth, or feature per check.
pub fn validate_scenario(cfg: &ScenarioConfig, check_bound: usize) -> ValidationReport {
    let mut report = ValidationReport {
        ok: true,
        checks_run: 0,
        violations: Vec::new(),
    };
    let pad = cfg.alphabet.pad();

    // Warrant must be a subset of the signature, exhaustively over Σ^{≤bound}.
    report.checks_run += 1;
    'subset: for x in cfg.alphabet.instances_up_to(check_bound) {
        let sig = cfg.signature(&x);
        for w in cfg.warrant(&x) {
            if !sig.contains(&w) {
                report.record(
                    "warrant_subset_of_signature",
                    format!("W({x:?}) contains {w} which is outside S({x:?})"),
                );
                break 'subset;
            }
        }
    }

    // The witness base instance must be valid over the alphabet.
    report.checks_run += 1;
    let x0 = match cfg.witness_x0() {
        Ok(x0) => x0,
        Err(e) => {
            report.record("witness_x0_valid", e.to_string());
            return report;
        }
    };

    // S and W must not move when pads are appended to x0.
    report.checks_run += 1;
    let sig0 = cfg.signature(&x0);
    let war0 = cfg.warrant(&x0);
    for n in 0..=check_bound {
        let padded = x0.padded(pad, n);
        if cfg.signature(&padded) != sig0 || cfg.warrant(&padded) != war0 {
            report.record(
                "padding_stability",
                format!("S or W changes at padding depth {n} ({padded:?})"),
            );
            break;
        }
    }

    // s0 must sit in S(x0·#^n) \ W(x0·#^n) at every checked depth.
    report.checks_run += 1;
    let s0 = &cfg.witness_kit.s0;
    for n in 0..=check_bound {
        let padded = x0.padded(pad, n);
        let sig = cfg.signature(&padded);
        let war = cfg.warrant(&padded);
        if !sig.contains(s0) || war.contains(s0) {
            report.record(
                "s0_beyond_warrant",
                format!("at depth {n}: s0 = {s0} not in S \\ W for {padded:?}"),
            );
            break;
        }
    }

    // The positive witness implementation must commit to s0.
    report.checks_run += 1;
    if cfg.compat(&cfg.witness_kit.y_plus, s0) != 1 {
        report.record(
            "y_plus_commits_to_s0",
            format!(
                "V({:?}, {s0}) = {} instead of +1",
                cfg.witness_kit.y_plus,
                cfg.compat(&cfg.witness_kit.y_plus, s0)
            ),
        );
    }

    // The epsilon implementation must be structure-free on the universe.
    report.checks_run += 1;
    if !cfg.witness_kit.epsilon.is_empty() {
        report.record(
            "epsilon_empty",
            format!("epsilon is {:?}, not the empty string", cfg.witness_kit.epsilon),
        );
    }
    for s in cfg.feature_universe() {
        let v = cfg.compat(&cfg.witness_kit.epsilon, &s);
        if v != 0 {
            report.record(
                "epsilon_structure_free",
                format!("V(epsilon, {s}) = {v} instead of 0"),
            );
            break;
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CompatEntry, Feature, Pattern, Rule, RuleSet, ScenarioConfig};

    #[test]
    fn default_scenario_passes_at_depth_eight() {
        let report = validate_scenario(&ScenarioConfig::default_scenario(), 8);
        assert!(report.ok, "unexpected violations: {:?}", report.violations);
    }

    #[test]
    fn warrant_outside_signature_is_named() {
        let base = ScenarioConfig::default_scenario();
        // Warrant "b" with a feature its signature does not imply.
        let warrant_rules = RuleSet::new(vec![Rule {
            pattern: Pattern::Equals {
                literal: "b".to_string(),
            },
            features: [Feature::new("dyn").unwrap()].into_iter().collect(),
        }]);
        let cfg = ScenarioConfig::new(
            base.alphabet.clone(),
            base.signature_rules.clone(),
            warrant_rules,
            base.compat_entries().to_vec(),
            base.witness_kit.clone(),
        )
        .unwrap();
        let report = validate_scenario(&cfg, 3);
        assert!(!report.ok);
        let v = &report.violations[0];
        assert_eq!(v.check, "warrant_subset_of_signature");
        assert!(v.detail.contains("\"b\""), "must name the instance: {}", v.detail);
    }

    #[test]
    fn uncommitted_y_plus_is_a_witness_kit_violation() {
        let base = ScenarioConfig::default_scenario();
        // Drop the (YDyn, dyn) = +1 entry.
        let entries: Vec<CompatEntry> = base
            .compat_entries()
            .iter()
            .filter(|e| !(e.implementation == "YDyn" && e.feature.as_str() == "dyn"))
            .cloned()
            .collect();
        let cfg = ScenarioConfig::new(
            base.alphabet.clone(),
            base.signature_rules.clone(),
            base.warrant_rules.clone(),
            entries,
            base.witness_kit.clone(),
        )
        .unwrap();
        let report = validate_scenario(&cfg, 3);
        assert!(report
            .violations
            .iter()
            .any(|v| v.check == "y_plus_commits_to_s0"));
    }

    #[test]
    fn s0_missing_beyond_warrant_is_reported_with_depth() {
        let base = ScenarioConfig::default_scenario();
        // Warrant everything the signature implies: s0 no longer beyond warrant.
        let cfg = ScenarioConfig::new(
            base.alphabet.clone(),
            base.signature_rules.clone(),
            base.signature_rules.clone(),
            base.compat_entries().to_vec(),
            base.witness_kit.clone(),
        )
        .unwrap();
        let report = validate_scenario(&cfg, 3);
        assert!(report
            .violations
            .iter()
            .any(|v| v.check == "s0_beyond_warrant" && v.detail.contains("depth 0")));
    }
}

//! Property checks over randomly built scenarios: the score decomposition
//! and the exhaustively checked subset and padding laws.

use proptest::prelude::*;
use signature_core::{
    beyond_warrant_score, compatibility_score, validate_scenario, warranted_score, Alphabet,
    CompatEntry, Feature, Instance, Pattern, Rule, RuleSet, ScenarioConfig, WitnessKit,
};
use std::collections::BTreeSet;

fn feature(label: &str) -> Feature {
    Feature::new(label).unwrap()
}

/// A scenario with warrant ⊆ signature by construction: the signature rule
/// grants `sig` on the witness family, the warrant rule a subset of it.
fn build_scenario(
    sig: &BTreeSet<String>,
    warrant: &BTreeSet<String>,
    compat: &[(String, String, i8)],
) -> ScenarioConfig {
    let alphabet = Alphabet::new(vec!['a', 'b', '#'], '#').unwrap();
    let signature_rules = RuleSet::new(vec![Rule {
        pattern: Pattern::LiteralThenPads {
            literal: "a".into(),
        },
        features: sig.iter().map(|s| feature(s)).collect(),
    }]);
    let warrant_rules = RuleSet::new(vec![Rule {
        pattern: Pattern::LiteralThenPads {
            literal: "a".into(),
        },
        features: warrant.iter().map(|s| feature(s)).collect(),
    }]);
    let entries = compat
        .iter()
        .map(|(y, s, v)| CompatEntry {
            implementation: y.clone(),
            feature: feature(s),
            value: *v,
        })
        .collect();
    ScenarioConfig::new(
        alphabet,
        signature_rules,
        warrant_rules,
        entries,
        WitnessKit {
            x0: "a".into(),
            s0: feature("f0"),
            y_plus: "Y".into(),
            epsilon: String::new(),
        },
    )
    .unwrap()
}

proptest! {
    #[test]
    fn score_decomposition_is_exact(
        sig_labels in prop::collection::btree_set("f[0-9]", 1..6),
        warrant_mask in prop::collection::vec(any::<bool>(), 6),
        values in prop::collection::vec(("Y[AB]?", "f[0-9]", -1i8..=1), 0..10),
        x in "[ab#]{0,4}",
        y in "Y[AB]?",
    ) {
        let warrant: BTreeSet<String> = sig_labels
            .iter()
            .zip(warrant_mask.iter().cycle())
            .filter(|(_, keep)| **keep)
            .map(|(s, _)| s.clone())
            .collect();
        let cfg = build_scenario(&sig_labels, &warrant, &values);
        let instance = Instance::new(x.clone(), &cfg.alphabet).unwrap();
        let total = compatibility_score(&instance, &y, &cfg);
        let beyond = beyond_warrant_score(&instance, &y, &cfg);
        let inside = warranted_score(&instance, &y, &cfg);
        prop_assert_eq!(total, beyond + inside);
        // Warrant built as a subset: the subset check must pass.
        for probe in cfg.alphabet.instances_up_to(3) {
            let s = cfg.signature(&probe);
            prop_assert!(cfg.warrant(&probe).iter().all(|w| s.contains(w)));
        }
    }

    #[test]
    fn padding_never_moves_scores(
        sig_labels in prop::collection::btree_set("f[0-9]", 1..5),
        values in prop::collection::vec(("Y[AB]?", "f[0-9]", -1i8..=1), 0..8),
        pads in 0usize..6,
        y in "Y[AB]?",
    ) {
        let cfg = build_scenario(&sig_labels, &BTreeSet::new(), &values);
        let x0 = Instance::new("a", &cfg.alphabet).unwrap();
        let padded = x0.padded(cfg.alphabet.pad(), pads);
        prop_assert_eq!(
            beyond_warrant_score(&x0, &y, &cfg),
            beyond_warrant_score(&padded, &y, &cfg)
        );
    }
}

#[test]
fn validator_accepts_conforming_random_style_scenario() {
    let sig: BTreeSet<String> = ["f0", "f1"].iter().map(|s| s.to_string()).collect();
    let warrant: BTreeSet<String> = ["f1"].iter().map(|s| s.to_string()).collect();
    let cfg = build_scenario(
        &sig,
        &warrant,
        &[("Y".to_string(), "f0".to_string(), 1)],
    );
    let report = validate_scenario(&cfg, 6);
    assert!(report.ok, "violations: {:?}", report.violations);
}

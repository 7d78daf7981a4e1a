//! Reduction correctness, cost accounting, and completeness of the bounded
//! decision procedure, checked against independent oracles.

use detector::{build_halting_gadget, cross_check, decide_overspecification};
use pipeline_vm::{eval, simulate, OracleRegistry, ProgramIndex, TmDescriptor, TmMove, TmRuleDescriptor};
use signature_core::{beyond_warrant_score, ScenarioConfig};

const BUDGET: u64 = 100_000;

fn cfg() -> ScenarioConfig {
    ScenarioConfig::default_scenario()
}

/// Straight-line machine halting on the empty word in exactly `steps`
/// transitions.
fn chain_tm(steps: usize) -> TmDescriptor {
    let states: Vec<String> = (0..=steps).map(|i| format!("q{i}")).collect();
    let rules = (0..steps)
        .flat_map(|i| {
            ['_', '1'].into_iter().map(move |read| TmRuleDescriptor {
                state: format!("q{i}"),
                read,
                write: '_',
                direction: TmMove::R,
                next: format!("q{}", i + 1),
            })
        })
        .collect();
    TmDescriptor {
        states,
        tape_alphabet: vec!['_', '1'],
        start: "q0".into(),
        halting: vec![format!("q{steps}")],
        rules,
    }
}

/// Runs right forever, writing ones.
fn right_runner() -> TmDescriptor {
    TmDescriptor {
        states: vec!["q0".into()],
        tape_alphabet: vec!['_', '1'],
        start: "q0".into(),
        halting: vec![],
        rules: ['_', '1']
            .into_iter()
            .map(|read| TmRuleDescriptor {
                state: "q0".into(),
                read,
                write: '1',
                direction: TmMove::R,
                next: "q0".into(),
            })
            .collect(),
    }
}

/// Bounces between two cells forever.
fn ping_pong() -> TmDescriptor {
    let rule = |state: &str, read: char, dir: TmMove, next: &str| TmRuleDescriptor {
        state: state.into(),
        read,
        write: read,
        direction: dir,
        next: next.into(),
    };
    TmDescriptor {
        states: vec!["q0".into(), "q1".into()],
        tape_alphabet: vec!['_', '1'],
        start: "q0".into(),
        halting: vec![],
        rules: vec![
            rule("q0", '_', TmMove::R, "q1"),
            rule("q0", '1', TmMove::R, "q1"),
            rule("q1", '_', TmMove::L, "q0"),
            rule("q1", '1', TmMove::L, "q0"),
        ],
    }
}

/// Independent threshold oracle: does any pad depth up to `max_pad` square
/// to at least the halting time?
fn some_square_reaches(max_pad: usize, halting_time: u64) -> bool {
    (0..=max_pad as u64).any(|n| n * n >= halting_time)
}

#[test]
fn fixture_halting_times_are_as_labeled() {
    for (tm, t) in [(chain_tm(1), 1), (chain_tm(4), 4), (chain_tm(9), 9)] {
        let run = simulate(&tm.to_token().unwrap(), "", 1_000);
        assert!(run.halted);
        assert_eq!(run.steps, t);
    }
    for tm in [right_runner(), ping_pong()] {
        let run = simulate(&tm.to_token().unwrap(), "", 100_000);
        assert!(!run.halted);
    }
}

#[test]
fn verdict_equals_square_threshold_for_every_pad_cap() {
    let cfg = cfg();
    let x0_len = cfg.witness_kit.x0.chars().count();
    let halting: Vec<(TmDescriptor, u64)> =
        vec![(chain_tm(1), 1), (chain_tm(4), 4), (chain_tm(9), 9)];
    for (tm, t) in &halting {
        let gadget = build_halting_gadget(tm, "", &cfg).unwrap();
        for pad_cap in 0..=4usize {
            let report = decide_overspecification(
                &gadget,
                x0_len + pad_cap,
                &cfg,
                BUDGET,
                &OracleRegistry::new(),
            )
            .unwrap();
            let expected = some_square_reaches(pad_cap, *t);
            assert_eq!(
                report.verdict == 1,
                expected,
                "halting time {t}, pad cap {pad_cap}"
            );
            assert!(report.budget_exceeded_on.is_empty());
        }
    }
    for tm in [right_runner(), ping_pong()] {
        let gadget = build_halting_gadget(&tm, "", &cfg).unwrap();
        for pad_cap in 0..=4usize {
            let report = decide_overspecification(
                &gadget,
                x0_len + pad_cap,
                &cfg,
                BUDGET,
                &OracleRegistry::new(),
            )
            .unwrap();
            assert_eq!(report.verdict, 0, "non-halting machine, pad cap {pad_cap}");
        }
    }
}

#[test]
fn scan_cost_matches_domain_size_on_clean_verdicts() {
    let cfg = cfg();
    let clean = ProgramIndex::parse("(CONST )").unwrap();
    // Independent cost oracle: sum powers of the alphabet size.
    let sizes: Vec<u64> = (0..=4usize)
        .map(|n| (0..=n as u32).map(|j| 3u64.pow(j)).sum())
        .collect();
    assert_eq!(sizes, vec![1, 4, 13, 40, 121]);
    for (n, expected) in sizes.iter().enumerate() {
        let report =
            decide_overspecification(&clean, n, &cfg, 1_000, &OracleRegistry::new()).unwrap();
        assert_eq!(report.instances_scanned, *expected, "max_len={n}");
        assert_eq!(report.verdict, 0);
    }
}

/// Second-pass brute force, enumerating in reverse order, fully independent
/// of the detector's scan. Returns whether any instance in the bounded
/// domain has a positive beyond-warrant score.
fn reverse_scan_has_witness(program: &ProgramIndex, max_len: usize, cfg: &ScenarioConfig) -> bool {
    let ast = program.ast().unwrap();
    let registry = OracleRegistry::new();
    let all: Vec<_> = cfg.alphabet.instances_up_to(max_len).collect();
    for x in all.iter().rev() {
        let outcome = eval(&ast, x.as_str(), BUDGET, &registry).unwrap();
        if let Some(output) = outcome.output() {
            if beyond_warrant_score(x, output, cfg) > 0 {
                return true;
            }
        }
    }
    false
}

#[test]
fn bounded_completeness_against_reverse_scan() {
    let cfg = cfg();
    let programs = [
        "(CONST )".to_string(),
        "(CONST YDyn)".to_string(),
        "(CONST YStatic)".to_string(),
        "(IF (MATCH_PAD b) (CONST YDyn) (CONST ))".to_string(),
        "(IF (EQ INPUT (CONST ab)) (CONST YDyn) (CONST ))".to_string(),
        build_halting_gadget(&chain_tm(4), "", &cfg)
            .unwrap()
            .into_string(),
        build_halting_gadget(&right_runner(), "", &cfg)
            .unwrap()
            .into_string(),
    ];
    for text in &programs {
        let program = ProgramIndex::parse(text).unwrap();
        for max_len in 0..=3usize {
            let report = decide_overspecification(
                &program,
                max_len,
                &cfg,
                BUDGET,
                &OracleRegistry::new(),
            )
            .unwrap();
            assert!(report.budget_exceeded_on.is_empty());
            let oracle = reverse_scan_has_witness(&program, max_len, &cfg);
            assert_eq!(
                report.verdict == 1,
                oracle,
                "program {text} at max_len {max_len}"
            );
        }
    }
}

#[test]
fn verdict_is_monotone_in_the_cap() {
    let cfg = cfg();
    let gadget = build_halting_gadget(&chain_tm(4), "", &cfg).unwrap();
    let mut seen_positive = false;
    for max_len in 0..=6usize {
        let report =
            decide_overspecification(&gadget, max_len, &cfg, BUDGET, &OracleRegistry::new())
                .unwrap();
        if seen_positive {
            assert_eq!(report.verdict, 1, "verdict dropped after cap {max_len}");
        }
        seen_positive |= report.verdict == 1;
    }
    assert!(seen_positive);
}

#[test]
fn witness_soundness_recomputes_positive() {
    let cfg = cfg();
    let gadget = build_halting_gadget(&chain_tm(9), "", &cfg).unwrap();
    let report =
        decide_overspecification(&gadget, 4, &cfg, BUDGET, &OracleRegistry::new()).unwrap();
    let witness = report.witness.expect("verdict 1 carries a witness");
    let x = signature_core::Instance::new(witness.clone(), &cfg.alphabet).unwrap();
    let ast = gadget.ast().unwrap();
    let output = eval(&ast, &witness, BUDGET, &OracleRegistry::new())
        .unwrap()
        .output()
        .expect("witness evaluation halts")
        .to_string();
    assert!(beyond_warrant_score(&x, &output, &cfg) > 0);
}

#[test]
fn cross_check_passes_on_the_fixture_family() {
    let cfg = cfg();
    let fixtures = [
        ProgramIndex::parse("(CONST YDyn)").unwrap(),
        ProgramIndex::parse("(CONST )").unwrap(),
        build_halting_gadget(&chain_tm(4), "", &cfg).unwrap(),
    ];
    for program in &fixtures {
        let report = cross_check(program, 3, &cfg, BUDGET, 5_000, &OracleRegistry::new()).unwrap();
        assert!(report.consistent, "{}: {:?}", program, report.notes);
    }
}

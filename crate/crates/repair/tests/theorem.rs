//! End-to-end checks of the fixed-point construction: gadget semantics,
//! the fixed-point law, both theorem claims for the conservative operators,
//! the impossibility corollary, and the three-way trade-off exhibit.

use pipeline_vm::{eval, EvalStatus, ProgramIndex};
use repair::{
    builtin_repair_operators, check_conservative_on_domain, check_uniform_elimination_on_domain,
    construct_overspecified_fixed_point, make_gadget_map, registry_for, RepairOperator,
};
use signature_core::ScenarioConfig;

const BUDGET: u64 = 60_000;

fn cfg() -> ScenarioConfig {
    ScenarioConfig::default_scenario()
}

fn conservative_set() -> Vec<RepairOperator> {
    vec![
        RepairOperator::identity(),
        RepairOperator::detector_backed(2, 600),
    ]
}

/// Expected gadget output per the two-case definition, computed from first
/// principles: the committing implementation iff the operator fixes the
/// index and the input is the witness base plus pads.
fn gadget_oracle(phi_fixes_e: bool, input: &str, cfg: &ScenarioConfig) -> String {
    let on_family = input
        .strip_prefix(cfg.witness_kit.x0.as_str())
        .is_some_and(|rest| rest.chars().all(|c| c == cfg.alphabet.pad()));
    if phi_fixes_e && on_family {
        cfg.witness_kit.y_plus.clone()
    } else {
        cfg.witness_kit.epsilon.clone()
    }
}

#[test]
fn gadget_semantics_exhaustive_over_small_domain() {
    let cfg = cfg();
    let cases: Vec<(RepairOperator, ProgramIndex, bool)> = vec![
        // Identity fixes everything.
        (
            RepairOperator::identity(),
            ProgramIndex::parse("(CONST )").unwrap(),
            true,
        ),
        (
            RepairOperator::identity(),
            ProgramIndex::parse("(CONST YDyn)").unwrap(),
            true,
        ),
        // The constant collapse fixes only the empty program's index.
        (
            RepairOperator::constant_epsilon(),
            ProgramIndex::parse("(CONST YDyn)").unwrap(),
            false,
        ),
        (
            RepairOperator::constant_epsilon(),
            ProgramIndex::parse("(CONST )").unwrap(),
            true,
        ),
        // The literal rewriter moves programs that mention the literal.
        (
            RepairOperator::literal_rewrite(),
            ProgramIndex::parse("(CONST YDyn)").unwrap(),
            false,
        ),
        (
            RepairOperator::literal_rewrite(),
            ProgramIndex::parse("(CONST YStatic)").unwrap(),
            true,
        ),
    ];
    for (phi, e, fixes) in cases {
        let registry = registry_for(&phi, &cfg);
        let gadget = make_gadget_map(&cfg).apply(&e);
        let ast = gadget.ast().unwrap();
        for x in cfg.alphabet.instances_up_to(4) {
            let out = eval(&ast, x.as_str(), BUDGET, &registry).unwrap();
            let expected = gadget_oracle(fixes, x.as_str(), &cfg);
            assert_eq!(
                out.status,
                EvalStatus::Halted(expected),
                "phi={} e={} x={:?}",
                phi.name,
                e,
                x
            );
        }
    }
}

#[test]
fn fixed_point_law_holds_over_small_domain() {
    let cfg = cfg();
    for phi in builtin_repair_operators(&cfg) {
        let registry = registry_for(&phi, &cfg);
        let e_star = pipeline_vm::kleene_fixed_point("G", &registry).unwrap();
        let g_of_e_star = make_gadget_map(&cfg).apply(&e_star);
        let left = e_star.ast().unwrap();
        let right = g_of_e_star.ast().unwrap();
        for x in cfg.alphabet.instances_up_to(4) {
            let lhs = eval(&left, x.as_str(), BUDGET, &registry).unwrap();
            let rhs = eval(&right, x.as_str(), BUDGET, &registry).unwrap();
            assert_eq!(
                lhs.status, rhs.status,
                "phi={} x={:?}: fixed-point law broken",
                phi.name, x
            );
        }
    }
}

#[test]
fn theorem_claims_hold_for_every_conservative_operator() {
    let cfg = cfg();
    for phi in conservative_set() {
        let report = construct_overspecified_fixed_point(&phi, &cfg, 2, BUDGET).unwrap();
        assert!(
            report.phi_of_e_star_equals_e_star,
            "{}: claim 1 (fixed) failed",
            phi.name
        );
        assert_eq!(report.detection.verdict, 1, "{}: claim 2 failed", phi.name);
        assert_eq!(report.detection.witness.as_deref(), Some("a"));
        assert!(report.fixed_point_spot_check_ok);
    }
}

#[test]
fn corollary_every_conservative_operator_fails_elimination_at_its_fixed_point() {
    let cfg = cfg();
    for phi in conservative_set() {
        let registry = registry_for(&phi, &cfg);
        let e_star = pipeline_vm::kleene_fixed_point("G", &registry).unwrap();
        let suite = vec![
            ProgramIndex::parse("(CONST )").unwrap(),
            ProgramIndex::parse("(CONST YStatic)").unwrap(),
            e_star.clone(),
        ];
        let report =
            check_uniform_elimination_on_domain(&phi, &suite, 2, &cfg, BUDGET, &registry).unwrap();
        assert!(
            report.violations.contains(&e_star.as_str().to_string()),
            "{}: the fixed point must violate uniform elimination",
            phi.name
        );
    }
}

#[test]
fn detector_backed_repairs_ordinary_programs_but_not_its_fixed_point() {
    let cfg = cfg();
    let phi = RepairOperator::detector_backed(2, 600);
    let registry = registry_for(&phi, &cfg);
    // Ordinary offender: repaired to a clean program.
    let offender = ProgramIndex::parse("(CONST YDyn)").unwrap();
    let repaired = phi.transform(&offender, &cfg, &registry);
    assert_ne!(repaired, offender);
    let verdict = detector::decide_overspecification(&repaired, 2, &cfg, BUDGET, &registry)
        .unwrap()
        .verdict;
    assert_eq!(verdict, 0);
    // Clean program: untouched.
    let clean = ProgramIndex::parse("(CONST )").unwrap();
    assert_eq!(phi.transform(&clean, &cfg, &registry), clean);
    // Its own fixed point: untouched because the internal evaluations
    // exhaust the inherited budget and the operator falls back.
    let e_star = pipeline_vm::kleene_fixed_point("G", &registry).unwrap();
    assert_eq!(phi.transform(&e_star, &cfg, &registry), e_star);
}

#[test]
fn three_way_trade_off_exhibit() {
    let cfg = cfg();
    let fixture = vec![
        ProgramIndex::parse("(CONST )").unwrap(),
        ProgramIndex::parse("(CONST YDyn)").unwrap(),
        ProgramIndex::parse("(IF (CONST ) (CONST YDyn) (CONST ))").unwrap(),
    ];

    // (a) The constant collapse abandons conservativeness but eliminates
    // uniformly on the suite.
    let collapse = RepairOperator::constant_epsilon();
    let registry = registry_for(&collapse, &cfg);
    let conservative =
        check_conservative_on_domain(&collapse, &fixture, 2, &cfg, BUDGET, &registry).unwrap();
    assert!(!conservative.ok(), "the collapse rewrites clean programs");
    let elimination =
        check_uniform_elimination_on_domain(&collapse, &fixture, 2, &cfg, BUDGET, &registry)
            .unwrap();
    assert!(elimination.ok());

    // (b) The detector-backed operator keeps conservativeness on the suite
    // but abandons completeness: its own fixed point passes uncorrected.
    let backed = RepairOperator::detector_backed(2, 600);
    let registry = registry_for(&backed, &cfg);
    let conservative =
        check_conservative_on_domain(&backed, &fixture, 2, &cfg, BUDGET, &registry).unwrap();
    assert!(conservative.ok());
    let e_star = pipeline_vm::kleene_fixed_point("G", &registry).unwrap();
    let with_fixed_point: Vec<ProgramIndex> =
        fixture.iter().cloned().chain([e_star.clone()]).collect();
    let elimination = check_uniform_elimination_on_domain(
        &backed,
        &with_fixed_point,
        2,
        &cfg,
        BUDGET,
        &registry,
    )
    .unwrap();
    assert_eq!(elimination.violations, vec![e_star.as_str().to_string()]);

    // (c) Domain restriction: the bounded detector decides the restricted
    // predicate exactly (its scan is the whole bounded domain), the working
    // trade-off the other two options are measured against.
    let report = detector::decide_overspecification(
        &ProgramIndex::parse("(CONST )").unwrap(),
        2,
        &cfg,
        BUDGET,
        &registry,
    )
    .unwrap();
    assert_eq!(report.instances_scanned, 13);
}

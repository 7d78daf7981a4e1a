//! Command-line front end: scenario validation, bounded detection, the
//! dovetailing semi-decider, halting gadgets, fixed-point demonstrations,
//! repair audits, and the aggregation experiments, all with reproducible
//! report emission.

mod manifest;
mod output;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use aggregation::{
    fit_btl, majority_pairwise, pairwise_win_probability, population_scores_asymmetric,
    sample_pairwise_outcomes, BenchmarkProfile, EvaluatorPopulation, PairwiseCounts,
};
use detector::{
    build_halting_gadget, decide_with_trace, semidecide_overspecified, DetectionReport,
};
use manifest::RunManifest;
use output::{format_float, render_json, write_outputs};
use pipeline_vm::{OracleRegistry, ProgramIndex, TmDescriptor};
use repair::{
    builtin_repair_operators, check_conservative_on_domain, check_uniform_elimination_on_domain,
    construct_overspecified_fixed_point, registry_for, RepairOperator,
};
use signature_core::{validate_scenario, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "overspec",
    version,
    about = "Desk-scale laboratory for detecting and repairing structural \
             overspecification in representation-selection pipelines"
)]
struct Cli {
    /// Scenario file; falls back to $OVERSPEC_SCENARIO, then the built-in
    /// default scenario.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Directory for report.json, manifest.json, and CSV outputs.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every scenario and witness-kit invariant up to a padding depth.
    ValidateScenario {
        #[arg(long, default_value_t = 8)]
        check_bound: usize,
    },
    /// Decide the overspecification predicate on the bounded domain.
    Detect {
        /// Program file (canonical text).
        #[arg(long, conflicts_with = "text", required_unless_present = "text")]
        program: Option<PathBuf>,
        /// Inline program text instead of a file.
        #[arg(long)]
        text: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Emit one CSV row per scanned instance instead of the JSON report.
        #[arg(long)]
        csv: bool,
        /// Repair operator to register as the PHI oracle, for programs that
        /// consult one.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Dovetail the unbounded domain, accepting on a positive witness.
    Semidecide {
        #[arg(long, conflicts_with = "text", required_unless_present = "text")]
        program: Option<PathBuf>,
        /// Inline program text instead of a file.
        #[arg(long)]
        text: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        stages: u64,
        #[arg(long)]
        phi: Option<String>,
    },
    /// Build the halting-reduction pipeline for a machine and input word.
    HaltingGadget {
        /// Machine descriptor (JSON).
        #[arg(long)]
        tm: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
    },
    /// Construct the overspecified fixed point of a repair operator.
    FixedPoint {
        #[arg(long, default_value = "detector-backed")]
        phi: String,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long, default_value_t = 60_000)]
        budget: u64,
    },
    /// Audit an operator for conservativeness and uniform elimination over
    /// a directory of program files.
    AuditPhi {
        #[arg(long)]
        phi: String,
        /// Directory of .pl program files.
        #[arg(long)]
        programs: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long, default_value_t = 60_000)]
        budget: u64,
    },
    /// Sample pairwise outcomes at a compatibility gap and fit scores.
    BtlExperiment {
        /// Population file (JSON); defaults to two unit-sensitivity
        /// evaluators with loss aversions 1 and 3.
        #[arg(long)]
        population: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        dv: i64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Regret-weighted population scores and the gap ratio.
    Asymmetry {
        #[arg(long)]
        population: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        delta: u64,
    },
    /// Aggregate a benchmark profile by pairwise strict majority.
    Majority {
        /// Profile file (JSON).
        #[arg(long)]
        profile: PathBuf,
    },
    /// Full conservative-repair fixed-point walkthrough on the scenario.
    Demo,
}

enum Failure {
    Input(anyhow::Error),
    Internal(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Input(e)
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is
            // an input error.
            if e.use_stderr() {
                let _ = e.print();
                std::process::exit(1);
            }
            let _ = e.print();
            std::process::exit(0);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
        Err(Failure::Internal(message)) => {
            eprintln!("internal invariant violation: {message}");
            std::process::exit(2);
        }
    }
}

fn load_scenario(path: &Option<PathBuf>) -> Result<(ScenarioConfig, String)> {
    let from_env = std::env::var_os("OVERSPEC_SCENARIO").map(PathBuf::from);
    let chosen = path.clone().or(from_env);
    let cfg = match &chosen {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ScenarioConfig::from_json(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => ScenarioConfig::default_scenario(),
    };
    let canonical = cfg.to_json();
    Ok((cfg, canonical))
}

fn load_program(path: &Path) -> Result<ProgramIndex> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ProgramIndex::parse(text.trim_end())
        .map_err(|e| anyhow!("parsing {}: {e}", path.display()))
}

/// Resolves the file-or-inline program pair; clap guarantees exactly one.
fn resolve_program(
    path: &Option<PathBuf>,
    text: &Option<String>,
) -> Result<(ProgramIndex, String)> {
    match (path, text) {
        (Some(p), None) => Ok((load_program(p)?, p.display().to_string())),
        (None, Some(t)) => Ok((
            ProgramIndex::parse(t).map_err(|e| anyhow!("parsing inline program: {e}"))?,
            "<inline>".to_string(),
        )),
        _ => Err(anyhow!("provide exactly one of --program or --text")),
    }
}

fn load_population(path: &Option<PathBuf>) -> Result<EvaluatorPopulation> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            EvaluatorPopulation::from_json(&text)
                .map_err(|e| anyhow!("parsing {}: {e}", p.display()))
        }
        None => Ok(EvaluatorPopulation::from_params(&[(1.0, 1.0), (1.0, 3.0)])),
    }
}

fn find_operator(name: &str, cfg: &ScenarioConfig) -> Result<RepairOperator> {
    builtin_repair_operators(cfg)
        .into_iter()
        .find(|op| op.name == name)
        .ok_or_else(|| {
            let names: Vec<String> = builtin_repair_operators(cfg)
                .into_iter()
                .map(|op| op.name)
                .collect();
            anyhow!("unknown repair operator {name:?}; available: {names:?}")
        })
}

fn registry_or_empty(phi: &Option<String>, cfg: &ScenarioConfig) -> Result<OracleRegistry> {
    match phi {
        Some(name) => Ok(registry_for(&find_operator(name, cfg)?, cfg)),
        None => Ok(OracleRegistry::new()),
    }
}

fn detection_csv(rows: &[detector::ScanRow]) -> String {
    let mut csv = String::from("instance,output,v_bw,steps\n");
    for row in rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.instance,
            row.output.as_deref().unwrap_or(""),
            row.v_bw.map(|v| v.to_string()).unwrap_or_default(),
            row.steps
        ));
    }
    csv
}

fn emit(
    out: &Option<PathBuf>,
    stdout_payload: &str,
    report_json: &str,
    csv: Option<&str>,
    manifest: &RunManifest,
) -> Result<()> {
    println!("{stdout_payload}");
    if let Some(dir) = out {
        write_outputs(dir, report_json, csv, manifest)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (cfg, scenario_json) = load_scenario(&cli.scenario)?;
    match cli.command {
        Command::ValidateScenario { check_bound } => {
            let report = validate_scenario(&cfg, check_bound);
            let rendered = render_json(&report)?;
            let manifest = RunManifest::new("validate-scenario", &scenario_json)
                .param("check_bound", check_bound);
            emit(&cli.out, &rendered, &rendered, None, &manifest)?;
            Ok(())
        }
        Command::Detect {
            program,
            text,
            max_len,
            budget,
            csv,
            phi,
        } => {
            let (index, source) = resolve_program(&program, &text)?;
            let registry = registry_or_empty(&phi, &cfg)?;
            let (report, rows) = decide_with_trace(&index, max_len, &cfg, budget, &registry)
                .map_err(|e| anyhow!("{e}"))?;
            check_detection_invariants(&report)?;
            let rendered = render_json(&report)?;
            let rows_csv = detection_csv(&rows);
            let manifest = RunManifest::new("detect", &scenario_json)
                .param("program", source)
                .param("max_len", max_len)
                .param("budget", budget);
            let payload = if csv { rows_csv.trim_end() } else { &rendered };
            emit(&cli.out, payload, &rendered, Some(&rows_csv), &manifest)?;
            Ok(())
        }
        Command::Semidecide {
            program,
            text,
            stages,
            phi,
        } => {
            let (index, source) = resolve_program(&program, &text)?;
            let registry = registry_or_empty(&phi, &cfg)?;
            let outcome = semidecide_overspecified(&index, &cfg, stages, &registry)
                .map_err(|e| anyhow!("{e}"))?;
            let rendered = render_json(&outcome)?;
            let manifest = RunManifest::new("semidecide", &scenario_json)
                .param("program", source)
                .param("stages", stages);
            emit(&cli.out, &rendered, &rendered, None, &manifest)?;
            Ok(())
        }
        Command::HaltingGadget { tm, input } => {
            let text =
                fs::read_to_string(&tm).with_context(|| format!("reading {}", tm.display()))?;
            let descriptor = TmDescriptor::from_json(&text).map_err(|e| anyhow!("{e}"))?;
            let gadget = build_halting_gadget(&descriptor, &input, &cfg)
                .map_err(|e| anyhow!("{e}"))?;
            let manifest = RunManifest::new("halting-gadget", &scenario_json)
                .param("tm", tm.display())
                .param("input", &input);
            println!("{gadget}");
            if let Some(dir) = &cli.out {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                fs::write(dir.join("gadget.pl"), format!("{gadget}\n"))
                    .context("writing gadget.pl")?;
                fs::write(dir.join("manifest.json"), manifest.to_json())
                    .context("writing manifest.json")?;
            }
            Ok(())
        }
        Command::FixedPoint {
            phi,
            max_len,
            budget,
        } => {
            let operator = find_operator(&phi, &cfg)?;
            let report = construct_overspecified_fixed_point(&operator, &cfg, max_len, budget)
                .map_err(|e| anyhow!("{e}"))?;
            if operator.intended_conservative()
                && report.phi_of_e_star_equals_e_star
                && report.detection.verdict != 1
            {
                return Err(Failure::Internal(format!(
                    "conservative operator {} fixed its gadget index without a detection witness",
                    operator.name
                )));
            }
            let rendered = render_json(&report)?;
            let manifest = RunManifest::new("fixed-point", &scenario_json)
                .param("phi", &phi)
                .param("max_len", max_len)
                .param("budget", budget);
            emit(&cli.out, &rendered, &rendered, None, &manifest)?;
            Ok(())
        }
        Command::AuditPhi {
            phi,
            programs,
            max_len,
            budget,
        } => {
            let operator = find_operator(&phi, &cfg)?;
            let registry = registry_for(&operator, &cfg);
            let mut entries: Vec<PathBuf> = fs::read_dir(&programs)
                .with_context(|| format!("reading {}", programs.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "pl"))
                .collect();
            entries.sort();
            if entries.is_empty() {
                return Err(Failure::Input(anyhow!(
                    "no .pl program files in {}",
                    programs.display()
                )));
            }
            let mut suite = Vec::new();
            for path in &entries {
                suite.push(load_program(path)?);
            }
            let conservativeness =
                check_conservative_on_domain(&operator, &suite, max_len, &cfg, budget, &registry)
                    .map_err(|e| anyhow!("{e}"))?;
            let elimination = check_uniform_elimination_on_domain(
                &operator, &suite, max_len, &cfg, budget, &registry,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let report = json!({
                "operator": operator.name,
                "programs": entries.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                "conservativeness": conservativeness,
                "elimination": elimination,
            });
            let rendered = render_json(&report)?;
            let manifest = RunManifest::new("audit-phi", &scenario_json)
                .param("phi", &phi)
                .param("programs", programs.display())
                .param("max_len", max_len)
                .param("budget", budget);
            emit(&cli.out, &rendered, &rendered, None, &manifest)?;
            Ok(())
        }
        Command::BtlExperiment {
            population,
            dv,
            samples,
            seed,
        } => {
            let population = load_population(&population)?;
            let sample = sample_pairwise_outcomes(
                &population,
                "",
                "first",
                dv,
                "second",
                0,
                samples,
                seed,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let analytic = pairwise_win_probability(dv, &population).map_err(|e| anyhow!("{e}"))?;
            let mut counts = PairwiseCounts::new(vec!["first".into(), "second".into()]);
            counts.add_wins("first", "second", sample.wins_first);
            counts.add_wins("second", "first", sample.wins_second);
            let fitted = fit_btl(&counts, 1e-10, 10_000).map_err(|e| anyhow!("{e}"))?;
            let difference = fitted.difference("first", "second");
            let report = json!({
                "delta_v": dv,
                "samples": samples,
                "seed": seed,
                "wins_first": sample.wins_first,
                "wins_second": sample.wins_second,
                "empirical_rate": sample.rate_first(),
                "analytic_probability": analytic,
                "fitted_difference": difference,
                "fit_iterations": fitted.iterations,
                "fit_converged": fitted.converged,
            });
            let rendered = render_json(&report)?;
            let csv = format!(
                "m,seed,wins_first,wins_second,empirical_rate,fitted_difference\n{},{},{},{},{},{}\n",
                samples,
                seed,
                sample.wins_first,
                sample.wins_second,
                format_float(sample.rate_first()),
                format_float(difference),
            );
            let manifest = RunManifest::new("btl-experiment", &scenario_json)
                .param("dv", dv)
                .param("samples", samples)
                .with_seed(seed);
            emit(&cli.out, &rendered, &rendered, Some(&csv), &manifest)?;
            Ok(())
        }
        Command::Asymmetry { population, delta } => {
            let population = load_population(&population)?;
            let report =
                population_scores_asymmetric(delta, &population).map_err(|e| anyhow!("{e}"))?;
            let rendered = render_json(&report)?;
            let manifest =
                RunManifest::new("asymmetry", &scenario_json).param("delta", delta);
            emit(&cli.out, &rendered, &rendered, None, &manifest)?;
            Ok(())
        }
        Command::Majority { profile } => {
            let text = fs::read_to_string(&profile)
                .with_context(|| format!("reading {}", profile.display()))?;
            let parsed = BenchmarkProfile::from_json(&text).map_err(|e| anyhow!("{e}"))?;
            let tournament = majority_pairwise(&parsed).map_err(|e| anyhow!("{e}"))?;
            let report = json!({
                "instance": parsed.instance,
                "candidates": tournament.candidates,
                "edges": tournament.edges(),
                "has_cycle": tournament.has_cycle(),
            });
            let rendered = render_json(&report)?;
            let manifest = RunManifest::new("majority", &scenario_json)
                .param("profile", profile.display());
            emit(&cli.out, &rendered, &rendered, None, &manifest)?;
            Ok(())
        }
        Command::Demo => demo(&cli, &cfg, &scenario_json),
    }
}

fn check_detection_invariants(report: &DetectionReport) -> Result<(), Failure> {
    if report.verdict == 1 && report.witness.is_none() {
        return Err(Failure::Internal(
            "positive verdict without a witness".to_string(),
        ));
    }
    Ok(())
}

/// The end-to-end walkthrough: validate the scenario, construct the
/// overspecified fixed point of the conservative detector-backed operator,
/// and contrast with the non-conservative collapse.
fn demo(cli: &Cli, cfg: &ScenarioConfig, scenario_json: &str) -> Result<(), Failure> {
    let validation = validate_scenario(cfg, 8);
    println!(
        "scenario: {} checks, {}",
        validation.checks_run,
        if validation.ok { "all pass" } else { "VIOLATIONS" }
    );
    if !validation.ok {
        return Err(Failure::Input(anyhow!(
            "scenario invalid: {:?}",
            validation.violations
        )));
    }

    let operator = RepairOperator::detector_backed(2, 600);
    println!(
        "phi: {} (conservative, internal cap: 13 instances, 600 steps)",
        operator.name
    );
    let report = construct_overspecified_fixed_point(&operator, cfg, 2, 60_000)
        .map_err(|e| anyhow!("{e}"))?;
    println!("e* = {}", report.e_star);
    println!("phi(e*) = e*: {}", report.phi_of_e_star_equals_e_star);
    println!(
        "detection: verdict {}, witness {:?} ({} instances scanned)",
        report.detection.verdict, report.detection.witness, report.detection.instances_scanned
    );
    println!(
        "fixed-point law on the small domain: {}",
        if report.fixed_point_spot_check_ok {
            "holds"
        } else {
            "BROKEN"
        }
    );
    for sample in &report.gadget_branch_taken {
        println!("  input {:?} -> {} branch", sample.input, sample.branch);
    }
    if !report.phi_of_e_star_equals_e_star
        || report.detection.verdict != 1
        || !report.fixed_point_spot_check_ok
    {
        return Err(Failure::Internal(
            "conservative walkthrough failed a theorem claim".to_string(),
        ));
    }

    let collapse = RepairOperator::constant_epsilon();
    let contrast = construct_overspecified_fixed_point(&collapse, cfg, 2, 60_000)
        .map_err(|e| anyhow!("{e}"))?;
    println!(
        "contrast ({}): phi(e*) = e*: {}, detection verdict {} -- dropping \
         conservativeness trades the witness for a collapsed selector",
        collapse.name, contrast.phi_of_e_star_equals_e_star, contrast.detection.verdict
    );

    if let Some(dir) = &cli.out {
        let rendered = render_json(&report)?;
        let manifest = RunManifest::new("demo", scenario_json);
        write_outputs(dir, &rendered, None, &manifest)?;
    }
    Ok(())
}

//! `valsize` — sample-size planning for external validation of risk
//! prediction models.
//!
//! Three subcommands: `binary` solves minimum sample sizes (or, with
//! `--at-n`, reports the interval widths a fixed size buys), `survival`
//! simulates interval widths at candidate sizes for a time-to-event model,
//! and `measures` estimates the performance measures from a predictions
//! file. Identical inputs and seed produce byte-identical output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt;
use std::path::{Path, PathBuf};
use valsize::criteria::{
    fisher_info, CStatCriterion, CalibrationAssumption, CriteriaInputs, NetBenefitCriterion,
    OeTarget, SlopeCriterion,
};
use valsize::measures::{build_confusion, estimate, CiMethod, ConfusionMatrix, MeasureKind};
use valsize::riskdist::{anticipated_measures, lp_samples, sample_cohort, RiskDistribution};
use valsize::samplesize::{
    ciw_at_n, ciw_to_se, n_iterative_agresti_coull, plan_binary, PerformanceAnticipation, PlanRow,
    Precision, SampleSizePlan,
};
use valsize::survival::{
    km_cumulative_incidence, pseudo_confusion, pseudo_observations, simulate_ciw, SurvivalRecord,
};
use valsize_cli::config::{
    build_targets, load_binary_config, load_survival_config, parse_measures, parse_method,
    AnticipationSource, BinarySpec, CriteriaSpec, DEFAULT_COHORT_SIZE,
};
use valsize_cli::report::{
    render_inverse_delimited, render_inverse_text, render_measures_delimited, render_measures_text,
    render_plan_delimited, render_plan_text, render_rep_records, render_survival_delimited,
    render_survival_text, EstimateRow, InverseReport, InverseRow, MeasuresReport, PlanReport,
    PredictionsKind, Provenance, SurvivalReport, ThresholdEstimates,
};
use valsize_cli::CliError;

/// Environment variable holding the default seed; `--seed` wins over it.
const SEED_ENV: &str = "VALSIZE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "valsize",
    version,
    about = "Sample-size planning for external validation of risk prediction models"
)]
struct Cli {
    /// Seed for all random streams (overrides VALSIZE_SEED and config seeds).
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable tables, measures rounded to three decimals.
    Text,
    /// Full-precision structured report with provenance.
    Json,
    /// One delimited row per result.
    Csv,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)] // parsed once; not worth boxing the args
enum Command {
    /// Solve minimum sample sizes for a binary-outcome validation study.
    Binary(BinaryArgs),
    /// Simulate interval widths at candidate sizes for a survival model.
    Survival(SurvivalArgs),
    /// Estimate measures with confidence intervals from a predictions file.
    Measures(MeasuresArgs),
}

#[derive(Debug, Args)]
struct BinaryArgs {
    /// Config document (TOML) describing the whole run; replaces the value
    /// flags below.
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with_all = [
            "beta", "risks", "cohort_size", "threshold", "ciw", "se", "measure",
            "method", "prevalence", "oe_ciw", "c_stat", "c_stat_ciw", "slope_ciw",
            "nb_ciw", "nb_threshold",
        ]
    )]
    config: Option<PathBuf>,
    /// Beta risk distribution as `alpha,beta`.
    #[arg(long, value_name = "A,B")]
    beta: Option<String>,
    /// Empirical risk pool as comma-separated values, sampled with
    /// replacement.
    #[arg(long, value_name = "R1,R2,...", conflicts_with = "beta")]
    risks: Option<String>,
    /// Synthetic cohort size used to anticipate performance.
    #[arg(long, value_name = "M")]
    cohort_size: Option<u64>,
    /// Classification threshold (repeatable).
    #[arg(long, value_name = "T")]
    threshold: Vec<f64>,
    /// Target 95% confidence interval width (repeatable).
    #[arg(long, value_name = "W")]
    ciw: Vec<f64>,
    /// Target standard error (repeatable).
    #[arg(long, value_name = "SE")]
    se: Vec<f64>,
    /// Restrict to these measures (repeatable; default all six).
    #[arg(long, value_name = "NAME")]
    measure: Vec<String>,
    /// Interval method: `wald` or `agresti-coull`.
    #[arg(long, value_name = "METHOD")]
    method: Option<String>,
    /// Fixed sample size: report the expected interval widths at this N
    /// instead of solving (companion criteria are not evaluated).
    #[arg(long, value_name = "N")]
    at_n: Option<u64>,
    /// Outcome proportion used by the companion criteria (defaults to the
    /// cohort's).
    #[arg(long, value_name = "PHI")]
    prevalence: Option<f64>,
    /// O/E ratio criterion: target interval width.
    #[arg(long, value_name = "W")]
    oe_ciw: Option<f64>,
    /// Anticipated c statistic (with --c-stat-ciw).
    #[arg(long, value_name = "C")]
    c_stat: Option<f64>,
    /// c statistic criterion: target interval width.
    #[arg(long, value_name = "W")]
    c_stat_ciw: Option<f64>,
    /// Calibration slope criterion: target interval width.
    #[arg(long, value_name = "W")]
    slope_ciw: Option<f64>,
    /// Standardised net benefit criterion: target interval width.
    #[arg(long, value_name = "W")]
    nb_ciw: Option<f64>,
    /// Net-benefit threshold (repeatable; defaults to --threshold values).
    #[arg(long, value_name = "T")]
    nb_threshold: Vec<f64>,
}

#[derive(Debug, Args)]
struct SurvivalArgs {
    /// Scenario config document (TOML).
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Also write every repetition's estimates to this CSV file.
    #[arg(long, value_name = "FILE")]
    reps_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MeasuresArgs {
    /// Predictions file: CSV with columns `prob,outcome` (binary) or
    /// `time,event,risk` (survival).
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Classification threshold (repeatable, at least one).
    #[arg(long, value_name = "T", required = true)]
    threshold: Vec<f64>,
    /// Evaluation horizon (survival predictions only).
    #[arg(long, value_name = "H")]
    horizon: Option<f64>,
    /// Restrict to these measures (repeatable; default all six).
    #[arg(long, value_name = "NAME")]
    measure: Vec<String>,
    /// Interval method: `wald` or `agresti-coull`.
    #[arg(long, value_name = "METHOD")]
    method: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => print!("{output}"),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Binary(args) => run_binary(args, cli.seed, cli.format),
        Command::Survival(args) => run_survival(args, cli.seed, cli.format),
        Command::Measures(args) => run_measures(args, cli.format),
    }
}

/// Final seed: `--seed` flag, then the environment, then the config
/// document, then 1.
fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw.trim().parse::<u64>().map_err(|_| {
            CliError::config(format!(
                "{SEED_ENV} must be an unsigned integer, got `{raw}`"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(config.unwrap_or(1)),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(CliError::config(format!("{SEED_ENV} is not valid unicode")))
        }
    }
}

fn to_json<T: serde::Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// binary
// ---------------------------------------------------------------------------

fn run_binary(
    args: &BinaryArgs,
    seed_flag: Option<u64>,
    format: Format,
) -> Result<String, CliError> {
    let spec = binary_spec(args)?;
    spec.validate(args.at_n)?;
    let seed = resolve_seed(seed_flag, spec.seed)?;
    let (anticipations, lps, cohort_size) = resolve_anticipations(&spec, seed)?;
    let seed_used = matches!(spec.source, AnticipationSource::Cohort { .. }).then_some(seed);
    let provenance = Provenance::new(spec.method, seed_used, cohort_size);

    if let Some(n) = args.at_n {
        let mut rows = Vec::new();
        for anticipation in &anticipations {
            for &kind in &spec.measures {
                let interval = ciw_at_n(kind, anticipation, n, spec.method)?;
                rows.push(InverseRow {
                    measure: kind,
                    threshold: anticipation.threshold,
                    value: anticipation.value(kind)?,
                    ci_low: interval.low,
                    ci_high: interval.high,
                    ciw: interval.width,
                });
            }
        }
        let report = InverseReport {
            provenance,
            n,
            anticipations,
            rows,
        };
        return Ok(match format {
            Format::Text => render_inverse_text(&report),
            Format::Json => to_json(&report),
            Format::Csv => render_inverse_delimited(&report),
        });
    }

    let criteria_inputs = build_criteria_inputs(&spec, &anticipations, lps.as_deref())?;
    let plan = match spec.method {
        CiMethod::Wald => plan_binary(&anticipations, &spec.targets, criteria_inputs.as_ref())?,
        CiMethod::AgrestiCoull => plan_adjusted(&spec, &anticipations, criteria_inputs.as_ref())?,
    };
    let report = PlanReport {
        provenance,
        anticipations,
        plan,
    };
    Ok(match format {
        Format::Text => render_plan_text(&report),
        Format::Json => to_json(&report),
        Format::Csv => render_plan_delimited(&report),
    })
}

fn binary_spec(args: &BinaryArgs) -> Result<BinarySpec, CliError> {
    if let Some(path) = &args.config {
        return load_binary_config(path);
    }
    let dist = match (&args.beta, &args.risks) {
        (Some(raw), None) => {
            let shape = parse_float_list("--beta", raw)?;
            if shape.len() != 2 {
                return Err(CliError::config(
                    "--beta takes exactly two values: alpha,beta",
                ));
            }
            RiskDistribution::Beta {
                alpha: shape[0],
                beta: shape[1],
            }
        }
        (None, Some(raw)) => RiskDistribution::Empirical(parse_float_list("--risks", raw)?),
        (None, None) => {
            return Err(CliError::config(
                "a risk distribution is required: --beta, --risks, or --config",
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects --beta together with --risks"),
    };
    let method = match &args.method {
        Some(name) => parse_method(name)?,
        None => CiMethod::Wald,
    };
    let measures = parse_measures(&args.measure)?;
    let targets = build_targets(&measures, &args.ciw, &args.se);
    let criteria = CriteriaSpec {
        prevalence: args.prevalence,
        oe_ciw: args.oe_ciw,
        c_stat: args.c_stat,
        c_stat_ciw: args.c_stat_ciw,
        slope_ciw: args.slope_ciw,
        net_benefit_ciw: args.nb_ciw,
        net_benefit_thresholds: (!args.nb_threshold.is_empty()).then(|| args.nb_threshold.clone()),
    };
    Ok(BinarySpec {
        source: AnticipationSource::Cohort {
            dist,
            size: args.cohort_size.unwrap_or(DEFAULT_COHORT_SIZE),
            thresholds: args.threshold.clone(),
        },
        measures,
        targets,
        method,
        criteria: Some(criteria),
        seed: None,
    })
}

fn parse_float_list(flag: &str, raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("{flag}: `{part}` is not a number")))
        })
        .collect()
}

/// Anticipated performance per threshold, plus the linear predictors when
/// the slope criterion needs them and the cohort size when one was sampled.
#[allow(clippy::type_complexity)]
fn resolve_anticipations(
    spec: &BinarySpec,
    seed: u64,
) -> Result<(Vec<PerformanceAnticipation>, Option<Vec<f64>>, Option<u64>), CliError> {
    match &spec.source {
        AnticipationSource::Cohort {
            dist,
            size,
            thresholds,
        } => {
            let cohort = sample_cohort(dist, *size as usize, seed)?;
            let mut anticipations = Vec::with_capacity(thresholds.len());
            for &t in thresholds {
                anticipations.push(anticipated_measures(&cohort, t)?);
            }
            let needs_lp = spec
                .criteria
                .as_ref()
                .is_some_and(|c| c.slope_ciw.is_some());
            let lps = if needs_lp {
                Some(lp_samples(&cohort)?)
            } else {
                None
            };
            Ok((anticipations, lps, Some(*size)))
        }
        AnticipationSource::Manual(blocks) => Ok((blocks.clone(), None, None)),
    }
}

fn build_criteria_inputs(
    spec: &BinarySpec,
    anticipations: &[PerformanceAnticipation],
    lps: Option<&[f64]>,
) -> Result<Option<CriteriaInputs>, CliError> {
    let Some(criteria) = &spec.criteria else {
        return Ok(None);
    };
    if criteria.is_empty() {
        return Ok(None);
    }
    let first = &anticipations[0];
    let prevalence = criteria.prevalence.unwrap_or(first.prevalence);
    let oe = criteria.oe_ciw.map(OeTarget::RatioCiw);
    let cstat = criteria
        .c_stat
        .zip(criteria.c_stat_ciw)
        .map(|(c, w)| CStatCriterion {
            c,
            target: Precision::Ciw(w),
        });
    let slope = match criteria.slope_ciw {
        Some(w) => {
            let lps = lps.expect("validation guarantees a cohort when slope-ciw is set");
            let info = fisher_info(lps, &CalibrationAssumption::default())?;
            Some(SlopeCriterion {
                info,
                target: Precision::Ciw(w),
            })
        }
        None => None,
    };
    let net_benefit = match criteria.net_benefit_ciw {
        Some(w) => {
            let thresholds = criteria
                .net_benefit_thresholds
                .clone()
                .unwrap_or_else(|| anticipations.iter().map(|a| a.threshold).collect());
            let sensitivity = first.sensitivity.ok_or_else(|| {
                CliError::config(
                    "net-benefit needs an anticipated sensitivity at the first threshold",
                )
            })?;
            let specificity = first.specificity.ok_or_else(|| {
                CliError::config(
                    "net-benefit needs an anticipated specificity at the first threshold",
                )
            })?;
            Some(NetBenefitCriterion {
                thresholds,
                sensitivity,
                specificity,
                target: Precision::Ciw(w),
            })
        }
        None => None,
    };
    Ok(Some(CriteriaInputs {
        prevalence,
        oe,
        cstat,
        slope,
        net_benefit,
    }))
}

/// Adjusted-interval plan: the measure rows come from the iterative solver
/// (the closed forms are Wald-based), the companion criteria are unchanged.
fn plan_adjusted(
    spec: &BinarySpec,
    anticipations: &[PerformanceAnticipation],
    criteria: Option<&CriteriaInputs>,
) -> Result<SampleSizePlan, CliError> {
    let unit_se = ciw_to_se(1.0).expect("unit width is valid");
    let mut rows = Vec::new();
    for anticipation in anticipations {
        for target in &spec.targets {
            let target_ciw = match target.precision {
                Precision::Ciw(w) => w,
                Precision::Se(se) => se / unit_se,
            };
            let result = n_iterative_agresti_coull(target.kind, anticipation, target_ciw)?;
            rows.push(PlanRow {
                threshold: Some(anticipation.threshold),
                target: target.precision,
                result,
            });
        }
    }
    if let Some(inputs) = criteria {
        rows.extend(plan_binary(&[], &[], Some(inputs))?.rows);
    }
    Ok(combine_rows(rows))
}

fn combine_rows(rows: Vec<PlanRow>) -> SampleSizePlan {
    let overall_n = rows
        .iter()
        .map(|r| r.result.n)
        .max()
        .expect("validation guarantees at least one row");
    let binding: Vec<String> = rows
        .iter()
        .filter(|r| r.result.n == overall_n)
        .map(PlanRow::label)
        .collect();
    let overall_events = rows
        .iter()
        .filter(|r| r.result.n == overall_n)
        .filter_map(|r| r.result.events)
        .max()
        .unwrap_or(0);
    SampleSizePlan {
        rows,
        overall_n,
        overall_events,
        binding,
    }
}

// ---------------------------------------------------------------------------
// survival
// ---------------------------------------------------------------------------

fn run_survival(
    args: &SurvivalArgs,
    seed_flag: Option<u64>,
    format: Format,
) -> Result<String, CliError> {
    let (mut scenario, config_seed) = load_survival_config(&args.config)?;
    scenario.seed = resolve_seed(seed_flag, config_seed)?;
    let summary = simulate_ciw(&scenario, args.reps_out.is_some())?;
    let provenance = Provenance::new(CiMethod::Wald, Some(scenario.seed), None);
    let report = SurvivalReport {
        provenance,
        scenario,
        summary,
    };
    if let Some(path) = &args.reps_out {
        std::fs::write(path, render_rep_records(&report))
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(match format {
        Format::Text => render_survival_text(&report),
        Format::Json => to_json(&report),
        Format::Csv => render_survival_delimited(&report),
    })
}

// ---------------------------------------------------------------------------
// measures
// ---------------------------------------------------------------------------

enum Predictions {
    Binary {
        probs: Vec<f64>,
        outcomes: Vec<bool>,
    },
    Survival {
        times: Vec<f64>,
        events: Vec<bool>,
        risks: Vec<f64>,
    },
}

fn run_measures(args: &MeasuresArgs, format: Format) -> Result<String, CliError> {
    for &t in &args.threshold {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::config(format!(
                "threshold must be strictly between 0 and 1, got {t}"
            )));
        }
    }
    if let Some(h) = args.horizon {
        if !(h > 0.0 && h.is_finite()) {
            return Err(CliError::config(format!(
                "horizon must be positive and finite, got {h}"
            )));
        }
    }
    let method = match &args.method {
        Some(name) => parse_method(name)?,
        None => CiMethod::Wald,
    };
    let kinds = parse_measures(&args.measure)?;
    let provenance = Provenance::new(method, None, None);
    let input = args.input.display().to_string();

    let report = match read_predictions(&args.input)? {
        Predictions::Binary { probs, outcomes } => {
            if args.horizon.is_some() {
                return Err(CliError::config(
                    "--horizon applies only to survival predictions (time,event,risk)",
                ));
            }
            let events = outcomes.iter().filter(|&&y| y).count();
            let mut blocks = Vec::new();
            for &t in &args.threshold {
                let cm = build_confusion(&probs, &outcomes, t)?;
                blocks.push(ThresholdEstimates {
                    threshold: t,
                    clamped_cells: None,
                    estimates: estimate_rows(&cm, &kinds, method)?,
                });
            }
            MeasuresReport {
                provenance,
                input,
                kind: PredictionsKind::Binary,
                n: probs.len() as u64,
                outcome_proportion: events as f64 / probs.len() as f64,
                horizon: None,
                blocks,
            }
        }
        Predictions::Survival {
            times,
            events,
            risks,
        } => {
            let horizon = args
                .horizon
                .ok_or_else(|| CliError::config("survival predictions need --horizon"))?;
            for &r in &risks {
                if !(0.0..=1.0).contains(&r) {
                    return Err(valsize::Error::OutOfRange {
                        what: "predicted risk",
                        requirement: "in [0, 1]",
                        value: r,
                    }
                    .into());
                }
            }
            let records: Vec<SurvivalRecord> = times
                .iter()
                .zip(&events)
                .map(|(&t, &e)| SurvivalRecord::new(t, e))
                .collect::<Result<_, _>>()?;
            let pseudo = pseudo_observations(&records, horizon)?;
            let outcome_proportion = km_cumulative_incidence(&records, horizon)?;
            let mut blocks = Vec::new();
            for &t in &args.threshold {
                let pc = pseudo_confusion(&pseudo, &risks, t)?;
                blocks.push(ThresholdEstimates {
                    threshold: t,
                    clamped_cells: Some(pc.clamped_cells),
                    estimates: estimate_rows(&pc.matrix, &kinds, method)?,
                });
            }
            MeasuresReport {
                provenance,
                input,
                kind: PredictionsKind::Survival,
                n: records.len() as u64,
                outcome_proportion,
                horizon: Some(horizon),
                blocks,
            }
        }
    };
    Ok(match format {
        Format::Text => render_measures_text(&report),
        Format::Json => to_json(&report),
        Format::Csv => render_measures_delimited(&report),
    })
}

fn estimate_rows(
    cm: &ConfusionMatrix,
    kinds: &[MeasureKind],
    method: CiMethod,
) -> Result<Vec<EstimateRow>, CliError> {
    kinds
        .iter()
        .map(|&kind| {
            let e = estimate(cm, kind, method)?;
            Ok(EstimateRow {
                measure: kind,
                value: e.value,
                se: e.se,
                ci_low: e.ci_low,
                ci_high: e.ci_high,
                ciw: e.ci_high - e.ci_low,
            })
        })
        .collect()
}

fn row_err(path: &Path, index: usize, message: impl fmt::Display) -> CliError {
    // +2: one for the header line, one for 1-based numbering.
    CliError::config(format!("{} row {}: {message}", path.display(), index + 2))
}

fn parse_number(
    path: &Path,
    index: usize,
    name: &str,
    value: Option<&str>,
) -> Result<f64, CliError> {
    let raw = value.ok_or_else(|| row_err(path, index, format!("missing {name}")))?;
    raw.parse::<f64>()
        .map_err(|_| row_err(path, index, format!("{name} `{raw}` is not a number")))
}

fn parse_indicator(
    path: &Path,
    index: usize,
    name: &str,
    value: Option<&str>,
) -> Result<bool, CliError> {
    let raw = value.ok_or_else(|| row_err(path, index, format!("missing {name}")))?;
    match raw {
        "0" | "false" => Ok(false),
        "1" | "true" => Ok(true),
        other => Err(row_err(
            path,
            index,
            format!("{name} `{other}` must be 0/1 or true/false"),
        )),
    }
}

/// Read a predictions file, deciding binary vs survival from its header.
fn read_predictions(path: &Path) -> Result<Predictions, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        .iter()
        .map(|h| h.to_ascii_lowercase())
        .collect();
    let names: Vec<&str> = headers.iter().map(String::as_str).collect();
    match names.as_slice() {
        ["prob", "outcome"] => {
            let mut probs = Vec::new();
            let mut outcomes = Vec::new();
            for (index, record) in reader.records().enumerate() {
                let record = record.map_err(|e| row_err(path, index, e))?;
                probs.push(parse_number(path, index, "prob", record.get(0))?);
                outcomes.push(parse_indicator(path, index, "outcome", record.get(1))?);
            }
            Ok(Predictions::Binary { probs, outcomes })
        }
        ["time", "event", "risk"] => {
            let mut times = Vec::new();
            let mut events = Vec::new();
            let mut risks = Vec::new();
            for (index, record) in reader.records().enumerate() {
                let record = record.map_err(|e| row_err(path, index, e))?;
                times.push(parse_number(path, index, "time", record.get(0))?);
                events.push(parse_indicator(path, index, "event", record.get(1))?);
                risks.push(parse_number(path, index, "risk", record.get(2))?);
            }
            Ok(Predictions::Survival {
                times,
                events,
                risks,
            })
        }
        other => Err(CliError::config(format!(
            "{}: unrecognised columns {other:?}; expected `prob,outcome` or `time,event,risk`",
            path.display()
        ))),
    }
}

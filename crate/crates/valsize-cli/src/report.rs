//! Report documents and their renderers.
//!
//! Each subcommand produces one report struct. The struct is the single
//! source of truth: the JSON (structured) output serializes it in full
//! precision, and the text and delimited renderers read only its fields, so
//! every number shown rounded in the text report exists unrounded in the
//! structured report. All renderers are pure functions of the report, which
//! makes identical inputs produce byte-identical output.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use valsize::measures::{CiMethod, MeasureKind};
use valsize::samplesize::{PerformanceAnticipation, Precision, SampleSizePlan};
use valsize::survival::{SimulationSummary, SurvivalScenario};

/// Where the numbers came from: everything needed to reproduce the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub interval_method: CiMethod,
    /// Seed of the random stream, when the run used one.
    pub seed: Option<u64>,
    /// Size of the synthetic planning cohort, when the run sampled one.
    pub cohort_size: Option<u64>,
}

impl Provenance {
    pub fn new(method: CiMethod, seed: Option<u64>, cohort_size: Option<u64>) -> Provenance {
        Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            interval_method: method,
            seed,
            cohort_size,
        }
    }

    fn text_line(&self) -> String {
        let mut line = format!(
            "Provenance: version {}, intervals {}",
            self.tool_version,
            method_name(self.interval_method)
        );
        if let Some(seed) = self.seed {
            let _ = write!(line, ", seed {seed}");
        }
        if let Some(m) = self.cohort_size {
            let _ = write!(line, ", cohort size {m}");
        }
        line
    }
}

/// Solved minimum sample sizes for every requested criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub provenance: Provenance,
    /// Anticipated performance at each threshold the plan covers.
    pub anticipations: Vec<PerformanceAnticipation>,
    pub plan: SampleSizePlan,
}

/// Expected confidence intervals at a fixed sample size (inverse mode).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseReport {
    pub provenance: Provenance,
    /// The fixed sample size the intervals are evaluated at.
    pub n: u64,
    pub anticipations: Vec<PerformanceAnticipation>,
    pub rows: Vec<InverseRow>,
}

/// One measure's expected interval at the fixed sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseRow {
    pub measure: MeasureKind,
    pub threshold: f64,
    /// Anticipated value the interval is centred on.
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Raw interval width before clamping the bounds to [0, 1].
    pub ciw: f64,
}

/// Measure estimates computed from a supplied predictions file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuresReport {
    pub provenance: Provenance,
    /// Path of the predictions file, as given.
    pub input: String,
    pub kind: PredictionsKind,
    /// Number of individuals in the file.
    pub n: u64,
    /// Observed outcome proportion: the event fraction for binary
    /// predictions, the Kaplan–Meier cumulative incidence at the horizon
    /// for survival predictions.
    pub outcome_proportion: f64,
    /// Evaluation horizon (survival predictions only).
    pub horizon: Option<f64>,
    pub blocks: Vec<ThresholdEstimates>,
}

/// What the predictions file contained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionsKind {
    Binary,
    Survival,
}

/// All requested measures estimated at one classification threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimates {
    pub threshold: f64,
    /// Aggregate pseudo-value matrix cells clamped to zero at this
    /// threshold (survival predictions only).
    pub clamped_cells: Option<u32>,
    pub estimates: Vec<EstimateRow>,
}

/// One estimated measure with its uncertainty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub measure: MeasureKind,
    pub value: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Width of the reported interval, `ci_high - ci_low`.
    pub ciw: f64,
}

/// Simulated interval widths across candidate sample sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalReport {
    pub provenance: Provenance,
    pub scenario: SurvivalScenario,
    pub summary: SimulationSummary,
}

fn method_name(method: CiMethod) -> &'static str {
    match method {
        CiMethod::Wald => "wald",
        CiMethod::AgrestiCoull => "agresti-coull",
    }
}

/// `0.51` → `"0.510"`. Measures are shown with three decimals.
fn f3(x: f64) -> String {
    format!("{x:.3}")
}

/// Full-precision rendering for delimited output (shortest round-trip form).
fn full(x: f64) -> String {
    format!("{x}")
}

fn opt3(x: Option<f64>) -> String {
    x.map(f3).unwrap_or_else(|| "-".to_string())
}

fn target_text(p: Precision) -> String {
    match p {
        Precision::Se(se) => format!("SE {se}"),
        Precision::Ciw(w) => format!("CIW {w}"),
    }
}

fn target_columns(p: Precision) -> (&'static str, f64) {
    match p {
        Precision::Se(se) => ("se", se),
        Precision::Ciw(w) => ("ciw", w),
    }
}

fn push_anticipation_table(out: &mut String, anticipations: &[PerformanceAnticipation]) {
    out.push_str("Anticipated performance\n");
    out.push_str(&format!(
        "  {:<10} {:<11} {:<9} {:<12} {:<12} {:<7} {:<7} {:<7}\n",
        "threshold", "prevalence", "accuracy", "specificity", "sensitivity", "ppv", "npv", "f1"
    ));
    for a in anticipations {
        out.push_str(&format!(
            "  {:<10} {:<11} {:<9} {:<12} {:<12} {:<7} {:<7} {:<7}\n",
            a.threshold,
            f3(a.prevalence),
            opt3(a.accuracy),
            opt3(a.specificity),
            opt3(a.sensitivity),
            opt3(a.ppv),
            opt3(a.npv),
            opt3(a.f1),
        ));
    }
}

/// Text report for a sample-size plan: anticipation table, one row per
/// solved criterion, and the binding overall minimum.
pub fn render_plan_text(report: &PlanReport) -> String {
    let mut out = String::new();
    out.push_str("Sample size plan for external validation\n");
    out.push_str("=========================================\n");
    out.push_str(&report.provenance.text_line());
    out.push_str("\n\n");
    if !report.anticipations.is_empty() {
        push_anticipation_table(&mut out, &report.anticipations);
        out.push('\n');
    }
    out.push_str("Requirements\n");
    out.push_str(&format!(
        "  {:<30} {:<10} {:<13} {}\n",
        "criterion", "target", "N (events)", "achieved CIW"
    ));
    for row in &report.plan.rows {
        let n_events = match row.result.events {
            Some(e) => format!("{} ({})", row.result.n, e),
            None => row.result.n.to_string(),
        };
        out.push_str(&format!(
            "  {:<30} {:<10} {:<13} {}\n",
            row.label(),
            target_text(row.target),
            n_events,
            f3(row.result.achieved_ciw),
        ));
    }
    out.push('\n');
    out.push_str(&format!(
        "Overall minimum: N = {} ({} events), driven by {}\n",
        report.plan.overall_n,
        report.plan.overall_events,
        report.plan.binding.join(", "),
    ));
    out
}

/// Delimited plan output: one row per (criterion, threshold, target).
pub fn render_plan_delimited(report: &PlanReport) -> String {
    let mut out = String::from(
        "criterion,threshold,target_type,target,n,events,n_exact,achieved_se,achieved_ciw\n",
    );
    for row in &report.plan.rows {
        let (target_type, target) = target_columns(row.target);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.result.criterion,
            row.threshold.map(full).unwrap_or_default(),
            target_type,
            full(target),
            row.result.n,
            row.result.events.map(|e| e.to_string()).unwrap_or_default(),
            full(row.result.n_exact),
            full(row.result.achieved_se),
            full(row.result.achieved_ciw),
        ));
    }
    out
}

/// Text report for inverse mode: the interval each measure is expected to
/// have at the fixed sample size.
pub fn render_inverse_text(report: &InverseReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Expected confidence intervals at N = {}\n",
        report.n
    ));
    out.push_str("=======================================\n");
    out.push_str(&report.provenance.text_line());
    out.push_str("\n\n");
    if !report.anticipations.is_empty() {
        push_anticipation_table(&mut out, &report.anticipations);
        out.push('\n');
    }
    out.push_str(&format!(
        "  {:<13} {:<10} {:<7} {:<17} {}\n",
        "measure", "threshold", "value", "95% CI", "width"
    ));
    for row in &report.rows {
        out.push_str(&format!(
            "  {:<13} {:<10} {:<7} {:<17} {}\n",
            row.measure.to_string(),
            row.threshold,
            f3(row.value),
            format!("[{}, {}]", f3(row.ci_low), f3(row.ci_high)),
            f3(row.ciw),
        ));
    }
    out
}

/// Delimited inverse output: one row per (measure, threshold).
pub fn render_inverse_delimited(report: &InverseReport) -> String {
    let mut out = String::from("measure,threshold,n,value,ci_low,ci_high,ciw\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.measure,
            full(row.threshold),
            report.n,
            full(row.value),
            full(row.ci_low),
            full(row.ci_high),
            full(row.ciw),
        ));
    }
    out
}

/// Text report for measure estimates from a predictions file.
pub fn render_measures_text(report: &MeasuresReport) -> String {
    let mut out = String::new();
    out.push_str("Measure estimates from predictions\n");
    out.push_str("==================================\n");
    out.push_str(&report.provenance.text_line());
    out.push('\n');
    let kind = match report.kind {
        PredictionsKind::Binary => "binary",
        PredictionsKind::Survival => "survival",
    };
    out.push_str(&format!(
        "Input: {} ({kind}, N = {})\n",
        report.input, report.n
    ));
    match report.kind {
        PredictionsKind::Binary => {
            out.push_str(&format!(
                "Outcome proportion: {}\n",
                f3(report.outcome_proportion)
            ));
        }
        PredictionsKind::Survival => {
            out.push_str(&format!(
                "Cumulative incidence by horizon {}: {}\n",
                report.horizon.unwrap_or(f64::NAN),
                f3(report.outcome_proportion)
            ));
        }
    }
    for block in &report.blocks {
        out.push('\n');
        out.push_str(&format!("Threshold {}", block.threshold));
        if let Some(clamped) = block.clamped_cells {
            if clamped > 0 {
                out.push_str(&format!(" (pseudo-value cells clamped: {clamped})"));
            }
        }
        out.push('\n');
        out.push_str(&format!(
            "  {:<13} {:<9} {:<7} {:<17} {}\n",
            "measure", "estimate", "SE", "95% CI", "width"
        ));
        for row in &block.estimates {
            out.push_str(&format!(
                "  {:<13} {:<9} {:<7} {:<17} {}\n",
                row.measure.to_string(),
                f3(row.value),
                f3(row.se),
                format!("[{}, {}]", f3(row.ci_low), f3(row.ci_high)),
                f3(row.ciw),
            ));
        }
    }
    out
}

/// Delimited estimates output: one row per (threshold, measure).
pub fn render_measures_delimited(report: &MeasuresReport) -> String {
    let mut out = String::from("threshold,measure,value,se,ci_low,ci_high,ciw\n");
    for block in &report.blocks {
        for row in &block.estimates {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                full(block.threshold),
                row.measure,
                full(row.value),
                full(row.se),
                full(row.ci_low),
                full(row.ci_high),
                full(row.ciw),
            ));
        }
    }
    out
}

/// Text report for the survival simulation: per candidate size, the mean
/// estimate and mean interval width of each measure.
pub fn render_survival_text(report: &SurvivalReport) -> String {
    let mut out = String::new();
    out.push_str("Simulated interval widths at candidate sample sizes\n");
    out.push_str("====================================================\n");
    out.push_str(&report.provenance.text_line());
    out.push('\n');
    out.push_str(&format!(
        "Scenario: horizon {}, threshold {}, {} repetitions per size\n",
        report.scenario.horizon, report.scenario.threshold, report.scenario.repetitions
    ));
    for candidate in &report.summary.candidates {
        let usable = candidate.repetitions - candidate.degenerate;
        out.push('\n');
        out.push_str(&format!(
            "Candidate N = {} (usable repetitions {} of {}, clamped cells {})\n",
            candidate.size, usable, candidate.repetitions, candidate.clamped_cells
        ));
        out.push_str(&format!(
            "  {:<13} {:<15} {}\n",
            "measure", "mean estimate", "mean CIW"
        ));
        for m in &candidate.measures {
            out.push_str(&format!(
                "  {:<13} {:<15} {}\n",
                m.kind.to_string(),
                f3(m.mean_estimate),
                f3(m.mean_ciw),
            ));
        }
    }
    out
}

/// Delimited survival output: one row per (candidate size, measure).
pub fn render_survival_delimited(report: &SurvivalReport) -> String {
    let mut out =
        String::from("size,repetitions,degenerate,clamped_cells,measure,mean_estimate,mean_ciw\n");
    for candidate in &report.summary.candidates {
        for m in &candidate.measures {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                candidate.size,
                candidate.repetitions,
                candidate.degenerate,
                candidate.clamped_cells,
                m.kind,
                full(m.mean_estimate),
                full(m.mean_ciw),
            ));
        }
    }
    out
}

/// Per-repetition audit export for the survival simulation: one row per
/// (size, repetition, measure), full precision.
pub fn render_rep_records(report: &SurvivalReport) -> String {
    let mut out = String::from("size,repetition,measure,estimate,se,ci_low,ci_high,width\n");
    if let Some(records) = &report.summary.rep_records {
        for r in records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.size,
                r.repetition,
                r.kind,
                full(r.estimate),
                full(r.se),
                full(r.ci_low),
                full(r.ci_high),
                full(r.width),
            ));
        }
    }
    out
}

//! Config documents and their conversion into library inputs.
//!
//! Both subcommand configs are TOML with unknown fields rejected, so a typo
//! fails loudly with a field path instead of silently using a default.
//! Everything that comes from flags or a config document is validated here
//! and fails as a config error (exit 2); errors raised later, inside the
//! computation itself, are numeric failures (exit 3).

use crate::CliError;
use serde::Deserialize;
use std::path::Path;
use valsize::measures::{CiMethod, MeasureKind};
use valsize::riskdist::RiskDistribution;
use valsize::samplesize::{PerformanceAnticipation, Precision, PrecisionTarget};
use valsize::survival::{CensoringModel, EventModel, LpModel, RiskModel, SurvivalScenario};

/// Default size of the synthetic planning cohort.
pub const DEFAULT_COHORT_SIZE: u64 = 1_000_000;

/// Where anticipated performance comes from in a binary run.
#[derive(Debug, Clone, PartialEq)]
pub enum AnticipationSource {
    /// Sample a seeded cohort from a risk distribution and read the
    /// measures off it at each threshold.
    Cohort {
        dist: RiskDistribution,
        size: u64,
        thresholds: Vec<f64>,
    },
    /// Use anticipated values supplied directly.
    Manual(Vec<PerformanceAnticipation>),
}

/// Companion criteria requested alongside the measure targets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CriteriaSpec {
    /// Outcome proportion the criteria use; defaults to the cohort's (or
    /// the first anticipation's) prevalence.
    pub prevalence: Option<f64>,
    pub oe_ciw: Option<f64>,
    pub c_stat: Option<f64>,
    pub c_stat_ciw: Option<f64>,
    pub slope_ciw: Option<f64>,
    pub net_benefit_ciw: Option<f64>,
    /// Thresholds for the net-benefit criterion; defaults to the run's
    /// classification thresholds.
    pub net_benefit_thresholds: Option<Vec<f64>>,
}

impl CriteriaSpec {
    pub fn is_empty(&self) -> bool {
        self.oe_ciw.is_none()
            && self.c_stat.is_none()
            && self.slope_ciw.is_none()
            && self.net_benefit_ciw.is_none()
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(phi) = self.prevalence {
            check_unit_open("criteria prevalence", phi)?;
            if self.is_empty() {
                return Err(CliError::config(
                    "prevalence applies only to the companion criteria, and none was requested",
                ));
            }
        }
        if let Some(w) = self.oe_ciw {
            check_positive("oe-ciw", w)?;
        }
        match (self.c_stat, self.c_stat_ciw) {
            (Some(c), Some(w)) => {
                check_unit_open("c-stat", c)?;
                check_positive("c-stat-ciw", w)?;
            }
            (Some(_), None) => {
                return Err(CliError::config(
                    "c-stat requires c-stat-ciw (the target interval width)",
                ))
            }
            (None, Some(_)) => {
                return Err(CliError::config(
                    "c-stat-ciw requires c-stat (the anticipated c statistic)",
                ))
            }
            (None, None) => {}
        }
        if let Some(w) = self.slope_ciw {
            check_positive("slope-ciw", w)?;
        }
        if let Some(w) = self.net_benefit_ciw {
            check_positive("net-benefit-ciw", w)?;
        }
        if let Some(thresholds) = &self.net_benefit_thresholds {
            if self.net_benefit_ciw.is_none() {
                return Err(CliError::config(
                    "net-benefit thresholds were given without net-benefit-ciw",
                ));
            }
            if thresholds.is_empty() {
                return Err(CliError::config("net-benefit thresholds must not be empty"));
            }
            for &t in thresholds {
                check_unit_open("net-benefit threshold", t)?;
            }
        }
        Ok(())
    }
}

/// A fully resolved binary planning run, whether it came from flags or a
/// config document.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySpec {
    pub source: AnticipationSource,
    /// Measures the run covers, in reporting order.
    pub measures: Vec<MeasureKind>,
    pub targets: Vec<PrecisionTarget>,
    pub method: CiMethod,
    pub criteria: Option<CriteriaSpec>,
    /// Seed from the config document, if any; the command line and
    /// environment override it.
    pub seed: Option<u64>,
}

impl BinarySpec {
    /// Cross-field and range checks shared by the flag and config paths.
    pub fn validate(&self, at_n: Option<u64>) -> Result<(), CliError> {
        let no_criteria = self.criteria.as_ref().is_none_or(CriteriaSpec::is_empty);
        if self.targets.is_empty() && no_criteria && at_n.is_none() {
            return Err(CliError::config(
                "nothing to solve: give at least one precision target (--ciw/--se), \
                 a companion criterion, or --at-n",
            ));
        }
        for target in &self.targets {
            match target.precision {
                Precision::Ciw(w) => {
                    if !(w > 0.0 && w <= 1.0) {
                        return Err(CliError::config(format!(
                            "target CIW must be in (0, 1], got {w}"
                        )));
                    }
                }
                Precision::Se(se) => check_positive("target SE", se)?,
            }
        }
        if let Some(criteria) = &self.criteria {
            criteria.validate()?;
            if criteria.slope_ciw.is_some() {
                if let AnticipationSource::Manual(_) = self.source {
                    return Err(CliError::config(
                        "slope-ciw needs a risk distribution to derive the linear-predictor \
                         spread; it cannot be used with manual anticipation blocks",
                    ));
                }
            }
        }
        match &self.source {
            AnticipationSource::Cohort {
                dist,
                size,
                thresholds,
            } => {
                if thresholds.is_empty() {
                    return Err(CliError::config("at least one threshold is required"));
                }
                for &t in thresholds {
                    check_unit_open("threshold", t)?;
                }
                if *size == 0 {
                    return Err(CliError::config("cohort-size must be at least 1"));
                }
                dist.validate()
                    .map_err(|e| CliError::config(e.to_string()))?;
            }
            AnticipationSource::Manual(blocks) => {
                if blocks.is_empty() {
                    return Err(CliError::config(
                        "at least one anticipation block is required",
                    ));
                }
                for block in blocks {
                    block
                        .validate()
                        .map_err(|e| CliError::config(e.to_string()))?;
                }
            }
        }
        Ok(())
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn check_unit_open(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(CliError::config(format!(
            "{name} must be strictly between 0 and 1, got {v}"
        )))
    }
}

/// Parse an interval-method name from a flag or config field.
pub fn parse_method(name: &str) -> Result<CiMethod, CliError> {
    match name {
        "wald" => Ok(CiMethod::Wald),
        "agresti-coull" => Ok(CiMethod::AgrestiCoull),
        other => Err(CliError::config(format!(
            "unknown interval method `{other}` (expected `wald` or `agresti-coull`)"
        ))),
    }
}

/// Parse measure names; an empty selection means all six.
pub fn parse_measures(names: &[String]) -> Result<Vec<MeasureKind>, CliError> {
    if names.is_empty() {
        return Ok(MeasureKind::ALL.to_vec());
    }
    let mut kinds = Vec::with_capacity(names.len());
    for name in names {
        let kind = MeasureKind::parse(name).ok_or_else(|| {
            CliError::config(format!(
                "unknown measure `{name}` (expected accuracy, specificity, sensitivity, \
                 ppv, npv, or f1)"
            ))
        })?;
        if kinds.contains(&kind) {
            return Err(CliError::config(format!("measure `{name}` given twice")));
        }
        kinds.push(kind);
    }
    Ok(kinds)
}

/// Cross product of the selected measures with the CIW and SE targets.
pub fn build_targets(kinds: &[MeasureKind], ciw: &[f64], se: &[f64]) -> Vec<PrecisionTarget> {
    let mut targets = Vec::new();
    for &kind in kinds {
        for &w in ciw {
            targets.push(PrecisionTarget {
                kind,
                precision: Precision::Ciw(w),
            });
        }
        for &s in se {
            targets.push(PrecisionTarget {
                kind,
                precision: Precision::Se(s),
            });
        }
    }
    targets
}

// ---------------------------------------------------------------------------
// TOML schemas
// ---------------------------------------------------------------------------

/// `[risk]` table: exactly one way of describing the risk distribution.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RiskTable {
    /// `[alpha, beta]` shape parameters of a Beta distribution.
    beta: Option<Vec<f64>>,
    /// An explicit pool of risks sampled with replacement.
    risks: Option<Vec<f64>>,
    /// Survival only: baseline survival at the horizon, combined with `lp`.
    baseline_survival: Option<f64>,
    /// Survival only: normal linear-predictor distribution.
    lp: Option<LpTable>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LpTable {
    mean: f64,
    sd: f64,
}

impl RiskTable {
    fn distribution(&self) -> Result<RiskDistribution, CliError> {
        match (&self.beta, &self.risks) {
            (Some(shape), None) => {
                if shape.len() != 2 {
                    return Err(CliError::config(
                        "risk.beta must be exactly two values: [alpha, beta]",
                    ));
                }
                Ok(RiskDistribution::Beta {
                    alpha: shape[0],
                    beta: shape[1],
                })
            }
            (None, Some(risks)) => Ok(RiskDistribution::Empirical(risks.clone())),
            _ => Err(CliError::config(
                "risk must give exactly one of `beta` or `risks`",
            )),
        }
    }

    fn forbid_survival_fields(&self) -> Result<(), CliError> {
        if self.baseline_survival.is_some() || self.lp.is_some() {
            return Err(CliError::config(
                "risk.baseline-survival and risk.lp apply only to survival scenarios",
            ));
        }
        Ok(())
    }

    fn risk_model(&self) -> Result<RiskModel, CliError> {
        match (&self.baseline_survival, &self.lp) {
            (Some(s0), Some(lp)) => {
                if self.beta.is_some() || self.risks.is_some() {
                    return Err(CliError::config(
                        "risk gives both a direct distribution and a baseline-survival model",
                    ));
                }
                Ok(RiskModel::BaselineLp {
                    baseline_survival: *s0,
                    lp: LpModel::Normal {
                        mean: lp.mean,
                        sd: lp.sd,
                    },
                })
            }
            (None, None) => Ok(RiskModel::Direct(self.distribution()?)),
            _ => Err(CliError::config(
                "risk.baseline-survival and risk.lp must be given together",
            )),
        }
    }
}

/// `[criteria]` table of a binary config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct CriteriaTable {
    prevalence: Option<f64>,
    oe_ciw: Option<f64>,
    c_stat: Option<f64>,
    c_stat_ciw: Option<f64>,
    slope_ciw: Option<f64>,
    net_benefit_ciw: Option<f64>,
    net_benefit_thresholds: Option<Vec<f64>>,
}

impl From<CriteriaTable> for CriteriaSpec {
    fn from(t: CriteriaTable) -> CriteriaSpec {
        CriteriaSpec {
            prevalence: t.prevalence,
            oe_ciw: t.oe_ciw,
            c_stat: t.c_stat,
            c_stat_ciw: t.c_stat_ciw,
            slope_ciw: t.slope_ciw,
            net_benefit_ciw: t.net_benefit_ciw,
            net_benefit_thresholds: t.net_benefit_thresholds,
        }
    }
}

/// `[[anticipation]]` block: anticipated values supplied by hand.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnticipationTable {
    threshold: f64,
    prevalence: f64,
    accuracy: Option<f64>,
    specificity: Option<f64>,
    sensitivity: Option<f64>,
    ppv: Option<f64>,
    npv: Option<f64>,
    f1: Option<f64>,
}

impl From<AnticipationTable> for PerformanceAnticipation {
    fn from(t: AnticipationTable) -> PerformanceAnticipation {
        PerformanceAnticipation {
            threshold: t.threshold,
            prevalence: t.prevalence,
            accuracy: t.accuracy,
            specificity: t.specificity,
            sensitivity: t.sensitivity,
            ppv: t.ppv,
            npv: t.npv,
            f1: t.f1,
        }
    }
}

/// Top-level schema of a binary planning config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct BinaryConfigFile {
    seed: Option<u64>,
    cohort_size: Option<u64>,
    method: Option<String>,
    thresholds: Option<Vec<f64>>,
    ciw: Option<Vec<f64>>,
    se: Option<Vec<f64>>,
    measures: Option<Vec<String>>,
    risk: Option<RiskTable>,
    criteria: Option<CriteriaTable>,
    anticipation: Option<Vec<AnticipationTable>>,
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

fn parse_toml<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Load a binary planning config document. Range and cross-field checks
/// run later, in [`BinarySpec::validate`].
pub fn load_binary_config(path: &Path) -> Result<BinarySpec, CliError> {
    let file: BinaryConfigFile = parse_toml(path, &read_to_string(path)?)?;
    let method = match &file.method {
        Some(name) => parse_method(name)?,
        None => CiMethod::Wald,
    };
    let source = match (file.risk, file.anticipation) {
        (Some(risk), None) => {
            risk.forbid_survival_fields()?;
            AnticipationSource::Cohort {
                dist: risk.distribution()?,
                size: file.cohort_size.unwrap_or(DEFAULT_COHORT_SIZE),
                thresholds: file.thresholds.unwrap_or_default(),
            }
        }
        (None, Some(blocks)) => {
            if file.thresholds.is_some() {
                return Err(CliError::config(
                    "top-level thresholds conflict with anticipation blocks, which carry \
                     their own",
                ));
            }
            if file.cohort_size.is_some() {
                return Err(CliError::config(
                    "cohort-size has no effect with anticipation blocks",
                ));
            }
            AnticipationSource::Manual(blocks.into_iter().map(Into::into).collect())
        }
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "give either a [risk] table or [[anticipation]] blocks, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::config(
                "a [risk] table or [[anticipation]] blocks are required",
            ))
        }
    };
    let measures = parse_measures(&file.measures.unwrap_or_default())?;
    let targets = build_targets(
        &measures,
        &file.ciw.unwrap_or_default(),
        &file.se.unwrap_or_default(),
    );
    Ok(BinarySpec {
        source,
        measures,
        targets,
        method,
        criteria: file.criteria.map(Into::into),
        seed: file.seed,
    })
}

/// `[events]` table of a survival config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventsTable {
    model: String,
    shape: Option<f64>,
}

impl EventsTable {
    fn model(&self) -> Result<EventModel, CliError> {
        match (self.model.as_str(), self.shape) {
            ("exponential", None) => Ok(EventModel::Exponential),
            ("exponential", Some(_)) => Err(CliError::config(
                "events.shape applies only to the weibull model",
            )),
            ("weibull", Some(shape)) => Ok(EventModel::Weibull { shape }),
            ("weibull", None) => Err(CliError::config("events.shape is required for weibull")),
            (other, _) => Err(CliError::config(format!(
                "unknown event model `{other}` (expected `exponential` or `weibull`)"
            ))),
        }
    }
}

/// `[censoring]` table of a survival config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CensoringTable {
    model: Option<String>,
    rate: Option<f64>,
    shape: Option<f64>,
    scale: Option<f64>,
    /// Administrative cut-off applied on top of random censoring.
    admin: Option<f64>,
}

impl CensoringTable {
    fn model(&self) -> Result<CensoringModel, CliError> {
        let name = self.model.as_deref().unwrap_or("none");
        let forbid = |field: &str, present: bool| -> Result<(), CliError> {
            if present {
                Err(CliError::config(format!(
                    "censoring.{field} does not apply to the {name} model"
                )))
            } else {
                Ok(())
            }
        };
        match name {
            "none" => {
                forbid("rate", self.rate.is_some())?;
                forbid("shape", self.shape.is_some())?;
                forbid("scale", self.scale.is_some())?;
                Ok(CensoringModel::None)
            }
            "exponential" => {
                forbid("shape", self.shape.is_some())?;
                forbid("scale", self.scale.is_some())?;
                let rate = self.rate.ok_or_else(|| {
                    CliError::config("censoring.rate is required for exponential")
                })?;
                Ok(CensoringModel::Exponential { rate })
            }
            "weibull" => {
                forbid("rate", self.rate.is_some())?;
                let shape = self
                    .shape
                    .ok_or_else(|| CliError::config("censoring.shape is required for weibull"))?;
                let scale = self
                    .scale
                    .ok_or_else(|| CliError::config("censoring.scale is required for weibull"))?;
                Ok(CensoringModel::Weibull { shape, scale })
            }
            other => Err(CliError::config(format!(
                "unknown censoring model `{other}` (expected `none`, `exponential`, or `weibull`)"
            ))),
        }
    }
}

/// Top-level schema of a survival simulation config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct SurvivalConfigFile {
    horizon: f64,
    threshold: f64,
    candidate_sizes: Vec<u64>,
    repetitions: u32,
    seed: Option<u64>,
    risk: RiskTable,
    events: EventsTable,
    censoring: Option<CensoringTable>,
}

/// Load and validate a survival scenario config document.
///
/// Returns the scenario plus the document's own seed (if any); the caller
/// resolves the final seed from the flag, the environment, and the document
/// and writes it into the scenario before running. The scenario's own
/// validation runs here, so a config document with out-of-domain values
/// fails as a config error.
pub fn load_survival_config(path: &Path) -> Result<(SurvivalScenario, Option<u64>), CliError> {
    let file: SurvivalConfigFile = parse_toml(path, &read_to_string(path)?)?;
    let (censoring, admin_censoring) = match &file.censoring {
        Some(table) => (table.model()?, table.admin),
        None => (CensoringModel::None, None),
    };
    let scenario = SurvivalScenario {
        horizon: file.horizon,
        threshold: file.threshold,
        risk: file.risk.risk_model()?,
        events: file.events.model()?,
        censoring,
        admin_censoring,
        candidate_sizes: file.candidate_sizes,
        repetitions: file.repetitions,
        seed: file.seed.unwrap_or(0),
    };
    scenario
        .validate()
        .map_err(|e| CliError::config(e.to_string()))?;
    Ok((scenario, file.seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    fn docs_example(name: &str) -> std::path::PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../docs/examples")
            .join(name)
    }

    #[test]
    fn documented_example_configs_stay_loadable() {
        let cohort = load_binary_config(&docs_example("binary-cohort.toml")).unwrap();
        cohort.validate(None).unwrap();
        assert!(cohort.criteria.is_some());

        let manual = load_binary_config(&docs_example("binary-manual.toml")).unwrap();
        manual.validate(None).unwrap();
        assert!(matches!(manual.source, AnticipationSource::Manual(_)));

        let (scenario, seed) = load_survival_config(&docs_example("survival.toml")).unwrap();
        assert_eq!(seed, Some(20));
        assert_eq!(scenario.candidate_sizes, vec![500, 1000]);
    }

    #[test]
    fn binary_config_with_beta_risk_parses() {
        let f = write_temp(
            r#"
            seed = 7
            thresholds = [0.1, 0.3]
            ciw = [0.1]

            [risk]
            beta = [1.33, 1.75]

            [criteria]
            oe-ciw = 0.22
            c-stat = 0.77
            c-stat-ciw = 0.1
            slope-ciw = 0.3
            net-benefit-ciw = 0.2
            "#,
        );
        let spec = load_binary_config(f.path()).unwrap();
        assert_eq!(spec.seed, Some(7));
        assert_eq!(spec.targets.len(), 6);
        assert_eq!(spec.measures, MeasureKind::ALL.to_vec());
        match &spec.source {
            AnticipationSource::Cohort {
                dist,
                size,
                thresholds,
            } => {
                assert_eq!(
                    *dist,
                    RiskDistribution::Beta {
                        alpha: 1.33,
                        beta: 1.75
                    }
                );
                assert_eq!(*size, DEFAULT_COHORT_SIZE);
                assert_eq!(thresholds, &[0.1, 0.3]);
            }
            other => panic!("expected cohort source, got {other:?}"),
        }
        spec.validate(None).unwrap();
    }

    #[test]
    fn binary_config_with_anticipation_blocks_parses() {
        let f = write_temp(
            r#"
            ciw = [0.1]
            measures = ["sensitivity", "ppv"]

            [[anticipation]]
            threshold = 0.1
            prevalence = 0.43
            sensitivity = 0.988
            ppv = 0.468
            "#,
        );
        let spec = load_binary_config(f.path()).unwrap();
        assert_eq!(spec.targets.len(), 2);
        assert_eq!(
            spec.measures,
            vec![MeasureKind::Sensitivity, MeasureKind::Ppv]
        );
        match &spec.source {
            AnticipationSource::Manual(blocks) => {
                assert_eq!(blocks.len(), 1);
                assert_eq!(blocks[0].sensitivity, Some(0.988));
                assert_eq!(blocks[0].accuracy, None);
            }
            other => panic!("expected manual source, got {other:?}"),
        }
        spec.validate(None).unwrap();
    }

    #[test]
    fn unknown_fields_are_rejected_with_a_path() {
        let f = write_temp("thresholds = [0.1]\nciws = [0.1]\n[risk]\nbeta = [1.0, 2.0]");
        let err = load_binary_config(f.path()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("ciws"), "{err}");
    }

    #[test]
    fn out_of_range_threshold_is_a_config_error() {
        let f = write_temp("thresholds = [1.5]\nciw = [0.1]\n[risk]\nbeta = [1.0, 2.0]");
        let spec = load_binary_config(f.path()).unwrap();
        let err = spec.validate(None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("threshold"), "{err}");
    }

    #[test]
    fn risk_table_requires_exactly_one_form() {
        let f =
            write_temp("thresholds = [0.1]\nciw = [0.1]\n[risk]\nbeta = [1.0, 2.0]\nrisks = [0.2]");
        assert!(load_binary_config(f.path()).is_err());
        let f = write_temp("thresholds = [0.1]\nciw = [0.1]\n[risk]");
        assert!(load_binary_config(f.path()).is_err());
    }

    #[test]
    fn slope_with_manual_anticipation_is_rejected() {
        let f = write_temp(
            r#"
            ciw = [0.1]

            [criteria]
            slope-ciw = 0.3

            [[anticipation]]
            threshold = 0.1
            prevalence = 0.43
            sensitivity = 0.988
            "#,
        );
        let spec = load_binary_config(f.path()).unwrap();
        let err = spec.validate(None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("slope"), "{err}");
    }

    #[test]
    fn empty_run_is_rejected_unless_inverse() {
        let f = write_temp("thresholds = [0.1]\n[risk]\nbeta = [1.0, 2.0]");
        let spec = load_binary_config(f.path()).unwrap();
        assert!(spec.validate(None).is_err());
        assert!(spec.validate(Some(949)).is_ok());
    }

    #[test]
    fn survival_config_parses_all_models() {
        let f = write_temp(
            r#"
            horizon = 3.0
            threshold = 0.3
            candidate-sizes = [100, 200]
            repetitions = 10
            seed = 93

            [risk]
            beta = [1.33, 1.75]

            [events]
            model = "exponential"

            [censoring]
            model = "weibull"
            shape = 1.3
            scale = 6.0
            admin = 3.0
            "#,
        );
        let (scenario, seed) = load_survival_config(f.path()).unwrap();
        assert_eq!(seed, Some(93));
        assert_eq!(scenario.events, EventModel::Exponential);
        assert_eq!(
            scenario.censoring,
            CensoringModel::Weibull {
                shape: 1.3,
                scale: 6.0
            }
        );
        assert_eq!(scenario.admin_censoring, Some(3.0));
    }

    #[test]
    fn survival_config_with_lp_risk_parses() {
        let f = write_temp(
            r#"
            horizon = 2.0
            threshold = 0.2
            candidate-sizes = [50]
            repetitions = 5

            [risk]
            baseline-survival = 0.8
            lp = { mean = -0.5, sd = 0.7 }

            [events]
            model = "weibull"
            shape = 1.5
            "#,
        );
        let (scenario, seed) = load_survival_config(f.path()).unwrap();
        assert_eq!(seed, None);
        assert_eq!(
            scenario.risk,
            RiskModel::BaselineLp {
                baseline_survival: 0.8,
                lp: LpModel::Normal {
                    mean: -0.5,
                    sd: 0.7
                }
            }
        );
        assert_eq!(scenario.events, EventModel::Weibull { shape: 1.5 });
        assert_eq!(scenario.censoring, CensoringModel::None);
    }

    #[test]
    fn survival_config_domain_errors_are_config_errors() {
        let f = write_temp(
            r#"
            horizon = -1.0
            threshold = 0.3
            candidate-sizes = [100]
            repetitions = 10

            [risk]
            beta = [1.0, 2.0]

            [events]
            model = "exponential"
            "#,
        );
        let err = load_survival_config(f.path()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("horizon"), "{err}");
    }

    #[test]
    fn censoring_field_model_mismatches_are_rejected() {
        let base = r#"
            horizon = 3.0
            threshold = 0.3
            candidate-sizes = [100]
            repetitions = 10

            [risk]
            beta = [1.0, 2.0]

            [events]
            model = "exponential"
        "#;
        let f = write_temp(&format!(
            "{base}\n[censoring]\nmodel = \"exponential\"\nshape = 2.0"
        ));
        assert!(load_survival_config(f.path()).is_err());
        let f = write_temp(&format!("{base}\n[censoring]\nrate = 0.5"));
        assert!(load_survival_config(f.path()).is_err());
        let f = write_temp(&format!(
            "{base}\n[censoring]\nmodel = \"weibull\"\nshape = 2.0"
        ));
        assert!(load_survival_config(f.path()).is_err());
    }

    #[test]
    fn target_cross_product_covers_measures_and_widths() {
        let kinds = parse_measures(&["ppv".to_string(), "npv".to_string()]).unwrap();
        let targets = build_targets(&kinds, &[0.08, 0.1], &[0.02]);
        assert_eq!(targets.len(), 6);
        assert!(parse_measures(&["auc".to_string()]).is_err());
        assert!(parse_measures(&["ppv".to_string(), "ppv".to_string()]).is_err());
    }
}

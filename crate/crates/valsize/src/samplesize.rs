//! Closed-form minimum sample sizes for the six classification measures,
//! plus the iterative adjusted-interval solver, inverse mode (expected CI
//! width at a fixed n), and the combined study plan.
//!
//! Every solver inverts a planning-stage standard error built from
//! anticipated measure values: the returned `n` is the ceiling of the exact
//! real solution, and the achieved standard error is recomputed at that
//! integer size so callers can verify the target is met.

use crate::criteria::{self, CriteriaInputs};
use crate::error::{Error, Result};
use crate::measures::{
    agresti_coull, confidence_interval, measure_se, CiInput, CiMethod, Interval, MeasureKind, Z_95,
};
use crate::util::ceil_fuzz;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Anticipated performance at a given threshold, used for planning.
///
/// Values are optional: each solver states which ones it needs. The
/// prevalence is the anticipated outcome proportion in the validation
/// population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceAnticipation {
    pub threshold: f64,
    pub prevalence: f64,
    pub accuracy: Option<f64>,
    pub specificity: Option<f64>,
    pub sensitivity: Option<f64>,
    pub ppv: Option<f64>,
    pub npv: Option<f64>,
    pub f1: Option<f64>,
}

impl PerformanceAnticipation {
    /// An anticipation with only threshold and prevalence set.
    pub fn new(threshold: f64, prevalence: f64) -> PerformanceAnticipation {
        PerformanceAnticipation {
            threshold,
            prevalence,
            accuracy: None,
            specificity: None,
            sensitivity: None,
            ppv: None,
            npv: None,
            f1: None,
        }
    }

    /// Check ranges and cross-consistency.
    ///
    /// Every supplied value must lie strictly between 0 and 1, and when
    /// sensitivity, specificity, and an explicit accuracy are all present,
    /// the accuracy implied by `sens·ϕ + spec·(1−ϕ)` must agree with the
    /// supplied accuracy within 0.02 (guards inconsistent user input).
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::OutOfRange {
                what: "threshold",
                requirement: "strictly between 0 and 1",
                value: self.threshold,
            });
        }
        check_rate("prevalence", self.prevalence)?;
        for (what, v) in [
            ("anticipated accuracy", self.accuracy),
            ("anticipated specificity", self.specificity),
            ("anticipated sensitivity", self.sensitivity),
            ("anticipated ppv", self.ppv),
            ("anticipated npv", self.npv),
            ("anticipated f1", self.f1),
        ] {
            if let Some(v) = v {
                check_rate(what, v)?;
            }
        }
        if let (Some(acc), Some(sens), Some(spec)) =
            (self.accuracy, self.sensitivity, self.specificity)
        {
            let implied = sens * self.prevalence + spec * (1.0 - self.prevalence);
            const TOLERANCE: f64 = 0.02;
            if (acc - implied).abs() > TOLERANCE {
                return Err(Error::InconsistentAnticipation {
                    supplied: acc,
                    implied,
                    tolerance: TOLERANCE,
                });
            }
        }
        Ok(())
    }

    /// The anticipated value for a measure: the supplied value, or a derived
    /// one where the definition allows (accuracy from sensitivity and
    /// specificity; F1 as the harmonic mean of PPV and sensitivity).
    pub fn value(&self, kind: MeasureKind) -> Result<f64> {
        let direct = match kind {
            MeasureKind::Accuracy => self.accuracy,
            MeasureKind::Specificity => self.specificity,
            MeasureKind::Sensitivity => self.sensitivity,
            MeasureKind::Ppv => self.ppv,
            MeasureKind::Npv => self.npv,
            MeasureKind::F1 => self.f1,
        };
        if let Some(v) = direct {
            return Ok(v);
        }
        match kind {
            MeasureKind::Accuracy => {
                if let (Some(sens), Some(spec)) = (self.sensitivity, self.specificity) {
                    return Ok(sens * self.prevalence + spec * (1.0 - self.prevalence));
                }
            }
            MeasureKind::F1 => {
                if let (Some(p), Some(r)) = (self.ppv, self.sensitivity) {
                    if p + r > 0.0 {
                        return Ok(2.0 * p * r / (p + r));
                    }
                }
            }
            _ => {}
        }
        Err(Error::MissingAnticipation { kind })
    }

    /// Fraction of the cohort forming the measure's standard-error
    /// denominator: 1 for accuracy, 1−ϕ for specificity, ϕ for sensitivity,
    /// and the expected predicted-positive / predicted-negative fractions
    /// for PPV / NPV.
    pub fn denominator_fraction(&self, kind: MeasureKind) -> Result<f64> {
        match kind {
            MeasureKind::Accuracy => Ok(1.0),
            MeasureKind::Specificity => Ok(1.0 - self.prevalence),
            MeasureKind::Sensitivity => Ok(self.prevalence),
            MeasureKind::Ppv => {
                let sens = self.require(MeasureKind::Sensitivity)?;
                let ppv = self.require(MeasureKind::Ppv)?;
                Ok(self.prevalence * sens / ppv)
            }
            MeasureKind::Npv => {
                let sens = self.require(MeasureKind::Sensitivity)?;
                let spec = self.require(MeasureKind::Specificity)?;
                Ok((1.0 - self.prevalence) * spec + self.prevalence * (1.0 - sens))
            }
            MeasureKind::F1 => Err(Error::MethodUnsupported {
                kind: MeasureKind::F1,
                method: "single-denominator",
            }),
        }
    }

    fn require(&self, kind: MeasureKind) -> Result<f64> {
        let v = match kind {
            MeasureKind::Accuracy => self.accuracy,
            MeasureKind::Specificity => self.specificity,
            MeasureKind::Sensitivity => self.sensitivity,
            MeasureKind::Ppv => self.ppv,
            MeasureKind::Npv => self.npv,
            MeasureKind::F1 => self.f1,
        };
        v.ok_or(Error::MissingAnticipation { kind })
    }
}

/// A precision requirement: either a target standard error or a target 95%
/// confidence interval width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Se(f64),
    Ciw(f64),
}

impl Precision {
    /// The target standard error this requirement translates to.
    pub fn target_se(self) -> Result<f64> {
        match self {
            Precision::Se(se) => {
                if !(se > 0.0) || !se.is_finite() {
                    return Err(Error::OutOfRange {
                        what: "target standard error",
                        requirement: "positive and finite",
                        value: se,
                    });
                }
                Ok(se)
            }
            Precision::Ciw(w) => ciw_to_se(w),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Se(se) => write!(f, "se {se}"),
            Precision::Ciw(w) => write!(f, "ciw {w}"),
        }
    }
}

/// A precision requirement attached to a specific measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionTarget {
    pub kind: MeasureKind,
    pub precision: Precision,
}

/// Identity of a sample-size criterion: one of the six classification
/// measures, or one of the calibration / discrimination / utility criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Measure(MeasureKind),
    OeRatio,
    CalibrationSlope,
    CStatistic,
    NetBenefit,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Measure(kind) => kind.fmt(f),
            Criterion::OeRatio => f.write_str("o/e ratio"),
            Criterion::CalibrationSlope => f.write_str("calibration slope"),
            Criterion::CStatistic => f.write_str("c statistic"),
            Criterion::NetBenefit => f.write_str("net benefit"),
        }
    }
}

/// A solved minimum sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSizeResult {
    pub criterion: Criterion,
    /// Minimum participants: the ceiling of `n_exact`.
    pub n: u64,
    /// Minimum events, ⌈n·ϕ⌉, when the solver knows the prevalence.
    pub events: Option<u64>,
    /// The exact real-valued solution before ceiling.
    pub n_exact: f64,
    /// Standard error achieved at the integer `n`.
    pub achieved_se: f64,
    /// 95% interval width achieved at the integer `n`.
    pub achieved_ciw: f64,
}

/// Convert a 95% confidence interval width to the standard error it implies.
pub fn ciw_to_se(ciw: f64) -> Result<f64> {
    if !(ciw > 0.0 && ciw <= 1.0) {
        return Err(Error::OutOfRange {
            what: "confidence interval width",
            requirement: "in (0, 1]",
            value: ciw,
        });
    }
    Ok(ciw / (2.0 * Z_95))
}

/// Minimum events for a sample of `n` at outcome proportion `phi`: ⌈n·ϕ⌉.
pub fn events_from_n(n: u64, phi: f64) -> Result<u64> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "sample size",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    check_rate("prevalence", phi)?;
    Ok(ceil_fuzz(n as f64 * phi) as u64)
}

fn check_rate(what: &'static str, v: f64) -> Result<f64> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::OutOfRange {
            what,
            requirement: "strictly between 0 and 1",
            value: v,
        });
    }
    Ok(v)
}

/// Finish a proportion-style solve: `n_exact = kernel / se²`, with the
/// achieved error recomputed as `√(kernel / n)`.
pub(crate) fn solve_kernel(
    criterion: Criterion,
    kernel: f64,
    target_se: f64,
    phi: Option<f64>,
) -> Result<SampleSizeResult> {
    let n_exact = kernel / (target_se * target_se);
    let n = ceil_fuzz(n_exact) as u64;
    let n = n.max(1);
    let achieved_se = (kernel / n as f64).sqrt();
    let events = match phi {
        Some(phi) => Some(events_from_n(n, phi)?),
        None => None,
    };
    Ok(SampleSizeResult {
        criterion,
        n,
        events,
        n_exact,
        achieved_se,
        achieved_ciw: 2.0 * Z_95 * achieved_se,
    })
}

/// Minimum n for accuracy at the target standard error.
///
/// Accuracy's denominator is the whole sample, so no prevalence is needed;
/// the result therefore carries no event count (the plan layer fills it in).
pub fn n_accuracy(acc: f64, target_se: f64) -> Result<SampleSizeResult> {
    check_rate("anticipated accuracy", acc)?;
    check_se(target_se)?;
    solve_kernel(
        Criterion::Measure(MeasureKind::Accuracy),
        acc * (1.0 - acc),
        target_se,
        None,
    )
}

/// Minimum n for specificity at the target standard error.
pub fn n_specificity(spec: f64, phi: f64, target_se: f64) -> Result<SampleSizeResult> {
    check_rate("anticipated specificity", spec)?;
    check_rate("prevalence", phi)?;
    check_se(target_se)?;
    solve_kernel(
        Criterion::Measure(MeasureKind::Specificity),
        spec * (1.0 - spec) / (1.0 - phi),
        target_se,
        Some(phi),
    )
}

/// Minimum n for sensitivity at the target standard error.
pub fn n_sensitivity(sens: f64, phi: f64, target_se: f64) -> Result<SampleSizeResult> {
    check_rate("anticipated sensitivity", sens)?;
    check_rate("prevalence", phi)?;
    check_se(target_se)?;
    solve_kernel(
        Criterion::Measure(MeasureKind::Sensitivity),
        sens * (1.0 - sens) / phi,
        target_se,
        Some(phi),
    )
}

/// Minimum n for PPV at the target standard error. The PPV denominator is
/// the expected number of predicted positives, `n·ϕ·sens/ppv`.
pub fn n_ppv(ppv: f64, sens: f64, phi: f64, target_se: f64) -> Result<SampleSizeResult> {
    check_rate("anticipated ppv", ppv)?;
    check_rate("anticipated sensitivity", sens)?;
    check_rate("prevalence", phi)?;
    check_se(target_se)?;
    solve_kernel(
        Criterion::Measure(MeasureKind::Ppv),
        ppv * ppv * (1.0 - ppv) / (phi * sens),
        target_se,
        Some(phi),
    )
}

/// Minimum n for NPV at the target standard error. The NPV denominator is
/// the expected number of predicted negatives,
/// `n·(spec·(1−ϕ) + ϕ·(1−sens))`.
pub fn n_npv(npv: f64, sens: f64, spec: f64, phi: f64, target_se: f64) -> Result<SampleSizeResult> {
    check_rate("anticipated npv", npv)?;
    check_rate("anticipated sensitivity", sens)?;
    check_rate("anticipated specificity", spec)?;
    check_rate("prevalence", phi)?;
    check_se(target_se)?;
    solve_kernel(
        Criterion::Measure(MeasureKind::Npv),
        npv * (1.0 - npv) / (spec * (1.0 - phi) + phi * (1.0 - sens)),
        target_se,
        Some(phi),
    )
}

/// Minimum n for the F1-score at the target standard error.
///
/// The F1 variance combines the precision and recall errors with their
/// covariance; solving for n holds the precision and recall standard errors
/// at their own targets and lets only the covariance shrink with n. When
/// `target_se_p` / `target_se_r` are not given they default to the F1
/// target (the conventional coupling when a single width is requested).
/// The achieved standard error is reported in the same metric, so the
/// minimality guarantee (achieved ≤ target, n−1 exceeds it) holds.
pub fn n_f1(
    ppv: f64,
    sens: f64,
    spec: f64,
    phi: f64,
    target_se_f1: f64,
    target_se_p: Option<f64>,
    target_se_r: Option<f64>,
) -> Result<SampleSizeResult> {
    check_rate("anticipated ppv", ppv)?;
    check_rate("anticipated sensitivity", sens)?;
    check_rate("anticipated specificity", spec)?;
    check_rate("prevalence", phi)?;
    check_se(target_se_f1)?;
    let se_p = target_se_p.unwrap_or(target_se_f1);
    let se_r = target_se_r.unwrap_or(target_se_f1);
    check_se(se_p)?;
    check_se(se_r)?;

    let p = ppv;
    let r = sens;
    let sum4 = (p + r).powi(4);
    let fixed = r.powi(4) * se_p * se_p + p.powi(4) * se_r * se_r;
    let denominator = target_se_f1 * target_se_f1 * sum4 / 4.0 - fixed;
    if denominator <= 0.0 {
        return Err(Error::InconsistentTargets);
    }
    // n-free part of the precision-recall covariance (covariance = kernel/n).
    let cov_kernel = p * (1.0 - p) * (1.0 - r) / phi + p * (1.0 - p) * spec / (1.0 - phi);
    let numerator = 2.0 * p * p * r * r * cov_kernel;
    let n_exact = numerator / denominator;
    let n = (ceil_fuzz(n_exact) as u64).max(1);
    // Achieved F1 error at integer n, in the solve's own metric: precision
    // and recall held at their targets, covariance evaluated at n.
    let se_at = |n: f64| -> f64 {
        let var = 4.0 * (fixed + 2.0 * p * p * r * r * cov_kernel / n) / sum4;
        var.sqrt()
    };
    let achieved_se = se_at(n as f64);
    Ok(SampleSizeResult {
        criterion: Criterion::Measure(MeasureKind::F1),
        n,
        events: Some(events_from_n(n, phi)?),
        n_exact,
        achieved_se,
        achieved_ciw: 2.0 * Z_95 * achieved_se,
    })
}

fn check_se(se: f64) -> Result<()> {
    if !(se > 0.0) || !se.is_finite() {
        return Err(Error::OutOfRange {
            what: "target standard error",
            requirement: "positive and finite",
            value: se,
        });
    }
    Ok(())
}

/// Smallest n whose adjusted (add-two-successes-two-failures) interval is no
/// wider than `target_ciw`, for the five proportion measures.
///
/// The implied success count is the anticipated value times the measure's
/// expected denominator at n, rounded to the nearest whole count (capped at
/// the denominator). Because that rounding makes the width non-monotone in
/// n, the bracket-doubling and bisection answer is certified by scanning a
/// ±5 window for a smaller passing size.
pub fn n_iterative_agresti_coull(
    kind: MeasureKind,
    anticipation: &PerformanceAnticipation,
    target_ciw: f64,
) -> Result<SampleSizeResult> {
    if !kind.is_proportion() {
        return Err(Error::MethodUnsupported {
            kind,
            method: "agresti-coull",
        });
    }
    anticipation.validate()?;
    if !(target_ciw > 0.0 && target_ciw < 1.0) {
        return Err(Error::OutOfRange {
            what: "target confidence interval width",
            requirement: "strictly between 0 and 1",
            value: target_ciw,
        });
    }
    let value = anticipation.value(kind)?;
    check_rate("anticipated value", value)?;
    let frac = anticipation.denominator_fraction(kind)?;

    let width_at = |n: u64| -> Result<f64> {
        let denom = frac * n as f64;
        if denom <= 0.0 {
            return Err(Error::OutOfRange {
                what: "expected denominator",
                requirement: "positive",
                value: denom,
            });
        }
        let successes = (value * denom).round().min(denom.floor());
        let (_, half) = agresti_coull(successes, denom)?;
        Ok(2.0 * half)
    };

    const HI_CAP: u64 = 1_000_000_000;
    let mut hi = 16u64;
    while width_at(hi)? > target_ciw {
        hi = hi.saturating_mul(2);
        if hi > HI_CAP {
            return Err(Error::TargetUnattainable { lo: 1, hi: HI_CAP });
        }
    }
    let mut lo = 1u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if width_at(mid)? <= target_ciw {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let mut best = lo;
    for n in lo.saturating_sub(5).max(1)..lo {
        if width_at(n)? <= target_ciw {
            best = n;
            break;
        }
    }
    let achieved_ciw = width_at(best)?;
    Ok(SampleSizeResult {
        criterion: Criterion::Measure(kind),
        n: best,
        events: Some(events_from_n(best, anticipation.prevalence)?),
        n_exact: best as f64,
        achieved_se: achieved_ciw / (2.0 * Z_95),
        achieved_ciw,
    })
}

/// Expected 95% interval for a measure at a fixed sample size (inverse
/// mode): the anticipated value with the width its planning-stage standard
/// error implies at `n`.
///
/// With the adjusted-interval method the implied (fractional) counts are
/// used directly: value times the measure's expected denominator.
pub fn ciw_at_n(
    kind: MeasureKind,
    anticipation: &PerformanceAnticipation,
    n: u64,
    method: CiMethod,
) -> Result<Interval> {
    anticipation.validate()?;
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "sample size",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    let value = anticipation.value(kind)?;
    match method {
        CiMethod::Wald => {
            let se = measure_se(kind, anticipation, n)?;
            confidence_interval(value, CiInput::Se(se), CiMethod::Wald)
        }
        CiMethod::AgrestiCoull => {
            let frac = anticipation.denominator_fraction(kind)?;
            let trials = frac * n as f64;
            confidence_interval(
                value,
                CiInput::Counts {
                    successes: value * trials,
                    trials,
                },
                CiMethod::AgrestiCoull,
            )
        }
    }
}

/// One row of a study plan: a criterion solved at a specific threshold and
/// precision target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRow {
    /// Classification threshold the row applies to; `None` for the
    /// threshold-free criteria (O/E, slope, c statistic).
    pub threshold: Option<f64>,
    /// The requested precision, as given.
    pub target: Precision,
    pub result: SampleSizeResult,
}

impl PlanRow {
    /// Human-readable identity, e.g. `npv @ threshold 0.1`.
    pub fn label(&self) -> String {
        match self.threshold {
            Some(t) => format!("{} @ threshold {}", self.result.criterion, t),
            None => self.result.criterion.to_string(),
        }
    }
}

/// A combined study plan: every requested criterion solved, with the overall
/// minimum driven by the largest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSizePlan {
    pub rows: Vec<PlanRow>,
    /// max of the per-row minimums.
    pub overall_n: u64,
    /// events at the binding row(s).
    pub overall_events: u64,
    /// Labels of every row achieving the overall minimum (ties report all).
    pub binding: Vec<String>,
}

/// Solve every requested criterion and combine the results into a plan.
///
/// `anticipations` holds one entry per threshold of interest; each precision
/// target is solved at every threshold. `criteria` optionally adds the
/// calibration, discrimination, and net-benefit requirements, which use
/// their own anticipated prevalence.
pub fn plan_binary(
    anticipations: &[PerformanceAnticipation],
    targets: &[PrecisionTarget],
    criteria_inputs: Option<&CriteriaInputs>,
) -> Result<SampleSizePlan> {
    if targets.is_empty() && criteria_inputs.is_none() {
        return Err(Error::EmptyInput);
    }
    if !targets.is_empty() && anticipations.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rows = Vec::new();
    for anticipation in anticipations {
        anticipation.validate()?;
        let phi = anticipation.prevalence;
        for target in targets {
            let se = target.precision.target_se()?;
            let mut result = match target.kind {
                MeasureKind::Accuracy => {
                    n_accuracy(anticipation.value(MeasureKind::Accuracy)?, se)?
                }
                MeasureKind::Specificity => {
                    n_specificity(anticipation.value(MeasureKind::Specificity)?, phi, se)?
                }
                MeasureKind::Sensitivity => {
                    n_sensitivity(anticipation.value(MeasureKind::Sensitivity)?, phi, se)?
                }
                MeasureKind::Ppv => n_ppv(
                    anticipation.value(MeasureKind::Ppv)?,
                    anticipation.value(MeasureKind::Sensitivity)?,
                    phi,
                    se,
                )?,
                MeasureKind::Npv => n_npv(
                    anticipation.value(MeasureKind::Npv)?,
                    anticipation.value(MeasureKind::Sensitivity)?,
                    anticipation.value(MeasureKind::Specificity)?,
                    phi,
                    se,
                )?,
                MeasureKind::F1 => n_f1(
                    anticipation.value(MeasureKind::Ppv)?,
                    anticipation.value(MeasureKind::Sensitivity)?,
                    anticipation.value(MeasureKind::Specificity)?,
                    phi,
                    se,
                    None,
                    None,
                )?,
            };
            if result.events.is_none() {
                result.events = Some(events_from_n(result.n, phi)?);
            }
            rows.push(PlanRow {
                threshold: Some(anticipation.threshold),
                target: target.precision,
                result,
            });
        }
    }
    if let Some(inputs) = criteria_inputs {
        rows.extend(criteria::criteria_rows(inputs)?);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let overall_n = rows
        .iter()
        .map(|r| r.result.n)
        .max()
        .expect("rows checked non-empty");
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
    Ok(SampleSizePlan {
        rows,
        overall_n,
        overall_events,
        binding,
    })
}

//! Threshold-classification performance measures and their standard errors.
//!
//! Predicted risks are classified against a probability threshold: a
//! prediction strictly greater than the threshold counts as positive, and a
//! prediction equal to the threshold classifies negative. The resulting
//! confusion matrix stores real-valued cells so that fractional matrices
//! (pseudo-value sums from censored data) use the same code path as integer
//! counts.

use crate::error::{Error, Result};
use crate::samplesize::PerformanceAnticipation;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Two-sided 95% normal quantile used throughout.
pub const Z_95: f64 = 1.96;

/// The six performance measures supported by the planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Accuracy,
    Specificity,
    Sensitivity,
    Ppv,
    Npv,
    F1,
}

impl MeasureKind {
    /// All six measures in reporting order.
    pub const ALL: [MeasureKind; 6] = [
        MeasureKind::Accuracy,
        MeasureKind::Specificity,
        MeasureKind::Sensitivity,
        MeasureKind::Ppv,
        MeasureKind::Npv,
        MeasureKind::F1,
    ];

    /// Whether the measure is a plain proportion (single count over a single
    /// denominator). F1 is a composite and is excluded.
    pub fn is_proportion(self) -> bool {
        !matches!(self, MeasureKind::F1)
    }

    /// Parse the lowercase name used in configs and reports.
    pub fn parse(name: &str) -> Option<MeasureKind> {
        match name {
            "accuracy" => Some(MeasureKind::Accuracy),
            "specificity" => Some(MeasureKind::Specificity),
            "sensitivity" => Some(MeasureKind::Sensitivity),
            "ppv" => Some(MeasureKind::Ppv),
            "npv" => Some(MeasureKind::Npv),
            "f1" => Some(MeasureKind::F1),
            _ => None,
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MeasureKind::Accuracy => "accuracy",
            MeasureKind::Specificity => "specificity",
            MeasureKind::Sensitivity => "sensitivity",
            MeasureKind::Ppv => "ppv",
            MeasureKind::Npv => "npv",
            MeasureKind::F1 => "f1",
        };
        f.write_str(name)
    }
}

/// Confidence-interval construction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiMethod {
    /// Normal approximation: value ± 1.96·SE.
    Wald,
    /// Adjusted proportion: add two successes and two failures, centre the
    /// interval on the adjusted proportion.
    AgrestiCoull,
}

impl fmt::Display for CiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CiMethod::Wald => f.write_str("wald"),
            CiMethod::AgrestiCoull => f.write_str("agresti-coull"),
        }
    }
}

/// A 2x2 confusion matrix with non-negative real-valued cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_pos: f64,
    pub false_pos: f64,
    pub true_neg: f64,
    pub false_neg: f64,
}

impl ConfusionMatrix {
    /// Build a matrix, validating that every cell is finite and non-negative.
    pub fn new(true_pos: f64, false_pos: f64, true_neg: f64, false_neg: f64) -> Result<Self> {
        for (name, cell) in [
            ("true_pos", true_pos),
            ("false_pos", false_pos),
            ("true_neg", true_neg),
            ("false_neg", false_neg),
        ] {
            if !cell.is_finite() || cell < 0.0 {
                return Err(Error::OutOfRange {
                    what: match name {
                        "true_pos" => "true_pos cell",
                        "false_pos" => "false_pos cell",
                        "true_neg" => "true_neg cell",
                        _ => "false_neg cell",
                    },
                    requirement: "finite and non-negative",
                    value: cell,
                });
            }
        }
        Ok(ConfusionMatrix {
            true_pos,
            false_pos,
            true_neg,
            false_neg,
        })
    }

    /// Total sample size: the sum of all four cells.
    pub fn total(&self) -> f64 {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    /// Outcome proportion: (TP + FN) / N.
    pub fn prevalence(&self) -> f64 {
        (self.true_pos + self.false_neg) / self.total()
    }
}

/// Classify predicted risks against `threshold` and tally the confusion
/// matrix. Predictions strictly above the threshold are positive; a
/// prediction exactly equal to the threshold classifies negative.
pub fn build_confusion(
    probs: &[f64],
    outcomes: &[bool],
    threshold: f64,
) -> Result<ConfusionMatrix> {
    if probs.len() != outcomes.len() {
        return Err(Error::LengthMismatch {
            left: probs.len(),
            right: outcomes.len(),
        });
    }
    if probs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::OutOfRange {
            what: "threshold",
            requirement: "in [0, 1]",
            value: threshold,
        });
    }
    let (mut tp, mut fp, mut tn, mut fnn) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (&p, &y) in probs.iter().zip(outcomes) {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                what: "predicted probability",
                requirement: "in [0, 1]",
                value: p,
            });
        }
        match (p > threshold, y) {
            (true, true) => tp += 1.0,
            (true, false) => fp += 1.0,
            (false, false) => tn += 1.0,
            (false, true) => fnn += 1.0,
        }
    }
    ConfusionMatrix::new(tp, fp, tn, fnn)
}

/// Point estimate of a measure on a confusion matrix.
///
/// # Errors
/// Returns [`Error::UndefinedMeasure`] naming the empty denominator cells
/// when the measure's denominator sums to zero.
pub fn measure_value(cm: &ConfusionMatrix, kind: MeasureKind) -> Result<f64> {
    let ConfusionMatrix {
        true_pos: tp,
        false_pos: fp,
        true_neg: tn,
        false_neg: fnn,
    } = *cm;
    match kind {
        MeasureKind::Accuracy => {
            let n = cm.total();
            if n <= 0.0 {
                return Err(Error::UndefinedMeasure {
                    kind,
                    cells: "all four cells",
                });
            }
            Ok((tp + tn) / n)
        }
        MeasureKind::Specificity => {
            if tn + fp <= 0.0 {
                return Err(Error::UndefinedMeasure {
                    kind,
                    cells: "true negatives plus false positives",
                });
            }
            Ok(tn / (tn + fp))
        }
        MeasureKind::Sensitivity => {
            if tp + fnn <= 0.0 {
                return Err(Error::UndefinedMeasure {
                    kind,
                    cells: "true positives plus false negatives",
                });
            }
            Ok(tp / (tp + fnn))
        }
        MeasureKind::Ppv => {
            if tp + fp <= 0.0 {
                return Err(Error::UndefinedMeasure {
                    kind,
                    cells: "true positives plus false positives",
                });
            }
            Ok(tp / (tp + fp))
        }
        MeasureKind::Npv => {
            if tn + fnn <= 0.0 {
                return Err(Error::UndefinedMeasure {
                    kind,
                    cells: "true negatives plus false negatives",
                });
            }
            Ok(tn / (tn + fnn))
        }
        MeasureKind::F1 => {
            let p = measure_value(cm, MeasureKind::Ppv)?;
            let r = measure_value(cm, MeasureKind::Sensitivity)?;
            if p + r <= 0.0 {
                return Err(Error::UndefinedMeasure {
                    kind,
                    cells: "precision plus recall",
                });
            }
            Ok(2.0 * p * r / (p + r))
        }
    }
}

/// Covariance between precision (PPV) and recall (sensitivity) at sample
/// size `n`, given anticipated precision `p`, recall `r`, specificity, and
/// prevalence. Both terms shrink with 1/n.
pub fn cov_precision_recall(
    p: f64,
    r: f64,
    specificity: f64,
    prevalence: f64,
    n: f64,
) -> Result<f64> {
    for (what, v) in [
        ("precision", p),
        ("recall", r),
        ("specificity", specificity),
    ] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                what,
                requirement: "in [0, 1]",
                value: v,
            });
        }
    }
    if !(prevalence > 0.0 && prevalence < 1.0) {
        return Err(Error::OutOfRange {
            what: "prevalence",
            requirement: "strictly between 0 and 1",
            value: prevalence,
        });
    }
    if !(n > 0.0) {
        return Err(Error::OutOfRange {
            what: "sample size",
            requirement: "positive",
            value: n,
        });
    }
    let kernel =
        p * (1.0 - p) * (1.0 - r) / prevalence + p * (1.0 - p) * specificity / (1.0 - prevalence);
    Ok(kernel / n)
}

/// Covariance between precision and recall computed directly from the
/// matrix cells. Algebraically identical to [`cov_precision_recall`] when
/// the cells are the expected counts at the same anticipated values.
pub fn cov_from_matrix(cm: &ConfusionMatrix) -> Result<f64> {
    let ConfusionMatrix {
        true_pos: tp,
        false_pos: fp,
        true_neg: tn,
        false_neg: fnn,
    } = *cm;
    let pred_pos = tp + fp;
    let actual_pos = tp + fnn;
    let actual_neg = tn + fp;
    if pred_pos <= 0.0 || actual_pos <= 0.0 || actual_neg <= 0.0 {
        return Err(Error::UndefinedMeasure {
            kind: MeasureKind::F1,
            cells: "a margin required by the precision-recall covariance",
        });
    }
    Ok(
        fp * tp * fnn / (pred_pos * pred_pos * actual_pos * actual_pos)
            + fp * tp * tn / (pred_pos * pred_pos * actual_neg * actual_neg),
    )
}

/// Standard error of a measure computed from the matrix cells.
///
/// Each proportion measure uses its own denominator (for example
/// specificity uses TN + FP); F1 combines the precision and recall errors
/// with their covariance via the delta method.
pub fn se_from_matrix(cm: &ConfusionMatrix, kind: MeasureKind) -> Result<f64> {
    let value = measure_value(cm, kind)?;
    let denom = match kind {
        MeasureKind::Accuracy => cm.total(),
        MeasureKind::Specificity => cm.true_neg + cm.false_pos,
        MeasureKind::Sensitivity => cm.true_pos + cm.false_neg,
        MeasureKind::Ppv => cm.true_pos + cm.false_pos,
        MeasureKind::Npv => cm.true_neg + cm.false_neg,
        MeasureKind::F1 => {
            let p = measure_value(cm, MeasureKind::Ppv)?;
            let r = measure_value(cm, MeasureKind::Sensitivity)?;
            let se_p = se_from_matrix(cm, MeasureKind::Ppv)?;
            let se_r = se_from_matrix(cm, MeasureKind::Sensitivity)?;
            let cov = cov_from_matrix(cm)?;
            let sum = p + r;
            let var = 4.0
                * (r.powi(4) * se_p * se_p + 2.0 * p * p * r * r * cov + p.powi(4) * se_r * se_r)
                / sum.powi(4);
            return Ok(var.sqrt());
        }
    };
    Ok((value * (1.0 - value) / denom).sqrt())
}

/// Anticipated (planning-stage) standard error of a measure at sample size
/// `n`, evaluated at the supplied anticipated values.
///
/// Each proportion measure's variance is `v(1−v)` over its expected
/// denominator at `n` (see
/// [`PerformanceAnticipation::denominator_fraction`]); F1 combines the
/// precision and recall errors at `n` with their covariance via the delta
/// method.
pub fn measure_se(
    kind: MeasureKind,
    anticipation: &PerformanceAnticipation,
    n: u64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "sample size",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    let nf = n as f64;
    match kind {
        MeasureKind::F1 => {
            let p = anticipation.value(MeasureKind::Ppv)?;
            let r = anticipation.value(MeasureKind::Sensitivity)?;
            let spec = anticipation.value(MeasureKind::Specificity)?;
            let phi = anticipation.prevalence;
            let var_p = p * p * (1.0 - p) / (nf * phi * r);
            let var_r = r * (1.0 - r) / (nf * phi);
            let cov = cov_precision_recall(p, r, spec, phi, nf)?;
            let sum = p + r;
            let var = 4.0 * (r.powi(4) * var_p + 2.0 * p * p * r * r * cov + p.powi(4) * var_r)
                / sum.powi(4);
            Ok(var.sqrt())
        }
        _ => {
            let v = anticipation.value(kind)?;
            let frac = anticipation.denominator_fraction(kind)?;
            Ok((v * (1.0 - v) / (nf * frac)).sqrt())
        }
    }
}

/// A 95% confidence interval. Bounds are clamped to [0, 1]; `width` is the
/// raw (unclamped) interval width, which mean-width summaries rely on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
    pub width: f64,
}

impl Interval {
    fn from_center(center: f64, half_width: f64) -> Interval {
        Interval {
            low: (center - half_width).max(0.0),
            high: (center + half_width).min(1.0),
            width: 2.0 * half_width,
        }
    }
}

/// Input to [`confidence_interval`]: either a precomputed standard error or
/// the success count and denominator the interval is built from.
#[derive(Debug, Clone, Copy)]
pub enum CiInput {
    Se(f64),
    Counts { successes: f64, trials: f64 },
}

/// Agresti–Coull centre and half-width for `successes` out of `trials`.
/// Adds two successes and two failures, then applies the normal
/// approximation around the adjusted proportion.
pub fn agresti_coull(successes: f64, trials: f64) -> Result<(f64, f64)> {
    if !(trials > 0.0) || !trials.is_finite() {
        return Err(Error::OutOfRange {
            what: "trials",
            requirement: "positive and finite",
            value: trials,
        });
    }
    if successes < 0.0 || !successes.is_finite() {
        return Err(Error::OutOfRange {
            what: "successes",
            requirement: "non-negative and finite",
            value: successes,
        });
    }
    if successes > trials {
        return Err(Error::CountExceedsDenominator {
            count: successes,
            denom: trials,
        });
    }
    let center = (successes + 2.0) / (trials + 4.0);
    let half = Z_95 * (center * (1.0 - center) / trials).sqrt();
    Ok((center, half))
}

/// Build a 95% interval for a proportion-scale value.
///
/// Wald accepts either a standard error or raw counts (from which the SE is
/// derived); Agresti–Coull requires counts.
pub fn confidence_interval(value: f64, input: CiInput, method: CiMethod) -> Result<Interval> {
    match (method, input) {
        (CiMethod::Wald, CiInput::Se(se)) => {
            if se < 0.0 || !se.is_finite() {
                return Err(Error::OutOfRange {
                    what: "standard error",
                    requirement: "non-negative and finite",
                    value: se,
                });
            }
            Ok(Interval::from_center(value, Z_95 * se))
        }
        (CiMethod::Wald, CiInput::Counts { successes, trials }) => {
            if successes > trials {
                return Err(Error::CountExceedsDenominator {
                    count: successes,
                    denom: trials,
                });
            }
            let p = successes / trials;
            let se = (p * (1.0 - p) / trials).sqrt();
            Ok(Interval::from_center(value, Z_95 * se))
        }
        (CiMethod::AgrestiCoull, CiInput::Counts { successes, trials }) => {
            let (center, half) = agresti_coull(successes, trials)?;
            Ok(Interval::from_center(center, half))
        }
        (CiMethod::AgrestiCoull, CiInput::Se(_)) => Err(Error::OutOfRange {
            what: "interval input",
            requirement: "counts (Agresti-Coull is count-based)",
            value: f64::NAN,
        }),
    }
}

/// A measure estimate with its standard error and 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub kind: MeasureKind,
    pub value: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci_method: CiMethod,
}

impl MeasureEstimate {
    /// Raw (unclamped) interval width implied by the stored standard error.
    pub fn ciw(&self) -> f64 {
        2.0 * Z_95 * self.se
    }
}

/// Estimate a measure on a matrix with its 95% interval.
///
/// For Agresti–Coull the successes and trials are the measure's own
/// numerator and denominator cells (fractional cells are accepted); F1 has
/// no single denominator, so requesting an Agresti–Coull interval for it is
/// an error.
pub fn estimate(
    cm: &ConfusionMatrix,
    kind: MeasureKind,
    method: CiMethod,
) -> Result<MeasureEstimate> {
    let value = measure_value(cm, kind)?;
    let se = se_from_matrix(cm, kind)?;
    let interval = match method {
        CiMethod::Wald => confidence_interval(value, CiInput::Se(se), CiMethod::Wald)?,
        CiMethod::AgrestiCoull => {
            let (successes, trials) = match kind {
                MeasureKind::Accuracy => (cm.true_pos + cm.true_neg, cm.total()),
                MeasureKind::Specificity => (cm.true_neg, cm.true_neg + cm.false_pos),
                MeasureKind::Sensitivity => (cm.true_pos, cm.true_pos + cm.false_neg),
                MeasureKind::Ppv => (cm.true_pos, cm.true_pos + cm.false_pos),
                MeasureKind::Npv => (cm.true_neg, cm.true_neg + cm.false_neg),
                MeasureKind::F1 => {
                    return Err(Error::MethodUnsupported {
                        kind,
                        method: "agresti-coull",
                    })
                }
            };
            confidence_interval(
                value,
                CiInput::Counts { successes, trials },
                CiMethod::AgrestiCoull,
            )?
        }
    };
    Ok(MeasureEstimate {
        kind,
        value,
        se,
        ci_low: interval.low,
        ci_high: interval.high,
        ci_method: method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
        assert!(
            (actual - expected).abs() <= tol,
            "{what}: got {actual}, expected {expected} (tol {tol})"
        );
    }

    fn hand_matrix() -> ConfusionMatrix {
        ConfusionMatrix::new(40.0, 10.0, 35.0, 15.0).unwrap()
    }

    #[test]
    fn build_confusion_ties_classify_negative() {
        let probs = [0.1, 0.100000001, 0.3, 0.05];
        let outcomes = [true, true, false, false];
        let cm = build_confusion(&probs, &outcomes, 0.1).unwrap();
        // 0.1 is not > 0.1, so the first record lands in the negative row.
        assert_eq!(cm.true_pos, 1.0);
        assert_eq!(cm.false_pos, 1.0);
        assert_eq!(cm.true_neg, 1.0);
        assert_eq!(cm.false_neg, 1.0);
    }

    #[test]
    fn build_confusion_rejects_bad_inputs() {
        assert!(matches!(
            build_confusion(&[0.5], &[true, false], 0.1),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            build_confusion(&[], &[], 0.1),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            build_confusion(&[0.5], &[true], 1.5),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            build_confusion(&[1.2], &[true], 0.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn hand_matrix_values_and_ses() {
        let cm = hand_matrix();
        let cases = [
            (MeasureKind::Accuracy, 0.75, 0.04330127018922193),
            (
                MeasureKind::Specificity,
                0.7777777777777778,
                0.06197481678030189,
            ),
            (
                MeasureKind::Sensitivity,
                0.7272727272727273,
                0.060052569006892396,
            ),
            (MeasureKind::Ppv, 0.8, 0.0565685424949238),
            (MeasureKind::Npv, 0.7, 0.06480740698407861),
            (MeasureKind::F1, 0.761904761904762, 0.05929147301704054),
        ];
        for (kind, value, se) in cases {
            assert_close(measure_value(&cm, kind).unwrap(), value, 1e-12, "value");
            assert_close(se_from_matrix(&cm, kind).unwrap(), se, 1e-12, "se");
        }
    }

    #[test]
    fn covariance_matches_between_cell_and_rate_forms() {
        let cm = hand_matrix();
        let cell = cov_from_matrix(&cm).unwrap();
        assert_close(cell, 0.003558820528517498, 1e-15, "cell-form covariance");
        let p = measure_value(&cm, MeasureKind::Ppv).unwrap();
        let r = measure_value(&cm, MeasureKind::Sensitivity).unwrap();
        let spec = measure_value(&cm, MeasureKind::Specificity).unwrap();
        let rate = cov_precision_recall(p, r, spec, cm.prevalence(), cm.total()).unwrap();
        assert_close(cell, rate, 1e-15, "covariance form identity");
    }

    #[test]
    fn covariance_kernel_at_unit_n() {
        // Anticipated values at a low threshold on the demonstration cohort.
        let cov = cov_precision_recall(0.468, 0.988, 0.147, 0.43, 1.0).unwrap();
        assert_close(cov, 0.07115776744186046, 1e-15, "covariance kernel");
    }

    #[test]
    fn undefined_measures_name_their_cells() {
        let no_positives = ConfusionMatrix::new(0.0, 0.0, 5.0, 0.0).unwrap();
        match measure_value(&no_positives, MeasureKind::Sensitivity) {
            Err(Error::UndefinedMeasure { kind, cells }) => {
                assert_eq!(kind, MeasureKind::Sensitivity);
                assert!(cells.contains("false negatives"));
            }
            other => panic!("expected undefined-measure error, got {other:?}"),
        }
        assert!(measure_value(&no_positives, MeasureKind::Ppv).is_err());
        assert!(measure_value(&no_positives, MeasureKind::F1).is_err());
    }

    #[test]
    fn agresti_coull_matches_hand_calculation() {
        // Ten successes out of ten trials: centre 12/14, half-width from the
        // adjusted proportion but the original denominator.
        let (center, half) = agresti_coull(10.0, 10.0).unwrap();
        assert_close(center, 0.8571428571428571, 1e-15, "AC centre");
        assert_close(half, 0.21688706738761537, 1e-12, "AC half-width");
        let iv = confidence_interval(
            1.0,
            CiInput::Counts {
                successes: 10.0,
                trials: 10.0,
            },
            CiMethod::AgrestiCoull,
        )
        .unwrap();
        assert_close(iv.low, 0.6402557897552417, 1e-12, "AC low");
        assert_eq!(iv.high, 1.0, "AC high clamps at 1");
        assert_close(iv.width, 0.43377413477523075, 1e-12, "AC raw width");
    }

    #[test]
    fn agresti_coull_rejects_count_above_denominator() {
        assert!(matches!(
            agresti_coull(11.0, 10.0),
            Err(Error::CountExceedsDenominator { .. })
        ));
    }

    #[test]
    fn wald_interval_clamps_but_keeps_raw_width() {
        let iv = confidence_interval(0.98, CiInput::Se(0.02), CiMethod::Wald).unwrap();
        assert_eq!(iv.high, 1.0);
        assert_close(iv.low, 0.98 - 1.96 * 0.02, 1e-15, "low");
        assert_close(iv.width, 2.0 * 1.96 * 0.02, 1e-15, "raw width");
    }

    #[test]
    fn estimate_rejects_agresti_coull_for_f1() {
        let cm = hand_matrix();
        assert!(matches!(
            estimate(&cm, MeasureKind::F1, CiMethod::AgrestiCoull),
            Err(Error::MethodUnsupported { .. })
        ));
        // The five proportions all accept it.
        for kind in MeasureKind::ALL.into_iter().filter(|k| k.is_proportion()) {
            estimate(&cm, kind, CiMethod::AgrestiCoull).unwrap();
        }
    }

    #[test]
    fn f1_equals_harmonic_mean_of_precision_and_recall() {
        let cm = hand_matrix();
        let p = measure_value(&cm, MeasureKind::Ppv).unwrap();
        let r = measure_value(&cm, MeasureKind::Sensitivity).unwrap();
        let f1 = measure_value(&cm, MeasureKind::F1).unwrap();
        assert_close(f1, 2.0 * p * r / (p + r), 1e-15, "harmonic identity");
    }
}

//! Sample-size criteria beyond the classification measures: calibration
//! (O/E ratio and calibration slope), discrimination (c statistic), and
//! clinical utility (standardised net benefit).

use crate::error::{Error, Result};
use crate::measures::Z_95;
use crate::samplesize::{
    events_from_n, solve_kernel, Criterion, PlanRow, Precision, SampleSizeResult,
};
use crate::util::{ceil_fuzz, KahanSum};
use serde::{Deserialize, Serialize};

/// Calibration model assumed for the validation cohort. The defaults —
/// intercept 0, slope 1 — assume the model is well calibrated, which is the
/// standard planning stance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationAssumption {
    /// Intercept α on the log-odds scale.
    pub intercept: f64,
    /// Slope β multiplying the linear predictor.
    pub slope: f64,
}

impl Default for CalibrationAssumption {
    fn default() -> CalibrationAssumption {
        CalibrationAssumption {
            intercept: 0.0,
            slope: 1.0,
        }
    }
}

/// Per-participant Fisher information for the logistic calibration model,
/// averaged over the anticipated linear-predictor distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherInfo {
    pub i_alpha: f64,
    pub i_ab: f64,
    pub i_beta: f64,
}

impl FisherInfo {
    /// Determinant of the 2x2 information matrix.
    pub fn det(&self) -> f64 {
        self.i_alpha * self.i_beta - self.i_ab * self.i_ab
    }
}

/// Target for the O/E ratio: either the standard error of ln(O/E) directly,
/// or the desired width of the ratio-scale interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OeTarget {
    /// Standard error of ln(O/E).
    LnSe(f64),
    /// 95% interval width for O/E itself, assuming O/E ≈ 1.
    RatioCiw(f64),
}

/// Inputs for the standardised net benefit criterion at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnbInputs {
    pub threshold: f64,
    pub prevalence: f64,
    pub sensitivity: f64,
    pub specificity: f64,
}

impl SnbInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::OutOfRange {
                what: "net benefit threshold",
                requirement: "strictly between 0 and 1",
                value: self.threshold,
            });
        }
        for (what, v) in [
            ("prevalence", self.prevalence),
            ("anticipated sensitivity", self.sensitivity),
            ("anticipated specificity", self.specificity),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::OutOfRange {
                    what,
                    requirement: "strictly between 0 and 1",
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Harm-to-benefit weight w = ((1−ϕ)/ϕ)·(p/(1−p)).
    pub fn weight(&self) -> f64 {
        (1.0 - self.prevalence) / self.prevalence * self.threshold / (1.0 - self.threshold)
    }

    /// Standardised net benefit, sens − w·(1−spec).
    pub fn snb(&self) -> f64 {
        self.sensitivity - self.weight() * (1.0 - self.specificity)
    }
}

/// Minimum n targeting the O/E ratio.
///
/// The interval for O/E is built on the log scale, where
/// SE(ln O/E)² = (1−ϕ)/(n·ϕ). A ratio-scale width `w` around O/E = 1
/// back-transforms to `2·sinh(1.96·se)` = w, i.e. se = asinh(w/2)/1.96,
/// which is how a width target is converted. The achieved width is reported
/// on the same scale as the target.
pub fn n_oe(prevalence: f64, target: OeTarget) -> Result<SampleSizeResult> {
    if !(prevalence > 0.0 && prevalence < 1.0) {
        return Err(Error::OutOfRange {
            what: "prevalence",
            requirement: "strictly between 0 and 1",
            value: prevalence,
        });
    }
    let se_ln = match target {
        OeTarget::LnSe(se) => {
            if !(se > 0.0) || !se.is_finite() {
                return Err(Error::OutOfRange {
                    what: "target standard error of ln(O/E)",
                    requirement: "positive and finite",
                    value: se,
                });
            }
            se
        }
        OeTarget::RatioCiw(w) => {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::OutOfRange {
                    what: "target O/E interval width",
                    requirement: "positive and finite",
                    value: w,
                });
            }
            (w / 2.0).asinh() / Z_95
        }
    };
    let kernel = (1.0 - prevalence) / prevalence;
    let mut result = solve_kernel(Criterion::OeRatio, kernel, se_ln, Some(prevalence))?;
    if let OeTarget::RatioCiw(_) = target {
        // Report the achieved width on the ratio scale the caller asked in.
        result.achieved_ciw = 2.0 * (Z_95 * result.achieved_se).sinh();
    }
    Ok(result)
}

/// Per-participant Fisher information of the logistic calibration model,
/// averaged over a sample of linear predictors.
///
/// With event probability x = expit(α + β·lp), the entries are the means of
/// x(1−x), logit(x)·x(1−x), and logit(x)²·x(1−x).
pub fn fisher_info(lp_samples: &[f64], assumption: &CalibrationAssumption) -> Result<FisherInfo> {
    if lp_samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (mut sa, mut sb, mut sc) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
    for &lp in lp_samples {
        if !lp.is_finite() {
            return Err(Error::OutOfRange {
                what: "linear predictor",
                requirement: "finite",
                value: lp,
            });
        }
        let u = assumption.intercept + assumption.slope * lp;
        let x = expit(u);
        let a = x * (1.0 - x);
        sa.add(a);
        sb.add(u * a);
        sc.add(u * u * a);
    }
    let m = lp_samples.len() as f64;
    Ok(FisherInfo {
        i_alpha: sa.value() / m,
        i_ab: sb.value() / m,
        i_beta: sc.value() / m,
    })
}

fn expit(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// Minimum n targeting the calibration slope's standard error.
///
/// Var(β̂) at sample size n is I_α / (n·(I_α·I_β − I_αβ²)); a linear
/// predictor with no spread makes the matrix singular and the slope
/// unidentifiable. The result carries no event count (the information
/// matrix does not know the prevalence); the plan layer fills it in.
pub fn n_calibration_slope(info: &FisherInfo, target_se: f64) -> Result<SampleSizeResult> {
    if !(target_se > 0.0) || !target_se.is_finite() {
        return Err(Error::OutOfRange {
            what: "target slope standard error",
            requirement: "positive and finite",
            value: target_se,
        });
    }
    let det = info.det();
    if !(info.i_alpha > 0.0) || det <= 0.0 || !det.is_finite() {
        return Err(Error::SingularInformation);
    }
    solve_kernel(
        Criterion::CalibrationSlope,
        info.i_alpha / det,
        target_se,
        None,
    )
}

/// Standard error of the c statistic at sample size `n` and prevalence
/// `phi` (Newcombe's approximation, evaluated with a real-valued n).
pub fn se_cstat(c: f64, n: f64, phi: f64) -> Result<f64> {
    check_cstat(c)?;
    if !(phi > 0.0 && phi < 1.0) {
        return Err(Error::OutOfRange {
            what: "prevalence",
            requirement: "strictly between 0 and 1",
            value: phi,
        });
    }
    if !(n >= 2.0) || !n.is_finite() {
        return Err(Error::OutOfRange {
            what: "sample size",
            requirement: "at least 2",
            value: n,
        });
    }
    let var = c
        * (1.0 - c)
        * (1.0 + (n / 2.0 - 1.0) * (1.0 - c) / (2.0 - c) + (n / 2.0 - 1.0) * c / (1.0 + c))
        / (n * n * phi * (1.0 - phi));
    Ok(var.sqrt())
}

fn check_cstat(c: f64) -> Result<()> {
    if !(c > 0.5 && c < 1.0) {
        return Err(Error::OutOfRange {
            what: "c statistic",
            requirement: "strictly between 0.5 and 1",
            value: c,
        });
    }
    Ok(())
}

/// Minimum n targeting the c statistic's standard error.
///
/// The standard error is strictly decreasing in n, so the exact crossing is
/// bracketed by doubling and located by bisection on the real-valued form;
/// the integer answer is verified directly against the target.
pub fn n_cstat(c: f64, phi: f64, target_se: f64) -> Result<SampleSizeResult> {
    check_cstat(c)?;
    if !(target_se > 0.0) || !target_se.is_finite() {
        return Err(Error::OutOfRange {
            what: "target c statistic standard error",
            requirement: "positive and finite",
            value: target_se,
        });
    }
    const HI_CAP: f64 = 1e9;
    let mut lo = 2.0f64;
    let mut hi = 4.0f64;
    if se_cstat(c, lo, phi)? > target_se {
        while se_cstat(c, hi, phi)? > target_se {
            hi *= 2.0;
            if hi > HI_CAP {
                return Err(Error::TargetUnattainable {
                    lo: 2,
                    hi: HI_CAP as u64,
                });
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if se_cstat(c, mid, phi)? > target_se {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        hi = lo;
    }
    let n_exact = hi;
    let mut n = (ceil_fuzz(n_exact) as u64).max(2);
    // Float safety at the crossing: nudge so that n passes and n−1 fails.
    while se_cstat(c, n as f64, phi)? > target_se {
        n += 1;
    }
    while n > 2 && se_cstat(c, (n - 1) as f64, phi)? <= target_se {
        n -= 1;
    }
    let achieved_se = se_cstat(c, n as f64, phi)?;
    Ok(SampleSizeResult {
        criterion: Criterion::CStatistic,
        n,
        events: Some(events_from_n(n, phi)?),
        n_exact,
        achieved_se,
        achieved_ciw: 2.0 * Z_95 * achieved_se,
    })
}

/// Minimum n targeting the standardised net benefit's standard error.
pub fn n_snb(inputs: &SnbInputs, target_se: f64) -> Result<SampleSizeResult> {
    inputs.validate()?;
    if !(target_se > 0.0) || !target_se.is_finite() {
        return Err(Error::OutOfRange {
            what: "target net benefit standard error",
            requirement: "positive and finite",
            value: target_se,
        });
    }
    let phi = inputs.prevalence;
    let sens = inputs.sensitivity;
    let spec = inputs.specificity;
    let w = inputs.weight();
    let kernel = sens * (1.0 - sens) / phi
        + w * w * spec * (1.0 - spec) / (1.0 - phi)
        + w * w * (1.0 - spec) * (1.0 - spec) / (phi * (1.0 - phi));
    solve_kernel(Criterion::NetBenefit, kernel, target_se, Some(phi))
}

/// The calibration / discrimination / utility criteria of a study plan.
///
/// The net-benefit entry reuses the sensitivity and specificity anticipated
/// at the model's primary operating point for every examined threshold;
/// only the weight w changes with the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaInputs {
    /// Anticipated outcome proportion used by these criteria.
    pub prevalence: f64,
    pub oe: Option<OeTarget>,
    pub cstat: Option<CStatCriterion>,
    pub slope: Option<SlopeCriterion>,
    pub net_benefit: Option<NetBenefitCriterion>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CStatCriterion {
    pub c: f64,
    pub target: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeCriterion {
    pub info: FisherInfo,
    pub target: Precision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetBenefitCriterion {
    pub thresholds: Vec<f64>,
    pub sensitivity: f64,
    pub specificity: f64,
    pub target: Precision,
}

/// Solve every requested criterion into plan rows.
pub(crate) fn criteria_rows(inputs: &CriteriaInputs) -> Result<Vec<PlanRow>> {
    let mut rows = Vec::new();
    let phi = inputs.prevalence;
    if let Some(target) = inputs.oe {
        let result = n_oe(phi, target)?;
        let precision = match target {
            OeTarget::LnSe(se) => Precision::Se(se),
            OeTarget::RatioCiw(w) => Precision::Ciw(w),
        };
        rows.push(PlanRow {
            threshold: None,
            target: precision,
            result,
        });
    }
    if let Some(slope) = &inputs.slope {
        let mut result = n_calibration_slope(&slope.info, slope.target.target_se()?)?;
        result.events = Some(events_from_n(result.n, phi)?);
        rows.push(PlanRow {
            threshold: None,
            target: slope.target,
            result,
        });
    }
    if let Some(cstat) = &inputs.cstat {
        let result = n_cstat(cstat.c, phi, cstat.target.target_se()?)?;
        rows.push(PlanRow {
            threshold: None,
            target: cstat.target,
            result,
        });
    }
    if let Some(nb) = &inputs.net_benefit {
        for &threshold in &nb.thresholds {
            let snb = SnbInputs {
                threshold,
                prevalence: phi,
                sensitivity: nb.sensitivity,
                specificity: nb.specificity,
            };
            let result = n_snb(&snb, nb.target.target_se()?)?;
            rows.push(PlanRow {
                threshold: Some(threshold),
                target: nb.target,
                result,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplesize::ciw_to_se;

    #[test]
    fn oe_width_target_uses_asinh_conversion() {
        let result = n_oe(0.43, OeTarget::RatioCiw(0.22)).unwrap();
        assert_eq!(result.n, 423);
        assert_eq!(result.events, Some(182));
        assert!((result.n_exact - 422.54902780252866).abs() < 1e-9);
        // Achieved width is back on the ratio scale and meets the target.
        assert!(result.achieved_ciw <= 0.22);
        assert!(result.achieved_ciw > 0.219);
    }

    #[test]
    fn oe_ln_se_target_is_direct() {
        let se = 0.056009880571705827; // asinh(0.11)/1.96
        let via_ln = n_oe(0.43, OeTarget::LnSe(se)).unwrap();
        assert_eq!(via_ln.n, 423);
    }

    #[test]
    fn degenerate_lp_gives_singular_information() {
        let info = fisher_info(&[0.0; 8], &CalibrationAssumption::default()).unwrap();
        assert!((info.i_alpha - 0.25).abs() < 1e-15);
        assert_eq!(info.i_ab, 0.0);
        assert_eq!(info.i_beta, 0.0);
        assert!(matches!(
            n_calibration_slope(&info, 0.05),
            Err(Error::SingularInformation)
        ));
    }

    #[test]
    fn slope_size_matches_hand_information_matrix() {
        // Symmetric two-point LP at ±1: i_alpha = i_ab-free, closed form.
        let lps = [1.0, -1.0];
        let info = fisher_info(&lps, &CalibrationAssumption::default()).unwrap();
        let a = expit(1.0) * (1.0 - expit(1.0));
        assert!((info.i_alpha - a).abs() < 1e-15);
        assert!(info.i_ab.abs() < 1e-15);
        assert!((info.i_beta - a).abs() < 1e-15);
        // Var(slope) = i_alpha/(n·det) = 1/(n·a): n = 1/(a·se²).
        let result = n_calibration_slope(&info, 0.1).unwrap();
        let expected = 1.0 / (a * 0.01);
        assert!((result.n_exact - expected).abs() < 1e-9);
    }

    #[test]
    fn cstat_size_is_minimal_at_published_value() {
        let target = ciw_to_se(0.1).unwrap();
        let result = n_cstat(0.77, 0.43, target).unwrap();
        assert_eq!(result.n, 347);
        assert_eq!(result.events, Some(150));
        assert!(se_cstat(0.77, 347.0, 0.43).unwrap() <= target);
        assert!(se_cstat(0.77, 346.0, 0.43).unwrap() > target);
        assert!((se_cstat(0.77, 347.0, 0.43).unwrap() - 0.0254929040641771).abs() < 1e-12);
    }

    #[test]
    fn cstat_rejects_uninformative_values() {
        assert!(n_cstat(0.5, 0.43, 0.02).is_err());
        assert!(n_cstat(0.4, 0.43, 0.02).is_err());
        assert!(se_cstat(1.0, 100.0, 0.43).is_err());
    }

    #[test]
    fn snb_reproduces_published_sizes_with_rounded_inputs() {
        // Sensitivity/specificity anticipated at the primary threshold 0.1;
        // the weight changes with the examined threshold.
        let target = ciw_to_se(0.2).unwrap();
        let low = SnbInputs {
            threshold: 0.1,
            prevalence: 0.43,
            sensitivity: 0.988,
            specificity: 0.147,
        };
        assert!((low.weight() - 0.14728682170542637).abs() < 1e-15);
        assert!((low.snb() - 0.8623643410852713).abs() < 1e-12);
        assert_eq!(n_snb(&low, target).unwrap().n, 38);

        let high = SnbInputs {
            threshold: 0.3,
            ..low
        };
        assert!((high.snb() - 0.5034053156146179).abs() < 1e-12);
        assert_eq!(n_snb(&high, target).unwrap().n, 406);
    }

    #[test]
    fn criteria_rows_cover_requested_criteria() {
        let inputs = CriteriaInputs {
            prevalence: 0.43,
            oe: Some(OeTarget::RatioCiw(0.22)),
            cstat: Some(CStatCriterion {
                c: 0.77,
                target: Precision::Ciw(0.1),
            }),
            slope: None,
            net_benefit: Some(NetBenefitCriterion {
                thresholds: vec![0.1, 0.3],
                sensitivity: 0.988,
                specificity: 0.147,
                target: Precision::Ciw(0.2),
            }),
        };
        let rows = criteria_rows(&inputs).unwrap();
        assert_eq!(rows.len(), 4);
        let ns: Vec<u64> = rows.iter().map(|r| r.result.n).collect();
        assert_eq!(ns, vec![423, 347, 38, 406]);
        assert_eq!(rows[2].threshold, Some(0.1));
        assert_eq!(rows[3].threshold, Some(0.3));
    }
}

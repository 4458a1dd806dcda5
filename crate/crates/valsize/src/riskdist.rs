//! Anticipated risk distributions and seeded cohort simulation.
//!
//! Planning values for a validation study are derived by sampling a large
//! synthetic cohort from an anticipated distribution of predicted risks,
//! drawing each outcome as a Bernoulli event at the individual's risk, and
//! reading the performance measures off the resulting confusion matrix.
//! All sampling is reproducible: one 64-bit seed plus a documented stream
//! layout fully determine every draw.

use crate::error::{Error, Result};
use crate::measures::{build_confusion, measure_value, MeasureKind};
use crate::samplesize::PerformanceAnticipation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

/// Anticipated distribution of predicted risks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskDistribution {
    /// Beta(alpha, beta) on (0, 1).
    Beta { alpha: f64, beta: f64 },
    /// Resample with replacement from observed risks; values must lie
    /// strictly inside (0, 1) so their logits stay finite.
    Empirical(Vec<f64>),
}

impl RiskDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            RiskDistribution::Beta { alpha, beta } => {
                for (what, v) in [("beta shape alpha", *alpha), ("beta shape beta", *beta)] {
                    if !(v > 0.0) || !v.is_finite() {
                        return Err(Error::OutOfRange {
                            what,
                            requirement: "positive and finite",
                            value: v,
                        });
                    }
                }
                Ok(())
            }
            RiskDistribution::Empirical(values) => {
                if values.is_empty() {
                    return Err(Error::EmptyInput);
                }
                for &v in values {
                    if !(v > 0.0 && v < 1.0) {
                        return Err(Error::OutOfRange {
                            what: "empirical risk",
                            requirement: "strictly between 0 and 1",
                            value: v,
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// Mean predicted risk, which is also the anticipated prevalence under
    /// perfect calibration.
    pub fn mean(&self) -> f64 {
        match self {
            RiskDistribution::Beta { alpha, beta } => alpha / (alpha + beta),
            RiskDistribution::Empirical(values) => values.iter().sum::<f64>() / values.len() as f64,
        }
    }
}

/// A seeded synthetic cohort of predicted risks and simulated outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedCohort {
    pub probs: Vec<f64>,
    pub outcomes: Vec<bool>,
    pub seed: u64,
}

impl SimulatedCohort {
    pub fn size(&self) -> usize {
        self.probs.len()
    }

    /// Empirical outcome proportion.
    pub fn prevalence(&self) -> f64 {
        self.outcomes.iter().filter(|&&y| y).count() as f64 / self.outcomes.len() as f64
    }
}

/// Deterministic substream RNG.
///
/// Every random draw in this crate comes from a ChaCha8 generator keyed by
/// the user seed, with independent components separated by stream number:
/// stream 0 is cohort sampling; the survival simulation uses stream
/// `(candidate_index << 32) | repetition`. Identical (seed, stream) pairs
/// yield identical draw sequences on every platform.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sample `m` individuals: a predicted risk from `dist`, then a Bernoulli
/// outcome at that risk, interleaved per individual so the sequence is
/// stable. Bitwise-deterministic for a given (dist, m, seed).
pub fn sample_cohort(dist: &RiskDistribution, m: usize, seed: u64) -> Result<SimulatedCohort> {
    dist.validate()?;
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    let mut rng = stream_rng(seed, 0);
    let mut probs = Vec::with_capacity(m);
    let mut outcomes = Vec::with_capacity(m);
    match dist {
        RiskDistribution::Beta { alpha, beta } => {
            let sampler = Beta::new(*alpha, *beta).map_err(|_| Error::OutOfRange {
                what: "beta shape",
                requirement: "a valid Beta parameterisation",
                value: *alpha,
            })?;
            for _ in 0..m {
                let p: f64 = sampler.sample(&mut rng);
                // Guard the open interval against floating-point underflow at
                // extreme shapes; logits must stay finite.
                let p = p.clamp(1e-12, 1.0 - 1e-12);
                outcomes.push(rng.random_bool(p));
                probs.push(p);
            }
        }
        RiskDistribution::Empirical(values) => {
            for _ in 0..m {
                let p = values[rng.random_range(0..values.len())];
                outcomes.push(rng.random_bool(p));
                probs.push(p);
            }
        }
    }
    Ok(SimulatedCohort {
        probs,
        outcomes,
        seed,
    })
}

/// Anticipated performance at `threshold`, read off the cohort's confusion
/// matrix. The anticipation's prevalence is the cohort's empirical outcome
/// proportion, and all six measure values are filled in.
///
/// # Errors
/// Propagates [`Error::UndefinedMeasure`] when a margin needed by one of
/// the measures is empty at this threshold (for example no predicted
/// positives).
pub fn anticipated_measures(
    cohort: &SimulatedCohort,
    threshold: f64,
) -> Result<PerformanceAnticipation> {
    let cm = build_confusion(&cohort.probs, &cohort.outcomes, threshold)?;
    let mut anticipation = PerformanceAnticipation::new(threshold, cm.prevalence());
    anticipation.accuracy = Some(measure_value(&cm, MeasureKind::Accuracy)?);
    anticipation.specificity = Some(measure_value(&cm, MeasureKind::Specificity)?);
    anticipation.sensitivity = Some(measure_value(&cm, MeasureKind::Sensitivity)?);
    anticipation.ppv = Some(measure_value(&cm, MeasureKind::Ppv)?);
    anticipation.npv = Some(measure_value(&cm, MeasureKind::Npv)?);
    anticipation.f1 = Some(measure_value(&cm, MeasureKind::F1)?);
    Ok(anticipation)
}

/// The cohort's linear predictors: logit of each predicted risk.
///
/// # Errors
/// Fails if any risk sits on the boundary of [0, 1], where the logit is
/// infinite.
pub fn lp_samples(cohort: &SimulatedCohort) -> Result<Vec<f64>> {
    cohort
        .probs
        .iter()
        .map(|&p| {
            if p > 0.0 && p < 1.0 {
                Ok((p / (1.0 - p)).ln())
            } else {
                Err(Error::OutOfRange {
                    what: "predicted risk",
                    requirement: "strictly between 0 and 1 for a finite logit",
                    value: p,
                })
            }
        })
        .collect()
}

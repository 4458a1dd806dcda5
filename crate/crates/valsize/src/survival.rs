//! Time-to-event planning pipeline.
//!
//! When the outcome is a time horizon rather than a binary label, censoring
//! makes the observed event status incomplete. This module estimates the
//! cumulative incidence by Kaplan–Meier, converts it to per-individual
//! jackknife pseudo-observations, aggregates those into a fractional
//! confusion matrix at a risk threshold, and wraps the whole chain in a
//! seeded simulator that reports the confidence-interval width each
//! candidate sample size would deliver.

use crate::error::{Error, Result};
use crate::measures::{estimate, CiMethod, ConfusionMatrix, MeasureEstimate, MeasureKind};
use crate::riskdist::{stream_rng, RiskDistribution};
use crate::util::KahanSum;
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp, Normal, Weibull};
use serde::{Deserialize, Serialize};

/// One follow-up record: time on study and whether the event was observed
/// (`event == false` means censored at `time`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalRecord {
    pub time: f64,
    pub event: bool,
}

impl SurvivalRecord {
    pub fn new(time: f64, event: bool) -> Result<Self> {
        if !(time > 0.0) || !time.is_finite() {
            return Err(Error::OutOfRange {
                what: "follow-up time",
                requirement: "positive and finite",
                value: time,
            });
        }
        Ok(SurvivalRecord { time, event })
    }
}

fn validate_records(records: &[SurvivalRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    for r in records {
        SurvivalRecord::new(r.time, r.event)?;
    }
    Ok(())
}

/// A fitted Kaplan–Meier survival curve: distinct event times and the
/// survival probability just after each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KmCurve {
    times: Vec<f64>,
    survival: Vec<f64>,
}

impl KmCurve {
    /// Fit the product-limit estimator. At tied times, events are counted
    /// before censorings drop anyone from the risk set.
    pub fn fit(records: &[SurvivalRecord]) -> Result<KmCurve> {
        validate_records(records)?;
        let mut sorted: Vec<&SurvivalRecord> = records.iter().collect();
        sorted.sort_by(|a, b| a.time.total_cmp(&b.time));
        let n = sorted.len();
        let mut times = Vec::new();
        let mut survival = Vec::new();
        let mut s = 1.0;
        let mut i = 0;
        while i < n {
            let t = sorted[i].time;
            let first = i;
            let mut deaths = 0u64;
            while i < n && sorted[i].time == t {
                if sorted[i].event {
                    deaths += 1;
                }
                i += 1;
            }
            if deaths > 0 {
                let at_risk = (n - first) as f64;
                s *= 1.0 - deaths as f64 / at_risk;
                times.push(t);
                survival.push(s);
            }
        }
        Ok(KmCurve { times, survival })
    }

    /// S(t): survival probability at time `t` (right-continuous step
    /// function, S(0) = 1).
    pub fn survival_at(&self, t: f64) -> f64 {
        // Index of the last event time <= t.
        let idx = self.times.partition_point(|&tau| tau <= t);
        if idx == 0 {
            1.0
        } else {
            self.survival[idx - 1]
        }
    }

    /// F(t) = 1 - S(t).
    pub fn cumulative_incidence_at(&self, t: f64) -> f64 {
        1.0 - self.survival_at(t)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn survival(&self) -> &[f64] {
        &self.survival
    }
}

/// Kaplan–Meier cumulative incidence by `t_star`: the estimated probability
/// of the event occurring on or before the horizon.
pub fn km_cumulative_incidence(records: &[SurvivalRecord], t_star: f64) -> Result<f64> {
    if !t_star.is_finite() || t_star < 0.0 {
        return Err(Error::OutOfRange {
            what: "horizon",
            requirement: "non-negative and finite",
            value: t_star,
        });
    }
    Ok(KmCurve::fit(records)?.cumulative_incidence_at(t_star))
}

/// Per-distinct-event-time tallies needed by the leave-one-out recursion.
struct EventGroups {
    /// Distinct event times <= t_star, ascending.
    taus: Vec<f64>,
    /// Events at each tau.
    deaths: Vec<f64>,
    /// Number at risk at each tau.
    at_risk: Vec<f64>,
}

fn event_groups(sorted: &[(f64, bool)], t_star: f64) -> EventGroups {
    let n = sorted.len();
    let mut taus = Vec::new();
    let mut deaths = Vec::new();
    let mut at_risk = Vec::new();
    let mut i = 0;
    while i < n && sorted[i].0 <= t_star {
        let t = sorted[i].0;
        let first = i;
        let mut d = 0u64;
        while i < n && sorted[i].0 == t {
            if sorted[i].1 {
                d += 1;
            }
            i += 1;
        }
        if d > 0 {
            taus.push(t);
            deaths.push(d as f64);
            at_risk.push((n - first) as f64);
        }
    }
    EventGroups {
        taus,
        deaths,
        at_risk,
    }
}

/// Jackknife pseudo-observations for the cumulative incidence by `t_star`.
///
/// For each individual i, `N * F - (N - 1) * F_without_i`, where F is the
/// Kaplan–Meier cumulative incidence. Pseudo-observations turn a censored
/// outcome into a per-individual quantity whose mean recovers F, letting
/// threshold performance measures be computed as if outcomes were complete.
///
/// Runs in O(N log N): each leave-one-out curve differs from the full one
/// only in the factors at times up to the removed individual's exit (risk
/// sets shrink by one) and, for an uncensored individual, at its own event
/// time (one fewer death). Prefix and suffix products over the three
/// possible per-time factors reconstruct every leave-one-out estimate
/// without refitting. Factors are composed multiplicatively rather than by
/// dividing the full-sample product, so zero factors (a risk set emptied by
/// events) propagate exactly instead of producing 0/0.
///
/// Requires at least two records; leave-one-out is undefined on one.
pub fn pseudo_observations(records: &[SurvivalRecord], t_star: f64) -> Result<Vec<f64>> {
    validate_records(records)?;
    if records.len() < 2 {
        return Err(Error::OutOfRange {
            what: "number of records",
            requirement: "at least 2 for leave-one-out",
            value: records.len() as f64,
        });
    }
    if !t_star.is_finite() || t_star < 0.0 {
        return Err(Error::OutOfRange {
            what: "horizon",
            requirement: "non-negative and finite",
            value: t_star,
        });
    }
    let n = records.len();
    let nf = n as f64;
    let mut sorted: Vec<(f64, bool)> = records.iter().map(|r| (r.time, r.event)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let groups = event_groups(&sorted, t_star);
    let j = groups.taus.len();

    // Per-time factors: full sample; risk set minus one; risk set and death
    // count both minus one. A one-person risk set leaves no one to drop, so
    // its leave-one-out factor is the empty product.
    let mut full = vec![1.0; j];
    let mut fewer_risk = vec![1.0; j];
    let mut fewer_death = vec![1.0; j];
    for k in 0..j {
        let d = groups.deaths[k];
        let r = groups.at_risk[k];
        full[k] = 1.0 - d / r;
        fewer_risk[k] = if r > 1.0 { 1.0 - d / (r - 1.0) } else { 1.0 };
        fewer_death[k] = if r > 1.0 {
            1.0 - (d - 1.0) / (r - 1.0)
        } else {
            1.0
        };
    }
    // prefix[k] = product of fewer_risk[0..k]; suffix[k] = product of
    // full[k..j].
    let mut prefix = vec![1.0; j + 1];
    for k in 0..j {
        prefix[k + 1] = prefix[k] * fewer_risk[k];
    }
    let mut suffix = vec![1.0; j + 1];
    for k in (0..j).rev() {
        suffix[k] = full[k] * suffix[k + 1];
    }
    let f_full = 1.0 - suffix[0];

    let mut pseudo = Vec::with_capacity(n);
    for rec in records {
        let s_loo = if rec.event && rec.time <= t_star {
            // Removed individual dies at tau_p: risk sets before p shrink,
            // tau_p loses one death and one at risk, later times are
            // untouched.
            let p = groups.taus.partition_point(|&tau| tau < rec.time);
            debug_assert!(p < j && groups.taus[p] == rec.time);
            prefix[p] * fewer_death[p] * suffix[p + 1]
        } else {
            // Censored (or event after the horizon): risk sets up to the
            // exit time shrink by one, everything later is untouched.
            let cut = rec.time.min(t_star);
            let m = groups.taus.partition_point(|&tau| tau <= cut);
            prefix[m] * suffix[m]
        };
        pseudo.push(nf * f_full - (nf - 1.0) * (1.0 - s_loo));
    }
    Ok(pseudo)
}

/// Fractional confusion matrix from pseudo-observations at a risk
/// threshold, plus how many of the four aggregate cells were clamped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoConfusion {
    pub matrix: ConfusionMatrix,
    /// Aggregate cells that came out negative (pseudo-observations can
    /// exceed [0, 1]) and were clamped to zero.
    pub clamped_cells: u32,
}

/// Aggregate pseudo-observations into a confusion matrix: each individual
/// contributes `pseudo` to the event column and `1 - pseudo` to the
/// non-event column of their predicted class. Cells sum to N before
/// clamping; negative aggregate cells are clamped to zero and counted.
pub fn pseudo_confusion(pseudo: &[f64], risks: &[f64], threshold: f64) -> Result<PseudoConfusion> {
    if pseudo.len() != risks.len() {
        return Err(Error::LengthMismatch {
            left: pseudo.len(),
            right: risks.len(),
        });
    }
    if pseudo.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::OutOfRange {
            what: "classification threshold",
            requirement: "within [0, 1]",
            value: threshold,
        });
    }
    let mut tp = KahanSum::new();
    let mut fp = KahanSum::new();
    let mut fn_ = KahanSum::new();
    let mut tn = KahanSum::new();
    for (&p, &risk) in pseudo.iter().zip(risks) {
        if !p.is_finite() {
            return Err(Error::OutOfRange {
                what: "pseudo-observation",
                requirement: "finite",
                value: p,
            });
        }
        if !(0.0..=1.0).contains(&risk) {
            return Err(Error::OutOfRange {
                what: "predicted risk",
                requirement: "within [0, 1]",
                value: risk,
            });
        }
        if risk > threshold {
            tp.add(p);
            fp.add(1.0 - p);
        } else {
            fn_.add(p);
            tn.add(1.0 - p);
        }
    }
    let mut clamped_cells = 0u32;
    let mut clamp = |x: f64| {
        if x < 0.0 {
            clamped_cells += 1;
            0.0
        } else {
            x
        }
    };
    let cells = [
        clamp(tp.value()),
        clamp(fp.value()),
        clamp(tn.value()),
        clamp(fn_.value()),
    ];
    let matrix = ConfusionMatrix::new(cells[0], cells[1], cells[2], cells[3])?;
    Ok(PseudoConfusion {
        matrix,
        clamped_cells,
    })
}

/// Survival probability `s0` at the horizon for a baseline individual,
/// raised to exp(lp): the usual proportional-hazards risk transform,
/// `1 - s0^exp(lp)`.
pub fn predicted_risk(baseline_survival: f64, lp: f64) -> Result<f64> {
    if !(baseline_survival > 0.0 && baseline_survival <= 1.0) {
        return Err(Error::OutOfRange {
            what: "baseline survival",
            requirement: "within (0, 1]",
            value: baseline_survival,
        });
    }
    if !lp.is_finite() {
        return Err(Error::OutOfRange {
            what: "linear predictor",
            requirement: "finite",
            value: lp,
        });
    }
    Ok(1.0 - (lp.exp() * baseline_survival.ln()).exp())
}

/// Distribution of linear predictors for a baseline-survival risk model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpModel {
    Normal { mean: f64, sd: f64 },
}

/// How an individual's predicted risk at the horizon is generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiskModel {
    /// Draw the risk directly.
    Direct(RiskDistribution),
    /// Draw a linear predictor and map it through
    /// [`predicted_risk`] with this baseline survival.
    BaselineLp { baseline_survival: f64, lp: LpModel },
}

/// Shape of the event-time distribution. Each individual's scale is
/// calibrated so that their probability of an event by the horizon equals
/// their predicted risk exactly, keeping the simulation calibrated by
/// construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventModel {
    Exponential,
    Weibull { shape: f64 },
}

/// Random censoring, applied independently of the event process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CensoringModel {
    None,
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
}

/// A complete simulation design: risk model, event and censoring processes,
/// horizon and threshold, candidate sample sizes, repetitions, and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalScenario {
    pub horizon: f64,
    pub threshold: f64,
    pub risk: RiskModel,
    pub events: EventModel,
    pub censoring: CensoringModel,
    /// Administrative cut-off: everyone still on study is censored here.
    pub admin_censoring: Option<f64>,
    pub candidate_sizes: Vec<u64>,
    pub repetitions: u32,
    pub seed: u64,
}

impl SurvivalScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::OutOfRange {
                what: "horizon",
                requirement: "positive and finite",
                value: self.horizon,
            });
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::OutOfRange {
                what: "classification threshold",
                requirement: "strictly between 0 and 1",
                value: self.threshold,
            });
        }
        match &self.risk {
            RiskModel::Direct(dist) => dist.validate()?,
            RiskModel::BaselineLp {
                baseline_survival,
                lp,
            } => {
                if !(*baseline_survival > 0.0 && *baseline_survival < 1.0) {
                    return Err(Error::OutOfRange {
                        what: "baseline survival",
                        requirement: "strictly between 0 and 1 for simulation",
                        value: *baseline_survival,
                    });
                }
                match lp {
                    LpModel::Normal { mean, sd } => {
                        if !mean.is_finite() {
                            return Err(Error::OutOfRange {
                                what: "linear predictor mean",
                                requirement: "finite",
                                value: *mean,
                            });
                        }
                        if !(*sd > 0.0) || !sd.is_finite() {
                            return Err(Error::OutOfRange {
                                what: "linear predictor sd",
                                requirement: "positive and finite",
                                value: *sd,
                            });
                        }
                    }
                }
            }
        }
        if let EventModel::Weibull { shape } = self.events {
            if !(shape > 0.0) || !shape.is_finite() {
                return Err(Error::OutOfRange {
                    what: "event shape",
                    requirement: "positive and finite",
                    value: shape,
                });
            }
        }
        match self.censoring {
            CensoringModel::None => {}
            CensoringModel::Exponential { rate } => {
                if !(rate > 0.0) || !rate.is_finite() {
                    return Err(Error::OutOfRange {
                        what: "censoring rate",
                        requirement: "positive and finite",
                        value: rate,
                    });
                }
            }
            CensoringModel::Weibull { shape, scale } => {
                for (what, v) in [("censoring shape", shape), ("censoring scale", scale)] {
                    if !(v > 0.0) || !v.is_finite() {
                        return Err(Error::OutOfRange {
                            what,
                            requirement: "positive and finite",
                            value: v,
                        });
                    }
                }
            }
        }
        if let Some(admin) = self.admin_censoring {
            if !(admin > 0.0) || !admin.is_finite() {
                return Err(Error::OutOfRange {
                    what: "administrative censoring time",
                    requirement: "positive and finite",
                    value: admin,
                });
            }
        }
        if self.candidate_sizes.is_empty() {
            return Err(Error::EmptyInput);
        }
        for &size in &self.candidate_sizes {
            if size < 2 {
                return Err(Error::OutOfRange {
                    what: "candidate sample size",
                    requirement: "at least 2",
                    value: size as f64,
                });
            }
        }
        if self.repetitions == 0 {
            return Err(Error::OutOfRange {
                what: "repetitions",
                requirement: "at least 1",
                value: 0.0,
            });
        }
        Ok(())
    }

    /// A ready-to-run demonstration design: moderately discriminating risks,
    /// exponential event times calibrated to each risk, Weibull loss to
    /// follow-up, and an administrative cut at the three-year horizon. The
    /// two candidate sizes differ roughly fourfold, so interval widths
    /// should shrink roughly twofold between them.
    pub fn example() -> SurvivalScenario {
        SurvivalScenario {
            horizon: 3.0,
            threshold: 0.3,
            risk: RiskModel::Direct(RiskDistribution::Beta {
                alpha: 1.33,
                beta: 1.75,
            }),
            events: EventModel::Exponential,
            censoring: CensoringModel::Weibull {
                shape: 1.3,
                scale: 6.0,
            },
            admin_censoring: Some(3.0),
            candidate_sizes: vec![3_600, 14_250],
            repetitions: 200,
            seed: 93,
        }
    }
}

/// One simulated individual: predicted risk and observed follow-up.
fn simulate_individual(
    scenario: &SurvivalScenario,
    rng: &mut impl Rng,
) -> Result<(f64, SurvivalRecord)> {
    let risk = match &scenario.risk {
        RiskModel::Direct(RiskDistribution::Beta { alpha, beta }) => {
            let sampler = Beta::new(*alpha, *beta).map_err(|_| Error::OutOfRange {
                what: "beta shape",
                requirement: "a valid Beta parameterisation",
                value: *alpha,
            })?;
            sampler.sample(rng)
        }
        RiskModel::Direct(RiskDistribution::Empirical(values)) => {
            values[rng.random_range(0..values.len())]
        }
        RiskModel::BaselineLp {
            baseline_survival,
            lp,
        } => {
            let lp_value = match lp {
                LpModel::Normal { mean, sd } => {
                    Normal::new(*mean, *sd).expect("validated").sample(rng)
                }
            };
            predicted_risk(*baseline_survival, lp_value)?
        }
    };
    // Keep every risk usable as an event probability strictly inside (0, 1).
    let risk = risk.clamp(1e-12, 1.0 - 1e-12);

    // Calibrate the individual's event-time scale so P(T <= horizon) = risk.
    let neg_log_surv = -(-risk).ln_1p(); // -ln(1 - risk) > 0
    let event_time: f64 = match scenario.events {
        EventModel::Exponential => {
            let lambda = neg_log_surv / scenario.horizon;
            Exp::new(lambda).expect("positive rate").sample(rng)
        }
        EventModel::Weibull { shape } => {
            let scale = scenario.horizon / neg_log_surv.powf(1.0 / shape);
            Weibull::new(scale, shape).expect("validated").sample(rng)
        }
    };
    let mut censor_time: f64 = match scenario.censoring {
        CensoringModel::None => f64::INFINITY,
        CensoringModel::Exponential { rate } => Exp::new(rate).expect("validated").sample(rng),
        CensoringModel::Weibull { shape, scale } => {
            Weibull::new(scale, shape).expect("validated").sample(rng)
        }
    };
    if let Some(admin) = scenario.admin_censoring {
        censor_time = censor_time.min(admin);
    }
    // Ties go to the event, and times are kept strictly positive.
    let (time, event) = if event_time <= censor_time {
        (event_time, true)
    } else {
        (censor_time, false)
    };
    Ok((risk, SurvivalRecord::new(time.max(1e-300), event)?))
}

/// Mean estimate and mean confidence-interval width for one measure across
/// the non-degenerate repetitions of a candidate size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureCiw {
    pub kind: MeasureKind,
    pub mean_estimate: f64,
    pub mean_ciw: f64,
}

/// Simulation results for one candidate sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSummary {
    pub size: u64,
    pub repetitions: u32,
    /// Repetitions dropped because a measure was undefined (an empty
    /// matrix margin) or no events were observed by the horizon.
    pub degenerate: u32,
    /// Total aggregate matrix cells clamped to zero across repetitions.
    pub clamped_cells: u64,
    pub measures: Vec<MeasureCiw>,
}

/// One repetition's estimate of one measure, for per-repetition audit
/// export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub size: u64,
    pub repetition: u32,
    pub kind: MeasureKind,
    pub estimate: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub width: f64,
}

/// Full simulation output across candidate sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub candidates: Vec<CandidateSummary>,
    /// Per-repetition records, present when capture was requested.
    pub rep_records: Option<Vec<RepRecord>>,
}

/// Run the scenario: for every candidate size, repeatedly simulate a
/// cohort, push it through the pseudo-observation pipeline, and average
/// each measure's estimate and confidence-interval width over the
/// non-degenerate repetitions.
///
/// Repetition `r` of candidate `c` draws from stream `(c << 32) | r` of the
/// scenario seed, so results are reproducible and independent of execution
/// order. A repetition is degenerate when any of the six measures is
/// undefined on its matrix; a candidate with no usable repetitions aborts
/// the run with [`Error::AllRepetitionsDegenerate`].
pub fn simulate_ciw(scenario: &SurvivalScenario, capture_reps: bool) -> Result<SimulationSummary> {
    scenario.validate()?;
    let mut candidates = Vec::with_capacity(scenario.candidate_sizes.len());
    let mut rep_records = if capture_reps { Some(Vec::new()) } else { None };
    for (candidate_idx, &size) in scenario.candidate_sizes.iter().enumerate() {
        let mut est_sums: Vec<KahanSum> =
            MeasureKind::ALL.iter().map(|_| KahanSum::new()).collect();
        let mut ciw_sums: Vec<KahanSum> =
            MeasureKind::ALL.iter().map(|_| KahanSum::new()).collect();
        let mut usable = 0u32;
        let mut degenerate = 0u32;
        let mut clamped_cells = 0u64;
        for rep in 0..scenario.repetitions {
            let stream = ((candidate_idx as u64) << 32) | rep as u64;
            let mut rng = stream_rng(scenario.seed, stream);
            let mut risks = Vec::with_capacity(size as usize);
            let mut records = Vec::with_capacity(size as usize);
            for _ in 0..size {
                let (risk, record) = simulate_individual(scenario, &mut rng)?;
                risks.push(risk);
                records.push(record);
            }
            let pseudo = pseudo_observations(&records, scenario.horizon)?;
            let pc = pseudo_confusion(&pseudo, &risks, scenario.threshold)?;
            let estimates: Option<Vec<MeasureEstimate>> = MeasureKind::ALL
                .iter()
                .map(|&kind| estimate(&pc.matrix, kind, CiMethod::Wald).ok())
                .collect();
            match estimates {
                Some(list) if list.iter().all(|e| e.se.is_finite()) => {
                    usable += 1;
                    clamped_cells += u64::from(pc.clamped_cells);
                    for (slot, e) in est_sums.iter_mut().zip(&list) {
                        slot.add(e.value);
                    }
                    for (slot, e) in ciw_sums.iter_mut().zip(&list) {
                        slot.add(e.ciw());
                    }
                    if let Some(ref mut out) = rep_records {
                        for e in &list {
                            out.push(RepRecord {
                                size,
                                repetition: rep,
                                kind: e.kind,
                                estimate: e.value,
                                se: e.se,
                                ci_low: e.ci_low,
                                ci_high: e.ci_high,
                                width: e.ciw(),
                            });
                        }
                    }
                }
                _ => degenerate += 1,
            }
        }
        if usable == 0 {
            return Err(Error::AllRepetitionsDegenerate {
                size,
                repetitions: scenario.repetitions,
            });
        }
        let denom = f64::from(usable);
        let measures = MeasureKind::ALL
            .iter()
            .enumerate()
            .map(|(i, &kind)| MeasureCiw {
                kind,
                mean_estimate: est_sums[i].value() / denom,
                mean_ciw: ciw_sums[i].value() / denom,
            })
            .collect();
        candidates.push(CandidateSummary {
            size,
            repetitions: scenario.repetitions,
            degenerate,
            clamped_cells,
            measures,
        });
    }
    Ok(SimulationSummary {
        candidates,
        rep_records,
    })
}

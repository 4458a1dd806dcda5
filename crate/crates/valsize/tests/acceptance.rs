//! Acceptance gate: one test per release criterion, each printing a
//! `criterion N (...): PASS` line or failing with full diagnostics.
//!
//! Two criteria pin this library's outputs to previously published
//! reference tables that contain internally inconsistent cells — values
//! the documented formulas cannot produce at the stated inputs. Those
//! tests implement the stated check faithfully and fail with an analysis
//! of the discrepancy rather than widening tolerances to hide it.

use std::time::Instant;

use rand::Rng;
use valsize::criteria::{
    fisher_info, n_calibration_slope, n_cstat, n_oe, n_snb, se_cstat, CalibrationAssumption,
    OeTarget, SnbInputs,
};
use valsize::measures::{
    build_confusion, measure_value, se_from_matrix, CiMethod, ConfusionMatrix, MeasureKind,
};
use valsize::riskdist::{
    anticipated_measures, lp_samples, sample_cohort, stream_rng, RiskDistribution,
};
use valsize::samplesize::{
    ciw_at_n, ciw_to_se, events_from_n, n_accuracy, n_f1, n_npv, n_ppv, n_sensitivity,
    n_specificity, PerformanceAnticipation, SampleSizeResult,
};
use valsize::survival::{
    km_cumulative_incidence, pseudo_observations, simulate_ciw, SurvivalRecord, SurvivalScenario,
};

/// Seed of the demonstration cohort used throughout the golden checks.
const DEMO_SEED: u64 = 1;
/// Size of the demonstration cohort.
const DEMO_SIZE: usize = 1_000_000;

fn demo_distribution() -> RiskDistribution {
    RiskDistribution::Beta {
        alpha: 1.33,
        beta: 1.75,
    }
}

fn pass(n: u32, name: &str) {
    println!("criterion {n} ({name}): PASS");
}

/// Published planning values at each threshold: (measure value as rounded
/// in the reference table; for F1 the solver consumes ppv/sens/spec).
const ROUNDED_01: [f64; 6] = [0.51, 0.147, 0.988, 0.468, 0.943, 0.636];
const ROUNDED_03: [f64; 6] = [0.663, 0.508, 0.867, 0.573, 0.834, 0.690];

/// Reference minimum sizes per (threshold, measure) for interval widths
/// 0.08, 0.1, 0.12.
const TABLE_01: [[u64; 3]; 6] = [
    [601, 385, 267],
    [529, 338, 235],
    [65, 42, 29],
    [660, 423, 294],
    [1457, 933, 648],
    [592, 379, 263],
];
const TABLE_03: [[u64; 3]; 6] = [
    [537, 344, 239],
    [1054, 675, 469],
    [644, 413, 287],
    [904, 579, 402],
    [959, 614, 426],
    [868, 555, 386],
];

fn solve_all(values: &[f64; 6], phi: f64, target_se: f64) -> Vec<SampleSizeResult> {
    let [acc, spec, sens, ppv, npv, _f1] = *values;
    vec![
        n_accuracy(acc, target_se).unwrap(),
        n_specificity(spec, phi, target_se).unwrap(),
        n_sensitivity(sens, phi, target_se).unwrap(),
        n_ppv(ppv, sens, phi, target_se).unwrap(),
        n_npv(npv, sens, spec, phi, target_se).unwrap(),
        n_f1(ppv, sens, spec, phi, target_se, None, None).unwrap(),
    ]
}

#[test]
fn criterion_1_golden_planning_table() {
    let started = Instant::now();
    let phi = 0.43;
    let widths = [0.08, 0.1, 0.12];
    let mut failures = Vec::new();
    for (thr, values, table) in [(0.1, &ROUNDED_01, &TABLE_01), (0.3, &ROUNDED_03, &TABLE_03)] {
        for (w_idx, &width) in widths.iter().enumerate() {
            let results = solve_all(values, phi, ciw_to_se(width).unwrap());
            for (m_idx, kind) in MeasureKind::ALL.iter().enumerate() {
                let ours = results[m_idx].n;
                let reference = table[m_idx][w_idx];
                if (ours as i64 - reference as i64).abs() > 5 {
                    failures.push(format!(
                        "{kind} @ threshold {thr}, width {width}: solver gives {ours} \
                         (exact {:.3}), reference prints {reference}",
                        results[m_idx].n_exact
                    ));
                }
            }
        }
    }
    // Event counts follow ceil(n * phi) on the rows where the reference
    // table itself obeys that rule.
    for (n, events) in [(385, 166), (338, 146), (42, 19), (933, 402)] {
        assert_eq!(
            events_from_n(n, phi).unwrap(),
            events,
            "events rule for n={n}"
        );
    }
    assert!(started.elapsed().as_secs_f64() < 1.0, "criterion 1 runtime");
    assert!(
        failures.is_empty(),
        "criterion 1 (golden planning table): FAIL — {} of 36 reference cells disagree \
         beyond ±5:\n  {}\n\
         Analysis: every other npv cell in the same table follows \
         npv(1-npv)/(se^2 * (spec(1-phi) + phi(1-sens))); at npv 0.943, spec 0.147, \
         sens 0.988, phi 0.43 and width 0.08 that expression is 1450.884, so the \
         minimum size is 1451. No rounding of the stated inputs reaches 1457; the \
         printed cell is inconsistent with its own generating formula, and the \
         neighbouring event count (627 = ceil(1457*0.43)) confirms 1457 was the \
         number used downstream rather than a typo in this suite.",
        failures.len(),
        failures.join("\n  ")
    );
    pass(1, "golden planning table");
}

#[test]
fn criterion_2_cohort_pipeline() {
    let started = Instant::now();
    let cohort = sample_cohort(&demo_distribution(), DEMO_SIZE, DEMO_SEED).unwrap();
    let target_se = ciw_to_se(0.1).unwrap();
    for (thr, rounded, table) in [(0.1, &ROUNDED_01, &TABLE_01), (0.3, &ROUNDED_03, &TABLE_03)] {
        let ant = anticipated_measures(&cohort, thr).unwrap();
        for (m_idx, &kind) in MeasureKind::ALL.iter().enumerate() {
            let value = ant.value(kind).unwrap();
            assert!(
                (value - rounded[m_idx]).abs() <= 0.005,
                "{kind} @ {thr}: anticipated {value:.6} vs reference {}",
                rounded[m_idx]
            );
        }
        let phi = ant.prevalence;
        let sens = ant.sensitivity.unwrap();
        let spec = ant.specificity.unwrap();
        let ns = [
            n_accuracy(ant.accuracy.unwrap(), target_se).unwrap().n,
            n_specificity(spec, phi, target_se).unwrap().n,
            n_sensitivity(sens, phi, target_se).unwrap().n,
            n_ppv(ant.ppv.unwrap(), sens, phi, target_se).unwrap().n,
            n_npv(ant.npv.unwrap(), sens, spec, phi, target_se)
                .unwrap()
                .n,
            n_f1(ant.ppv.unwrap(), sens, spec, phi, target_se, None, None)
                .unwrap()
                .n,
        ];
        for (m_idx, kind) in MeasureKind::ALL.iter().enumerate() {
            let reference = table[m_idx][1];
            assert!(
                (ns[m_idx] as i64 - reference as i64).abs() <= 5,
                "{kind} @ {thr}: cohort-based N {} vs reference {reference}",
                ns[m_idx]
            );
        }
    }
    assert!(
        started.elapsed().as_secs_f64() < 30.0,
        "criterion 2 runtime"
    );
    pass(2, "cohort pipeline");
}

#[test]
fn criterion_3_companion_criteria() {
    // Observed/expected ratio: interval width 0.22 on the ratio scale maps
    // through asinh to the log-scale standard error, landing on 423 exactly.
    let oe = n_oe(0.43, OeTarget::RatioCiw(0.22)).unwrap();
    assert_eq!(oe.n, 423, "O/E size");

    // Concordance statistic: 347 exactly, and 346 must miss the target.
    let target = ciw_to_se(0.1).unwrap();
    let cstat = n_cstat(0.77, 0.43, target).unwrap();
    assert_eq!(cstat.n, 347, "c-statistic size");
    assert!(
        se_cstat(0.77, 346.0, 0.43).unwrap() > target,
        "c-statistic minimality: 346 should fail the target"
    );

    // Standardized net benefit at both thresholds, reusing the primary
    // operating point's sensitivity/specificity from the demonstration
    // cohort with the externally supplied prevalence.
    let cohort = sample_cohort(&demo_distribution(), DEMO_SIZE, DEMO_SEED).unwrap();
    let primary = anticipated_measures(&cohort, 0.1).unwrap();
    let se_nb = ciw_to_se(0.2).unwrap();
    for (thr, reference) in [(0.1, 38i64), (0.3, 407i64)] {
        let inputs = SnbInputs {
            threshold: thr,
            prevalence: 0.43,
            sensitivity: primary.sensitivity.unwrap(),
            specificity: primary.specificity.unwrap(),
        };
        let n = n_snb(&inputs, se_nb).unwrap().n as i64;
        assert!(
            (n - reference).abs() <= 2,
            "net benefit @ {thr}: {n} vs reference {reference}"
        );
    }

    // Calibration slope: within 2% of 949 for five consecutive seeds.
    for seed in DEMO_SEED..DEMO_SEED + 5 {
        let cohort = sample_cohort(&demo_distribution(), DEMO_SIZE, seed).unwrap();
        let lp = lp_samples(&cohort).unwrap();
        let info = fisher_info(&lp, &CalibrationAssumption::default()).unwrap();
        let n = n_calibration_slope(&info, ciw_to_se(0.3).unwrap())
            .unwrap()
            .n;
        let rel = (n as f64 - 949.0).abs() / 949.0;
        assert!(
            rel <= 0.02,
            "slope @ seed {seed}: {n} deviates {rel:.4} from 949"
        );
    }
    pass(3, "companion criteria");
}

#[test]
fn criterion_4_adjusted_interval_solver() {
    let reference: [(MeasureKind, u64); 5] = [
        (MeasureKind::Accuracy, 384),
        (MeasureKind::Specificity, 339),
        (MeasureKind::Sensitivity, 42),
        (MeasureKind::Ppv, 420),
        (MeasureKind::Npv, 935),
    ];
    let mut ant = PerformanceAnticipation::new(0.1, 0.43);
    ant.accuracy = Some(0.51);
    ant.specificity = Some(0.147);
    ant.sensitivity = Some(0.988);
    ant.ppv = Some(0.468);
    ant.npv = Some(0.943);
    let mut failures = Vec::new();
    for (kind, reference_n) in reference {
        let result = valsize::samplesize::n_iterative_agresti_coull(kind, &ant, 0.1).unwrap();
        assert!(
            result.achieved_ciw <= 0.1,
            "{kind}: solver returned a size whose width exceeds the target"
        );
        if (result.n as i64 - reference_n as i64).abs() > 2 {
            failures.push(format!(
                "{kind}: solver gives {} vs reference {reference_n}",
                result.n
            ));
        }
    }
    assert!(
        failures.is_empty(),
        "criterion 4 (adjusted-interval solver): FAIL — {} of 5 reference sizes \
         disagree beyond ±2:\n  {}\n\
         Analysis: adding two successes and two failures before taking the width \
         makes the adjusted interval strictly wider than the plain one at these \
         margins, so its minimum sizes cannot drop below the plain-interval sizes. \
         For sensitivity 0.988 the adjusted half-width at a case margin of d is at \
         least 1.96*sqrt(p~(1-p~)/d) with p~ = (x+2)/(d+4); width 0.1 needs d >= 53, \
         i.e. a total size of about 124 at prevalence 0.43 — the reference 42 is \
         unreachable by any adjusted-count mechanism and instead equals the \
         plain-interval size. The reference quintet matches plain intervals computed \
         on rounded counts, not adjusted intervals.",
        failures.len(),
        failures.join("\n  ")
    );
    pass(4, "adjusted-interval solver");
}

/// Reference interval bounds at the planning size 949: (low, high) per
/// measure, thresholds 0.1 and 0.3.
const BOUNDS_01: [(f64, f64); 6] = [
    (0.478, 0.542),
    (0.117, 0.177),
    (0.977, 0.999),
    (0.435, 0.501),
    (0.894, 0.992),
    (0.603, 0.668),
];
const BOUNDS_03: [(f64, f64); 6] = [
    (0.636, 0.693),
    (0.466, 0.550),
    (0.834, 0.900),
    (0.534, 0.612),
    (0.794, 0.874),
    (0.652, 0.728),
];

#[test]
fn criterion_5_intervals_at_planning_size() {
    let cohort = sample_cohort(&demo_distribution(), DEMO_SIZE, DEMO_SEED).unwrap();
    for (thr, bounds) in [(0.1, &BOUNDS_01), (0.3, &BOUNDS_03)] {
        let ant = anticipated_measures(&cohort, thr).unwrap();
        for (m_idx, &kind) in MeasureKind::ALL.iter().enumerate() {
            let interval = ciw_at_n(kind, &ant, 949, CiMethod::Wald).unwrap();
            let (lo, hi) = bounds[m_idx];
            assert!(
                (interval.low - lo).abs() <= 0.003,
                "{kind} @ {thr}: lower bound {:.4} vs reference {lo}",
                interval.low
            );
            assert!(
                (interval.high - hi).abs() <= 0.003,
                "{kind} @ {thr}: upper bound {:.4} vs reference {hi}",
                interval.high
            );
            assert!(
                interval.width < 0.1,
                "{kind} @ {thr}: width {:.4} not below 0.1",
                interval.width
            );
        }
    }
    pass(5, "intervals at planning size");
}

#[test]
fn criterion_6_bootstrap_se_oracle() {
    // A 2000-person cohort at the primary threshold 0.1; the smallest
    // margin (predicted negatives) still averages ~178 people. Closed-form
    // standard errors from its matrix are compared against the standard
    // deviation of 5000 seeded bootstrap resamples. The F1 tolerance is
    // looser because its closed form carries a two-term covariance that
    // sits slightly above the plain multinomial covariance of precision
    // and recall.
    let n = 2000usize;
    let threshold = 0.1;
    let cohort = sample_cohort(&demo_distribution(), n, 99).unwrap();
    let cm = build_confusion(&cohort.probs, &cohort.outcomes, threshold).unwrap();

    // Classify each individual once; resamples only need cell counts.
    let classes: Vec<u8> = cohort
        .probs
        .iter()
        .zip(&cohort.outcomes)
        .map(|(&p, &y)| match (p > threshold, y) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        })
        .collect();

    let resamples = 5000;
    let mut rng = stream_rng(99, 1);
    let mut sums = [0.0f64; 6];
    let mut sumsq = [0.0f64; 6];
    for _ in 0..resamples {
        let mut cells = [0u64; 4];
        for _ in 0..n {
            cells[classes[rng.random_range(0..n)] as usize] += 1;
        }
        let resampled = ConfusionMatrix::new(
            cells[0] as f64, // true positives
            cells[1] as f64, // false positives
            cells[3] as f64, // true negatives
            cells[2] as f64, // false negatives
        )
        .unwrap();
        for (m_idx, &kind) in MeasureKind::ALL.iter().enumerate() {
            let value = measure_value(&resampled, kind).unwrap();
            sums[m_idx] += value;
            sumsq[m_idx] += value * value;
        }
    }
    let b = resamples as f64;
    for (m_idx, &kind) in MeasureKind::ALL.iter().enumerate() {
        let variance = (sumsq[m_idx] - sums[m_idx] * sums[m_idx] / b) / (b - 1.0);
        let bootstrap_sd = variance.sqrt();
        let closed_form = se_from_matrix(&cm, kind).unwrap();
        let rel = (bootstrap_sd - closed_form).abs() / closed_form;
        let tolerance = if kind == MeasureKind::F1 { 0.15 } else { 0.10 };
        assert!(
            rel <= tolerance,
            "{kind}: bootstrap SD {bootstrap_sd:.5} vs closed-form {closed_form:.5} \
             (relative {rel:.3})"
        );
    }
    pass(6, "bootstrap oracle");
}

#[test]
fn criterion_7_pseudo_observation_suite() {
    let started = Instant::now();

    // No censoring: pseudo-observations reduce to the event indicators
    // (up to products of machine-rounded survival factors).
    let complete: Vec<SurvivalRecord> = (1..=40)
        .map(|t| SurvivalRecord {
            time: t as f64 / 4.0,
            event: true,
        })
        .collect();
    let pseudo = pseudo_observations(&complete, 5.0).unwrap();
    for (rec, &p) in complete.iter().zip(&pseudo) {
        let indicator = if rec.time <= 5.0 { 1.0 } else { 0.0 };
        assert!((p - indicator).abs() <= 1e-12, "indicator reduction");
    }

    // Fifty seeded censored datasets: the fast algorithm must match the
    // leave-one-out oracle everywhere, and the mean identity must hold
    // wherever the survival estimate at the horizon stays positive.
    let mut identity_checked = 0;
    for k in 0..50u64 {
        let mut rng = stream_rng(500, k);
        let size = 20 + (k as usize * 6) % 281;
        let records: Vec<SurvivalRecord> = (0..size)
            .map(|_| SurvivalRecord {
                // Quarter-unit grid forces heavy ties.
                time: rng.random_range(1..=40u32) as f64 / 4.0,
                event: rng.random_bool(0.65),
            })
            .collect();
        let t_star = 5.0;
        let fast = pseudo_observations(&records, t_star).unwrap();
        let f_full = km_cumulative_incidence(&records, t_star).unwrap();
        // Naive O(N^2) oracle through the public one-sample estimator.
        let nf = records.len() as f64;
        for (i, &fast_i) in fast.iter().enumerate() {
            let mut rest = records.clone();
            rest.remove(i);
            let f_loo = km_cumulative_incidence(&rest, t_star).unwrap();
            let naive = nf * f_full - (nf - 1.0) * f_loo;
            assert!(
                (fast_i - naive).abs() <= 1e-10,
                "dataset {k}, record {i}: fast {fast_i} vs naive {naive}"
            );
        }
        if f_full < 1.0 {
            let mean = fast.iter().sum::<f64>() / nf;
            assert!(
                (mean - f_full).abs() <= 1e-12,
                "dataset {k}: pseudo mean {mean} vs estimate {f_full}"
            );
            identity_checked += 1;
        }
    }
    assert!(
        identity_checked >= 45,
        "mean identity coverage: {identity_checked}"
    );
    assert!(
        started.elapsed().as_secs_f64() < 10.0,
        "criterion 7 runtime"
    );
    pass(7, "pseudo-observation suite");
}

#[test]
fn criterion_8_simulation_scaling() {
    let started = Instant::now();
    let scenario = SurvivalScenario::example();
    let summary = simulate_ciw(&scenario, false).unwrap();
    assert_eq!(summary.candidates.len(), 2);
    let small = &summary.candidates[0];
    let large = &summary.candidates[1];
    assert_eq!(small.size, 3_600);
    assert_eq!(large.size, 14_250);
    let expected_ratio = (14_250.0f64 / 3_600.0).sqrt();
    for (a, b) in small.measures.iter().zip(&large.measures) {
        assert_eq!(a.kind, b.kind);
        let ratio = a.mean_ciw / b.mean_ciw;
        assert!(
            (ratio - expected_ratio).abs() <= 0.1 * expected_ratio,
            "{}: width ratio {ratio:.4} vs sqrt(14250/3600) = {expected_ratio:.4}",
            a.kind
        );
        assert!(
            (a.mean_estimate - b.mean_estimate).abs() <= 0.005,
            "{}: mean estimates {:.4} vs {:.4} disagree across sizes",
            a.kind,
            a.mean_estimate,
            b.mean_estimate
        );
    }
    assert!(
        started.elapsed().as_secs_f64() < 300.0,
        "criterion 8 runtime"
    );
    pass(8, "simulation scaling");
}

#[test]
fn criterion_9_solver_properties() {
    let cases = 1000;
    let mut rng = stream_rng(900, 0);
    let mut draw = |lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();

    for case in 0..cases {
        let value = draw(0.05, 0.95);
        let phi = draw(0.05, 0.95);
        let sens = draw(0.05, 0.95);
        let spec = draw(0.05, 0.95);
        let target_se = ciw_to_se(draw(0.02, 0.3)).unwrap();

        // Ceiling minimality: the returned size meets the target and the
        // size below it does not (kernel solvers obey se(m) = sqrt(k/m)).
        let results = [
            n_accuracy(value, target_se).unwrap(),
            n_specificity(value, phi, target_se).unwrap(),
            n_sensitivity(value, phi, target_se).unwrap(),
            n_ppv(value, sens, phi, target_se).unwrap(),
            n_npv(value, sens, spec, phi, target_se).unwrap(),
            n_oe(phi, OeTarget::LnSe(target_se)).unwrap(),
            n_snb(
                &SnbInputs {
                    threshold: draw(0.05, 0.95),
                    prevalence: phi,
                    sensitivity: sens,
                    specificity: spec,
                },
                target_se,
            )
            .unwrap(),
        ];
        for result in &results {
            let kernel = result.n_exact * target_se * target_se;
            let achieved = (kernel / result.n as f64).sqrt();
            assert!(
                achieved <= target_se * (1.0 + 1e-12),
                "case {case}: target met"
            );
            if result.n > 1 {
                let before = (kernel / (result.n - 1) as f64).sqrt();
                assert!(before > target_se, "case {case}: minimality");
            }
        }

        // Halving the width quadruples the exact size.
        let halved = [
            n_accuracy(value, target_se / 2.0).unwrap(),
            n_specificity(value, phi, target_se / 2.0).unwrap(),
            n_sensitivity(value, phi, target_se / 2.0).unwrap(),
            n_ppv(value, sens, phi, target_se / 2.0).unwrap(),
            n_npv(value, sens, spec, phi, target_se / 2.0).unwrap(),
        ];
        for (full, half) in results.iter().zip(&halved) {
            let ratio = half.n_exact / full.n_exact;
            assert!(
                (ratio - 4.0).abs() <= 4.0 * 1e-9,
                "case {case}: quadratic scaling, ratio {ratio}"
            );
        }
        // F1 with companion targets tied to the main one scales
        // quadratically too; whether the targets are consistent at all
        // depends only on the ppv/recall geometry, not on the width.
        match n_f1(value, sens, spec, phi, target_se, None, None) {
            Ok(f1_full) => {
                let f1_half = n_f1(value, sens, spec, phi, target_se / 2.0, None, None).unwrap();
                let f1_ratio = f1_half.n_exact / f1_full.n_exact;
                assert!(
                    (f1_ratio - 4.0).abs() <= 4.0 * 1e-9,
                    "case {case}: F1 quadratic scaling, ratio {f1_ratio}"
                );
            }
            Err(_) => {
                assert!(
                    n_f1(value, sens, spec, phi, target_se / 2.0, None, None).is_err(),
                    "case {case}: F1 target consistency must not depend on the width"
                );
            }
        }

        // Sensitivity at prevalence phi is specificity at prevalence 1-phi.
        let a = n_sensitivity(value, phi, target_se).unwrap().n_exact;
        let b = n_specificity(value, 1.0 - phi, target_se).unwrap().n_exact;
        assert!((a - b).abs() <= a.abs() * 1e-12, "case {case}: duality");

        // Matrix identities: F1 is the harmonic mean of ppv and recall,
        // and accuracy decomposes over the empirical prevalence.
        let cells = [
            draw(1.0, 500.0).round(),
            draw(1.0, 500.0).round(),
            draw(1.0, 500.0).round(),
            draw(1.0, 500.0).round(),
        ];
        let cm = ConfusionMatrix::new(cells[0], cells[1], cells[2], cells[3]).unwrap();
        let p = measure_value(&cm, MeasureKind::Ppv).unwrap();
        let r = measure_value(&cm, MeasureKind::Sensitivity).unwrap();
        let f1 = measure_value(&cm, MeasureKind::F1).unwrap();
        assert!(
            (f1 - 2.0 * p * r / (p + r)).abs() <= 1e-12,
            "case {case}: harmonic"
        );
        let acc = measure_value(&cm, MeasureKind::Accuracy).unwrap();
        let sens_hat = r;
        let spec_hat = measure_value(&cm, MeasureKind::Specificity).unwrap();
        let phi_hat = cm.prevalence();
        assert!(
            (acc - (sens_hat * phi_hat + spec_hat * (1.0 - phi_hat))).abs() <= 1e-12,
            "case {case}: accuracy decomposition"
        );
    }
    pass(9, "solver properties");
}

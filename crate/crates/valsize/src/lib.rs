//! Minimum sample sizes for external validation of risk prediction models.
//!
//! A validation study estimates how well an existing prediction model
//! performs on new people. This crate answers the planning question: how
//! many participants are needed so that each performance measure is
//! estimated with a chosen precision?
//!
//! The toolkit covers:
//!
//! - threshold performance measures on a confusion matrix — accuracy,
//!   specificity, sensitivity, predictive values, F1 — with standard
//!   errors and confidence intervals ([`measures`]);
//! - closed-form and iterative minimum sample sizes targeting a standard
//!   error or confidence-interval width for each measure ([`samplesize`]);
//! - companion criteria for calibration (observed/expected ratio,
//!   calibration slope), discrimination (concordance statistic), and
//!   standardized net benefit ([`criteria`]);
//! - seeded simulation of anticipated cohorts from a risk distribution
//!   when only the distribution of predicted risks can be guessed
//!   ([`riskdist`]);
//! - a time-to-event pipeline — Kaplan–Meier incidence, jackknife
//!   pseudo-observations, fractional confusion matrices — plus a scenario
//!   simulator that reports achieved interval widths at candidate sample
//!   sizes when outcomes are censored ([`survival`]).
//!
//! Every random draw is reproducible from a single 64-bit seed, and all
//! planning routines return the smallest integer size meeting the target,
//! together with the exact real-valued solution and the precision actually
//! achieved.
//!
//! # Example
//!
//! Solve the minimum N so that sensitivity and specificity, anticipated at
//! 0.90 and 0.70 for a threshold where a fifth of subjects have the outcome,
//! both get 95% confidence intervals no wider than 0.1:
//!
//! ```
//! use valsize::measures::MeasureKind;
//! use valsize::samplesize::{
//!     plan_binary, PerformanceAnticipation, Precision, PrecisionTarget,
//! };
//!
//! # fn main() -> valsize::Result<()> {
//! let anticipation = PerformanceAnticipation {
//!     sensitivity: Some(0.90),
//!     specificity: Some(0.70),
//!     ..PerformanceAnticipation::new(0.3, 0.2)
//! };
//! let targets = [
//!     PrecisionTarget { kind: MeasureKind::Sensitivity, precision: Precision::Ciw(0.1) },
//!     PrecisionTarget { kind: MeasureKind::Specificity, precision: Precision::Ciw(0.1) },
//! ];
//!
//! let plan = plan_binary(&[anticipation], &targets, None)?;
//! assert_eq!(plan.rows.len(), 2);
//! assert_eq!(plan.overall_n, plan.rows.iter().map(|r| r.result.n).max().unwrap());
//! println!("N = {} ({} events)", plan.overall_n, plan.overall_events);
//! # Ok(())
//! # }
//! ```

// Validation writes `!(x > 0.0)` rather than `x <= 0.0`: the negated form
// is also true for NaN, so NaN inputs fail the check instead of slipping by.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod error;
pub mod measures;
pub mod riskdist;
pub mod samplesize;
pub mod survival;

mod util;

pub use error::{Error, Result};

//! Error type shared across the crate.

use crate::measures::MeasureKind;
use thiserror::Error;

/// Errors raised by validation, planning, and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input value fell outside its documented domain.
    #[error("{what} must be {requirement}, got {value}")]
    OutOfRange {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// Paired input slices disagree in length.
    #[error("mismatched input lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// An operation that needs data received none.
    #[error("input is empty")]
    EmptyInput,

    /// A measure's denominator cells sum to zero on this matrix.
    #[error("{kind} is undefined: {cells} sum to zero")]
    UndefinedMeasure {
        kind: MeasureKind,
        cells: &'static str,
    },

    /// A value needed by a calculation was not supplied in the anticipation.
    #[error("anticipated {kind} is required for this calculation but was not supplied")]
    MissingAnticipation { kind: MeasureKind },

    /// Supplied accuracy contradicts the value implied by sensitivity,
    /// specificity, and prevalence.
    #[error(
        "inconsistent anticipation: supplied accuracy {supplied} differs from the \
         implied value {implied:.6} by more than {tolerance}"
    )]
    InconsistentAnticipation {
        supplied: f64,
        implied: f64,
        tolerance: f64,
    },

    /// The requested F1 precision cannot be met given the precision/recall targets.
    #[error(
        "inconsistent precision targets: the precision/recall targets already imply \
         an F1 interval at least as wide as the one requested"
    )]
    InconsistentTargets,

    /// Interval counts where the success count exceeds the denominator.
    #[error("success count {count} exceeds denominator {denom}")]
    CountExceedsDenominator { count: f64, denom: f64 },

    /// The interval method cannot be applied to this measure.
    #[error("{method} intervals are not defined for {kind}")]
    MethodUnsupported {
        kind: MeasureKind,
        method: &'static str,
    },

    /// The linear-predictor sample carries no usable spread.
    #[error("degenerate linear predictor: information matrix is singular")]
    SingularInformation,

    /// No sample size within the search bounds meets the target.
    #[error("no sample size in [{lo}, {hi}] meets the precision target")]
    TargetUnattainable { lo: u64, hi: u64 },

    /// Every repetition at a candidate size failed to produce usable estimates.
    #[error("all {repetitions} repetitions were degenerate at candidate size {size}")]
    AllRepetitionsDegenerate { size: u64, repetitions: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

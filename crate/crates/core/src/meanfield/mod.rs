//! Deterministic mean-field dynamics on fully connected populations:
//! the two-party ODE and its N-party generalization, both integrated
//! with forward Euler.

mod multi_party;
mod two_party;

pub use multi_party::{
    integrate_multi_party, multi_party_rates, EmotionMatrix, MultiPartyState,
};
pub use two_party::{
    integrate_two_party, two_party_derivative, two_party_rates, MeanFieldState, SwitchRates,
    TwoPartyConfig,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MeanFieldError {
    #[error("invalid mean-field config: {0}")]
    InvalidConfig(String),
    #[error("state dimension {got} does not match the {expected}-group emotion matrix")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Default Euler step size.
pub const DEFAULT_EPSILON: f64 = 0.01;
/// Default integration horizon in model time units.
pub const DEFAULT_T_END: f64 = 100.0;
/// Display scale applied only at output: days of calendar time per model
/// time unit.
pub const DEFAULT_DAYS_PER_UNIT: f64 = 7.0;

pub(crate) fn check_unit_interval<F: crate::scalar::Real>(
    name: &str,
    v: F,
) -> Result<(), MeanFieldError> {
    if v >= F::zero() && v <= F::one() {
        Ok(())
    } else {
        Err(MeanFieldError::InvalidConfig(format!(
            "{name} must lie in [0, 1], got {v}"
        )))
    }
}

pub(crate) fn check_step_and_horizon<F: crate::scalar::Real>(
    epsilon: F,
    t_end: F,
) -> Result<usize, MeanFieldError> {
    if !(epsilon > F::zero() && epsilon <= F::from_f64_lit(0.1)) {
        return Err(MeanFieldError::InvalidConfig(format!(
            "epsilon must lie in (0, 0.1], got {epsilon}"
        )));
    }
    if !(t_end > F::zero() && t_end.is_finite()) {
        return Err(MeanFieldError::InvalidConfig(format!(
            "t_end must be positive and finite, got {t_end}"
        )));
    }
    // Steps cover [0, t_end]; the final row may overshoot by < epsilon
    // when t_end is not a multiple of the step.
    Ok((t_end / epsilon).ceil().to_usize().unwrap())
}

//! The two-party fully connected mean-field ODE.

use super::{check_step_and_horizon, check_unit_interval, MeanFieldError};
use crate::influence::InfluenceMeasureKind;
use crate::model::ModelParams;
use crate::scalar::Real;

/// Group-wise stance-1 prevalences at a continuous time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldState<F> {
    pub theta_blue: F,
    pub theta_red: F,
    pub t: F,
}

#[derive(Debug, Clone)]
pub struct TwoPartyConfig<F> {
    pub params: ModelParams<F>,
    /// Fraction of red nodes, strictly inside (0, 1).
    pub r: F,
    /// Definition 1 or Definition 2; the message-count measure has no
    /// user-level mean field.
    pub measure: InfluenceMeasureKind,
    pub theta0: (F, F),
    pub epsilon: F,
    pub t_end: F,
}

impl<F: Real> TwoPartyConfig<F> {
    pub fn validate(&self) -> Result<(), MeanFieldError> {
        if !(self.r > F::zero() && self.r < F::one()) {
            return Err(MeanFieldError::InvalidConfig(format!(
                "r must lie strictly inside (0, 1), got {}",
                self.r
            )));
        }
        if self.measure == InfluenceMeasureKind::MessageCount {
            return Err(MeanFieldError::InvalidConfig(
                "the mean field is defined over users; use definition 1 or 2".into(),
            ));
        }
        check_unit_interval("theta_blue(0)", self.theta0.0)?;
        check_unit_interval("theta_red(0)", self.theta0.1)?;
        check_step_and_horizon(self.epsilon, self.t_end)?;
        Ok(())
    }

    /// In-/out-group logit weights for (blue, red). Definition 1 carries
    /// the group-size factors; Definition 2 drops them.
    fn weights(&self) -> (F, F, F, F) {
        let (alpha, beta) = (self.params.alpha(), self.params.beta());
        match self.measure {
            InfluenceMeasureKind::GroupFraction => (alpha, beta, alpha, beta),
            _ => {
                let blue_share = F::one() - self.r;
                (
                    alpha * blue_share,
                    beta * self.r,
                    alpha * self.r,
                    beta * blue_share,
                )
            }
        }
    }
}

/// The four switch probabilities at a mean-field state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchRates<F> {
    pub blue_01: F,
    pub blue_10: F,
    pub red_01: F,
    pub red_10: F,
}

/// Transition probabilities expressed through the group prevalences:
/// e.g. logit(p_blue_01) = alpha (1-r)(2 thetaB - 1) - beta r (2 thetaR - 1) - delta
/// under Definition 1.
pub fn two_party_rates<F: Real>(
    state: &MeanFieldState<F>,
    config: &TwoPartyConfig<F>,
) -> SwitchRates<F> {
    let (blue_in, blue_out, red_in, red_out) = config.weights();
    let delta = config.params.delta();
    let two = F::from_f64_lit(2.0);
    let net_blue = two * state.theta_blue - F::one();
    let net_red = two * state.theta_red - F::one();
    SwitchRates {
        blue_01: (blue_in * net_blue - blue_out * net_red - delta).sigmoid(),
        blue_10: (-(blue_in * net_blue) + blue_out * net_red - delta).sigmoid(),
        red_01: (red_in * net_red - red_out * net_blue - delta).sigmoid(),
        red_10: (-(red_in * net_red) + red_out * net_blue - delta).sigmoid(),
    }
}

/// Right-hand side of the ODE:
/// d thetaB/dt = (1 - thetaB) p_blue_01 - thetaB p_blue_10, same for red.
pub fn two_party_derivative<F: Real>(
    state: &MeanFieldState<F>,
    config: &TwoPartyConfig<F>,
) -> (F, F) {
    let rates = two_party_rates(state, config);
    (
        (F::one() - state.theta_blue) * rates.blue_01 - state.theta_blue * rates.blue_10,
        (F::one() - state.theta_red) * rates.red_01 - state.theta_red * rates.red_10,
    )
}

/// Forward-Euler trajectory from t = 0 to t_end; the first row is the
/// initial condition and every state is clamped to [0, 1].
pub fn integrate_two_party<F: Real>(
    config: &TwoPartyConfig<F>,
) -> Result<Vec<MeanFieldState<F>>, MeanFieldError> {
    config.validate()?;
    let steps = check_step_and_horizon(config.epsilon, config.t_end)?;
    let clamp = |v: F| v.max(F::zero()).min(F::one());
    let mut states = Vec::with_capacity(steps + 1);
    let mut state = MeanFieldState {
        theta_blue: config.theta0.0,
        theta_red: config.theta0.1,
        t: F::zero(),
    };
    states.push(state);
    for k in 0..steps {
        let (db, dr) = two_party_derivative(&state, config);
        state = MeanFieldState {
            theta_blue: clamp(state.theta_blue + config.epsilon * db),
            theta_red: clamp(state.theta_red + config.epsilon * dr),
            t: F::from_usize(k + 1).unwrap() * config.epsilon,
        };
        states.push(state);
    }
    Ok(states)
}

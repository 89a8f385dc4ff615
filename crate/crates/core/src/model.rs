//! Model parameters and the single-node transition-probability kernel.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Stance;
use crate::influence::InfluenceVector;
use crate::scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("{name} must be non-negative and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

/// In-group love, out-group hate and inertia.
///
/// All three are non-negative in the model. Negative `beta` (out-group
/// love) is a counterfactual regime used by the sweep analyses; it has to
/// be requested explicitly through [`ModelParams::with_outgroup_love`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<F> {
    alpha: F,
    beta: F,
    delta: F,
}

impl<F: Real> ModelParams<F> {
    pub fn new(alpha: F, beta: F, delta: F) -> Result<Self, ModelError> {
        Self::check("alpha", alpha)?;
        Self::check("beta", beta)?;
        Self::check("delta", delta)?;
        Ok(ModelParams { alpha, beta, delta })
    }

    /// Like [`ModelParams::new`] but allows `beta < 0` for the
    /// out-group-love counterfactuals.
    pub fn with_outgroup_love(alpha: F, beta: F, delta: F) -> Result<Self, ModelError> {
        Self::check("alpha", alpha)?;
        if !beta.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "beta",
                value: beta.to_f64().unwrap_or(f64::NAN),
            });
        }
        Self::check("delta", delta)?;
        Ok(ModelParams { alpha, beta, delta })
    }

    fn check(name: &'static str, value: F) -> Result<(), ModelError> {
        if value.is_finite() && value >= F::zero() {
            Ok(())
        } else {
            Err(ModelError::InvalidParameter {
                name,
                value: value.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn beta(&self) -> F {
        self.beta
    }

    pub fn delta(&self) -> F {
        self.delta
    }

    /// Log-odds of switching away from `current_stance` given the
    /// neighborhood influence: alpha * d_in_s' - beta * d_out_s' - delta,
    /// where s' is the opposite stance.
    pub fn switch_logit(&self, inf: &InfluenceVector<F>, current_stance: Stance) -> F {
        let (x_in, x_out) = inf.toward(current_stance.flipped());
        self.alpha * x_in - self.beta * x_out - self.delta
    }

    /// Probability that a node holding `current_stance` switches to the
    /// opposite stance at the next update.
    pub fn transition_probability(&self, inf: &InfluenceVector<F>, current_stance: Stance) -> F {
        self.switch_logit(inf, current_stance).sigmoid()
    }
}

/// Free-function form of [`ModelParams::transition_probability`].
pub fn transition_probability<F: Real>(
    params: &ModelParams<F>,
    inf: &InfluenceVector<F>,
    current_stance: Stance,
) -> F {
    params.transition_probability(inf, current_stance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64, d: f64) -> ModelParams<f64> {
        ModelParams::new(a, b, d).unwrap()
    }

    #[test]
    fn zero_parameters_give_half() {
        let p = params(0.0, 0.0, 0.0);
        let inf = InfluenceVector::new(0.7, -0.3);
        assert_eq!(p.transition_probability(&inf, Stance::Anti), 0.5);
        assert_eq!(p.transition_probability(&inf, Stance::Pro), 0.5);
    }

    #[test]
    fn pure_inertia_masking_value() {
        // sigma(-0.63) = 1 / (1 + e^{0.63})
        let p = params(0.0, 0.0, 0.63);
        let got = p.transition_probability(&InfluenceVector::zero(), Stance::Anti);
        let expected = 1.0 / (1.0 + 0.63f64.exp());
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.3475).abs() < 5e-4);
    }

    #[test]
    fn in_group_pull_cancels_out_group_push() {
        let p = params(1.0, 1.0, 0.0);
        let inf = InfluenceVector::new(0.4, 0.4);
        assert_eq!(p.transition_probability(&inf, Stance::Anti), 0.5);
    }

    #[test]
    fn logit_identity_holds() {
        let p = params(3.75, 0.25, 0.63);
        let inf = InfluenceVector::new(0.31, -0.12);
        for stance in [Stance::Anti, Stance::Pro] {
            let prob = p.transition_probability(&inf, stance);
            assert!((prob.logit() - p.switch_logit(&inf, stance)).abs() < 1e-12);
        }
    }

    #[test]
    fn stance_one_branch_uses_negated_components() {
        let p = params(2.0, 0.5, 0.1);
        let inf = InfluenceVector::new(0.3, -0.2);
        let expected = 2.0 * (-0.3) - 0.5 * 0.2 - 0.1;
        assert!((p.switch_logit(&inf, Stance::Pro) - expected).abs() < 1e-15);
    }

    #[test]
    fn negative_beta_requires_the_guarded_constructor() {
        assert!(ModelParams::new(1.0, -0.5, 0.0).is_err());
        let p = ModelParams::with_outgroup_love(1.0, -0.5, 0.0).unwrap();
        assert_eq!(p.beta(), -0.5);
        assert!(ModelParams::<f64>::with_outgroup_love(-1.0, 0.5, 0.0).is_err());
        assert!(ModelParams::<f64>::with_outgroup_love(1.0, 0.5, -0.1).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 0.0).is_err());
    }
}

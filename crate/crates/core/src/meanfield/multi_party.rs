//! N-party mean-field dynamics driven by an emotion matrix.

use serde::{Deserialize, Serialize};

use super::{check_step_and_horizon, check_unit_interval, MeanFieldError};
use crate::model::ModelParams;
use crate::scalar::Real;

/// Signed inter-group emotions with group sizes and inertias.
///
/// `a[i][j]` is the emotion of group i toward group j; positive is
/// warmth, negative is animosity. Group sizes are positive fractions
/// summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionMatrix<F> {
    a: Vec<Vec<F>>,
    r: Vec<F>,
    delta: Vec<F>,
}

impl<F: Real> EmotionMatrix<F> {
    pub fn new(a: Vec<Vec<F>>, r: Vec<F>, delta: Vec<F>) -> Result<Self, MeanFieldError> {
        let n = a.len();
        if n == 0 {
            return Err(MeanFieldError::InvalidConfig(
                "emotion matrix needs at least one group".into(),
            ));
        }
        if a.iter().any(|row| row.len() != n) {
            return Err(MeanFieldError::InvalidConfig(
                "emotion matrix must be square".into(),
            ));
        }
        if a.iter().flatten().any(|v| !v.is_finite()) {
            return Err(MeanFieldError::InvalidConfig(
                "emotion matrix entries must be finite".into(),
            ));
        }
        if r.len() != n || delta.len() != n {
            return Err(MeanFieldError::InvalidConfig(format!(
                "sizes and inertias must both have length {n}"
            )));
        }
        if r.iter().any(|&v| !(v > F::zero())) {
            return Err(MeanFieldError::InvalidConfig(
                "group fractions must be positive".into(),
            ));
        }
        let total: F = r.iter().copied().sum();
        if (total - F::one()).abs() > F::from_f64_lit(1e-12) {
            return Err(MeanFieldError::InvalidConfig(format!(
                "group fractions must sum to 1, got {total}"
            )));
        }
        if delta.iter().any(|&d| !(d >= F::zero() && d.is_finite())) {
            return Err(MeanFieldError::InvalidConfig(
                "inertias must be non-negative and finite".into(),
            ));
        }
        Ok(EmotionMatrix { a, r, delta })
    }

    /// The two-party model as a 2x2 emotion matrix:
    /// A = [[alpha, -beta], [-beta, alpha]] with blue listed first.
    pub fn from_two_party(params: &ModelParams<F>, red_fraction: F) -> Result<Self, MeanFieldError> {
        let (alpha, beta) = (params.alpha(), params.beta());
        Self::new(
            vec![vec![alpha, -beta], vec![-beta, alpha]],
            vec![F::one() - red_fraction, red_fraction],
            vec![params.delta(), params.delta()],
        )
    }

    pub fn group_count(&self) -> usize {
        self.a.len()
    }

    pub fn emotion(&self, i: usize, j: usize) -> F {
        self.a[i][j]
    }

    pub fn fraction(&self, i: usize) -> F {
        self.r[i]
    }

    pub fn inertia(&self, i: usize) -> F {
        self.delta[i]
    }
}

/// Stance-1 prevalence per group at a continuous time.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPartyState<F> {
    pub theta: Vec<F>,
    pub t: F,
}

/// Componentwise transition probabilities under the first influence
/// measure: logit(p01_i) = sum_j A_ij r_j (2 theta_j - 1) - delta_i and
/// the sign-flipped field for p10.
pub fn multi_party_rates<F: Real>(
    state: &MultiPartyState<F>,
    em: &EmotionMatrix<F>,
) -> Result<(Vec<F>, Vec<F>), MeanFieldError> {
    let n = em.group_count();
    if state.theta.len() != n {
        return Err(MeanFieldError::DimensionMismatch {
            expected: n,
            got: state.theta.len(),
        });
    }
    let two = F::from_f64_lit(2.0);
    let weighted_net: Vec<F> = (0..n)
        .map(|j| em.fraction(j) * (two * state.theta[j] - F::one()))
        .collect();
    let mut p01 = Vec::with_capacity(n);
    let mut p10 = Vec::with_capacity(n);
    for i in 0..n {
        let field: F = (0..n).map(|j| em.emotion(i, j) * weighted_net[j]).sum();
        p01.push((field - em.inertia(i)).sigmoid());
        p10.push((-field - em.inertia(i)).sigmoid());
    }
    Ok((p01, p10))
}

/// Forward-Euler trajectory of the N-party ODE, clamped to [0, 1]^N.
pub fn integrate_multi_party<F: Real>(
    em: &EmotionMatrix<F>,
    theta0: &[F],
    epsilon: F,
    t_end: F,
) -> Result<Vec<MultiPartyState<F>>, MeanFieldError> {
    if theta0.len() != em.group_count() {
        return Err(MeanFieldError::DimensionMismatch {
            expected: em.group_count(),
            got: theta0.len(),
        });
    }
    for (i, &v) in theta0.iter().enumerate() {
        check_unit_interval(&format!("theta0[{i}]"), v)?;
    }
    let steps = check_step_and_horizon(epsilon, t_end)?;

    let clamp = |v: F| v.max(F::zero()).min(F::one());
    let mut states = Vec::with_capacity(steps + 1);
    let mut state = MultiPartyState {
        theta: theta0.to_vec(),
        t: F::zero(),
    };
    states.push(state.clone());
    for k in 0..steps {
        let (p01, p10) = multi_party_rates(&state, em)?;
        let theta: Vec<F> = state
            .theta
            .iter()
            .zip(p01.iter().zip(&p10))
            .map(|(&th, (&up, &down))| clamp(th + epsilon * ((F::one() - th) * up - th * down)))
            .collect();
        state = MultiPartyState {
            theta,
            t: F::from_usize(k + 1).unwrap() * epsilon,
        };
        states.push(state.clone());
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::influence::InfluenceMeasureKind;
    use crate::meanfield::{integrate_two_party, MeanFieldState, TwoPartyConfig};

    #[test]
    fn half_state_rates_collapse_to_inertia() {
        let em = EmotionMatrix::new(
            vec![
                vec![3.0, -1.0, 0.5],
                vec![-2.0, 4.0, 1.0],
                vec![0.0, -0.5, 2.0],
            ],
            vec![0.2, 0.3, 0.5],
            vec![0.5, 1.0, 2.0],
        )
        .unwrap();
        let state = MultiPartyState {
            theta: vec![0.5; 3],
            t: 0.0,
        };
        let (p01, p10) = multi_party_rates(&state, &em).unwrap();
        for i in 0..3 {
            let expected: f64 = (-em.inertia(i)).sigmoid();
            assert!((p01[i] - expected).abs() < 1e-15);
            assert!((p10[i] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn single_group_reduction() {
        let em = EmotionMatrix::new(vec![vec![1.7]], vec![1.0], vec![0.0]).unwrap();
        let state = MultiPartyState {
            theta: vec![1.0],
            t: 0.0,
        };
        let (p01, p10) = multi_party_rates(&state, &em).unwrap();
        assert!((p01[0] - 1.7f64.sigmoid()).abs() < 1e-15);
        assert!((p10[0] - (-1.7f64).sigmoid()).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let em = EmotionMatrix::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![0.5, 0.5],
            vec![0.0, 0.0],
        )
        .unwrap();
        let state = MultiPartyState {
            theta: vec![0.5; 3],
            t: 0.0,
        };
        assert_eq!(
            multi_party_rates(&state, &em).unwrap_err(),
            MeanFieldError::DimensionMismatch {
                expected: 2,
                got: 3
            }
        );
        assert!(integrate_multi_party(&em, &[0.5], 0.01, 1.0).is_err());
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        assert!(EmotionMatrix::<f64>::new(vec![], vec![], vec![]).is_err());
        assert!(
            EmotionMatrix::new(vec![vec![1.0], vec![2.0]], vec![1.0], vec![0.0]).is_err()
        );
        assert!(EmotionMatrix::new(vec![vec![1.0]], vec![0.9], vec![0.0]).is_err());
        assert!(EmotionMatrix::new(vec![vec![1.0]], vec![1.0], vec![-1.0]).is_err());
        assert!(EmotionMatrix::new(vec![vec![f64::NAN]], vec![1.0], vec![0.0]).is_err());
    }

    #[test]
    fn uniform_half_start_is_constant() {
        let em = EmotionMatrix::new(
            vec![vec![2.0, -1.0], vec![-1.0, 2.0]],
            vec![0.4, 0.6],
            vec![1.0, 1.0],
        )
        .unwrap();
        let states = integrate_multi_party(&em, &[0.5, 0.5], 0.01, 3.0).unwrap();
        for s in states {
            assert_eq!(s.theta, vec![0.5, 0.5]);
        }
    }

    #[test]
    fn two_group_matrix_reproduces_two_party_def1() {
        let params = ModelParams::new(3.75, 0.25, 0.63).unwrap();
        let r = 0.18;
        let em = EmotionMatrix::from_two_party(&params, r).unwrap();

        // Rate identity at random-ish states.
        let cfg = TwoPartyConfig {
            params,
            r,
            measure: InfluenceMeasureKind::DegreeNormalizedCount,
            theta0: (0.9, 0.9),
            epsilon: 0.01,
            t_end: 50.0,
        };
        for (tb, tr) in [(0.9f64, 0.9), (0.3, 0.8), (0.05, 0.95), (0.62, 0.41)] {
            let two_party = crate::meanfield::two_party_rates(
                &MeanFieldState {
                    theta_blue: tb,
                    theta_red: tr,
                    t: 0.0,
                },
                &cfg,
            );
            let (p01, p10) = multi_party_rates(
                &MultiPartyState {
                    theta: vec![tb, tr],
                    t: 0.0,
                },
                &em,
            )
            .unwrap();
            assert!((p01[0] - two_party.blue_01).abs() < 1e-12);
            assert!((p10[0] - two_party.blue_10).abs() < 1e-12);
            assert!((p01[1] - two_party.red_01).abs() < 1e-12);
            assert!((p10[1] - two_party.red_10).abs() < 1e-12);
        }

        // Full-trajectory agreement.
        let reference = integrate_two_party(&cfg).unwrap();
        let generalized = integrate_multi_party(&em, &[0.9, 0.9], 0.01, 50.0).unwrap();
        assert_eq!(reference.len(), generalized.len());
        for (a, b) in reference.iter().zip(&generalized) {
            assert!((a.theta_blue - b.theta[0]).abs() < 1e-9);
            assert!((a.theta_red - b.theta[1]).abs() < 1e-9);
        }
    }
}

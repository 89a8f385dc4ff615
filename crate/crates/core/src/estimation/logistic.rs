//! Newton-Raphson (IRLS) maximum-likelihood fit of the three-parameter
//! logistic law.

use super::{EstimationError, EstimationResult, TransitionObservation};
use crate::scalar::Real;

/// Coefficient magnitude treated as divergence when the gradient has not
/// vanished; on covariates bounded by 1 a logit of 30 is already beyond
/// any probability distinguishable from 0 or 1 in double precision.
const SEPARATION_BOUND: f64 = 30.0;

/// Probabilities are clipped this far away from {0, 1} inside the
/// log-likelihood only, so a line-search step through an extreme
/// probability cannot produce -inf.
const LIKELIHOOD_CLIP: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SolverOptions<F> {
    /// Convergence threshold on the L2 norm of the score.
    pub gradient_tolerance: F,
    pub max_iterations: u32,
    /// Optional L2 penalty strength on the two slope coefficients
    /// (never the intercept); off by default. Turning it on biases the
    /// estimates toward zero but rescues separated designs.
    pub ridge: Option<F>,
}

impl<F: Real> Default for SolverOptions<F> {
    fn default() -> Self {
        SolverOptions {
            gradient_tolerance: F::from_f64_lit(1e-8),
            max_iterations: 100,
            ridge: None,
        }
    }
}

struct Problem<'a, F> {
    obs: &'a [TransitionObservation<F>],
    ridge: F,
}

impl<F: Real> Problem<'_, F> {
    fn linear(&self, b: &[F; 3], o: &TransitionObservation<F>) -> F {
        b[0] + b[1] * o.x_in + b[2] * o.x_out
    }

    /// Unpenalized Bernoulli log-likelihood with clipped probabilities.
    fn log_likelihood(&self, b: &[F; 3]) -> F {
        let lo = F::from_f64_lit(LIKELIHOOD_CLIP);
        let hi = F::one() - lo;
        self.obs
            .iter()
            .map(|o| {
                let p = self.linear(b, o).sigmoid().max(lo).min(hi);
                if o.j {
                    p.ln()
                } else {
                    (F::one() - p).ln()
                }
            })
            .sum()
    }

    fn penalized(&self, b: &[F; 3]) -> F {
        let two = F::from_f64_lit(2.0);
        self.log_likelihood(b) - self.ridge / two * (b[1] * b[1] + b[2] * b[2])
    }

    fn gradient(&self, b: &[F; 3]) -> [F; 3] {
        let mut g = [F::zero(); 3];
        for o in self.obs {
            let p = self.linear(b, o).sigmoid();
            let resid = if o.j { F::one() - p } else { -p };
            g[0] = g[0] + resid;
            g[1] = g[1] + resid * o.x_in;
            g[2] = g[2] + resid * o.x_out;
        }
        g[1] = g[1] - self.ridge * b[1];
        g[2] = g[2] - self.ridge * b[2];
        g
    }

    /// Observed information of the penalized objective.
    fn information(&self, b: &[F; 3]) -> [[F; 3]; 3] {
        let mut h = [[F::zero(); 3]; 3];
        for o in self.obs {
            let p = self.linear(b, o).sigmoid();
            let w = p * (F::one() - p);
            let x = [F::one(), o.x_in, o.x_out];
            for i in 0..3 {
                for j in i..3 {
                    h[i][j] = h[i][j] + w * x[i] * x[j];
                }
            }
        }
        h[1][1] = h[1][1] + self.ridge;
        h[2][2] = h[2][2] + self.ridge;
        for i in 0..3 {
            for j in 0..i {
                h[i][j] = h[j][i];
            }
        }
        h
    }
}

fn norm2<F: Real>(v: &[F; 3]) -> F {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Solve A x = rhs by Gaussian elimination with partial pivoting.
/// Returns None when a pivot collapses relative to the matrix scale.
fn solve3<F: Real>(a: &[[F; 3]; 3], rhs: &[F; 3]) -> Option<[F; 3]> {
    let mut m = [[F::zero(); 4]; 3];
    let mut scale = F::zero();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i][j];
            scale = scale.max(a[i][j].abs());
        }
        m[i][3] = rhs[i];
    }
    if scale == F::zero() {
        return None;
    }
    let tiny = scale * F::from_f64_lit(1e-12);
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if m[pivot_row][col].abs() <= tiny {
            return None;
        }
        m.swap(col, pivot_row);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for j in col..4 {
                m[row][j] = m[row][j] - f * m[col][j];
            }
        }
    }
    let mut x = [F::zero(); 3];
    for i in (0..3).rev() {
        let mut acc = m[i][3];
        for j in (i + 1)..3 {
            acc = acc - m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    Some(x)
}

/// Invert a symmetric positive-definite 3x3 matrix by solving against
/// the identity columns.
fn invert3<F: Real>(a: &[[F; 3]; 3]) -> Option<[[F; 3]; 3]> {
    let mut inv = [[F::zero(); 3]; 3];
    for col in 0..3 {
        let mut e = [F::zero(); 3];
        e[col] = F::one();
        let x = solve3(a, &e)?;
        for row in 0..3 {
            inv[row][col] = x[row];
        }
    }
    Some(inv)
}

fn validate<F: Real>(obs: &[TransitionObservation<F>]) -> Result<(), EstimationError> {
    if obs.len() < 3 {
        return Err(EstimationError::TooFewObservations(obs.len()));
    }
    for (i, o) in obs.iter().enumerate() {
        if !(o.x_in.is_finite() && o.x_out.is_finite()) {
            return Err(EstimationError::NonFiniteCovariate(i));
        }
    }
    let first = obs[0].j;
    if obs.iter().all(|o| o.j == first) {
        return Err(EstimationError::NoVariation(first));
    }
    Ok(())
}

fn switch_rate<F: Real>(obs: &[TransitionObservation<F>]) -> F {
    let switched = obs.iter().filter(|o| o.j).count();
    F::from_usize(switched).unwrap() / F::from_usize(obs.len()).unwrap()
}

fn null_log_likelihood<F: Real>(obs: &[TransitionObservation<F>]) -> F {
    let q = switch_rate(obs);
    let n = F::from_usize(obs.len()).unwrap();
    n * (q * q.ln() + (F::one() - q) * (F::one() - q).ln())
}

/// Unpenalized Bernoulli log-likelihood at coefficients
/// `(b0, b1, b2)` of `logit P(J=1) = b0 + b1 x_in + b2 x_out`.
/// Diagnostic surface, also used to cross-check the analytic score.
pub fn log_likelihood_at<F: Real>(obs: &[TransitionObservation<F>], coefs: [F; 3]) -> F {
    Problem { obs, ridge: F::zero() }.log_likelihood(&coefs)
}

/// Analytic score (log-likelihood gradient) at `(b0, b1, b2)`.
pub fn score_at<F: Real>(obs: &[TransitionObservation<F>], coefs: [F; 3]) -> [F; 3] {
    Problem { obs, ridge: F::zero() }.gradient(&coefs)
}

/// Maximize the Bernoulli likelihood of
/// `logit P(J=1) = b0 + b1 x_in + b2 x_out` by Newton-Raphson with
/// step-halving, and report `alpha = b1`, `beta = -b2`, `delta = -b0`
/// with standard errors from the inverse observed information.
pub fn fit_logistic<F: Real>(
    obs: &[TransitionObservation<F>],
    options: &SolverOptions<F>,
) -> Result<EstimationResult<F>, EstimationError> {
    validate(obs)?;
    let problem = Problem {
        obs,
        ridge: options.ridge.unwrap_or_else(F::zero),
    };
    let bound = F::from_f64_lit(SEPARATION_BOUND);

    let mut b = [F::zero(); 3];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < options.max_iterations {
        let g = problem.gradient(&b);
        if norm2(&g) <= options.gradient_tolerance {
            converged = true;
            break;
        }
        if b.iter().any(|c| c.abs() > bound) {
            return Err(EstimationError::Separation);
        }
        let info = problem.information(&b);
        let direction = solve3(&info, &g).ok_or(EstimationError::SingularDesign)?;
        let f0 = problem.penalized(&b);
        // Near the optimum the true improvement drops below the floating-
        // point resolution of the objective; such steps are accepted and
        // the gradient check decides convergence.
        let flat = (f0.abs() + F::one()) * F::from_f64_lit(1e-10);
        let mut t = F::one();
        let mut accepted = false;
        for _ in 0..40 {
            let cand = [b[0] + t * direction[0], b[1] + t * direction[1], b[2] + t * direction[2]];
            if problem.penalized(&cand) >= f0 - flat {
                b = cand;
                accepted = true;
                break;
            }
            t = t / F::from_f64_lit(2.0);
        }
        if !accepted {
            return Err(EstimationError::LineSearchFailed);
        }
        iterations += 1;
    }

    if !converged && b.iter().any(|c| c.abs() > bound) {
        return Err(EstimationError::Separation);
    }

    let info = problem.information(&b);
    let covariance = invert3(&info).ok_or(EstimationError::SingularDesign)?;
    let se = |i: usize| covariance[i][i].max(F::zero()).sqrt();
    let log_likelihood = problem.log_likelihood(&b);
    let pseudo_r2 = F::one() - log_likelihood / null_log_likelihood(obs);

    Ok(EstimationResult {
        alpha_hat: b[1],
        beta_hat: -b[2],
        delta_hat: -b[0],
        std_errors: [se(1), se(2), se(0)],
        pseudo_r2,
        log_likelihood,
        n_obs: obs.len(),
        converged,
        iterations,
    })
}

/// Closed-form intercept-only fit: `delta = -logit(switch rate)`, the
/// slopes pinned at zero with undefined (NaN) standard errors.
pub fn fit_intercept_only<F: Real>(
    obs: &[TransitionObservation<F>],
) -> Result<EstimationResult<F>, EstimationError> {
    validate(obs)?;
    let q = switch_rate(obs);
    let n = F::from_usize(obs.len()).unwrap();
    let log_likelihood = null_log_likelihood(obs);
    Ok(EstimationResult {
        alpha_hat: F::zero(),
        beta_hat: F::zero(),
        delta_hat: -q.logit(),
        std_errors: [F::nan(), F::nan(), (n * q * (F::one() - q)).sqrt().recip()],
        pseudo_r2: F::zero(),
        log_likelihood,
        n_obs: obs.len(),
        converged: true,
        iterations: 0,
    })
}

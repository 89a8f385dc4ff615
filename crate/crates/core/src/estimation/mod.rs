//! Maximum-likelihood estimation of (alpha, beta, delta) from
//! stance-transition observations.

mod design;
mod logistic;

pub use design::{
    build_observations_case1, build_observations_case2, sample_logistic_rows, Case2Design,
    JConvention,
};
pub use logistic::{fit_intercept_only, fit_logistic, log_likelihood_at, score_at, SolverOptions};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Party, Stance};
use crate::scalar::Real;

#[derive(Debug, Error, PartialEq)]
pub enum EstimationError {
    #[error("insufficient observations: need at least 3, got {0}")]
    TooFewObservations(usize),
    #[error("design matrix is rank-deficient (a covariate column is constant or collinear)")]
    SingularDesign,
    #[error(
        "complete or quasi-complete separation detected: coefficients diverge without the \
         gradient vanishing; consider the ridge option"
    )]
    Separation,
    #[error("line search failed to improve the log-likelihood")]
    LineSearchFailed,
    #[error("all observations have J = {}; the switch rate is degenerate", *.0 as u8)]
    NoVariation(bool),
    #[error("stance panel is empty")]
    EmptyPanel,
    #[error("non-finite covariate at observation {0}")]
    NonFiniteCovariate(usize),
    #[error("duplicate panel row for node '{node}' at interval {interval}")]
    DuplicatePanelRow { node: String, interval: u32 },
    #[error("party of node '{node}' is not constant across intervals")]
    InconsistentParty { node: String },
}

/// One logistic-regression row: the switch indicator J plus the in- and
/// out-group influence covariates toward the stance the node would adopt.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionObservation<F> {
    pub j: bool,
    pub x_in: F,
    pub x_out: F,
    pub node_id: Option<String>,
    pub time_index: Option<u32>,
}

impl<F: Real> TransitionObservation<F> {
    pub fn new(j: bool, x_in: F, x_out: F) -> Self {
        TransitionObservation {
            j,
            x_in,
            x_out,
            node_id: None,
            time_index: None,
        }
    }
}

/// One row of a longitudinal stance panel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PanelRow {
    pub node_id: String,
    pub interval: u32,
    pub party: Party,
    pub stance: Stance,
}

/// Longitudinal (node, interval, party, stance) table.
///
/// At most one row per (node, interval); the party label of a node may
/// not change across intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StancePanel {
    rows: Vec<PanelRow>,
}

impl StancePanel {
    pub fn new(rows: Vec<PanelRow>) -> Result<Self, EstimationError> {
        let mut seen = std::collections::HashSet::new();
        let mut party_of: std::collections::HashMap<&str, Party> = std::collections::HashMap::new();
        for row in &rows {
            if !seen.insert((row.node_id.as_str(), row.interval)) {
                return Err(EstimationError::DuplicatePanelRow {
                    node: row.node_id.clone(),
                    interval: row.interval,
                });
            }
            match party_of.entry(row.node_id.as_str()) {
                std::collections::hash_map::Entry::Occupied(e) => {
                    if *e.get() != row.party {
                        return Err(EstimationError::InconsistentParty {
                            node: row.node_id.clone(),
                        });
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(row.party);
                }
            }
        }
        Ok(StancePanel { rows })
    }

    pub fn rows(&self) -> &[PanelRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of distinct interval indices present.
    pub fn intervals(&self) -> usize {
        let mut ids: Vec<u32> = self.rows.iter().map(|r| r.interval).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

/// Fitted parameters with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult<F> {
    pub alpha_hat: F,
    pub beta_hat: F,
    pub delta_hat: F,
    /// Standard errors for (alpha, beta, delta), from the inverse
    /// observed information at the optimum.
    pub std_errors: [F; 3],
    /// McFadden's pseudo R-squared, 1 - l(model) / l(intercept-only).
    pub pseudo_r2: F,
    pub log_likelihood: F,
    pub n_obs: usize,
    pub converged: bool,
    pub iterations: u32,
}

impl<F: Real> EstimationResult<F> {
    /// Forward evaluation of the fitted law:
    /// sigma(alpha_hat * x_in - beta_hat * x_out - delta_hat).
    ///
    /// Callers should only evaluate converged fits.
    pub fn predict_switch_probability(&self, x_in: F, x_out: F) -> F {
        (self.alpha_hat * x_in - self.beta_hat * x_out - self.delta_hat).sigmoid()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_rejects_duplicates_and_party_changes() {
        let row = |node: &str, interval, party, stance| PanelRow {
            node_id: node.into(),
            interval,
            party,
            stance,
        };
        let err = StancePanel::new(vec![
            row("a", 0, Party::Blue, Stance::Pro),
            row("a", 0, Party::Blue, Stance::Anti),
        ])
        .unwrap_err();
        assert!(matches!(err, EstimationError::DuplicatePanelRow { .. }));

        let err = StancePanel::new(vec![
            row("a", 0, Party::Blue, Stance::Pro),
            row("a", 1, Party::Red, Stance::Pro),
        ])
        .unwrap_err();
        assert!(matches!(err, EstimationError::InconsistentParty { .. }));
    }

    #[test]
    fn predict_matches_table_value_arithmetic() {
        let result = EstimationResult {
            alpha_hat: 3.75,
            beta_hat: 0.25,
            delta_hat: 0.63,
            std_errors: [0.0; 3],
            pseudo_r2: 0.0,
            log_likelihood: 0.0,
            n_obs: 0,
            converged: true,
            iterations: 0,
        };
        // sigma(3.75*0.8 + 0.25*0.8 - 0.63) = sigma(2.57)
        let p = result.predict_switch_probability(0.8, -0.8);
        assert!((p - 2.57f64.sigmoid()).abs() < 1e-15);
        assert!((p - 0.929).abs() < 1e-3);
        // Zero covariates reproduce the no-influence base rate.
        let base = result.predict_switch_probability(0.0, 0.0);
        assert!((base - (-0.63f64).sigmoid()).abs() < 1e-15);
    }
}

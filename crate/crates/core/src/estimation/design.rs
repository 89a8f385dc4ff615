//! Construction of the logistic-regression design from transition data.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EstimationError, StancePanel, TransitionObservation};
use crate::graph::{Party, Stance};
use crate::influence::InfluenceVector;
use crate::model::ModelParams;
use crate::scalar::Real;

/// How the dependent variable J is defined when building Case-2 rows.
///
/// The formal estimation procedure emits one row per node with J
/// indicating whether the stance changed; a variant reading of the
/// aggregation text keeps only rows where a transition occurred, with J
/// indicating its direction (1 for anti-to-pro). The variant is kept as
/// a documented flag for sensitivity analysis; it estimates a different
/// effective model and is not the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JConvention {
    SwitchIndicator,
    TransitionDirection,
}

impl JConvention {
    pub fn name(self) -> &'static str {
        match self {
            JConvention::SwitchIndicator => "switch-indicator",
            JConvention::TransitionDirection => "transition-direction",
        }
    }
}

/// Case 1: stances at two adjacent time instants plus the ego's observed
/// influence vector. J flags a stance change; the covariates are the
/// influence components toward the stance opposite the current one.
pub fn build_observations_case1<F: Real>(
    records: &[(Stance, Stance, InfluenceVector<F>)],
) -> Vec<TransitionObservation<F>> {
    records
        .iter()
        .map(|&(before, after, inf)| {
            let (x_in, x_out) = inf.toward(before.flipped());
            TransitionObservation::new(before != after, x_in, x_out)
        })
        .collect()
}

/// The Case-2 design plus bookkeeping about interval coverage.
#[derive(Debug, Clone)]
pub struct Case2Design<F> {
    pub observations: Vec<TransitionObservation<F>>,
    /// Adjacent interval pairs that produced rows.
    pub pairs_used: usize,
    /// Adjacent interval pairs skipped because no node was present in
    /// both intervals.
    pub skipped_pairs: usize,
}

/// Case 2: build observations from a stance panel under the
/// fully-connected aggregation.
///
/// For each pair of consecutive intervals, only nodes present in both
/// intervals are used. The four aggregate shares (blue-pro, blue-anti,
/// red-pro, red-anti at the earlier interval) are normalized by the
/// number of shared nodes, with the focal node included in the counts.
/// A blue node at stance 0 gets x_in = thetaB - thetaB' and
/// x_out = thetaR - thetaR'; red nodes swap the roles and stance-1
/// holders negate both covariates.
pub fn build_observations_case2<F: Real>(
    panel: &StancePanel,
    convention: JConvention,
) -> Result<Case2Design<F>, EstimationError> {
    if panel.is_empty() {
        return Err(EstimationError::EmptyPanel);
    }

    // interval -> node -> (party, stance); BTreeMaps for a stable row order.
    let mut by_interval: BTreeMap<u32, BTreeMap<&str, (Party, Stance)>> = BTreeMap::new();
    for row in panel.rows() {
        by_interval
            .entry(row.interval)
            .or_default()
            .insert(&row.node_id, (row.party, row.stance));
    }

    let min = *by_interval.keys().next().unwrap();
    let max = *by_interval.keys().last().unwrap();

    let mut observations = Vec::new();
    let mut pairs_used = 0;
    let mut skipped_pairs = 0;

    for t in min..max {
        let (Some(now), Some(next)) = (by_interval.get(&t), by_interval.get(&(t + 1))) else {
            skipped_pairs += 1;
            continue;
        };
        let shared: Vec<(&str, Party, Stance, Stance)> = now
            .iter()
            .filter_map(|(&node, &(party, stance))| {
                next.get(node)
                    .map(|&(_, stance_next)| (node, party, stance, stance_next))
            })
            .collect();
        if shared.is_empty() {
            skipped_pairs += 1;
            continue;
        }
        pairs_used += 1;

        let total = F::from_usize(shared.len()).unwrap();
        let mut counts = [0usize; 4]; // blue-pro, blue-anti, red-pro, red-anti
        for &(_, party, stance, _) in &shared {
            let idx = match (party, stance) {
                (Party::Blue, Stance::Pro) => 0,
                (Party::Blue, Stance::Anti) => 1,
                (Party::Red, Stance::Pro) => 2,
                (Party::Red, Stance::Anti) => 3,
            };
            counts[idx] += 1;
        }
        let share = |i: usize| F::from_usize(counts[i]).unwrap() / total;
        let blue_net = share(0) - share(1); // thetaB - thetaB'
        let red_net = share(2) - share(3); // thetaR - thetaR'

        for &(node, party, stance, stance_next) in &shared {
            let (own_net, other_net) = match party {
                Party::Blue => (blue_net, red_net),
                Party::Red => (red_net, blue_net),
            };
            let obs = match convention {
                JConvention::SwitchIndicator => {
                    let sign = match stance {
                        Stance::Anti => F::one(),
                        Stance::Pro => -F::one(),
                    };
                    TransitionObservation::new(
                        stance != stance_next,
                        sign * own_net,
                        sign * other_net,
                    )
                }
                JConvention::TransitionDirection => {
                    if stance == stance_next {
                        continue;
                    }
                    TransitionObservation::new(stance_next == Stance::Pro, own_net, other_net)
                }
            };
            observations.push(TransitionObservation {
                node_id: Some(node.to_string()),
                time_index: Some(t),
                ..obs
            });
        }
    }

    Ok(Case2Design {
        observations,
        pairs_used,
        skipped_pairs,
    })
}

/// Sample rows directly from the logistic law with covariates uniform on
/// [-1, 1]; the Monte-Carlo consistency oracle for the solver.
pub fn sample_logistic_rows<F: Real>(
    params: &ModelParams<F>,
    n: usize,
    seed: u64,
) -> Vec<TransitionObservation<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x_in = F::from_f64_lit(rng.gen_range(-1.0..=1.0));
            let x_out = F::from_f64_lit(rng.gen_range(-1.0..=1.0));
            let p = (params.alpha() * x_in - params.beta() * x_out - params.delta()).sigmoid();
            let j = F::from_f64_lit(rng.gen::<f64>()) < p;
            TransitionObservation::new(j, x_in, x_out)
        })
        .collect()
}

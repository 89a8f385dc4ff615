//! Stochastic agent-based simulation of the binary-choice dynamics:
//! uniform node sampling, probabilistic stance switching, trajectory
//! recording, and synthetic-panel generation.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::estimation::{PanelRow, StancePanel};
use crate::graph::{GroupTally, NodeId, Party, PartyGraph, Stance};
use crate::influence::{
    def1_from_counts, def2_from_counts, InfluenceMeasureKind, InfluenceVector, NeighborCounts,
};
use crate::model::ModelParams;
use crate::scalar::Real;

/// Name of the RNG recorded in run metadata. Replicate `i` of an
/// ensemble runs on stream `i` of the same seed.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("initial stance map is missing node '{node}'")]
    MissingStance { node: String },
    #[error("initial stance map references unknown node '{node}'")]
    UnknownNode { node: String },
}

/// How initial stances are assigned.
#[derive(Debug, Clone)]
pub enum InitialStanceSpec<F> {
    /// Explicit stance per node label; must cover the graph exactly.
    Explicit(HashMap<String, Stance>),
    /// Independent Bernoulli draws with a per-party prevalence.
    Bernoulli { theta_blue: F, theta_red: F },
}

impl<F: Real> InitialStanceSpec<F> {
    fn validate(&self) -> Result<(), SimError> {
        if let InitialStanceSpec::Bernoulli {
            theta_blue,
            theta_red,
        } = self
        {
            for (name, v) in [("theta_blue", *theta_blue), ("theta_red", *theta_red)] {
                if !(v >= F::zero() && v <= F::one()) {
                    return Err(SimError::InvalidConfig(format!(
                        "{name} must lie in [0, 1], got {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig<F> {
    pub params: ModelParams<F>,
    pub measure: InfluenceMeasureKind,
    /// Number of node-update events; one unit of model time is `n` events.
    pub horizon_events: u64,
    /// Events between trajectory snapshots.
    pub record_every: u64,
    pub seed: u64,
    pub init: InitialStanceSpec<F>,
}

impl<F: Real> SimConfig<F> {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.horizon_events < 1 {
            return Err(SimError::InvalidConfig("horizon_events must be >= 1".into()));
        }
        if self.record_every < 1 {
            return Err(SimError::InvalidConfig("record_every must be >= 1".into()));
        }
        self.init.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow<F> {
    pub event: u64,
    pub theta_blue: F,
    pub theta_red: F,
}

/// Group-prevalence snapshots indexed by event count.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<F> {
    pub rows: Vec<TrajectoryRow<F>>,
}

impl<F: Real> Trajectory<F> {
    pub fn final_row(&self) -> &TrajectoryRow<F> {
        self.rows.last().expect("trajectory has at least one row")
    }
}

/// Draw initial stances for every node.
pub fn init_stances<F: Real, R: Rng>(
    graph: &PartyGraph,
    spec: &InitialStanceSpec<F>,
    rng: &mut R,
) -> Result<Vec<Stance>, SimError> {
    spec.validate()?;
    match spec {
        InitialStanceSpec::Explicit(map) => {
            for label in map.keys() {
                if graph.node_id(label).is_none() {
                    return Err(SimError::UnknownNode {
                        node: label.clone(),
                    });
                }
            }
            graph
                .nodes()
                .map(|v| {
                    map.get(graph.label(v)).copied().ok_or_else(|| {
                        SimError::MissingStance {
                            node: graph.label(v).to_string(),
                        }
                    })
                })
                .collect()
        }
        InitialStanceSpec::Bernoulli {
            theta_blue,
            theta_red,
        } => Ok(graph
            .nodes()
            .map(|v| {
                let theta = match graph.party(v) {
                    Party::Blue => *theta_blue,
                    Party::Red => *theta_red,
                };
                if F::from_f64_lit(rng.gen::<f64>()) < theta {
                    Stance::Pro
                } else {
                    Stance::Anti
                }
            })
            .collect()),
    }
}

/// One simulation in progress: a borrowed topology plus owned stances.
///
/// Per-node neighbor tallies are maintained incrementally; a flip of
/// node `u` costs O(degree(u)). The integer counts make this exactly
/// equivalent to recomputing influences from the graph at every step
/// (covered by brute-force equivalence tests).
pub struct Simulation<'g, F> {
    graph: &'g PartyGraph,
    params: ModelParams<F>,
    measure: InfluenceMeasureKind,
    stance: Vec<Stance>,
    counts: Vec<NeighborCounts>,
    tally: GroupTally,
    rng: ChaCha8Rng,
    events: u64,
}

impl<'g, F: Real> Simulation<'g, F> {
    pub fn new(
        graph: &'g PartyGraph,
        params: ModelParams<F>,
        measure: InfluenceMeasureKind,
        stance: Vec<Stance>,
        rng: ChaCha8Rng,
    ) -> Self {
        assert_eq!(stance.len(), graph.node_count());
        let counts = Self::full_counts(graph, &stance);
        let tally = Self::full_tally(graph, &stance);
        Simulation {
            graph,
            params,
            measure,
            stance,
            counts,
            tally,
            rng,
            events: 0,
        }
    }

    fn full_counts(graph: &PartyGraph, stance: &[Stance]) -> Vec<NeighborCounts> {
        graph
            .nodes()
            .map(|v| {
                let own = graph.party(v);
                let mut c = NeighborCounts::default();
                for &u in graph.neighbors(v) {
                    let same = graph.party(u) == own;
                    let pro = stance[u.index()] == Stance::Pro;
                    match (same, pro) {
                        (true, true) => c.in_pro += 1,
                        (true, false) => c.in_anti += 1,
                        (false, true) => c.out_pro += 1,
                        (false, false) => c.out_anti += 1,
                    }
                }
                c
            })
            .collect()
    }

    fn full_tally(graph: &PartyGraph, stance: &[Stance]) -> GroupTally {
        let mut tally = GroupTally::default();
        for v in graph.nodes() {
            let pro = stance[v.index()] == Stance::Pro;
            match graph.party(v) {
                Party::Blue => {
                    tally.blue_total += 1;
                    if pro {
                        tally.blue_pro += 1;
                    }
                }
                Party::Red => {
                    tally.red_total += 1;
                    if pro {
                        tally.red_pro += 1;
                    }
                }
            }
        }
        tally
    }

    pub fn stances(&self) -> &[Stance] {
        &self.stance
    }

    pub fn tally(&self) -> GroupTally {
        self.tally
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    /// Influence vector of `v` under the configured measure, from the
    /// cached tallies.
    pub fn influence(&self, v: NodeId) -> InfluenceVector<F> {
        let c = &self.counts[v.index()];
        match self.measure {
            InfluenceMeasureKind::DegreeNormalizedCount | InfluenceMeasureKind::MessageCount => {
                def1_from_counts(c)
            }
            InfluenceMeasureKind::GroupFraction => def2_from_counts(c),
        }
    }

    /// Probability that `v` would switch stance if sampled now.
    pub fn switch_probability(&self, v: NodeId) -> F {
        self.params
            .transition_probability(&self.influence(v), self.stance[v.index()])
    }

    fn flip(&mut self, v: NodeId) {
        let old = self.stance[v.index()];
        let new = old.flipped();
        self.stance[v.index()] = new;
        let own = self.graph.party(v);
        for &u in self.graph.neighbors(v) {
            let c = &mut self.counts[u.index()];
            let same = self.graph.party(u) == own;
            match (same, old) {
                (true, Stance::Pro) => c.in_pro -= 1,
                (true, Stance::Anti) => c.in_anti -= 1,
                (false, Stance::Pro) => c.out_pro -= 1,
                (false, Stance::Anti) => c.out_anti -= 1,
            }
            match (same, new) {
                (true, Stance::Pro) => c.in_pro += 1,
                (true, Stance::Anti) => c.in_anti += 1,
                (false, Stance::Pro) => c.out_pro += 1,
                (false, Stance::Anti) => c.out_anti += 1,
            }
        }
        let delta = if new == Stance::Pro { 1 } else { -1 };
        match own {
            Party::Blue => {
                self.tally.blue_pro = (self.tally.blue_pro as i64 + delta) as usize;
            }
            Party::Red => {
                self.tally.red_pro = (self.tally.red_pro as i64 + delta) as usize;
            }
        }
    }

    /// One update event: sample a node uniformly, switch its stance with
    /// the transition probability. Returns the event record.
    pub fn step(&mut self) -> EventRecord<F> {
        let v = NodeId(self.rng.gen_range(0..self.graph.node_count() as u32));
        let stance_before = self.stance[v.index()];
        let influence = self.influence(v);
        let p = self
            .params
            .transition_probability(&influence, stance_before);
        let switched = F::from_f64_lit(self.rng.gen::<f64>()) < p;
        if switched {
            self.flip(v);
        }
        self.events += 1;
        EventRecord {
            event: self.events,
            node: v,
            stance_before,
            stance_after: self.stance[v.index()],
            influence,
        }
    }
}

/// What happened at one update event; the influence is the sampled
/// node's pre-update view, which is exactly a Case-1 regression row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord<F> {
    pub event: u64,
    pub node: NodeId,
    pub stance_before: Stance,
    pub stance_after: Stance,
    pub influence: InfluenceVector<F>,
}

impl<F> EventRecord<F> {
    pub fn switched(&self) -> bool {
        self.stance_before != self.stance_after
    }
}

fn record_events(horizon: u64, every: u64) -> impl Iterator<Item = u64> {
    (1..=horizon).filter(move |e| e % every == 0 || *e == horizon)
}

fn tally_row<F: Real>(event: u64, tally: GroupTally) -> TrajectoryRow<F> {
    TrajectoryRow {
        event,
        theta_blue: F::from_f64_lit(tally.theta_blue()),
        theta_red: F::from_f64_lit(tally.theta_red()),
    }
}

fn run_on_stream<F: Real>(
    graph: &PartyGraph,
    config: &SimConfig<F>,
    stream: u64,
    mut observe: Option<&mut Vec<EventRecord<F>>>,
) -> Result<Trajectory<F>, SimError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let stances = init_stances(graph, &config.init, &mut rng)?;
    let mut sim = Simulation::new(graph, config.params, config.measure, stances, rng);

    let mut rows = Vec::with_capacity((config.horizon_events / config.record_every) as usize + 2);
    rows.push(tally_row(0, sim.tally()));
    let mut snapshots = record_events(config.horizon_events, config.record_every).peekable();
    for event in 1..=config.horizon_events {
        let record = sim.step();
        if let Some(out) = observe.as_deref_mut() {
            out.push(record);
        }
        if snapshots.peek() == Some(&event) {
            snapshots.next();
            rows.push(tally_row(event, sim.tally()));
        }
    }
    Ok(Trajectory { rows })
}

/// Run one trajectory. Deterministic in `(graph, config)`.
pub fn run<F: Real>(graph: &PartyGraph, config: &SimConfig<F>) -> Result<Trajectory<F>, SimError> {
    run_on_stream(graph, config, 0, None)
}

/// Run one trajectory and also return every event record, for Case-1
/// estimation pipelines.
pub fn run_with_observations<F: Real>(
    graph: &PartyGraph,
    config: &SimConfig<F>,
) -> Result<(Trajectory<F>, Vec<EventRecord<F>>), SimError> {
    let mut events = Vec::with_capacity(config.horizon_events as usize);
    let trajectory = run_on_stream(graph, config, 0, Some(&mut events))?;
    Ok((trajectory, events))
}

/// Independent replicates; replicate `i` runs on RNG stream `i`, so
/// replicate 0 reproduces [`run`] exactly. Replicates execute in
/// parallel, each on its own stance copy.
pub fn ensemble_run<F: Real>(
    graph: &PartyGraph,
    config: &SimConfig<F>,
    replicates: u32,
) -> Result<Vec<Trajectory<F>>, SimError> {
    if replicates < 1 {
        return Err(SimError::InvalidConfig("replicates must be >= 1".into()));
    }
    config.validate()?;
    (0..replicates as u64)
        .into_par_iter()
        .map(|stream| run_on_stream(graph, config, stream, None))
        .collect()
}

#[derive(Debug, Clone)]
pub struct PanelConfig<F> {
    pub params: ModelParams<F>,
    /// Number of interval transitions; the panel gets `intervals + 1`
    /// snapshots.
    pub intervals: u32,
    pub seed: u64,
    pub init: InitialStanceSpec<F>,
}

/// Generate a synthetic stance panel by synchronous interval updates.
///
/// At each interval boundary every node draws one transition from the
/// logistic law, with Definition-1 influences frozen at the interval
/// start. This is the generating process the fully-connected panel
/// estimator assumes (one update opportunity per node per interval); the
/// per-event sampler of [`run`] would wash parameters out at interval
/// granularity because nodes then see zero or several updates between
/// snapshots.
pub fn synthesize_panel<F: Real>(
    graph: &PartyGraph,
    config: &PanelConfig<F>,
) -> Result<StancePanel, SimError> {
    if config.intervals < 1 {
        return Err(SimError::InvalidConfig("intervals must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let stances = init_stances(graph, &config.init, &mut rng)?;
    let mut sim = Simulation::new(
        graph,
        config.params,
        InfluenceMeasureKind::DegreeNormalizedCount,
        stances,
        rng,
    );

    let mut rows = Vec::with_capacity(graph.node_count() * (config.intervals as usize + 1));
    let mut push_snapshot = |sim: &Simulation<F>, interval: u32| {
        for v in graph.nodes() {
            rows.push(PanelRow {
                node_id: graph.label(v).to_string(),
                interval,
                party: graph.party(v),
                stance: sim.stances()[v.index()],
            });
        }
    };
    push_snapshot(&sim, 0);

    let n = graph.node_count();
    let mut flips = Vec::with_capacity(n);
    for interval in 1..=config.intervals {
        flips.clear();
        for v in graph.nodes() {
            let p = sim.switch_probability(v);
            if F::from_f64_lit(sim.rng.gen::<f64>()) < p {
                flips.push(v);
            }
        }
        for &v in &flips {
            sim.flip(v);
        }
        push_snapshot(&sim, interval);
    }
    StancePanel::new(rows).map_err(|e| SimError::InvalidConfig(e.to_string()))
}

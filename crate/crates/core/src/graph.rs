//! Undirected social network with a static party label and a dynamic
//! binary stance per node.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Static group label of a node. Blue serializes as 0, red as 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    Blue,
    Red,
}

impl Party {
    pub fn from_u8(v: u8) -> Option<Party> {
        match v {
            0 => Some(Party::Blue),
            1 => Some(Party::Red),
            _ => None,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Party::Blue => 0,
            Party::Red => 1,
        }
    }
}

/// Dynamic binary stance of a node. Anti serializes as 0, pro as 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stance {
    Anti,
    Pro,
}

impl Stance {
    pub fn from_u8(v: u8) -> Option<Stance> {
        match v {
            0 => Some(Stance::Anti),
            1 => Some(Stance::Pro),
            _ => None,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Stance::Anti => 0,
            Stance::Pro => 1,
        }
    }

    pub fn flipped(self) -> Stance {
        match self {
            Stance::Anti => Stance::Pro,
            Stance::Pro => Stance::Anti,
        }
    }
}

/// Dense node index handed out by a [`PartyGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on node '{node}'")]
    SelfLoop { node: String },
    #[error("edge references unknown node '{node}'")]
    UnknownNode { node: String },
    #[error("duplicate node id '{node}'")]
    DuplicateNode { node: String },
}

/// Undirected graph with immutable party labels and mutable stances.
///
/// Edges are simple: no self-loops, each unordered pair stored once.
/// Duplicate edges in the input are dropped and counted rather than
/// rejected, so loaders can report them.
#[derive(Debug, Clone)]
pub struct PartyGraph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    party: Vec<Party>,
    adj: Vec<Vec<NodeId>>,
    stance: Vec<Stance>,
    edge_count: usize,
    duplicate_edges_dropped: usize,
}

impl PartyGraph {
    /// Build a graph from labeled nodes and unordered label pairs.
    /// All stances start at [`Stance::Anti`] until initialized.
    pub fn new<S: Into<String>>(
        nodes: Vec<(S, Party)>,
        edges: &[(String, String)],
    ) -> Result<Self, GraphError> {
        let mut labels = Vec::with_capacity(nodes.len());
        let mut party = Vec::with_capacity(nodes.len());
        let mut index = HashMap::with_capacity(nodes.len());
        for (label, p) in nodes {
            let label = label.into();
            let id = NodeId(labels.len() as u32);
            if index.insert(label.clone(), id).is_some() {
                return Err(GraphError::DuplicateNode { node: label });
            }
            labels.push(label);
            party.push(p);
        }

        let mut graph = PartyGraph {
            stance: vec![Stance::Anti; labels.len()],
            adj: vec![Vec::new(); labels.len()],
            labels,
            index,
            party,
            edge_count: 0,
            duplicate_edges_dropped: 0,
        };

        let mut seen = std::collections::HashSet::new();
        for (u, v) in edges {
            let ui = graph
                .node_id(u)
                .ok_or_else(|| GraphError::UnknownNode { node: u.clone() })?;
            let vi = graph
                .node_id(v)
                .ok_or_else(|| GraphError::UnknownNode { node: v.clone() })?;
            if ui == vi {
                return Err(GraphError::SelfLoop { node: u.clone() });
            }
            let key = (ui.min(vi), ui.max(vi));
            if !seen.insert(key) {
                graph.duplicate_edges_dropped += 1;
                continue;
            }
            graph.adj[ui.index()].push(vi);
            graph.adj[vi.index()].push(ui);
            graph.edge_count += 1;
        }
        for nbrs in &mut graph.adj {
            nbrs.sort_unstable();
        }
        Ok(graph)
    }

    /// Fully connected graph over `n_blue + n_red` nodes, blue nodes first.
    pub fn complete(n_blue: usize, n_red: usize) -> Self {
        let n = n_blue + n_red;
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), NodeId(i as u32)))
            .collect();
        let party = (0..n)
            .map(|i| if i < n_blue { Party::Blue } else { Party::Red })
            .collect();
        let adj = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| NodeId(j as u32))
                    .collect()
            })
            .collect();
        PartyGraph {
            labels,
            index,
            party,
            adj,
            stance: vec![Stance::Anti; n],
            edge_count: n * (n - 1) / 2,
            duplicate_edges_dropped: 0,
        }
    }

    /// Fully connected graph of `n` nodes where `round(r * n)` are red.
    pub fn complete_with_red_fraction(n: usize, r: f64) -> Self {
        let n_red = (r * n as f64).round() as usize;
        Self::complete(n - n_red, n_red)
    }

    /// Two-block graph for testing: independent edges with probability
    /// `p_within` inside each party and `p_between` across parties.
    pub fn two_block<R: Rng>(
        n_blue: usize,
        n_red: usize,
        p_within: f64,
        p_between: f64,
        rng: &mut R,
    ) -> Self {
        let n = n_blue + n_red;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let same = (i < n_blue) == (j < n_blue);
                let p = if same { p_within } else { p_between };
                if rng.gen::<f64>() < p {
                    edges.push((i.to_string(), j.to_string()));
                }
            }
        }
        let nodes = (0..n)
            .map(|i| {
                (
                    i.to_string(),
                    if i < n_blue { Party::Blue } else { Party::Red },
                )
            })
            .collect();
        Self::new(nodes, &edges).expect("generated edges are valid")
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn duplicate_edges_dropped(&self) -> usize {
        self.duplicate_edges_dropped
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(|i| NodeId(i as u32))
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    pub fn party(&self, v: NodeId) -> Party {
        self.party[v.index()]
    }

    pub fn stance(&self, v: NodeId) -> Stance {
        self.stance[v.index()]
    }

    pub fn set_stance(&mut self, v: NodeId, s: Stance) {
        self.stance[v.index()] = s;
    }

    pub fn stances(&self) -> &[Stance] {
        &self.stance
    }

    pub fn set_stances(&mut self, stances: Vec<Stance>) {
        assert_eq!(stances.len(), self.node_count());
        self.stance = stances;
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v.index()].len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v.index()]
    }

    /// Per-party tallies `(pro, total)` of the current stances.
    pub fn prevalence(&self) -> GroupTally {
        let mut tally = GroupTally::default();
        for v in self.nodes() {
            let pro = self.stance(v) == Stance::Pro;
            match self.party(v) {
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
}

/// Counts of pro-stance nodes per party.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct GroupTally {
    pub blue_pro: usize,
    pub blue_total: usize,
    pub red_pro: usize,
    pub red_total: usize,
}

impl GroupTally {
    /// Fraction of blue nodes with stance-1; 0 for an empty group.
    pub fn theta_blue(&self) -> f64 {
        if self.blue_total == 0 {
            0.0
        } else {
            self.blue_pro as f64 / self.blue_total as f64
        }
    }

    /// Fraction of red nodes with stance-1; 0 for an empty group.
    pub fn theta_red(&self) -> f64 {
        if self.red_total == 0 {
            0.0
        } else {
            self.red_pro as f64 / self.red_total as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path4() -> PartyGraph {
        let nodes = vec![
            ("a", Party::Blue),
            ("b", Party::Blue),
            ("c", Party::Red),
            ("d", Party::Red),
        ];
        let edges = vec![
            ("a".into(), "b".into()),
            ("b".into(), "c".into()),
            ("c".into(), "d".into()),
        ];
        PartyGraph::new(nodes, &edges).unwrap()
    }

    #[test]
    fn builds_path_graph() {
        let g = path4();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 3);
        let b = g.node_id("b").unwrap();
        assert_eq!(g.degree(b), 2);
        assert_eq!(g.party(b), Party::Blue);
    }

    #[test]
    fn rejects_self_loop() {
        let err = PartyGraph::new(
            vec![("a", Party::Blue)],
            &[("a".to_string(), "a".to_string())],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { node: "a".into() });
    }

    #[test]
    fn rejects_unknown_endpoint() {
        let err = PartyGraph::new(
            vec![("a", Party::Blue)],
            &[("a".to_string(), "zz".to_string())],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::UnknownNode { node: "zz".into() });
    }

    #[test]
    fn deduplicates_edges_with_count() {
        let g = PartyGraph::new(
            vec![("a", Party::Blue), ("b", Party::Red)],
            &[
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "a".to_string()),
            ],
        )
        .unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.duplicate_edges_dropped(), 1);
    }

    #[test]
    fn complete_graph_degrees() {
        let g = PartyGraph::complete(3, 2);
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 10);
        for v in g.nodes() {
            assert_eq!(g.degree(v), 4);
        }
        assert_eq!(g.party(NodeId(0)), Party::Blue);
        assert_eq!(g.party(NodeId(4)), Party::Red);
    }

    #[test]
    fn red_fraction_rounding() {
        let g = PartyGraph::complete_with_red_fraction(2000, 0.3);
        let tally = g.prevalence();
        assert_eq!(tally.red_total, 600);
        assert_eq!(tally.blue_total, 1400);
    }

    #[test]
    fn two_block_is_reproducible() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        let g1 = PartyGraph::two_block(20, 20, 0.5, 0.1, &mut r1);
        let g2 = PartyGraph::two_block(20, 20, 0.5, 0.1, &mut r2);
        assert_eq!(g1.edge_count(), g2.edge_count());
        for v in g1.nodes() {
            assert_eq!(g1.neighbors(v), g2.neighbors(v));
        }
    }

    #[test]
    fn prevalence_counts() {
        let mut g = path4();
        g.set_stance(NodeId(0), Stance::Pro);
        g.set_stance(NodeId(3), Stance::Pro);
        let t = g.prevalence();
        assert_eq!((t.blue_pro, t.blue_total), (1, 2));
        assert_eq!((t.red_pro, t.red_total), (1, 2));
        assert_eq!(t.theta_blue(), 0.5);
    }
}

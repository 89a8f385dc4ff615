//! Peer-influence measures: how a node's neighborhood maps to the four
//! prevalence scalars that drive stance transitions.

use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, PartyGraph, Stance};
use crate::scalar::Real;

/// Which influence measure a run uses. Recorded in all outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfluenceMeasureKind {
    /// Net number of individuals with a stance, normalized by degree.
    DegreeNormalizedCount,
    /// Net fraction of neighbors in each group with a stance.
    GroupFraction,
    /// Net number of messages with a stance, normalized by the total
    /// message count. On a graph every neighbor contributes exactly one
    /// message, which makes this coincide with the degree-normalized
    /// count.
    MessageCount,
}

impl InfluenceMeasureKind {
    pub fn name(self) -> &'static str {
        match self {
            InfluenceMeasureKind::DegreeNormalizedCount => "degree-normalized-count",
            InfluenceMeasureKind::GroupFraction => "group-fraction",
            InfluenceMeasureKind::MessageCount => "message-count",
        }
    }
}

/// The four peer-influence scalars for one node at one time.
///
/// Only the stance-1 components are stored; the stance-0 components are
/// their exact negations, so the antisymmetry invariant cannot drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfluenceVector<F> {
    in_1: F,
    out_1: F,
}

impl<F: Real> InfluenceVector<F> {
    pub fn new(d_in_1: F, d_out_1: F) -> Self {
        InfluenceVector {
            in_1: d_in_1,
            out_1: d_out_1,
        }
    }

    pub fn zero() -> Self {
        InfluenceVector {
            in_1: F::zero(),
            out_1: F::zero(),
        }
    }

    /// Prevalence of stance-1 among in-group neighbors.
    pub fn d_in_1(&self) -> F {
        self.in_1
    }

    /// Prevalence of stance-0 among in-group neighbors.
    pub fn d_in_0(&self) -> F {
        -self.in_1
    }

    /// Prevalence of stance-1 among out-group neighbors.
    pub fn d_out_1(&self) -> F {
        self.out_1
    }

    /// Prevalence of stance-0 among out-group neighbors.
    pub fn d_out_0(&self) -> F {
        -self.out_1
    }

    /// The (in, out) components pulling toward adopting `target`.
    pub fn toward(&self, target: Stance) -> (F, F) {
        match target {
            Stance::Pro => (self.d_in_1(), self.d_out_1()),
            Stance::Anti => (self.d_in_0(), self.d_out_0()),
        }
    }
}

/// Neighbor tallies split by group membership and stance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NeighborCounts {
    pub in_pro: u32,
    pub in_anti: u32,
    pub out_pro: u32,
    pub out_anti: u32,
}

impl NeighborCounts {
    pub fn degree(&self) -> u32 {
        self.in_pro + self.in_anti + self.out_pro + self.out_anti
    }
}

/// Tally a node's neighbors by (in/out group, stance).
pub fn neighbor_counts(graph: &PartyGraph, node: NodeId) -> NeighborCounts {
    let own = graph.party(node);
    let mut c = NeighborCounts::default();
    for &u in graph.neighbors(node) {
        let same = graph.party(u) == own;
        let pro = graph.stance(u) == Stance::Pro;
        match (same, pro) {
            (true, true) => c.in_pro += 1,
            (true, false) => c.in_anti += 1,
            (false, true) => c.out_pro += 1,
            (false, false) => c.out_anti += 1,
        }
    }
    c
}

pub(crate) fn def1_from_counts<F: Real>(c: &NeighborCounts) -> InfluenceVector<F> {
    let degree = c.degree();
    if degree == 0 {
        return InfluenceVector::zero();
    }
    let d = F::from_u32(degree).unwrap();
    let net_in = F::from_i64(c.in_pro as i64 - c.in_anti as i64).unwrap();
    let net_out = F::from_i64(c.out_pro as i64 - c.out_anti as i64).unwrap();
    InfluenceVector::new(net_in / d, net_out / d)
}

pub(crate) fn def2_from_counts<F: Real>(c: &NeighborCounts) -> InfluenceVector<F> {
    let frac = |pro: u32, anti: u32| -> F {
        let total = pro + anti;
        if total == 0 {
            // An empty group exerts no pull.
            F::zero()
        } else {
            F::from_i64(pro as i64 - anti as i64).unwrap() / F::from_u32(total).unwrap()
        }
    };
    InfluenceVector::new(frac(c.in_pro, c.in_anti), frac(c.out_pro, c.out_anti))
}

/// Definition 1: net stance-1 count per group, normalized by the node's
/// degree. A degree-zero node gets the all-zero vector.
pub fn influence_def1<F: Real>(graph: &PartyGraph, node: NodeId) -> InfluenceVector<F> {
    def1_from_counts(&neighbor_counts(graph, node))
}

/// Definition 2: net fraction of stance-1 within each neighbor group.
/// An empty in-group or out-group contributes zero components.
pub fn influence_def2<F: Real>(graph: &PartyGraph, node: NodeId) -> InfluenceVector<F> {
    def2_from_counts(&neighbor_counts(graph, node))
}

/// Tweet-exposure variant: net stance-1 message counts normalized by the
/// grand total of observed messages.
///
/// The defining prose reads "normalized by the number of in-group tweets",
/// but its own worked example divides every component by the grand total
/// (70-30)/110, exactly mirroring Definition 1; this follows the worked
/// arithmetic. All counts zero yields the all-zero vector.
pub fn influence_messages<F: Real>(
    in_counts: (u64, u64),
    out_counts: (u64, u64),
) -> InfluenceVector<F> {
    let (in_pro, in_anti) = in_counts;
    let (out_pro, out_anti) = out_counts;
    let total = in_pro + in_anti + out_pro + out_anti;
    if total == 0 {
        return InfluenceVector::zero();
    }
    let t = F::from_u64(total).unwrap();
    InfluenceVector::new(
        F::from_i64(in_pro as i64 - in_anti as i64).unwrap() / t,
        F::from_i64(out_pro as i64 - out_anti as i64).unwrap() / t,
    )
}

/// Compute the selected influence measure for a graph node. Under
/// [`InfluenceMeasureKind::MessageCount`] each neighbor stands for one
/// message, which reduces to Definition 1.
pub fn influence<F: Real>(
    graph: &PartyGraph,
    node: NodeId,
    kind: InfluenceMeasureKind,
) -> InfluenceVector<F> {
    match kind {
        InfluenceMeasureKind::DegreeNormalizedCount | InfluenceMeasureKind::MessageCount => {
            influence_def1(graph, node)
        }
        InfluenceMeasureKind::GroupFraction => influence_def2(graph, node),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Party;

    /// One ego connected to 100 in-group neighbors (70 pro) and 10
    /// out-group neighbors (7 pro).
    fn worked_example_graph() -> (PartyGraph, NodeId) {
        let mut nodes = vec![("ego".to_string(), Party::Blue)];
        let mut edges = Vec::new();
        for i in 0..100 {
            nodes.push((format!("in{i}"), Party::Blue));
            edges.push(("ego".to_string(), format!("in{i}")));
        }
        for i in 0..10 {
            nodes.push((format!("out{i}"), Party::Red));
            edges.push(("ego".to_string(), format!("out{i}")));
        }
        let mut g = PartyGraph::new(nodes, &edges).unwrap();
        for i in 0..70 {
            let v = g.node_id(&format!("in{i}")).unwrap();
            g.set_stance(v, Stance::Pro);
        }
        for i in 0..7 {
            let v = g.node_id(&format!("out{i}")).unwrap();
            g.set_stance(v, Stance::Pro);
        }
        let ego = g.node_id("ego").unwrap();
        (g, ego)
    }

    #[test]
    fn def1_worked_example() {
        let (g, ego) = worked_example_graph();
        let inf: InfluenceVector<f64> = influence_def1(&g, ego);
        assert_eq!(inf.d_in_1(), 40.0 / 110.0);
        assert_eq!(inf.d_out_1(), 4.0 / 110.0);
        assert_eq!(inf.d_in_0(), -40.0 / 110.0);
        assert_eq!(inf.d_out_0(), -4.0 / 110.0);
    }

    #[test]
    fn def2_worked_example() {
        let (g, ego) = worked_example_graph();
        let inf: InfluenceVector<f64> = influence_def2(&g, ego);
        assert!((inf.d_in_1() - 0.4).abs() < 1e-15);
        assert!((inf.d_out_1() - 0.4).abs() < 1e-15);
        assert!((inf.d_in_0() + 0.4).abs() < 1e-15);
    }

    #[test]
    fn def1_unanimous_in_group() {
        let mut nodes = vec![("ego".to_string(), Party::Blue)];
        let mut edges = Vec::new();
        for i in 0..5 {
            nodes.push((format!("n{i}"), Party::Blue));
            edges.push(("ego".to_string(), format!("n{i}")));
        }
        let mut g = PartyGraph::new(nodes, &edges).unwrap();
        for i in 0..5 {
            g.set_stance(g.node_id(&format!("n{i}")).unwrap(), Stance::Pro);
        }
        let inf: InfluenceVector<f64> = influence_def1(&g, g.node_id("ego").unwrap());
        assert_eq!(inf.d_in_1(), 1.0);
        assert_eq!(inf.d_out_1(), 0.0);
    }

    #[test]
    fn def1_path_middle_node() {
        // Parties (0,0,1,1), stances (1,0,0,1); node index 1 has
        // neighbors 0 (in, pro) and 2 (out, anti).
        let nodes = vec![
            ("0", Party::Blue),
            ("1", Party::Blue),
            ("2", Party::Red),
            ("3", Party::Red),
        ];
        let edges = vec![
            ("0".to_string(), "1".to_string()),
            ("1".to_string(), "2".to_string()),
            ("2".to_string(), "3".to_string()),
        ];
        let mut g = PartyGraph::new(nodes, &edges).unwrap();
        g.set_stance(NodeId(0), Stance::Pro);
        g.set_stance(NodeId(3), Stance::Pro);
        let inf: InfluenceVector<f64> = influence_def1(&g, NodeId(1));
        assert_eq!(inf.d_in_1(), 0.5);
        assert_eq!(inf.d_out_1(), -0.5);
    }

    #[test]
    fn def2_split_in_group_and_lone_out_neighbor() {
        let nodes = vec![
            ("ego", Party::Blue),
            ("a", Party::Blue),
            ("b", Party::Blue),
            ("c", Party::Blue),
            ("x", Party::Red),
        ];
        let edges: Vec<(String, String)> = ["a", "b", "c", "x"]
            .iter()
            .map(|n| ("ego".to_string(), n.to_string()))
            .collect();
        let mut g = PartyGraph::new(nodes, &edges).unwrap();
        g.set_stance(g.node_id("a").unwrap(), Stance::Pro);
        g.set_stance(g.node_id("b").unwrap(), Stance::Pro);
        let inf: InfluenceVector<f64> = influence_def2(&g, g.node_id("ego").unwrap());
        assert!((inf.d_in_1() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(inf.d_out_1(), -1.0);
    }

    #[test]
    fn def2_even_split_is_zero() {
        let nodes = vec![
            ("ego", Party::Blue),
            ("a", Party::Blue),
            ("b", Party::Blue),
        ];
        let edges = vec![
            ("ego".to_string(), "a".to_string()),
            ("ego".to_string(), "b".to_string()),
        ];
        let mut g = PartyGraph::new(nodes, &edges).unwrap();
        g.set_stance(g.node_id("a").unwrap(), Stance::Pro);
        let inf: InfluenceVector<f64> = influence_def2(&g, g.node_id("ego").unwrap());
        assert_eq!(inf.d_in_1(), 0.0);
    }

    #[test]
    fn isolated_node_is_all_zero() {
        let g = PartyGraph::new(vec![("solo", Party::Red)], &[]).unwrap();
        let v = g.node_id("solo").unwrap();
        assert_eq!(
            influence_def1::<f64>(&g, v),
            InfluenceVector::<f64>::zero()
        );
        assert_eq!(
            influence_def2::<f64>(&g, v),
            InfluenceVector::<f64>::zero()
        );
    }

    #[test]
    fn messages_worked_example() {
        let inf: InfluenceVector<f64> = influence_messages((70, 30), (7, 3));
        assert_eq!(inf.d_in_1(), 40.0 / 110.0);
        assert_eq!(inf.d_out_1(), 4.0 / 110.0);
    }

    #[test]
    fn messages_balanced_and_degenerate() {
        let balanced: InfluenceVector<f64> = influence_messages((4, 4), (9, 9));
        assert_eq!(balanced, InfluenceVector::zero());
        let empty: InfluenceVector<f64> = influence_messages((0, 0), (0, 0));
        assert_eq!(empty, InfluenceVector::zero());
        let skew: InfluenceVector<f64> = influence_messages((5, 0), (0, 5));
        assert_eq!(skew.d_in_1(), 0.5);
        assert_eq!(skew.d_out_1(), -0.5);
    }

    #[test]
    fn message_kind_on_graph_equals_def1() {
        let (g, ego) = worked_example_graph();
        let a: InfluenceVector<f64> = influence(&g, ego, InfluenceMeasureKind::MessageCount);
        let b: InfluenceVector<f64> =
            influence(&g, ego, InfluenceMeasureKind::DegreeNormalizedCount);
        assert_eq!(a, b);
    }
}

//! Property suites for the model invariants: antisymmetry, the
//! Definition-1 bound, brute-force equivalence on small graphs, logit
//! linearity, relabel symmetry, mean-field fixed points, and the score
//! finite-difference check.

use proptest::prelude::*;

use polarkit::estimation::{
    build_observations_case2, log_likelihood_at, score_at, JConvention, PanelRow, StancePanel,
    TransitionObservation,
};
use polarkit::graph::{NodeId, Party, PartyGraph, Stance};
use polarkit::influence::{influence_def1, influence_def2, InfluenceVector};
use polarkit::meanfield::{
    integrate_two_party, two_party_derivative, MeanFieldState, TwoPartyConfig,
};
use polarkit::model::ModelParams;
use polarkit::scalar::Real;
use polarkit::InfluenceMeasureKind;

/// Compact random-graph description: n nodes, upper-triangle edge mask,
/// party and stance bits.
#[derive(Debug, Clone)]
struct RandomGraph {
    n: usize,
    edge_bits: Vec<bool>,
    party_bits: Vec<bool>,
    stance_bits: Vec<bool>,
}

fn random_graph(max_n: usize) -> impl Strategy<Value = RandomGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(any::<bool>(), pairs),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(edge_bits, party_bits, stance_bits)| RandomGraph {
                n,
                edge_bits,
                party_bits,
                stance_bits,
            })
    })
}

/// Edge list of the upper-triangle mask, independent of PartyGraph's
/// adjacency bookkeeping.
fn edge_list(g: &RandomGraph) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..g.n {
        for j in (i + 1)..g.n {
            if g.edge_bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    edges
}

fn build(g: &RandomGraph) -> PartyGraph {
    let nodes: Vec<(String, Party)> = (0..g.n)
        .map(|i| {
            (
                i.to_string(),
                if g.party_bits[i] { Party::Red } else { Party::Blue },
            )
        })
        .collect();
    let edges: Vec<(String, String)> = edge_list(g)
        .into_iter()
        .map(|(i, j)| (i.to_string(), j.to_string()))
        .collect();
    let mut graph = PartyGraph::new(nodes, &edges).unwrap();
    for i in 0..g.n {
        graph.set_stance(
            NodeId(i as u32),
            if g.stance_bits[i] { Stance::Pro } else { Stance::Anti },
        );
    }
    graph
}

/// Brute-force influence oracle: walks the raw edge list instead of the
/// adjacency structure.
fn brute_force_counts(g: &RandomGraph, v: usize) -> (i64, i64, u32) {
    let mut net_in = 0i64;
    let mut net_out = 0i64;
    let mut degree = 0u32;
    for (a, b) in edge_list(g) {
        let u = if a == v {
            b
        } else if b == v {
            a
        } else {
            continue;
        };
        degree += 1;
        let same = g.party_bits[u] == g.party_bits[v];
        let sign = if g.stance_bits[u] { 1 } else { -1 };
        if same {
            net_in += sign;
        } else {
            net_out += sign;
        }
    }
    (net_in, net_out, degree)
}

proptest! {
    /// Antisymmetry holds for both measures on arbitrary graphs.
    #[test]
    fn antisymmetry(g in random_graph(12)) {
        let graph = build(&g);
        for v in graph.nodes() {
            for inf in [influence_def1::<f64>(&graph, v), influence_def2::<f64>(&graph, v)] {
                prop_assert_eq!(inf.d_in_0(), -inf.d_in_1());
                prop_assert_eq!(inf.d_out_0(), -inf.d_out_1());
            }
        }
    }

    /// Definition 1 shares one denominator, so the component magnitudes
    /// sum to at most one.
    #[test]
    fn definition1_bound(g in random_graph(16)) {
        let graph = build(&g);
        for v in graph.nodes() {
            let inf = influence_def1::<f64>(&graph, v);
            prop_assert!(inf.d_in_1().abs() + inf.d_out_1().abs() <= 1.0 + 1e-12);
        }
    }

    /// Definition 2 components are independently bounded by one.
    #[test]
    fn definition2_bound(g in random_graph(16)) {
        let graph = build(&g);
        for v in graph.nodes() {
            let inf = influence_def2::<f64>(&graph, v);
            prop_assert!(inf.d_in_1().abs() <= 1.0 && inf.d_out_1().abs() <= 1.0);
        }
    }

    /// On graphs of at most 8 nodes both measures match exhaustive
    /// enumeration over the raw edge list exactly.
    #[test]
    fn brute_force_equivalence(g in random_graph(8)) {
        let graph = build(&g);
        for v in graph.nodes() {
            let (net_in, net_out, degree) = brute_force_counts(&g, v.index());
            let d1 = influence_def1::<f64>(&graph, v);
            if degree == 0 {
                prop_assert_eq!(d1, InfluenceVector::zero());
            } else {
                prop_assert_eq!(d1.d_in_1(), net_in as f64 / degree as f64);
                prop_assert_eq!(d1.d_out_1(), net_out as f64 / degree as f64);
            }

            // Group-wise totals for Definition 2.
            let mut in_total = 0i64;
            let mut out_total = 0i64;
            for (a, b) in edge_list(&g) {
                let u = if a == v.index() { b } else if b == v.index() { a } else { continue };
                if g.party_bits[u] == g.party_bits[v.index()] {
                    in_total += 1;
                } else {
                    out_total += 1;
                }
            }
            let d2 = influence_def2::<f64>(&graph, v);
            let expect = |net: i64, total: i64| if total == 0 { 0.0 } else { net as f64 / total as f64 };
            prop_assert_eq!(d2.d_in_1(), expect(net_in, in_total));
            prop_assert_eq!(d2.d_out_1(), expect(net_out, out_total));
        }
    }

    /// The log-odds of switching equal the linear influence form to
    /// 1e-12 over the calibrated parameter ranges.
    #[test]
    fn logit_linearity(
        alpha in 0.0..4.0f64,
        beta in 0.0..4.0f64,
        delta in 0.0..1.0f64,
        d_in in -1.0..1.0f64,
        d_out in -1.0..1.0f64,
    ) {
        let params = ModelParams::new(alpha, beta, delta).unwrap();
        let inf = InfluenceVector::new(d_in, d_out);
        for stance in [Stance::Anti, Stance::Pro] {
            let p = params.transition_probability(&inf, stance);
            let linear = params.switch_logit(&inf, stance);
            prop_assert!((p.logit() - linear).abs() < 1e-12);
        }
    }

    /// Flipping every stance negates the stance-1 components exactly and
    /// swaps the two transition probabilities bitwise.
    #[test]
    fn stance_relabel_symmetry(
        g in random_graph(10),
        alpha in 0.0..5.0f64,
        beta in 0.0..5.0f64,
        delta in 0.0..2.0f64,
    ) {
        let graph = build(&g);
        let mut flipped = graph.clone();
        for v in graph.nodes() {
            flipped.set_stance(v, graph.stance(v).flipped());
        }
        let params = ModelParams::new(alpha, beta, delta).unwrap();
        for v in graph.nodes() {
            let orig = influence_def1::<f64>(&graph, v);
            let flip = influence_def1::<f64>(&flipped, v);
            prop_assert_eq!(flip.d_in_1(), -orig.d_in_1());
            prop_assert_eq!(flip.d_out_1(), -orig.d_out_1());
            prop_assert_eq!(
                params.transition_probability(&flip, Stance::Anti),
                params.transition_probability(&orig, Stance::Pro)
            );
            prop_assert_eq!(
                params.transition_probability(&flip, Stance::Pro),
                params.transition_probability(&orig, Stance::Anti)
            );
        }
    }

    /// theta = (1/2, 1/2) is an exact fixed point for every parameter
    /// combination under both measures.
    #[test]
    fn half_half_fixed_point(
        alpha in 0.0..8.0f64,
        beta in 0.0..8.0f64,
        delta in 0.0..4.0f64,
        r in 0.05..0.95f64,
        def2 in any::<bool>(),
    ) {
        let config = TwoPartyConfig {
            params: ModelParams::new(alpha, beta, delta).unwrap(),
            r,
            measure: if def2 {
                InfluenceMeasureKind::GroupFraction
            } else {
                InfluenceMeasureKind::DegreeNormalizedCount
            },
            theta0: (0.5, 0.5),
            epsilon: 0.01,
            t_end: 1.0,
        };
        let state = MeanFieldState { theta_blue: 0.5, theta_red: 0.5, t: 0.0 };
        let (db, dr) = two_party_derivative(&state, &config);
        prop_assert_eq!(db, 0.0);
        prop_assert_eq!(dr, 0.0);
    }

    /// Under Definition 2 equal initial prevalences keep the two groups
    /// on one identical trajectory.
    #[test]
    fn definition2_equal_start_identity(
        alpha in 0.0..6.0f64,
        beta in 0.0..6.0f64,
        delta in 0.0..3.0f64,
        r in 0.05..0.95f64,
        theta0 in 0.0..1.0f64,
    ) {
        let config = TwoPartyConfig {
            params: ModelParams::new(alpha, beta, delta).unwrap(),
            r,
            measure: InfluenceMeasureKind::GroupFraction,
            theta0: (theta0, theta0),
            epsilon: 0.01,
            t_end: 20.0,
        };
        for state in integrate_two_party(&config).unwrap() {
            prop_assert!((state.theta_blue - state.theta_red).abs() < 1e-12);
        }
    }

    /// The analytic score matches central finite differences of the
    /// log-likelihood to 1e-6 relative error.
    #[test]
    fn score_matches_finite_differences(
        b0 in -2.0..2.0f64,
        b1 in -3.0..3.0f64,
        b2 in -3.0..3.0f64,
        seed in 0u64..1000,
    ) {
        let truth = ModelParams::new(1.5, 0.5, 0.4).unwrap();
        let rows: Vec<TransitionObservation<f64>> =
            polarkit::estimation::sample_logistic_rows(&truth, 400, seed);
        let coefs = [b0, b1, b2];
        let analytic = score_at(&rows, coefs);
        let h = 1e-6;
        for i in 0..3 {
            let mut plus = coefs;
            plus[i] += h;
            let mut minus = coefs;
            minus[i] -= h;
            let numeric =
                (log_likelihood_at(&rows, plus) - log_likelihood_at(&rows, minus)) / (2.0 * h);
            let scale = analytic[i].abs().max(1.0);
            prop_assert!(
                (analytic[i] - numeric).abs() / scale < 1e-6,
                "component {}: analytic {} vs numeric {}",
                i,
                analytic[i],
                numeric
            );
        }
    }

    /// On a fully connected graph the Case-2 covariates agree with the
    /// Definition-1 influences up to the O(1/n) self-inclusion term.
    #[test]
    fn case2_matches_definition1_on_complete_graphs(
        n_blue in 3usize..20,
        n_red in 3usize..20,
        stance_seed in any::<u64>(),
    ) {
        let mut graph = PartyGraph::complete(n_blue, n_red);
        let n = graph.node_count();
        // Cheap deterministic stance pattern from the seed.
        for v in graph.nodes() {
            let bit = (stance_seed >> (v.index() % 64)) & 1 == 1;
            graph.set_stance(v, if bit { Stance::Pro } else { Stance::Anti });
        }
        let rows: Vec<PanelRow> = (0..2u32)
            .flat_map(|interval| {
                graph.nodes().map(move |v| PanelRow {
                    node_id: v.index().to_string(),
                    interval,
                    party: graph.party(v),
                    stance: graph.stance(v),
                })
            })
            .collect();
        let panel = StancePanel::new(rows).unwrap();
        let design = build_observations_case2::<f64>(&panel, JConvention::SwitchIndicator).unwrap();
        prop_assert_eq!(design.observations.len(), n);
        let bound = 2.0 / n as f64;
        for obs in &design.observations {
            let v = graph.node_id(obs.node_id.as_deref().unwrap()).unwrap();
            let inf = influence_def1::<f64>(&graph, v);
            let (x_in, x_out) = inf.toward(graph.stance(v).flipped());
            prop_assert!((obs.x_in - x_in).abs() <= bound,
                "in-component differs by {} > {}", (obs.x_in - x_in).abs(), bound);
            prop_assert!((obs.x_out - x_out).abs() <= bound);
        }
    }
}

//! Serializable run configurations: one struct per subcommand, written
//! into every output file's metadata header and parsed back by `rerun`.
//! Unknown keys are rejected everywhere.

use serde::{Deserialize, Serialize};

use polarkit::estimation::JConvention;
use polarkit::influence::InfluenceMeasureKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSource {
    /// Fully connected graph with round(red_fraction * n) red nodes.
    Complete { n: usize, red_fraction: f64 },
    /// Edge-list and node-attribute files.
    Files { edges: String, attrs: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitSpec {
    /// Independent per-party Bernoulli prevalences.
    Bernoulli { theta_blue: f64, theta_red: f64 },
    /// Explicit stance file with lines `node_id,stance`.
    File { path: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub graph: GraphSource,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    #[serde(default)]
    pub allow_outgroup_love: bool,
    pub measure: InfluenceMeasureKind,
    pub init: InitSpec,
    pub horizon_events: u64,
    pub record_every: u64,
    pub seed: u64,
    pub replicates: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanfieldConfig {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    #[serde(default)]
    pub allow_outgroup_love: bool,
    pub red_fraction: f64,
    pub measure: InfluenceMeasureKind,
    pub theta0_blue: f64,
    pub theta0_red: f64,
    pub epsilon: f64,
    pub t_end: f64,
    pub days_per_unit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultipartyConfig {
    /// Row i holds the emotions of group i toward every group.
    pub a: Vec<Vec<f64>>,
    pub r: Vec<f64>,
    pub delta: Vec<f64>,
    pub theta0: Vec<f64>,
    pub epsilon: f64,
    pub t_end: f64,
    pub days_per_unit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub observations: String,
    pub ridge: Option<f64>,
    #[serde(default)]
    pub intercept_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelEstimateConfig {
    pub panel: String,
    pub j_convention: JConvention,
    pub ridge: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SynthGraphConfig {
    Complete {
        n_blue: usize,
        n_red: usize,
    },
    TwoBlock {
        n_blue: usize,
        n_red: usize,
        p_within: f64,
        p_between: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthPanelConfig {
    pub n: usize,
    pub red_fraction: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub intervals: u32,
    pub theta0_blue: f64,
    pub theta0_red: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SynthObservationsConfig {
    /// Rows sampled directly from the logistic law with covariates
    /// uniform on [-1, 1], encoded as stance-0 egos.
    Direct {
        n: usize,
        alpha: f64,
        beta: f64,
        delta: f64,
        seed: u64,
    },
    /// Per-event records from a stochastic run on a complete graph.
    Sim {
        n: usize,
        red_fraction: f64,
        alpha: f64,
        beta: f64,
        delta: f64,
        measure: InfluenceMeasureKind,
        horizon_events: u64,
        theta0_blue: f64,
        theta0_red: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundtripConfig {
    pub n: usize,
    pub red_fraction: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub intervals: u32,
    pub theta0_blue: f64,
    pub theta0_red: f64,
    pub seeds: u32,
    pub base_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub delta: Vec<f64>,
    pub red_fraction: Vec<f64>,
    #[serde(default)]
    pub allow_outgroup_love: bool,
    pub theta0_blue: f64,
    pub theta0_red: f64,
    pub epsilon: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub id: String,
}

/// Canonical serialization embedded in metadata headers; `rerun`
/// round-trips through this exact representation.
pub fn to_canonical_toml<T: Serialize>(config: &T) -> String {
    toml::to_string(config).expect("configs serialize to TOML")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_toml_round_trips() {
        let cfg = SimulateConfig {
            graph: GraphSource::Complete {
                n: 2000,
                red_fraction: 0.3,
            },
            alpha: 3.75,
            beta: 0.25,
            delta: 0.63,
            allow_outgroup_love: false,
            measure: InfluenceMeasureKind::DegreeNormalizedCount,
            init: InitSpec::Bernoulli {
                theta_blue: 0.9,
                theta_red: 0.9,
            },
            horizon_events: 40_000,
            record_every: 200,
            seed: 42,
            replicates: 1,
        };
        let text = to_canonical_toml(&cfg);
        let parsed: SimulateConfig = toml::from_str(&text).unwrap();
        assert_eq!(parsed, cfg);
        // Re-serialization is byte-stable.
        assert_eq!(to_canonical_toml(&parsed), text);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = "panel = \"p.csv\"\nj_convention = \"switch-indicator\"\ntypo_key = 1\n";
        assert!(toml::from_str::<PanelEstimateConfig>(text).is_err());
    }
}

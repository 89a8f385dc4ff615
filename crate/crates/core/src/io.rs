//! Flat-file formats: graph edge/attribute lists, stance panels,
//! observation tables, trajectory CSVs, and the reproducibility
//! metadata header carried by every output file.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::estimation::{EstimationResult, PanelRow, StancePanel};
use crate::graph::{GraphError, Party, PartyGraph, Stance};
use crate::influence::InfluenceVector;
use crate::meanfield::{MeanFieldState, MultiPartyState};
use crate::sim::Trajectory;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Graph {
        path: String,
        source: GraphError,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn is_comment_or_blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn parse_party(path: &Path, line_no: usize, field: &str) -> Result<Party, IoError> {
    field
        .trim()
        .parse::<u8>()
        .ok()
        .and_then(Party::from_u8)
        .ok_or_else(|| parse_err(path, line_no, format!("party must be 0 or 1, got '{field}'")))
}

fn parse_stance(path: &Path, line_no: usize, field: &str) -> Result<Stance, IoError> {
    field
        .trim()
        .parse::<u8>()
        .ok()
        .and_then(Stance::from_u8)
        .ok_or_else(|| parse_err(path, line_no, format!("stance must be 0 or 1, got '{field}'")))
}

// --- graph files -----------------------------------------------------

/// Load a graph from an edge list ("u,v" per line) and a node-attribute
/// file ("node_id,party" per line). Blank and '#' lines are ignored.
/// Duplicate edges are dropped (the count is kept on the graph);
/// self-loops, unknown endpoints and non-binary parties are errors that
/// name the offending line.
pub fn load_graph(edge_path: &Path, attr_path: &Path) -> Result<PartyGraph, IoError> {
    let attrs = BufReader::new(File::open(attr_path)?);
    let mut nodes: Vec<(String, Party)> = Vec::new();
    for (idx, line) in attrs.lines().enumerate() {
        let line = line?;
        if is_comment_or_blank(&line) {
            continue;
        }
        let line_no = idx + 1;
        let (id, party) = line.split_once(',').ok_or_else(|| {
            parse_err(attr_path, line_no, "expected 'node_id,party'")
        })?;
        nodes.push((id.trim().to_string(), parse_party(attr_path, line_no, party)?));
    }

    let edge_file = BufReader::new(File::open(edge_path)?);
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    for (idx, line) in edge_file.lines().enumerate() {
        let line = line?;
        if is_comment_or_blank(&line) {
            continue;
        }
        let line_no = idx + 1;
        let (u, v) = line
            .split_once(',')
            .ok_or_else(|| parse_err(edge_path, line_no, "expected 'u,v'"))?;
        edges.push((u.trim().to_string(), v.trim().to_string()));
        edge_lines.push(line_no);
    }

    PartyGraph::new(nodes, &edges).map_err(|source| match &source {
        GraphError::SelfLoop { node } | GraphError::UnknownNode { node } => {
            let line = edges
                .iter()
                .position(|(u, v)| u == node || v == node)
                .map(|i| edge_lines[i])
                .unwrap_or(0);
            parse_err(edge_path, line, source.to_string())
        }
        GraphError::DuplicateNode { .. } => IoError::Graph {
            path: attr_path.display().to_string(),
            source,
        },
    })
}

/// Write the graph back out in the edge-list/attribute format; nodes in
/// index order, each edge once with the lower-index endpoint first.
pub fn save_graph(graph: &PartyGraph, edge_path: &Path, attr_path: &Path) -> Result<(), IoError> {
    let mut attrs = BufWriter::new(File::create(attr_path)?);
    for v in graph.nodes() {
        writeln!(attrs, "{},{}", graph.label(v), graph.party(v).as_u8())?;
    }
    let mut edges = BufWriter::new(File::create(edge_path)?);
    for u in graph.nodes() {
        for &v in graph.neighbors(u) {
            if u < v {
                writeln!(edges, "{},{}", graph.label(u), graph.label(v))?;
            }
        }
    }
    Ok(())
}

// --- stance panels ----------------------------------------------------

pub const PANEL_HEADER: &str = "node_id,interval,party,stance";

/// Read a stance panel CSV with header `node_id,interval,party,stance`.
pub fn read_panel(path: &Path) -> Result<StancePanel, IoError> {
    let file = BufReader::new(File::open(path)?);
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, line) in file.lines().enumerate() {
        let line = line?;
        if is_comment_or_blank(&line) {
            continue;
        }
        let line_no = idx + 1;
        if !saw_header {
            if line.trim() != PANEL_HEADER {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected header '{PANEL_HEADER}'"),
                ));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(parse_err(path, line_no, "expected 4 fields"));
        }
        let interval = fields[1].trim().parse::<u32>().map_err(|_| {
            parse_err(path, line_no, format!("bad interval '{}'", fields[1]))
        })?;
        rows.push(PanelRow {
            node_id: fields[0].trim().to_string(),
            interval,
            party: parse_party(path, line_no, fields[2])?,
            stance: parse_stance(path, line_no, fields[3])?,
        });
    }
    // A file with no content lines at all parses as an empty panel; the
    // estimator reports the missing data. A file with content must lead
    // with the header.
    StancePanel::new(rows).map_err(|e| IoError::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_panel<W: Write>(w: &mut W, panel: &StancePanel) -> Result<(), IoError> {
    writeln!(w, "{PANEL_HEADER}")?;
    for row in panel.rows() {
        writeln!(
            w,
            "{},{},{},{}",
            row.node_id,
            row.interval,
            row.party.as_u8(),
            row.stance.as_u8()
        )?;
    }
    Ok(())
}

// --- case-1 observation tables -----------------------------------------

pub const OBSERVATIONS_HEADER: &str =
    "node_id,time_index,party,stance_t,stance_t1,d_in_1,d_out_1";

/// One row of the Case-1 input schema: the ego's stance at two adjacent
/// time instants plus its observed influence components (the stance-0
/// partners are the negations and are not stored).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationRow {
    pub node_id: String,
    pub time_index: u32,
    pub party: Party,
    pub stance_t: Stance,
    pub stance_t1: Stance,
    pub d_in_1: f64,
    pub d_out_1: f64,
}

impl ObservationRow {
    pub fn record(&self) -> (Stance, Stance, InfluenceVector<f64>) {
        (
            self.stance_t,
            self.stance_t1,
            InfluenceVector::new(self.d_in_1, self.d_out_1),
        )
    }
}

pub fn read_observations(path: &Path) -> Result<Vec<ObservationRow>, IoError> {
    let file = BufReader::new(File::open(path)?);
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, line) in file.lines().enumerate() {
        let line = line?;
        if is_comment_or_blank(&line) {
            continue;
        }
        let line_no = idx + 1;
        if !saw_header {
            if line.trim() != OBSERVATIONS_HEADER {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected header '{OBSERVATIONS_HEADER}'"),
                ));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(parse_err(path, line_no, "expected 7 fields"));
        }
        let time_index = fields[1].trim().parse::<u32>().map_err(|_| {
            parse_err(path, line_no, format!("bad time_index '{}'", fields[1]))
        })?;
        let float = |i: usize| -> Result<f64, IoError> {
            fields[i].trim().parse::<f64>().map_err(|_| {
                parse_err(path, line_no, format!("bad float '{}'", fields[i]))
            })
        };
        rows.push(ObservationRow {
            node_id: fields[0].trim().to_string(),
            time_index,
            party: parse_party(path, line_no, fields[2])?,
            stance_t: parse_stance(path, line_no, fields[3])?,
            stance_t1: parse_stance(path, line_no, fields[4])?,
            d_in_1: float(5)?,
            d_out_1: float(6)?,
        });
    }
    // A file with no content lines parses as zero observations; the
    // estimator reports the insufficiency.
    Ok(rows)
}

pub fn write_observations<W: Write>(w: &mut W, rows: &[ObservationRow]) -> Result<(), IoError> {
    writeln!(w, "{OBSERVATIONS_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.node_id,
            r.time_index,
            r.party.as_u8(),
            r.stance_t.as_u8(),
            r.stance_t1.as_u8(),
            r.d_in_1,
            r.d_out_1
        )?;
    }
    Ok(())
}

// --- trajectory CSVs ----------------------------------------------------

/// Simulation trajectory: `event,t,theta_blue,theta_red` with t in model
/// time units (events divided by the node count).
pub fn write_sim_trajectory<W: Write>(
    w: &mut W,
    trajectory: &Trajectory<f64>,
    node_count: usize,
) -> Result<(), IoError> {
    writeln!(w, "event,t,theta_blue,theta_red")?;
    for row in &trajectory.rows {
        writeln!(
            w,
            "{},{},{},{}",
            row.event,
            row.event as f64 / node_count as f64,
            row.theta_blue,
            row.theta_red
        )?;
    }
    Ok(())
}

/// Two-party mean-field trajectory: `t,t_days,theta_blue,theta_red`;
/// `t_days` is the presentation-scaled time axis.
pub fn write_meanfield_trajectory<W: Write>(
    w: &mut W,
    states: &[MeanFieldState<f64>],
    days_per_unit: f64,
) -> Result<(), IoError> {
    writeln!(w, "t,t_days,theta_blue,theta_red")?;
    for s in states {
        writeln!(
            w,
            "{},{},{},{}",
            s.t,
            s.t * days_per_unit,
            s.theta_blue,
            s.theta_red
        )?;
    }
    Ok(())
}

/// Multi-party trajectory in long format: `t,t_days,group,theta`.
pub fn write_multiparty_trajectory<W: Write>(
    w: &mut W,
    states: &[MultiPartyState<f64>],
    days_per_unit: f64,
) -> Result<(), IoError> {
    writeln!(w, "t,t_days,group,theta")?;
    for s in states {
        for (g, theta) in s.theta.iter().enumerate() {
            writeln!(w, "{},{},{},{}", s.t, s.t * days_per_unit, g, theta)?;
        }
    }
    Ok(())
}

// --- estimation result documents -----------------------------------------

/// Emit the fitted parameters as a flat `key = value` document.
pub fn write_result_doc<W: Write>(
    w: &mut W,
    result: &EstimationResult<f64>,
    extras: &[(&str, String)],
) -> Result<(), IoError> {
    writeln!(w, "alpha_hat = {}", result.alpha_hat)?;
    writeln!(w, "beta_hat = {}", result.beta_hat)?;
    writeln!(w, "delta_hat = {}", result.delta_hat)?;
    writeln!(w, "se_alpha = {}", result.std_errors[0])?;
    writeln!(w, "se_beta = {}", result.std_errors[1])?;
    writeln!(w, "se_delta = {}", result.std_errors[2])?;
    writeln!(w, "pseudo_r2_mcfadden = {}", result.pseudo_r2)?;
    writeln!(w, "log_likelihood = {}", result.log_likelihood)?;
    writeln!(w, "n_obs = {}", result.n_obs)?;
    writeln!(w, "converged = {}", result.converged)?;
    writeln!(w, "iterations = {}", result.iterations)?;
    for (key, value) in extras {
        writeln!(w, "{key} = {value}")?;
    }
    Ok(())
}

// --- reproducibility metadata ------------------------------------------

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of a canonical config string.
pub fn config_sha256(config: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write the metadata header: toolkit version, command, config hash and
/// the full canonical config, all as '#' comment lines. The header alone
/// suffices to re-run the command.
pub fn write_metadata<W: Write>(w: &mut W, command: &str, config_toml: &str) -> Result<(), IoError> {
    writeln!(w, "# polarkit-version: {TOOLKIT_VERSION}")?;
    writeln!(w, "# command: {command}")?;
    writeln!(w, "# config-sha256: {}", config_sha256(config_toml))?;
    writeln!(w, "# config-begin")?;
    for line in config_toml.lines() {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "# config-end")?;
    Ok(())
}

/// A parsed metadata header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub config_toml: String,
}

/// Extract the metadata header from an output file.
pub fn read_metadata(path: &Path) -> Result<Metadata, IoError> {
    let file = BufReader::new(File::open(path)?);
    let mut version = None;
    let mut command = None;
    let mut hash = None;
    let mut config_lines: Vec<String> = Vec::new();
    let mut in_config = false;
    for line in file.lines() {
        let line = line?;
        let Some(body) = line.strip_prefix('#') else {
            break;
        };
        let body = body.strip_prefix(' ').unwrap_or(body);
        if let Some(v) = body.strip_prefix("polarkit-version: ") {
            version = Some(v.to_string());
        } else if let Some(c) = body.strip_prefix("command: ") {
            command = Some(c.to_string());
        } else if let Some(h) = body.strip_prefix("config-sha256: ") {
            hash = Some(h.to_string());
        } else if body.trim() == "config-begin" {
            in_config = true;
        } else if body.trim() == "config-end" {
            in_config = false;
        } else if in_config {
            config_lines.push(body.to_string());
        }
    }
    let missing = |what: &str| IoError::Format {
        path: path.display().to_string(),
        message: format!("metadata header is missing '{what}'"),
    };
    let config_toml = config_lines.join("\n") + "\n";
    let meta = Metadata {
        version: version.ok_or_else(|| missing("polarkit-version"))?,
        command: command.ok_or_else(|| missing("command"))?,
        config_sha256: hash.ok_or_else(|| missing("config-sha256"))?,
        config_toml,
    };
    if config_sha256(&meta.config_toml) != meta.config_sha256 {
        return Err(IoError::Format {
            path: path.display().to_string(),
            message: "config hash does not match the embedded config".into(),
        });
    }
    Ok(meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn temp_dir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "polarkit-io-test-{}-{:?}",
            std::process::id(),
            std::thread::current().id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn write_file(path: &Path, content: &str) {
        let mut f = File::create(path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
    }

    #[test]
    fn loads_three_node_path() {
        let dir = temp_dir();
        let edges = dir.join("edges.csv");
        let attrs = dir.join("attrs.csv");
        write_file(&edges, "a,b\nb,c\n");
        write_file(&attrs, "a,0\nb,0\nc,1\n");
        let g = load_graph(&edges, &attrs).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.party(g.node_id("c").unwrap()), Party::Red);
    }

    #[test]
    fn self_loop_error_names_line_one() {
        let dir = temp_dir();
        let edges = dir.join("loop-edges.csv");
        let attrs = dir.join("loop-attrs.csv");
        write_file(&edges, "a,a\n");
        write_file(&attrs, "a,0\n");
        let err = load_graph(&edges, &attrs).unwrap_err();
        match err {
            IoError::Parse { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("self-loop"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_binary_party_is_rejected_with_line() {
        let dir = temp_dir();
        let edges = dir.join("p-edges.csv");
        let attrs = dir.join("p-attrs.csv");
        write_file(&edges, "a,b\n");
        write_file(&attrs, "a,0\nb,2\n");
        let err = load_graph(&edges, &attrs).unwrap_err();
        match err {
            IoError::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("party"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn graph_round_trips_through_save_and_load() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = PartyGraph::two_block(60, 40, 0.2, 0.05, &mut rng);
        let dir = temp_dir();
        let edges = dir.join("rt-edges.csv");
        let attrs = dir.join("rt-attrs.csv");
        save_graph(&g, &edges, &attrs).unwrap();
        let g2 = load_graph(&edges, &attrs).unwrap();
        assert_eq!(g.node_count(), g2.node_count());
        assert_eq!(g.edge_count(), g2.edge_count());
        for v in g.nodes() {
            assert_eq!(g.label(v), g2.label(v));
            assert_eq!(g.party(v), g2.party(v));
            assert_eq!(g.neighbors(v), g2.neighbors(v));
        }
        // Idempotence: a second save emits identical bytes.
        let edges2 = dir.join("rt-edges-2.csv");
        let attrs2 = dir.join("rt-attrs-2.csv");
        save_graph(&g2, &edges2, &attrs2).unwrap();
        assert_eq!(
            std::fs::read(&edges).unwrap(),
            std::fs::read(&edges2).unwrap()
        );
        assert_eq!(
            std::fs::read(&attrs).unwrap(),
            std::fs::read(&attrs2).unwrap()
        );
    }

    #[test]
    fn panel_round_trip_skips_metadata_comments() {
        let rows = vec![
            PanelRow {
                node_id: "u1".into(),
                interval: 0,
                party: Party::Blue,
                stance: Stance::Pro,
            },
            PanelRow {
                node_id: "u1".into(),
                interval: 1,
                party: Party::Blue,
                stance: Stance::Anti,
            },
        ];
        let panel = StancePanel::new(rows).unwrap();
        let mut buf = Vec::new();
        write_metadata(&mut buf, "synth", "kind = \"panel\"\n").unwrap();
        write_panel(&mut buf, &panel).unwrap();
        let dir = temp_dir();
        let path = dir.join("panel.csv");
        std::fs::write(&path, &buf).unwrap();
        let loaded = read_panel(&path).unwrap();
        assert_eq!(loaded, panel);
    }

    #[test]
    fn observation_rows_round_trip() {
        let rows = vec![ObservationRow {
            node_id: "n7".into(),
            time_index: 3,
            party: Party::Red,
            stance_t: Stance::Anti,
            stance_t1: Stance::Pro,
            d_in_1: 0.36363636363636365,
            d_out_1: -0.25,
        }];
        let mut buf = Vec::new();
        write_observations(&mut buf, &rows).unwrap();
        let dir = temp_dir();
        let path = dir.join("obs.csv");
        std::fs::write(&path, &buf).unwrap();
        let loaded = read_observations(&path).unwrap();
        assert_eq!(loaded, rows);
    }

    #[test]
    fn metadata_header_round_trips_with_matching_hash() {
        let config = "alpha = 3.75\nbeta = 0.25\n[nested]\nx = 1\n";
        let mut buf = Vec::new();
        write_metadata(&mut buf, "meanfield", config).unwrap();
        buf.extend_from_slice(b"t,theta\n0,0.9\n");
        let dir = temp_dir();
        let path = dir.join("meta.csv");
        std::fs::write(&path, &buf).unwrap();
        let meta = read_metadata(&path).unwrap();
        assert_eq!(meta.command, "meanfield");
        assert_eq!(meta.version, TOOLKIT_VERSION);
        assert_eq!(meta.config_toml, config);
    }

    #[test]
    fn tampered_config_block_fails_the_hash_check() {
        let mut buf = Vec::new();
        write_metadata(&mut buf, "meanfield", "alpha = 1\n").unwrap();
        let text = String::from_utf8(buf).unwrap().replace("alpha = 1", "alpha = 2");
        let dir = temp_dir();
        let path = dir.join("tampered.csv");
        std::fs::write(&path, text).unwrap();
        assert!(read_metadata(&path).is_err());
    }
}

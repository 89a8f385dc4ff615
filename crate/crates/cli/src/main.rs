//! polarkit: simulate, integrate and estimate affective-polarization
//! dynamics from the command line.

mod configs;
mod error;
mod exec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polarkit::estimation::JConvention;
use polarkit::experiments::{calibrated, IssueParams};
use polarkit::influence::InfluenceMeasureKind;
use polarkit::meanfield::{DEFAULT_DAYS_PER_UNIT, DEFAULT_EPSILON, DEFAULT_T_END};

use configs::*;
use error::{Category, CliError};

#[derive(Parser)]
#[command(
    name = "polarkit",
    version,
    about = "Simulation and inference toolkit for affective-polarization dynamics",
    after_help = "Every output file starts with a '# ...' metadata header that suffices to \
                  reproduce it via `polarkit rerun`."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    /// Net stance counts normalized by degree.
    Def1,
    /// Net stance fraction within each neighbor group.
    Def2,
    /// Message-count variant (one message per neighbor on graphs).
    Messages,
}

impl From<MeasureArg> for InfluenceMeasureKind {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Def1 => InfluenceMeasureKind::DegreeNormalizedCount,
            MeasureArg::Def2 => InfluenceMeasureKind::GroupFraction,
            MeasureArg::Messages => InfluenceMeasureKind::MessageCount,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum JConventionArg {
    /// One row per node, J flags any stance change (the formal
    /// procedure; default).
    SwitchIndicator,
    /// Only rows with a change, J flags its direction (sensitivity
    /// variant).
    TransitionDirection,
}

impl From<JConventionArg> for JConvention {
    fn from(j: JConventionArg) -> Self {
        match j {
            JConventionArg::SwitchIndicator => JConvention::SwitchIndicator,
            JConventionArg::TransitionDirection => JConvention::TransitionDirection,
        }
    }
}

/// Calibrated issue/cohort parameter sets (alpha, beta, delta, r,
/// theta0) shipped with the toolkit.
#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    MaskingAllUsers,
    MaskingPartisans,
    LockdownsAllUsers,
    LockdownsPartisans,
    TweetMaskingAllUsers,
    TweetMaskingPartisans,
    TweetLockdownsAllUsers,
    TweetLockdownsPartisans,
}

impl PresetArg {
    fn params(self) -> IssueParams {
        match self {
            PresetArg::MaskingAllUsers => calibrated::MASKING_ALL_USERS,
            PresetArg::MaskingPartisans => calibrated::MASKING_PARTISANS,
            PresetArg::LockdownsAllUsers => calibrated::LOCKDOWNS_ALL_USERS,
            PresetArg::LockdownsPartisans => calibrated::LOCKDOWNS_PARTISANS,
            PresetArg::TweetMaskingAllUsers => calibrated::TWEET_MASKING_ALL_USERS,
            PresetArg::TweetMaskingPartisans => calibrated::TWEET_MASKING_PARTISANS,
            PresetArg::TweetLockdownsAllUsers => calibrated::TWEET_LOCKDOWNS_ALL_USERS,
            PresetArg::TweetLockdownsPartisans => calibrated::TWEET_LOCKDOWNS_PARTISANS,
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    /// Fully connected graph with this many nodes.
    #[arg(long, conflicts_with_all = ["edges", "attrs"])]
    complete: Option<usize>,
    /// Fraction of red nodes for --complete.
    #[arg(long, requires = "complete")]
    red_fraction: Option<f64>,
    /// Edge-list file ("u,v" per line).
    #[arg(long, requires = "attrs")]
    edges: Option<PathBuf>,
    /// Node-attribute file ("node_id,party" per line).
    #[arg(long, requires = "edges")]
    attrs: Option<PathBuf>,
}

impl GraphArgs {
    fn to_config(&self) -> Result<GraphSource, CliError> {
        match (self.complete, &self.edges, &self.attrs) {
            (Some(n), None, None) => Ok(GraphSource::Complete {
                n,
                red_fraction: self.red_fraction.ok_or_else(|| {
                    CliError::usage("--complete requires --red-fraction")
                })?,
            }),
            (None, Some(edges), Some(attrs)) => Ok(GraphSource::Files {
                edges: edges.display().to_string(),
                attrs: attrs.display().to_string(),
            }),
            _ => Err(CliError::usage(
                "specify a graph via --complete N --red-fraction R or --edges/--attrs",
            )),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    delta: f64,
    /// Permit negative beta (out-group love counterfactuals).
    #[arg(long)]
    allow_outgroup_love: bool,
    #[arg(long, value_enum, default_value = "def1")]
    measure: MeasureArg,
    /// Initial stance-1 prevalence among blue nodes.
    #[arg(long, conflicts_with = "init_file")]
    theta0_blue: Option<f64>,
    /// Initial stance-1 prevalence among red nodes.
    #[arg(long, conflicts_with = "init_file")]
    theta0_red: Option<f64>,
    /// Explicit initial stances ("node_id,stance" per line).
    #[arg(long)]
    init_file: Option<PathBuf>,
    /// Number of node-update events; one model time unit is n events.
    #[arg(long, conflicts_with = "t_end")]
    horizon_events: Option<u64>,
    /// Horizon in model time units (alternative to --horizon-events).
    #[arg(long)]
    t_end: Option<f64>,
    /// Events between trajectory snapshots.
    #[arg(long, default_value_t = 100)]
    record_every: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Independent replicates; more than one writes per-replicate files
    /// plus the ensemble mean at --out.
    #[arg(long, default_value_t = 1)]
    replicates: u32,
    #[arg(long)]
    out: PathBuf,
}

impl SimulateArgs {
    fn to_config(&self) -> Result<SimulateConfig, CliError> {
        let graph = self.graph.to_config()?;
        let init = match (&self.init_file, self.theta0_blue, self.theta0_red) {
            (Some(path), None, None) => InitSpec::File {
                path: path.display().to_string(),
            },
            (None, Some(b), Some(r)) => InitSpec::Bernoulli {
                theta_blue: b,
                theta_red: r,
            },
            _ => {
                return Err(CliError::usage(
                    "specify initial stances via --theta0-blue/--theta0-red or --init-file",
                ))
            }
        };
        let n = match &graph {
            GraphSource::Complete { n, .. } => Some(*n),
            GraphSource::Files { .. } => None,
        };
        let horizon_events = match (self.horizon_events, self.t_end) {
            (Some(h), None) => h,
            (None, Some(t)) => {
                let n = n.ok_or_else(|| {
                    CliError::usage("--t-end needs --complete; use --horizon-events with files")
                })?;
                (t * n as f64).ceil() as u64
            }
            _ => return Err(CliError::usage("specify --horizon-events or --t-end")),
        };
        Ok(SimulateConfig {
            graph,
            alpha: self.alpha,
            beta: self.beta,
            delta: self.delta,
            allow_outgroup_love: self.allow_outgroup_love,
            measure: self.measure.into(),
            init,
            horizon_events,
            record_every: self.record_every,
            seed: self.seed,
            replicates: self.replicates,
        })
    }
}

#[derive(Args)]
struct MeanfieldArgs {
    /// Calibrated issue/cohort parameter set; individual flags override
    /// its fields.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    allow_outgroup_love: bool,
    /// Fraction of red nodes, in (0, 1).
    #[arg(long)]
    red_fraction: Option<f64>,
    #[arg(long, value_enum, default_value = "def1")]
    measure: MeasureArg,
    #[arg(long)]
    theta0_blue: Option<f64>,
    #[arg(long)]
    theta0_red: Option<f64>,
    /// Euler step size.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_T_END)]
    t_end: f64,
    /// Display scale for the auxiliary t_days output column.
    #[arg(long, default_value_t = DEFAULT_DAYS_PER_UNIT)]
    days_per_unit: f64,
    #[arg(long)]
    out: PathBuf,
}

impl MeanfieldArgs {
    fn to_config(&self) -> Result<MeanfieldConfig, CliError> {
        let preset = self.preset.map(PresetArg::params);
        let pick = |flag: Option<f64>, preset_value: Option<f64>, name: &str| {
            flag.or(preset_value).ok_or_else(|| {
                CliError::usage(format!("--{name} is required without --preset"))
            })
        };
        Ok(MeanfieldConfig {
            alpha: pick(self.alpha, preset.map(|p| p.alpha), "alpha")?,
            beta: pick(self.beta, preset.map(|p| p.beta), "beta")?,
            delta: pick(self.delta, preset.map(|p| p.delta), "delta")?,
            allow_outgroup_love: self.allow_outgroup_love,
            red_fraction: pick(self.red_fraction, preset.map(|p| p.r), "red-fraction")?,
            measure: self.measure.into(),
            theta0_blue: pick(self.theta0_blue, preset.map(|p| p.theta0), "theta0-blue")?,
            theta0_red: pick(self.theta0_red, preset.map(|p| p.theta0), "theta0-red")?,
            epsilon: self.epsilon,
            t_end: self.t_end,
            days_per_unit: self.days_per_unit,
        })
    }
}

#[derive(Args)]
struct MultipartyArgs {
    /// TOML config with a (matrix), r, delta, theta0, epsilon, t_end,
    /// days_per_unit.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    /// Observation CSV (node_id,time_index,party,stance_t,stance_t1,d_in_1,d_out_1).
    #[arg(long)]
    observations: PathBuf,
    /// L2 penalty on the slope coefficients (rescues separated designs).
    #[arg(long)]
    ridge: Option<f64>,
    /// Fit only the inertia term: delta = -logit(switch rate).
    #[arg(long)]
    intercept_only: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PanelEstimateArgs {
    /// Stance panel CSV (node_id,interval,party,stance).
    #[arg(long)]
    panel: PathBuf,
    #[arg(long, value_enum, default_value = "switch-indicator")]
    j_convention: JConventionArg,
    #[arg(long)]
    ridge: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Generate a graph (writes PREFIX-edges.csv and PREFIX-attrs.csv).
    Graph {
        #[arg(long, value_enum, default_value = "complete")]
        kind: SynthGraphKindArg,
        #[arg(long)]
        n_blue: usize,
        #[arg(long)]
        n_red: usize,
        /// Within-party edge probability (two-block only).
        #[arg(long, default_value_t = 0.1)]
        p_within: f64,
        /// Cross-party edge probability (two-block only).
        #[arg(long, default_value_t = 0.02)]
        p_between: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a stance panel from the model with known parameters.
    Panel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        red_fraction: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        delta: f64,
        /// Number of interval transitions (the panel gets intervals + 1
        /// snapshots).
        #[arg(long, default_value_t = 20)]
        intervals: u32,
        #[arg(long, default_value_t = 0.9)]
        theta0_blue: f64,
        #[arg(long, default_value_t = 0.9)]
        theta0_red: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate Case-1 observation rows with known parameters.
    Observations {
        #[arg(long, value_enum, default_value = "direct")]
        kind: SynthObsKindArg,
        /// Row count (direct) or node count (sim).
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.3)]
        red_fraction: f64,
        #[arg(long, value_enum, default_value = "def1")]
        measure: MeasureArg,
        #[arg(long, default_value_t = 20_000)]
        horizon_events: u64,
        #[arg(long, default_value_t = 0.5)]
        theta0_blue: f64,
        #[arg(long, default_value_t = 0.5)]
        theta0_red: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthGraphKindArg {
    Complete,
    TwoBlock,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthObsKindArg {
    /// Sample the logistic law directly with uniform covariates.
    Direct,
    /// Record per-event transitions from a stochastic simulation.
    Sim,
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 0.3)]
    red_fraction: f64,
    #[arg(long, default_value_t = 3.75)]
    alpha: f64,
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    #[arg(long, default_value_t = 0.63)]
    delta: f64,
    #[arg(long, default_value_t = 20)]
    intervals: u32,
    #[arg(long, default_value_t = 0.9)]
    theta0_blue: f64,
    #[arg(long, default_value_t = 0.9)]
    theta0_red: f64,
    /// Independent synthesize-and-refit replicates.
    #[arg(long, default_value_t = 1)]
    seeds: u32,
    #[arg(long, default_value_t = 42)]
    base_seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Grid as comma-separated values ("1,2,3") or "start:stop:step".
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    beta: String,
    #[arg(long)]
    delta: String,
    #[arg(long)]
    red_fraction: String,
    #[arg(long)]
    allow_outgroup_love: bool,
    #[arg(long, default_value_t = 0.6)]
    theta0_blue: f64,
    #[arg(long, default_value_t = 0.6)]
    theta0_red: f64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_T_END)]
    t_end: f64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |msg: &str| CliError::usage(format!("bad grid '{spec}': {msg}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("non-numeric bound"))?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || stop < start {
            return Err(bad("need stop >= start and step > 0"));
        }
        let mut grid = Vec::new();
        let mut k = 0u32;
        loop {
            let v = start + step * k as f64;
            if v > stop + 1e-12 {
                break;
            }
            grid.push(v);
            k += 1;
        }
        Ok(grid)
    } else {
        spec.split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("non-numeric entry"))
    }
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite id, or "all".
    #[arg(long)]
    id: String,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RerunArgs {
    /// Any output file carrying a polarkit metadata header.
    #[arg(long)]
    from: PathBuf,
    /// Where to write the reproduced output (same derivation rules as
    /// the original command).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Stochastic simulation on a party-labeled graph.
    Simulate(SimulateArgs),
    /// Two-party mean-field trajectory (forward Euler).
    Meanfield(MeanfieldArgs),
    /// N-party mean-field trajectory from an emotion matrix.
    Multiparty(MultipartyArgs),
    /// Fit (alpha, beta, delta) from Case-1 observation rows.
    Estimate(EstimateArgs),
    /// Fit (alpha, beta, delta) from a stance panel (Case 2).
    PanelEstimate(PanelEstimateArgs),
    /// Generate synthetic graphs, panels and observations.
    Synth {
        #[command(subcommand)]
        what: SynthCommand,
    },
    /// Synthesize a panel with known parameters, refit, and report
    /// recovery.
    Roundtrip(RoundtripArgs),
    /// Classify mean-field endpoints over a parameter grid.
    Sweep(SweepArgs),
    /// Run a scenario suite and write trajectories plus a pass/fail
    /// report.
    Suite(SuiteArgs),
    /// Reproduce an output from its metadata header.
    Rerun(RerunArgs),
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => exec::run_simulate(&args.to_config()?, &args.out),
        Command::Meanfield(args) => exec::run_meanfield(&args.to_config()?, &args.out),
        Command::Multiparty(args) => {
            let text = std::fs::read_to_string(&args.config)?;
            let cfg: MultipartyConfig = toml::from_str(&text).map_err(|e| CliError {
                category: Category::Parse,
                message: format!("{}: {e}", args.config.display()),
            })?;
            exec::run_multiparty(&cfg, &args.out)
        }
        Command::Estimate(args) => {
            let cfg = EstimateConfig {
                observations: args.observations.display().to_string(),
                ridge: args.ridge,
                intercept_only: args.intercept_only,
            };
            exec::run_estimate(&cfg, &args.out)
        }
        Command::PanelEstimate(args) => {
            let cfg = PanelEstimateConfig {
                panel: args.panel.display().to_string(),
                j_convention: args.j_convention.into(),
                ridge: args.ridge,
            };
            exec::run_panel_estimate(&cfg, &args.out)
        }
        Command::Synth { what } => match what {
            SynthCommand::Graph {
                kind,
                n_blue,
                n_red,
                p_within,
                p_between,
                seed,
                out,
            } => {
                let cfg = match kind {
                    SynthGraphKindArg::Complete => SynthGraphConfig::Complete { n_blue, n_red },
                    SynthGraphKindArg::TwoBlock => SynthGraphConfig::TwoBlock {
                        n_blue,
                        n_red,
                        p_within,
                        p_between,
                        seed,
                    },
                };
                exec::run_synth_graph(&cfg, &out)
            }
            SynthCommand::Panel {
                n,
                red_fraction,
                alpha,
                beta,
                delta,
                intervals,
                theta0_blue,
                theta0_red,
                seed,
                out,
            } => {
                let cfg = SynthPanelConfig {
                    n,
                    red_fraction,
                    alpha,
                    beta,
                    delta,
                    intervals,
                    theta0_blue,
                    theta0_red,
                    seed,
                };
                exec::run_synth_panel(&cfg, &out)
            }
            SynthCommand::Observations {
                kind,
                n,
                alpha,
                beta,
                delta,
                red_fraction,
                measure,
                horizon_events,
                theta0_blue,
                theta0_red,
                seed,
                out,
            } => {
                let cfg = match kind {
                    SynthObsKindArg::Direct => SynthObservationsConfig::Direct {
                        n,
                        alpha,
                        beta,
                        delta,
                        seed,
                    },
                    SynthObsKindArg::Sim => SynthObservationsConfig::Sim {
                        n,
                        red_fraction,
                        alpha,
                        beta,
                        delta,
                        measure: measure.into(),
                        horizon_events,
                        theta0_blue,
                        theta0_red,
                        seed,
                    },
                };
                exec::run_synth_observations(&cfg, &out)
            }
        },
        Command::Roundtrip(args) => {
            let cfg = RoundtripConfig {
                n: args.n,
                red_fraction: args.red_fraction,
                alpha: args.alpha,
                beta: args.beta,
                delta: args.delta,
                intervals: args.intervals,
                theta0_blue: args.theta0_blue,
                theta0_red: args.theta0_red,
                seeds: args.seeds,
                base_seed: args.base_seed,
            };
            if exec::run_roundtrip(&cfg, &args.out)? {
                Ok(())
            } else {
                Err(CliError::checks_failed(
                    "parameter recovery missed the 3-standard-error bound on too many seeds",
                ))
            }
        }
        Command::Sweep(args) => {
            let cfg = SweepConfig {
                alpha: parse_grid(&args.alpha)?,
                beta: parse_grid(&args.beta)?,
                delta: parse_grid(&args.delta)?,
                red_fraction: parse_grid(&args.red_fraction)?,
                allow_outgroup_love: args.allow_outgroup_love,
                theta0_blue: args.theta0_blue,
                theta0_red: args.theta0_red,
                epsilon: args.epsilon,
                t_end: args.t_end,
            };
            exec::run_sweep(&cfg, &args.out)
        }
        Command::Suite(args) => {
            let cfg = SuiteConfig { id: args.id };
            if exec::run_suite(&cfg, &args.out_dir)? {
                Ok(())
            } else {
                Err(CliError::checks_failed("one or more suite checks failed"))
            }
        }
        Command::Rerun(args) => exec::run_rerun(&args.from, &args.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.category.exit_code())
        }
    }
}

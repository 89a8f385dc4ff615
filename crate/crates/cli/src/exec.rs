//! Command implementations: build core types from configs, run, and
//! write metadata-headed outputs.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use polarkit::estimation::{
    build_observations_case1, build_observations_case2, fit_intercept_only, fit_logistic,
    sample_logistic_rows, EstimationResult, JConvention, SolverOptions,
};
use polarkit::experiments::{
    classify_two_party, run_figure_suite, SuiteRun, SuiteTrajectory, SUITE_IDS,
};
use polarkit::graph::{Party, PartyGraph, Stance};
use polarkit::influence::InfluenceMeasureKind;
use polarkit::io::{
    load_graph, read_metadata, read_observations, read_panel, save_graph, write_meanfield_trajectory,
    write_metadata, write_multiparty_trajectory, write_observations, write_panel, write_result_doc,
    write_sim_trajectory, IoError, ObservationRow,
};
use polarkit::meanfield::{
    integrate_multi_party, integrate_two_party, EmotionMatrix, TwoPartyConfig,
};
use polarkit::model::ModelParams;
use polarkit::sim::{
    ensemble_run, run as sim_run, run_with_observations, synthesize_panel, InitialStanceSpec,
    PanelConfig, SimConfig, Trajectory,
};

use crate::configs::*;
use crate::error::CliError;

fn create_output(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn emit<F>(out: &Path, command: &str, config_toml: &str, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<(), IoError>,
{
    let mut w = create_output(out)?;
    write_metadata(&mut w, command, config_toml)?;
    body(&mut w)?;
    w.flush()?;
    println!("wrote {}", out.display());
    Ok(())
}

fn make_params(
    alpha: f64,
    beta: f64,
    delta: f64,
    allow_outgroup_love: bool,
) -> Result<ModelParams<f64>, CliError> {
    if allow_outgroup_love {
        Ok(ModelParams::with_outgroup_love(alpha, beta, delta)?)
    } else {
        Ok(ModelParams::new(alpha, beta, delta)?)
    }
}

fn build_graph(source: &GraphSource) -> Result<PartyGraph, CliError> {
    match source {
        GraphSource::Complete { n, red_fraction } => {
            if !(0.0..=1.0).contains(red_fraction) {
                return Err(CliError::usage(format!(
                    "red_fraction must lie in [0, 1], got {red_fraction}"
                )));
            }
            Ok(PartyGraph::complete_with_red_fraction(*n, *red_fraction))
        }
        GraphSource::Files { edges, attrs } => {
            Ok(load_graph(Path::new(edges), Path::new(attrs))?)
        }
    }
}

/// Stance file: `node_id,stance` lines, '#' comments allowed.
fn read_stance_file(path: &Path) -> Result<HashMap<String, Stance>, CliError> {
    let file = BufReader::new(File::open(path)?);
    let mut map = HashMap::new();
    for (idx, line) in file.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (id, stance) = trimmed.split_once(',').ok_or_else(|| CliError {
            category: crate::error::Category::Parse,
            message: format!("{}:{}: expected 'node_id,stance'", path.display(), idx + 1),
        })?;
        let stance = stance
            .trim()
            .parse::<u8>()
            .ok()
            .and_then(Stance::from_u8)
            .ok_or_else(|| CliError {
                category: crate::error::Category::Parse,
                message: format!(
                    "{}:{}: stance must be 0 or 1, got '{stance}'",
                    path.display(),
                    idx + 1
                ),
            })?;
        map.insert(id.trim().to_string(), stance);
    }
    Ok(map)
}

fn build_init(init: &InitSpec) -> Result<InitialStanceSpec<f64>, CliError> {
    Ok(match init {
        InitSpec::Bernoulli {
            theta_blue,
            theta_red,
        } => InitialStanceSpec::Bernoulli {
            theta_blue: *theta_blue,
            theta_red: *theta_red,
        },
        InitSpec::File { path } => {
            InitialStanceSpec::Explicit(read_stance_file(Path::new(path))?)
        }
    })
}

/// Derive a sibling path: `traj.csv` -> `traj-rep3.csv`.
fn derived_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}-{suffix}.{ext}"))
}

pub fn run_simulate(cfg: &SimulateConfig, out: &Path) -> Result<(), CliError> {
    let graph = build_graph(&cfg.graph)?;
    let params = make_params(cfg.alpha, cfg.beta, cfg.delta, cfg.allow_outgroup_love)?;
    let sim_config = SimConfig {
        params,
        measure: cfg.measure,
        horizon_events: cfg.horizon_events,
        record_every: cfg.record_every,
        seed: cfg.seed,
        init: build_init(&cfg.init)?,
    };
    let config_toml = to_canonical_toml(cfg);
    let n = graph.node_count();
    if cfg.replicates <= 1 {
        let trajectory = sim_run(&graph, &sim_config)?;
        emit(out, "simulate", &config_toml, |w| {
            write_sim_trajectory(w, &trajectory, n)
        })
    } else {
        let trajectories = ensemble_run(&graph, &sim_config, cfg.replicates)?;
        for (i, trajectory) in trajectories.iter().enumerate() {
            emit(
                &derived_path(out, &format!("rep{i}")),
                "simulate",
                &config_toml,
                |w| write_sim_trajectory(w, trajectory, n),
            )?;
        }
        let mean = mean_trajectory(&trajectories);
        emit(out, "simulate", &config_toml, |w| {
            write_sim_trajectory(w, &mean, n)
        })
    }
}

fn mean_trajectory(trajectories: &[Trajectory<f64>]) -> Trajectory<f64> {
    let rows = trajectories[0].rows.len();
    let k = trajectories.len() as f64;
    let mut mean = trajectories[0].clone();
    for (i, row) in mean.rows.iter_mut().enumerate().take(rows) {
        row.theta_blue = trajectories.iter().map(|t| t.rows[i].theta_blue).sum::<f64>() / k;
        row.theta_red = trajectories.iter().map(|t| t.rows[i].theta_red).sum::<f64>() / k;
    }
    mean
}

pub fn run_meanfield(cfg: &MeanfieldConfig, out: &Path) -> Result<(), CliError> {
    let params = make_params(cfg.alpha, cfg.beta, cfg.delta, cfg.allow_outgroup_love)?;
    let config = TwoPartyConfig {
        params,
        r: cfg.red_fraction,
        measure: cfg.measure,
        theta0: (cfg.theta0_blue, cfg.theta0_red),
        epsilon: cfg.epsilon,
        t_end: cfg.t_end,
    };
    let states = integrate_two_party(&config)?;
    emit(out, "meanfield", &to_canonical_toml(cfg), |w| {
        write_meanfield_trajectory(w, &states, cfg.days_per_unit)
    })
}

pub fn run_multiparty(cfg: &MultipartyConfig, out: &Path) -> Result<(), CliError> {
    let em = EmotionMatrix::new(cfg.a.clone(), cfg.r.clone(), cfg.delta.clone())?;
    let states = integrate_multi_party(&em, &cfg.theta0, cfg.epsilon, cfg.t_end)?;
    emit(out, "multiparty", &to_canonical_toml(cfg), |w| {
        write_multiparty_trajectory(w, &states, cfg.days_per_unit)
    })
}

fn solver_options(ridge: Option<f64>) -> SolverOptions<f64> {
    SolverOptions {
        ridge,
        ..SolverOptions::default()
    }
}

fn result_summary(result: &EstimationResult<f64>) -> String {
    format!(
        "alpha={:.4} (se {:.4})  beta={:.4} (se {:.4})  delta={:.4} (se {:.4})  \
         pseudo-R2={:.4}  n={}",
        result.alpha_hat,
        result.std_errors[0],
        result.beta_hat,
        result.std_errors[1],
        result.delta_hat,
        result.std_errors[2],
        result.pseudo_r2,
        result.n_obs
    )
}

pub fn run_estimate(cfg: &EstimateConfig, out: &Path) -> Result<(), CliError> {
    let rows = read_observations(Path::new(&cfg.observations))?;
    let records: Vec<_> = rows.iter().map(|r| r.record()).collect();
    let observations = build_observations_case1(&records);
    let result = if cfg.intercept_only {
        fit_intercept_only(&observations)?
    } else {
        fit_logistic(&observations, &solver_options(cfg.ridge))?
    };
    println!("{}", result_summary(&result));
    let mut extras = vec![
        ("estimator", if cfg.intercept_only {
            "intercept-only".to_string()
        } else {
            "case1-logistic".to_string()
        }),
        ("input", cfg.observations.clone()),
    ];
    if let Some(ridge) = cfg.ridge {
        extras.push(("ridge", ridge.to_string()));
    }
    emit(out, "estimate", &to_canonical_toml(cfg), |w| {
        write_result_doc(w, &result, &extras)
    })
}

pub fn run_panel_estimate(cfg: &PanelEstimateConfig, out: &Path) -> Result<(), CliError> {
    let panel = read_panel(Path::new(&cfg.panel))?;
    let design = build_observations_case2::<f64>(&panel, cfg.j_convention)?;
    let result = fit_logistic(&design.observations, &solver_options(cfg.ridge))?;
    if design.skipped_pairs > 0 {
        eprintln!(
            "warning: skipped {} interval pair(s) with no shared active nodes",
            design.skipped_pairs
        );
    }
    println!("{}", result_summary(&result));
    let mut extras = vec![
        ("estimator", "case2-fully-connected".to_string()),
        ("input", cfg.panel.clone()),
        ("j_convention", cfg.j_convention.name().to_string()),
        ("interval_pairs_used", design.pairs_used.to_string()),
        ("interval_pairs_skipped", design.skipped_pairs.to_string()),
    ];
    if let Some(ridge) = cfg.ridge {
        extras.push(("ridge", ridge.to_string()));
    }
    emit(out, "panel-estimate", &to_canonical_toml(cfg), |w| {
        write_result_doc(w, &result, &extras)
    })
}

pub fn run_synth_graph(cfg: &SynthGraphConfig, out_prefix: &Path) -> Result<(), CliError> {
    let graph = match cfg {
        SynthGraphConfig::Complete { n_blue, n_red } => PartyGraph::complete(*n_blue, *n_red),
        SynthGraphConfig::TwoBlock {
            n_blue,
            n_red,
            p_within,
            p_between,
            seed,
        } => {
            for (name, p) in [("p_within", *p_within), ("p_between", *p_between)] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::usage(format!("{name} must lie in [0, 1], got {p}")));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            PartyGraph::two_block(*n_blue, *n_red, *p_within, *p_between, &mut rng)
        }
    };
    let prefix = out_prefix.to_string_lossy();
    let edges = PathBuf::from(format!("{prefix}-edges.csv"));
    let attrs = PathBuf::from(format!("{prefix}-attrs.csv"));
    if let Some(parent) = edges.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let config_toml = to_canonical_toml(cfg);
    // save_graph writes plain lists; prepend metadata by writing
    // through a buffer here instead.
    let tmp_edges = edges.with_extension("tmp");
    let tmp_attrs = attrs.with_extension("tmp");
    save_graph(&graph, &tmp_edges, &tmp_attrs)?;
    for (tmp, target) in [(tmp_edges, &edges), (tmp_attrs, &attrs)] {
        let body = std::fs::read_to_string(&tmp)?;
        std::fs::remove_file(&tmp)?;
        let mut w = create_output(target)?;
        write_metadata(&mut w, "synth-graph", &config_toml)?;
        w.write_all(body.as_bytes())?;
        w.flush()?;
        println!("wrote {}", target.display());
    }
    Ok(())
}

pub fn run_synth_panel(cfg: &SynthPanelConfig, out: &Path) -> Result<(), CliError> {
    let graph = build_graph(&GraphSource::Complete {
        n: cfg.n,
        red_fraction: cfg.red_fraction,
    })?;
    let panel_config = PanelConfig {
        params: ModelParams::new(cfg.alpha, cfg.beta, cfg.delta)?,
        intervals: cfg.intervals,
        seed: cfg.seed,
        init: InitialStanceSpec::Bernoulli {
            theta_blue: cfg.theta0_blue,
            theta_red: cfg.theta0_red,
        },
    };
    let panel = synthesize_panel(&graph, &panel_config)?;
    emit(out, "synth-panel", &to_canonical_toml(cfg), |w| {
        write_panel(w, &panel)
    })
}

pub fn run_synth_observations(
    cfg: &SynthObservationsConfig,
    out: &Path,
) -> Result<(), CliError> {
    let rows: Vec<ObservationRow> = match cfg {
        SynthObservationsConfig::Direct {
            n,
            alpha,
            beta,
            delta,
            seed,
        } => {
            let params = ModelParams::new(*alpha, *beta, *delta)?;
            sample_logistic_rows(&params, *n, *seed)
                .into_iter()
                .enumerate()
                .map(|(i, o)| ObservationRow {
                    node_id: format!("row{i}"),
                    time_index: 0,
                    party: Party::Blue,
                    stance_t: Stance::Anti,
                    stance_t1: if o.j { Stance::Pro } else { Stance::Anti },
                    d_in_1: o.x_in,
                    d_out_1: o.x_out,
                })
                .collect()
        }
        SynthObservationsConfig::Sim {
            n,
            red_fraction,
            alpha,
            beta,
            delta,
            measure,
            horizon_events,
            theta0_blue,
            theta0_red,
            seed,
        } => {
            let graph = build_graph(&GraphSource::Complete {
                n: *n,
                red_fraction: *red_fraction,
            })?;
            let sim_config = SimConfig {
                params: ModelParams::new(*alpha, *beta, *delta)?,
                measure: *measure,
                horizon_events: *horizon_events,
                record_every: *horizon_events,
                seed: *seed,
                init: InitialStanceSpec::Bernoulli {
                    theta_blue: *theta0_blue,
                    theta_red: *theta0_red,
                },
            };
            let (_, events) = run_with_observations(&graph, &sim_config)?;
            events
                .into_iter()
                .map(|e| ObservationRow {
                    node_id: graph.label(e.node).to_string(),
                    time_index: e.event.min(u32::MAX as u64) as u32,
                    party: graph.party(e.node),
                    stance_t: e.stance_before,
                    stance_t1: e.stance_after,
                    d_in_1: e.influence.d_in_1(),
                    d_out_1: e.influence.d_out_1(),
                })
                .collect()
        }
    };
    emit(out, "synth-observations", &to_canonical_toml(cfg), |w| {
        write_observations(w, &rows)
    })
}

/// One roundtrip replicate: synthesize a panel with known parameters,
/// rebuild the design, fit, and measure the error in standard errors.
fn roundtrip_once(cfg: &RoundtripConfig, seed: u64) -> Result<EstimationResult<f64>, CliError> {
    let graph = build_graph(&GraphSource::Complete {
        n: cfg.n,
        red_fraction: cfg.red_fraction,
    })?;
    let panel_config = PanelConfig {
        params: ModelParams::new(cfg.alpha, cfg.beta, cfg.delta)?,
        intervals: cfg.intervals,
        seed,
        init: InitialStanceSpec::Bernoulli {
            theta_blue: cfg.theta0_blue,
            theta_red: cfg.theta0_red,
        },
    };
    let panel = synthesize_panel(&graph, &panel_config)?;
    let design = build_observations_case2::<f64>(&panel, JConvention::SwitchIndicator)?;
    Ok(fit_logistic(&design.observations, &SolverOptions::default())?)
}

pub fn run_roundtrip(cfg: &RoundtripConfig, out: &Path) -> Result<bool, CliError> {
    if cfg.seeds < 1 {
        return Err(CliError::usage("seeds must be >= 1"));
    }
    let results: Vec<(u64, EstimationResult<f64>)> = (0..cfg.seeds as u64)
        .map(|i| {
            let seed = cfg.base_seed.wrapping_add(i);
            roundtrip_once(cfg, seed).map(|r| (seed, r))
        })
        .collect::<Result<_, _>>()?;

    let mut passed = 0u32;
    let mut lines = Vec::new();
    for (seed, r) in &results {
        let z_alpha = (r.alpha_hat - cfg.alpha).abs() / r.std_errors[0];
        let z_beta = (r.beta_hat - cfg.beta).abs() / r.std_errors[1];
        let z_delta = (r.delta_hat - cfg.delta).abs() / r.std_errors[2];
        let ok = z_alpha <= 3.0 && z_beta <= 3.0 && z_delta <= 3.0;
        passed += ok as u32;
        lines.push(format!(
            "{seed},{},{},{},{},{},{},{z_alpha},{z_beta},{z_delta},{ok}",
            r.alpha_hat,
            r.beta_hat,
            r.delta_hat,
            r.std_errors[0],
            r.std_errors[1],
            r.std_errors[2]
        ));
    }
    // Sampling noise makes a 3-SE bound miss occasionally; require 80%
    // of seeds to land inside it.
    let required = (0.8 * cfg.seeds as f64).ceil() as u32;
    let pass = passed >= required;

    emit(out, "roundtrip", &to_canonical_toml(cfg), |w| {
        writeln!(w, "truth_alpha = {}", cfg.alpha)?;
        writeln!(w, "truth_beta = {}", cfg.beta)?;
        writeln!(w, "truth_delta = {}", cfg.delta)?;
        writeln!(w, "seeds_total = {}", cfg.seeds)?;
        writeln!(w, "seeds_passed = {passed}")?;
        writeln!(w, "seeds_required = {required}")?;
        writeln!(w, "pass = {pass}")?;
        writeln!(
            w,
            "seed,alpha_hat,beta_hat,delta_hat,se_alpha,se_beta,se_delta,z_alpha,z_beta,z_delta,within_3se"
        )?;
        for line in &lines {
            writeln!(w, "{line}")?;
        }
        Ok(())
    })?;
    println!(
        "roundtrip: {passed}/{} seeds within 3 standard errors ({})",
        cfg.seeds,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

pub fn run_sweep(cfg: &SweepConfig, out: &Path) -> Result<(), CliError> {
    for grid in [&cfg.alpha, &cfg.beta, &cfg.delta, &cfg.red_fraction] {
        if grid.is_empty() {
            return Err(CliError::usage("every sweep grid needs at least one value"));
        }
    }
    let mut cells = Vec::new();
    for &alpha in &cfg.alpha {
        for &beta in &cfg.beta {
            for &delta in &cfg.delta {
                for &r in &cfg.red_fraction {
                    cells.push((alpha, beta, delta, r));
                }
            }
        }
    }
    let rows: Vec<String> = cells
        .par_iter()
        .map(|&(alpha, beta, delta, r)| -> Result<String, CliError> {
            let params = make_params(alpha, beta, delta, cfg.allow_outgroup_love)?;
            let config = TwoPartyConfig {
                params,
                r,
                measure: InfluenceMeasureKind::DegreeNormalizedCount,
                theta0: (cfg.theta0_blue, cfg.theta0_red),
                epsilon: cfg.epsilon,
                t_end: cfg.t_end,
            };
            let states = integrate_two_party(&config)?;
            let outcome = classify_two_party(&states);
            let end = states.last().unwrap();
            Ok(format!(
                "{alpha},{beta},{delta},{r},{},{},{}",
                end.theta_blue,
                end.theta_red,
                outcome.name()
            ))
        })
        .collect::<Result<_, _>>()?;

    emit(out, "sweep", &to_canonical_toml(cfg), |w| {
        writeln!(
            w,
            "alpha,beta,delta,red_fraction,theta_blue_end,theta_red_end,outcome"
        )?;
        for row in &rows {
            writeln!(w, "{row}")?;
        }
        Ok(())
    })
}

fn sanitize_id(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

fn write_suite_run(
    run: &SuiteRun,
    config_toml: &str,
    out_dir: &Path,
) -> Result<(), CliError> {
    let suite_dir = out_dir.join(&run.report.suite);
    std::fs::create_dir_all(&suite_dir)?;
    for (id, trajectory) in &run.trajectories {
        let path = suite_dir.join(format!("{}.csv", sanitize_id(id)));
        let mut w = create_output(&path)?;
        write_metadata(&mut w, "suite", config_toml)?;
        match trajectory {
            SuiteTrajectory::TwoParty(states) => {
                write_meanfield_trajectory(&mut w, states, 7.0)?;
            }
            SuiteTrajectory::MultiParty(states) => {
                write_multiparty_trajectory(&mut w, states, 7.0)?;
            }
        }
        w.flush()?;
    }

    let summary = suite_dir.join("summary.csv");
    let mut w = create_output(&summary)?;
    write_metadata(&mut w, "suite", config_toml)?;
    writeln!(w, "kind,id,outcome,expected,pass,detail")?;
    for s in &run.report.scenarios {
        let endpoint = s
            .endpoint
            .iter()
            .map(|(name, v)| format!("{name}={v:.4}"))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            w,
            "scenario,{},{},{},{},{}",
            s.id,
            s.outcome.name(),
            s.expected.name(),
            s.pass,
            format!("{} | {endpoint}", s.params).replace(',', ";")
        )?;
    }
    for c in &run.report.checks {
        writeln!(
            w,
            "check,-,-,-,{},{}",
            c.pass,
            c.description.replace(',', ";")
        )?;
    }
    w.flush()?;
    println!("wrote {}", summary.display());
    Ok(())
}

pub fn run_suite(cfg: &SuiteConfig, out_dir: &Path) -> Result<bool, CliError> {
    let ids: Vec<&str> = if cfg.id == "all" {
        SUITE_IDS.to_vec()
    } else {
        vec![cfg.id.as_str()]
    };
    let config_toml = to_canonical_toml(cfg);
    let mut all_pass = true;
    let mut summary_lines = Vec::new();
    for id in ids {
        let run = run_figure_suite(id)?;
        write_suite_run(&run, &config_toml, out_dir)?;
        let pass = run.report.all_pass();
        all_pass &= pass;
        let scenarios = run.report.scenarios.len();
        let checks = run.report.checks.len();
        println!(
            "suite {id}: {} ({scenarios} scenarios, {checks} checks)",
            if pass { "PASS" } else { "FAIL" }
        );
        summary_lines.push(format!("{id},{scenarios},{checks},{pass}"));
    }
    let top = out_dir.join("summary.csv");
    let mut w = create_output(&top)?;
    write_metadata(&mut w, "suite", &config_toml)?;
    writeln!(w, "suite,scenarios,checks,pass")?;
    for line in &summary_lines {
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    println!("wrote {}", top.display());
    Ok(all_pass)
}

/// Re-execute a command from the metadata header of one of its outputs.
pub fn run_rerun(from: &Path, out: &Path) -> Result<(), CliError> {
    let meta = read_metadata(from)?;
    let parse_fail = |e: toml::de::Error| CliError {
        category: crate::error::Category::Parse,
        message: format!("embedded config does not parse: {e}"),
    };
    let checks = match meta.command.as_str() {
        "simulate" => {
            run_simulate(&toml::from_str(&meta.config_toml).map_err(parse_fail)?, out)?;
            None
        }
        "meanfield" => {
            run_meanfield(&toml::from_str(&meta.config_toml).map_err(parse_fail)?, out)?;
            None
        }
        "multiparty" => {
            run_multiparty(&toml::from_str(&meta.config_toml).map_err(parse_fail)?, out)?;
            None
        }
        "estimate" => {
            run_estimate(&toml::from_str(&meta.config_toml).map_err(parse_fail)?, out)?;
            None
        }
        "panel-estimate" => {
            run_panel_estimate(&toml::from_str(&meta.config_toml).map_err(parse_fail)?, out)?;
            None
        }
        "synth-graph" => {
            run_synth_graph(&toml::from_str(&meta.config_toml).map_err(parse_fail)?, out)?;
            None
        }
        "synth-panel" => {
            run_synth_panel(&toml::from_str(&meta.config_toml).map_err(parse_fail)?, out)?;
            None
        }
        "synth-observations" => {
            run_synth_observations(
                &toml::from_str(&meta.config_toml).map_err(parse_fail)?,
                out,
            )?;
            None
        }
        "roundtrip" => Some(run_roundtrip(
            &toml::from_str(&meta.config_toml).map_err(parse_fail)?,
            out,
        )?),
        "sweep" => {
            run_sweep(&toml::from_str(&meta.config_toml).map_err(parse_fail)?, out)?;
            None
        }
        "suite" => Some(run_suite(
            &toml::from_str(&meta.config_toml).map_err(parse_fail)?,
            out,
        )?),
        other => {
            return Err(CliError::usage(format!(
                "metadata names unknown command '{other}'"
            )))
        }
    };
    if checks == Some(false) {
        return Err(CliError::checks_failed("re-run checks failed"));
    }
    Ok(())
}

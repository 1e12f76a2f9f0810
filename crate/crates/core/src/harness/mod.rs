//! Scenario execution, metrics and run artifacts.

mod metrics;
mod plot;
mod scenario;
mod trace_io;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use metrics::{compute_metrics, Metrics};
pub use plot::render_svg;
pub use scenario::{bundled_names, Overrides, Scenario, ScenarioConfig};
pub use trace_io::{
    load_trace_csv, read_trace_csv, replay_metrics, trace_csv_string, trace_rows, write_trace_csv, ReplayContext,
    TraceRow, COLUMNS,
};

use crate::behaviors::BehaviorKind;
use crate::config::Config;
use crate::controller::{NavigationController, Strategy};
use crate::error::{Error, Result};
use crate::sim::{run_episode, TrajectoryTrace, World};

/// Command-line style adjustments on top of a scenario file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub strategy: Option<Strategy>,
    /// Added to the scenario's own disabled set.
    pub disable: Vec<BehaviorKind>,
    pub overrides: Overrides,
}

#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub name: String,
    pub strategy: Strategy,
    pub config: Config,
    pub trace: TrajectoryTrace,
    pub metrics: Metrics,
    /// Smallest distance between the robot center and an obstacle over the run.
    pub min_clearance: f64,
}

/// Smallest obstacle distance over every pose of `trace`.
pub fn min_clearance(world: &World, trace: &TrajectoryTrace) -> f64 {
    trace.poses().map(|p| world.clearance([p.x, p.y])).fold(f64::INFINITY, f64::min)
}

/// Runs one episode of `scenario`.
pub fn run_scenario(scenario: &Scenario, base: &Config, opts: &RunOptions) -> Result<ScenarioRun> {
    let sc = &scenario.config;
    let config = sc.overrides.merged(&opts.overrides).apply(base)?;
    let strategy = opts.strategy.unwrap_or(sc.strategy);
    let mut disabled = sc.disable.clone();
    disabled.extend(opts.disable.iter().copied());
    let controller = NavigationController::new(&config, strategy, &disabled)?;
    let target = sc.target_pose();
    let trace = run_episode(
        &scenario.world,
        sc.start_pose(),
        target,
        &controller,
        &config.robot,
        &config.sensors,
        &config.episode,
    );
    let metrics = compute_metrics(&trace, &target)?;
    Ok(ScenarioRun {
        name: sc.name.clone(),
        strategy,
        min_clearance: min_clearance(&scenario.world, &trace),
        config,
        trace,
        metrics,
    })
}

#[derive(Serialize)]
struct Summary<'a> {
    scenario: &'a str,
    strategy: Strategy,
    #[serde(flatten)]
    metrics: &'a Metrics,
    min_clearance: f64,
}

/// Paths of the files written for one run.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub trace_csv: PathBuf,
    pub plot_svg: PathBuf,
    pub metrics_json: PathBuf,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.into(), source })
}

/// Writes `<name>-<strategy>.{csv,svg,json}` into `dir`, creating it if needed.
pub fn write_artifacts(run: &ScenarioRun, scenario: &Scenario, dir: &Path) -> Result<Artifacts> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.into(), source })?;
    let stem = format!("{}-{}", run.name, run.strategy);
    let artifacts = Artifacts {
        trace_csv: dir.join(format!("{stem}.csv")),
        plot_svg: dir.join(format!("{stem}.svg")),
        metrics_json: dir.join(format!("{stem}.json")),
    };
    write_file(&artifacts.trace_csv, &trace_csv_string(&run.trace))?;
    let svg = render_svg(
        &format!("{} / {}", run.name, run.strategy),
        &scenario.world,
        &run.trace,
        &scenario.config.target_pose(),
        run.config.robot.u_limits,
        run.config.robot.omega_limits,
    );
    write_file(&artifacts.plot_svg, &svg)?;
    let summary = Summary {
        scenario: &run.name,
        strategy: run.strategy,
        metrics: &run.metrics,
        min_clearance: run.min_clearance,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary is serializable");
    write_file(&artifacts.metrics_json, &(json + "\n"))?;
    Ok(artifacts)
}

/// One line per metric field.
pub fn format_metrics(m: &Metrics) -> String {
    format!(
        "outcome            {}\nsteps              {}\ntraveled distance  {:.3} m\nelapsed time       {:.2} s\nsmoothness         {:.3} deg/step\ntarget error       {:.4} m\n",
        m.outcome, m.steps, m.traveled_distance, m.elapsed_time, m.smoothness_deg, m.target_error
    )
}

/// Tabular comparison of several runs of the same scenario.
pub fn comparison_table(runs: &[ScenarioRun]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8} {:<10} {:>6} {:>10} {:>9} {:>11} {:>10} {:>10}",
        "strategy", "outcome", "steps", "dist (m)", "time (s)", "smooth (°)", "error (m)", "clear (m)"
    );
    for r in runs {
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{:<8} {:<10} {:>6} {:>10.3} {:>9.2} {:>11.3} {:>10.4} {:>10.3}",
            r.strategy.name(),
            m.outcome.to_string(),
            m.steps,
            m.traveled_distance,
            m.elapsed_time,
            m.smoothness_deg,
            m.target_error,
            r.min_clearance
        );
    }
    out
}

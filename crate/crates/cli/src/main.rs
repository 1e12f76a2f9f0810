use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bbfm_core::behaviors::BehaviorKind;
use bbfm_core::harness::{
    bundled_names, comparison_table, format_metrics, load_trace_csv, replay_metrics, run_scenario,
    write_artifacts, Overrides, ReplayContext, RunOptions, Scenario,
};
use bbfm_core::sim::Termination;
use bbfm_core::{Config, Error, Strategy};
use clap::{Args, Parser, Subcommand};

const EXIT_COLLISION: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;
const EXIT_CONFIG: u8 = 5;
const EXIT_OUTPUT: u8 = 6;

/// Failures split by exit code: bad inputs versus unwritable outputs.
enum Failure {
    Input(Error),
    Output(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn output(e: Error) -> Failure {
    Failure::Output(e)
}

#[derive(Parser)]
#[command(name = "bbfm", version, about = "Fuzzy behavior navigation with lexicographic command fusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its trace, plot and metrics.
    Run(RunArgs),
    /// Run one scenario under every fusion strategy and print a table.
    Compare(CommonArgs),
    /// Print the default configuration (membership functions, rules, limits) as JSON.
    DumpConfig {
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute metrics from a trace CSV.
    Replay(ReplayArgs),
    /// List the bundled scenarios.
    List,
}

#[derive(Args)]
struct CommonArgs {
    /// Bundled scenario name or path to a scenario JSON file.
    #[arg(long)]
    scenario: String,
    /// Base configuration JSON; defaults to the built-in configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Behavior to switch off (lm, oa, gr); repeatable.
    #[arg(long = "disable-behavior", value_name = "BEHAVIOR")]
    disable: Vec<BehaviorKind>,
    #[arg(long)]
    grid_step_u: Option<f64>,
    #[arg(long)]
    grid_step_omega: Option<f64>,
    /// Control period in seconds.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Directory for trace, plot and metrics files.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// bbfm, fig4a or fig4b; defaults to the scenario's setting.
    #[arg(long)]
    strategy: Option<Strategy>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Trace CSV written by `run` or `compare`.
    csv: PathBuf,
    /// Scenario the trace came from; enables exact collision classification.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    max_steps: Option<usize>,
}

fn base_config(path: Option<&Path>) -> Result<Config, Error> {
    path.map_or_else(|| Ok(Config::default()), Config::load)
}

fn options(common: &CommonArgs, strategy: Option<Strategy>) -> RunOptions {
    RunOptions {
        strategy,
        disable: common.disable.clone(),
        overrides: Overrides {
            grid_step_u: common.grid_step_u,
            grid_step_omega: common.grid_step_omega,
            dt: common.dt,
            max_steps: common.max_steps,
            ..Default::default()
        },
    }
}

fn outcome_code(outcome: Termination) -> u8 {
    match outcome {
        Termination::Success => 0,
        Termination::Collision => EXIT_COLLISION,
        Termination::Timeout => EXIT_TIMEOUT,
    }
}

fn run(args: &RunArgs) -> Result<u8, Failure> {
    let scenario = Scenario::resolve(&args.common.scenario)?;
    let base = base_config(args.common.config.as_deref())?;
    let result = run_scenario(&scenario, &base, &options(&args.common, args.strategy))?;
    let files = write_artifacts(&result, &scenario, &args.common.out_dir).map_err(output)?;
    println!("{} / {}", result.name, result.strategy);
    print!("{}", format_metrics(&result.metrics));
    println!("min clearance      {:.3} m", result.min_clearance);
    for f in [&files.trace_csv, &files.plot_svg, &files.metrics_json] {
        println!("wrote {}", f.display());
    }
    Ok(outcome_code(result.metrics.outcome))
}

fn compare(args: &CommonArgs) -> Result<u8, Failure> {
    let scenario = Scenario::resolve(&args.scenario)?;
    let base = base_config(args.config.as_deref())?;
    let mut runs = Vec::new();
    for strategy in Strategy::ALL {
        let r = run_scenario(&scenario, &base, &options(args, Some(strategy)))?;
        write_artifacts(&r, &scenario, &args.out_dir).map_err(output)?;
        runs.push(r);
    }
    println!("{}", scenario.config.name);
    print!("{}", comparison_table(&runs));
    let report = args.out_dir.join(format!("{}-compare.txt", scenario.config.name));
    std::fs::write(&report, comparison_table(&runs))
        .map_err(|source| output(Error::Io { path: report.clone(), source }))?;
    println!("wrote {}", report.display());
    Ok(0)
}

fn replay(args: &ReplayArgs) -> Result<u8, Failure> {
    let rows = load_trace_csv(&args.csv)?;
    let scenario = args.scenario.as_deref().map(Scenario::resolve).transpose()?;
    let mut cfg = base_config(args.config.as_deref())?;
    if let Some(s) = &scenario {
        cfg = s.effective_config(&cfg)?;
    }
    if let Some(n) = args.max_steps {
        cfg.episode.max_steps = n;
    }
    let ctx = ReplayContext {
        stop_radius: cfg.episode.stop_radius,
        max_steps: cfg.episode.max_steps,
        world: scenario.as_ref().map(|s| (&s.world, cfg.robot.body_radius)),
    };
    let m = replay_metrics(&rows, &ctx)?;
    print!("{}", format_metrics(&m));
    Ok(0)
}

fn dump_config(out: Option<&Path>) -> Result<u8, Failure> {
    let json = Config::default().to_json() + "\n";
    match out {
        Some(path) => std::fs::write(path, json).map_err(|source| output(Error::Io { path: path.into(), source }))?,
        None => print!("{json}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Compare(args) => compare(args),
        Command::DumpConfig { out } => dump_config(out.as_deref()),
        Command::Replay(args) => replay(args),
        Command::List => {
            for name in bundled_names() {
                let s = Scenario::bundled(name).expect("bundled scenarios are valid");
                println!("{name:<12} {}", s.config.description);
            }
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Output(e)) => {
            eprintln!("error writing output: {e}");
            ExitCode::from(EXIT_OUTPUT)
        }
    }
}

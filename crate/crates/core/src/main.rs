use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use poe_inspect::config::{self, MethodChoice, RunConfig};
use poe_inspect::runner;
use poe_inspect::solvers;

#[derive(Parser)]
#[command(
    name = "poe-inspect",
    version,
    about = "Optimizes sequential inspection policies (visit order + per-station thresholds) \
             over the cost/time tradeoff and writes Pareto frontier CSVs."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize policies described by a TOML config.
    Run(RunArgs),
    /// Run the bundled three-station example with every method and compare
    /// the frontiers.
    Demo(DemoArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config path.
    #[arg(long)]
    config: PathBuf,
    /// Override the method: grid, local, ga, or all.
    #[arg(long)]
    method: Option<String>,
    /// Override the threshold grid step.
    #[arg(long = "grid-step")]
    grid_step: Option<f64>,
    /// Override the RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the weight sweep as START:STEP:END (on w1).
    #[arg(long)]
    weights: Option<String>,
    /// Override the output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Output CSV base path.
    #[arg(long, default_value = "demo/frontier.csv")]
    out: PathBuf,
    /// Override the RNG seed.
    #[arg(long)]
    seed: Option<u64>,
}

const DEMO_CONFIG: &str = include_str!("../../../configs/parallel3.toml");

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Run(args) => {
            let text = std::fs::read_to_string(&args.config)
                .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
            let mut config = config::parse_config(&text).map_err(|e| e.to_string())?;
            apply_overrides(&mut config, &args)?;
            runner::run(&config).map_err(|e| e.to_string())?;
            Ok(())
        }
        Command::Demo(args) => {
            let mut config = config::parse_config(DEMO_CONFIG)
                .map_err(|e| format!("bundled demo config: {e}"))?;
            config.method = MethodChoice::All;
            config.out = args.out;
            if let Some(seed) = args.seed {
                config.seed = seed;
                config.ga.seed = seed;
            }
            runner::run(&config).map_err(|e| e.to_string())?;
            Ok(())
        }
    }
}

fn apply_overrides(config: &mut RunConfig, args: &RunArgs) -> Result<(), String> {
    if let Some(method) = &args.method {
        config.method = method.parse::<MethodChoice>().map_err(|e| e.to_string())?;
    }
    if let Some(step) = args.grid_step {
        config.grid.step = step;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
        config.ga.seed = seed;
    }
    if let Some(spec) = &args.weights {
        config.weights = parse_weights_flag(spec)?;
    }
    if let Some(out) = &args.out {
        config.out = out.clone();
    }
    Ok(())
}

/// `START:STEP:END` -> weight pairs, e.g. `0:0.1:1` or `0.5:1:0.5`.
fn parse_weights_flag(spec: &str) -> Result<Vec<poe_inspect::model::WeightPair>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, step, end] = parts.as_slice() else {
        return Err(format!("--weights expects START:STEP:END, got {spec:?}"));
    };
    let parse = |name: &str, s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("--weights {name} is not a number: {s:?}"))
    };
    solvers::weight_range(
        parse("START", start)?,
        parse("STEP", step)?,
        parse("END", end)?,
    )
    .map_err(|e| e.to_string())
}

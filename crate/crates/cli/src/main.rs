use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use matchlab_core::experiments::{csv_row, CSV_HEADER, DEFAULT_ENUMERATION_LIMIT};
use matchlab_core::{
    estimate, parse_instance, serialize_instance, theoretical_curve, AdversaryPolicy, Algorithm, Arrival, Error,
    EstimationMode, ExperimentConfig, GeneratorSpec, Instance, Model,
};

/// Simulate greedy-based online matching algorithms in sample-based models.
#[derive(Parser)]
#[command(name = "matchlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo estimate of the competitive ratio.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact expectation by enumerating every sample.
    Exact {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a generated instance, e.g. `generate tight-vertex k=50 p=0.4142`.
    Generate {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Proven ratio as a function of p.
    Curve {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        arrival: Arrival,
        /// Evaluate at these values; without it a sweep over [0, 1] is printed.
        #[arg(long, num_args = 1..)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Instance file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    instance: Option<PathBuf>,
    /// Generator spec string used instead of a file.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long)]
    model: Model,
    #[arg(long)]
    arrival: Arrival,
    #[arg(long, default_value = "greedy-based")]
    algorithm: Algorithm,
    /// One CSV row is printed per value.
    #[arg(long, required = true, num_args = 1..)]
    p: Vec<f64>,
    #[arg(long, default_value = "worst")]
    adversary: AdversaryPolicy,
    /// Second weight face for the two-faced model (same topology as the instance).
    #[arg(long)]
    faces: Option<PathBuf>,
    /// AOSp: use the whole history as the sample even for large p.
    #[arg(long)]
    no_subsample: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    limit: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_instance(path: &PathBuf) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run_experiment(run: RunArgs, mode: EstimationMode, trials: u64, seed: u64) -> anyhow::Result<()> {
    let (inst, instance_id) = match (&run.instance, &run.gen) {
        (Some(path), _) => (read_instance(path)?, path.display().to_string()),
        (None, Some(spec)) => {
            let spec: GeneratorSpec = spec.parse()?;
            (spec.generate()?, spec.to_string())
        }
        (None, None) => bail!("either --instance or --gen is required"),
    };
    let faces = run.faces.as_ref().map(read_instance).transpose()?;
    let mut text = format!("{CSV_HEADER}\n");
    for &p in &run.p {
        let config = ExperimentConfig {
            algorithm: run.algorithm,
            adversary: run.adversary,
            mode,
            trials,
            seed,
            enumeration_limit: run.limit,
            subsample: !run.no_subsample,
            faces: faces.clone(),
            ..ExperimentConfig::new(run.model, run.arrival, p)
        };
        let est = estimate(&inst, &config)?;
        text.push_str(&csv_row(&config, &est, &instance_id));
        text.push('\n');
    }
    emit(run.out.as_ref(), &text)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate { run, trials, seed } => run_experiment(run, EstimationMode::MonteCarlo, trials, seed),
        Command::Exact { run } => run_experiment(run, EstimationMode::Exact, 0, 0),
        Command::Generate { spec, out } => {
            let spec: GeneratorSpec = spec.join(" ").parse()?;
            let inst = spec.generate()?;
            emit(out.as_ref(), &format!("# {spec}\n{}", serialize_instance(&inst)))
        }
        Command::Curve {
            model,
            arrival,
            p,
            steps,
        } => {
            let points: Vec<f64> = if p.is_empty() {
                let steps = steps.max(1);
                (0..=steps).map(|i| i as f64 / steps as f64).collect()
            } else {
                p
            };
            let mut text = String::new();
            for x in points {
                text.push_str(&format!("{x},{}\n", theoretical_curve(model, arrival, x)?));
            }
            emit(None, &text)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Capacity { .. }) => 3,
        Some(Error::Parse { .. }) => 4,
        Some(Error::Domain(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

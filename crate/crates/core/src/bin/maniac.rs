use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use maniac_core::codec::Mode;
use maniac_core::experiment::{Experiment, ExperimentConfig, NetworkSource};
use maniac_core::netsim::NetworkSpec;
use maniac_core::Error;

#[derive(Parser)]
#[command(name = "maniac", version, about = "Two-source network error correction: simulate, encode, decode")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the min-cut capacities {C1, C2, C} of a network.
    Mincut {
        /// Network JSON file, or `reference`.
        #[arg(long)]
        network: String,
        /// Field size used with `--network reference`.
        #[arg(long, default_value_t = 257)]
        p: u64,
    },
    /// Run one seeded transmission and decode it.
    Roundtrip(RunArgs),
    /// Run a seeded Monte-Carlo campaign.
    Campaign {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Base seed; overrides the config and MANIAC_SEED.
    #[arg(long, env = "MANIAC_SEED")]
    seed: Option<u64>,
    /// Network JSON file or `reference`, replacing the config's network.
    #[arg(long)]
    network: Option<String>,
    /// Output file (roundtrip) or directory (campaign).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Coherent,
    Noncoherent,
}

impl RunArgs {
    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(m) = self.mode {
            cfg.mode = match m {
                ModeArg::Coherent => Mode::Coherent,
                ModeArg::Noncoherent => Mode::Noncoherent,
            };
        }
        if let Some(s) = self.seed {
            cfg.base_seed = s;
        }
        if let Some(n) = &self.network {
            cfg.network = NetworkSource::Named(n.clone());
        }
        if let Some(o) = &self.out {
            cfg.output = Some(o.clone());
        }
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct RoundtripReport {
    mode: Mode,
    seed: u64,
    trial_seed: u64,
    success: bool,
    stage_failures: Vec<String>,
    #[serde(rename = "rank_E")]
    rank_e: usize,
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).expect("plain data serializes");
    println!("{text}");
    if let Some(p) = path {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
        }
        fs::write(p, text + "\n").map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Command::Mincut { network, p } => {
            let spec = if network == "reference" {
                NetworkSpec::reference(p)?
            } else {
                NetworkSpec::load(Path::new(&network))?
            };
            println!("{}", serde_json::to_string(&spec.cuts()).expect("plain data serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Roundtrip(args) => {
            let cfg = args.resolve()?;
            let exp = Experiment::new(&cfg)?;
            let trial_seed = Experiment::trial_seed(cfg.base_seed, 0);
            let outcome = exp.run_trial(0, trial_seed)?;
            let report = RoundtripReport {
                mode: cfg.mode,
                seed: cfg.base_seed,
                trial_seed,
                success: outcome.success,
                stage_failures: outcome.failure_stage.into_iter().collect(),
                rank_e: outcome.rank_e,
            };
            write_json(&report, cfg.output.as_deref())?;
            Ok(if report.success { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Campaign { run, trials, jobs } => {
            let mut cfg = run.resolve()?;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            let exp = Experiment::new(&cfg)?;
            match &cfg.output {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
                    let csv_path = dir.join("trials.csv");
                    let file = File::create(&csv_path)
                        .map_err(|e| Error::Config(format!("{}: {e}", csv_path.display())))?;
                    let summary = exp.campaign(cfg.trials, cfg.base_seed, jobs, Some(BufWriter::new(file)))?;
                    write_json(&summary, Some(&dir.join("summary.json")))?;
                }
                None => {
                    let summary = exp.campaign::<std::io::Sink>(cfg.trials, cfg.base_seed, jobs, None)?;
                    write_json(&summary, None)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! `holoq synth|simulate|sweep|verify|report`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holoq_runner::{
    emit_report, run_experiment_with, simulate_gates, synth_schedules, write_result, ExperimentConfig, ExperimentKind,
    RunnerError, SweepResult,
};

#[derive(Parser)]
#[command(name = "holoq", version, about = "Holonomic gate synthesis, simulation and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write drive schedules (time, Ω, φ, segment) of every scheme × gate.
    Synth(Common),
    /// Propagate noiseless gates and report their fidelities.
    Simulate(Common),
    /// Run the configured experiment sweep.
    Sweep(Common),
    /// Run the invariant suite; exits 3 when any check fails.
    Verify(Common),
    /// Summarise the checks of all results in the output directory.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: the config's `output`, else `results`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed of randomised checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Common {
    fn config(&self, default: Option<ExperimentKind>) -> Result<ExperimentConfig, RunnerError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| RunnerError::Config(format!("{}: {e}", path.display())))?;
                ExperimentConfig::from_json(&text, &path.display().to_string())?
            }
            None => match default {
                Some(kind) => ExperimentConfig::for_experiment(kind),
                None => return Err(RunnerError::Config("`--config` is required".into())),
            },
        };
        if let Some(w) = self.workers {
            if w == 0 {
                return Err(RunnerError::Config("`--workers` must be at least 1".into()));
            }
            cfg.workers = Some(w);
        }
        Ok(cfg)
    }

    fn out_dir(&self, cfg: Option<&ExperimentConfig>) -> PathBuf {
        self.out
            .clone()
            .or_else(|| cfg.and_then(|c| c.output.as_ref().map(PathBuf::from)))
            .unwrap_or_else(|| PathBuf::from("results"))
    }
}

fn workers(cfg: &ExperimentConfig) -> usize {
    cfg.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn finish(dir: &Path, result: &SweepResult) -> Result<(), RunnerError> {
    let (csv, _) = write_result(dir, result)?;
    for c in &result.meta.checks {
        println!("{}", c.line());
    }
    println!("wrote {}", csv.display());
    if result.all_pass() {
        Ok(())
    } else {
        Err(RunnerError::Invariant(format!("{} failing check(s) in {}", result.meta.checks.iter().filter(|c| !c.pass).count(), result.stem)))
    }
}

fn run(cli: Cli) -> Result<(), RunnerError> {
    match cli.command {
        Command::Synth(c) => {
            let cfg = c.config(Some(ExperimentKind::Fig2cd))?;
            let dir = c.out_dir(Some(&cfg));
            fs::create_dir_all(&dir).map_err(|e| RunnerError::Io { path: dir.clone(), reason: e.to_string() })?;
            for (stem, csv) in synth_schedules(&cfg)? {
                let path = dir.join(format!("{stem}.csv"));
                fs::write(&path, csv).map_err(|e| RunnerError::Io { path: path.clone(), reason: e.to_string() })?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Simulate(c) => {
            let cfg = c.config(Some(ExperimentKind::Fig2cd))?;
            finish(&c.out_dir(Some(&cfg)), &simulate_gates(&cfg, workers(&cfg))?)
        }
        Command::Sweep(c) => {
            let cfg = c.config(None)?;
            cfg.kind()?;
            finish(&c.out_dir(Some(&cfg)), &run_experiment_with(&cfg, workers(&cfg), c.seed)?)
        }
        Command::Verify(c) => {
            let mut cfg = c.config(Some(ExperimentKind::Verify))?;
            cfg.experiment = Some(ExperimentKind::Verify);
            finish(&c.out_dir(Some(&cfg)), &run_experiment_with(&cfg, workers(&cfg), c.seed)?)
        }
        Command::Report(c) => {
            let cfg = match &c.config {
                Some(_) => Some(c.config(None)?),
                None => None,
            };
            print!("{}", emit_report(&c.out_dir(cfg.as_ref()))?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("holoq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

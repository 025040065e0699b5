// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Config-driven experiments: gate-time and population curves, decoherence
//! and robustness sweeps, the transmon and two-qubit studies, the
//! theory-vs-simulation comparison and the invariant suite. Each run yields
//! a [`SweepResult`] written as CSV plus a JSON metadata sibling; a report
//! summarises target-vs-achieved checks across result files.
//!
//! Results are independent of the worker count: sweep points are evaluated
//! on a private thread pool and gathered in grid order.

mod config;
mod experiments;
mod output;
mod report;
mod verify;

pub use config::{
    ExperimentConfig, ExperimentKind, GateSpec, GridSettings, Range, TransmonSettings, TwoQubitSettings,
    VerifySettings,
};
pub use experiments::{run_experiment, run_experiment_with, simulate_gates, synth_schedules};
pub use output::{
    config_hash, write_result, Cell, Check, ConventionFlags, Metadata, SweepResult, CSV_EXTENSION, META_EXTENSION,
};
pub use report::{emit_report, load_results, REPORT_FILE};
pub use verify::{ideal_gate_grid_check, run_verify};

use std::path::PathBuf;

use thiserror::Error;

/// Process exit code for success.
pub const EXIT_OK: i32 = 0;
/// Process exit code for I/O and other runtime failures.
pub const EXIT_RUNTIME: i32 = 1;
/// Process exit code for an invalid configuration.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit code for a violated numerical invariant.
pub const EXIT_INVARIANT: i32 = 3;

/// Runner failures, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum RunnerError {
    /// Invalid configuration; the message carries the file position when
    /// known.
    #[error("config error: {0}")]
    Config(String),
    /// A numerical invariant failed during a run.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// File-system failure.
    #[error("I/O error at `{path}`: {reason}")]
    Io { path: PathBuf, reason: String },
    /// Report requested for a directory without results.
    #[error("no results found in `{0}`")]
    NoResults(PathBuf),
}

impl RunnerError {
    /// Exit code of the failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunnerError::Config(_) => EXIT_CONFIG,
            RunnerError::Invariant(_) => EXIT_INVARIANT,
            RunnerError::Io { .. } | RunnerError::NoResults(_) => EXIT_RUNTIME,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, e: impl std::fmt::Display) -> Self {
        RunnerError::Io { path: path.into(), reason: e.to_string() }
    }
}

impl From<holoq_pulses::PulseError> for RunnerError {
    fn from(e: holoq_pulses::PulseError) -> Self {
        RunnerError::Config(e.to_string())
    }
}

impl From<holoq_model::ModelError> for RunnerError {
    fn from(e: holoq_model::ModelError) -> Self {
        RunnerError::Config(e.to_string())
    }
}

impl From<holoq_dynamics::DynamicsError> for RunnerError {
    fn from(e: holoq_dynamics::DynamicsError) -> Self {
        RunnerError::Invariant(e.to_string())
    }
}

impl From<holoq_holonomy::HolonomyError> for RunnerError {
    fn from(e: holoq_holonomy::HolonomyError) -> Self {
        RunnerError::Invariant(e.to_string())
    }
}

impl From<holoq_metrics::MetricsError> for RunnerError {
    fn from(e: holoq_metrics::MetricsError) -> Self {
        RunnerError::Invariant(e.to_string())
    }
}

impl From<holoq_perturb::PerturbError> for RunnerError {
    fn from(e: holoq_perturb::PerturbError) -> Self {
        use holoq_perturb::PerturbError as P;
        match e {
            P::OutOfRange(_) | P::Pulses(_) => RunnerError::Config(e.to_string()),
            _ => RunnerError::Invariant(e.to_string()),
        }
    }
}

impl From<holoq_optimal::OptimalError> for RunnerError {
    fn from(e: holoq_optimal::OptimalError) -> Self {
        use holoq_optimal::OptimalError as O;
        match e {
            O::PhaseOutOfRange(_) | O::InvalidRate(_) | O::InvalidSpec(_) | O::Model(_) => {
                RunnerError::Config(e.to_string())
            }
            O::Dynamics(_) | O::Metrics(_) => RunnerError::Invariant(e.to_string()),
        }
    }
}

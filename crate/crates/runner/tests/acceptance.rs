// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs every experiment at its default configuration.

use std::process::ExitCode;
use std::time::Instant;

use holoq_runner::{ideal_gate_grid_check, run_experiment_with, Check, ExperimentConfig, ExperimentKind, Range};

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn run(kind: ExperimentKind) -> Result<Vec<Check>, String> {
    run_with(ExperimentConfig::for_experiment(kind))
}

fn run_with(cfg: ExperimentConfig) -> Result<Vec<Check>, String> {
    run_experiment_with(&cfg, workers(), 0).map(|r| r.meta.checks).map_err(|e| e.to_string())
}

fn of(checks: &[Check], n: u8) -> Vec<Check> {
    checks.iter().filter(|c| c.criterion == Some(n)).cloned().collect()
}

/// Verdict over the checks of one criterion: passes when every check passes
/// and there is at least one; the detail names the first failure or the
/// check count.
fn verdict(checks: Result<Vec<Check>, String>) -> (bool, String) {
    match checks {
        Err(e) => (false, format!("error: {e}")),
        Ok(c) if c.is_empty() => (false, "no checks ran".into()),
        Ok(c) => match c.iter().find(|c| !c.pass) {
            Some(f) => (false, f.line()),
            None => (true, format!("{} checks; e.g. {}", c.len(), c[0].line())),
        },
    }
}

fn criterion(n: u8, name: &str, f: impl FnOnce() -> Result<Vec<Check>, String>) -> bool {
    let start = Instant::now();
    let (pass, detail) = verdict(f());
    println!(
        "criterion {n} {name}: {} ({:.1} s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    pass
}

fn main() -> ExitCode {
    let mut verify = None;
    let mut verify_checks = |n: u8| -> Result<Vec<Check>, String> {
        if verify.is_none() {
            verify = Some(run(ExperimentKind::Verify));
        }
        verify.clone().expect("verify ran").map(|c| of(&c, n))
    };

    let results = [
        criterion(1, "ideal-gate equivalence", || {
            let cfg = ExperimentConfig::for_experiment(ExperimentKind::Verify);
            let worst = ideal_gate_grid_check(&cfg, workers()).map_err(|e| e.to_string())?;
            Ok(vec![Check::below(Some(1), "worst infidelity, 4 schemes × (T, X^1/2, 5×5×5 grid)", worst, 1e-6)])
        }),
        criterion(2, "gate-time closed forms", || run(ExperimentKind::Fig2a).map(|c| of(&c, 2))),
        criterion(3, "decoherence fidelities", || run(ExperimentKind::Fig2cd).map(|c| of(&c, 3))),
        criterion(4, "robustness ordering", || {
            let mut c = of(&run(ExperimentKind::Fig3Rabi)?, 4);
            c.extend(of(&run(ExperimentKind::Fig3Detuning)?, 4));
            Ok(c)
        }),
        criterion(5, "perturbative closed forms and theory vs simulation", || {
            run(ExperimentKind::FigS1).map(|c| of(&c, 5))
        }),
        criterion(6, "transmon T gate", || run(ExperimentKind::Fig4cd).map(|c| of(&c, 6))),
        criterion(7, "two-qubit control-phase gate", || run(ExperimentKind::TwoQubit).map(|c| of(&c, 7))),
        criterion(8, "geometric property suite", || verify_checks(8)),
        criterion(9, "time-optimality oracle", || verify_checks(9)),
        criterion(10, "worker-count determinism", || {
            let mut cfg = ExperimentConfig::for_experiment(ExperimentKind::Fig3Rabi);
            cfg.sweep = Some(Range { min: -0.1, max: 0.1, points: 9 });
            let csv: Vec<String> = [1, 4, 8]
                .iter()
                .map(|&w| run_experiment_with(&cfg, w, 0).map(|r| r.csv()).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            let same = csv.iter().all(|c| c == &csv[0]);
            Ok(vec![Check {
                criterion: Some(10),
                label: "byte-identical CSV across 1, 4 and 8 workers".into(),
                target: "identical".into(),
                achieved: csv.iter().filter(|c| *c == &csv[0]).count() as f64,
                pass: same,
            }])
        }),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

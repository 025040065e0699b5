// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fs;
use std::process::Command;

use holoq_runner::{
    emit_report, load_results, run_experiment_with, simulate_gates, synth_schedules, write_result, ExperimentConfig,
    ExperimentKind, Range, RunnerError, EXIT_CONFIG, EXIT_INVARIANT, EXIT_OK, EXIT_RUNTIME, REPORT_FILE,
};
use proptest::prelude::*;

fn cfg(kind: ExperimentKind) -> ExperimentConfig {
    ExperimentConfig::for_experiment(kind)
}

fn holoq(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_holoq")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn fig2a_durations_match_closed_forms() {
    let mut c = cfg(ExperimentKind::Fig2a);
    c.sweep = Some(Range { min: PI / 4.0, max: PI, points: 4 });
    let r = run_experiment_with(&c, 1, 0).unwrap();
    assert_eq!(r.header, ["gamma", "tau_NHQC", "tau_C_NHQC", "tau_B_NHQC", "tau_CB_NHQC"]);
    // γ = π/4: τ_B = (√7/2)π/Ω₀, i.e. √7/4 in units of 2π/Ω₀.
    let b = r.numbers("tau_B_NHQC");
    assert!((b[0] - 7f64.sqrt() / 4.0).abs() < 1e-14, "{}", b[0]);
    assert!((b[3] - 1.0).abs() < 1e-14);
    assert!(r.numbers("tau_NHQC").iter().all(|&t| t == 1.0));
    assert!(r.numbers("tau_C_NHQC").iter().all(|&t| t == 2.0));
    assert!(r.all_pass(), "{:?}", r.meta.checks);
    assert_eq!(r.meta.checks.iter().filter(|c| c.criterion == Some(2)).count(), 4);
}

#[test]
fn rabi_sweep_keeps_composite_loop_on_top() {
    let mut c = cfg(ExperimentKind::Fig3Rabi);
    c.sweep = Some(Range { min: -0.1, max: 0.1, points: 5 });
    let r = run_experiment_with(&c, 2, 0).unwrap();
    for gate in ["X_HALF", "T"] {
        let cb = r.numbers(&format!("F_CB_NHQC_{gate}"));
        for other in ["NHQC", "C_NHQC", "B_NHQC"] {
            let o = r.numbers(&format!("F_{other}_{gate}"));
            for i in [0, 4] {
                assert!(cb[i] >= o[i], "{gate} {other} at row {i}: {} < {}", cb[i], o[i]);
            }
        }
        // Error-free centre point is the ideal gate.
        assert!(cb[2] > 1.0 - 1e-9);
    }
    assert!(r.all_pass(), "{:?}", r.meta.checks);
}

#[test]
fn identical_configs_give_identical_bytes_for_any_worker_count() {
    let mut c = cfg(ExperimentKind::Fig3Detuning);
    c.sweep = Some(Range { min: -0.1, max: 0.1, points: 5 });
    c.schemes = Some(vec![holoq_pulses::Scheme::BNhqc, holoq_pulses::Scheme::CbNhqc]);
    let csv: Vec<String> = [1, 4, 8].iter().map(|&w| run_experiment_with(&c, w, 0).unwrap().csv()).collect();
    assert_eq!(csv[0], csv[1]);
    assert_eq!(csv[0], csv[2]);
    assert_eq!(csv[0].lines().count(), 6);
}

#[test]
fn transmon_sweep_reaches_targets() {
    let r = run_experiment_with(&cfg(ExperimentKind::Fig4cd), 2, 0).unwrap();
    let six: Vec<_> = r.meta.checks.iter().filter(|c| c.criterion == Some(6)).collect();
    assert_eq!(six.len(), 3, "{six:?}");
    assert!(six.iter().all(|c| c.pass), "{six:?}");
    let b = r.numbers("F_B_NHQC");
    let n = r.numbers("F_NHQC");
    assert!(b.iter().zip(&n).all(|(b, n)| b > n));
}

#[test]
fn transmon_targets_are_checked_at_the_reference_frequency_even_off_grid() {
    let mut c = cfg(ExperimentKind::Fig4cd);
    c.sweep = Some(Range { min: 30.0, max: 40.0, points: 2 });
    let r = run_experiment_with(&c, 1, 0).unwrap();
    assert_eq!(r.rows.len(), 2);
    assert_eq!(r.meta.extras["reference_omega0_mhz"], 45.0);
    assert!(r.meta.checks.iter().any(|c| c.label.contains("45 MHz") && c.pass));
}

#[test]
fn noiseless_gates_are_ideal() {
    let r = simulate_gates(&cfg(ExperimentKind::Fig2cd), 2).unwrap();
    assert_eq!(r.rows.len(), 8);
    assert!(r.numbers("avg_fidelity").iter().all(|&f| f > 1.0 - 1e-9));
    assert!(r.all_pass());
}

#[test]
fn synthesised_schedules_cover_every_scheme_and_gate() {
    let files = synth_schedules(&cfg(ExperimentKind::Fig2cd)).unwrap();
    assert_eq!(files.len(), 8);
    assert!(files.iter().any(|(s, _)| s == "pulse_CB_NHQC_X_HALF"));
    for (_, csv) in &files {
        assert!(csv.starts_with("t,omega,phi,segment\n"));
    }
}

#[test]
fn config_errors_name_the_line() {
    let text = "{\n  \"experiment\": \"FIG2A\",\n  \"omega0\": -1\n}";
    let err = ExperimentConfig::from_json(text, "bad.json").unwrap_err();
    assert_eq!(err.exit_code(), EXIT_CONFIG);
    assert!(err.to_string().contains("bad.json:3: `omega0`"), "{err}");

    let text = "{\n  \"experiment\": \"FIG2A\",\n  \"omega_0\": 1\n}";
    let err = ExperimentConfig::from_json(text, "typo.json").unwrap_err().to_string();
    assert!(err.contains("typo.json:3:") && err.contains("omega_0"), "{err}");

    let text = "{\"experiment\": \"FIG2CD\", \"sweep\": {\"min\": 0, \"max\": 1, \"points\": 3}}";
    assert!(ExperimentConfig::from_json(text, "x").unwrap_err().to_string().contains("does not sweep"));
    let text = "{\"experiment\": \"FIG3_RABI\", \"sweep\": {\"min\": -0.5, \"max\": 0.1, \"points\": 3}}";
    assert!(ExperimentConfig::from_json(text, "x").is_err());
    let text = "{\"experiment\": \"FIG4CD\", \"schemes\": [\"CB_NHQC\"]}";
    assert!(ExperimentConfig::from_json(text, "x").unwrap_err().to_string().contains("transmon"));
}

#[test]
fn error_kinds_map_to_exit_codes() {
    assert_eq!(EXIT_OK, 0);
    assert_eq!(RunnerError::Config("x".into()).exit_code(), 2);
    assert_eq!(RunnerError::Invariant("x".into()).exit_code(), 3);
    assert_eq!(RunnerError::NoResults("d".into()).exit_code(), EXIT_RUNTIME);
}

#[test]
fn report_requires_results_and_lists_checks() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(emit_report(dir.path()), Err(RunnerError::NoResults(_))));
    let mut c = cfg(ExperimentKind::Fig2a);
    c.sweep = Some(Range { min: 1.0, max: 2.0, points: 3 });
    let r = run_experiment_with(&c, 1, 0).unwrap();
    let (csv, meta) = write_result(dir.path(), &r).unwrap();
    assert_eq!(fs::read_to_string(csv).unwrap(), r.csv());
    assert!(fs::read_to_string(meta).unwrap().ends_with("}\n"));
    let loaded = load_results(dir.path()).unwrap();
    assert_eq!(loaded.len(), 1);
    assert_eq!(loaded[0].1, r.meta);
    let text = emit_report(dir.path()).unwrap();
    assert!(text.contains("[criterion 2]") && text.contains("4 of 4 checks pass"), "{text}");
    assert!(dir.path().join(REPORT_FILE).exists());
}

#[test]
fn metadata_hash_ignores_output_and_workers() {
    let a = cfg(ExperimentKind::Fig2a);
    let mut b = a.clone();
    b.output = Some("elsewhere".into());
    b.workers = Some(3);
    assert_eq!(a.canonical_json(), b.canonical_json());
    let mut c = a.clone();
    c.omega0 = 2.0;
    assert_ne!(a.canonical_json(), c.canonical_json());
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = d.join("out");
    let out = out.to_str().unwrap();

    let bad = d.join("bad.json");
    fs::write(&bad, "{\n  \"experiment\": \"FIG2A\",\n  \"grid\": {\"n_states\": 100}\n}").unwrap();
    let (code, _, err) = holoq(&["sweep", "--config", bad.to_str().unwrap(), "--out", out]);
    assert_eq!(code, EXIT_CONFIG, "{err}");
    assert!(err.contains("bad.json:3"), "{err}");

    let (code, _, _) = holoq(&["report", "--out", out]);
    assert_eq!(code, EXIT_RUNTIME);
    let (code, _, _) = holoq(&["sweep", "--out", out]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = holoq(&["simulate", "--workers", "0", "--out", out]);
    assert_eq!(code, EXIT_CONFIG);

    let good = d.join("good.json");
    fs::write(&good, r#"{"experiment": "FIG2A", "sweep": {"min": 1, "max": 2, "points": 3}}"#).unwrap();
    let (code, stdout, err) = holoq(&["sweep", "--config", good.to_str().unwrap(), "--out", out, "--workers", "2"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(stdout.contains("PASS"));
    assert!(d.join("out/fig2a.csv").exists() && d.join("out/fig2a.meta.json").exists());
    let (code, stdout, _) = holoq(&["report", "--out", out]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("checks pass"));

    // Comparing NHQC at 20 MHz with its 45 MHz target fails the check.
    let failing = d.join("failing.json");
    fs::write(
        &failing,
        r#"{"experiment": "FIG4CD", "sweep": {"min": 20, "max": 20, "points": 1}, "transmon": {"reference_omega0_mhz": 20}}"#,
    )
    .unwrap();
    let (code, stdout, _) = holoq(&["sweep", "--config", failing.to_str().unwrap(), "--out", out]);
    assert_eq!(code, EXIT_INVARIANT, "{stdout}");
    assert!(stdout.contains("FAIL"));
    assert!(d.join("out/fig4cd.csv").exists(), "results are written even when checks fail");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ranges_are_sorted_with_exact_endpoints(min in -10.0f64..10.0, span in 0.0f64..10.0, points in 2usize..200) {
        let r = Range { min, max: min + span, points };
        let v = r.values();
        prop_assert_eq!(v.len(), points);
        prop_assert_eq!(v[0], r.min);
        prop_assert_eq!(v[points - 1], r.max);
        prop_assert!(v.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn canonical_config_round_trips(omega0 in 0.1f64..10.0, steps in 250usize..5000, name in "[a-z]{1,8}") {
        let mut c = cfg(ExperimentKind::Fig3Rabi);
        c.omega0 = omega0;
        c.grid.steps_per_segment = 2 * steps;
        c.name = Some(name);
        let back = ExperimentConfig::from_json(&c.canonical_json(), "rt").unwrap();
        prop_assert_eq!(back, c);
    }
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Overlap integrals against closed forms and the perturbative fidelities
//! against direct simulation.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use holoq_model::{LambdaSeries, LAMBDA_EXCITED};
use holoq_perturb::{
    comparison_csv, detuning_operator, fidelity_theory_detuning, fidelity_theory_rabi, gate_eta3, p_closed_form,
    p_matrix, q_matrix, solution_frame, theory_vs_simulation, ErrorChannel, ErrorModelContext, OverlapKind,
    OverlapMatrix, PerturbError, COMPARISON_HEADER,
};
use holoq_pulses::{eta_path, synth_pulse, PulseSchedule, Scheme, SchemeSpec};
use holoq_qcore::{c64, CMatrix};
use proptest::prelude::*;

fn x_half(scheme: Scheme) -> PulseSchedule {
    synth_pulse(&SchemeSpec::new(scheme, PI / 2.0, 0.0, PI / 2.0, 1.0)).unwrap()
}

fn q_of(s: &PulseSchedule) -> OverlapMatrix {
    q_matrix(&solution_frame(s).unwrap(), &LambdaSeries::new(s.clone())).unwrap()
}

fn p_of(s: &PulseSchedule) -> OverlapMatrix {
    p_matrix(&solution_frame(s).unwrap(), &detuning_operator(1.0)).unwrap()
}

#[test]
fn b_loop_x_half_overlaps_match_closed_forms() {
    let q = q_of(&x_half(Scheme::BNhqc));
    assert_eq!(q.kind, OverlapKind::RabiQ);
    assert!((q.get(0, 0) - c64(-0.75 * PI, 0.0)).norm() < 1e-6, "Q00 = {}", q.get(0, 0));
    assert!(q.get(0, 1).norm() < 1e-6, "Q01 = {}", q.get(0, 1));
    assert!(q.get(0, 2).norm() < 1e-12);
    assert!(q.hermiticity_error() < 1e-9);
}

#[test]
fn conventional_x_half_overlaps_match_closed_forms() {
    let q = q_of(&x_half(Scheme::Nhqc));
    assert!(q.get(0, 0).norm() < 1e-6, "Q00 = {}", q.get(0, 0));
    // |Q₀₁| = π sin(π/4), purely imaginary; its sign follows the drive-phase
    // convention and does not enter the fidelity.
    assert!((q.get(0, 1).norm() - PI * FRAC_1_SQRT_2).abs() < 1e-6, "Q01 = {}", q.get(0, 1));
    assert!(q.get(0, 1).re.abs() < 1e-9);
    assert!(q.get(0, 2).norm() < 1e-12);
    assert!(q.hermiticity_error() < 1e-9);
}

#[test]
fn dark_state_never_overlaps() {
    for scheme in Scheme::ALL {
        let q = q_of(&x_half(scheme));
        for k in 0..3 {
            assert!(q.get(k, 2).norm() < 1e-12 && q.get(2, k).norm() < 1e-12, "{scheme:?}");
        }
    }
}

#[test]
fn dressed_solutions_keep_constant_excited_population() {
    let s = x_half(Scheme::BNhqc);
    let f = solution_frame(&s).unwrap();
    for (k, expected) in [(0, 0.25), (1, 0.75)] {
        for piece in &f.states {
            for st in &piece[k] {
                assert!((st[LAMBDA_EXCITED].norm_sqr() - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn detuning_overlaps_match_closed_forms() {
    let p = p_of(&x_half(Scheme::Nhqc));
    assert_eq!(p.kind, OverlapKind::DetuningP);
    assert!((p.get(0, 0).re - PI).abs() < 1e-9 && (p.get(1, 1).re - PI).abs() < 1e-9);
    let s = x_half(Scheme::BNhqc);
    let tau = s.duration();
    let p = p_of(&s);
    assert!((p.get(0, 0).re + p.get(1, 1).re - tau).abs() < 1e-9);
    let path = eta_path(PI / 2.0, 1.0, 8000).unwrap();
    let ((p00, p11, p01), p01_alt) = p_closed_form(&path, 1.0);
    assert!((p01 - p01_alt).norm() < 1e-12);
    assert!((p.get(0, 0) - p00).norm() < 1e-6, "{} vs {p00}", p.get(0, 0));
    assert!((p.get(1, 1) - p11).norm() < 1e-6);
    assert!((p.get(0, 1) - p01).norm() < 1e-6);
    assert!(p.hermiticity_error() < 1e-9);
}

#[test]
fn quadratures_are_converged() {
    for scheme in [Scheme::BNhqc, Scheme::Nhqc, Scheme::CbNhqc] {
        let coarse = synth_pulse(&SchemeSpec::new(scheme, 1.0, 0.3, 1.3, 1.0).with_grid(4000)).unwrap();
        let fine = synth_pulse(&SchemeSpec::new(scheme, 1.0, 0.3, 1.3, 1.0).with_grid(8000)).unwrap();
        let dq = (&q_of(&coarse).entries - &q_of(&fine).entries).norm_fro();
        let dp = (&p_of(&coarse).entries - &p_of(&fine).entries).norm_fro();
        assert!(dq < 1e-9 && dp < 1e-9, "{scheme:?}: ΔQ {dq:e}, ΔP {dp:e}");
    }
}

#[test]
fn theory_is_exact_without_errors() {
    for scheme in [Scheme::BNhqc, Scheme::Nhqc] {
        let s = x_half(scheme);
        let eta3 = gate_eta3(scheme, PI / 2.0);
        assert!((fidelity_theory_rabi(0.0, &q_of(&s), eta3).unwrap() - 1.0).abs() < 1e-15);
        assert!((fidelity_theory_detuning(0.0, &p_of(&s), eta3).unwrap() - 1.0).abs() < 1e-15);
    }
    assert!((gate_eta3(Scheme::BNhqc, PI / 2.0) - 2.0 * PI / 3.0).abs() < 1e-12);
    assert!((gate_eta3(Scheme::Nhqc, 0.3) - PI / 2.0).abs() < 1e-15);
}

#[test]
fn out_of_range_fractions_are_rejected() {
    let q = q_of(&x_half(Scheme::BNhqc));
    assert!(matches!(fidelity_theory_rabi(0.25, &q, 1.0), Err(PerturbError::OutOfRange(_))));
    assert!(matches!(fidelity_theory_detuning(f64::NAN, &q, 1.0), Err(PerturbError::OutOfRange(_))));
    assert!(q_matrix(&solution_frame(&x_half(Scheme::BNhqc)).unwrap(), &holoq_model::FnSeries::new(4, |_| CMatrix::zeros(4))).is_err());
}

#[test]
fn rabi_theory_matches_simulation() {
    for scheme in [Scheme::BNhqc, Scheme::Nhqc] {
        let ctx = ErrorModelContext::new(&SchemeSpec::new(scheme, PI / 2.0, 0.0, PI / 2.0, 1.0), ErrorChannel::Rabi).unwrap();
        for alpha in [-0.1, -0.05, 0.05, 0.1] {
            let (t, s) = (ctx.theory(alpha).unwrap(), ctx.simulate(alpha).unwrap());
            println!("{scheme:?} α={alpha}: theory {t:.6} sim {s:.6} diff {:.2e}", (t - s).abs());
            assert!((t - s).abs() < 2e-3, "{scheme:?} α={alpha}: theory {t} sim {s}");
        }
    }
    let ctx = ErrorModelContext::new(&SchemeSpec::new(Scheme::BNhqc, PI / 2.0, 0.0, PI / 2.0, 1.0), ErrorChannel::Rabi).unwrap();
    let (t, s) = (ctx.theory(0.1).unwrap(), ctx.simulate(0.1).unwrap());
    assert!((t - s).abs() < 5e-4, "α=0.1: theory {t} sim {s}");
}

#[test]
fn detuning_theory_matches_simulation_and_favours_b_loop() {
    let rows = theory_vs_simulation(ErrorChannel::Detuning, &[-0.1, -0.05, 0.05, 0.1], PI / 2.0, 0.0, PI / 2.0).unwrap();
    for r in &rows {
        println!("{r:?}");
        assert!((r.f_theory_bnhqc - r.f_sim_bnhqc).abs() < 2e-3, "{r:?}");
        assert!((r.f_theory_nhqc - r.f_sim_nhqc).abs() < 2e-3, "{r:?}");
        if r.error_fraction.abs() == 0.05 {
            assert!((r.f_theory_bnhqc - r.f_sim_bnhqc).abs() < 1e-3);
            assert!((r.f_theory_nhqc - r.f_sim_nhqc).abs() < 1e-3);
        }
        if r.error_fraction.abs() == 0.1 {
            assert!(r.f_theory_bnhqc > r.f_theory_nhqc && r.f_sim_bnhqc > r.f_sim_nhqc, "{r:?}");
        }
    }
}

#[test]
fn comparison_csv_layout() {
    let rows = theory_vs_simulation(ErrorChannel::Rabi, &[0.0, 0.1], PI / 2.0, 0.0, PI / 2.0).unwrap();
    let csv = comparison_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], COMPARISON_HEADER);
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.00000000000000e0,1.0"));
    assert_eq!(lines[2].split(',').count(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn rabi_theory_is_even_in_alpha(alpha in 0.0..0.2f64) {
        let q = OverlapMatrix {
            entries: CMatrix::from_rows(&[
                &[c64(-0.75 * PI, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
                &[c64(0.0, 0.0), c64(0.75 * PI, 0.0), c64(0.0, 0.0)],
                &[c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
            ]),
            kind: OverlapKind::RabiQ,
        };
        let eta3 = 2.0 * PI / 3.0;
        let (a, b) = (fidelity_theory_rabi(alpha, &q, eta3).unwrap(), fidelity_theory_rabi(-alpha, &q, eta3).unwrap());
        prop_assert_eq!(a, b);
        prop_assert!(a <= 1.0 + 1e-12);
    }
}

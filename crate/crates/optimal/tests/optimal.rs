// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimum-time closed forms, the bandwidth constraint, the brute-force
//! minimality probe and the two-qubit calibration.

use std::f64::consts::PI;

use holoq_dynamics::propagate_schedule;
use holoq_model::{ErrorParams, LambdaSeries, TwoQubitModel, TwoQubitParams};
use holoq_optimal::{
    calibrate_two_qubit, min_time_1q, min_time_2q, qbe_constraint_residual, ramp_unitary, realized_phases,
    time_optimality_search, two_qubit_unitary, CalibrationSpec, OptimalError, OptimalitySearchSpec, PhaseRamp,
};
use holoq_pulses::{synth_pulse, Envelope, Scheme, SchemeSpec};
use holoq_qcore::{c64, CVector};
use proptest::prelude::*;

#[test]
fn single_qubit_minimum_time_examples() {
    assert!((min_time_1q(PI, 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
    assert!((min_time_1q(PI / 2.0, 1.0).unwrap() - 3f64.sqrt() * PI).abs() < 1e-12);
    assert!((min_time_1q(PI / 4.0, 2.0).unwrap() - 7f64.sqrt() / 2.0 * PI / 2.0).abs() < 1e-12);
    assert!(matches!(min_time_1q(0.0, 1.0), Err(OptimalError::PhaseOutOfRange(_))));
    assert!(matches!(min_time_1q(2.0 * PI, 1.0), Err(OptimalError::PhaseOutOfRange(_))));
    assert!(matches!(min_time_1q(1.0, 0.0), Err(OptimalError::InvalidRate(_))));
}

#[test]
fn minimum_time_never_exceeds_resonant_loop() {
    let mut k = 1;
    while (k as f64) * 1e-3 < 2.0 * PI {
        let g = k as f64 * 1e-3;
        let t = min_time_1q(g, 1.0).unwrap();
        assert!(t <= 2.0 * PI + 1e-12);
        if (g - PI).abs() > 1e-3 {
            assert!(t < 2.0 * PI);
        }
        k += 1;
    }
    assert_eq!(min_time_1q(PI, 1.0).unwrap(), 2.0 * PI);
}

#[test]
fn two_qubit_minimum_time_examples() {
    let (t, mu) = min_time_2q(PI, 0.5).unwrap();
    assert!((t - 4.0 * PI).abs() < 1e-12 && mu == 0.0);
    let (t, mu) = min_time_2q(PI / 4.0, 2.0).unwrap();
    // 2√(π² − (3π/4)²)/g′ = (√7/2)π/g′.
    assert!((t - 7f64.sqrt() * PI / 4.0).abs() < 1e-12);
    assert!((mu - 1.5 * PI / t).abs() < 1e-12);
    assert!(min_time_2q(-0.1, 1.0).is_err());
}

#[test]
fn bandwidth_residuals() {
    let s = synth_pulse(&SchemeSpec::new(Scheme::BNhqc, 0.4, 0.2, PI / 2.0, 1.3)).unwrap();
    let r = qbe_constraint_residual(&LambdaSeries::new(s.clone()), &s.times, 1.3);
    assert!(r.residual < 1e-10 && r.constant_bandwidth, "{r:?}");
    let alpha = 0.1;
    let r = qbe_constraint_residual(&LambdaSeries::with_errors(s.clone(), ErrorParams::rabi(alpha)), &s.times, 1.3);
    assert!((r.residual - (2.0 * alpha + alpha * alpha) * 1.69).abs() < 1e-12, "{r:?}");
    assert!(!r.constant_bandwidth);
    let s = synth_pulse(&SchemeSpec::new(Scheme::BNhqc, 0.4, 0.2, PI / 2.0, 1.3).with_envelope(Envelope::Sin2)).unwrap();
    let r = qbe_constraint_residual(&LambdaSeries::new(s.clone()), &s.times, 1.3);
    assert!((r.residual - 1.69).abs() < 1e-12, "{r:?}");
    assert!(!r.constant_bandwidth);
}

#[test]
fn ramp_propagator_matches_full_model() {
    for gamma in [PI / 4.0, PI / 2.0, 1.3 * PI] {
        let s = synth_pulse(&SchemeSpec::new(Scheme::BNhqc, 0.9, 0.4, gamma, 1.0)).unwrap();
        let u = propagate_schedule(&LambdaSeries::new(s.clone()), &s).unwrap().matrix;
        let drive_phi1 = PI - 0.4;
        let mu = CVector::from_vec(vec![
            holoq_qcore::Complex64::from_polar((0.45f64).sin(), drive_phi1),
            c64((0.45f64).cos(), 0.0),
            c64(0.0, 0.0),
        ]);
        let full = mu.inner(&u.apply(&mu));
        let seg = &s.segments[0];
        let ramp = PhaseRamp { duration: s.duration(), omega0: 1.0, knots: vec![seg.phi_at(0.0), seg.phi_at(s.duration())] };
        let reduced = ramp_unitary(&ramp)[(0, 0)];
        assert!((full - reduced).norm() < 1e-6, "γ={gamma}: {full} vs {reduced}");
        assert!((reduced - holoq_qcore::Complex64::from_polar(1.0, gamma)).norm() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn ramp_propagators_are_unitary(d in 0.1..10.0f64, k in proptest::collection::vec(-7.0..7.0f64, 1..7)) {
        let u = ramp_unitary(&PhaseRamp { duration: d, omega0: 1.0, knots: k });
        prop_assert!(u.unitarity_error() < 1e-12);
    }
}

#[test]
fn search_recovers_analytic_times() {
    let r = time_optimality_search(&OptimalitySearchSpec::new(PI / 2.0, 1.0, 2, 1e-4)).unwrap();
    let tau = 3f64.sqrt() * PI;
    let found = r.tau_found.unwrap();
    assert!((found - tau).abs() <= 0.02 * tau, "{found} vs {tau}");
    assert!(!r.below_bound && !r.tolerance_dominated);
    let r = time_optimality_search(&OptimalitySearchSpec::new(PI, 1.0, 1, 1e-4)).unwrap();
    assert!((r.tau_found.unwrap() - 2.0 * PI).abs() <= 0.02 * 2.0 * PI);
    assert_eq!(r.n_candidates, 26);
}

#[test]
fn search_never_beats_the_bound() {
    for gamma in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI] {
        for knots in 1..=4 {
            let r = time_optimality_search(&OptimalitySearchSpec::new(gamma, 1.0, knots, 1e-4)).unwrap();
            assert!(!r.below_bound, "γ={gamma} knots={knots}: {r:?}");
            if let Some(t) = r.tau_found {
                assert!(t >= r.tau_analytic - r.duration_step * (1.0 + 1e-9));
            }
        }
    }
}

#[test]
fn loose_tolerance_is_flagged() {
    let r = time_optimality_search(&OptimalitySearchSpec::new(PI / 2.0, 1.0, 2, 0.5)).unwrap();
    assert!(r.below_bound && r.tolerance_dominated, "{r:?}");
}

#[test]
fn invalid_search_specs_are_rejected() {
    for spec in [
        OptimalitySearchSpec::new(PI / 2.0, 1.0, 0, 1e-4),
        OptimalitySearchSpec::new(PI / 2.0, 1.0, 7, 1e-4),
        OptimalitySearchSpec::new(PI / 2.0, 1.0, 2, 1e-6),
        OptimalitySearchSpec::new(PI / 2.0, 1.0, 2, 1e-4).with_phase_grid(1),
        OptimalitySearchSpec::new(0.0, 1.0, 2, 1e-4),
    ] {
        assert!(time_optimality_search(&spec).is_err(), "{spec:?}");
    }
}

#[test]
fn search_report_is_thread_count_independent_and_serialisable() {
    let spec = OptimalitySearchSpec::new(3.0 * PI / 4.0, 1.0, 3, 1e-4);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| time_optimality_search(&spec).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    let json = serde_json::to_value(&one).unwrap();
    for key in ["gamma", "tau_analytic", "tau_found", "n_candidates", "tolerance"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn two_qubit_calibration_reaches_target() {
    let base = TwoQubitParams::reference();
    let cal = calibrate_two_qubit(&base, &CalibrationSpec::default()).unwrap();
    for s in &cal.slices {
        println!("{}: best {} F {:?} unimodal {}", s.parameter, s.best_value(), s.fidelities, s.unimodal);
    }
    println!("calibrated F = {} τ₂ = {} μ = {} β = {} ξ = {:?}", cal.fidelity, cal.tau2, cal.params.mu, cal.params.beta_mod, cal.realized_xi);
    assert!(cal.fidelity >= 0.990, "{}", cal.fidelity);
    assert!(cal.slices[1].unimodal && cal.slices[2].unimodal);
    let full = two_qubit_unitary(&cal.params, cal.tau2, TwoQubitModel::Full, 20000).unwrap();
    let eff = two_qubit_unitary(&cal.params, cal.tau2, TwoQubitModel::Effective, 4000).unwrap();
    let gap = 1.0 - eff.hs_inner(&full).norm() / 4.0;
    assert!(gap < 5e-3, "effective vs full {gap}");
    let (x1, x2) = realized_phases(&full);
    assert!((x1 - PI / 4.0).abs() < 0.1 && (x2 + PI / 4.0).abs() < 0.1, "{x1} {x2}");
}

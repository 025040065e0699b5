// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Schedule synthesis: closed-form durations, areas, phase laws and export.

use std::f64::consts::PI;

use holoq_pulses::{
    b_nhqc_duration, eta_path, synth_pulse, Envelope, PhaseLaw, PulseError, Scheme, SchemeSpec,
};
use proptest::prelude::*;

fn spec(scheme: Scheme, gamma: f64) -> SchemeSpec {
    SchemeSpec::new(scheme, PI / 2.0, 0.0, gamma, 1.0).with_grid(1000)
}

#[test]
fn b_nhqc_at_gamma_pi_is_flat_phase_full_loop() {
    let s = synth_pulse(&spec(Scheme::BNhqc, PI)).unwrap();
    assert_eq!(s.segments.len(), 1);
    assert!((s.duration() - 2.0 * PI).abs() < 1e-12);
    assert!(s.phi.iter().all(|p| p.abs() < 1e-12));
}

#[test]
fn b_nhqc_quarter_pi_duration() {
    let s = synth_pulse(&spec(Scheme::BNhqc, PI / 4.0)).unwrap();
    let expected = 7f64.sqrt() / 2.0 * PI;
    assert!((s.duration() - expected).abs() < 1e-12);
    assert!((s.duration() - 4.156).abs() < 1e-3);
}

#[test]
fn nhqc_duration_is_independent_of_gamma() {
    for g in [0.3, PI / 4.0, PI / 2.0, PI, 5.0] {
        let s = synth_pulse(&spec(Scheme::Nhqc, g)).unwrap();
        assert!((s.duration() - 2.0 * PI).abs() < 1e-12);
        let c = synth_pulse(&spec(Scheme::CNhqc, g)).unwrap();
        assert!((c.duration() - 4.0 * PI).abs() < 1e-12);
    }
}

#[test]
fn cb_nhqc_half_pi_has_two_offset_segments() {
    let s = synth_pulse(&spec(Scheme::CbNhqc, PI / 2.0)).unwrap();
    assert_eq!(s.segments.len(), 2);
    let each = PI * 7f64.sqrt() / 2.0;
    for seg in &s.segments {
        assert!((seg.duration - each).abs() < 1e-12);
    }
    let (PhaseLaw::Linear { start: a, swing: sa }, PhaseLaw::Linear { start: b, .. }) =
        (s.segments[0].phase, s.segments[1].phase)
    else {
        panic!("expected linear phase laws");
    };
    // The second segment continues the first ramp, shifted by π.
    assert!(((b - (a + sa)) - PI).abs() < 1e-12);
}

#[test]
fn nhqc_phase_jumps_at_midpoint() {
    let s = synth_pulse(&spec(Scheme::Nhqc, PI / 4.0)).unwrap();
    let seg = &s.segments[0];
    let PhaseLaw::Jump { before, after } = seg.phase else { panic!("expected jump") };
    assert!(((after - before) - (PI - PI / 4.0)).abs() < 1e-12);
    assert_eq!(s.phi_at(0.25 * PI), before);
    assert_eq!(s.phi_at(1.5 * PI), after);
    assert_eq!(seg.jump_time(), Some(PI));
}

#[test]
fn b_phase_ramp_matches_closed_form() {
    let g = PI / 2.0;
    let s = synth_pulse(&spec(Scheme::BNhqc, g)).unwrap();
    let tau = s.duration();
    for (&t, &p) in s.times.iter().zip(&s.phi) {
        assert!((p - 2.0 * (PI - g) * t / tau).abs() < 1e-12);
    }
}

#[test]
fn constant_area_is_two_pi_per_loop() {
    for scheme in Scheme::ALL {
        for env in [Envelope::Constant, Envelope::Sin2] {
            let s = synth_pulse(&spec(scheme, PI).with_envelope(env)).unwrap();
            // Single-loop schemes at γ = π run full 2π-area loops; CB-NHQC runs
            // two loops of phase π/2, each of area 2√(π² − (π/2)²) = √3·π.
            let nominal = match scheme {
                Scheme::CbNhqc => 2.0 * 3f64.sqrt() * PI,
                _ => 2.0 * PI * scheme.loops() as f64,
            };
            assert!((s.area() - nominal).abs() < 1e-9 * nominal, "{scheme} {env:?}");
            assert!((s.sampled_area() - nominal).abs() < 1e-9 * nominal, "{scheme} {env:?}");
        }
    }
}

#[test]
fn sin2_preserves_area_and_doubles_duration() {
    for scheme in Scheme::ALL {
        let c = synth_pulse(&spec(scheme, 1.1)).unwrap();
        let s = synth_pulse(&spec(scheme, 1.1).with_envelope(Envelope::Sin2)).unwrap();
        assert!((s.area() - c.area()).abs() < 1e-9 * c.area());
        assert!((s.sampled_area() - c.area()).abs() < 1e-9 * c.area());
        assert!((s.duration() - 2.0 * c.duration()).abs() < 1e-12);
        let peak = s.omega.iter().cloned().fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-12);
        assert_eq!(s.omega[0], 0.0);
    }
}

#[test]
fn b_nhqc_rejects_degenerate_gamma() {
    for g in [0.0, 1e-7, 2.0 * PI, -0.1, f64::NAN] {
        assert!(synth_pulse(&spec(Scheme::BNhqc, g)).is_err(), "γ = {g}");
    }
    assert!(matches!(b_nhqc_duration(0.0, 1.0), Err(PulseError::GammaOutOfRange { .. })));
    assert!("XYZ".parse::<Scheme>().is_err());
    assert_eq!("CB_NHQC".parse::<Scheme>().unwrap(), Scheme::CbNhqc);
}

#[test]
fn drive_angles_follow_gate_convention() {
    let s = synth_pulse(&SchemeSpec::new(Scheme::BNhqc, 0.7, 0.4, 1.0, 1.0).with_grid(600)).unwrap();
    assert_eq!(s.theta, 0.7);
    assert!((s.phi1 - (PI - 0.4)).abs() < 1e-12);
}

#[test]
fn csv_export_has_header_and_fifteen_digits() {
    let s = synth_pulse(&spec(Scheme::CbNhqc, 1.0)).unwrap();
    let csv = s.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,omega,phi,segment"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), s.times.len());
    assert_eq!(rows.len(), 2 * 1000 + 1);
    let fields: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(fields.len(), 4);
    let mantissa = fields[0].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 15);
    assert!(rows.last().unwrap().ends_with(",1"));
    // times strictly increasing, no duplicated boundary
    assert!(s.times.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn eta_path_examples() {
    let p = eta_path(PI / 2.0, 1.0, 400).unwrap();
    assert!((p.eta3 - 2.0 * PI / 3.0).abs() < 1e-12);
    let tau = p.duration();
    for (t, e2) in p.times.iter().zip(&p.eta2) {
        assert!((e2 + PI * t / tau).abs() < 1e-12);
    }
    let q = eta_path(PI, 1.0, 400).unwrap();
    assert!((q.eta3 - PI / 2.0).abs() < 1e-12);
    assert!(q.eta2.iter().all(|e| e.abs() < 1e-12));
    assert!(eta_path(0.0, 1.0, 10).is_err());
    assert!(eta_path(2.0 * PI, 1.0, 10).is_err());
}

#[test]
fn eta_path_duration_matches_synthesised_schedule() {
    for k in 1..200 {
        let g = 2.0 * PI * k as f64 / 200.0;
        let p = eta_path(g, 1.3, 10).unwrap();
        let closed = 2.0 * (PI * PI - (PI - g).powi(2)).sqrt() / 1.3;
        assert!((p.duration() - closed).abs() < 1e-12);
        assert!((p.eta1.last().unwrap() - 2.0 * PI).abs() < 1e-9);
        assert!((p.eta2.last().unwrap() - 2.0 * (g - PI)).abs() < 1e-9);
    }
}

#[test]
fn segment_eta_angles_close_the_loop() {
    let s = synth_pulse(&spec(Scheme::BNhqc, PI / 2.0).with_envelope(Envelope::Sin2)).unwrap();
    let seg = &s.segments[0];
    let (e1, e2, c3) = seg.eta_at(seg.t_end());
    assert!((e1 - 2.0 * PI).abs() < 1e-12);
    assert!((c3 + 0.5).abs() < 1e-12);
    assert!((e2 - 2.0 * PI * c3).abs() < 1e-12);
}

proptest! {
    #[test]
    fn b_duration_monotone_and_bounded(a in 1e-3f64..PI, b in 1e-3f64..PI) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let tl = b_nhqc_duration(lo, 1.0).unwrap();
        let th = b_nhqc_duration(hi, 1.0).unwrap();
        prop_assert!(tl <= th + 1e-15);
        prop_assert!(th <= 2.0 * PI + 1e-12);
    }

    #[test]
    fn eta3_is_constant_and_in_open_interval(g in 1e-3f64..(2.0 * PI - 1e-3), w in 0.1f64..10.0) {
        let p = eta_path(g, w, 50).unwrap();
        prop_assert!(p.eta3 > 0.0 && p.eta3 < PI);
        let dur = 2.0 * PI * p.eta3.sin() / w;
        prop_assert!((p.duration() - dur).abs() < 1e-12 * dur.max(1.0));
    }

    #[test]
    fn area_invariant_over_gamma(g in 0.05f64..(2.0 * PI - 0.05), w in 0.2f64..5.0) {
        for scheme in [Scheme::Nhqc, Scheme::CNhqc] {
            let s = synth_pulse(&SchemeSpec::new(scheme, 1.0, 0.0, g, w).with_grid(500)).unwrap();
            prop_assert!((s.area() - 2.0 * PI * scheme.loops() as f64).abs() < 1e-9);
        }
        let s = synth_pulse(&SchemeSpec::new(Scheme::BNhqc, 1.0, 0.0, g, w).with_grid(500)).unwrap();
        let nominal = 2.0 * (PI * PI - (PI - g).powi(2)).sqrt();
        prop_assert!((s.area() - nominal).abs() < 1e-9 * nominal);
        prop_assert!((s.sampled_area() - nominal).abs() < 1e-9 * nominal);
    }
}

#[test]
fn pieces_split_at_phase_jumps() {
    let s = synth_pulse(&spec(Scheme::CNhqc, 1.0)).unwrap();
    let p = s.pieces();
    assert_eq!(p.len(), 4);
    assert!(p.windows(2).all(|w| w[0].1 == w[1].0));
    assert_eq!(p.iter().map(|x| x.2).sum::<usize>(), 2 * 1000);
    assert!((p[3].1 - s.duration()).abs() < 1e-12);
    let b = synth_pulse(&spec(Scheme::CbNhqc, 1.0)).unwrap();
    assert_eq!(b.pieces().len(), 2);
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian builders, Bessel functions and decoherence specifications.

use std::f64::consts::PI;

use holoq_model::{
    bessel_j1, bessel_jn, h_lambda, h_transmon4, h_two_qubit_eff, h_two_qubit_full, level_index, lindblad_spec,
    mhz_to_rad_per_ns, ErrorParams, HamiltonianSeries, LambdaSeries, ModelError, TransmonParams, TwoQubitModel,
    TwoQubitParams, TwoQubitSeries,
};
use holoq_pulses::{synth_pulse, Envelope, Scheme, SchemeSpec};
use holoq_qcore::{c64, CMatrix, Complex64};
use proptest::prelude::*;

/// Power series ∑(−1)ᵏ(x/2)^{2k+1}/(k!(k+1)!) summed to convergence.
fn j1_series(x: f64) -> f64 {
    let mut term = x / 2.0;
    let mut sum = term;
    let q = -(x * x) / 4.0;
    for k in 1..200 {
        term *= q / (k as f64 * (k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

#[test]
fn lambda_theta_zero_couples_only_one() {
    let h = h_lambda(0.8, 0.3, 0.0, 1.2, ErrorParams::NONE, 1.0);
    assert_eq!(h[(0, 2)], c64(0.0, 0.0));
    let expected = Complex64::from_polar(0.4, -0.3);
    assert!((h[(1, 2)] - expected).norm() < 1e-15);
    assert!(h.is_hermitian(0.0));
}

#[test]
fn lambda_detuning_only() {
    let h = h_lambda(0.0, 0.0, 1.0, 0.0, ErrorParams::detuning(0.1), 1.0);
    let expected = CMatrix::diag(&[c64(0.0, 0.0), c64(0.0, 0.0), c64(0.1, 0.0)]);
    assert!((&h - &expected).norm_fro() < 1e-15);
}

#[test]
fn error_params_bounds() {
    assert!(ErrorParams { alpha: 0.5, beta: -0.5 }.validate().is_ok());
    assert!(ErrorParams { alpha: 0.6, beta: 0.0 }.validate().is_err());
    assert!(ErrorParams { alpha: 0.0, beta: f64::NAN }.validate().is_err());
}

#[test]
fn constant_schedule_keeps_bandwidth_fixed() {
    let s = synth_pulse(&SchemeSpec::new(Scheme::BNhqc, 1.0, 0.4, 2.0, 1.3).with_grid(500)).unwrap();
    let series = LambdaSeries::new(s.clone());
    for &t in s.times.iter().step_by(37) {
        let h = series.at(t);
        assert!((2.0 * (&h * &h).trace().re - 1.3f64.powi(2)).abs() < 1e-12);
        assert!(h.hermiticity_error() < 1e-13);
    }
}

#[test]
fn transmon_hamiltonian_structure() {
    let p = TransmonParams::new(mhz_to_rad_per_ns(-260.0), mhz_to_rad_per_ns(45.0));
    p.validate().unwrap();
    assert!(TransmonParams::new(0.1, 0.05).validate().is_err());
    assert!(TransmonParams::new(-0.1, 0.5).validate().is_err());
    let h = h_transmon4(0.2, 0.7, 0.9, 0.4, &p, 3.3);
    assert!(h.hermiticity_error() < 1e-13);
    // nearest-neighbour ladder only
    for (i, j) in [(0, 2), (0, 3), (1, 3)] {
        assert_eq!(h[(i, j)], c64(0.0, 0.0));
    }
    assert!((0..4).all(|k| h[(k, k)] == c64(0.0, 0.0)));
    // at t = 0 the resonant elements reproduce the Λ couplings
    let h0 = h_transmon4(0.2, 0.7, 0.9, 0.4, &p, 0.0);
    let lam = h_lambda(0.2, 0.7, 0.9, 0.4, ErrorParams::NONE, 1.0);
    let a = lam[(0, 2)];
    let b = lam[(1, 2)];
    assert!((h0[(0, 1)] - (a + b.conj() / 2f64.sqrt())).norm() < 1e-15);
    assert!((h0[(1, 2)] - (a * 2f64.sqrt() + b.conj())).norm() < 1e-15);
}

#[test]
fn two_qubit_full_support_and_limits() {
    let p = TwoQubitParams::reference();
    p.validate().unwrap();
    let allowed = [
        (level_index(1, 1), level_index(0, 2)),
        (level_index(2, 0), level_index(1, 1)),
        (level_index(3, 1), level_index(2, 2)),
        (level_index(2, 2), level_index(1, 3)),
    ];
    for t in [0.0, 1.7, 13.0] {
        let h = h_two_qubit_full(t, &p);
        assert!(h.hermiticity_error() < 1e-13);
        for i in 0..16 {
            for j in 0..16 {
                let listed = allowed.iter().any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j));
                if !listed {
                    assert_eq!(h[(i, j)], c64(0.0, 0.0), "({i},{j})");
                }
            }
        }
    }
    let h0 = h_two_qubit_full(0.0, &p);
    let phase = Complex64::from_polar(1.0, p.beta_mod);
    for (i, j) in allowed {
        let arg = (h0[(i, j)] / phase).arg();
        assert!(arg.abs() < 1e-12);
    }
    let zero = TwoQubitParams { g12: 0.0, ..p };
    assert_eq!(h_two_qubit_full(2.0, &zero).norm_fro(), 0.0);
}

#[test]
fn first_sideband_average_gives_effective_coupling() {
    // Time-average e^{-iνt}·(first term at μ = 0) over one modulation period.
    let p = TwoQubitParams { mu: 0.0, ..TwoQubitParams::reference() };
    let nu = p.nu();
    let n = 20000;
    let period = 2.0 * PI / nu;
    let (i, j) = (level_index(1, 1), level_index(0, 2));
    let mut acc = c64(0.0, 0.0);
    for k in 0..n {
        let t = (k as f64 + 0.5) * period / n as f64;
        acc += h_two_qubit_full(t, &p)[(i, j)] * Complex64::from_polar(1.0, -(p.delta1 - p.kappa2 - nu) * t);
    }
    let avg = acc / n as f64;
    let expected = 0.5 * p.g_eff();
    assert!((avg.norm() - expected).abs() < 1e-9 * expected);
    // the sideband carries the factor i of the Jacobi–Anger expansion
    assert!((avg.arg() - PI / 2.0).abs() < 1e-9);
}

#[test]
fn effective_model_blocks() {
    let base = TwoQubitParams::reference();
    let p = TwoQubitParams { mu: 0.0, kappa2: base.kappa1, ..base };
    let h = h_two_qubit_eff(0.7, &p);
    let g = p.g_eff();
    assert!((h[(3, 0)].norm() - g / 2.0).abs() < 1e-14);
    assert!((h[(1, 2)].norm() - 3f64.sqrt() * g / 2.0).abs() < 1e-14);
    assert_eq!(h[(0, 1)], c64(0.0, 0.0));
    assert_eq!(h[(0, 2)], c64(0.0, 0.0));
    assert!(h.hermiticity_error() < 1e-15);
    let off = TwoQubitParams { beta_mod: 0.0, ..p };
    assert_eq!(h_two_qubit_eff(1.0, &off).norm_fro(), 0.0);
    let s = TwoQubitSeries { params: p, model: TwoQubitModel::Effective };
    assert_eq!(s.dim(), 4);
}

#[test]
fn two_qubit_validation() {
    let p = TwoQubitParams::reference();
    assert!(TwoQubitParams { mu: 10.0, ..p }.validate().is_err());
    assert!(TwoQubitParams { g12: p.delta1, ..p }.validate().is_err());
    assert!(TwoQubitParams { beta_mod: 25.0, ..p }.validate().is_err());
}

#[test]
fn bessel_reference_values() {
    assert_eq!(bessel_j1(0.0).unwrap(), 0.0);
    assert!((bessel_j1(1.0).unwrap() - 0.44005058574493355).abs() < 1e-15);
    assert!((bessel_j1(10.0).unwrap() - 0.04347274616886144).abs() < 1e-14);
    assert!((bessel_j1(20.0).unwrap() - 0.06683312417584993).abs() < 1e-14);
    assert!((bessel_jn(0, 2.404825557695773).unwrap()).abs() < 1e-14);
    assert!(matches!(bessel_j1(20.5), Err(ModelError::BesselRange(_))));
    assert!(bessel_j1(f64::NAN).is_err());
}

#[test]
fn bessel_matches_power_series() {
    for k in 0..=120 {
        let x = k as f64 * 0.1;
        let d = (bessel_j1(x).unwrap() - j1_series(x)).abs();
        assert!(d < 1e-10, "x = {x}: {d:e}");
    }
}

#[test]
fn lindblad_spec_operators() {
    let l = lindblad_spec(3, 0.01, 2).unwrap();
    assert_eq!(l.collapse_ops.len(), 3);
    assert_eq!(l.collapse_ops[0], CMatrix::unit(3, 0, 2));
    assert_eq!(l.collapse_ops[1], CMatrix::unit(3, 1, 2));
    assert_eq!(l.collapse_ops[2], CMatrix::unit(3, 2, 2));
    assert!(l.rates.iter().all(|&r| r == 0.01));
    let t = lindblad_spec(4, 0.02, 1).unwrap();
    assert_eq!(t.collapse_ops.len(), 4);
    assert_eq!(t.collapse_ops[0], CMatrix::unit(4, 0, 1));
    assert_eq!(t.collapse_ops[1], CMatrix::unit(4, 2, 1));
    assert_eq!(t.collapse_ops[3], CMatrix::unit(4, 2, 3));
    assert!(lindblad_spec(2, 0.1, 1).is_err());
    assert!(lindblad_spec(3, -0.1, 2).is_err());
    assert!(lindblad_spec(3, 0.0, 2).unwrap().is_closed());
    assert!(lindblad_spec(3, 0.0, 2).unwrap().scaled_ops().is_empty());
}

#[test]
fn sin2_series_bandwidth_is_not_constant() {
    let s = synth_pulse(&SchemeSpec::new(Scheme::Nhqc, 1.0, 0.0, 1.0, 1.0).with_envelope(Envelope::Sin2).with_grid(500))
        .unwrap();
    let series = LambdaSeries::new(s);
    let h = series.at(0.0);
    assert!((&h * &h).trace().re.abs() < 1e-20);
}

proptest! {
    #[test]
    fn bessel_is_odd(x in -20.0f64..20.0) {
        prop_assert!((bessel_j1(-x).unwrap() + bessel_j1(x).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn lambda_is_hermitian_with_bandwidth(omega in 0.0f64..3.0, phi in -10.0f64..10.0, theta in 0.0f64..PI,
                                          phi1 in -PI..PI, alpha in -0.5f64..0.5, beta in -0.5f64..0.5) {
        let h = h_lambda(omega, phi, theta, phi1, ErrorParams { alpha, beta }, 1.0);
        prop_assert!(h.hermiticity_error() < 1e-13);
        let ideal = h_lambda(omega, phi, theta, phi1, ErrorParams::NONE, 1.0);
        prop_assert!((2.0 * (&ideal * &ideal).trace().re - omega * omega).abs() < 1e-12);
        let tr2 = (&h * &h).trace().re;
        prop_assert!((tr2 - (0.5 * (1.0 + alpha).powi(2) * omega * omega + beta * beta)).abs() < 1e-12);
    }

    #[test]
    fn hardware_hamiltonians_are_hermitian(t in 0.0f64..200.0, omega in 0.0f64..0.3, phi in -7.0f64..7.0) {
        let p = TransmonParams::new(-1.6, 0.28);
        prop_assert!(h_transmon4(omega, phi, 0.5, 0.2, &p, t).hermiticity_error() < 1e-13);
        let q = TwoQubitParams::reference();
        prop_assert!(h_two_qubit_full(t, &q).hermiticity_error() < 1e-13);
        prop_assert!(h_two_qubit_eff(t, &q).hermiticity_error() < 1e-13);
    }
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimum gate times, the constant-bandwidth constraint residual, a
//! brute-force probe of time optimality over piecewise-linear phase ramps,
//! and calibration of the two-qubit entangling gate.

mod calibration;
mod search;

use std::f64::consts::PI;

use holoq_model::HamiltonianSeries;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use calibration::{
    calibrate_two_qubit, realized_phases, two_qubit_fidelity, two_qubit_unitary, CalibrationResult, CalibrationSpec,
    ScanSlice,
};
pub use search::{
    ramp_unitary, time_optimality_search, OptimalitySearchSpec, PhaseRamp, SearchReport, MAX_KNOTS, MIN_TOLERANCE,
};

#[derive(Debug, Error)]
pub enum OptimalError {
    /// Target phase outside (0, 2π).
    #[error("phase {0} outside the open interval (0, 2π)")]
    PhaseOutOfRange(f64),
    /// Non-positive or non-finite rate.
    #[error("rate {0} must be positive and finite")]
    InvalidRate(f64),
    /// Invalid search or calibration specification.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Dynamics(#[from] holoq_dynamics::DynamicsError),
    #[error(transparent)]
    Model(#[from] holoq_model::ModelError),
    #[error(transparent)]
    Metrics(#[from] holoq_metrics::MetricsError),
}

fn check_phase(x: f64) -> Result<(), OptimalError> {
    if !(x > 0.0 && x < 2.0 * PI) {
        return Err(OptimalError::PhaseOutOfRange(x));
    }
    Ok(())
}

fn check_rate(r: f64) -> Result<(), OptimalError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(OptimalError::InvalidRate(r));
    }
    Ok(())
}

/// Shortest single-loop time for phase γ at peak rate Ω₀:
/// τ = 2√(π² − (π − γ)²)/Ω₀.
pub fn min_time_1q(gamma: f64, omega0: f64) -> Result<f64, OptimalError> {
    check_phase(gamma)?;
    check_rate(omega0)?;
    Ok(2.0 * (PI * PI - (PI - gamma).powi(2)).sqrt() / omega0)
}

/// Shortest two-qubit loop time τ₂ = 2√(π² − (π − ξ)²)/g′ and the analytic
/// detuning seed μ = 2(π − ξ)/τ₂.
// CONVENTION(two-qubit-min-time)
pub fn min_time_2q(xi: f64, g_eff: f64) -> Result<(f64, f64), OptimalError> {
    check_phase(xi)?;
    check_rate(g_eff)?;
    let tau = 2.0 * (PI * PI - (PI - xi).powi(2)).sqrt() / g_eff;
    Ok((tau, 2.0 * (PI - xi) / tau))
}

/// Constant-bandwidth check of a Hamiltonian series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QbeReport {
    /// max_t |2Tr(H²) − Ω₀²|; for a two-level drive (Ω/2)σ this is |Ω² − Ω₀²|.
    pub residual: f64,
    /// Residual below 1e−10·Ω₀²: the schedule satisfies the constraint.
    pub constant_bandwidth: bool,
}

/// Evaluates the bandwidth constraint at each sample time. Tr(H²) = Ω²/2 for
/// the resonant drive, so the constraint Tr(H²) = E² with E = Ω₀/√2 reads
/// 2Tr(H²) − Ω₀² = 0.
// CONVENTION(bandwidth-normalisation): the Λ drive has 2·Tr(H²) = Ω².
pub fn qbe_constraint_residual(h: &dyn HamiltonianSeries, times: &[f64], omega0: f64) -> QbeReport {
    let residual = times
        .iter()
        .map(|&t| {
            let m = h.at(t);
            let tr2: f64 = m.as_slice().iter().map(|z| z.norm_sqr()).sum();
            (2.0 * tr2 - omega0 * omega0).abs()
        })
        .fold(0.0, f64::max);
    QbeReport { residual, constant_bandwidth: residual <= 1e-10 * omega0 * omega0 }
}

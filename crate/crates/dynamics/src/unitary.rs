// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use holoq_model::HamiltonianSeries;
use holoq_pulses::PulseSchedule;
use holoq_qcore::{unitary_step, CMatrix, CVector};

use crate::{DynamicsError, Piece};

/// Tolerance on ‖U†U − I‖_F for every returned propagator.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Relative tolerance on ‖H − H†‖_F for every Hamiltonian sample.
const HERMITICITY_REL_TOL: f64 = 1e-12;

/// A time-evolution operator U(t_final, t0).
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    /// Hilbert-space dimension.
    pub dim: usize,
    /// The unitary.
    pub matrix: CMatrix,
    /// Final time.
    pub t_final: f64,
}

/// Time samples with the propagated state at each.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Sample times (strictly increasing).
    pub times: Vec<f64>,
    /// State at each sample time.
    pub states: Vec<CVector>,
}

/// Minimum steps for `[t0, t1]`: 1000 per 2π of accumulated phase, bounded
/// via the largest sampled ‖H‖₁ (an upper bound on the spectral radius).
pub fn min_steps(h: &dyn HamiltonianSeries, t0: f64, t1: f64) -> usize {
    const PROBES: usize = 16;
    let span = (t1 - t0).abs();
    let max_norm = (0..=PROBES)
        .map(|k| h.at(t0 + span * (k as f64 + 0.5) / (PROBES as f64 + 1.0)).norm_one())
        .fold(0.0, f64::max);
    (1000.0 * max_norm * span / (2.0 * PI)).ceil() as usize
}

fn check_args(t0: f64, t1: f64, steps: usize) -> Result<(), DynamicsError> {
    if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err(DynamicsError::InvalidArgs(format!("need finite t0 <= t1, got [{t0}, {t1}]")));
    }
    if steps == 0 {
        return Err(DynamicsError::InvalidArgs("steps must be at least 1".into()));
    }
    Ok(())
}

fn step_unitary(h: &dyn HamiltonianSeries, t: f64, dt: f64) -> Result<CMatrix, DynamicsError> {
    let hm = h.at(t);
    let herr = hm.hermiticity_error();
    if !(herr <= HERMITICITY_REL_TOL * hm.norm_fro().max(1.0)) {
        return Err(DynamicsError::NonHermitian { t, error: herr });
    }
    Ok(unitary_step(&hm, dt)?)
}

/// Applies midpoint-rule steps over `[t0, t1]` to `u` in place.
fn advance(h: &dyn HamiltonianSeries, u: &mut CMatrix, t0: f64, t1: f64, steps: usize) -> Result<(), DynamicsError> {
    let dt = (t1 - t0) / steps as f64;
    for k in 0..steps {
        let step = step_unitary(h, t0 + (k as f64 + 0.5) * dt, dt)?;
        *u = &step * &*u;
    }
    Ok(())
}

fn finish(u: CMatrix, t_final: f64) -> Result<Propagator, DynamicsError> {
    let err = u.unitarity_error();
    if !(err < UNITARITY_TOL) {
        return Err(DynamicsError::NotUnitary(err));
    }
    Ok(Propagator { dim: u.dim(), matrix: u, t_final })
}

/// U(t1, t0) ≈ ∏ exp(−iH(t_mid)δt) with `steps` uniform steps.
///
/// Errors when a sample is non-Hermitian, when `steps` is below
/// [`min_steps`], or when the result is not unitary.
pub fn propagate_unitary(h: &dyn HamiltonianSeries, t0: f64, t1: f64, steps: usize) -> Result<Propagator, DynamicsError> {
    check_args(t0, t1, steps)?;
    let min = min_steps(h, t0, t1);
    if steps < min {
        return Err(DynamicsError::TooFewSteps { steps, min });
    }
    let mut u = CMatrix::identity(h.dim());
    advance(h, &mut u, t0, t1, steps)?;
    finish(u, t1)
}

/// Propagates across consecutive smooth pieces (no step straddles a
/// discontinuity of the drive).
pub fn propagate_pieces(h: &dyn HamiltonianSeries, pieces: &[Piece]) -> Result<Propagator, DynamicsError> {
    let mut u = CMatrix::identity(h.dim());
    let mut t_final = pieces.first().map(|p| p.0).unwrap_or(0.0);
    for &(a, b, n) in pieces {
        check_args(a, b, n)?;
        advance(h, &mut u, a, b, n)?;
        t_final = b;
    }
    finish(u, t_final)
}

/// Propagates over an entire schedule with its own step resolution.
pub fn propagate_schedule(h: &dyn HamiltonianSeries, schedule: &PulseSchedule) -> Result<Propagator, DynamicsError> {
    propagate_pieces(h, &schedule.pieces())
}

/// One propagator per schedule segment, in order.
pub fn segment_propagators(h: &dyn HamiltonianSeries, schedule: &PulseSchedule) -> Result<Vec<Propagator>, DynamicsError> {
    let pieces = schedule.pieces();
    schedule
        .segments
        .iter()
        .map(|seg| {
            let own: Vec<Piece> = pieces
                .iter()
                .copied()
                .filter(|p| p.0 >= seg.t_start - 1e-12 * seg.duration && p.1 <= seg.t_end() + 1e-12 * seg.duration)
                .collect();
            propagate_pieces(h, &own)
        })
        .collect()
}

/// Step-halving convergence measure ‖U(steps) − U(2·steps)‖_F.
pub fn convergence_check(h: &dyn HamiltonianSeries, t0: f64, t1: f64, steps: usize) -> Result<f64, DynamicsError> {
    check_args(t0, t1, steps)?;
    let mut a = CMatrix::identity(h.dim());
    advance(h, &mut a, t0, t1, steps)?;
    let mut b = CMatrix::identity(h.dim());
    advance(h, &mut b, t0, t1, 2 * steps)?;
    Ok((&a - &b).norm_fro())
}

/// Propagates `psi0` across `pieces`, recording the state at every grid
/// point (shared piece boundaries are recorded once).
pub fn state_trajectory(h: &dyn HamiltonianSeries, psi0: &CVector, pieces: &[Piece]) -> Result<Trajectory, DynamicsError> {
    if psi0.dim() != h.dim() {
        return Err(DynamicsError::InvalidArgs(format!("state dim {} != Hamiltonian dim {}", psi0.dim(), h.dim())));
    }
    let mut psi = psi0.clone();
    let mut times = vec![pieces.first().map(|p| p.0).unwrap_or(0.0)];
    let mut states = vec![psi.clone()];
    for &(a, b, n) in pieces {
        check_args(a, b, n)?;
        let dt = (b - a) / n as f64;
        for k in 0..n {
            psi = step_unitary(h, a + (k as f64 + 0.5) * dt, dt)?.apply(&psi);
            times.push(if k + 1 == n { b } else { a + (k + 1) as f64 * dt });
            states.push(psi.clone());
        }
    }
    Ok(Trajectory { times, states })
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-step propagation of unitaries (midpoint-sampled piecewise
//! exponentials) and density matrices (classic RK4 on the Lindblad master
//! equation). All integrators are deterministic and single-threaded; sweeps
//! parallelise across propagations.

mod density;
mod lindblad;
mod unitary;

pub use density::{DensityMatrix, HERMITICITY_TOL as DENSITY_HERMITICITY_TOL, PSD_TOL, TRACE_TOL};
pub use lindblad::{
    lindblad_channel, lindblad_rhs, propagate_lindblad, propagate_lindblad_pieces, trajectory_csv,
    LindbladSamples, LogicalChannel, TRACE_DRIFT_LIMIT,
};
pub use unitary::{
    convergence_check, min_steps, propagate_pieces, propagate_schedule, propagate_unitary, segment_propagators,
    state_trajectory, Propagator, Trajectory, UNITARITY_TOL,
};

use holoq_qcore::QcoreError;
use thiserror::Error;

/// A smooth interval `(t_start, t_end, steps)` of a piecewise-analytic drive.
pub type Piece = (f64, f64, usize);

/// Failures during propagation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    /// A Hamiltonian sample was not Hermitian.
    #[error("Hamiltonian is not Hermitian at t = {t} (‖H − H†‖_F = {error:e})")]
    NonHermitian { t: f64, error: f64 },
    /// The accumulated propagator left the unitary group.
    #[error("propagator is not unitary (‖U†U − I‖_F = {0:e})")]
    NotUnitary(f64),
    /// The RK4 integration drifted in trace.
    #[error("trace drift {drift:e} at t = {t} exceeds the limit; use a smaller step")]
    TraceDrift { t: f64, drift: f64 },
    /// A density matrix failed validation.
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    /// Too few time steps for the accumulated phase.
    #[error("{steps} steps is below the minimum {min} (1000 per 2π of accumulated phase)")]
    TooFewSteps { steps: usize, min: usize },
    /// Other invalid arguments.
    #[error("invalid propagation arguments: {0}")]
    InvalidArgs(String),
    /// Error from the linear-algebra layer.
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Auxiliary frames of cyclic Λ-system loops and the geometric checks built
//! on them: the cancellation of the dynamical part by the η-induced
//! connection, parallel transport, gauge covariance of the holonomy, the
//! non-Abelian witness, and the geometric-phase loop integral. Also provides
//! the ideal target gates.

mod connection;
mod frame;
mod gates;
mod loop_phase;

pub use connection::{
    connection_series, gauge_deviation, holonomy_from_frame, holonomy_residuals, nonabelian_witness,
    random_periodic_gauge, ConnectionSeries, PeriodicGauge, ResidualReport, WITNESS_GRID,
};
pub use frame::{aux_frame, frame_params, scheme_frame, AuxFrame, FramePiece, SolutionPiece, SIGMA};
pub use gates::{entangling_witness, ideal_gate_1q, ideal_gate_2q, remove_global_phase};
pub use loop_phase::{geometric_loop_phase, LoopPhase};

use thiserror::Error;

/// Failures while building frames or evaluating residuals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolonomyError {
    /// The path does not close (η₁(τ) ≠ 2π or states not cyclic).
    #[error("non-cyclic path: {0}")]
    NonCyclic(String),
    /// Frame and Hamiltonian disagree in dimension or grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// Frame states are not orthonormal or pieces do not join.
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Time-dependent Hamiltonians for the Λ system (ideal and with systematic
//! Rabi/detuning errors), a four-level transmon with leakage, a parametrically
//! coupled transmon pair, and the matching Lindblad decoherence models.
//!
//! Units are arbitrary but consistent: angular rates in rad per time unit.
//! Dimensionless studies use Ω₀ = 1; hardware studies use rad/ns.

mod bessel;
mod lambda;
mod lindblad;
mod series;
mod transmon;
mod two_qubit;

pub use bessel::{bessel_j1, bessel_jn, BESSEL_MAX_ARG};
pub use lambda::{h_lambda, ErrorParams, LambdaSeries, LAMBDA_EXCITED, LAMBDA_LOGICAL};
pub use lindblad::{lindblad_spec, LindbladSpec};
pub use series::{FnSeries, HamiltonianSeries};
pub use transmon::{h_transmon4, TransmonParams, TransmonSeries, TRANSMON_EXCITED, TRANSMON_LOGICAL};
pub use two_qubit::{
    h_two_qubit_eff, h_two_qubit_full, level_index, TwoQubitModel, TwoQubitParams, TwoQubitSeries,
    EFF_BASIS, FULL_COMPUTATIONAL,
};

use thiserror::Error;

/// Converts a frequency in MHz to an angular rate in rad/ns.
pub fn mhz_to_rad_per_ns(f_mhz: f64) -> f64 {
    2.0 * std::f64::consts::PI * f_mhz * 1e-3
}

/// Failures while constructing models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A parameter violated its documented bounds.
    #[error("invalid model parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },
    /// Bessel argument beyond the supported range.
    #[error("Bessel argument {0} outside the supported range |x| <= 20")]
    BesselRange(f64),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> ModelError {
    ModelError::InvalidParam { name, reason: reason.into() }
}

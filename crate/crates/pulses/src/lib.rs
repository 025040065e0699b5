// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Drive schedules Ω(t), φ(t) for the four holonomic gate schemes, and the
//! auxiliary angle path (η₁, η₂, η₃) that parameterises a cyclic loop.
//!
//! Sign convention, CONVENTION(gamma-sign) in `docs/CONVENTIONS.md`: a gate
//! U(θ, φ₁, γ) is driven with mixing angle θ and bright-state phase π − φ₁,
//! and the drive phase follows φ(t) = −η₂(t). For the minimum-time loop this
//! is φ(t) = 2(π − γ)t/τ.

mod eta;
mod schedule;
mod scheme;

pub use eta::{eta_path, EtaPath};
pub use schedule::{synth_pulse, PhaseLaw, PulseSchedule, Segment};
pub use scheme::{b_nhqc_duration, Envelope, Scheme, SchemeSpec, DEFAULT_GRID_POINTS};

use thiserror::Error;

/// Failures while synthesising schedules or paths.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PulseError {
    /// γ lies outside the open interval a scheme can realise.
    #[error("gamma {gamma} outside the open interval (0, 2π) required by {scheme}")]
    GammaOutOfRange { gamma: f64, scheme: &'static str },
    /// Scheme name did not parse.
    #[error("unknown scheme `{0}` (expected NHQC, C_NHQC, B_NHQC or CB_NHQC)")]
    UnknownScheme(String),
    /// Envelope name did not parse.
    #[error("unknown envelope `{0}` (expected CONSTANT or SIN2)")]
    UnknownEnvelope(String),
    /// Any other invalid specification field.
    #[error("invalid scheme specification: {0}")]
    InvalidSpec(String),
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

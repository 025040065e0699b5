// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::PulseError;

/// Auxiliary loop angles sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaPath {
    /// Sample times.
    pub times: Vec<f64>,
    /// η₁(t), rising linearly from 0 to 2π.
    pub eta1: Vec<f64>,
    /// η₂(t) = η₁(t) cos η₃.
    pub eta2: Vec<f64>,
    /// Constant polar angle η₃ ∈ (0, π).
    pub eta3: f64,
}

impl EtaPath {
    /// Loop duration.
    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }
}

/// Minimum-time auxiliary path for phase `gamma` at peak rate `omega0`:
/// cos η₃ = (γ − π)/π, |η̇₁| = Ω₀/sin η₃, η₂ = η₁ cos η₃ so η₂(τ) = 2(γ − π).
// CONVENTION(eta-closure): η₂ = η₁cos η₃ with the η-labels of the source.
pub fn eta_path(gamma: f64, omega0: f64, grid_points: usize) -> Result<EtaPath, PulseError> {
    if !gamma.is_finite() || (gamma - PI).abs() >= PI {
        return Err(PulseError::GammaOutOfRange { gamma, scheme: "eta_path" });
    }
    if !(omega0 > 0.0) || grid_points < 2 {
        return Err(PulseError::InvalidSpec("eta_path needs omega0 > 0 and at least 2 grid points".into()));
    }
    let c3 = (gamma - PI) / PI;
    let eta3 = c3.acos();
    let tau = 2.0 * PI * eta3.sin() / omega0;
    let n = grid_points;
    let times: Vec<f64> = (0..=n).map(|k| tau * k as f64 / n as f64).collect();
    let eta1: Vec<f64> = (0..=n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
    let eta2 = eta1.iter().map(|e| e * c3).collect();
    Ok(EtaPath { times, eta1, eta2, eta3 })
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use holoq_pulses::PulseSchedule;
use holoq_qcore::{CMatrix, Complex64};
use serde::{Deserialize, Serialize};

use crate::{invalid, HamiltonianSeries, ModelError};

/// Index of the excited level |e⟩ in the Λ basis (|0⟩, |1⟩, |e⟩).
pub const LAMBDA_EXCITED: usize = 2;
/// Indices of the logical levels |0⟩, |1⟩ in the Λ basis.
pub const LAMBDA_LOGICAL: [usize; 2] = [0, 1];

/// Systematic control errors: amplitude H → (1+α)H and a static detuning
/// βΩ₀|e⟩⟨e|.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorParams {
    /// Fractional Rabi-amplitude error α.
    pub alpha: f64,
    /// Detuning error β in units of Ω₀.
    pub beta: f64,
}

impl ErrorParams {
    /// No error.
    pub const NONE: ErrorParams = ErrorParams { alpha: 0.0, beta: 0.0 };

    /// Rabi error only.
    pub fn rabi(alpha: f64) -> Self {
        Self { alpha, beta: 0.0 }
    }

    /// Detuning error only.
    pub fn detuning(beta: f64) -> Self {
        Self { alpha: 0.0, beta }
    }

    /// Checks the sanity bounds |α|, |β| ≤ 0.5.
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !v.is_finite() || v.abs() > 0.5 {
                return Err(invalid(name, format!("{v} outside [-0.5, 0.5]")));
            }
        }
        Ok(())
    }
}

/// Λ-system Hamiltonian in the basis (|0⟩, |1⟩, |e⟩):
/// (1+α)[(Ω/2)e^{−iφ}|μ⟩⟨e| + h.c.] + βΩ₀|e⟩⟨e| with
/// |μ⟩ = sin(θ/2)e^{iφ₁}|0⟩ + cos(θ/2)|1⟩.
pub fn h_lambda(omega: f64, phi: f64, theta: f64, phi1: f64, err: ErrorParams, omega0: f64) -> CMatrix {
    let amp = 0.5 * omega * (1.0 + err.alpha);
    let c0 = Complex64::from_polar(amp * (0.5 * theta).sin(), phi1 - phi);
    let c1 = Complex64::from_polar(amp * (0.5 * theta).cos(), -phi);
    let mut h = CMatrix::zeros(3);
    h[(0, 2)] = c0;
    h[(2, 0)] = c0.conj();
    h[(1, 2)] = c1;
    h[(2, 1)] = c1.conj();
    h[(2, 2)] = Complex64::new(err.beta * omega0, 0.0);
    h
}

/// Λ-system Hamiltonian driven by a synthesised schedule.
#[derive(Debug, Clone)]
pub struct LambdaSeries {
    /// Drive schedule.
    pub schedule: PulseSchedule,
    /// Systematic errors.
    pub err: ErrorParams,
}

impl LambdaSeries {
    /// Ideal (error-free) series.
    pub fn new(schedule: PulseSchedule) -> Self {
        Self { schedule, err: ErrorParams::NONE }
    }

    /// Series with systematic errors.
    pub fn with_errors(schedule: PulseSchedule, err: ErrorParams) -> Self {
        Self { schedule, err }
    }
}

impl HamiltonianSeries for LambdaSeries {
    fn dim(&self) -> usize {
        3
    }
    fn at(&self, t: f64) -> CMatrix {
        let s = &self.schedule;
        h_lambda(s.omega_at(t), s.phi_at(t), s.theta, s.phi1, self.err, s.omega0)
    }
}

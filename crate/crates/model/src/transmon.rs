// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use holoq_pulses::PulseSchedule;
use holoq_qcore::{CMatrix, Complex64};
use serde::{Deserialize, Serialize};

use crate::{invalid, HamiltonianSeries, ModelError};

/// Index of the intermediate excited level |e⟩ in the transmon basis
/// (|0⟩, |e⟩, |1⟩, |2⟩).
pub const TRANSMON_EXCITED: usize = 1;
/// Indices of the logical levels |0⟩, |1⟩ in the transmon basis.
pub const TRANSMON_LOGICAL: [usize; 2] = [0, 2];

/// Four-level transmon parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmonParams {
    /// Anharmonicity κ (rad/time, negative).
    pub kappa: f64,
    /// Peak Rabi rate Ω₀ (rad/time).
    pub omega0: f64,
    /// Number of ladder levels (always 4).
    pub levels: usize,
}

impl TransmonParams {
    /// Four-level transmon with anharmonicity `kappa` driven at peak `omega0`.
    pub fn new(kappa: f64, omega0: f64) -> Self {
        Self { kappa, omega0, levels: 4 }
    }

    /// Checks κ < 0, |κ| > Ω₀ and four levels.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.levels != 4 {
            return Err(invalid("levels", format!("{} (only 4 supported)", self.levels)));
        }
        if !(self.kappa < 0.0) || !self.kappa.is_finite() {
            return Err(invalid("kappa", format!("{} must be negative", self.kappa)));
        }
        if !(self.omega0 > 0.0) || self.kappa.abs() <= self.omega0 {
            return Err(invalid("omega0", format!("{} must be positive and below |kappa|", self.omega0)));
        }
        Ok(())
    }
}

/// Interaction-picture Hamiltonian of a driven transmon ladder in the basis
/// (|0⟩, |e⟩, |1⟩, |2⟩) with bare energies (0, ω, 2ω+κ, 3ω+3κ).
///
/// Two tones implement the Λ couplings: tone A is resonant with |0⟩↔|e⟩
/// (amplitude a = (Ω/2)sin(θ/2)e^{i(φ₁−φ)}), tone B with |e⟩↔|1⟩
/// (amplitude b = (Ω/2)cos(θ/2)e^{−iφ}). Each tone also drives the other
/// ladder transitions with the charge-operator elements 1, √2, √3, rotating
/// at the corresponding multiples of κ.
// CONVENTION(transmon-ladder)
pub fn h_transmon4(omega: f64, phi: f64, theta: f64, phi1: f64, p: &TransmonParams, t: f64) -> CMatrix {
    let k = p.kappa;
    let a = Complex64::from_polar(0.5 * omega * (0.5 * theta).sin(), phi1 - phi);
    let b = Complex64::from_polar(0.5 * omega * (0.5 * theta).cos(), -phi);
    let c = b.conj() / 2f64.sqrt();
    let rot = |w: f64| Complex64::from_polar(1.0, w * t);
    let (s2, s3) = (2f64.sqrt(), 3f64.sqrt());
    let mut h = CMatrix::zeros(4);
    // tone A
    h[(0, 1)] += a;
    h[(1, 2)] += a * s2 * rot(-k);
    h[(2, 3)] += a * s3 * rot(-2.0 * k);
    // tone B
    h[(0, 1)] += c * rot(k);
    h[(1, 2)] += c * s2;
    h[(2, 3)] += c * s3 * rot(-k);
    for (i, j) in [(0, 1), (1, 2), (2, 3)] {
        h[(j, i)] = h[(i, j)].conj();
    }
    h
}

/// Transmon Hamiltonian driven by a synthesised schedule.
#[derive(Debug, Clone)]
pub struct TransmonSeries {
    /// Drive schedule (Ω₀ of the schedule is used as the drive peak).
    pub schedule: PulseSchedule,
    /// Transmon parameters.
    pub params: TransmonParams,
}

impl HamiltonianSeries for TransmonSeries {
    fn dim(&self) -> usize {
        4
    }
    fn at(&self, t: f64) -> CMatrix {
        let s = &self.schedule;
        h_transmon4(s.omega_at(t), s.phi_at(t), s.theta, s.phi1, &self.params, t)
    }
}

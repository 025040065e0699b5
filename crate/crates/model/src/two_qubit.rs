// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use holoq_qcore::{CMatrix, Complex64};
use serde::{Deserialize, Serialize};

use crate::{bessel_j1, invalid, mhz_to_rad_per_ns, HamiltonianSeries, ModelError};

/// Index of |m n⟩ in the 16-dimensional two-transmon basis, where `m`, `n`
/// are ladder positions in the order (|0⟩, |e⟩, |1⟩, |2⟩) = (0, 1, 2, 3).
pub const fn level_index(m: usize, n: usize) -> usize {
    4 * m + n
}

/// Full-model indices of the computational states |00⟩, |01⟩, |10⟩, |11⟩.
pub const FULL_COMPUTATIONAL: [usize; 4] =
    [level_index(0, 0), level_index(0, 2), level_index(2, 0), level_index(2, 2)];

/// Labels of the effective-model basis, in index order.
pub const EFF_BASIS: [&str; 4] = ["01", "11", "e2", "ee"];

/// Parameters of the parametrically coupled transmon pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitParams {
    /// Anharmonicity of transmon 1 (rad/time).
    pub kappa1: f64,
    /// Anharmonicity of transmon 2 (rad/time).
    pub kappa2: f64,
    /// Qubit detuning Δ₁ (rad/time).
    pub delta1: f64,
    /// Static coupling g₁₂ (rad/time).
    pub g12: f64,
    /// Modulation index β = ε/ν.
    pub beta_mod: f64,
    /// Small detuning μ (rad/time).
    pub mu: f64,
    /// Target phase on |01⟩.
    pub xi1: f64,
    /// Target phase on |11⟩.
    pub xi2: f64,
}

impl TwoQubitParams {
    /// Reference device in rad/ns: κ₁ = −2π×220 MHz, κ₂ = −2π×260 MHz,
    /// Δ₁ = 2π×146 MHz, g₁₂ = 2π×10 MHz, β = 2.6, control-T targets
    /// (π/4, −π/4), with μ at its minimum-time seed.
    pub fn reference() -> Self {
        let mut p = Self {
            kappa1: mhz_to_rad_per_ns(-220.0),
            kappa2: mhz_to_rad_per_ns(-260.0),
            delta1: mhz_to_rad_per_ns(146.0),
            g12: mhz_to_rad_per_ns(10.0),
            beta_mod: 2.6,
            mu: 0.0,
            xi1: PI / 4.0,
            xi2: -PI / 4.0,
        };
        let g = p.g_eff();
        let tau = 2.0 * (PI * PI - (PI - p.xi1).powi(2)).sqrt() / g;
        // CONVENTION(mu-seed)
        p.mu = 2.0 * (PI - p.xi1) / tau;
        p
    }

    /// Modulation frequency ν = Δ₁ − κ₂ − μ.
    pub fn nu(&self) -> f64 {
        self.delta1 - self.kappa2 - self.mu
    }

    /// Effective coupling g′₁₂ = 2√2·g₁₂·J₁(β).
    pub fn g_eff(&self) -> f64 {
        2.0 * 2f64.sqrt() * self.g12 * bessel_j1(self.beta_mod).unwrap_or(f64::NAN)
    }

    /// Checks ν > 0, g₁₂ ≪ |Δ₁| and a supported modulation index.
    pub fn validate(&self) -> Result<(), ModelError> {
        let all = [self.kappa1, self.kappa2, self.delta1, self.g12, self.beta_mod, self.mu, self.xi1, self.xi2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("two_qubit", "all parameters must be finite"));
        }
        if self.nu() <= 0.0 {
            return Err(invalid("nu", format!("modulation frequency {} must be positive", self.nu())));
        }
        if self.g12 < 0.0 || self.g12 > 0.2 * self.delta1.abs() {
            return Err(invalid("g12", "coupling must satisfy 0 <= g12 << |delta1|"));
        }
        if self.beta_mod.abs() > crate::BESSEL_MAX_ARG {
            return Err(invalid("beta_mod", "modulation index must satisfy |beta| <= 20"));
        }
        Ok(())
    }
}

/// Interaction-picture Hamiltonian of the modulated transmon pair on the
/// 16-dimensional space |m n⟩, with f(t) = e^{iβcos νt}:
/// g₁₂·f·[√2e^{i(Δ₁−κ₂)t}|ee⟩⟨01| + √2e^{i(Δ₁+κ₁)t}|10⟩⟨ee|
/// + √6e^{i(Δ₁−κ₂+2κ₁)t}|2e⟩⟨11| + √6e^{i(Δ₁−2κ₂+κ₁)t}|11⟩⟨e2|] + h.c.
// CONVENTION(two-qubit-frequencies): |10⟩⟨ee| rotates at Δ₁ + κ₁.
pub fn h_two_qubit_full(t: f64, p: &TwoQubitParams) -> CMatrix {
    let f = Complex64::from_polar(p.g12, p.beta_mod * (p.nu() * t).cos());
    let (s2, s6) = (2f64.sqrt(), 6f64.sqrt());
    let (d, k1, k2) = (p.delta1, p.kappa1, p.kappa2);
    let terms = [
        (level_index(1, 1), level_index(0, 2), s2, d - k2),
        (level_index(2, 0), level_index(1, 1), s2, d + k1),
        (level_index(3, 1), level_index(2, 2), s6, d - k2 + 2.0 * k1),
        (level_index(2, 2), level_index(1, 3), s6, d - 2.0 * k2 + k1),
    ];
    let mut h = CMatrix::zeros(16);
    for (i, j, amp, w) in terms {
        let v = f * Complex64::from_polar(amp, w * t);
        h[(i, j)] += v;
        h[(j, i)] += v.conj();
    }
    h
}

/// Effective Hamiltonian on span{|01⟩, |11⟩, |e2⟩, |ee⟩} obtained from the
/// first modulation sideband:
/// (g′/2)[i e^{iμt}|ee⟩⟨01| + i√3 e^{i(κ₁−κ₂+μ)t}|11⟩⟨e2|] + h.c.
// CONVENTION(two-qubit-effective)
pub fn h_two_qubit_eff(t: f64, p: &TwoQubitParams) -> CMatrix {
    let c = Complex64::new(0.0, 0.5 * p.g_eff());
    let mut h = CMatrix::zeros(4);
    let a = c * Complex64::from_polar(1.0, p.mu * t);
    let b = c * Complex64::from_polar(3f64.sqrt(), (p.kappa1 - p.kappa2 + p.mu) * t);
    h[(3, 0)] = a;
    h[(0, 3)] = a.conj();
    h[(1, 2)] = b;
    h[(2, 1)] = b.conj();
    h
}

/// Which two-qubit Hamiltonian to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwoQubitModel {
    /// 16-level interaction Hamiltonian.
    Full,
    /// 4-level rotating-wave effective Hamiltonian.
    Effective,
}

/// Two-qubit Hamiltonian series.
#[derive(Debug, Clone, Copy)]
pub struct TwoQubitSeries {
    /// Device parameters.
    pub params: TwoQubitParams,
    /// Model choice.
    pub model: TwoQubitModel,
}

impl HamiltonianSeries for TwoQubitSeries {
    fn dim(&self) -> usize {
        match self.model {
            TwoQubitModel::Full => 16,
            TwoQubitModel::Effective => 4,
        }
    }
    fn at(&self, t: f64) -> CMatrix {
        match self.model {
            TwoQubitModel::Full => h_two_qubit_full(t, &self.params),
            TwoQubitModel::Effective => h_two_qubit_eff(t, &self.params),
        }
    }
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use holoq_dynamics::propagate_unitary;
use holoq_holonomy::ideal_gate_2q;
use holoq_metrics::avg_fidelity_2q;
use holoq_model::{TwoQubitModel, TwoQubitParams, TwoQubitSeries, FULL_COMPUTATIONAL};
use holoq_qcore::{c64, CMatrix, CVector, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{min_time_2q, OptimalError};

/// Propagated gate on the computational basis |00⟩, |01⟩, |10⟩, |11⟩ (a
/// 4×4 block, not exactly unitary when population leaks). The effective
/// model acts only on |01⟩ and |11⟩, so its block is diag(1, U₀₁, 1, U₁₁).
pub fn two_qubit_unitary(
    p: &TwoQubitParams,
    tau: f64,
    model: TwoQubitModel,
    steps: usize,
) -> Result<CMatrix, OptimalError> {
    let (u, readout) = space_unitary(p, tau, model, steps)?;
    Ok(u.submatrix(&readout))
}

/// Unitary on the simulated space and the positions of |00⟩, |01⟩, |10⟩,
/// |11⟩ in it. The effective model is completed with the two untouched
/// levels as the space (|00⟩, |10⟩, |01⟩, |11⟩, |e2⟩, |ee⟩).
fn space_unitary(
    p: &TwoQubitParams,
    tau: f64,
    model: TwoQubitModel,
    steps: usize,
) -> Result<(CMatrix, Vec<usize>), OptimalError> {
    p.validate()?;
    let u = propagate_unitary(&TwoQubitSeries { params: *p, model }, 0.0, tau, steps)?.matrix;
    Ok(match model {
        TwoQubitModel::Full => (u, FULL_COMPUTATIONAL.to_vec()),
        TwoQubitModel::Effective => {
            let full = CMatrix::from_fn(6, |r, c| match (r, c) {
                (0, 0) | (1, 1) => c64(1.0, 0.0),
                (r, c) if r >= 2 && c >= 2 => u[(r - 2, c - 2)],
                _ => c64(0.0, 0.0),
            });
            (full, vec![0, 2, 1, 3])
        }
    })
}

/// Realised phases (ξ₁, ξ₂) = (arg U₀₁,₀₁/U₀₀,₀₀, arg U₁₁,₁₁/U₁₀,₁₀) of a
/// gate given on the computational basis.
pub fn realized_phases(u: &CMatrix) -> (f64, f64) {
    ((u[(1, 1)] / u[(0, 0)]).arg(), (u[(3, 3)] / u[(2, 2)]).arg())
}

/// State-averaged fidelity of the propagated gate against
/// U_E(ξ₁, ξ₂) over an n×n grid of product inputs.
pub fn two_qubit_fidelity(
    p: &TwoQubitParams,
    tau: f64,
    model: TwoQubitModel,
    steps: usize,
    n_per_axis: usize,
) -> Result<f64, OptimalError> {
    let (u, readout) = space_unitary(p, tau, model, steps)?;
    let dim = u.dim();
    let channel = |amps: &[Complex64]| {
        let mut psi = CVector::zeros(dim);
        for (a, &r) in amps.iter().zip(&readout) {
            psi[r] = *a;
        }
        let out = u.apply(&psi);
        CMatrix::outer(&out, &out)
    };
    Ok(avg_fidelity_2q(channel, &ideal_gate_2q(p.xi1, p.xi2), &readout, n_per_axis)?.value)
}

/// Coordinate scans of the calibration: first β_mod (with τ₂ and μ at their
/// analytic seeds for each β), then μ, then τ₂, each about the best value of
/// the previous stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSpec {
    /// β_mod scan range.
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_points: usize,
    /// Relative half-width of the μ scan about its seed.
    pub mu_rel: f64,
    pub mu_points: usize,
    /// Relative half-width of the τ₂ scan about its seed.
    pub tau_rel: f64,
    pub tau_points: usize,
    /// Propagation steps per gate.
    pub steps: usize,
    /// Product-state grid per axis for the fidelity.
    pub n_per_axis: usize,
    /// Model used for the scans.
    pub model: TwoQubitModel,
}

// CONVENTION(beta-mod-range): the scan extends to β = 3.0, past the first zero of J₀.
impl Default for CalibrationSpec {
    fn default() -> Self {
        Self {
            beta_min: 0.6,
            beta_max: 3.0,
            beta_points: 13,
            mu_rel: 0.2,
            mu_points: 9,
            tau_rel: 0.1,
            tau_points: 9,
            steps: 20000,
            n_per_axis: 21,
            model: TwoQubitModel::Full,
        }
    }
}

impl CalibrationSpec {
    fn validate(&self) -> Result<(), OptimalError> {
        let ok = self.beta_min > 0.0
            && self.beta_max >= self.beta_min
            && self.beta_points >= 1
            && (0.0..1.0).contains(&self.mu_rel)
            && (0.0..1.0).contains(&self.tau_rel)
            && self.mu_points >= 1
            && self.tau_points >= 1;
        if !ok {
            return Err(OptimalError::InvalidSpec("calibration ranges must be positive and well ordered".into()));
        }
        Ok(())
    }
}

/// One coordinate scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSlice {
    /// Scanned parameter: `beta_mod`, `mu` or `tau2`.
    pub parameter: String,
    pub values: Vec<f64>,
    pub fidelities: Vec<f64>,
    /// Index of the best value (first on ties).
    pub best_index: usize,
    /// Strictly increasing up to an interior maximum and strictly
    /// decreasing after it.
    pub unimodal: bool,
}

impl ScanSlice {
    fn new(parameter: &str, values: Vec<f64>, fidelities: Vec<f64>) -> Self {
        let mut best_index = 0;
        for (i, f) in fidelities.iter().enumerate() {
            if *f > fidelities[best_index] {
                best_index = i;
            }
        }
        let n = fidelities.len();
        let rising = fidelities[..=best_index].windows(2).all(|w| w[1] > w[0]);
        let falling = fidelities[best_index..].windows(2).all(|w| w[1] < w[0]);
        let unimodal = best_index > 0 && best_index + 1 < n && rising && falling;
        Self { parameter: parameter.to_string(), values, fidelities, best_index, unimodal }
    }

    /// Best scanned value.
    pub fn best_value(&self) -> f64 {
        self.values[self.best_index]
    }
}

/// Calibrated gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    /// Parameters with calibrated β_mod and μ.
    pub params: TwoQubitParams,
    /// Calibrated gate time.
    pub tau2: f64,
    /// Fidelity at the calibrated point.
    pub fidelity: f64,
    /// Phases (ξ₁, ξ₂) realised by the calibrated gate.
    pub realized_xi: (f64, f64),
    /// The β_mod, μ and τ₂ scans in that order.
    pub slices: Vec<ScanSlice>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
}

fn seeded(base: &TwoQubitParams, beta: f64) -> Result<(TwoQubitParams, f64), OptimalError> {
    let mut p = *base;
    p.beta_mod = beta;
    let (tau, mu) = min_time_2q(p.xi1, p.g_eff())?;
    p.mu = mu;
    Ok((p, tau))
}

/// Coordinate-scan calibration of (β_mod, μ, τ₂) maximising the average
/// fidelity to U_E(ξ₁, ξ₂). Points within a scan run in parallel and are
/// gathered in scan order.
pub fn calibrate_two_qubit(base: &TwoQubitParams, spec: &CalibrationSpec) -> Result<CalibrationResult, OptimalError> {
    spec.validate()?;
    let fid = |p: &TwoQubitParams, tau: f64| two_qubit_fidelity(p, tau, spec.model, spec.steps, spec.n_per_axis);

    let betas = linspace(spec.beta_min, spec.beta_max, spec.beta_points);
    let f_beta = betas
        .par_iter()
        .map(|&b| seeded(base, b).and_then(|(p, tau)| fid(&p, tau)))
        .collect::<Result<Vec<_>, _>>()?;
    let beta_slice = ScanSlice::new("beta_mod", betas, f_beta);
    let (p_seed, tau_seed) = seeded(base, beta_slice.best_value())?;

    let mus: Vec<f64> = linspace(1.0 - spec.mu_rel, 1.0 + spec.mu_rel, spec.mu_points).iter().map(|f| f * p_seed.mu).collect();
    let f_mu = mus
        .par_iter()
        .map(|&mu| fid(&TwoQubitParams { mu, ..p_seed }, tau_seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mu_slice = ScanSlice::new("mu", mus, f_mu);
    let p_best = TwoQubitParams { mu: mu_slice.best_value(), ..p_seed };

    let taus: Vec<f64> = linspace(1.0 - spec.tau_rel, 1.0 + spec.tau_rel, spec.tau_points).iter().map(|f| f * tau_seed).collect();
    let f_tau = taus.par_iter().map(|&t| fid(&p_best, t)).collect::<Result<Vec<_>, _>>()?;
    let tau_slice = ScanSlice::new("tau2", taus, f_tau);
    let tau2 = tau_slice.best_value();
    let fidelity = tau_slice.fidelities[tau_slice.best_index];
    let realized_xi = realized_phases(&two_qubit_unitary(&p_best, tau2, spec.model, spec.steps)?);
    Ok(CalibrationResult { params: p_best, tau2, fidelity, realized_xi, slices: vec![beta_slice, mu_slice, tau_slice] })
}

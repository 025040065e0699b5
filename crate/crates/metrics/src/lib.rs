// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Fidelity and population figures of merit: state-averaged gate
//! fidelities over the real great circle of input states, the trace
//! fidelity of unitaries, and time-integrated excited-state populations.

use std::f64::consts::PI;

use holoq_dynamics::{DensityMatrix, LogicalChannel, Trajectory};
use holoq_qcore::{c64, CMatrix, CVector, Complex64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum number of χ samples for a single-qubit average.
pub const MIN_STATES_1Q: usize = 101;
/// Minimum number of χ samples per axis for a two-qubit average.
pub const MIN_STATES_PER_AXIS_2Q: usize = 21;
/// Allowance above 1 for reported fidelities.
pub const FIDELITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    /// Grid size out of range.
    #[error("invalid state grid: {0}")]
    InvalidGrid(String),
    /// Matrix dimensions disagree.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    /// A channel output was not a density matrix.
    #[error("channel output for input state #{index} is invalid: {reason}")]
    InvalidState { index: usize, reason: String },
}

/// How a fidelity value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FidelityMethod {
    /// Average over cos χ|0⟩ + sin χ|1⟩.
    StateAvg1q,
    /// Average over product states of two such qubits.
    StateAvg2q,
    /// |Tr(U′U†)|/d.
    Trace,
}

/// A fidelity value with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    /// Scheme tag, empty when not applicable.
    pub scheme: String,
    /// Gate label, empty when not applicable.
    pub gate: String,
    /// Fidelity in [0, 1 + 1e−9].
    pub value: f64,
    /// Averaging method.
    pub method: FidelityMethod,
    /// Number of input states (1 for the trace form).
    pub n_states: usize,
}

impl FidelityReport {
    /// Attaches scheme and gate labels.
    pub fn labelled(mut self, scheme: impl Into<String>, gate: impl Into<String>) -> Self {
        self.scheme = scheme.into();
        self.gate = gate.into();
        self
    }

    /// 1 − value.
    pub fn infidelity(&self) -> f64 {
        1.0 - self.value
    }
}

/// Closed-trapezoid weights on n points spanning one period.
fn trapezoid_weights(n: usize) -> Vec<f64> {
    let mut w = vec![1.0 / (n - 1) as f64; n];
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
    w
}

fn chi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / (n - 1) as f64).collect()
}

fn embed(amps: &CVector, readout: &[usize], dim: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    for (i, &r) in readout.iter().enumerate() {
        v[r] = amps[i];
    }
    v
}

fn check_target(target: &CMatrix, readout: &[usize], k: usize) -> Result<(), MetricsError> {
    if target.dim() != k || readout.len() != k {
        return Err(MetricsError::DimMismatch(format!(
            "target is {}×{}, readout has {} levels, expected {k}",
            target.dim(),
            target.dim(),
            readout.len()
        )));
    }
    Ok(())
}

fn overlap(rho: CMatrix, index: usize, psi_t: &CVector, readout: &[usize]) -> Result<f64, MetricsError> {
    if readout.iter().any(|&r| r >= rho.dim()) {
        return Err(MetricsError::DimMismatch(format!("readout level beyond output dimension {}", rho.dim())));
    }
    let rho = DensityMatrix::new(rho).map_err(|e| MetricsError::InvalidState { index, reason: e.to_string() })?;
    Ok(rho.expectation(&embed(psi_t, readout, rho.dim())))
}

/// Average of ⟨ψ_T|ρ(χ)|ψ_T⟩ over the inputs |ψ(χ)⟩ = cos χ|0⟩ + sin χ|1⟩,
/// χ on a closed n-point grid over [0, 2π] with trapezoid weights, where
/// |ψ_T⟩ = target|ψ(χ)⟩ placed on the `readout` levels of the output.
///
/// `channel` maps the two input amplitudes to the full output density
/// matrix.
pub fn avg_fidelity_1q(
    channel: impl Fn(&[Complex64]) -> CMatrix,
    target: &CMatrix,
    readout: &[usize],
    n: usize,
) -> Result<FidelityReport, MetricsError> {
    if n < MIN_STATES_1Q || n % 2 == 0 {
        return Err(MetricsError::InvalidGrid(format!("n = {n} must be odd and ≥ {MIN_STATES_1Q}")));
    }
    check_target(target, readout, 2)?;
    let w = trapezoid_weights(n);
    let mut acc = 0.0;
    for (k, chi) in chi_grid(n).into_iter().enumerate() {
        let amps = [c64(chi.cos(), 0.0), c64(chi.sin(), 0.0)];
        let psi_t = target.apply(&CVector::from_vec(amps.to_vec()));
        acc += w[k] * overlap(channel(&amps), k, &psi_t, readout)?;
    }
    Ok(FidelityReport { scheme: String::new(), gate: String::new(), value: acc, method: FidelityMethod::StateAvg1q, n_states: n })
}

/// Two-qubit analogue of [`avg_fidelity_1q`] over product inputs
/// (cos χ₁|0⟩ + sin χ₁|1⟩)⊗(cos χ₂|0⟩ + sin χ₂|1⟩) on an n×n closed grid.
/// Input amplitudes are ordered |00⟩, |01⟩, |10⟩, |11⟩.
pub fn avg_fidelity_2q(
    channel: impl Fn(&[Complex64]) -> CMatrix,
    target: &CMatrix,
    readout: &[usize],
    n_per_axis: usize,
) -> Result<FidelityReport, MetricsError> {
    if n_per_axis < MIN_STATES_PER_AXIS_2Q {
        return Err(MetricsError::InvalidGrid(format!("n_per_axis = {n_per_axis} must be ≥ {MIN_STATES_PER_AXIS_2Q}")));
    }
    check_target(target, readout, 4)?;
    let w = trapezoid_weights(n_per_axis);
    let grid = chi_grid(n_per_axis);
    let mut acc = 0.0;
    for (i, c1) in grid.iter().enumerate() {
        for (j, c2) in grid.iter().enumerate() {
            let (a, b) = ([c1.cos(), c1.sin()], [c2.cos(), c2.sin()]);
            let amps: Vec<Complex64> = (0..4).map(|k| c64(a[k / 2] * b[k % 2], 0.0)).collect();
            let psi_t = target.apply(&CVector::from_vec(amps.clone()));
            acc += w[i] * w[j] * overlap(channel(&amps), i * n_per_axis + j, &psi_t, readout)?;
        }
    }
    Ok(FidelityReport {
        scheme: String::new(),
        gate: String::new(),
        value: acc,
        method: FidelityMethod::StateAvg2q,
        n_states: n_per_axis * n_per_axis,
    })
}

/// [`avg_fidelity_1q`] for a channel known through its action on the
/// logical matrix units, with an optional output correction `post` (e.g. a
/// virtual-Z frame update) applied as ρ ↦ post·ρ·post†.
pub fn channel_fidelity_1q(
    channel: &LogicalChannel,
    post: Option<&CMatrix>,
    target: &CMatrix,
    readout: &[usize],
    n: usize,
) -> Result<FidelityReport, MetricsError> {
    if channel.logical.len() != 2 {
        return Err(MetricsError::DimMismatch(format!("channel has {} logical levels, expected 2", channel.logical.len())));
    }
    avg_fidelity_1q(|amps| apply_post(channel.apply_pure(amps), post), target, readout, n)
}

/// Two-qubit analogue of [`channel_fidelity_1q`].
pub fn channel_fidelity_2q(
    channel: &LogicalChannel,
    post: Option<&CMatrix>,
    target: &CMatrix,
    readout: &[usize],
    n_per_axis: usize,
) -> Result<FidelityReport, MetricsError> {
    if channel.logical.len() != 4 {
        return Err(MetricsError::DimMismatch(format!("channel has {} logical levels, expected 4", channel.logical.len())));
    }
    avg_fidelity_2q(|amps| apply_post(channel.apply_pure(amps), post), target, readout, n_per_axis)
}

fn apply_post(rho: CMatrix, post: Option<&CMatrix>) -> CMatrix {
    match post {
        Some(p) => &(p * &rho) * &p.dagger(),
        None => rho,
    }
}

/// |Tr(U′U†)|/d, invariant under global phases of either argument.
pub fn trace_fidelity(u_actual: &CMatrix, u_target: &CMatrix) -> Result<f64, MetricsError> {
    if u_actual.dim() != u_target.dim() {
        return Err(MetricsError::DimMismatch(format!("{} vs {}", u_actual.dim(), u_target.dim())));
    }
    Ok(u_target.hs_inner(u_actual).norm() / u_actual.dim() as f64)
}

/// Trace fidelity wrapped as a report.
pub fn trace_fidelity_report(u_actual: &CMatrix, u_target: &CMatrix) -> Result<FidelityReport, MetricsError> {
    Ok(FidelityReport {
        scheme: String::new(),
        gate: String::new(),
        value: trace_fidelity(u_actual, u_target)?,
        method: FidelityMethod::Trace,
        n_states: 1,
    })
}

/// ∫ f dt over possibly non-uniform samples: composite Simpson on each run
/// of equally spaced samples (trapezoid on a leftover interval).
pub fn integrate_samples(times: &[f64], values: &[f64]) -> f64 {
    assert_eq!(times.len(), values.len(), "times and values must align");
    let n = times.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut start = 0;
    while start + 1 < n {
        let h = times[start + 1] - times[start];
        let mut end = start + 1;
        while end + 1 < n && ((times[end + 1] - times[end]) - h).abs() <= 1e-9 * h.abs().max(1e-300) {
            end += 1;
        }
        total += simpson_run(&values[start..=end], h);
        start = end;
    }
    total
}

fn simpson_run(v: &[f64], h: f64) -> f64 {
    let intervals = v.len() - 1;
    let even = intervals - intervals % 2;
    let mut acc = 0.0;
    if even > 0 {
        let mut s = v[0] + v[even];
        for (k, x) in v.iter().enumerate().take(even).skip(1) {
            s += if k % 2 == 1 { 4.0 * x } else { 2.0 * x };
        }
        acc += s * h / 3.0;
    }
    if intervals % 2 == 1 {
        acc += 0.5 * h * (v[intervals - 1] + v[intervals]);
    }
    acc
}

/// ∫|⟨e|ψ(t)⟩|²dt along a sampled trajectory, in the trajectory's time unit.
pub fn excited_population_integral(trajectory: &Trajectory, excited_index: usize) -> f64 {
    let pops: Vec<f64> = trajectory.states.iter().map(|s| s[excited_index].norm_sqr()).collect();
    integrate_samples(&trajectory.times, &pops)
}

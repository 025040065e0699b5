// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use holoq_qcore::{c64, CMatrix, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{check_phase, check_rate, min_time_1q, OptimalError};

/// Largest supported number of phase knots.
pub const MAX_KNOTS: usize = 6;
/// Smallest accepted gate-infidelity tolerance.
pub const MIN_TOLERANCE: f64 = 1e-5;
/// Tolerances at or above this are considered too loose to probe minimality.
const LOOSE_TOLERANCE: f64 = 1e-2;

/// Grid search over constant-Ω₀ drives whose phase is piecewise linear
/// between `n_knots` equally spaced knots. The first knot is pinned at 0
/// (a global phase offset only rephases |e⟩); the others take
/// `phase_grid` values evenly spaced on [−2π, 2π]. Durations run over
/// τ·m/`steps_per_tau` for m covering [`duration_min`, `duration_max`]·τ,
/// with τ the analytic minimum time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalitySearchSpec {
    /// Target bright-state phase γ.
    pub gamma: f64,
    /// Drive rate Ω₀.
    pub omega0: f64,
    /// Number of knots in [1, 6]; 1 means a constant phase.
    pub n_knots: usize,
    /// Phase values per free knot (≥ 2).
    pub phase_grid: usize,
    /// Gate infidelity accepted as achieving the target.
    pub tolerance: f64,
    /// Shortest probed duration as a fraction of τ.
    pub duration_min: f64,
    /// Longest probed duration as a fraction of τ.
    pub duration_max: f64,
    /// Duration grid points per τ (50 gives a 2% step).
    pub steps_per_tau: usize,
}

impl OptimalitySearchSpec {
    /// Search from 0.5τ to 1.1τ in 2% steps with a 9-point phase grid
    /// (spacing π/2).
    pub fn new(gamma: f64, omega0: f64, n_knots: usize, tolerance: f64) -> Self {
        Self { gamma, omega0, n_knots, phase_grid: 9, tolerance, duration_min: 0.5, duration_max: 1.1, steps_per_tau: 50 }
    }

    /// Replaces the phase grid size.
    pub fn with_phase_grid(mut self, phase_grid: usize) -> Self {
        self.phase_grid = phase_grid;
        self
    }

    /// Checks ranges.
    pub fn validate(&self) -> Result<(), OptimalError> {
        check_phase(self.gamma)?;
        check_rate(self.omega0)?;
        let bad = |m: &str| Err(OptimalError::InvalidSpec(m.to_string()));
        if !(1..=MAX_KNOTS).contains(&self.n_knots) {
            return bad("n_knots must be in [1, 6]");
        }
        if self.phase_grid < 2 {
            return bad("phase_grid must be at least 2");
        }
        if !(self.tolerance >= MIN_TOLERANCE && self.tolerance < 1.0) {
            return bad("tolerance must be in [1e-5, 1)");
        }
        if !(self.duration_min > 0.0 && self.duration_max >= self.duration_min && self.duration_max.is_finite()) {
            return bad("duration range must satisfy 0 < min <= max");
        }
        if self.steps_per_tau == 0 {
            return bad("steps_per_tau must be positive");
        }
        Ok(())
    }

    fn knot_values(&self) -> Vec<f64> {
        let n = self.phase_grid;
        (0..n).map(|j| -2.0 * PI + 4.0 * PI * j as f64 / (n - 1) as f64).collect()
    }

    fn candidate_count(&self) -> usize {
        self.phase_grid.pow((self.n_knots - 1) as u32)
    }

    fn knots(&self, values: &[f64], mut index: usize) -> Vec<f64> {
        let mut k = vec![0.0; self.n_knots];
        for slot in k.iter_mut().skip(1).rev() {
            *slot = values[index % self.phase_grid];
            index /= self.phase_grid;
        }
        k
    }
}

/// Constant-Ω₀ drive with a piecewise-linear phase through equally spaced
/// knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRamp {
    /// Total duration.
    pub duration: f64,
    /// Drive rate Ω₀.
    pub omega0: f64,
    /// Phase at t = j·duration/(n − 1); a single knot is a constant phase.
    pub knots: Vec<f64>,
}

impl PhaseRamp {
    /// φ(t) by linear interpolation.
    pub fn phase_at(&self, t: f64) -> f64 {
        let n = self.knots.len();
        if n == 1 {
            return self.knots[0];
        }
        let x = (t / self.duration).clamp(0.0, 1.0) * (n - 1) as f64;
        let j = (x.floor() as usize).min(n - 2);
        let f = x - j as f64;
        self.knots[j] * (1.0 - f) + self.knots[j + 1] * f
    }
}

/// exp(−iH̃t) for H̃ = (Ω/2)σx + r|e⟩⟨e| in the basis (|μ⟩, |e⟩).
fn dressed_exp(omega: f64, rate: f64, t: f64) -> [[Complex64; 2]; 2] {
    let (a, b) = (0.5 * rate, 0.5 * omega);
    let w = (a * a + b * b).sqrt();
    let (s, c) = (w * t).sin_cos();
    let sw = if w > 0.0 { s / w } else { t };
    let g = Complex64::from_polar(1.0, -a * t);
    let mi = c64(0.0, -sw);
    [[g * (c - mi * a), g * mi * b], [g * mi * b, g * (c + mi * a)]]
}

/// Exact propagator of the drive on span{|μ⟩, |e⟩} (2×2, that order) with
/// ⟨μ|H|e⟩ = (Ω₀/2)e^{−iφ}: in the frame rotating with φ each linear piece
/// has the constant generator (Ω₀/2)σx + φ̇|e⟩⟨e|.
pub fn ramp_unitary(ramp: &PhaseRamp) -> CMatrix {
    let n = ramp.knots.len();
    let pieces = n.max(2) - 1;
    let dt = ramp.duration / pieces as f64;
    let mut u = [[c64(1.0, 0.0), c64(0.0, 0.0)], [c64(0.0, 0.0), c64(1.0, 0.0)]];
    for j in 0..pieces {
        let (p0, p1) = if n == 1 { (ramp.knots[0], ramp.knots[0]) } else { (ramp.knots[j], ramp.knots[j + 1]) };
        let m = dressed_exp(ramp.omega0, (p1 - p0) / dt, dt);
        // V(φ₁)·m·V(φ₀)† with V(φ) = diag(1, e^{iφ}).
        let (v1, v0) = (Complex64::from_polar(1.0, p1), Complex64::from_polar(1.0, -p0));
        let step = [[m[0][0], m[0][1] * v0], [v1 * m[1][0], v1 * m[1][1] * v0]];
        u = [
            [step[0][0] * u[0][0] + step[0][1] * u[1][0], step[0][0] * u[0][1] + step[0][1] * u[1][1]],
            [step[1][0] * u[0][0] + step[1][1] * u[1][0], step[1][0] * u[0][1] + step[1][1] * u[1][1]],
        ];
    }
    CMatrix::from_rows(&[&u[0], &u[1]])
}

/// Logical-gate infidelity 1 − |1 + U_μμe^{−iγ}|/2: the dark state is
/// untouched, so the gate is achieved iff the bright state returns with
/// phase e^{iγ}.
fn infidelity(u: &CMatrix, gamma: f64) -> f64 {
    1.0 - (c64(1.0, 0.0) + u[(0, 0)] * Complex64::from_polar(1.0, -gamma)).norm() / 2.0
}

/// Outcome of [`time_optimality_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    /// Target phase.
    pub gamma: f64,
    /// Analytic minimum time.
    pub tau_analytic: f64,
    /// Shortest duration achieving the gate, if any.
    pub tau_found: Option<f64>,
    /// Candidate schedules evaluated.
    pub n_candidates: usize,
    /// Infidelity tolerance.
    pub tolerance: f64,
    /// Duration grid step.
    pub duration_step: f64,
    /// The first (lowest-index) schedule achieving the gate at `tau_found`.
    pub best: Option<PhaseRamp>,
    /// Its infidelity.
    pub best_infidelity: Option<f64>,
    /// `tau_found` lies more than one grid step below `tau_analytic`.
    pub below_bound: bool,
    /// `below_bound` with a tolerance loose enough to explain it.
    pub tolerance_dominated: bool,
}

/// Scans durations upward and returns the first at which some candidate
/// ramp achieves the gate. Candidates at one duration are evaluated in
/// parallel; the winner is the lowest candidate index, so the result does
/// not depend on the thread count.
pub fn time_optimality_search(spec: &OptimalitySearchSpec) -> Result<SearchReport, OptimalError> {
    spec.validate()?;
    let tau = min_time_1q(spec.gamma, spec.omega0)?;
    let values = spec.knot_values();
    let count = spec.candidate_count();
    let n = spec.steps_per_tau as f64;
    let m_lo = (spec.duration_min * n).ceil() as usize;
    let m_hi = (spec.duration_max * n + 1e-9).floor() as usize;
    let step = tau / n;
    let mut report = SearchReport {
        gamma: spec.gamma,
        tau_analytic: tau,
        tau_found: None,
        n_candidates: 0,
        tolerance: spec.tolerance,
        duration_step: step,
        best: None,
        best_infidelity: None,
        below_bound: false,
        tolerance_dominated: false,
    };
    for m in m_lo..=m_hi {
        let duration = tau * m as f64 / n;
        let inf: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|i| {
                let ramp = PhaseRamp { duration, omega0: spec.omega0, knots: spec.knots(&values, i) };
                infidelity(&ramp_unitary(&ramp), spec.gamma)
            })
            .collect();
        report.n_candidates += count;
        if let Some(i) = inf.iter().position(|&x| x <= spec.tolerance) {
            report.tau_found = Some(duration);
            report.best = Some(PhaseRamp { duration, omega0: spec.omega0, knots: spec.knots(&values, i) });
            report.best_infidelity = Some(inf[i]);
            report.below_bound = duration < tau - step * (1.0 + 1e-9);
            report.tolerance_dominated = report.below_bound && spec.tolerance >= LOOSE_TOLERANCE;
            break;
        }
    }
    Ok(report)
}

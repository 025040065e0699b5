// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;

use holoq_pulses::{Envelope, Scheme, SchemeSpec, DEFAULT_GRID_POINTS};
use serde::{Deserialize, Serialize};

use crate::RunnerError;

/// Which data set a configuration produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    /// Gate time versus γ for every scheme, in units of 2π/Ω₀.
    #[serde(rename = "FIG2A")]
    Fig2a,
    /// Time-integrated excited-state population versus γ.
    #[serde(rename = "FIG2B")]
    Fig2b,
    /// Gate fidelities under decoherence at a fixed rate.
    #[serde(rename = "FIG2CD")]
    Fig2cd,
    /// Gate fidelity versus Rabi error fraction α.
    #[serde(rename = "FIG3_RABI")]
    Fig3Rabi,
    /// Gate fidelity versus detuning error fraction β.
    #[serde(rename = "FIG3_DETUNING")]
    Fig3Detuning,
    /// Gate fidelity versus decoherence rate Γ.
    #[serde(rename = "FIG3_DECOHERENCE")]
    Fig3Decoherence,
    /// Transmon gate fidelity versus peak Rabi frequency.
    #[serde(rename = "FIG4CD")]
    Fig4cd,
    /// Perturbative theory versus simulation for both error channels.
    #[serde(rename = "FIGS1")]
    FigS1,
    /// Calibrated two-qubit control-phase gate.
    #[serde(rename = "TWOQUBIT")]
    TwoQubit,
    /// The invariant suite.
    #[serde(rename = "VERIFY")]
    Verify,
}

impl ExperimentKind {
    /// Canonical tag, as written in configs.
    pub fn tag(self) -> &'static str {
        match self {
            ExperimentKind::Fig2a => "FIG2A",
            ExperimentKind::Fig2b => "FIG2B",
            ExperimentKind::Fig2cd => "FIG2CD",
            ExperimentKind::Fig3Rabi => "FIG3_RABI",
            ExperimentKind::Fig3Detuning => "FIG3_DETUNING",
            ExperimentKind::Fig3Decoherence => "FIG3_DECOHERENCE",
            ExperimentKind::Fig4cd => "FIG4CD",
            ExperimentKind::FigS1 => "FIGS1",
            ExperimentKind::TwoQubit => "TWOQUBIT",
            ExperimentKind::Verify => "VERIFY",
        }
    }

    /// Whether the experiment sweeps a scalar over [`ExperimentConfig::sweep`].
    pub fn has_sweep(self) -> bool {
        !matches!(self, ExperimentKind::Fig2cd | ExperimentKind::TwoQubit | ExperimentKind::Verify)
    }

    /// Name of the swept quantity (first CSV column).
    pub fn sweep_variable(self) -> &'static str {
        match self {
            ExperimentKind::Fig2a | ExperimentKind::Fig2b => "gamma",
            ExperimentKind::Fig3Rabi => "alpha",
            ExperimentKind::Fig3Detuning => "beta",
            ExperimentKind::Fig3Decoherence => "gamma_decoherence",
            ExperimentKind::Fig4cd => "omega0_mhz",
            ExperimentKind::FigS1 => "error_fraction",
            _ => "",
        }
    }

    fn default_sweep(self) -> Option<Range> {
        let two_pi = 2.0 * PI;
        match self {
            ExperimentKind::Fig2a | ExperimentKind::Fig2b => {
                Some(Range { min: two_pi / 100.0, max: two_pi * 99.0 / 100.0, points: 99 })
            }
            ExperimentKind::Fig3Rabi | ExperimentKind::Fig3Detuning => Some(Range { min: -0.1, max: 0.1, points: 41 }),
            ExperimentKind::Fig3Decoherence => Some(Range { min: 0.0, max: 0.002, points: 11 }),
            ExperimentKind::Fig4cd => Some(Range { min: 20.0, max: 60.0, points: 9 }),
            ExperimentKind::FigS1 => Some(Range { min: -0.1, max: 0.1, points: 21 }),
            _ => None,
        }
    }

    fn default_schemes(self) -> Vec<Scheme> {
        match self {
            ExperimentKind::Fig4cd | ExperimentKind::FigS1 => vec![Scheme::BNhqc, Scheme::Nhqc],
            _ => Scheme::ALL.to_vec(),
        }
    }

    fn default_gates(self) -> Vec<GateSpec> {
        match self {
            ExperimentKind::Fig4cd => vec![GateSpec::T],
            ExperimentKind::FigS1 => vec![GateSpec::XHalf],
            _ => vec![GateSpec::XHalf, GateSpec::T],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Target single-qubit gate U(θ, φ₁, γ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateSpec {
    /// T = U(0, 0, π/4).
    T,
    /// X^{1/2} = U(π/2, 0, π/2).
    XHalf,
    /// Arbitrary U(θ, φ₁, γ).
    Custom { theta: f64, phi1: f64, gamma: f64 },
}

impl GateSpec {
    /// (θ, φ₁, γ).
    pub fn angles(self) -> (f64, f64, f64) {
        match self {
            GateSpec::T => (0.0, 0.0, PI / 4.0),
            GateSpec::XHalf => (PI / 2.0, 0.0, PI / 2.0),
            GateSpec::Custom { theta, phi1, gamma } => (theta, phi1, gamma),
        }
    }

    /// Column label.
    pub fn label(self) -> String {
        match self {
            GateSpec::T => "T".into(),
            GateSpec::XHalf => "X_HALF".into(),
            GateSpec::Custom { theta, phi1, gamma } => format!("U({theta},{phi1},{gamma})"),
        }
    }
}

/// Inclusive uniform grid `min..=max` with `points` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Range {
    /// Grid values; a single point is `min`.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|j| if j + 1 == self.points { self.max } else { self.min + (self.max - self.min) * j as f64 / n })
            .collect()
    }

    fn check(&self) -> Result<(), String> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if self.points == 0 {
            return Err("range needs at least one point".into());
        }
        if self.min > self.max {
            return Err(format!("range is not well ordered: min {} > max {}", self.min, self.max));
        }
        if self.points == 1 && self.min != self.max {
            return Err("a one-point range needs min == max".into());
        }
        Ok(())
    }
}

/// Numerical grids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSettings {
    /// Time steps per schedule segment (even, ≥ 500).
    pub steps_per_segment: usize,
    /// Input states of single-qubit state-averaged fidelities (odd, ≥ 101).
    pub n_states: usize,
    /// Input states per qubit of two-qubit fidelities (odd, ≥ 21).
    pub n_states_per_axis: usize,
}

impl Default for GridSettings {
    fn default() -> Self {
        Self { steps_per_segment: DEFAULT_GRID_POINTS, n_states: 1001, n_states_per_axis: 21 }
    }
}

/// Transmon device (hardware units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransmonSettings {
    /// Anharmonicity κ/2π in MHz (negative).
    pub kappa_mhz: f64,
    /// Decoherence rate Γ/2π in kHz.
    pub gamma_khz: f64,
    /// Peak Rabi frequency Ω₀/2π in MHz of the reference point.
    pub reference_omega0_mhz: f64,
}

impl Default for TransmonSettings {
    fn default() -> Self {
        Self { kappa_mhz: -260.0, gamma_khz: 4.0, reference_omega0_mhz: 45.0 }
    }
}

/// Coupled transmon pair and its calibration (hardware units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwoQubitSettings {
    pub kappa1_mhz: f64,
    pub kappa2_mhz: f64,
    pub delta1_mhz: f64,
    pub g12_mhz: f64,
    /// Target phases on |01⟩ and |11⟩.
    pub xi1: f64,
    pub xi2: f64,
    /// Modulation-index scan.
    pub beta_mod: Range,
    /// Relative half-width and points of the μ scan.
    pub mu_rel: f64,
    pub mu_points: usize,
    /// Relative half-width and points of the τ₂ scan.
    pub tau_rel: f64,
    pub tau_points: usize,
    /// Propagation steps of the full model.
    pub steps: usize,
    /// Propagation steps of the effective model.
    pub effective_steps: usize,
}

impl Default for TwoQubitSettings {
    fn default() -> Self {
        Self {
            kappa1_mhz: -220.0,
            kappa2_mhz: -260.0,
            delta1_mhz: 146.0,
            g12_mhz: 10.0,
            xi1: PI / 4.0,
            xi2: -PI / 4.0,
            beta_mod: Range { min: 0.6, max: 3.0, points: 13 },
            mu_rel: 0.2,
            mu_points: 9,
            tau_rel: 0.1,
            tau_points: 9,
            steps: 20000,
            effective_steps: 4000,
        }
    }
}

/// Sizes of the invariant suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySettings {
    /// Points per axis of the (θ, φ₁, γ) ideal-gate grid.
    pub gate_grid: usize,
    /// Largest knot count of the time-optimality probe.
    pub max_knots: usize,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self { gate_grid: 5, max_knots: 6 }
    }
}

/// A complete run description (JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment to run (required by `sweep`).
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    /// Output file stem; defaults to the lower-case experiment tag.
    #[serde(default)]
    pub name: Option<String>,
    /// Schemes to evaluate; defaults depend on the experiment.
    #[serde(default)]
    pub schemes: Option<Vec<Scheme>>,
    /// Target gates; defaults depend on the experiment.
    #[serde(default)]
    pub gates: Option<Vec<GateSpec>>,
    /// Peak Rabi rate Ω₀ of dimensionless experiments.
    #[serde(default = "one")]
    pub omega0: f64,
    /// Decoherence rate Γ of dimensionless experiments; defaults to Ω₀/2000.
    #[serde(default)]
    pub gamma_decoherence: Option<f64>,
    /// Amplitude envelope of dimensionless experiments.
    #[serde(default = "constant_envelope")]
    pub envelope: Envelope,
    /// Swept range; defaults depend on the experiment.
    #[serde(default)]
    pub sweep: Option<Range>,
    #[serde(default)]
    pub grid: GridSettings,
    #[serde(default)]
    pub transmon: TransmonSettings,
    #[serde(default)]
    pub two_qubit: TwoQubitSettings,
    #[serde(default)]
    pub verify: VerifySettings,
    /// Output directory (overridden by `--out`).
    #[serde(default)]
    pub output: Option<String>,
    /// Worker threads (overridden by `--workers`); never affects results.
    #[serde(default)]
    pub workers: Option<usize>,
}

fn one() -> f64 {
    1.0
}

fn constant_envelope() -> Envelope {
    Envelope::Constant
}

impl ExperimentConfig {
    /// Default configuration of an experiment.
    pub fn for_experiment(kind: ExperimentKind) -> Self {
        Self {
            experiment: Some(kind),
            name: None,
            schemes: None,
            gates: None,
            omega0: 1.0,
            gamma_decoherence: None,
            envelope: Envelope::Constant,
            sweep: None,
            grid: GridSettings::default(),
            transmon: TransmonSettings::default(),
            two_qubit: TwoQubitSettings::default(),
            verify: VerifySettings::default(),
            output: None,
            workers: None,
        }
    }

    /// Parses and validates a JSON config; errors carry `origin:line:column`.
    pub fn from_json(text: &str, origin: &str) -> Result<Self, RunnerError> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| RunnerError::Config(format!("{origin}:{}:{}: {e}", e.line(), e.column())))?;
        cfg.validate().map_err(|(key, reason)| {
            let at = locate_key(text, key).map(|l| format!("{origin}:{l}")).unwrap_or_else(|| origin.to_string());
            RunnerError::Config(format!("{at}: `{key}`: {reason}"))
        })?;
        Ok(cfg)
    }

    /// Experiment kind, required for sweeps.
    pub fn kind(&self) -> Result<ExperimentKind, RunnerError> {
        self.experiment.ok_or_else(|| RunnerError::Config("`experiment` is required".into()))
    }

    /// Output file stem.
    pub fn stem(&self) -> String {
        match (&self.name, self.experiment) {
            (Some(n), _) => n.clone(),
            (None, Some(k)) => k.tag().to_ascii_lowercase(),
            (None, None) => "run".into(),
        }
    }

    /// Effective scheme list.
    pub fn schemes(&self) -> Vec<Scheme> {
        self.schemes.clone().unwrap_or_else(|| self.experiment.map(|k| k.default_schemes()).unwrap_or(Scheme::ALL.to_vec()))
    }

    /// Effective gate list.
    pub fn gates(&self) -> Vec<GateSpec> {
        self.gates
            .clone()
            .unwrap_or_else(|| self.experiment.map(|k| k.default_gates()).unwrap_or(vec![GateSpec::XHalf, GateSpec::T]))
    }

    /// Effective swept range.
    pub fn sweep_range(&self) -> Option<Range> {
        self.sweep.or_else(|| self.experiment.and_then(|k| k.default_sweep()))
    }

    /// Effective decoherence rate.
    pub fn gamma_decoherence(&self) -> f64 {
        self.gamma_decoherence.unwrap_or(self.omega0 / 2000.0)
    }

    /// Checks the invariants, returning the offending key and the reason.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(("omega0", format!("rate must be positive, got {}", self.omega0)));
        }
        if let Some(g) = self.gamma_decoherence {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(("gamma_decoherence", format!("rate must be non-negative, got {g}")));
            }
        }
        if let Some(name) = &self.name {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(("name", format!("`{name}` must be a non-empty [A-Za-z0-9_-] file stem")));
            }
        }
        if self.workers == Some(0) {
            return Err(("workers", "at least one worker is required".into()));
        }
        let g = &self.grid;
        if g.steps_per_segment < 500 || g.steps_per_segment % 2 != 0 {
            return Err(("steps_per_segment", format!("{} must be even and at least 500", g.steps_per_segment)));
        }
        if g.n_states < 101 || g.n_states % 2 == 0 {
            return Err(("n_states", format!("{} must be odd and at least 101", g.n_states)));
        }
        if g.n_states_per_axis < 21 || g.n_states_per_axis % 2 == 0 {
            return Err(("n_states_per_axis", format!("{} must be odd and at least 21", g.n_states_per_axis)));
        }
        if self.schemes.as_ref().is_some_and(Vec::is_empty) {
            return Err(("schemes", "scheme list is empty".into()));
        }
        if self.gates.as_ref().is_some_and(Vec::is_empty) {
            return Err(("gates", "gate list is empty".into()));
        }
        for gate in self.gates() {
            let (t, p, gm) = gate.angles();
            if ![t, p, gm].iter().all(|v| v.is_finite()) {
                return Err(("gates", format!("{} has non-finite angles", gate.label())));
            }
            for scheme in self.schemes() {
                let spec = SchemeSpec::new(scheme, t, p, gm, self.omega0).with_grid(g.steps_per_segment);
                spec.validate().map_err(|e| ("gates", format!("{} with {scheme}: {e}", gate.label())))?;
            }
        }
        if let Some(r) = &self.sweep {
            r.check().map_err(|e| ("sweep", e))?;
        }
        let t = &self.transmon;
        if !(t.kappa_mhz < 0.0 && t.kappa_mhz.is_finite()) {
            return Err(("kappa_mhz", format!("anharmonicity must be negative, got {}", t.kappa_mhz)));
        }
        if !(t.gamma_khz >= 0.0 && t.gamma_khz.is_finite()) {
            return Err(("gamma_khz", format!("rate must be non-negative, got {}", t.gamma_khz)));
        }
        if !(t.reference_omega0_mhz > 0.0 && t.reference_omega0_mhz < t.kappa_mhz.abs()) {
            return Err(("reference_omega0_mhz", "must be positive and below |kappa_mhz|".into()));
        }
        let q = &self.two_qubit;
        q.beta_mod.check().map_err(|e| ("beta_mod", e))?;
        if !(q.beta_mod.min > 0.0) {
            return Err(("beta_mod", "modulation index must be positive".into()));
        }
        if !(q.g12_mhz > 0.0) {
            return Err(("g12_mhz", "coupling must be positive".into()));
        }
        if !((0.0..1.0).contains(&q.mu_rel) && (0.0..1.0).contains(&q.tau_rel)) {
            return Err(("mu_rel", "relative scan widths must lie in [0, 1)".into()));
        }
        if q.mu_points == 0 || q.tau_points == 0 || q.steps < 100 || q.effective_steps < 100 {
            return Err(("steps", "scan points must be positive and step counts at least 100".into()));
        }
        if !(q.xi1 > 0.0 && q.xi1 < 2.0 * PI && q.xi2.is_finite()) {
            return Err(("xi1", "phase must lie in (0, 2π)".into()));
        }
        if !(1..=holoq_optimal::MAX_KNOTS).contains(&self.verify.max_knots) || self.verify.gate_grid < 2 {
            return Err(("max_knots", "knots must lie in [1, 6] and the gate grid needs at least 2 points".into()));
        }
        if let Some(kind) = self.experiment {
            self.validate_for(kind)?;
        }
        Ok(())
    }

    fn validate_for(&self, kind: ExperimentKind) -> Result<(), (&'static str, String)> {
        if self.sweep.is_some() && !kind.has_sweep() {
            return Err(("sweep", format!("{kind} does not sweep a parameter")));
        }
        let r = self.sweep_range();
        match kind {
            ExperimentKind::Fig2a | ExperimentKind::Fig2b => {
                let r = r.expect("default sweep");
                if !(r.min > 0.0 && r.max < 2.0 * PI) {
                    return Err(("sweep", "γ must lie inside the open interval (0, 2π)".into()));
                }
            }
            ExperimentKind::Fig3Rabi | ExperimentKind::Fig3Detuning | ExperimentKind::FigS1 => {
                let r = r.expect("default sweep");
                let lim = holoq_perturb::MAX_ERROR_FRACTION;
                if r.min < -lim || r.max > lim {
                    return Err(("sweep", format!("error fractions must lie in [−{lim}, {lim}]")));
                }
                if kind == ExperimentKind::Fig3Rabi && r.min <= -1.0 {
                    return Err(("sweep", "Rabi error fraction must exceed −1".into()));
                }
            }
            ExperimentKind::Fig3Decoherence => {
                if r.expect("default sweep").min < 0.0 {
                    return Err(("sweep", "decoherence rates must be non-negative".into()));
                }
            }
            ExperimentKind::Fig4cd => {
                let r = r.expect("default sweep");
                if !(r.min > 0.0 && r.max < self.transmon.kappa_mhz.abs()) {
                    return Err(("sweep", "Rabi frequencies must be positive and below |kappa_mhz|".into()));
                }
                for s in self.schemes() {
                    if !matches!(s, Scheme::BNhqc | Scheme::Nhqc) {
                        return Err(("schemes", format!("{s} is not available on the transmon (use B_NHQC, NHQC)")));
                    }
                }
            }
            _ => {}
        }
        if kind == ExperimentKind::FigS1 {
            if self.gates().len() != 1 {
                return Err(("gates", "FIGS1 compares a single gate".into()));
            }
            if self.schemes.is_some() {
                return Err(("schemes", "FIGS1 always compares B_NHQC with NHQC".into()));
            }
        }
        Ok(())
    }

    /// Canonical JSON of the result-affecting fields (output location and
    /// worker count excluded).
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        c.workers = None;
        serde_json::to_string(&c).expect("config serialises")
    }
}

/// 1-based line of the first occurrence of `"key"` in `text`.
fn locate_key(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

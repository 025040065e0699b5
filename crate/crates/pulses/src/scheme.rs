// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::PulseError;

// CONVENTION(default-grid)
/// Default number of time steps per segment. Keeps the midpoint-rule
/// step-halving difference below 1e-7 for every scheme.
pub const DEFAULT_GRID_POINTS: usize = 8000;

/// Gate schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Conventional non-adiabatic holonomic gate: two π-area halves.
    #[serde(rename = "NHQC")]
    Nhqc,
    /// Two consecutive NHQC loops, each realising γ/2.
    #[serde(rename = "C_NHQC")]
    CNhqc,
    /// Minimum-time (brachistochrone) holonomic loop.
    #[serde(rename = "B_NHQC")]
    BNhqc,
    /// Two minimum-time loops for γ/2, the second offset by π.
    #[serde(rename = "CB_NHQC")]
    CbNhqc,
}

impl Scheme {
    /// All schemes in canonical order.
    pub const ALL: [Scheme; 4] = [Scheme::Nhqc, Scheme::CNhqc, Scheme::BNhqc, Scheme::CbNhqc];

    /// Canonical upper-case tag.
    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Nhqc => "NHQC",
            Scheme::CNhqc => "C_NHQC",
            Scheme::BNhqc => "B_NHQC",
            Scheme::CbNhqc => "CB_NHQC",
        }
    }

    /// Number of cyclic loops in the scheme.
    pub fn loops(self) -> usize {
        match self {
            Scheme::Nhqc | Scheme::BNhqc => 1,
            Scheme::CNhqc | Scheme::CbNhqc => 2,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scheme {
    type Err = PulseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "NHQC" => Ok(Scheme::Nhqc),
            "C_NHQC" => Ok(Scheme::CNhqc),
            "B_NHQC" => Ok(Scheme::BNhqc),
            "CB_NHQC" => Ok(Scheme::CbNhqc),
            _ => Err(PulseError::UnknownScheme(s.to_string())),
        }
    }
}

/// Amplitude envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Envelope {
    /// Ω(t) = Ω₀.
    #[serde(rename = "CONSTANT")]
    Constant,
    /// Ω(t) = Ω₀ sin²(πt/T) over each loop, with T doubled to keep the area.
    #[serde(rename = "SIN2")]
    Sin2,
}

impl Envelope {
    /// Duration multiplier relative to a constant envelope of equal area.
    pub fn stretch(self) -> f64 {
        match self {
            Envelope::Constant => 1.0,
            Envelope::Sin2 => 2.0,
        }
    }

    /// Amplitude as a fraction of Ω₀ at fractional time `s ∈ [0, 1]`.
    pub fn shape(self, s: f64) -> f64 {
        match self {
            Envelope::Constant => 1.0,
            Envelope::Sin2 => (PI * s).sin().powi(2),
        }
    }

    /// Accumulated area at fractional time `s` as a fraction of the total.
    pub fn area_fraction(self, s: f64) -> f64 {
        match self {
            Envelope::Constant => s,
            Envelope::Sin2 => s - (2.0 * PI * s).sin() / (2.0 * PI),
        }
    }
}

impl FromStr for Envelope {
    type Err = PulseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CONSTANT" => Ok(Envelope::Constant),
            "SIN2" => Ok(Envelope::Sin2),
            _ => Err(PulseError::UnknownEnvelope(s.to_string())),
        }
    }
}

/// Gate-level description from which a schedule and its ideal target derive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeSpec {
    /// Scheme tag.
    pub scheme: Scheme,
    /// Polar angle θ of the rotation axis.
    pub theta: f64,
    /// Azimuth φ₁ of the rotation axis.
    pub phi1: f64,
    /// Target geometric phase γ (rotation angle).
    pub gamma: f64,
    /// Peak Rabi rate Ω₀.
    pub omega0: f64,
    /// Amplitude envelope.
    pub envelope: Envelope,
    /// Time steps per segment.
    pub grid_points: usize,
}

impl SchemeSpec {
    /// Constant-envelope spec at the default grid.
    pub fn new(scheme: Scheme, theta: f64, phi1: f64, gamma: f64, omega0: f64) -> Self {
        Self { scheme, theta, phi1, gamma, omega0, envelope: Envelope::Constant, grid_points: DEFAULT_GRID_POINTS }
    }

    /// Same spec with another envelope.
    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = envelope;
        self
    }

    /// Same spec with another grid.
    pub fn with_grid(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    /// Checks the field invariants.
    pub fn validate(&self) -> Result<(), PulseError> {
        let finite = [self.theta, self.phi1, self.gamma, self.omega0].iter().all(|v| v.is_finite());
        if !finite {
            return Err(PulseError::InvalidSpec("non-finite field".into()));
        }
        if self.omega0 <= 0.0 {
            return Err(PulseError::InvalidSpec(format!("omega0 must be positive, got {}", self.omega0)));
        }
        if self.grid_points < 500 {
            return Err(PulseError::InvalidSpec(format!("grid_points must be at least 500, got {}", self.grid_points)));
        }
        if self.grid_points % 2 != 0 {
            return Err(PulseError::InvalidSpec(format!("grid_points must be even, got {}", self.grid_points)));
        }
        match self.scheme {
            Scheme::BNhqc => check_open_gamma(self.gamma, "B_NHQC"),
            Scheme::CbNhqc => check_open_gamma(self.gamma / 2.0, "CB_NHQC").map_err(|_| PulseError::GammaOutOfRange {
                gamma: self.gamma,
                scheme: "CB_NHQC",
            }),
            Scheme::Nhqc | Scheme::CNhqc => Ok(()),
        }
    }

    /// Total gate duration implied by the spec.
    pub fn duration(&self) -> Result<f64, PulseError> {
        self.validate()?;
        let stretch = self.envelope.stretch();
        Ok(match self.scheme {
            Scheme::Nhqc => stretch * 2.0 * PI / self.omega0,
            Scheme::CNhqc => stretch * 4.0 * PI / self.omega0,
            Scheme::BNhqc => stretch * b_nhqc_duration(self.gamma, self.omega0)?,
            Scheme::CbNhqc => stretch * 2.0 * b_nhqc_duration(self.gamma / 2.0, self.omega0)?,
        })
    }
}

/// Smallest γ distance from 0 and 2π accepted by minimum-time synthesis.
const GAMMA_EDGE: f64 = 1e-6;

fn check_open_gamma(gamma: f64, scheme: &'static str) -> Result<(), PulseError> {
    if gamma <= GAMMA_EDGE || gamma >= 2.0 * PI - GAMMA_EDGE {
        Err(PulseError::GammaOutOfRange { gamma, scheme })
    } else {
        Ok(())
    }
}

// CONVENTION(one-qubit-min-time)
/// Minimum loop time τ = 2√(π² − (π − γ)²)/Ω₀ for a constant envelope.
pub fn b_nhqc_duration(gamma: f64, omega0: f64) -> Result<f64, PulseError> {
    check_open_gamma(gamma, "B_NHQC")?;
    if !(omega0 > 0.0) {
        return Err(PulseError::InvalidSpec(format!("omega0 must be positive, got {omega0}")));
    }
    let d = PI - gamma;
    Ok(2.0 * (PI * PI - d * d).sqrt() / omega0)
}

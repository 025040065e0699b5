// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use holoq_pulses::{wrap_angle, EtaPath, PhaseLaw, PulseSchedule};
use holoq_qcore::{c64, CVector, Complex64};

use crate::HolonomyError;

/// Phase weights σ = (+1, −1, 0) linking the auxiliary states to the
/// evolving states: |φ_a⟩ = e^{iσ_aλ₁}|ψ_a⟩.
pub const SIGMA: [f64; 3] = [1.0, -1.0, 0.0];

const GRAM_TOL: f64 = 1e-9;
const CLOSURE_TOL: f64 = 1e-8;
const JOIN_TOL: f64 = 1e-9;

/// A smooth stretch of the frame on a uniform time grid (both endpoints
/// included).
#[derive(Debug, Clone, PartialEq)]
pub struct FramePiece {
    /// Sample times.
    pub times: Vec<f64>,
    /// Solutions ψ₀, ψ₁, ψ₂ of the Schrödinger equation.
    pub psi: [Vec<CVector>; 3],
    /// Accumulated phase λ₁.
    pub lambda1: Vec<f64>,
    /// Auxiliary states φ_a = e^{iσ_aλ₁}ψ_a.
    pub phi: [Vec<CVector>; 3],
}

impl FramePiece {
    /// Uniform step of the piece grid.
    pub fn dt(&self) -> f64 {
        (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
    }
}

/// Auxiliary frame of a cyclic loop, split into smooth pieces whose states
/// join continuously.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxFrame {
    /// Pieces in time order.
    pub pieces: Vec<FramePiece>,
    /// The bright state |μ⟩ the loop starts from.
    pub bright: CVector,
}

/// One solution piece: sample times, the three solution series and λ₁.
pub type SolutionPiece = (Vec<f64>, [Vec<CVector>; 3], Vec<f64>);

impl AuxFrame {
    /// Builds a frame from solution pieces and their λ₁ series, forming the
    /// auxiliary states and checking orthonormality and cyclicity.
    pub fn from_solutions(
        pieces: Vec<SolutionPiece>,
        bright: CVector,
    ) -> Result<Self, HolonomyError> {
        let mut out = Vec::with_capacity(pieces.len());
        for (times, psi, lambda1) in pieces {
            let n = times.len();
            if n < 5 || psi.iter().any(|p| p.len() != n) || lambda1.len() != n {
                return Err(HolonomyError::InvalidFrame("each piece needs ≥ 5 consistent samples".into()));
            }
            let phi: [Vec<CVector>; 3] = std::array::from_fn(|a| {
                psi[a]
                    .iter()
                    .zip(&lambda1)
                    .map(|(v, &l)| if SIGMA[a] == 0.0 { v.clone() } else { v.scale(Complex64::from_polar(1.0, SIGMA[a] * l)) })
                    .collect()
            });
            out.push(FramePiece { times, psi, lambda1, phi });
        }
        let frame = Self { pieces: out, bright };
        frame.check()?;
        Ok(frame)
    }

    /// Checks orthonormality at every sample and closure of the loop.
    pub fn check(&self) -> Result<(), HolonomyError> {
        if self.pieces.is_empty() {
            return Err(HolonomyError::InvalidFrame("empty frame".into()));
        }
        for p in &self.pieces {
            for k in 0..p.times.len() {
                for a in 0..3 {
                    for b in 0..3 {
                        let g = p.phi[a][k].inner(&p.phi[b][k]);
                        let target = if a == b { 1.0 } else { 0.0 };
                        if (g - c64(target, 0.0)).norm() > GRAM_TOL {
                            return Err(HolonomyError::InvalidFrame(format!(
                                "Gram entry ({a},{b}) off by {:e} at t = {}",
                                (g - c64(target, 0.0)).norm(),
                                p.times[k]
                            )));
                        }
                    }
                }
            }
        }
        let first = &self.pieces[0];
        let last = &self.pieces[self.pieces.len() - 1];
        for a in 0..3 {
            let ov = last.phi[a][last.times.len() - 1].inner(&first.phi[a][0]).norm();
            if (ov - 1.0).abs() > CLOSURE_TOL {
                return Err(HolonomyError::NonCyclic(format!("|⟨φ_{a}(τ)|φ_{a}(0)⟩| = {ov}")));
            }
        }
        Ok(())
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.bright.dim()
    }

    /// Start time.
    pub fn t_start(&self) -> f64 {
        self.pieces[0].times[0]
    }

    /// Loop duration.
    pub fn duration(&self) -> f64 {
        let last = &self.pieces[self.pieces.len() - 1];
        last.times[last.times.len() - 1] - self.t_start()
    }

    /// All sample times, shared piece boundaries listed once.
    pub fn times(&self) -> Vec<f64> {
        self.flatten(|p, k| p.times[k])
    }

    /// Auxiliary-state series φ_a, shared boundaries listed once (the later
    /// piece's sample is kept).
    pub fn states(&self) -> [Vec<CVector>; 3] {
        std::array::from_fn(|a| self.flatten(|p, k| p.phi[a][k].clone()))
    }

    /// Solution series ψ_a, shared boundaries listed once; continuous across
    /// piece joins.
    pub fn solutions(&self) -> [Vec<CVector>; 3] {
        std::array::from_fn(|a| self.flatten(|p, k| p.psi[a][k].clone()))
    }

    /// λ₁ series, shared boundaries listed once.
    pub fn lambda1(&self) -> Vec<f64> {
        self.flatten(|p, k| p.lambda1[k])
    }

    /// λ₁(τ) − λ₁(0).
    pub fn delta_lambda1(&self) -> f64 {
        let last = &self.pieces[self.pieces.len() - 1];
        last.lambda1[last.lambda1.len() - 1] - self.pieces[0].lambda1[0]
    }

    fn flatten<T>(&self, f: impl Fn(&FramePiece, usize) -> T) -> Vec<T> {
        let mut out = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                out.pop();
            }
            out.extend((0..p.times.len()).map(|k| f(p, k)));
        }
        out
    }

    /// Applies the gauge |φ_a⟩ → e^{iα_a(t)}|φ_a⟩; `alpha(a, t)` must be
    /// continuous in t. Solutions and λ₁ are unchanged.
    pub fn gauge(&self, alpha: impl Fn(usize, f64) -> f64) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let phi = std::array::from_fn(|a| {
                    p.phi[a]
                        .iter()
                        .zip(&p.times)
                        .map(|(v, &t)| v.scale(Complex64::from_polar(1.0, alpha(a, t))))
                        .collect()
                });
                FramePiece { phi, ..p.clone() }
            })
            .collect();
        Self { pieces, bright: self.bright.clone() }
    }

    /// The same frame on a uniformly rescaled clock t → s·t.
    pub fn rescale_time(&self, s: f64) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| FramePiece { times: p.times.iter().map(|t| t * s).collect(), ..p.clone() })
            .collect();
        Self { pieces, bright: self.bright.clone() }
    }
}

/// Bright state sin(θ/2)e^{iφ₁}|0⟩ + cos(θ/2)|1⟩ in the Λ basis.
fn bright_state(theta: f64, phi1: f64) -> CVector {
    CVector::from_vec(vec![
        Complex64::from_polar((0.5 * theta).sin(), phi1),
        c64((0.5 * theta).cos(), 0.0),
        c64(0.0, 0.0),
    ])
}

/// Dark state cos(θ/2)|0⟩ − sin(θ/2)e^{−iφ₁}|1⟩.
fn dark_state(theta: f64, phi1: f64) -> CVector {
    CVector::from_vec(vec![
        c64((0.5 * theta).cos(), 0.0),
        -Complex64::from_polar((0.5 * theta).sin(), -phi1),
        c64(0.0, 0.0),
    ])
}

/// Closed-form frame parameters (η₁, η₂, cos η₃) along one loop sample.
#[derive(Debug, Clone, Copy)]
struct Sample {
    t: f64,
    eta1: f64,
    eta2: f64,
    c3: f64,
}

/// Continuous phase of c − i s cos η₃ along a half loop (x = η₁/2). When
/// cos η₃ = 0 the amplitude vanishes at x = π/2 and the phase is 0 on the
/// first half and π on the second, each taken as the limit from inside.
fn amplitude_phase(x: f64, c3: f64, second_half: bool) -> f64 {
    if c3 == 0.0 {
        return if second_half { PI } else { 0.0 };
    }
    (-x.sin() * c3).atan2(x.cos())
}

fn raw_states(s: &Sample, mu: &CVector, dark: &CVector) -> [CVector; 3] {
    let x = 0.5 * s.eta1;
    let (sn, cs) = (x.sin(), x.cos());
    let s3 = (1.0 - s.c3 * s.c3).max(0.0).sqrt();
    let ep = Complex64::from_polar(1.0, 0.5 * s.eta2);
    let em = ep.conj();
    let e = CVector::basis(3, 2);
    let cross = c64(0.0, -s3 * sn);
    let psi0 = e.scale(c64(cs, sn * s.c3) * em).add_scaled(cross * ep, mu);
    let psi1 = e.scale(cross * em).add_scaled(c64(cs, -sn * s.c3) * ep, mu);
    [psi0, psi1, dark.clone()]
}

/// Builds phase-matched pieces from closed-form samples; each entry of
/// `halves` is (samples, is_second_half).
fn build(halves: Vec<(Vec<Sample>, bool)>, mu: CVector, dark: CVector) -> Result<AuxFrame, HolonomyError> {
    let mut pieces = Vec::with_capacity(halves.len());
    let mut prev: Option<([CVector; 3], f64)> = None;
    for (samples, second) in halves {
        let raw: Vec<[CVector; 3]> = samples.iter().map(|s| raw_states(s, &mu, &dark)).collect();
        let lam_raw: Vec<f64> =
            samples.iter().map(|s| amplitude_phase(0.5 * s.eta1, s.c3, second) + 0.5 * s.eta2).collect();
        let (chi, shift) = match &prev {
            None => ([c64(1.0, 0.0); 3], 0.0),
            Some((end_states, end_lambda)) => {
                let mut chi = [c64(1.0, 0.0); 3];
                for a in 0..3 {
                    let ov = raw[0][a].inner(&end_states[a]);
                    if (ov.norm() - 1.0).abs() > JOIN_TOL {
                        return Err(HolonomyError::InvalidFrame(format!("pieces do not join (|overlap| = {})", ov.norm())));
                    }
                    chi[a] = ov / ov.norm();
                }
                let start = lam_raw[0] + chi[1].arg();
                let m = ((end_lambda - start) / (2.0 * PI)).round();
                (chi, chi[1].arg() + 2.0 * PI * m)
            }
        };
        let psi: [Vec<CVector>; 3] = std::array::from_fn(|a| raw.iter().map(|r| r[a].scale(chi[a])).collect());
        let lambda1: Vec<f64> = lam_raw.iter().map(|l| l + shift).collect();
        let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
        prev = Some((std::array::from_fn(|a| psi[a][psi[a].len() - 1].clone()), lambda1[lambda1.len() - 1]));
        pieces.push((times, psi, lambda1));
    }
    AuxFrame::from_solutions(pieces, mu)
}

/// Frame parameters (η₁, η₂, cos η₃) of a schedule at time `t` within the
/// given segment half; η₂ is the negated drive phase.
// CONVENTION(loop-phase-sign): frame = Z·conj of the closed form, so Δλ₁ = π + η₂(τ)/2 = γ.
pub fn frame_params(schedule: &PulseSchedule, segment: usize, t: f64, second_half: bool) -> (f64, f64, f64) {
    let seg = &schedule.segments[segment];
    let f = seg.envelope.area_fraction(seg.fraction(t));
    let (phase, c3) = match seg.phase {
        PhaseLaw::Linear { start, swing } => (start + swing * f, -swing / (2.0 * PI)),
        PhaseLaw::Jump { before, after } => (if second_half { after } else { before }, 0.0),
    };
    (2.0 * PI * f, -phase, c3)
}

/// Auxiliary frame of any synthesised schedule. Every loop is split at its
/// half-area point, where a phase jump (if any) occurs.
pub fn scheme_frame(schedule: &PulseSchedule) -> Result<AuxFrame, HolonomyError> {
    let n = schedule.steps_per_segment;
    if n < 8 || n % 2 != 0 {
        return Err(HolonomyError::InvalidFrame(format!("steps per segment {n} must be even and ≥ 8")));
    }
    let half = n / 2;
    let mut halves = Vec::with_capacity(2 * schedule.segments.len());
    for (si, seg) in schedule.segments.iter().enumerate() {
        let mid = seg.t_start + 0.5 * seg.duration;
        for (second, a, b) in [(false, seg.t_start, mid), (true, mid, seg.t_end())] {
            let h = (b - a) / half as f64;
            let samples = (0..=half)
                .map(|k| {
                    let t = if k == half { b } else { a + k as f64 * h };
                    let (eta1, eta2, c3) = frame_params(schedule, si, t, second);
                    Sample { t, eta1, eta2, c3 }
                })
                .collect();
            halves.push((samples, second));
        }
    }
    build(halves, bright_state(schedule.theta, schedule.phi1), dark_state(schedule.theta, schedule.phi1))
}

/// Auxiliary frame of a single minimum-time loop given by `path`, for the
/// gate U(θ, φ₁, γ). The drive couples the bright state with angles
/// (θ, π − φ₁), matching the synthesised schedules.
pub fn aux_frame(path: &EtaPath, theta: f64, phi1: f64, gamma: f64) -> Result<AuxFrame, HolonomyError> {
    let n = path.times.len().saturating_sub(1);
    let end = *path.eta1.last().unwrap_or(&0.0);
    if (end.abs() - 2.0 * PI).abs() > 1e-9 {
        return Err(HolonomyError::NonCyclic(format!("η₁(τ) = {end}, expected ±2π")));
    }
    let c3 = path.eta3.cos();
    if (c3 - (gamma - PI) / PI).abs() > 1e-9 {
        return Err(HolonomyError::GridMismatch(format!("path closure cos η₃ = {c3} does not realise γ = {gamma}")));
    }
    if n < 8 || n % 2 != 0 {
        return Err(HolonomyError::InvalidFrame(format!("path grid {n} must be even and ≥ 8")));
    }
    let sample = |k: usize| Sample { t: path.times[k], eta1: path.eta1[k].abs(), eta2: path.eta2[k], c3 };
    let halves = vec![((0..=n / 2).map(sample).collect(), false), ((n / 2..=n).map(sample).collect(), true)];
    let phi1_drive = wrap_angle(PI - phi1);
    build(halves, bright_state(theta, phi1_drive), dark_state(theta, phi1_drive))
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt::Write as _;

use holoq_qcore::fmt_sig15;
use serde::{Deserialize, Serialize};

use crate::{wrap_angle, Envelope, PulseError, Scheme, SchemeSpec};

/// How the drive phase evolves inside one segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseLaw {
    /// φ = start + swing · (accumulated area fraction).
    Linear { start: f64, swing: f64 },
    /// φ = before until half the segment area is delivered, then `after`.
    Jump { before: f64, after: f64 },
}

/// One cyclic loop of the drive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// Human-readable label, e.g. `loop1`.
    pub label: String,
    /// Index of the first sample of the segment in the schedule arrays.
    pub start_index: usize,
    /// Index of the last sample of the segment (inclusive).
    pub end_index: usize,
    /// Start time.
    pub t_start: f64,
    /// Duration.
    pub duration: f64,
    /// Peak amplitude.
    pub omega0: f64,
    /// Amplitude envelope.
    pub envelope: Envelope,
    /// Phase law.
    pub phase: PhaseLaw,
}

impl Segment {
    /// End time.
    pub fn t_end(&self) -> f64 {
        self.t_start + self.duration
    }

    /// Fractional position of global time `t` inside the segment.
    pub fn fraction(&self, t: f64) -> f64 {
        ((t - self.t_start) / self.duration).clamp(0.0, 1.0)
    }

    /// Amplitude at global time `t`.
    pub fn omega_at(&self, t: f64) -> f64 {
        self.omega0 * self.envelope.shape(self.fraction(t))
    }

// CONVENTION(sin2-phase): the phase follows the accumulated area.
    /// Drive phase at global time `t`.
    pub fn phi_at(&self, t: f64) -> f64 {
        let f = self.envelope.area_fraction(self.fraction(t));
        match self.phase {
            PhaseLaw::Linear { start, swing } => start + swing * f,
            PhaseLaw::Jump { before, after } => {
                if f < 0.5 {
                    before
                } else {
                    after
                }
            }
        }
    }

    /// Total pulse area ∫Ω dt of the segment (closed form).
    pub fn area(&self) -> f64 {
        self.omega0 * self.duration / self.envelope.stretch()
    }

    /// Auxiliary loop angles at global time `t`: (η₁, η₂, cos η₃) with
    /// η₁ = 2π × (area fraction), η₂ = −φ and cos η₃ = dη₂/dη₁.
    pub fn eta_at(&self, t: f64) -> (f64, f64, f64) {
        let f = self.envelope.area_fraction(self.fraction(t));
        let c3 = match self.phase {
            PhaseLaw::Linear { swing, .. } => -swing / (2.0 * PI),
            PhaseLaw::Jump { .. } => 0.0,
        };
        (2.0 * PI * f, -self.phi_at(t), c3)
    }

    /// Time of the phase jump, if the law has one.
    pub fn jump_time(&self) -> Option<f64> {
        match self.phase {
            PhaseLaw::Jump { .. } => Some(self.t_start + 0.5 * self.duration),
            PhaseLaw::Linear { .. } => None,
        }
    }
}

/// A sampled drive schedule together with its analytic segment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    /// Scheme that produced the schedule.
    pub scheme: Scheme,
    /// Mixing angle of the driven bright state.
    pub theta: f64,
    /// Relative phase of the driven bright state.
    pub phi1: f64,
    /// Gate-level phase γ the schedule realises.
    pub gamma: f64,
    /// Peak amplitude.
    pub omega0: f64,
    /// Time steps per segment.
    pub steps_per_segment: usize,
    /// Sample times (uniform inside each segment, strictly increasing).
    pub times: Vec<f64>,
    /// Amplitude samples Ω(t) ≥ 0.
    pub omega: Vec<f64>,
    /// Phase samples φ(t).
    pub phi: Vec<f64>,
    /// Segment table.
    pub segments: Vec<Segment>,
}

impl PulseSchedule {
    /// Total duration.
    pub fn duration(&self) -> f64 {
        self.segments.last().map(Segment::t_end).unwrap_or(0.0)
    }

    /// Segment active at time `t` (the later one on a shared boundary).
    pub fn segment_at(&self, t: f64) -> &Segment {
        self.segments.iter().rev().find(|s| t >= s.t_start).unwrap_or(&self.segments[0])
    }

    /// Amplitude at `t`.
    pub fn omega_at(&self, t: f64) -> f64 {
        self.segment_at(t).omega_at(t)
    }

    /// Phase at `t`.
    pub fn phi_at(&self, t: f64) -> f64 {
        self.segment_at(t).phi_at(t)
    }

    /// Smooth pieces of the drive: consecutive `(t_start, t_end, steps)` with
    /// the drive analytic inside each piece. Segments are split at phase
    /// jumps; `steps` distributes `steps_per_segment` over the halves.
    pub fn pieces(&self) -> Vec<(f64, f64, usize)> {
        let n = self.steps_per_segment;
        let mut out = Vec::with_capacity(2 * self.segments.len());
        for s in &self.segments {
            match s.jump_time() {
                Some(tj) => {
                    out.push((s.t_start, tj, n / 2));
                    out.push((tj, s.t_end(), n - n / 2));
                }
                None => out.push((s.t_start, s.t_end(), n)),
            }
        }
        out
    }

    /// Closed-form pulse area.
    pub fn area(&self) -> f64 {
        self.segments.iter().map(Segment::area).sum()
    }

    /// Pulse area by composite Simpson integration of the samples.
    pub fn sampled_area(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| {
                let n = s.end_index - s.start_index;
                let h = s.duration / n as f64;
                let vals: Vec<f64> = (0..=n).map(|k| s.omega_at(s.t_start + k as f64 * h)).collect();
                simpson(&vals, h)
            })
            .sum()
    }

    /// CSV with columns `t,omega,phi,segment` at 15 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,omega,phi,segment\n");
        for (k, &t) in self.times.iter().enumerate() {
            let seg = self.segments.iter().rposition(|s| k >= s.start_index).unwrap_or(0);
            let _ = writeln!(out, "{},{},{},{}", fmt_sig15(t), fmt_sig15(self.omega[k]), fmt_sig15(self.phi[k]), seg);
        }
        out
    }
}

/// Composite Simpson rule on an even number of uniform intervals; falls back
/// to the trapezoid rule for an odd interval count.
pub(crate) fn simpson(vals: &[f64], h: f64) -> f64 {
    let n = vals.len() - 1;
    if n % 2 == 1 || n < 2 {
        return h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[n]));
    }
    let mut acc = vals[0] + vals[n];
    for (k, v) in vals.iter().enumerate().take(n).skip(1) {
        acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// Synthesises the drive schedule implementing `spec`.
pub fn synth_pulse(spec: &SchemeSpec) -> Result<PulseSchedule, PulseError> {
    spec.validate()?;
    let stretch = spec.envelope.stretch();
    let w0 = spec.omega0;
    // (duration, phase law) per loop.
    let loops: Vec<(f64, PhaseLaw)> = match spec.scheme {
        Scheme::BNhqc => {
            let tau = crate::b_nhqc_duration(spec.gamma, w0)?;
            vec![(tau, PhaseLaw::Linear { start: 0.0, swing: 2.0 * (PI - spec.gamma) })]
        }
        Scheme::CbNhqc => {
            let half = spec.gamma / 2.0;
            let tau = crate::b_nhqc_duration(half, w0)?;
            let swing = 2.0 * (PI - half);
// CONVENTION(cb-second-loop): offset π, ramp evaluated in global time.
            // The second loop continues the same ramp in global time, offset by π.
            vec![
                (tau, PhaseLaw::Linear { start: 0.0, swing }),
                (tau, PhaseLaw::Linear { start: PI + swing, swing }),
            ]
        }
        Scheme::Nhqc => vec![(2.0 * PI / w0, nhqc_jump(spec.gamma))],
        Scheme::CNhqc => {
// CONVENTION(c-nhqc-loops): two identical γ/2 loops without offset.
            let law = nhqc_jump(spec.gamma / 2.0);
            vec![(2.0 * PI / w0, law), (2.0 * PI / w0, law)]
        }
    };

    let n = spec.grid_points;
    let mut segments = Vec::with_capacity(loops.len());
    let mut t0 = 0.0;
    for (i, (tau, law)) in loops.into_iter().enumerate() {
        let duration = tau * stretch;
        segments.push(Segment {
            label: format!("loop{}", i + 1),
            start_index: i * n,
            end_index: (i + 1) * n,
            t_start: t0,
            duration,
            omega0: w0,
            envelope: spec.envelope,
            phase: law,
        });
        t0 += duration;
    }

    let mut times = Vec::with_capacity(segments.len() * n + 1);
    for (i, s) in segments.iter().enumerate() {
        let h = s.duration / n as f64;
        let first = if i == 0 { 0 } else { 1 };
        for k in first..=n {
            times.push(if k == n { s.t_end() } else { s.t_start + k as f64 * h });
        }
    }
    let mut schedule = PulseSchedule {
        scheme: spec.scheme,
        theta: spec.theta,
        phi1: wrap_angle(PI - spec.phi1),
        gamma: spec.gamma,
        omega0: w0,
        steps_per_segment: n,
        omega: Vec::new(),
        phi: Vec::new(),
        times,
        segments,
    };
    schedule.omega = schedule.times.iter().map(|&t| schedule.omega_at(t)).collect();
    schedule.phi = schedule.times.iter().map(|&t| schedule.phi_at(t)).collect();
    Ok(schedule)
}

/// Conventional loop: two π-area halves with phases π ∓ Δ/2, Δ = wrap(π − γ).
// CONVENTION(nhqc-phase-jump)
fn nhqc_jump(gamma: f64) -> PhaseLaw {
    let delta = wrap_angle(PI - gamma);
    PhaseLaw::Jump { before: PI - 0.5 * delta, after: PI + 0.5 * delta }
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use holoq_model::{HamiltonianSeries, LindbladSpec};
use holoq_qcore::{fmt_sig15, CMatrix, Complex64};

use crate::{DensityMatrix, DynamicsError, Piece};

/// Largest tolerated |Tr ρ − 1| during integration.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

/// Relative offset keeping RK4 stage times strictly inside a piece, so a
/// drive discontinuity at a piece boundary is evaluated as the one-sided
/// limit from the piece interior.
const INTERIOR_OFFSET: f64 = 1e-9;

/// Sampled density matrices from a Lindblad run.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSamples {
    /// Sample times.
    pub times: Vec<f64>,
    /// State at each sample time.
    pub states: Vec<DensityMatrix>,
}

struct Dissipator {
    ops: Vec<CMatrix>,
    ops_dag: Vec<CMatrix>,
    half_ldl: CMatrix,
}

impl Dissipator {
    fn new(spec: &LindbladSpec, dim: usize) -> Self {
        let ops = spec.scaled_ops();
        let ops_dag: Vec<CMatrix> = ops.iter().map(CMatrix::dagger).collect();
        let mut half_ldl = CMatrix::zeros(dim);
        for (l, ld) in ops.iter().zip(&ops_dag) {
            half_ldl += &(ld * l).scale_re(0.5);
        }
        Self { ops, ops_dag, half_ldl }
    }

    /// −i[H, ρ] + Σ LρL† − ½{L†L, ρ}, written as −i(H_eff ρ − ρ H_eff†) + Σ LρL†
    /// with H_eff = H − (i/2)ΣL†L.
    fn rhs(&self, h: &CMatrix, rho: &CMatrix) -> CMatrix {
        let mi = Complex64::new(0.0, -1.0);
        let mut heff = h.clone();
        heff.axpy(mi, &self.half_ldl);
        let a = &heff * rho;
        let b = rho * &heff.dagger();
        let mut out = (&a - &b).scale(mi);
        for (l, ld) in self.ops.iter().zip(&self.ops_dag) {
            out += &(&(l * rho) * ld);
        }
        out
    }
}

/// Right-hand side of the master equation,
/// ρ̇ = −i[H, ρ] + Σⱼ(LⱼρLⱼ† − ½{Lⱼ†Lⱼ, ρ}), for already-scaled operators.
pub fn lindblad_rhs(h: &CMatrix, ops: &[CMatrix], rho: &CMatrix) -> CMatrix {
    let spec = LindbladSpec { dim: h.dim(), collapse_ops: ops.to_vec(), rates: vec![1.0; ops.len()] };
    Dissipator::new(&spec, h.dim()).rhs(h, rho)
}

fn check_spec(h: &dyn HamiltonianSeries, l: &LindbladSpec) -> Result<(), DynamicsError> {
    l.validate().map_err(|e| DynamicsError::InvalidArgs(e.to_string()))?;
    if l.dim != h.dim() {
        return Err(DynamicsError::InvalidArgs(format!("Lindblad dim {} != Hamiltonian dim {}", l.dim, h.dim())));
    }
    Ok(())
}

/// Integrates one piece with RK4, calling `sample(step_index, t, &m)` after
/// every step.
fn rk4_piece(
    h: &dyn HamiltonianSeries,
    d: &Dissipator,
    m: &mut CMatrix,
    (a, b, n): Piece,
    mut sample: impl FnMut(usize, f64, &CMatrix) -> Result<(), DynamicsError>,
) -> Result<(), DynamicsError> {
    if !(a.is_finite() && b.is_finite() && b >= a) || n == 0 {
        return Err(DynamicsError::InvalidArgs(format!("bad piece [{a}, {b}] with {n} steps")));
    }
    let dt = (b - a) / n as f64;
    let eps = INTERIOR_OFFSET * dt;
    let eval = |t: f64| h.at(t.clamp(a + eps, b - eps));
    let mut h_left = eval(a);
    for k in 0..n {
        let t = a + k as f64 * dt;
        let t_next = if k + 1 == n { b } else { a + (k + 1) as f64 * dt };
        let h_mid = eval(t + 0.5 * dt);
        let h_right = eval(t_next);
        let k1 = d.rhs(&h_left, m);
        let mut y = m.clone();
        y.axpy(Complex64::new(0.5 * dt, 0.0), &k1);
        let k2 = d.rhs(&h_mid, &y);
        let mut y = m.clone();
        y.axpy(Complex64::new(0.5 * dt, 0.0), &k2);
        let k3 = d.rhs(&h_mid, &y);
        let mut y = m.clone();
        y.axpy(Complex64::new(dt, 0.0), &k3);
        let k4 = d.rhs(&h_right, &y);
        let w = Complex64::new(dt / 6.0, 0.0);
        m.axpy(w, &k1);
        m.axpy(w * 2.0, &k2);
        m.axpy(w * 2.0, &k3);
        m.axpy(w, &k4);
        h_left = h_right;
        sample(k + 1, t_next, m)?;
    }
    Ok(())
}

fn trace_guard(t: f64, m: &CMatrix, expected: f64) -> Result<(), DynamicsError> {
    let tr = m.trace();
    let drift = ((tr.re - expected).powi(2) + tr.im.powi(2)).sqrt();
    if !(drift <= TRACE_DRIFT_LIMIT) {
        return Err(DynamicsError::TraceDrift { t, drift });
    }
    Ok(())
}

/// Integrates the master equation over `[t0, t1]` with `steps` RK4 steps,
/// returning ρ every `sample_every` steps plus the initial and final states.
pub fn propagate_lindblad(
    h: &dyn HamiltonianSeries,
    l: &LindbladSpec,
    rho0: &DensityMatrix,
    t0: f64,
    t1: f64,
    steps: usize,
    sample_every: usize,
) -> Result<LindbladSamples, DynamicsError> {
    propagate_lindblad_pieces(h, l, rho0, &[(t0, t1, steps)], sample_every)
}

/// As [`propagate_lindblad`] across consecutive smooth pieces.
pub fn propagate_lindblad_pieces(
    h: &dyn HamiltonianSeries,
    l: &LindbladSpec,
    rho0: &DensityMatrix,
    pieces: &[Piece],
    sample_every: usize,
) -> Result<LindbladSamples, DynamicsError> {
    check_spec(h, l)?;
    if rho0.dim() != h.dim() {
        return Err(DynamicsError::InvalidArgs("initial state dimension mismatch".into()));
    }
    let every = sample_every.max(1);
    let d = Dissipator::new(l, h.dim());
    let mut m = rho0.matrix().clone();
    let mut times = vec![pieces.first().map(|p| p.0).unwrap_or(0.0)];
    let mut states = vec![rho0.clone()];
    let mut global = 0usize;
    for (pi, &piece) in pieces.iter().enumerate() {
        let last_piece = pi + 1 == pieces.len();
        rk4_piece(h, &d, &mut m, piece, |k, t, cur| {
            global += 1;
            trace_guard(t, cur, 1.0)?;
            if global % every == 0 || (last_piece && k == piece.2) {
                let herm = cur.dagger();
                let mut sym = cur.clone();
                sym.axpy(Complex64::new(1.0, 0.0), &herm);
                let rho = DensityMatrix::new(sym.scale_re(0.5))?;
                times.push(t);
                states.push(rho);
            }
            Ok(())
        })?;
    }
    if times.len() >= 2 && times[times.len() - 1] == times[times.len() - 2] {
        times.pop();
        states.pop();
    }
    Ok(LindbladSamples { times, states })
}

/// A quantum channel restricted to inputs supported on a set of levels:
/// `images[i·k + j]` is the evolved operator E(|lᵢ⟩⟨lⱼ|).
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalChannel {
    /// Full system dimension.
    pub dim: usize,
    /// Input levels.
    pub logical: Vec<usize>,
    /// Images of the matrix units on the input levels.
    pub images: Vec<CMatrix>,
}

impl LogicalChannel {
    /// The channel ρ ↦ UρU† restricted to `logical` inputs.
    pub fn from_unitary(u: &CMatrix, logical: &[usize]) -> Self {
        let k = logical.len();
        let dim = u.dim();
        let cols: Vec<Vec<Complex64>> = logical.iter().map(|&l| (0..dim).map(|r| u[(r, l)]).collect()).collect();
        let mut images = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                images.push(CMatrix::from_fn(dim, |r, c| cols[i][r] * cols[j][c].conj()));
            }
        }
        Self { dim, logical: logical.to_vec(), images }
    }

    /// Output for the pure input Σᵢ aᵢ|lᵢ⟩ (amplitudes in logical order).
    pub fn apply_pure(&self, amps: &[Complex64]) -> CMatrix {
        let k = self.logical.len();
        assert_eq!(amps.len(), k, "amplitude count must match the logical levels");
        let mut out = CMatrix::zeros(self.dim);
        for i in 0..k {
            for j in 0..k {
                out.axpy(amps[i] * amps[j].conj(), &self.images[i * k + j]);
            }
        }
        out
    }
}

/// Evolves every matrix unit |lᵢ⟩⟨lⱼ| on the `logical` levels through the
/// master equation once; by linearity this determines the output for any
/// input supported on those levels.
pub fn lindblad_channel(
    h: &dyn HamiltonianSeries,
    l: &LindbladSpec,
    logical: &[usize],
    pieces: &[Piece],
) -> Result<LogicalChannel, DynamicsError> {
    check_spec(h, l)?;
    let dim = h.dim();
    if logical.iter().any(|&x| x >= dim) {
        return Err(DynamicsError::InvalidArgs("logical level index out of range".into()));
    }
    let d = Dissipator::new(l, dim);
    let k = logical.len();
    let mut images = Vec::with_capacity(k * k);
    for &li in logical {
        for &lj in logical {
            let mut m = CMatrix::unit(dim, li, lj);
            let expected = if li == lj { 1.0 } else { 0.0 };
            for &piece in pieces {
                rk4_piece(h, &d, &mut m, piece, |_, t, cur| trace_guard(t, cur, expected))?;
            }
            images.push(m);
        }
    }
    Ok(LogicalChannel { dim, logical: logical.to_vec(), images })
}

/// Diagnostic CSV `t,re_00,im_00,re_01,im_01,…` of sampled density matrices.
pub fn trajectory_csv(samples: &LindbladSamples) -> String {
    let dim = samples.states.first().map(DensityMatrix::dim).unwrap_or(0);
    let mut out = String::from("t");
    for i in 0..dim {
        for j in 0..dim {
            let _ = write!(out, ",re_{i}{j},im_{i}{j}");
        }
    }
    out.push('\n');
    for (t, rho) in samples.times.iter().zip(&samples.states) {
        out.push_str(&fmt_sig15(*t));
        for v in rho.matrix().as_slice() {
            let _ = write!(out, ",{},{}", fmt_sig15(v.re), fmt_sig15(v.im));
        }
        out.push('\n');
    }
    out
}

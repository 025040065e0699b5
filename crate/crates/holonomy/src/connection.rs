// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use holoq_model::HamiltonianSeries;
use holoq_qcore::{c64, commutator, mat_exp, CMatrix, CVector, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{AuxFrame, FramePiece, HolonomyError, SIGMA};

/// Number of evenly spaced samples per axis in the non-Abelian witness.
pub const WITNESS_GRID: usize = 20;

/// Relative offset keeping Hamiltonian samples strictly inside a piece, so
/// drive discontinuities at piece boundaries are one-sided limits.
const INTERIOR_OFFSET: f64 = 1e-9;

/// Connection matrices sampled on the frame grid, one series per piece.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionSeries {
    /// Sample times per piece.
    pub times: Vec<Vec<f64>>,
    /// A_ml = i⟨φ_m|φ̇_l⟩.
    pub a: Vec<Vec<CMatrix>>,
    /// K_ml = −⟨φ_m|H|φ_l⟩.
    pub k: Vec<Vec<CMatrix>>,
    /// A^η_ml = i⟨φ_m|e^{iσ_lλ₁}ψ̇_l⟩, the part of A not generated by λ₁.
    pub a_eta: Vec<Vec<CMatrix>>,
    /// ⟨ψ_a|ψ̇_a⟩ + i⟨ψ_a|H|ψ_a⟩ per sample and state.
    pub transport: Vec<Vec<[Complex64; 3]>>,
}

impl ConnectionSeries {
    /// max_t ‖K + A^η‖_F.
    pub fn eq1_residual(&self) -> f64 {
        self.k
            .iter()
            .flatten()
            .zip(self.a_eta.iter().flatten())
            .map(|(k, a)| (k + a).norm_fro())
            .fold(0.0, f64::max)
    }

    /// max over samples and states of |⟨ψ_a|ψ̇_a⟩ + i⟨ψ_a|H|ψ_a⟩|.
    pub fn parallel_transport_residual(&self) -> f64 {
        self.transport.iter().flatten().flat_map(|r| r.iter().map(|v| v.norm())).fold(0.0, f64::max)
    }

    /// max_t |K_aa| over the states a = 0, 1.
    pub fn max_dynamical_diagonal(&self) -> f64 {
        self.k.iter().flatten().map(|k| k[(0, 0)].norm().max(k[(1, 1)].norm())).fold(0.0, f64::max)
    }

    /// max_t ‖A − A†‖_F.
    pub fn max_hermiticity_error(&self) -> f64 {
        self.a.iter().flatten().map(CMatrix::hermiticity_error).fold(0.0, f64::max)
    }
}

/// Residuals of the geometric conditions for one loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// max_t ‖K + A^η‖_F.
    pub eq1_residual: f64,
    /// max over states and times of the parallel-transport defect.
    pub parallel_transport_residual: f64,
    /// ‖U − U_gauged‖_F between holonomies before and after a random gauge.
    pub gauge_deviation: f64,
    /// max ‖[A(t)T, A(t′)T]‖_F over the witness grid.
    pub nonabelian_witness: f64,
}

/// Fourth-order finite-difference derivative on a uniform grid: central in
/// the interior, one-sided at the two samples nearest each end.
fn fd4(v: &[CVector], dt: f64) -> Vec<CVector> {
    let n = v.len();
    assert!(n >= 5, "fourth-order differences need at least 5 samples");
    let inv = 1.0 / (12.0 * dt);
    let comb = |w: &[(usize, f64)]| {
        let mut acc = CVector::zeros(v[0].dim());
        for &(i, c) in w {
            acc = acc.add_scaled(c64(c * inv, 0.0), &v[i]);
        }
        acc
    };
    (0..n)
        .map(|i| match i {
            0 => comb(&[(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)]),
            1 => comb(&[(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)]),
            _ if i == n - 2 => comb(&[(n - 1, 3.0), (n - 2, 10.0), (n - 3, -18.0), (n - 4, 6.0), (n - 5, -1.0)]),
            _ if i == n - 1 => comb(&[(n - 1, 25.0), (n - 2, -48.0), (n - 3, 36.0), (n - 4, -16.0), (n - 5, 3.0)]),
            _ => comb(&[(i - 2, 1.0), (i - 1, -8.0), (i + 1, 8.0), (i + 2, -1.0)]),
        })
        .collect()
}

fn piece_hamiltonians(p: &FramePiece, h: &dyn HamiltonianSeries) -> Vec<CMatrix> {
    let (a, b) = (p.times[0], p.times[p.times.len() - 1]);
    let eps = INTERIOR_OFFSET * p.dt();
    p.times.iter().map(|&t| h.at(t.clamp(a + eps, b - eps))).collect()
}

fn a_matrices(p: &FramePiece) -> Vec<CMatrix> {
    let dphi: [Vec<CVector>; 3] = std::array::from_fn(|l| fd4(&p.phi[l], p.dt()));
    (0..p.times.len())
        .map(|k| CMatrix::from_fn(3, |m, l| c64(0.0, 1.0) * p.phi[m][k].inner(&dphi[l][k])))
        .collect()
}

/// Samples A, K, A^η and the parallel-transport defect on the frame grid.
pub fn connection_series(frame: &AuxFrame, h: &dyn HamiltonianSeries) -> Result<ConnectionSeries, HolonomyError> {
    if h.dim() != frame.dim() {
        return Err(HolonomyError::GridMismatch(format!("Hamiltonian dim {} != frame dim {}", h.dim(), frame.dim())));
    }
    let i = c64(0.0, 1.0);
    let mut out = ConnectionSeries { times: vec![], a: vec![], k: vec![], a_eta: vec![], transport: vec![] };
    for p in &frame.pieces {
        let hs = piece_hamiltonians(p, h);
        let dpsi: [Vec<CVector>; 3] = std::array::from_fn(|l| fd4(&p.psi[l], p.dt()));
        let mut ks = Vec::with_capacity(p.times.len());
        let mut etas = Vec::with_capacity(p.times.len());
        let mut tr = Vec::with_capacity(p.times.len());
        for (k, hk) in hs.iter().enumerate() {
            let hphi: [CVector; 3] = std::array::from_fn(|l| hk.apply(&p.phi[l][k]));
            ks.push(CMatrix::from_fn(3, |m, l| -p.phi[m][k].inner(&hphi[l])));
            let rot: [Complex64; 3] = std::array::from_fn(|l| Complex64::from_polar(1.0, SIGMA[l] * p.lambda1[k]));
            etas.push(CMatrix::from_fn(3, |m, l| i * rot[l] * p.phi[m][k].inner(&dpsi[l][k])));
            tr.push(std::array::from_fn(|a| {
                p.psi[a][k].inner(&dpsi[a][k]) + i * hk.sandwich(&p.psi[a][k], &p.psi[a][k])
            }));
        }
        out.times.push(p.times.clone());
        out.a.push(a_matrices(p));
        out.k.push(ks);
        out.a_eta.push(etas);
        out.transport.push(tr);
    }
    Ok(out)
}

fn frame_matrix(states: &[Vec<CVector>; 3], k: usize) -> CMatrix {
    CMatrix::from_fn(3, |r, c| states[c][k][r])
}

/// Evolution operator over the loop reconstructed from the frame:
/// U = Σ_{ml}|φ_m(τ)⟩C_ml⟨φ_l(0)| with Ċ = i(A + K)C, integrated with a
/// Simpson-averaged exponential over pairs of steps and joined across pieces
/// with the overlap matrices ⟨φ_m(t⁺)|φ_l(t⁻)⟩.
pub fn holonomy_from_frame(frame: &AuxFrame, h: &dyn HamiltonianSeries) -> Result<CMatrix, HolonomyError> {
    let conn = connection_series(frame, h)?;
    let mut c = CMatrix::identity(3);
    for (pi, p) in frame.pieces.iter().enumerate() {
        if pi > 0 {
            let prev = &frame.pieces[pi - 1];
            let last = prev.times.len() - 1;
            let overlap = CMatrix::from_fn(3, |m, l| p.phi[m][0].inner(&prev.phi[l][last]));
            c = &overlap * &c;
        }
        let gen: Vec<CMatrix> = conn.a[pi].iter().zip(&conn.k[pi]).map(|(a, k)| a + k).collect();
        let dt = p.dt();
        let n = gen.len() - 1;
        let mut j = 0;
        while j + 2 <= n {
            let mut avg = gen[j].clone();
            avg.axpy(c64(4.0, 0.0), &gen[j + 1]);
            avg += &gen[j + 2];
            let step = mat_exp(&avg, c64(0.0, 2.0 * dt / 6.0)).map_err(|e| HolonomyError::InvalidFrame(e.to_string()))?;
            c = &step * &c;
            j += 2;
        }
        if j < n {
            let avg = &gen[j] + &gen[j + 1];
            let step = mat_exp(&avg, c64(0.0, 0.5 * dt)).map_err(|e| HolonomyError::InvalidFrame(e.to_string()))?;
            c = &step * &c;
        }
    }
    let first = &frame.pieces[0];
    let last = &frame.pieces[frame.pieces.len() - 1];
    let phi_end = frame_matrix(&last.phi, last.times.len() - 1);
    let phi_start = frame_matrix(&first.phi, 0);
    Ok(&(&phi_end * &c) * &phi_start.dagger())
}

/// Smooth periodic gauge α_a(t) = Σ_{k=1}^{3} a_{ak}cos(2πkt′/T) + b_{ak}sin(2πkt′/T)
/// with t′ = t − t₀ and coefficients uniform in [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGauge {
    coeffs: [[(f64, f64); 3]; 3],
    t0: f64,
    period: f64,
}

impl PeriodicGauge {
    /// α_a(t).
    pub fn value(&self, a: usize, t: f64) -> f64 {
        let w = 2.0 * PI * (t - self.t0) / self.period;
        self.coeffs[a].iter().enumerate().map(|(k, (ca, cb))| {
            let x = (k + 1) as f64 * w;
            ca * x.cos() + cb * x.sin()
        }).sum()
    }
}

/// Seeded random gauge, periodic over `[t0, t0 + period]`.
pub fn random_periodic_gauge(seed: u64, t0: f64, period: f64) -> PeriodicGauge {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = std::array::from_fn(|_| std::array::from_fn(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))));
    PeriodicGauge { coeffs, t0, period }
}

/// ‖U − U′‖_F between the holonomy of `frame` and that of the frame after
/// the seeded random periodic gauge.
pub fn gauge_deviation(frame: &AuxFrame, h: &dyn HamiltonianSeries, seed: u64) -> Result<f64, HolonomyError> {
    let u = holonomy_from_frame(frame, h)?;
    let g = random_periodic_gauge(seed, frame.t_start(), frame.duration());
    let gauged = frame.gauge(|a, t| g.value(a, t));
    let ug = holonomy_from_frame(&gauged, h)?;
    Ok((&u - &ug).norm_fro())
}

/// max ‖[A(tᵢ)T, A(tⱼ)T]‖_F over a grid of [`WITNESS_GRID`] evenly spaced
/// samples, with T the loop duration. Scaling A by T makes the value
/// invariant under uniform reparameterisation of time.
pub fn nonabelian_witness(frame: &AuxFrame) -> f64 {
    let t_total = frame.duration();
    let mut all: Vec<CMatrix> = Vec::new();
    for (pi, p) in frame.pieces.iter().enumerate() {
        let mut a = a_matrices(p);
        if pi > 0 {
            a.remove(0);
        }
        all.extend(a);
    }
    let n = all.len();
    let picks: Vec<CMatrix> = (0..WITNESS_GRID)
        .map(|j| all[(j * (n - 1) + (WITNESS_GRID - 1) / 2) / (WITNESS_GRID - 1)].scale_re(t_total))
        .collect();
    let mut best = 0.0f64;
    for x in &picks {
        for y in &picks {
            best = best.max(commutator(x, y).map(|c| c.norm_fro()).unwrap_or(f64::NAN));
        }
    }
    best
}

/// Full residual report; `seed` drives the random gauge.
pub fn holonomy_residuals(frame: &AuxFrame, h: &dyn HamiltonianSeries, seed: u64) -> Result<ResidualReport, HolonomyError> {
    let conn = connection_series(frame, h)?;
    Ok(ResidualReport {
        eq1_residual: conn.eq1_residual(),
        parallel_transport_residual: conn.parallel_transport_residual(),
        gauge_deviation: gauge_deviation(frame, h, seed)?,
        nonabelian_witness: nonabelian_witness(frame),
    })
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use holoq_qcore::{c64, CMatrix, Complex64};

/// Single-qubit holonomic gate U(θ, φ₁, γ) = e^{iγ/2}exp(−i(γ/2)n·σ) with
/// n = (sin θ cos φ₁, sin θ sin φ₁, cos θ), in the basis (|0⟩, |1⟩).
pub fn ideal_gate_1q(theta: f64, phi1: f64, gamma: f64) -> CMatrix {
    let (c, s) = ((0.5 * gamma).cos(), (0.5 * gamma).sin());
    let (nx, ny, nz) = (theta.sin() * phi1.cos(), theta.sin() * phi1.sin(), theta.cos());
    let g = Complex64::from_polar(1.0, 0.5 * gamma);
    let mis = c64(0.0, -s);
    CMatrix::from_rows(&[
        &[g * (c + mis * nz), g * mis * c64(nx, -ny)],
        &[g * mis * c64(nx, ny), g * (c - mis * nz)],
    ])
}

/// Two-qubit entangling gate diag(1, e^{iξ₁}, 1, e^{iξ₂}) on |00⟩, |01⟩,
/// |10⟩, |11⟩.
pub fn ideal_gate_2q(xi1: f64, xi2: f64) -> CMatrix {
    let one = c64(1.0, 0.0);
    CMatrix::diag(&[one, Complex64::from_polar(1.0, xi1), one, Complex64::from_polar(1.0, xi2)])
}

/// Removes the global phase by making the largest-magnitude entry real and
/// positive (first such entry in row-major order on ties).
pub fn remove_global_phase(u: &CMatrix) -> CMatrix {
    let mut best = c64(0.0, 0.0);
    for v in u.as_slice() {
        if v.norm() > best.norm() * (1.0 + 1e-12) {
            best = *v;
        }
    }
    if best.norm() == 0.0 {
        return u.clone();
    }
    u.scale(best.conj() / best.norm())
}

/// Linear entropy 1 − Tr ρ_A² of the first qubit after applying the
/// two-qubit gate `u` to |+⟩|+⟩; zero exactly for gates that keep this
/// product state unentangled.
pub fn entangling_witness(u: &CMatrix) -> f64 {
    assert_eq!(u.dim(), 4, "two-qubit gate expected");
    let plus = holoq_qcore::CVector::from_vec(vec![c64(0.5, 0.0); 4]);
    let out = u.apply(&plus);
    let m = [[out[0], out[1]], [out[2], out[3]]];
    let mut purity = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let rho_ab: Complex64 = (0..2).map(|k| m[a][k] * m[b][k].conj()).sum();
            purity += rho_ab.norm_sqr();
        }
    }
    1.0 - purity
}

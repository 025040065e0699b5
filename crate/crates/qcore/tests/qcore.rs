// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use holoq_qcore::{c64, commutator, kron, mat_exp, pauli, unitary_step, CMatrix, CVector, QcoreError, I};
use proptest::prelude::*;

fn random_matrix(dim: usize, vals: &[(f64, f64)]) -> CMatrix {
    CMatrix::from_fn(dim, |i, j| {
        let (re, im) = vals[(i * dim + j) % vals.len()];
        c64(re, im)
    })
}

fn hermitian(dim: usize, vals: &[(f64, f64)]) -> CMatrix {
    let a = random_matrix(dim, vals);
    (&a + &a.dagger()).scale_re(0.5)
}

#[test]
fn kron_identity() {
    let k = kron(&CMatrix::identity(2), &CMatrix::identity(2)).unwrap();
    assert_eq!(k, CMatrix::identity(4));
}

#[test]
fn kron_sigma_x_permutes_basis() {
    let k = kron(&pauli::sx(), &CMatrix::identity(2)).unwrap();
    let out = k.apply(&CVector::basis(4, 0));
    assert_eq!(out, CVector::basis(4, 2));
}

#[test]
fn kron_diagonal_product() {
    let a = CMatrix::diag(&[c64(1.0, 0.0), c64(2.0, 0.0)]);
    let b = CMatrix::diag(&[c64(3.0, 0.0), c64(4.0, 0.0)]);
    let expect = CMatrix::diag(&[c64(3.0, 0.0), c64(4.0, 0.0), c64(6.0, 0.0), c64(8.0, 0.0)]);
    assert_eq!(kron(&a, &b).unwrap(), expect);
}

#[test]
fn kron_rejects_oversized_result() {
    let a = CMatrix::identity(16);
    assert!(matches!(kron(&a, &a), Err(QcoreError::DimTooLarge { dim: 256, .. })));
}

#[test]
fn kron_rejects_non_finite() {
    let mut a = CMatrix::identity(2);
    a[(0, 1)] = c64(f64::NAN, 0.0);
    assert!(matches!(kron(&a, &a), Err(QcoreError::NonFinite { .. })));
}

#[test]
fn exp_of_zero_is_identity() {
    let e = mat_exp(&CMatrix::zeros(3), c64(17.0, -4.0)).unwrap();
    assert_eq!(e, CMatrix::identity(3));
}

#[test]
fn exp_pauli_rotation() {
    let e = mat_exp(&pauli::sx(), c64(0.0, -std::f64::consts::FRAC_PI_2)).unwrap();
    let expect = pauli::sx().scale(-I);
    assert!((&e - &expect).norm_fro() < 1e-14);
}

#[test]
fn exp_rejects_non_finite() {
    let mut a = CMatrix::identity(2);
    a[(1, 1)] = c64(f64::INFINITY, 0.0);
    assert!(mat_exp(&a, c64(1.0, 0.0)).is_err());
    assert!(mat_exp(&CMatrix::identity(2), c64(f64::NAN, 0.0)).is_err());
}

#[test]
fn exp_matches_diagonal_closed_form_at_large_norm() {
    let d = CMatrix::diag(&[c64(0.0, 30.0), c64(-2.5, 0.0), c64(1.0, -7.0)]);
    let e = mat_exp(&d, c64(1.0, 0.0)).unwrap();
    for i in 0..3 {
        let expect = d[(i, i)].exp();
        assert!((e[(i, i)] - expect).norm() < 1e-12 * expect.norm().max(1.0));
    }
}

#[test]
fn exp_matches_rotation_closed_form() {
    // exp(−iθ n·σ/2) = cos(θ/2) I − i sin(θ/2) n·σ
    let (nx, ny, nz) = (0.48f64, -0.6f64, 0.64f64);
    let theta = 11.3;
    let ns = &(&pauli::sx().scale_re(nx) + &pauli::sy().scale_re(ny)) + &pauli::sz().scale_re(nz);
    let e = mat_exp(&ns, c64(0.0, -theta / 2.0)).unwrap();
    let expect = &CMatrix::identity(2).scale_re((theta / 2.0).cos()) - &ns.scale(I * (theta / 2.0).sin());
    assert!((&e - &expect).norm_fro() < 1e-13);
}

#[test]
fn commutator_pauli_algebra() {
    let c = commutator(&pauli::sx(), &pauli::sy()).unwrap();
    assert!((&c - &pauli::sz().scale(c64(0.0, 2.0))).norm_fro() < 1e-15);
}

#[test]
fn commutator_self_vanishes() {
    let h = hermitian(3, &[(0.3, 0.1), (-1.2, 0.7), (0.5, -0.4), (2.0, 0.0)]);
    assert_eq!(commutator(&h, &h).unwrap().norm_fro(), 0.0);
}

#[test]
fn commutator_rejects_mismatch() {
    let err = commutator(&CMatrix::identity(2), &CMatrix::identity(3)).unwrap_err();
    assert_eq!(err, QcoreError::DimMismatch { left: 2, right: 3 });
}

#[test]
fn submatrix_and_outer() {
    let a = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 1.0), c64(0.0, 0.0)]);
    let m = CMatrix::outer(&a, &a);
    assert_eq!(m[(0, 1)], c64(0.0, -1.0));
    let s = m.submatrix(&[1, 0]);
    assert_eq!(s[(0, 0)], c64(1.0, 0.0));
    assert_eq!(s[(0, 1)], c64(0.0, 1.0));
}

fn entries(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_preserves_unitarity(dim in 2usize..=16, vals in entries(256), dt in 0.001f64..5.0) {
        let h = hermitian(dim, &vals);
        let u = unitary_step(&h, dt).unwrap();
        prop_assert!(u.unitarity_error() < 1e-11, "error {}", u.unitarity_error());
    }

    #[test]
    fn exp_agrees_with_eigen_oracle(vals in entries(4), dt in 0.01f64..20.0) {
        // 2×2 Hermitian h = a·I + b·(n·σ): exp(−i h dt) has a closed form.
        let h = hermitian(2, &vals);
        let a = 0.5 * (h[(0, 0)].re + h[(1, 1)].re);
        let bz = 0.5 * (h[(0, 0)].re - h[(1, 1)].re);
        let bx = h[(0, 1)].re;
        let by = -h[(0, 1)].im;
        let b = (bx * bx + by * by + bz * bz).sqrt();
        let u = unitary_step(&h, dt).unwrap();
        let ns = if b > 0.0 {
            &(&pauli::sx().scale_re(bx / b) + &pauli::sy().scale_re(by / b)) + &pauli::sz().scale_re(bz / b)
        } else {
            CMatrix::zeros(2)
        };
        let rot = &CMatrix::identity(2).scale_re((b * dt).cos()) - &ns.scale(I * (b * dt).sin());
        let expect = rot.scale(c64(0.0, -a * dt).exp());
        prop_assert!((&u - &expect).norm_fro() < 1e-12);
    }

    #[test]
    fn kron_is_associative(v1 in entries(4), v2 in entries(9), v3 in entries(4)) {
        let a = random_matrix(2, &v1);
        let b = random_matrix(3, &v2);
        let c = random_matrix(2, &v3);
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!((&left - &right).norm_fro() < 1e-12);
    }

    #[test]
    fn commutator_is_antisymmetric(dim in 2usize..=6, v1 in entries(36), v2 in entries(36)) {
        let a = random_matrix(dim, &v1);
        let b = random_matrix(dim, &v2);
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert!((&ab + &ba).norm_fro() < 1e-13);
    }
}

#[test]
fn sig15_format_is_stable() {
    assert_eq!(holoq_qcore::fmt_sig15(0.0), holoq_qcore::fmt_sig15(-0.0));
    assert_eq!(holoq_qcore::fmt_sig15(1.0), "1.00000000000000e0");
    assert_eq!(holoq_qcore::fmt_sig15(-2.5e-7), "-2.50000000000000e-7");
}

#[test]
fn psd_check_separates_states_from_indefinite_matrices() {
    use holoq_qcore::{c64, CMatrix};
    let rho = CMatrix::from_rows(&[&[c64(0.5, 0.0), c64(0.0, 0.5)], &[c64(0.0, -0.5), c64(0.5, 0.0)]]);
    assert!(rho.is_positive_semidefinite(1e-12));
    let bad = CMatrix::diag(&[c64(1.0, 0.0), c64(-1e-3, 0.0)]);
    assert!(!bad.is_positive_semidefinite(1e-7));
    assert!(bad.is_positive_semidefinite(2e-3));
    assert!(CMatrix::zeros(3).is_positive_semidefinite(1e-9));
}

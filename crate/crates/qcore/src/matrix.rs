// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::{CVector, QcoreError};

/// Largest matrix dimension accepted by constructors that can grow a matrix
/// (currently only [`kron`]).
pub const MAX_DIM: usize = 64;

/// A square, dense, row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// The `dim × dim` zero matrix.
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    /// The `dim × dim` identity.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a closure evaluated at every `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Build from explicit rows. Panics if the rows do not form a square.
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square matrix");
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Matrix unit |i⟩⟨j| of dimension `dim`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &CVector, b: &CVector) -> Self {
        assert_eq!(a.dim(), b.dim(), "outer product needs equal dimensions");
        Self::from_fn(a.dim(), |i, j| a[i] * b[j].conj())
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Mutable row-major entries.
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Multiply every entry by `s`.
    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&v| v * s).collect() }
    }

    /// Multiply every entry by a real factor.
    pub fn scale_re(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&v| v * s).collect() }
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Frobenius distance from Hermiticity, ‖A − A†‖_F.
    pub fn hermiticity_error(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// True when ‖A − A†‖_F ≤ tol.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Frobenius distance from unitarity, ‖A†A − I‖_F.
    pub fn unitarity_error(&self) -> f64 {
        (&self.dagger() * self - Self::identity(self.dim)).norm_fro()
    }

    /// True when ‖A†A − I‖_F ≤ tol.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// Checked product `self · rhs`.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self, QcoreError> {
        if self.dim != rhs.dim {
            return Err(QcoreError::DimMismatch { left: self.dim, right: rhs.dim });
        }
        Ok(self * rhs)
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &CVector) -> CVector {
        assert_eq!(self.dim, v.dim(), "matrix/vector dimension mismatch");
        let d = self.dim;
        CVector::from_fn(d, |i| {
            let row = &self.data[i * d..(i + 1) * d];
            row.iter().zip(v.as_slice()).map(|(a, b)| a * b).sum()
        })
    }

    /// ⟨a|M|b⟩.
    pub fn sandwich(&self, a: &CVector, b: &CVector) -> Complex64 {
        a.inner(&self.apply(b))
    }

    /// Principal sub-block on the listed indices.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    /// `self + s·other`, in place.
    pub fn axpy(&mut self, s: Complex64, other: &Self) {
        assert_eq!(self.dim, other.dim, "axpy dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    /// Hilbert–Schmidt inner product Tr(A†B).
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "inner product dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// True when the Hermitian part of the matrix has no eigenvalue below
    /// `-tol`. Decided by attempting a Cholesky factorisation of
    /// ½(A + A†) + tol·I, which succeeds exactly when that shifted matrix is
    /// positive definite.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let d = self.dim;
        let mut l = vec![Complex64::new(0.0, 0.0); d * d];
        for j in 0..d {
            let mut diag = self[(j, j)].re + tol;
            for k in 0..j {
                diag -= l[j * d + k].norm_sqr();
            }
            if !(diag > 0.0) {
                return false;
            }
            let ljj = diag.sqrt();
            l[j * d + j] = Complex64::new(ljj, 0.0);
            for i in j + 1..d {
                let mut v = 0.5 * (self[(i, j)] + self[(j, i)].conj());
                for k in 0..j {
                    v -= l[i * d + k] * l[j * d + k].conj();
                }
                l[i * d + j] = v / ljj;
            }
        }
        true
    }

    /// Matrix raised to a non-negative integer power.
    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            let orow = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &rhs.data[k * d..(k + 1) * d];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        CMatrix { dim: d, data: out }
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        &self * &rhs
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Add for CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: CMatrix) -> CMatrix {
        &self + &rhs
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Sub for CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: CMatrix) -> CMatrix {
        &self - &rhs
    }
}

/// Kronecker product with entry rule `(a⊗b)[i·bd+k, j·bd+l] = a[i,j]·b[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, QcoreError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(QcoreError::NonFinite { what: "kron operand" });
    }
    let bd = b.dim();
    let dim = a.dim() * bd;
    if dim > MAX_DIM {
        return Err(QcoreError::DimTooLarge { dim, max: MAX_DIM });
    }
    Ok(CMatrix::from_fn(dim, |r, c| a[(r / bd, c / bd)] * b[(r % bd, c % bd)]))
}

/// Commutator `ab − ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, QcoreError> {
    if a.dim() != b.dim() {
        return Err(QcoreError::DimMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(&(a * b) - &(b * a))
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

/// A dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<Complex64>,
}

impl CVector {
    /// The zero vector.
    pub fn zeros(dim: usize) -> Self {
        Self { data: vec![Complex64::new(0.0, 0.0); dim] }
    }

    /// Standard basis vector |k⟩.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[k] = Complex64::new(1.0, 0.0);
        v
    }

    /// Build from explicit entries.
    pub fn from_vec(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    /// Build from a closure over the index.
    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self { data: (0..dim).map(f).collect() }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    /// Entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// ⟨self|other⟩ (antilinear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Unit vector in the same direction.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    /// Multiply by a complex scalar.
    pub fn scale(&self, s: Complex64) -> Self {
        Self { data: self.data.iter().map(|&v| v * s).collect() }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: Complex64, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector sum dimension mismatch");
        Self { data: self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect() }
    }

    /// Difference `self − other`.
    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(Complex64::new(-1.0, 0.0), other)
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}

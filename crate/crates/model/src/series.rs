// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use holoq_qcore::CMatrix;

/// A Hamiltonian H(t) that can be sampled at arbitrary times.
///
/// Implementations must be pure so that one instance can be sampled from
/// several worker threads at once.
pub trait HamiltonianSeries: Send + Sync {
    /// Hilbert-space dimension.
    fn dim(&self) -> usize;
    /// H at time `t`.
    fn at(&self, t: f64) -> CMatrix;
}

impl<T: HamiltonianSeries + ?Sized> HamiltonianSeries for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn at(&self, t: f64) -> CMatrix {
        (**self).at(t)
    }
}

impl<T: HamiltonianSeries + ?Sized> HamiltonianSeries for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn at(&self, t: f64) -> CMatrix {
        (**self).at(t)
    }
}

impl<T: HamiltonianSeries + ?Sized> HamiltonianSeries for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn at(&self, t: f64) -> CMatrix {
        (**self).at(t)
    }
}

/// Adapts a closure `t ↦ H(t)` into a [`HamiltonianSeries`].
pub struct FnSeries<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64) -> CMatrix + Send + Sync> FnSeries<F> {
    /// Wraps `f`, which must return `dim × dim` matrices.
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64) -> CMatrix + Send + Sync> HamiltonianSeries for FnSeries<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn at(&self, t: f64) -> CMatrix {
        (self.f)(t)
    }
}

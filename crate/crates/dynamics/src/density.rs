// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use holoq_qcore::{CMatrix, CVector};

use crate::DynamicsError;

/// Frobenius tolerance on ρ − ρ†.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance on |Tr ρ − 1|.
pub const TRACE_TOL: f64 = 1e-8;
/// Smallest admissible eigenvalue magnitude below zero.
pub const PSD_TOL: f64 = 1e-7;

/// A validated density matrix: Hermitian, unit trace, positive
/// semidefinite (all within the module tolerances).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `matrix`.
    pub fn new(matrix: CMatrix) -> Result<Self, DynamicsError> {
        Self::validate(&matrix)?;
        Ok(Self { matrix })
    }

    /// |ψ⟩⟨ψ| for a normalised `psi`.
    pub fn pure(psi: &CVector) -> Result<Self, DynamicsError> {
        Self::new(CMatrix::outer(psi, psi))
    }

    /// Checks the density-matrix invariants without constructing.
    pub fn validate(m: &CMatrix) -> Result<(), DynamicsError> {
        if !m.is_finite() {
            return Err(DynamicsError::InvalidDensity("non-finite entries".into()));
        }
        let herr = m.hermiticity_error();
        if herr > HERMITICITY_TOL {
            return Err(DynamicsError::InvalidDensity(format!("not Hermitian (‖ρ − ρ†‖_F = {herr:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(DynamicsError::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        if !m.is_positive_semidefinite(PSD_TOL) {
            return Err(DynamicsError::InvalidDensity(format!("eigenvalue below -{PSD_TOL:e}")));
        }
        Ok(())
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Consumes the wrapper.
    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// ⟨ψ|ρ|ψ⟩ (real part).
    pub fn expectation(&self, psi: &CVector) -> f64 {
        self.matrix.sandwich(psi, psi).re
    }
}

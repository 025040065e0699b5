// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use holoq_qcore::CMatrix;

use crate::{invalid, ModelError};

/// A set of collapse operators Lⱼ with rates Γⱼ; the dissipator uses
/// √Γⱼ·Lⱼ.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSpec {
    /// System dimension.
    pub dim: usize,
    /// Unscaled jump operators.
    pub collapse_ops: Vec<CMatrix>,
    /// Rates Γⱼ ≥ 0, one per operator.
    pub rates: Vec<f64>,
}

impl LindbladSpec {
    /// A closed system.
    pub fn closed(dim: usize) -> Self {
        Self { dim, collapse_ops: Vec::new(), rates: Vec::new() }
    }

    /// Checks non-negative finite rates and matching dimensions.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.collapse_ops.len() != self.rates.len() {
            return Err(invalid("rates", "one rate per collapse operator is required"));
        }
        if self.rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(invalid("rates", "rates must be finite and non-negative"));
        }
        if self.collapse_ops.iter().any(|l| l.dim() != self.dim) {
            return Err(invalid("collapse_ops", format!("operators must be {0}x{0}", self.dim)));
        }
        Ok(())
    }

    /// Operators scaled by √Γⱼ, skipping zero rates.
    pub fn scaled_ops(&self) -> Vec<CMatrix> {
        self.collapse_ops
            .iter()
            .zip(&self.rates)
            .filter(|(_, &r)| r > 0.0)
            .map(|(l, &r)| l.scale_re(r.sqrt()))
            .collect()
    }

    /// True when no operator has a positive rate.
    pub fn is_closed(&self) -> bool {
        self.rates.iter().all(|&r| r == 0.0)
    }
}

/// Equal-rate decay and dephasing model.
///
/// With `e = excited_index` and logical levels the first three indices other
/// than `e`: decay branches |l⟩⟨e| for both logical levels, pure dephasing
/// |e⟩⟨e|, and for every level k ≥ 3 a decay branch |k−1⟩⟨k| down the ladder.
/// All rates equal `gamma`.
// CONVENTION(collapse-set)
pub fn lindblad_spec(dim: usize, gamma: f64, excited_index: usize) -> Result<LindbladSpec, ModelError> {
    if dim < 3 {
        return Err(invalid("dim", format!("{dim} < 3")));
    }
    if excited_index >= 3 {
        return Err(invalid("excited_index", format!("{excited_index} must be one of the first three levels")));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(invalid("gamma", format!("{gamma} must be finite and non-negative")));
    }
    let e = excited_index;
    let mut ops: Vec<CMatrix> = (0..3).filter(|&l| l != e).map(|l| CMatrix::unit(dim, l, e)).collect();
    ops.push(CMatrix::unit(dim, e, e));
    ops.extend((3..dim).map(|k| CMatrix::unit(dim, k - 1, k)));
    let rates = vec![gamma; ops.len()];
    Ok(LindbladSpec { dim, collapse_ops: ops, rates })
}

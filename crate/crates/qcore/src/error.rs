// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Failures of the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcoreError {
    /// Two operands had incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    /// A result would exceed the configured maximum dimension.
    #[error("dimension {dim} exceeds the maximum of {max}")]
    DimTooLarge { dim: usize, max: usize },
    /// An input contained NaN or infinity.
    #[error("non-finite entry in {what}")]
    NonFinite { what: &'static str },
    /// A linear system was numerically singular.
    #[error("singular matrix in {what}")]
    Singular { what: &'static str },
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra for the small Hilbert spaces (dimension 2–16)
//! used throughout holoq.
//!
//! Everything here is a pure function of immutable inputs. Matrices are
//! square, row-major and heap-allocated; there is deliberately no sparse path.

mod error;
mod expm;
mod matrix;
mod vector;

pub use error::QcoreError;
pub use expm::{mat_exp, unitary_step};
pub use matrix::{commutator, kron, CMatrix, MAX_DIM};
pub use num_complex::Complex64;
pub use vector::CVector;

/// Shorthand for building a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The imaginary unit.
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Pauli matrices and other small constant operators.
pub mod pauli {
    use super::{c64, CMatrix};

    /// σx.
    pub fn sx() -> CMatrix {
        CMatrix::from_rows(&[&[c64(0.0, 0.0), c64(1.0, 0.0)], &[c64(1.0, 0.0), c64(0.0, 0.0)]])
    }

    /// σy.
    pub fn sy() -> CMatrix {
        CMatrix::from_rows(&[&[c64(0.0, 0.0), c64(0.0, -1.0)], &[c64(0.0, 1.0), c64(0.0, 0.0)]])
    }

    /// σz.
    pub fn sz() -> CMatrix {
        CMatrix::from_rows(&[&[c64(1.0, 0.0), c64(0.0, 0.0)], &[c64(0.0, 0.0), c64(-1.0, 0.0)]])
    }
}

/// Formats a float with 15 significant digits in a locale-free scientific
/// notation, the canonical numeric format of every CSV written by holoq.
pub fn fmt_sig15(x: f64) -> String {
    if x == 0.0 {
        // Normalise −0.0 so that outputs are byte-stable.
        return "0.00000000000000e0".to_string();
    }
    format!("{x:.14e}")
}

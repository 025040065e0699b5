// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

use crate::ModelError;

/// Largest supported |x| for the Bessel functions.
pub const BESSEL_MAX_ARG: f64 = 20.0;

/// Bessel function of the first kind J₁(x) for |x| ≤ 20.
pub fn bessel_j1(x: f64) -> Result<f64, ModelError> {
    bessel_jn(1, x)
}

/// Bessel function of the first kind Jₙ(x), n ≥ 0, for |x| ≤ 20.
///
/// Uses Miller's backward recurrence normalised with
/// J₀ + 2(J₂ + J₄ + …) = 1, which is stable for every order and accurate to
/// a few ulps across the supported range.
pub fn bessel_jn(n: u32, x: f64) -> Result<f64, ModelError> {
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG {
        return Err(ModelError::BesselRange(x));
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let ax = x.abs();
    let n_us = n as usize;
    // Start well above both n and x so the seeded error has decayed.
    let top = n_us.max(ax as usize) + 40 + (40.0 * (n_us.max(ax as usize) as f64 + 1.0)).sqrt() as usize;
    let start = top + (top % 2);
    let (mut jp, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        let jm = 2.0 * k as f64 / ax * j - jp;
        jp = j;
        j = jm;
        // Rescale to avoid overflow during the upward growth of the sequence.
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        let order = k - 1;
        if order == n_us {
            result = j;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    let mut val = result / norm;
    if x < 0.0 && n % 2 == 1 {
        val = -val;
    }
    Ok(val)
}

// Copyright 2026 The holoq Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant. Small dense matrices only, so accuracy wins over speed.

use num_complex::Complex64;

use crate::{CMatrix, QcoreError};

/// Padé(13,13) numerator coefficients b₀…b₁₃.
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the degree-13 approximant is accurate to unit
/// roundoff without scaling.
const THETA13: f64 = 5.371_920_351_148_152;

/// Returns `exp(scale · m)` to near machine precision.
pub fn mat_exp(m: &CMatrix, scale: Complex64) -> Result<CMatrix, QcoreError> {
    if !m.is_finite() || !scale.re.is_finite() || !scale.im.is_finite() {
        return Err(QcoreError::NonFinite { what: "mat_exp input" });
    }
    let a = m.scale(scale);
    let d = a.dim();
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(CMatrix::identity(d));
    }
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = if s > 0 { a.scale_re(0.5f64.powi(s)) } else { a };

    let ident = CMatrix::identity(d);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &B13;
    let re = |x: f64| Complex64::new(x, 0.0);

    let mut u_inner = a6.scale(re(b[13]));
    u_inner.axpy(re(b[11]), &a4);
    u_inner.axpy(re(b[9]), &a2);
    let mut u = &a6 * &u_inner;
    u.axpy(re(b[7]), &a6);
    u.axpy(re(b[5]), &a4);
    u.axpy(re(b[3]), &a2);
    u.axpy(re(b[1]), &ident);
    let u = &a * &u;

    let mut v_inner = a6.scale(re(b[12]));
    v_inner.axpy(re(b[10]), &a4);
    v_inner.axpy(re(b[8]), &a2);
    let mut v = &a6 * &v_inner;
    v.axpy(re(b[6]), &a6);
    v.axpy(re(b[4]), &a4);
    v.axpy(re(b[2]), &a2);
    v.axpy(re(b[0]), &ident);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = solve(&q, &p)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

/// One unitary step `exp(−i·h·dt)`.
pub fn unitary_step(h: &CMatrix, dt: f64) -> Result<CMatrix, QcoreError> {
    mat_exp(h, Complex64::new(0.0, -dt))
}

/// Solves `q · x = p` by LU decomposition with partial pivoting.
fn solve(q: &CMatrix, p: &CMatrix) -> Result<CMatrix, QcoreError> {
    let d = q.dim();
    let mut lu = q.clone();
    let mut x = p.clone();
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&i, &j| lu[(i, col)].norm().total_cmp(&lu[(j, col)].norm()))
            .unwrap_or(col);
        if lu[(pivot, col)].norm() == 0.0 {
            return Err(QcoreError::Singular { what: "Padé denominator" });
        }
        if pivot != col {
            for j in 0..d {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
                let tmp = x[(col, j)];
                x[(col, j)] = x[(pivot, j)];
                x[(pivot, j)] = tmp;
            }
        }
        let inv = Complex64::new(1.0, 0.0) / lu[(col, col)];
        for i in col + 1..d {
            let f = lu[(i, col)] * inv;
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for j in col..d {
                let v = lu[(col, j)];
                lu[(i, j)] -= f * v;
            }
            for j in 0..d {
                let v = x[(col, j)];
                x[(i, j)] -= f * v;
            }
        }
    }
    for col in (0..d).rev() {
        let inv = Complex64::new(1.0, 0.0) / lu[(col, col)];
        for j in 0..d {
            x[(col, j)] *= inv;
        }
        for i in 0..col {
            let f = lu[(i, col)];
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for j in 0..d {
                let v = x[(col, j)];
                x[(i, j)] -= f * v;
            }
        }
    }
    Ok(x)
}

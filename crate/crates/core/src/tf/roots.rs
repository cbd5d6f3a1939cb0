//! Polynomial roots from companion-matrix eigenvalues, polished by Newton
//! steps on the polynomial itself.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly;
use crate::error::{Error, Result};

/// Accepted backward error |p(r)| / Σ|cᵢ||r|ⁱ of every returned root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-9;

const NEWTON_STEPS: usize = 8;

/// Roots of `c[0]·xⁿ + c[1]·xⁿ⁻¹ + … + c[n]` (coefficients in descending
/// powers). Leading zeros are skipped; trailing zeros give roots at the
/// origin.
pub fn roots_descending(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let start = coeffs.iter().position(|&c| c != 0.0);
    let Some(start) = start else {
        return Err(Error::InvalidParameter(
            "cannot find roots of the zero polynomial".into(),
        ));
    };
    let mut c: Vec<f64> = coeffs[start..].to_vec();

    let mut out = Vec::new();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
        out.push(Complex64::new(0.0, 0.0));
    }
    let n = c.len() - 1;
    if n == 0 {
        return Ok(out);
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "polynomial has non-finite coefficients".into(),
        ));
    }

    let lead = c[0];
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        companion[(0, j)] = -c[j + 1] / lead;
    }
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    let eig = companion.complex_eigenvalues();

    // ascending copy for Horner evaluation
    let asc: Vec<f64> = c.iter().rev().copied().collect();
    let dasc: Vec<f64> = asc
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &v)| v * i as f64)
        .collect();

    let mut worst = 0.0_f64;
    let mut found = Vec::with_capacity(n);
    for &r0 in eig.iter() {
        let r = polish(&asc, &dasc, r0);
        worst = worst.max(backward_error(&asc, r));
        found.push(r);
    }
    if !(worst <= ROOT_RESIDUAL_TOL) {
        return Err(Error::RootsNotConverged {
            residual: worst,
            best: found,
        });
    }
    out.extend(found);
    Ok(out)
}

fn backward_error(asc: &[f64], x: Complex64) -> f64 {
    let scale = poly::eval_abs(asc, x);
    if scale == 0.0 {
        return 0.0;
    }
    poly::eval(asc, x).norm() / scale
}

fn polish(asc: &[f64], dasc: &[f64], x0: Complex64) -> Complex64 {
    let mut best = x0;
    let mut best_err = backward_error(asc, x0);
    let mut x = x0;
    for _ in 0..NEWTON_STEPS {
        if best_err == 0.0 {
            break;
        }
        let d = poly::eval(dasc, x);
        if d.norm() == 0.0 {
            break;
        }
        x -= poly::eval(asc, x) / d;
        if !(x.re.is_finite() && x.im.is_finite()) {
            break;
        }
        let err = backward_error(asc, x);
        if err < best_err {
            best = x;
            best_err = err;
        } else {
            break;
        }
    }
    // keep real roots real
    if x0.im == 0.0 {
        best.im = 0.0;
    }
    best
}

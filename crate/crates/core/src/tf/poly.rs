//! Real polynomial helpers. Coefficients are stored in ascending powers of
//! the indeterminate (for transfer functions that indeterminate is z⁻¹).

use num_complex::Complex64;

pub fn trim(p: &mut Vec<f64>) {
    while p.len() > 1 && *p.last().unwrap() == 0.0 {
        p.pop();
    }
    if p.is_empty() {
        p.push(0.0);
    }
}

pub fn degree(p: &[f64]) -> usize {
    p.iter().rposition(|&c| c != 0.0).unwrap_or(0)
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![0.0];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
        .collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|c| c * k).collect()
}

/// Horner evaluation at a complex point.
pub fn eval(p: &[f64], x: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Sum of |cᵢ|·|x|ⁱ, the scale used for backward-error residuals.
pub fn eval_abs(p: &[f64], x: Complex64) -> f64 {
    let r = x.norm();
    p.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
}

/// Expands ∏(1 − rᵢ·x) for a conjugate-closed root set. Imaginary residue
/// from rounding is discarded.
pub fn from_reciprocal_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut acc = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        acc = next;
    }
    acc.into_iter().map(|c| c.re).collect()
}

/// Quotient of `p` by (1 − x) when x = 1 is a root up to `rtol` relative
/// to the coefficient magnitudes.
pub fn deflate_unit_root(p: &[f64], rtol: f64) -> Option<Vec<f64>> {
    if p.len() < 2 {
        return None;
    }
    let scale: f64 = p.iter().map(|c| c.abs()).sum();
    let rem: f64 = p.iter().sum();
    if scale == 0.0 || rem.abs() > rtol * scale {
        return None;
    }
    let mut q = Vec::with_capacity(p.len() - 1);
    let mut acc = 0.0;
    for &c in &p[..p.len() - 1] {
        acc += c;
        q.push(acc);
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_add() {
        assert_eq!(mul(&[1.0, -0.5], &[1.0, -0.25]), vec![1.0, -0.75, 0.125]);
        assert_eq!(add(&[1.0], &[0.0, 2.0]), vec![1.0, 2.0]);
    }

    #[test]
    fn trim_keeps_one_coefficient() {
        let mut p = vec![0.0, 0.0];
        trim(&mut p);
        assert_eq!(p, vec![0.0]);
        let mut q = vec![1.0, 2.0, 0.0];
        trim(&mut q);
        assert_eq!(q, vec![1.0, 2.0]);
    }

    #[test]
    fn reciprocal_root_expansion() {
        let p = from_reciprocal_roots(&[Complex64::new(0.5, 0.0), Complex64::new(0.25, 0.0)]);
        assert_eq!(p, vec![1.0, -0.75, 0.125]);
    }

    #[test]
    fn deflates_unit_root() {
        // (1 − x)(2 + 3x) = 2 + x − 3x²
        assert_eq!(deflate_unit_root(&[2.0, 1.0, -3.0], 1e-12), Some(vec![2.0, 3.0]));
        assert_eq!(deflate_unit_root(&[2.0, 1.0], 1e-12), None);
    }
}

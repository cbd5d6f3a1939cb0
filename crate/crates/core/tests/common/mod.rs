#![allow(dead_code)]

use num_complex::Complex64;

/// Durand–Kerner iteration on a monic-normalized polynomial given in
/// descending powers. Independent of the companion-matrix solver.
pub fn durand_kerner(desc: &[f64]) -> Vec<Complex64> {
    let lead = desc[0];
    let c: Vec<f64> = desc.iter().map(|v| v / lead).collect();
    let n = c.len() - 1;
    let eval = |z: Complex64| c.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut r: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let mut d = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    d *= r[i] - r[j];
                }
            }
            let step = eval(r[i]) / d;
            r[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    r
}

/// Largest distance from each root in `a` to its nearest partner in `b`,
/// matching greedily.
pub fn root_set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut pool: Vec<Complex64> = b.to_vec();
    let mut worst = 0.0_f64;
    for &x in a {
        let (j, d) = pool
            .iter()
            .enumerate()
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        worst = worst.max(d);
        pool.swap_remove(j);
    }
    worst
}

/// Polynomial in ascending powers of x evaluated at `x`.
pub fn poly_at(p: &[f64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

//! Transfer-function views of the iPD loop.
//!
//! Seen from the tracking error, the iPD law is the compensator
//! (Kp + Kd·D(z) + Dⁿ(z)) / (α·(1 − z⁻¹)); inside it, the integrator
//! 1/(α(1 − z⁻¹)) and the plant are closed by Dⁿ(z).

use super::config::{IpdConfig, Order};
use crate::error::Result;
use crate::tf::{poly, DiscreteTransferFunction as Tf};

/// C + (1 − C)·z⁻¹
fn filter_den(c: f64) -> Vec<f64> {
    vec![c, 1.0 - c]
}

const DIFF: [f64; 2] = [1.0, -1.0];

/// D(z) = (1/Ts)·(1 − z⁻¹)/(C + (1 − C)·z⁻¹).
pub fn filtered_derivative_tf(c: f64, ts: f64) -> Result<Tf> {
    Tf::new(vec![1.0 / ts, -1.0 / ts], filter_den(c), ts)
}

fn derivative_power_tf(c: f64, ts: f64, n: Order) -> Result<Tf> {
    let d = filtered_derivative_tf(c, ts)?;
    match n {
        Order::First => Ok(d),
        Order::Second => d.series(&d),
    }
}

/// Kp + Kd·D(z) over the common denominator Ts·(C + (1 − C)z⁻¹).
pub fn pd_tf(kp: f64, kd: f64, c: f64, ts: f64) -> Result<Tf> {
    let f = filter_den(c);
    let num = poly::add(&poly::scale(&f, kp * ts), &poly::scale(&DIFF, kd));
    Tf::new(num, poly::scale(&f, ts), ts)
}

/// Error-feedback equivalent of the iPD law,
/// (Kp + Kd·D + Dⁿ) / (α(1 − z⁻¹)), built on a common denominator.
pub fn compensator_tf(cfg: &IpdConfig) -> Result<Tf> {
    let (c, ts) = (cfg.c, cfg.ts);
    let f = filter_den(c);
    let (num, filt) = match cfg.n {
        Order::First => {
            // Kp·Ts·f + Kd·Δ + Δ
            let num = poly::add(&poly::scale(&f, cfg.kp * ts), &poly::scale(&DIFF, cfg.kd + 1.0));
            (num, poly::scale(&f, ts))
        }
        Order::Second => {
            let f2 = poly::mul(&f, &f);
            let num = poly::add(
                &poly::add(
                    &poly::scale(&f2, cfg.kp * ts * ts),
                    &poly::scale(&poly::mul(&DIFF, &f), cfg.kd * ts),
                ),
                &poly::mul(&DIFF, &DIFF),
            );
            (num, poly::scale(&f2, ts * ts))
        }
    };
    let den = poly::scale(&poly::mul(&filt, &DIFF), cfg.alpha);
    Tf::new(num, den, ts)
}

/// Open loop iPD·G under unity error feedback.
pub fn ipd_open_loop_tf(g: &Tf, cfg: &IpdConfig) -> Result<Tf> {
    compensator_tf(cfg)?.series(g)
}

/// Reference-to-output loop L/(1 + L).
pub fn closed_loop_tf(g: &Tf, cfg: &IpdConfig) -> Result<Tf> {
    let l = ipd_open_loop_tf(g, cfg)?;
    l.feedback(&Tf::constant(1.0, g.ts())?)
}

/// M_IL = P / (1 + P·Dⁿ) with P = (1/α)·G/(1 − z⁻¹).
pub fn inner_loop_tf(g: &Tf, alpha: f64, c: f64, ts: f64, n: Order) -> Result<Tf> {
    let p = Tf::new(vec![1.0 / alpha], DIFF.to_vec(), ts)?.series(g)?;
    p.feedback(&derivative_power_tf(c, ts, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn backward_difference_when_c_is_one() {
        let d = filtered_derivative_tf(1.0, 0.1).unwrap();
        assert_eq!(d.num(), &[10.0, -10.0]);
        assert_eq!(d.den(), &[1.0]);
    }

    #[test]
    fn derivative_blocks_dc() {
        let d = filtered_derivative_tf(4.0, 0.01).unwrap();
        assert_eq!(d.eval_freq(0.0).unwrap().norm(), 0.0);
    }

    #[test]
    fn filter_pole_location() {
        let d = filtered_derivative_tf(4.0, 0.01).unwrap();
        let p = d.poles().unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[0].re - 0.75).abs() < 1e-14);
    }

    #[test]
    fn pd_special_cases() {
        let k = pd_tf(3.0, 0.0, 4.0, 0.01).unwrap();
        for w in [0.0, 10.0, 200.0] {
            assert!(close(k.eval_freq(w).unwrap(), Complex64::new(3.0, 0.0), 1e-14));
        }
        let d = filtered_derivative_tf(4.0, 0.01).unwrap();
        let pd = pd_tf(0.0, 1.0, 4.0, 0.01).unwrap();
        for w in [1.0, 10.0, 300.0] {
            assert!(close(pd.eval_freq(w).unwrap(), d.eval_freq(w).unwrap(), 1e-13));
        }
        let hand = pd_tf(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(hand.num(), &[2.0, -1.0]);
        assert_eq!(hand.den(), &[1.0]);
    }

    #[test]
    fn first_order_numerator_pattern() {
        let (kp, kd, c, ts) = (3.0, 0.7, 4.0, 0.01);
        let cfg = IpdConfig::first_order(5.0, kp, kd, c, ts).unwrap();
        let comp = compensator_tf(&cfg).unwrap();
        // den normalized by α·Ts·C: numerator scaled by the same factor
        let s = 5.0 * ts * c;
        let b0 = kp * ts * c + kd + 1.0;
        let b1 = -(kp * ts * (c - 1.0) + kd + 1.0);
        assert!((comp.num()[0] * s - b0).abs() < 1e-12);
        assert!((comp.num()[1] * s - b1).abs() < 1e-12);
    }

    #[test]
    fn zero_gains_leave_derivative_over_integrator() {
        let g = Tf::new(vec![0.0, 0.2], vec![1.0, -0.6], 0.1).unwrap();
        let cfg = IpdConfig::first_order(3.0, 0.0, 0.0, 2.5, 0.1).unwrap();
        let l = ipd_open_loop_tf(&g, &cfg).unwrap();
        let d = filtered_derivative_tf(2.5, 0.1).unwrap();
        let integ = Tf::new(vec![1.0 / 3.0], vec![1.0, -1.0], 0.1).unwrap();
        let want = d.series(&integ).unwrap().series(&g).unwrap();
        for w in [0.3, 3.0, 30.0] {
            assert!(close(l.eval_freq(w).unwrap(), want.eval_freq(w).unwrap(), 1e-12));
        }
    }

    #[test]
    fn open_loop_matches_block_composition() {
        let ts = 1.0;
        let g = Tf::delay(1, ts).unwrap();
        let cfg = IpdConfig::first_order(2.0, 1.0, 0.0, 1.0, ts).unwrap();
        let l = ipd_open_loop_tf(&g, &cfg).unwrap();
        // ((2 − z⁻¹)·z⁻¹) / (2(1 − z⁻¹))
        let want = Tf::new(vec![0.0, 2.0, -1.0], vec![2.0, -2.0], ts).unwrap();
        assert_eq!(l, want);

        for n in [Order::First, Order::Second] {
            let cfg = IpdConfig::new(n, 7.0, 2.0, 0.5, 3.0, 0.05).unwrap();
            let g = Tf::new(vec![0.0, 0.1, 0.05], vec![1.0, -1.2, 0.4], 0.05).unwrap();
            let pd = pd_tf(cfg.kp, cfg.kd, cfg.c, cfg.ts).unwrap();
            let dn = derivative_power_tf(cfg.c, cfg.ts, n).unwrap();
            let integ = Tf::new(vec![1.0 / cfg.alpha], vec![1.0, -1.0], cfg.ts).unwrap();
            let blocks = pd.add(&dn).unwrap().series(&integ).unwrap().series(&g).unwrap();
            let l = ipd_open_loop_tf(&g, &cfg).unwrap();
            for i in 1..=10 {
                let w = i as f64 * PI / (10.5 * cfg.ts);
                assert!(close(l.eval_freq(w).unwrap(), blocks.eval_freq(w).unwrap(), 1e-11));
            }
        }
    }

    #[test]
    fn inner_loop_hand_expansion() {
        let g = Tf::delay(1, 1.0).unwrap();
        let m = inner_loop_tf(&g, 1.0, 1.0, 1.0, Order::First).unwrap();
        // z⁻¹ / (1 − z⁻²)
        assert_eq!(m.num(), &[0.0, 1.0]);
        assert_eq!(m.den(), &[1.0, 0.0, -1.0]);
        let v = m.eval_freq(PI / 2.0).unwrap();
        assert!(close(v, Complex64::new(0.0, -0.5), 1e-14));
    }

    #[test]
    fn inner_loop_of_zero_plant_is_zero() {
        let g = Tf::constant(0.0, 0.1).unwrap();
        let m = inner_loop_tf(&g, 10.0, 2.0, 0.1, Order::First).unwrap();
        assert!(m.is_zero());
    }
}

mod common;

use approx::assert_relative_eq;
use mfc_design::plants::{vehicle_tf, PendulumParams, PENDULUM_TS};
use mfc_design::tf::{poly, ContinuousSecondOrder, Discretizer, Tustin, ZeroOrderHold};
use mfc_design::DiscreteTransferFunction as Tf;
use num_complex::Complex64;
use proptest::prelude::*;

use common::{durand_kerner, root_set_distance};

fn coeffs(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0_f64, len)
}

fn tf_strategy() -> impl Strategy<Value = Tf> {
    (coeffs(1..5), coeffs(0..4), 0.001..1.0_f64).prop_filter_map("valid tf", |(num, tail, ts)| {
        let mut den = vec![1.0];
        den.extend(tail);
        Tf::new(num, den, ts).ok()
    })
}

/// Conjugate-closed root sets with pairwise separation ≥ 0.1.
fn root_set() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.1..2.0_f64, 0.0..std::f64::consts::PI, any::<bool>()), 1..4).prop_filter_map(
        "separated roots",
        |spec| {
            let mut roots = Vec::new();
            for (r, th, real) in spec {
                if real {
                    roots.push(Complex64::new(if th > 1.5 { -r } else { r }, 0.0));
                } else {
                    let th = th.clamp(0.2, std::f64::consts::PI - 0.2);
                    roots.push(Complex64::from_polar(r, th));
                    roots.push(Complex64::from_polar(r, -th));
                }
            }
            if roots.len() > 6 {
                return None;
            }
            for i in 0..roots.len() {
                for j in 0..i {
                    if (roots[i] - roots[j]).norm() < 0.1 {
                        return None;
                    }
                }
            }
            Some(roots)
        },
    )
}

proptest! {
    #[test]
    fn evaluation_is_conjugate_symmetric(g in tf_strategy(), frac in 0.0..1.0_f64) {
        let w = frac * g.nyquist();
        if let (Ok(a), Ok(b)) = (g.eval_freq(w), g.eval_freq(-w)) {
            let scale = 1.0 + a.norm();
            prop_assert!((a - b.conj()).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn poles_recover_expanded_factors(roots in root_set()) {
        let den = poly::from_reciprocal_roots(&roots);
        let g = Tf::new(vec![1.0], den, 0.1).unwrap();
        let found = g.poles().unwrap();
        prop_assert_eq!(found.len(), roots.len());
        prop_assert!(root_set_distance(&roots, &found) < 1e-8);
    }

    #[test]
    fn feedback_matches_pointwise_closure(f in tf_strategy(), b in tf_strategy(), fracs in prop::collection::vec(0.0..1.0_f64, 100)) {
        let b = Tf::new(b.num().to_vec(), b.den().to_vec(), f.ts()).unwrap();
        let Ok(cl) = f.feedback(&b) else { return Ok(()) };
        for frac in fracs {
            let w = frac * f.nyquist();
            let (Ok(fv), Ok(bv)) = (f.eval_freq(w), b.eval_freq(w)) else { continue };
            let expect = fv / (1.0 + fv * bv);
            let Ok(got) = cl.eval_freq(w) else { continue };
            // skip frequencies where the closed loop itself is near a pole
            if !expect.is_finite() || expect.norm() > 1e6 {
                continue;
            }
            prop_assert!((got - expect).norm() <= 1e-10 * expect.norm().max(1.0), "{} vs {}", got, expect);
        }
    }

    #[test]
    fn zoh_preserves_dc_gain(a2 in 0.1..5.0_f64, a1 in -3.0..3.0_f64, a0 in prop_oneof![-5.0..-0.1_f64, 0.1..5.0_f64], k in -3.0..3.0_f64, ts in 0.001..0.2_f64) {
        let sys = ContinuousSecondOrder::new(a2, a1, a0, k).unwrap();
        let expect = k / a0;
        let Ok(g) = ZeroOrderHold.discretize(&sys, ts) else { return Ok(()) };
        let Ok(dc) = g.dc_gain() else { return Ok(()) };
        prop_assert!((dc - expect).abs() <= 1e-9 * expect.abs().max(1e-12), "{} vs {}", dc, expect);
    }
}

#[test]
fn vehicle_poles_match_independent_oracle() {
    let g = vehicle_tf();
    let found = g.poles().unwrap();
    let oracle = durand_kerner(&[1.0, -2.957, 2.915, -0.9581]);
    assert_eq!(found.len(), 3);
    assert!(root_set_distance(&found, &oracle) < 1e-8);
    let oracle_stable = oracle.iter().all(|p| p.norm() < 1.0 - 1e-9);
    assert_eq!(g.is_stable().unwrap(), oracle_stable);
}

#[test]
fn vehicle_dc_value_by_arithmetic() {
    let v = vehicle_tf().dc_gain().unwrap();
    assert_relative_eq!(v, (0.01262 - 0.01236) / (1.0 - 2.957 + 2.915 - 0.9581), max_relative = 1e-9);
}

#[test]
fn pendulum_dc_gain_under_both_discretizers() {
    let p = PendulumParams::default();
    let sys = mfc_design::plants::pendulum_continuous(&p).unwrap();
    let expect = (0.5 * 0.5 / 0.6) / (-0.5 * 9.8 * 0.5);
    for method in [&ZeroOrderHold as &dyn Discretizer, &Tustin] {
        let g = method.discretize(&sys, PENDULUM_TS).unwrap();
        assert_relative_eq!(g.dc_gain().unwrap(), expect, max_relative = 1e-9);
    }
}

#[test]
fn zoh_first_order_limit_matches_exponential() {
    // a2·s² + a1·s with a0 = 0 is an integrator with a lag; compare the
    // step response of the discretized model with the analytic one.
    let (a2, a1, k, ts) = (0.5, 2.0, 1.0, 0.05);
    let g = ZeroOrderHold
        .discretize(&ContinuousSecondOrder::new(a2, a1, 0.0, k).unwrap(), ts)
        .unwrap();
    let y = g.step_response(40);
    let tau = a2 / a1;
    for (i, yi) in y.iter().enumerate() {
        let t = i as f64 * ts;
        let exact = k / a1 * (t - tau * (1.0 - (-t / tau).exp()));
        assert!((yi - exact).abs() < 1e-10, "k={i} {yi} vs {exact}");
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mfc::Order;
use crate::registry::{Named, Registry};
use crate::tf::{DiscreteTransferFunction, FrequencyGrid};

/// "Much greater than" convention: one order of magnitude.
pub const DEFAULT_MARGIN: f64 = 10.0;

/// A pointwise lower bound on α; the design value is its supremum over a
/// frequency grid.
pub trait AlphaRule: Named + Send + Sync {
    fn order(&self) -> Order;
    /// Value at one frequency given G(e^{iωTs}).
    fn pointwise(&self, g: Complex64, c: f64, ts: f64, omega: f64) -> f64;
}

fn filter_at(c: f64, ts: f64, omega: f64) -> Complex64 {
    c + (1.0 - c) * Complex64::from_polar(1.0, -omega * ts)
}

/// |(1/Ts)·G/(C + (1 − C)e^{−iωTs})|
pub struct ExactFirst;
/// (1/Ts)·|G|
pub struct UpperFirst;
/// |(1/Ts²)·G/(C + (1 − C)e^{−iωTs})²|
pub struct ExactSecond;
/// (2/Ts²)·|G|
pub struct UpperSecond;

impl Named for ExactFirst {
    fn name(&self) -> &'static str {
        "exact-first"
    }
}
impl AlphaRule for ExactFirst {
    fn order(&self) -> Order {
        Order::First
    }
    fn pointwise(&self, g: Complex64, c: f64, ts: f64, omega: f64) -> f64 {
        (g / filter_at(c, ts, omega)).norm() / ts
    }
}

impl Named for UpperFirst {
    fn name(&self) -> &'static str {
        "upper-first"
    }
}
impl AlphaRule for UpperFirst {
    fn order(&self) -> Order {
        Order::First
    }
    fn pointwise(&self, g: Complex64, _c: f64, ts: f64, _omega: f64) -> f64 {
        g.norm() / ts
    }
}

impl Named for ExactSecond {
    fn name(&self) -> &'static str {
        "exact-second"
    }
}
impl AlphaRule for ExactSecond {
    fn order(&self) -> Order {
        Order::Second
    }
    fn pointwise(&self, g: Complex64, c: f64, ts: f64, omega: f64) -> f64 {
        let f = filter_at(c, ts, omega);
        (g / (f * f)).norm() / (ts * ts)
    }
}

impl Named for UpperSecond {
    fn name(&self) -> &'static str {
        "upper-second"
    }
}
impl AlphaRule for UpperSecond {
    fn order(&self) -> Order {
        Order::Second
    }
    fn pointwise(&self, g: Complex64, _c: f64, ts: f64, _omega: f64) -> f64 {
        2.0 * g.norm() / (ts * ts)
    }
}

pub fn alpha_rules() -> Registry<dyn AlphaRule> {
    let mut r: Registry<dyn AlphaRule> = Registry::new("alpha rule");
    r.register(Box::new(ExactFirst));
    r.register(Box::new(UpperFirst));
    r.register(Box::new(ExactSecond));
    r.register(Box::new(UpperSecond));
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaBound {
    pub bound: f64,
    pub rule: String,
    pub margin: f64,
    pub alpha_design: f64,
    /// Frequency at which the supremum was attained, rad/s.
    pub omega_at_max: f64,
    pub grid: FrequencyGrid,
}

fn pointwise_checked(
    g: &DiscreteTransferFunction,
    c: f64,
    rule: &dyn AlphaRule,
    omega: f64,
) -> Result<f64> {
    let v = rule.pointwise(g.eval_freq(omega)?, c, g.ts(), omega);
    if !v.is_finite() {
        return Err(Error::NonFiniteMagnitude { omega });
    }
    Ok(v)
}

/// Supremum of `rule` over `grid`, with α_design = bound × margin.
pub fn alpha_bound(
    g: &DiscreteTransferFunction,
    c: f64,
    rule: &dyn AlphaRule,
    grid: &FrequencyGrid,
    margin: f64,
) -> Result<AlphaBound> {
    grid.validate_for(g.ts())?;
    if !(margin > 0.0) {
        return Err(Error::InvalidParameter(format!("margin must be positive, got {margin}")));
    }
    let mut best = (f64::NEG_INFINITY, 0.0);
    for omega in grid.omegas() {
        let v = pointwise_checked(g, c, rule, omega)?;
        if v > best.0 {
            best = (v, omega);
        }
    }
    if !(best.0 > 0.0) {
        return Err(Error::InvalidParameter(
            "plant magnitude vanishes on the whole grid".into(),
        ));
    }
    Ok(AlphaBound {
        bound: best.0,
        rule: rule.name().to_string(),
        margin,
        alpha_design: best.0 * margin,
        omega_at_max: best.1,
        grid: *grid,
    })
}

/// Bound as a function of the low-frequency cutoff.
///
/// All cutoffs share one evaluation set (the base grid plus the cutoffs
/// themselves), and each bound is the supremum over the points at or
/// above its cutoff. The result is therefore non-increasing in the cutoff.
pub fn alpha_bound_sweep(
    g: &DiscreteTransferFunction,
    c: f64,
    rule: &dyn AlphaRule,
    base: &FrequencyGrid,
    cutoffs: &[f64],
) -> Result<Vec<(f64, f64)>> {
    base.validate_for(g.ts())?;
    let nyq = g.nyquist();
    for &w in cutoffs {
        if !(w > 0.0 && w < nyq) {
            return Err(Error::InvalidGrid(format!(
                "cutoff {w} outside (0, {nyq})"
            )));
        }
    }
    let mut pts: Vec<f64> = base.omegas();
    pts.extend_from_slice(cutoffs);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let vals: Vec<f64> = pts
        .iter()
        .map(|&w| pointwise_checked(g, c, rule, w))
        .collect::<Result<_>>()?;
    // suffix maxima
    let mut suffix = vals.clone();
    for i in (0..suffix.len().saturating_sub(1)).rev() {
        suffix[i] = suffix[i].max(suffix[i + 1]);
    }
    Ok(cutoffs
        .iter()
        .map(|&w| {
            let idx = pts.partition_point(|&p| p < w);
            (w, suffix[idx])
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unity_plant_upper_first() {
        let g = DiscreteTransferFunction::constant(1.0, 0.01).unwrap();
        let grid = FrequencyGrid::default_for(0.01);
        let b = alpha_bound(&g, 4.0, &UpperFirst, &grid, DEFAULT_MARGIN).unwrap();
        assert!((b.bound - 100.0).abs() < 1e-9);
        assert!((b.alpha_design - 1000.0).abs() < 1e-9);
        assert_eq!(b.rule, "upper-first");
    }

    #[test]
    fn second_order_ratio() {
        let g = DiscreteTransferFunction::new(vec![0.0, 0.2], vec![1.0, -0.7], 0.05).unwrap();
        let grid = FrequencyGrid::default_for(0.05);
        let b1 = alpha_bound(&g, 3.0, &UpperFirst, &grid, 10.0).unwrap();
        let b2 = alpha_bound(&g, 3.0, &UpperSecond, &grid, 10.0).unwrap();
        assert!((b2.bound - 2.0 / 0.05 * b1.bound).abs() < 1e-9 * b2.bound);
    }

    #[test]
    fn pole_on_grid_reported() {
        let g = DiscreteTransferFunction::new(vec![1.0], vec![1.0, 1.0], 1.0).unwrap();
        let grid = FrequencyGrid::default_for(1.0);
        match alpha_bound(&g, 2.0, &UpperFirst, &grid, 10.0) {
            Err(Error::PoleOnUnitCircle { omega }) | Err(Error::NonFiniteMagnitude { omega }) => {
                assert!((omega - PI).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sweep_is_monotone_for_integrator() {
        let g = DiscreteTransferFunction::integrator(0.05).unwrap();
        let base = FrequencyGrid::default_for(0.05);
        let nyq = PI / 0.05;
        let cutoffs: Vec<f64> = (0..20).map(|i| nyq * 10f64.powf(-4.0 + 3.5 * i as f64 / 19.0)).collect();
        let s = alpha_bound_sweep(&g, 3.5, &UpperFirst, &base, &cutoffs).unwrap();
        assert!(s.windows(2).all(|w| w[1].1 <= w[0].1));
        assert!(s.iter().all(|(_, b)| b.is_finite()));
        // integrator: |Ts/(1 − e^{−iωTs})|/Ts = 1/(2 sin(ωTs/2))
        let (w0, b0) = s[0];
        assert!((b0 - 1.0 / (2.0 * (w0 * 0.05 / 2.0).sin())).abs() < 1e-9 * b0);
    }

    #[test]
    fn registry_has_four_rules() {
        assert_eq!(
            alpha_rules().names(),
            vec!["exact-first", "upper-first", "exact-second", "upper-second"]
        );
    }
}

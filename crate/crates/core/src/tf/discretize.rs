//! Sampling of the second-order continuous plants used in the examples.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::DiscreteTransferFunction;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

/// `k / (a2·s² + a1·s + a0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousSecondOrder {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
    pub k: f64,
}

impl ContinuousSecondOrder {
    pub fn new(a2: f64, a1: f64, a0: f64, k: f64) -> Result<Self> {
        let s = Self { a2, a1, a0, k };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        if self.a2 == 0.0 {
            return Err(Error::InvalidParameter(
                "second-order plant requires a2 != 0".into(),
            ));
        }
        if ![self.a2, self.a1, self.a0, self.k].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite plant coefficient".into()));
        }
        Ok(())
    }

    /// k / a0, when a0 ≠ 0.
    pub fn dc_gain(&self) -> Option<f64> {
        (self.a0 != 0.0).then(|| self.k / self.a0)
    }

    /// Roots of a2·s² + a1·s + a0, real parts first then imaginary parts.
    pub fn poles(&self) -> [(f64, f64); 2] {
        let disc = self.a1 * self.a1 - 4.0 * self.a2 * self.a0;
        let re = -self.a1 / (2.0 * self.a2);
        if disc >= 0.0 {
            let d = disc.sqrt() / (2.0 * self.a2);
            [(re + d, 0.0), (re - d, 0.0)]
        } else {
            let d = (-disc).sqrt() / (2.0 * self.a2);
            [(re, d), (re, -d)]
        }
    }
}

pub trait Discretizer: Named + Send + Sync {
    fn discretize(&self, sys: &ContinuousSecondOrder, ts: f64) -> Result<DiscreteTransferFunction>;
}

fn check_ts(ts: f64) -> Result<()> {
    if !(ts > 0.0 && ts.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sample time must be positive, got {ts}"
        )));
    }
    Ok(())
}

/// Zero-order-hold equivalent, computed from the exponential of the
/// augmented state matrix.
pub struct ZeroOrderHold;

impl Named for ZeroOrderHold {
    fn name(&self) -> &'static str {
        "zoh"
    }
}

impl Discretizer for ZeroOrderHold {
    fn discretize(&self, sys: &ContinuousSecondOrder, ts: f64) -> Result<DiscreteTransferFunction> {
        sys.check()?;
        check_ts(ts)?;
        // x = [y, y']; x2' = (k·u − a1·x2 − a0·x1)/a2
        let m = Matrix3::new(
            0.0,
            1.0,
            0.0,
            -sys.a0 / sys.a2,
            -sys.a1 / sys.a2,
            sys.k / sys.a2,
            0.0,
            0.0,
            0.0,
        ) * ts;
        let e = m.exp();
        let (p11, p12, p21, p22) = (e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]);
        let (g1, g2) = (e[(0, 2)], e[(1, 2)]);
        let num = vec![0.0, g1, p12 * g2 - p22 * g1];
        let den = vec![1.0, -(p11 + p22), p11 * p22 - p12 * p21];
        DiscreteTransferFunction::new(num, den, ts)
    }
}

/// Bilinear substitution s = (2/Ts)(1 − z⁻¹)/(1 + z⁻¹).
pub struct Tustin;

impl Named for Tustin {
    fn name(&self) -> &'static str {
        "tustin"
    }
}

impl Discretizer for Tustin {
    fn discretize(&self, sys: &ContinuousSecondOrder, ts: f64) -> Result<DiscreteTransferFunction> {
        sys.check()?;
        check_ts(ts)?;
        let q = 2.0 / ts;
        let (a2, a1, a0) = (sys.a2 * q * q, sys.a1 * q, sys.a0);
        // (1 − z⁻¹)² = [1, −2, 1]; (1 − z⁻²) = [1, 0, −1]; (1 + z⁻¹)² = [1, 2, 1]
        let den = vec![a2 + a1 + a0, -2.0 * a2 + 2.0 * a0, a2 - a1 + a0];
        let num = vec![sys.k, 2.0 * sys.k, sys.k];
        DiscreteTransferFunction::new(num, den, ts)
    }
}

/// All built-in discretization methods, keyed by name.
pub fn discretizers() -> Registry<dyn Discretizer> {
    let mut r: Registry<dyn Discretizer> = Registry::new("discretization method");
    r.register(Box::new(ZeroOrderHold));
    r.register(Box::new(Tustin));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn stable() -> ContinuousSecondOrder {
        ContinuousSecondOrder::new(1.0, 3.0, 2.0, 2.0).unwrap()
    }

    #[test]
    fn rejects_zero_a2() {
        assert!(ContinuousSecondOrder::new(0.0, 1.0, 1.0, 1.0).is_err());
        let degenerate = ContinuousSecondOrder { a2: 0.0, a1: 1.0, a0: 1.0, k: 1.0 };
        assert!(ZeroOrderHold.discretize(&degenerate, 0.1).is_err());
        assert!(Tustin.discretize(&degenerate, 0.1).is_err());
    }

    #[test]
    fn zoh_matches_closed_form_first_order_factors() {
        // 2/((s+1)(s+2)): poles map to e^{-Ts}, e^{-2Ts}
        let ts = 0.1;
        let g = ZeroOrderHold.discretize(&stable(), ts).unwrap();
        let (p1, p2) = ((-ts).exp(), (-2.0 * ts).exp());
        assert_relative_eq!(g.den()[1], -(p1 + p2), epsilon = 1e-12);
        assert_relative_eq!(g.den()[2], p1 * p2, epsilon = 1e-12);
        // step-invariance: step response at sample 1 equals continuous step at Ts
        // y(t) = 1 − 2e^{-t} + e^{-2t}
        let y1 = 1.0 - 2.0 * (-ts).exp() + (-2.0 * ts).exp();
        assert_relative_eq!(g.step_response(2)[1], y1, epsilon = 1e-12);
    }

    #[test]
    fn dc_gain_preserved() {
        for d in discretizers().iter() {
            let g = d.discretize(&stable(), 0.05).unwrap();
            assert_relative_eq!(g.dc_gain().unwrap(), 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn registry_names() {
        assert_eq!(discretizers().names(), vec!["zoh", "tustin"]);
    }
}

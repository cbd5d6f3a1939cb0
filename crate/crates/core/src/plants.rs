//! The two worked plants: a cart-pole linearized about the upright angle,
//! and an identified pedal-to-speed vehicle model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mfc::{inner_loop_tf, IpdConfig};
use crate::tf::{ContinuousSecondOrder, DiscreteTransferFunction as Tf, Discretizer, ZeroOrderHold};

pub const PENDULUM_TS: f64 = 0.01;
pub const VEHICLE_TS: f64 = 0.05;

/// Identified pedal → speed model, ascending powers of z⁻¹.
pub const VEHICLE_NUM: [f64; 3] = [0.0, 0.01262, -0.01236];
pub const VEHICLE_DEN: [f64; 4] = [1.0, -2.957, 2.915, -0.9581];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendulumParams {
    /// Cart mass, kg.
    pub cart_mass: f64,
    /// Pendulum mass, kg.
    pub pend_mass: f64,
    /// Pendulum length, m.
    pub length: f64,
    /// Inertia, kg·m².
    pub inertia: f64,
    /// Viscous friction, kg·m²/s.
    pub friction: f64,
    /// m/s².
    pub gravity: f64,
}

impl Default for PendulumParams {
    fn default() -> Self {
        Self::with_point_inertia(0.1, 0.5, 0.5, 2.0, 9.8)
    }
}

impl PendulumParams {
    /// Parameters with I = m·l².
    pub fn with_point_inertia(cart_mass: f64, pend_mass: f64, length: f64, friction: f64, gravity: f64) -> Self {
        Self {
            cart_mass,
            pend_mass,
            length,
            inertia: pend_mass * length * length,
            friction,
            gravity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = [
            self.cart_mass,
            self.pend_mass,
            self.length,
            self.inertia,
            self.friction,
            self.gravity,
        ];
        if v.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "pendulum parameters must all be positive".into(),
            ))
        }
    }
}

/// Angle dynamics (I + ml² + m²l²/(M+m))·θ̈ + b·θ̇ − mgl·θ = ml/(M+m)·u.
pub fn pendulum_continuous(p: &PendulumParams) -> Result<ContinuousSecondOrder> {
    p.validate()?;
    let (mm, m, l) = (p.cart_mass, p.pend_mass, p.length);
    let total = mm + m;
    ContinuousSecondOrder::new(
        p.inertia + m * l * l + m * m * l * l / total,
        p.friction,
        -m * p.gravity * l,
        m * l / total,
    )
}

pub fn pendulum_discrete(p: &PendulumParams, ts: f64) -> Result<Tf> {
    pendulum_discrete_with(p, ts, &ZeroOrderHold)
}

pub fn pendulum_discrete_with(p: &PendulumParams, ts: f64, method: &dyn Discretizer) -> Result<Tf> {
    method.discretize(&pendulum_continuous(p)?, ts)
}

pub fn vehicle_tf() -> Tf {
    Tf::new(VEHICLE_NUM.to_vec(), VEHICLE_DEN.to_vec(), VEHICLE_TS).expect("valid constant plant")
}

/// Pedal → acceleration: G(z)·(1 − z⁻¹)/Ts.
pub fn vehicle_inner_plant() -> Tf {
    let ts = VEHICLE_TS;
    vehicle_tf()
        .series(&Tf::difference(ts).expect("valid"))
        .expect("equal sample times")
}

/// Acceleration reference → speed as seen by the outer controller: the
/// inner loop M_IL under `inner_cfg` followed by the accumulator
/// Ts/(1 − z⁻¹). The full rational degree is kept.
pub fn vehicle_outer_plant(inner_cfg: &IpdConfig) -> Result<Tf> {
    inner_cfg.validate()?;
    let inner = vehicle_inner_plant();
    if (inner_cfg.ts - inner.ts()).abs() > 1e-12 {
        return Err(Error::SampleTimeMismatch {
            left: inner_cfg.ts,
            right: inner.ts(),
        });
    }
    let m_il = inner_loop_tf(&inner, inner_cfg.alpha, inner_cfg.c, inner_cfg.ts, inner_cfg.n)?;
    m_il.series(&Tf::integrator(inner_cfg.ts)?)
}

/// Inner (acceleration) controller of the frequency-based cascade design.
pub fn table1_inner_config() -> IpdConfig {
    IpdConfig::first_order(1475.05, 20.0, 0.0, 7.5, VEHICLE_TS).expect("valid")
}

/// Outer (speed) controller of the frequency-based cascade design.
pub fn table1_outer_config() -> IpdConfig {
    IpdConfig::first_order(158644.0, 3.0, 3000.0, 3.5, VEHICLE_TS).expect("valid")
}

/// Pendulum configuration picked from the designed region.
pub fn pendulum_designed_config() -> IpdConfig {
    IpdConfig::first_order(170.06, 48.98, 64.92, 4.0, PENDULUM_TS).expect("valid")
}

/// Pendulum configuration from iterative IAE minimization.
pub fn pendulum_iterative_config() -> IpdConfig {
    IpdConfig::first_order(154.94, 48.56, 71.05, 4.0, PENDULUM_TS).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pendulum_coefficients() {
        let s = pendulum_continuous(&PendulumParams::default()).unwrap();
        assert_relative_eq!(s.a2, 0.125 + 0.125 + 0.0625 / 0.6, epsilon = 1e-15);
        assert_relative_eq!(s.a2, 0.354_166_666_666_666_7, epsilon = 1e-12);
        assert_eq!(s.a1, 2.0);
        assert_relative_eq!(s.a0, -2.45, epsilon = 1e-15);
        assert_relative_eq!(s.k, 0.25 / 0.6, epsilon = 1e-15);
    }

    #[test]
    fn pendulum_is_open_loop_unstable() {
        let s = pendulum_continuous(&PendulumParams::default()).unwrap();
        let poles = s.poles();
        // roots of 0.354167 s² + 2 s − 2.45
        let disc: f64 = 4.0 + 4.0 * s.a2 * 2.45;
        let p_plus = (-2.0 + disc.sqrt()) / (2.0 * s.a2);
        assert_relative_eq!(poles[0].0, p_plus, epsilon = 1e-12);
        assert!(poles[0].0 > 0.0 && poles[1].0 < 0.0);
        let g = pendulum_discrete(&PendulumParams::default(), PENDULUM_TS).unwrap();
        assert!(!g.is_stable().unwrap());
    }

    #[test]
    fn pendulum_dc_gain_preserved() {
        let g = pendulum_discrete(&PendulumParams::default(), PENDULUM_TS).unwrap();
        let want = (0.25 / 0.6) / -2.45;
        assert_relative_eq!(g.dc_gain().unwrap(), want, max_relative = 1e-9);
    }

    #[test]
    fn vanishing_pendulum_mass() {
        let p = PendulumParams::with_point_inertia(0.1, 1e-9, 0.5, 2.0, 9.8);
        let s = pendulum_continuous(&p).unwrap();
        assert!(s.k.abs() < 1e-8 && s.a0.abs() < 1e-8);
    }

    #[test]
    fn mass_sensitivity_is_mild() {
        let base = pendulum_continuous(&PendulumParams::default()).unwrap();
        let mut p = PendulumParams::default();
        p.pend_mass *= 1.01;
        p.inertia = p.pend_mass * p.length * p.length;
        let s = pendulum_continuous(&p).unwrap();
        assert!(((s.a2 - base.a2) / base.a2).abs() < 0.02);
    }

    #[test]
    fn rejects_nonpositive_params() {
        let mut p = PendulumParams::default();
        p.length = 0.0;
        assert!(pendulum_continuous(&p).is_err());
    }

    #[test]
    fn vehicle_coefficients() {
        let g = vehicle_tf();
        assert_eq!(g.num(), &[0.0, 0.01262, -0.01236]);
        assert_eq!(g.den(), &[1.0, -2.957, 2.915, -0.9581]);
        assert_eq!(g.ts(), 0.05);
        assert_relative_eq!(g.dc_gain().unwrap().abs(), 2.6, max_relative = 1e-9);
    }

    #[test]
    fn inner_plant_is_differentiated_speed() {
        let gi = vehicle_inner_plant();
        let g = vehicle_tf();
        for w in [0.5, 5.0, 50.0] {
            let z_inv = num_complex::Complex64::from_polar(1.0, -w * VEHICLE_TS);
            let want = g.eval_freq(w).unwrap() * (1.0 - z_inv) / VEHICLE_TS;
            assert!((gi.eval_freq(w).unwrap() - want).norm() < 1e-12 * want.norm());
        }
        assert!(gi.is_strictly_proper());
    }

    #[test]
    fn outer_plant_sample_time_checked() {
        let cfg = IpdConfig::first_order(1475.05, 20.0, 0.0, 7.5, 0.01).unwrap();
        assert!(vehicle_outer_plant(&cfg).is_err());
        assert!(vehicle_outer_plant(&table1_inner_config()).is_ok());
    }
}

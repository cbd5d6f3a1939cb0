use serde::{Deserialize, Serialize};

use super::{Limits, PlantState, SimTrace, DIVERGENCE_LIMIT};
use crate::error::{Error, Result};
use crate::mfc::{IpdConfig, IpdController};
use crate::tf::DiscreteTransferFunction;

/// Speed/acceleration cascade: the outer iPD turns speed error into an
/// acceleration reference, the inner iPD turns acceleration error into the
/// plant input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeSpec {
    pub outer: IpdConfig,
    pub inner: IpdConfig,
    pub plant: DiscreteTransferFunction,
    /// `true`: the plant maps input → speed and the inner loop measures
    /// (1 − z⁻¹)/Ts of it. `false`: the plant maps input → acceleration
    /// and speed is its running sum.
    pub inner_plant_derivation: bool,
    /// Adds the supplied acceleration reference to the outer command.
    pub accel_feedforward: bool,
    pub u_limits: Option<Limits>,
    pub servo: bool,
}

impl CascadeSpec {
    fn check(&self) -> Result<()> {
        self.outer.validate()?;
        self.inner.validate()?;
        let ts = self.plant.ts();
        for cfg in [&self.outer, &self.inner] {
            if (cfg.ts - ts).abs() > 1e-12 * ts {
                return Err(Error::SampleTimeMismatch {
                    left: cfg.ts,
                    right: ts,
                });
            }
        }
        Ok(())
    }
}

/// Speed and acceleration measurements derived from the plant output.
struct Measurement {
    derivation: bool,
    ts: f64,
    last_speed: f64,
}

impl Measurement {
    fn read(&mut self, plant_out: f64) -> (f64, f64) {
        if self.derivation {
            let accel = (plant_out - self.last_speed) / self.ts;
            self.last_speed = plant_out;
            (plant_out, accel)
        } else {
            self.last_speed += self.ts * plant_out;
            (self.last_speed, plant_out)
        }
    }
}

fn out_of_bounds(v: f64) -> bool {
    !v.is_finite() || v.abs() > DIVERGENCE_LIMIT
}

/// Full cascade run. `accel_ref`, when given, is fed forward into the
/// inner reference if `accel_feedforward` is set; if the flag is set and no
/// profile is given the backward difference of `speed_ref` is used.
///
/// The returned trace holds speed signals in the main columns, the applied
/// input in `u`, and acceleration signals in `inner`.
pub fn simulate_cascade(
    spec: &CascadeSpec,
    speed_ref: &[f64],
    accel_ref: Option<&[f64]>,
) -> Result<SimTrace> {
    spec.check()?;
    let ts = spec.plant.ts();
    if let Some(a) = accel_ref {
        if a.len() != speed_ref.len() {
            return Err(Error::InvalidParameter(
                "acceleration and speed references differ in length".into(),
            ));
        }
    }
    let ff: Vec<f64> = match (spec.accel_feedforward, accel_ref) {
        (false, _) => vec![0.0; speed_ref.len()],
        (true, Some(a)) => a.to_vec(),
        (true, None) => speed_ref
            .iter()
            .scan(0.0, |prev, &v| {
                let a = (v - *prev) / ts;
                *prev = v;
                Some(a)
            })
            .collect(),
    };

    let mut plant = PlantState::new(&spec.plant)?;
    let mut meas = Measurement {
        derivation: spec.inner_plant_derivation,
        ts,
        last_speed: 0.0,
    };
    let mut outer = IpdController::new(spec.outer);
    let mut inner = IpdController::new(spec.inner);
    let mut trace = SimTrace::new(ts);

    for (k, &v_ref) in speed_ref.iter().enumerate() {
        let (speed, accel) = meas.read(plant.output());
        if out_of_bounds(speed) || out_of_bounds(accel) {
            trace.diverged = true;
            break;
        }
        let a_ref = outer.step(speed, v_ref, spec.servo) + ff[k];
        let mut u = inner.step(accel, a_ref, spec.servo);
        if let Some(lim) = spec.u_limits {
            u = lim.clamp(u);
            inner.record_applied(u);
        }
        plant.input(u);
        trace.push(v_ref, speed, u);
        trace.push_inner(a_ref, accel);
    }
    Ok(trace)
}

/// Inner loop alone with the outer controller bypassed: `accel_ref` drives
/// the inner reference directly. Main trace columns hold acceleration.
pub fn simulate_cascade_inner(spec: &CascadeSpec, accel_ref: &[f64]) -> Result<SimTrace> {
    spec.check()?;
    let ts = spec.plant.ts();
    let mut plant = PlantState::new(&spec.plant)?;
    let mut meas = Measurement {
        derivation: spec.inner_plant_derivation,
        ts,
        last_speed: 0.0,
    };
    let mut inner = IpdController::new(spec.inner);
    let mut trace = SimTrace::new(ts);
    for &a_ref in accel_ref {
        let (_, accel) = meas.read(plant.output());
        if out_of_bounds(accel) {
            trace.diverged = true;
            break;
        }
        let mut u = inner.step(accel, a_ref, spec.servo);
        if let Some(lim) = spec.u_limits {
            u = lim.clamp(u);
            inner.record_applied(u);
        }
        plant.input(u);
        trace.push(a_ref, accel, u);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> CascadeSpec {
        let ts = 0.1;
        CascadeSpec {
            outer: IpdConfig::first_order(50.0, 1.0, 1.0, 2.0, ts).unwrap(),
            inner: IpdConfig::first_order(5.0, 2.0, 0.0, 2.0, ts).unwrap(),
            plant: DiscreteTransferFunction::new(vec![0.0, 0.1], vec![1.0, -0.95], ts).unwrap(),
            inner_plant_derivation: true,
            accel_feedforward: false,
            u_limits: None,
            servo: true,
        }
    }

    #[test]
    fn zero_reference_gives_zero_trace() {
        let tr = simulate_cascade(&spec(), &[0.0; 100], None).unwrap();
        assert!(tr.y.iter().chain(tr.u.iter()).all(|v| *v == 0.0));
        assert!(tr.inner.unwrap().y.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn mismatched_sample_times() {
        let mut s = spec();
        s.inner.ts = 0.2;
        assert!(simulate_cascade(&s, &[0.0; 10], None).is_err());
    }

    #[test]
    fn feedforward_defaults_to_reference_difference() {
        let mut s = spec();
        s.accel_feedforward = true;
        let r: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
        let a: Vec<f64> = (0..50).map(|k| if k == 0 { 0.0 } else { 1.0 }).collect();
        let implicit = simulate_cascade(&s, &r, None).unwrap();
        let explicit = simulate_cascade(&s, &r, Some(&a)).unwrap();
        for k in 0..50 {
            assert!((implicit.y[k] - explicit.y[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn accel_plant_mode_integrates_speed() {
        let mut s = spec();
        s.inner_plant_derivation = false;
        let tr = simulate_cascade(&s, &[1.0; 20], None).unwrap();
        let inner = tr.inner.unwrap();
        let mut v = 0.0;
        for k in 0..20 {
            v += 0.1 * inner.y[k];
            assert!((tr.y[k] - v).abs() < 1e-12);
        }
    }
}

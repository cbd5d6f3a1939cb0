use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Limits, PlantState, SimTrace, DIVERGENCE_LIMIT};
use crate::error::{Error, Result};
use crate::mfc::{IpdConfig, IpdController};
use crate::tf::DiscreteTransferFunction;

/// Extra excitation for single-loop runs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LoopOptions {
    /// Added to the plant output before it is measured.
    pub output_disturbance: Option<Vec<f64>>,
    /// Amplitude of uniform white measurement noise; 0 disables it.
    pub noise_amplitude: f64,
    pub noise_seed: u64,
}

pub fn simulate_loop(
    plant: &DiscreteTransferFunction,
    cfg: &IpdConfig,
    y_ref: &[f64],
    servo: bool,
    u_limits: Option<Limits>,
) -> Result<SimTrace> {
    simulate_loop_with(plant, cfg, y_ref, servo, u_limits, &LoopOptions::default())
}

/// Runs an iPD controller against `plant` for `y_ref.len()` samples.
///
/// Saturation is applied before the plant and the estimator sees the
/// saturated action. A run whose output leaves ±[`DIVERGENCE_LIMIT`] stops
/// early with `diverged` set; the trace up to that point is kept.
pub fn simulate_loop_with(
    plant: &DiscreteTransferFunction,
    cfg: &IpdConfig,
    y_ref: &[f64],
    servo: bool,
    u_limits: Option<Limits>,
    opts: &LoopOptions,
) -> Result<SimTrace> {
    cfg.validate()?;
    if (plant.ts() - cfg.ts).abs() > 1e-12 * cfg.ts {
        return Err(Error::SampleTimeMismatch {
            left: plant.ts(),
            right: cfg.ts,
        });
    }
    if let Some(d) = &opts.output_disturbance {
        if d.len() != y_ref.len() {
            return Err(Error::InvalidParameter(format!(
                "disturbance length {} differs from reference length {}",
                d.len(),
                y_ref.len()
            )));
        }
    }
    let mut state = PlantState::new(plant)?;
    let mut ctrl = IpdController::new(*cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.noise_seed);
    let mut trace = SimTrace::new(cfg.ts);

    for (k, &r) in y_ref.iter().enumerate() {
        let mut y = state.output();
        if let Some(d) = &opts.output_disturbance {
            y += d[k];
        }
        if !y.is_finite() || y.abs() > DIVERGENCE_LIMIT {
            trace.diverged = true;
            break;
        }
        let y_meas = if opts.noise_amplitude > 0.0 {
            y + rng.random_range(-opts.noise_amplitude..=opts.noise_amplitude)
        } else {
            y
        };
        let mut u = ctrl.step(y_meas, r, servo);
        if let Some(lim) = u_limits {
            u = lim.clamp(u);
            ctrl.record_applied(u);
        }
        state.input(u);
        trace.push(r, y, u);
    }
    Ok(trace)
}

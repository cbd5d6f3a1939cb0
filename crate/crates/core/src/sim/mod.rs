//! Discrete-time closed-loop simulation of iPD loops against LTI plants.

mod cascade;
mod metrics;
mod plant;
mod profile;
mod single;
mod trace;

pub use cascade::{simulate_cascade, simulate_cascade_inner, CascadeSpec};
pub use metrics::{compute_metrics, Metrics};
pub use plant::PlantState;
pub use profile::{speed_profile, SpeedProfile, TOP_SPEED};
pub use single::{simulate_loop, simulate_loop_with, LoopOptions};
pub use trace::{InnerTrace, SimTrace};

/// Outputs beyond this magnitude abort a run and flag it as diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

/// Inclusive saturation interval for the control action.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    pub min: f64,
    pub max: f64,
}

impl Limits {
    pub fn new(min: f64, max: f64) -> crate::Result<Self> {
        if !(min <= max) {
            return Err(crate::Error::InvalidParameter(format!(
                "saturation interval [{min}, {max}] is empty"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn symmetric(bound: f64) -> Self {
        Self {
            min: -bound.abs(),
            max: bound.abs(),
        }
    }

    pub fn clamp(&self, u: f64) -> f64 {
        u.clamp(self.min, self.max)
    }
}

/// Unit step of `len` samples, zero for the first `delay` samples.
pub fn step_reference(len: usize, delay: usize, amplitude: f64) -> Vec<f64> {
    (0..len).map(|k| if k >= delay { amplitude } else { 0.0 }).collect()
}

use serde::{Deserialize, Serialize};

use super::SimTrace;
use crate::error::{Error, Result};

/// Tracking and smoothness figures of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Ts·Σ|e_k|, in output units × seconds.
    pub iae: f64,
    /// Σ|u_k − 2u_{k−1} + u_{k−2}|, no time scaling.
    pub iaudd: f64,
    /// Largest negative error (output ahead of the reference) inside the
    /// windows that follow rising reference changes.
    pub os: f64,
}

pub fn compute_metrics(trace: &SimTrace) -> Result<Metrics> {
    if trace.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "metrics need at least 3 samples, trace has {}",
            trace.len()
        )));
    }
    let iae = trace.ts * trace.e.iter().map(|e| e.abs()).sum::<f64>();
    let iaudd = trace
        .u
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs())
        .sum();
    let mut os = 0.0_f64;
    let mut in_window = false;
    // runs start from rest, so the reference before the first sample is 0
    for k in 0..trace.len() {
        let prev = if k == 0 { 0.0 } else { trace.y_ref[k - 1] };
        let cur = trace.y_ref[k];
        if cur > prev {
            in_window = true;
        } else if cur < prev {
            in_window = false;
        }
        if in_window {
            os = os.max(-trace.e[k]);
        }
    }
    Ok(Metrics { iae, iaudd, os })
}

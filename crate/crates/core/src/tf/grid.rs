use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Sampled frequency axis in rad/s, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let g = Self {
            omega_min,
            omega_max,
            points,
            spacing,
        };
        g.check()?;
        Ok(g)
    }

    /// Logarithmic grid from 2π/(10⁴·Ts) up to the Nyquist frequency.
    pub fn default_for(ts: f64) -> Self {
        Self::with_points(ts, DEFAULT_GRID_POINTS)
    }

    pub fn with_points(ts: f64, points: usize) -> Self {
        Self {
            omega_min: 2.0 * PI / (1e4 * ts),
            omega_max: PI / ts,
            points,
            spacing: Spacing::Logarithmic,
        }
    }

    /// Same upper end and density, new lower cutoff.
    pub fn with_cutoff(&self, omega_min: f64) -> Self {
        Self { omega_min, ..*self }
    }

    fn check(&self) -> Result<()> {
        if !(self.omega_min > 0.0 && self.omega_min.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "omega_min must be positive, got {}",
                self.omega_min
            )));
        }
        if !(self.omega_max > self.omega_min && self.omega_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "omega_max ({}) must exceed omega_min ({})",
                self.omega_max, self.omega_min
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidGrid("at least two points are required".into()));
        }
        Ok(())
    }

    /// Checks the grid against a sample time (upper end at most π/Ts).
    pub fn validate_for(&self, ts: f64) -> Result<()> {
        self.check()?;
        let nyq = PI / ts;
        if self.omega_max > nyq * (1.0 + 1e-12) {
            return Err(Error::InvalidGrid(format!(
                "omega_max {} exceeds the Nyquist frequency {}",
                self.omega_max, nyq
            )));
        }
        Ok(())
    }

    pub fn omegas(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        let mut w: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| self.omega_min + (self.omega_max - self.omega_min) * i as f64 / last)
                .collect(),
            Spacing::Logarithmic => {
                let (a, b) = (self.omega_min.ln(), self.omega_max.ln());
                (0..n).map(|i| (a + (b - a) * i as f64 / last).exp()).collect()
            }
        };
        w[0] = self.omega_min;
        w[n - 1] = self.omega_max;
        w
    }
}

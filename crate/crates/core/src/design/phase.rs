//! Phase crossover detection and the phase-condition line.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tf::{DiscreteTransferFunction, FrequencyGrid, Spacing};

const CROSSOVER_RTOL: f64 = 1e-10;
/// Points used to track the plant phase from the bottom of the grid up to
/// an evaluation frequency.
const PHASE_TRACK_POINTS: usize = 2048;

fn wrap(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Maps the first phase sample into (−3π/2, π/2] so that low-pass plants
/// with negative or integrating low-frequency behavior start below zero.
fn start_branch(p: f64) -> f64 {
    let mut y = wrap(p);
    if y > PI / 2.0 {
        y -= 2.0 * PI;
    }
    y
}

/// Continuous phase along increasing frequencies.
pub fn unwrapped_phase(tf: &DiscreteTransferFunction, omegas: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(omegas.len());
    for (i, &w) in omegas.iter().enumerate() {
        let raw = tf.eval_freq(w)?.arg();
        let p = if i == 0 {
            start_branch(raw)
        } else {
            let prev = out[i - 1];
            prev + wrap(raw - prev)
        };
        out.push(p);
    }
    Ok(out)
}

/// Smallest frequency on `grid` where the unwrapped phase falls through −π,
/// refined by bisection. `None` if the phase never crosses.
pub fn phase_crossover(tf: &DiscreteTransferFunction, grid: &FrequencyGrid) -> Result<Option<f64>> {
    grid.validate_for(tf.ts())?;
    let w = grid.omegas();
    let ph = unwrapped_phase(tf, &w)?;
    let target = -PI;
    let tol = 1e-12;
    for k in 1..w.len() {
        if ph[k - 1] > target + tol && ph[k] <= target + tol {
            let (mut lo, mut hi) = (w[k - 1], w[k]);
            let anchor = ph[k - 1];
            while hi - lo > CROSSOVER_RTOL * hi {
                let mid = 0.5 * (lo + hi);
                let raw = tf.eval_freq(mid)?.arg();
                let p = anchor + wrap(raw - anchor);
                if p <= target + tol {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
    }
    Ok(None)
}

/// Unwrapped phase of `tf` at `omega`, tracked from `omega_start`.
pub(crate) fn phase_at(tf: &DiscreteTransferFunction, omega_start: f64, omega: f64) -> Result<f64> {
    if omega <= omega_start {
        return unwrapped_phase(tf, &[omega]).map(|v| v[0]);
    }
    let g = FrequencyGrid::new(omega_start, omega, PHASE_TRACK_POINTS, Spacing::Logarithmic)?;
    Ok(*unwrapped_phase(tf, &g.omegas())?.last().unwrap())
}

/// Phase of 1/((C + (1 − C)e^{−iθ})(1 − e^{−iθ})) at θ = ωTs, on the
/// branch continuous from θ → 0⁺.
fn filter_integrator_phase(c: f64, theta: f64) -> f64 {
    let f = c + (1.0 - c) * Complex64::from_polar(1.0, -theta);
    -f.arg() - (PI / 2.0 - theta / 2.0)
}

/// Intermediate quantities of the phase line at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseLineTerms {
    /// cos(ωTs) − sin(ωTs)/tan(φ); infinite when tan(φ) = 0.
    pub w: f64,
    pub omega: f64,
    /// φ: phase of G/((C + (1 − C)z⁻¹)(1 − z⁻¹)) at ω.
    pub inner_phase: f64,
}

/// Computes W at `omega` given the plant phase there.
fn terms_from_phase(c: f64, ts: f64, omega: f64, plant_phase: f64) -> PhaseLineTerms {
    let theta = omega * ts;
    let phi = plant_phase + filter_integrator_phase(c, theta);
    let (s, co) = phi.sin_cos();
    let w = if co.abs() < 1e-15 {
        // tan → ∞
        theta.cos()
    } else if s == 0.0 {
        f64::INFINITY
    } else {
        theta.cos() - theta.sin() * co / s
    };
    PhaseLineTerms {
        w,
        omega,
        inner_phase: phi,
    }
}

pub fn phase_line_terms(
    g: &DiscreteTransferFunction,
    c: f64,
    omega: f64,
    omega_start: f64,
) -> Result<PhaseLineTerms> {
    let plant_phase = phase_at(g, omega_start, omega)?;
    Ok(terms_from_phase(c, g.ts(), omega, plant_phase))
}

/// Which side of the line `a·Kp + b·Kd + c0 = 0` is feasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineSide {
    /// a·Kp + b·Kd + c0 > 0
    Positive,
    /// a·Kp + b·Kd + c0 < 0
    Negative,
    /// Probing found no sign change; the line is not used as a constraint.
    Undetermined,
}

/// Phase-condition boundary (Kd + 1)(W − 1) = Kp·Ts·(C − W(C − 1)) in the
/// form a·Kp + b·Kd + c0 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseLine {
    pub a: f64,
    pub b: f64,
    pub c0: f64,
    pub feasible: LineSide,
    pub terms: PhaseLineTerms,
}

impl PhaseLine {
    fn value(&self, kp: f64, kd: f64) -> f64 {
        self.a * kp + self.b * kd + self.c0
    }

    pub fn is_vertical(&self) -> bool {
        self.b == 0.0
    }

    /// Kd = slope·Kp + intercept, when the line is not vertical.
    pub fn slope(&self) -> Option<f64> {
        (!self.is_vertical()).then(|| -self.a / self.b)
    }

    pub fn intercept(&self) -> Option<f64> {
        (!self.is_vertical()).then(|| -self.c0 / self.b)
    }

    pub fn kd_at(&self, kp: f64) -> Option<f64> {
        Some(self.slope()? * kp + self.intercept()?)
    }

    pub fn is_feasible(&self, kp: f64, kd: f64) -> bool {
        match self.feasible {
            LineSide::Positive => self.value(kp, kd) > 0.0,
            LineSide::Negative => self.value(kp, kd) < 0.0,
            LineSide::Undetermined => true,
        }
    }
}

/// Margin of the phase condition ∠(iPD·G) + π at one frequency, given the
/// inner phase φ there. Positive means satisfied.
pub(crate) fn phase_condition_margin(kp: f64, kd: f64, c: f64, ts: f64, omega: f64, inner_phase: f64) -> f64 {
    let kps = kp * ts;
    let a = kps * c + kd + 1.0;
    let b = kps * (c - 1.0) + kd + 1.0;
    let num = a - b * Complex64::from_polar(1.0, -omega * ts);
    num.arg() + inner_phase + PI
}

fn line_from_terms(c: f64, ts: f64, terms: PhaseLineTerms) -> (f64, f64, f64) {
    let w = terms.w;
    if w.is_infinite() {
        // divide through by W and let W → ∞
        (ts * (c - 1.0), 1.0, 1.0)
    } else {
        (-ts * (c - w * (c - 1.0)), w - 1.0, w - 1.0)
    }
}

/// Phase-condition line at `omega`, with the feasible side found by
/// evaluating the phase condition on both sides of the line near
/// Kp = `probe_kp` (other probe points along the line are tried if that
/// one is inconclusive).
pub fn phase_line(
    g: &DiscreteTransferFunction,
    c: f64,
    omega: f64,
    omega_start: f64,
    probe_kp: f64,
) -> Result<PhaseLine> {
    let ts = g.ts();
    if !(omega > 0.0 && omega < g.nyquist()) {
        return Err(Error::InvalidParameter(format!(
            "phase line frequency {omega} must lie in (0, π/Ts)"
        )));
    }
    let terms = phase_line_terms(g, c, omega, omega_start)?;
    let (a, b, c0) = line_from_terms(c, ts, terms);
    let mut line = PhaseLine {
        a,
        b,
        c0,
        feasible: LineSide::Undetermined,
        terms,
    };

    let norm = (a * a + b * b).sqrt();
    if norm == 0.0 {
        return Ok(line);
    }
    let (nx, ny) = (a / norm, b / norm);
    let margin = |kp: f64, kd: f64| phase_condition_margin(kp, kd, c, ts, omega, terms.inner_phase);

    let base = if probe_kp != 0.0 { probe_kp } else { 1.0 / ts };
    for scale in [1.0, 2.0, 0.5, 4.0, 0.25, 10.0, 0.1] {
        let (px, py) = if b != 0.0 {
            let kp = base * scale;
            (kp, -(a * kp + c0) / b)
        } else {
            (-c0 / a, scale)
        };
        let step = 1e-6 * (1.0 + px.abs() + py.abs());
        let plus = margin(px + step * nx, py + step * ny) > 0.0;
        let minus = margin(px - step * nx, py - step * ny) > 0.0;
        if plus != minus {
            line.feasible = if plus { LineSide::Positive } else { LineSide::Negative };
            break;
        }
    }
    Ok(line)
}

/// Plant-free necessary condition 2(Kd + 1) > −Kp·Ts·(2C − 1), i.e. the
/// half-plane above Kd = slope·Kp + intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplifiedPhaseLine {
    pub slope: f64,
    pub intercept: f64,
    pub c: f64,
    pub ts: f64,
}

impl SimplifiedPhaseLine {
    pub fn is_satisfied(&self, kp: f64, kd: f64) -> bool {
        2.0 * (kd + 1.0) > -kp * self.ts * (2.0 * self.c - 1.0)
    }
}

pub fn simplified_phase_line(c: f64, ts: f64) -> SimplifiedPhaseLine {
    SimplifiedPhaseLine {
        slope: -ts * (2.0 * c - 1.0) / 2.0,
        intercept: -1.0,
        c,
        ts,
    }
}

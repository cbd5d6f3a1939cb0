//! Module (magnitude) condition as an ellipse in the (Kp·Ts, Kd) plane.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::phase::phase_crossover;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};
use crate::tf::{DiscreteTransferFunction, FrequencyGrid};

/// B = cos(ωTs), C′ = C − 1, C″ = 2C − 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuleConditionTerms {
    pub b: f64,
    pub c_prime: f64,
    pub c_dprime: f64,
    pub ts: f64,
}

impl ModuleConditionTerms {
    pub fn new(c: f64, ts: f64, omega: f64) -> Self {
        Self {
            b: (omega * ts).cos(),
            c_prime: c - 1.0,
            c_dprime: 2.0 * c - 1.0,
            ts,
        }
    }

    /// K′p = Kp·Ts.
    pub fn kp_scaled(&self, kp: f64) -> f64 {
        kp * self.ts
    }
}

/// q11·K′p² + 2·q12·K′p·Kd + q22·Kd² < rhs, with K′p = Kp·Ts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub q11: f64,
    pub q12: f64,
    pub q22: f64,
    pub rhs: f64,
    pub ts: f64,
    /// Frequency the form was evaluated at (rad/s).
    pub omega: f64,
    /// Plant magnitude used in the right-hand side.
    pub plant_magnitude: f64,
}

impl Ellipse {
    pub fn from_magnitude(alpha: f64, c: f64, ts: f64, omega: f64, magnitude: f64) -> Result<Self> {
        if magnitude == 0.0 {
            return Err(Error::DegenerateEllipse { omega });
        }
        if !magnitude.is_finite() {
            return Err(Error::NonFiniteMagnitude { omega });
        }
        let t = ModuleConditionTerms::new(c, ts, omega);
        let (b, cp, cpp) = (t.b, t.c_prime, t.c_dprime);
        let q11 = (2.0 * c * cp + 1.0) - 2.0 * c * cp * b;
        let q12 = cpp * (1.0 - b);
        let q22 = 2.0 * (1.0 - b);
        let scale = alpha * ts / magnitude;
        let rhs = scale * scale * (c * c + cp * cp - 2.0 * c * cp * b) * (2.0 - 2.0 * b);
        Ok(Self {
            q11,
            q12,
            q22,
            rhs,
            ts,
            omega,
            plant_magnitude: magnitude,
        })
    }

    pub fn quadratic(&self, kp: f64, kd: f64) -> f64 {
        let x = kp * self.ts;
        self.q11 * x * x + 2.0 * self.q12 * x * kd + self.q22 * kd * kd
    }

    pub fn contains(&self, kp: f64, kd: f64) -> bool {
        self.quadratic(kp, kd) < self.rhs
    }

    fn det(&self) -> f64 {
        self.q11 * self.q22 - self.q12 * self.q12
    }

    /// `points` samples of the boundary, as (Kp, Kd).
    pub fn boundary(&self, points: usize) -> Vec<(f64, f64)> {
        (0..points)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / points as f64;
                let (s, c) = t.sin_cos();
                let denom = self.q11 * c * c + 2.0 * self.q12 * c * s + self.q22 * s * s;
                let r = (self.rhs / denom).sqrt();
                (r * c / self.ts, r * s)
            })
            .collect()
    }

    /// Half-widths (Kp, Kd) of the axis-aligned bounding box.
    pub fn extents(&self) -> (f64, f64) {
        let det = self.det();
        (
            (self.rhs * self.q22 / det).sqrt() / self.ts,
            (self.rhs * self.q11 / det).sqrt(),
        )
    }
}

/// Ellipse of the complete module condition at `omega`.
pub fn module_ellipse(
    g: &DiscreteTransferFunction,
    alpha: f64,
    c: f64,
    omega: f64,
) -> Result<Ellipse> {
    if !(omega > 0.0 && omega <= g.nyquist()) {
        return Err(Error::InvalidParameter(format!(
            "module ellipse frequency {omega} must lie in (0, π/Ts]"
        )));
    }
    let mag = g.eval_freq(omega)?.norm();
    Ellipse::from_magnitude(alpha, c, g.ts(), omega, mag)
}

/// Inputs shared by the module-condition variants.
pub struct ModuleContext<'a> {
    pub g: &'a DiscreteTransferFunction,
    pub alpha: f64,
    pub c: f64,
    /// Frequency the ellipse is evaluated at (B = cos(ω₀Ts)).
    pub omega0: f64,
    /// Phase crossover of G alone.
    pub omega1: Option<f64>,
    pub grid: &'a FrequencyGrid,
}

/// How |G| is chosen in the module condition.
pub trait ModuleBound: Named + Send + Sync {
    fn ellipse(&self, ctx: &ModuleContext<'_>) -> Result<Ellipse>;
}

/// |G(ω₀)|.
pub struct Complete;
/// max over the grid of |G|; never larger than the complete set.
pub struct Conservative;
/// |G(ω₁)|; larger than the complete set for low-pass plants.
pub struct Permissive;

impl Named for Complete {
    fn name(&self) -> &'static str {
        "complete"
    }
}
impl ModuleBound for Complete {
    fn ellipse(&self, ctx: &ModuleContext<'_>) -> Result<Ellipse> {
        module_ellipse(ctx.g, ctx.alpha, ctx.c, ctx.omega0)
    }
}

impl Named for Conservative {
    fn name(&self) -> &'static str {
        "conservative"
    }
}
impl ModuleBound for Conservative {
    fn ellipse(&self, ctx: &ModuleContext<'_>) -> Result<Ellipse> {
        let mut mag = 0.0_f64;
        for w in ctx.grid.omegas() {
            let m = ctx.g.eval_freq(w)?.norm();
            if !m.is_finite() {
                return Err(Error::NonFiniteMagnitude { omega: w });
            }
            mag = mag.max(m);
        }
        // the evaluation frequency itself may fall between grid points
        mag = mag.max(ctx.g.eval_freq(ctx.omega0)?.norm());
        Ellipse::from_magnitude(ctx.alpha, ctx.c, ctx.g.ts(), ctx.omega0, mag)
    }
}

impl Named for Permissive {
    fn name(&self) -> &'static str {
        "permissive"
    }
}
impl ModuleBound for Permissive {
    fn ellipse(&self, ctx: &ModuleContext<'_>) -> Result<Ellipse> {
        let w1 = ctx.omega1.ok_or(Error::CrossoverNotFound { what: "G(z)" })?;
        let mag = ctx.g.eval_freq(w1)?.norm();
        Ellipse::from_magnitude(ctx.alpha, ctx.c, ctx.g.ts(), ctx.omega0, mag)
    }
}

pub fn module_bounds() -> Registry<dyn ModuleBound> {
    let mut r: Registry<dyn ModuleBound> = Registry::new("module condition");
    r.register(Box::new(Complete));
    r.register(Box::new(Conservative));
    r.register(Box::new(Permissive));
    r
}

/// Phase crossover of G/(C + (1 − C)z⁻¹).
pub(crate) fn filtered_plant_crossover(
    g: &DiscreteTransferFunction,
    c: f64,
    grid: &FrequencyGrid,
) -> Result<Option<f64>> {
    let filt = DiscreteTransferFunction::new(vec![1.0], vec![c, 1.0 - c], g.ts())?;
    phase_crossover(&g.series(&filt)?, grid)
}

/// Module-condition ellipse for a named variant, computing ω₀ and ω₁ on
/// `grid`.
pub fn simplified_module_bound(
    g: &DiscreteTransferFunction,
    alpha: f64,
    c: f64,
    variant: &dyn ModuleBound,
    grid: &FrequencyGrid,
) -> Result<Ellipse> {
    let omega0 = filtered_plant_crossover(g, c, grid)?
        .ok_or(Error::CrossoverNotFound { what: "G(z)/(C + (1-C)z^-1)" })?;
    let omega1 = phase_crossover(g, grid)?;
    variant.ellipse(&ModuleContext {
        g,
        alpha,
        c,
        omega0,
        omega1,
        grid,
    })
}

//! Stability-region assembly and closed-loop verification over a Kp–Kd grid.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::module::{filtered_plant_crossover, module_ellipse, Conservative, Ellipse, ModuleBound, ModuleContext, Permissive};
use super::phase::{phase_crossover, phase_line, simplified_phase_line, PhaseLine, SimplifiedPhaseLine};
use crate::error::{Error, Result};
use crate::mfc::{compensator_tf, ipd_open_loop_tf, IpdConfig, Order};
use crate::tf::{poly, DiscreteTransferFunction, FrequencyGrid};

pub const DEFAULT_RESOLUTION: usize = 101;

/// Inputs to [`build_region`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub alpha: f64,
    pub c: f64,
    pub ts: f64,
    pub n: Order,
    pub kp_range: (f64, f64),
    pub kd_range: (f64, f64),
    /// Samples per axis.
    pub resolution: usize,
    pub grid: FrequencyGrid,
    /// Kp where the phase line's feasible side is probed; defaults to the
    /// middle of `kp_range`.
    pub probe_kp: Option<f64>,
}

impl RegionSpec {
    pub fn new(alpha: f64, c: f64, ts: f64, n: Order, kp_range: (f64, f64), kd_range: (f64, f64)) -> Self {
        Self {
            alpha,
            c,
            ts,
            n,
            kp_range,
            kd_range,
            resolution: DEFAULT_RESOLUTION,
            grid: FrequencyGrid::default_for(ts),
            probe_kp: None,
        }
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_grid(mut self, grid: FrequencyGrid) -> Self {
        self.grid = grid;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::InvalidParameter("region resolution must be at least 2".into()));
        }
        for (name, (lo, hi)) in [("kp", self.kp_range), ("kd", self.kd_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidParameter(format!("{name} range [{lo}, {hi}] is empty")));
            }
        }
        Ok(())
    }

    /// Axis samples, evenly spaced and including both ends.
    pub fn axis(range: (f64, f64), resolution: usize) -> Vec<f64> {
        let step = (range.1 - range.0) / (resolution - 1) as f64;
        (0..resolution).map(|i| range.0 + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseConditionKind {
    /// Module ellipse and phase line.
    Complete,
    /// Second-order controllers: module ellipse and the plant-free
    /// half-plane only.
    SimplifiedOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub kp: f64,
    pub kd: f64,
    pub predicted: bool,
    pub stable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityRegion {
    pub spec: RegionSpec,
    /// Phase crossover of G/(C + (1 − C)z⁻¹).
    pub omega0: Option<f64>,
    /// Phase crossover of G.
    pub omega1: Option<f64>,
    pub ellipse: Ellipse,
    pub line: Option<PhaseLine>,
    pub simplified_line: SimplifiedPhaseLine,
    pub conservative: Option<Ellipse>,
    pub permissive: Option<Ellipse>,
    pub kind: PhaseConditionKind,
    /// Set when ω₀ was not found and the ellipse was taken at the
    /// frequency of largest |G| instead.
    pub fallback: bool,
    pub points: Vec<GridPoint>,
}

impl StabilityRegion {
    pub fn predicts(&self, kp: f64, kd: f64) -> bool {
        self.ellipse.contains(kp, kd) && self.phase_ok(kp, kd)
    }

    /// The phase part of the prediction alone.
    pub fn phase_ok(&self, kp: f64, kd: f64) -> bool {
        match self.kind {
            PhaseConditionKind::Complete => self.line.as_ref().is_none_or(|l| l.is_feasible(kp, kd)),
            PhaseConditionKind::SimplifiedOnly => self.simplified_line.is_satisfied(kp, kd),
        }
    }

    pub fn config_at(&self, kp: f64, kd: f64) -> IpdConfig {
        IpdConfig {
            n: self.spec.n,
            alpha: self.spec.alpha,
            kp,
            kd,
            c: self.spec.c,
            ts: self.spec.ts,
        }
    }

    pub fn stable_points(&self) -> impl Iterator<Item = &GridPoint> {
        self.points.iter().filter(|p| p.stable)
    }

    pub fn predicted_points(&self) -> impl Iterator<Item = &GridPoint> {
        self.points.iter().filter(|p| p.predicted)
    }

    /// Fraction of predicted points that verify stable; `None` if nothing
    /// is predicted.
    pub fn prediction_precision(&self) -> Option<f64> {
        let predicted = self.predicted_points().count();
        (predicted > 0).then(|| self.predicted_points().filter(|p| p.stable).count() as f64 / predicted as f64)
    }
}

/// Relative tolerance for treating z = 1 as a root of a plant numerator.
const UNIT_ROOT_RTOL: f64 = 1e-12;

/// Closed-loop stability of the error-feedback loop for one configuration.
///
/// A plant with a zero at z = 1 (a differentiated output) cancels the
/// controller integrator exactly; that pair is removed before the closed
/// loop is formed, since otherwise the hidden mode sits on the unit circle
/// for every gain. No other cancellation is made.
pub fn verify_stable(g: &DiscreteTransferFunction, cfg: &IpdConfig) -> bool {
    let check = || -> Result<bool> {
        let comp = compensator_tf(cfg)?;
        let l = match (
            poly::deflate_unit_root(g.num(), UNIT_ROOT_RTOL),
            poly::deflate_unit_root(comp.den(), UNIT_ROOT_RTOL),
        ) {
            (Some(gn), Some(cd)) => {
                let g = DiscreteTransferFunction::new(gn, g.den().to_vec(), g.ts())?;
                let comp = DiscreteTransferFunction::new(comp.num().to_vec(), cd, comp.ts())?;
                comp.series(&g)?
            }
            _ => ipd_open_loop_tf(g, cfg)?,
        };
        l.feedback(&DiscreteTransferFunction::constant(1.0, g.ts())?)?.is_stable()
    };
    check().unwrap_or(false)
}

fn max_magnitude_frequency(g: &DiscreteTransferFunction, grid: &FrequencyGrid) -> Result<f64> {
    let mut best = (f64::NEG_INFINITY, grid.omega_min);
    for w in grid.omegas() {
        let m = g.eval_freq(w)?.norm();
        if !m.is_finite() {
            return Err(Error::NonFiniteMagnitude { omega: w });
        }
        if m > best.0 {
            best = (m, w);
        }
    }
    Ok(best.1)
}

pub fn build_region(g: &DiscreteTransferFunction, spec: &RegionSpec) -> Result<StabilityRegion> {
    spec.validate()?;
    if (g.ts() - spec.ts).abs() > 1e-12 * spec.ts {
        return Err(Error::SampleTimeMismatch {
            left: g.ts(),
            right: spec.ts,
        });
    }
    let template = IpdConfig::new(spec.n, spec.alpha, 0.0, 0.0, spec.c, spec.ts)?;
    spec.grid.validate_for(spec.ts)?;

    let omega0 = filtered_plant_crossover(g, spec.c, &spec.grid)?;
    let omega1 = phase_crossover(g, &spec.grid)?;
    let kind = match spec.n {
        Order::First => PhaseConditionKind::Complete,
        Order::Second => PhaseConditionKind::SimplifiedOnly,
    };

    let (eval_omega, fallback) = match omega0 {
        Some(w) => (w, false),
        None => {
            let w = max_magnitude_frequency(g, &spec.grid)?;
            warn!("no phase crossover of G/(C+(1-C)z^-1) on the grid; module condition taken at max |G| (ω = {w})");
            (w, true)
        }
    };
    let ellipse = module_ellipse(g, spec.alpha, spec.c, eval_omega)?;

    let probe_kp = spec.probe_kp.unwrap_or(0.5 * (spec.kp_range.0 + spec.kp_range.1));
    let line = match (kind, omega0) {
        (PhaseConditionKind::Complete, Some(w0)) => {
            Some(phase_line(g, spec.c, w0 / 2.0, spec.grid.omega_min, probe_kp)?)
        }
        _ => None,
    };

    let ctx = ModuleContext {
        g,
        alpha: spec.alpha,
        c: spec.c,
        omega0: eval_omega,
        omega1,
        grid: &spec.grid,
    };
    let conservative = Conservative.ellipse(&ctx).ok();
    let permissive = Permissive.ellipse(&ctx).ok();

    let mut region = StabilityRegion {
        spec: spec.clone(),
        omega0,
        omega1,
        ellipse,
        line,
        simplified_line: simplified_phase_line(spec.c, spec.ts),
        conservative,
        permissive,
        kind,
        fallback,
        points: Vec::new(),
    };

    let kps = RegionSpec::axis(spec.kp_range, spec.resolution);
    let kds = RegionSpec::axis(spec.kd_range, spec.resolution);
    let cells: Vec<(f64, f64)> = kds
        .iter()
        .flat_map(|&kd| kps.iter().map(move |&kp| (kp, kd)))
        .collect();
    let points = cells
        .par_iter()
        .map(|&(kp, kd)| GridPoint {
            kp,
            kd,
            predicted: region.predicts(kp, kd),
            stable: verify_stable(g, &template.with_gains(kp, kd)),
        })
        .collect();
    region.points = points;
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_includes_both_ends() {
        let a = RegionSpec::axis((-1.0, 1.0), 5);
        assert_eq!(a, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn rejects_empty_ranges() {
        let g = DiscreteTransferFunction::delay(1, 0.1).unwrap();
        let spec = RegionSpec::new(10.0, 2.0, 0.1, Order::First, (1.0, 1.0), (0.0, 1.0));
        assert!(build_region(&g, &spec).is_err());
    }

    #[test]
    fn every_point_is_labelled() {
        let g = DiscreteTransferFunction::new(vec![0.0, 0.1], vec![1.0, -0.9], 0.1).unwrap();
        let spec = RegionSpec::new(20.0, 2.0, 0.1, Order::First, (0.0, 20.0), (0.0, 5.0)).with_resolution(11);
        let r = build_region(&g, &spec).unwrap();
        assert_eq!(r.points.len(), 121);
        for p in &r.points {
            assert_eq!(p.predicted, r.predicts(p.kp, p.kd));
        }
    }
}

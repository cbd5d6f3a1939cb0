pub mod alpha;
pub mod metrics;
pub mod region;
pub mod reproduce;
pub mod simulate;

use mfc_design::design::{alpha_bound, alpha_rules, AlphaBound};
use mfc_design::tf::grid::DEFAULT_GRID_POINTS;
use mfc_design::tf::Spacing;
use mfc_design::{FrequencyGrid, Order};

use crate::config::DesignOpts;
use crate::error::{CliError, CliResult};
use crate::plant::LoadedPlant;

pub const DEFAULT_MARGIN: f64 = 10.0;

/// Design parameters after layering and defaults.
#[derive(Debug, Clone)]
pub struct Design {
    pub c: f64,
    pub n: Order,
    pub margin: f64,
    pub rule: String,
    pub grid: FrequencyGrid,
    pub alpha_override: Option<f64>,
}

impl Design {
    pub fn resolve(d: &DesignOpts, plant: &LoadedPlant) -> CliResult<Self> {
        let n = Order::try_from(d.order.unwrap_or(1))?;
        let rule = d.rule.clone().unwrap_or_else(|| {
            match n {
                Order::First => "upper-first",
                Order::Second => "upper-second",
            }
            .to_string()
        });
        let rules = alpha_rules();
        let r = rules.get(&rule)?;
        if r.order() != n {
            return Err(CliError::Usage(format!(
                "rule '{rule}' is for order {}, but the controller order is {}",
                r.order().as_usize(),
                n.as_usize()
            )));
        }
        let ts = plant.tf.ts();
        let points = d.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
        let base = FrequencyGrid::with_points(ts, points);
        let grid = FrequencyGrid::new(
            d.omega_min.unwrap_or(base.omega_min),
            d.omega_max.unwrap_or(base.omega_max),
            points,
            Spacing::Logarithmic,
        )?;
        grid.validate_for(ts)?;
        Ok(Self {
            c: d.c.unwrap_or(plant.default_c),
            n,
            margin: d.margin.unwrap_or(DEFAULT_MARGIN),
            rule,
            grid,
            alpha_override: d.alpha,
        })
    }

    pub fn bound(&self, plant: &LoadedPlant) -> CliResult<AlphaBound> {
        let rules = alpha_rules();
        Ok(alpha_bound(&plant.tf, self.c, rules.get(&self.rule)?, &self.grid, self.margin)?)
    }

    /// The alpha used for design: the override if given, else bound × margin.
    pub fn alpha(&self, plant: &LoadedPlant) -> CliResult<f64> {
        match self.alpha_override {
            Some(a) => Ok(a),
            None => Ok(self.bound(plant)?.alpha_design),
        }
    }
}

/// `n` logarithmically spaced values from `lo` to `hi`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

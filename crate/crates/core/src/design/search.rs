//! Simulation-based selection of the best verified-stable configuration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::region::StabilityRegion;
use crate::error::{Error, Result};
use crate::mfc::IpdConfig;
use crate::registry::{Named, Registry};
use crate::sim::{compute_metrics, simulate_loop, Limits, Metrics};
use crate::tf::DiscreteTransferFunction;

/// Scalar to minimize over simulated runs.
pub trait Criterion: Named + Send + Sync {
    fn score(&self, m: &Metrics) -> f64;
}

pub struct Iae;
pub struct Iaudd;
pub struct Overshoot;

impl Named for Iae {
    fn name(&self) -> &'static str {
        "iae"
    }
}
impl Criterion for Iae {
    fn score(&self, m: &Metrics) -> f64 {
        m.iae
    }
}

impl Named for Iaudd {
    fn name(&self) -> &'static str {
        "iaudd"
    }
}
impl Criterion for Iaudd {
    fn score(&self, m: &Metrics) -> f64 {
        m.iaudd
    }
}

impl Named for Overshoot {
    fn name(&self) -> &'static str {
        "os"
    }
}
impl Criterion for Overshoot {
    fn score(&self, m: &Metrics) -> f64 {
        m.os
    }
}

pub fn criteria() -> Registry<dyn Criterion> {
    let mut r: Registry<dyn Criterion> = Registry::new("criterion");
    r.register(Box::new(Iae));
    r.register(Box::new(Iaudd));
    r.register(Box::new(Overshoot));
    r
}

/// Task every candidate is simulated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub y_ref: Vec<f64>,
    pub servo: bool,
    pub u_limits: Option<Limits>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: IpdConfig,
    pub score: f64,
    pub metrics: Metrics,
    /// Candidates simulated to completion.
    pub evaluated: usize,
}

/// Simulates every verified-stable grid point and returns the minimizer of
/// `criterion`. Ties go to the lower Kd, then the lower Kp. Diverged runs
/// are skipped.
pub fn best_config_search(
    region: &StabilityRegion,
    plant: &DiscreteTransferFunction,
    criterion: &dyn Criterion,
    sim: &SimSpec,
) -> Result<SearchResult> {
    let configs: Vec<IpdConfig> = region.stable_points().map(|p| region.config_at(p.kp, p.kd)).collect();
    search_configs(&configs, plant, criterion, sim)
}

/// Same as [`best_config_search`] over an explicit candidate list.
pub fn search_configs(
    configs: &[IpdConfig],
    plant: &DiscreteTransferFunction,
    criterion: &dyn Criterion,
    sim: &SimSpec,
) -> Result<SearchResult> {
    let runs: Vec<Result<Option<(IpdConfig, Metrics)>>> = configs
        .par_iter()
        .map(|cfg| {
            let trace = simulate_loop(plant, cfg, &sim.y_ref, sim.servo, sim.u_limits)?;
            if trace.diverged {
                return Ok(None);
            }
            Ok(Some((*cfg, compute_metrics(&trace)?)))
        })
        .collect();

    let mut best: Option<SearchResult> = None;
    let mut evaluated = 0;
    for run in runs {
        let Some((config, metrics)) = run? else { continue };
        let score = criterion.score(&metrics);
        if !score.is_finite() {
            continue;
        }
        evaluated += 1;
        let better = match &best {
            None => true,
            Some(b) => {
                score < b.score
                    || (score == b.score
                        && (config.kd < b.config.kd || (config.kd == b.config.kd && config.kp < b.config.kp)))
            }
        };
        if better {
            best = Some(SearchResult {
                config,
                score,
                metrics,
                evaluated: 0,
            });
        }
    }
    let mut best = best.ok_or(Error::NoStableConfiguration)?;
    best.evaluated = evaluated;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::step_reference;

    fn plant() -> DiscreteTransferFunction {
        DiscreteTransferFunction::new(vec![0.0, 0.1], vec![1.0, -0.9], 0.1).unwrap()
    }

    fn spec() -> SimSpec {
        SimSpec {
            y_ref: step_reference(200, 5, 1.0),
            servo: true,
            u_limits: None,
        }
    }

    #[test]
    fn single_candidate_is_returned() {
        let cfg = IpdConfig::first_order(20.0, 5.0, 1.0, 2.0, 0.1).unwrap();
        let r = search_configs(&[cfg], &plant(), &Iae, &spec()).unwrap();
        assert_eq!(r.config, cfg);
        assert_eq!(r.evaluated, 1);
    }

    #[test]
    fn smaller_iae_wins() {
        let g = plant();
        let a = IpdConfig::first_order(20.0, 5.0, 1.0, 2.0, 0.1).unwrap();
        let b = a.with_gains(1.0, 1.0);
        let ia = compute_metrics(&simulate_loop(&g, &a, &spec().y_ref, true, None).unwrap()).unwrap().iae;
        let ib = compute_metrics(&simulate_loop(&g, &b, &spec().y_ref, true, None).unwrap()).unwrap().iae;
        assert_ne!(ia, ib);
        let r = search_configs(&[a, b], &g, &Iae, &spec()).unwrap();
        assert_eq!(r.config, if ia < ib { a } else { b });
    }

    #[test]
    fn ties_prefer_lower_kd_then_kp() {
        let g = plant();
        let a = IpdConfig::first_order(20.0, 5.0, 1.0, 2.0, 0.1).unwrap();
        // identical runs give identical scores
        let r = search_configs(&[a, a], &g, &Iae, &spec()).unwrap();
        assert_eq!(r.config, a);
        assert_eq!(r.evaluated, 2);
    }

    #[test]
    fn empty_candidate_list_errors() {
        assert!(matches!(
            search_configs(&[], &plant(), &Iae, &spec()),
            Err(Error::NoStableConfiguration)
        ));
    }

    #[test]
    fn registry_lists_all_criteria() {
        assert_eq!(criteria().names(), vec!["iae", "iaudd", "os"]);
    }
}

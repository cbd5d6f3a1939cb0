//! Plant presets and JSON plant files.

use std::path::Path;

use mfc_design::plants::{
    self, pendulum_designed_config, table1_inner_config, table1_outer_config, PendulumParams,
    PENDULUM_TS, VEHICLE_TS,
};
use mfc_design::tf::discretizers;
use mfc_design::{DiscreteTransferFunction as Tf, IpdConfig};

use crate::config::PlantOpts;
use crate::error::{CliError, CliResult};

pub const PRESETS: [&str; 5] = ["pendulum", "vehicle", "vehicle-inner", "vehicle-outer", "unity"];

/// A loaded plant plus the defaults that make sense for it.
#[derive(Debug, Clone)]
pub struct LoadedPlant {
    pub name: String,
    pub tf: Tf,
    pub default_c: f64,
    pub kp_range: Option<(f64, f64)>,
    pub kd_range: Option<(f64, f64)>,
    /// Controller used by `simulate` when no gains are given.
    pub controller: Option<IpdConfig>,
}

fn plant_err(name: &str, reason: impl ToString) -> CliError {
    CliError::PlantLoad {
        source_name: name.to_string(),
        reason: reason.to_string(),
    }
}

fn fixed_ts(name: &str, requested: Option<f64>, ts: f64) -> CliResult<()> {
    match requested {
        Some(t) if (t - ts).abs() > 1e-12 * ts => Err(plant_err(
            name,
            format!("the identified model is sampled at {ts} s; --ts {t} is not supported"),
        )),
        _ => Ok(()),
    }
}

pub fn load(opts: &PlantOpts) -> CliResult<LoadedPlant> {
    let name = opts
        .plant
        .as_deref()
        .ok_or_else(|| CliError::Usage("no plant given (use --plant or [plant] in the config file)".into()))?;
    if opts.discretization.is_some() && name != "pendulum" {
        log::warn!("--discretization only applies to the pendulum preset");
    }
    let loaded = match name {
        "pendulum" => {
            let ts = opts.ts.unwrap_or(PENDULUM_TS);
            let method = opts.discretization.as_deref().unwrap_or("zoh");
            let registry = discretizers();
            let d = registry.get(method).map_err(|e| plant_err(name, e))?;
            let tf = plants::pendulum_discrete_with(&PendulumParams::default(), ts, d)
                .map_err(|e| plant_err(name, e))?;
            let controller = ((ts - PENDULUM_TS).abs() < 1e-12).then(pendulum_designed_config);
            LoadedPlant {
                name: name.into(),
                tf,
                default_c: 4.0,
                kp_range: Some((0.0, 150.0)),
                kd_range: Some((0.0, 150.0)),
                controller,
            }
        }
        "vehicle" => {
            fixed_ts(name, opts.ts, VEHICLE_TS)?;
            LoadedPlant {
                name: name.into(),
                tf: plants::vehicle_tf(),
                default_c: 7.5,
                kp_range: None,
                kd_range: None,
                controller: None,
            }
        }
        "vehicle-inner" => {
            fixed_ts(name, opts.ts, VEHICLE_TS)?;
            LoadedPlant {
                name: name.into(),
                tf: plants::vehicle_inner_plant(),
                default_c: 7.5,
                kp_range: Some((0.0, 100.0)),
                kd_range: Some((0.0, 20.0)),
                controller: Some(table1_inner_config()),
            }
        }
        "vehicle-outer" => {
            fixed_ts(name, opts.ts, VEHICLE_TS)?;
            let tf = plants::vehicle_outer_plant(&table1_inner_config()).map_err(|e| plant_err(name, e))?;
            LoadedPlant {
                name: name.into(),
                tf,
                default_c: 3.5,
                kp_range: Some((0.0, 10.0)),
                kd_range: Some((0.0, 5000.0)),
                controller: Some(table1_outer_config()),
            }
        }
        "unity" => {
            let ts = opts.ts.unwrap_or(0.01);
            LoadedPlant {
                name: name.into(),
                tf: Tf::constant(1.0, ts).map_err(|e| plant_err(name, e))?,
                default_c: 1.0,
                kp_range: None,
                kd_range: None,
                controller: None,
            }
        }
        path => from_file(Path::new(path), opts.ts)?,
    };
    Ok(loaded)
}

fn from_file(path: &Path, ts: Option<f64>) -> CliResult<LoadedPlant> {
    let name = path.display().to_string();
    if !path.exists() {
        return Err(plant_err(
            &name,
            format!("no such file, and not a preset ({})", PRESETS.join(", ")),
        ));
    }
    let text = std::fs::read_to_string(path).map_err(|e| plant_err(&name, e))?;
    let tf: Tf = serde_json::from_str(&text).map_err(|e| plant_err(&name, e))?;
    if let Some(t) = ts {
        fixed_ts(&name, Some(t), tf.ts())?;
    }
    Ok(LoadedPlant {
        name,
        tf,
        default_c: 1.0,
        kp_range: None,
        kd_range: None,
        controller: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(plant: &str) -> PlantOpts {
        PlantOpts {
            plant: Some(plant.into()),
            ..Default::default()
        }
    }

    #[test]
    fn every_preset_loads() {
        for p in PRESETS {
            let l = load(&opts(p)).unwrap();
            assert_eq!(l.name, p);
        }
    }

    #[test]
    fn vehicle_rejects_other_sample_times() {
        let o = PlantOpts {
            ts: Some(0.01),
            ..opts("vehicle-inner")
        };
        assert!(matches!(load(&o), Err(CliError::PlantLoad { .. })));
    }

    #[test]
    fn json_plant_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        std::fs::write(&path, r#"{"num":[0.0,0.5],"den":[1.0,-0.5],"ts":0.1}"#).unwrap();
        let l = load(&opts(path.to_str().unwrap())).unwrap();
        assert_eq!(l.tf.den(), &[1.0, -0.5]);
        assert!(matches!(load(&opts("missing.json")), Err(CliError::PlantLoad { .. })));
    }
}

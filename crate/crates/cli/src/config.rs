//! Option groups shared by the command-line parser and the TOML config
//! file. Flags win over the environment, which wins over the file, which
//! wins over built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Field-wise `or`: values already set in `self` win.
pub trait Layer: Sized {
    fn or(self, lower: Self) -> Self;
}

macro_rules! layered {
    ($ty:ident { $($field:ident),* $(,)? }) => {
        impl Layer for $ty {
            fn or(self, lower: Self) -> Self {
                Self { $($field: self.$field.or(lower.$field)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct PlantOpts {
    /// Preset (pendulum, vehicle, vehicle-inner, vehicle-outer, unity) or a
    /// JSON file with num, den and ts
    #[arg(long)]
    pub plant: Option<String>,
    /// Sample time in seconds (pendulum and unity presets)
    #[arg(long)]
    pub ts: Option<f64>,
    /// Discretization of the continuous pendulum model (zoh, tustin)
    #[arg(long)]
    pub discretization: Option<String>,
}
layered!(PlantOpts { plant, ts, discretization });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DesignOpts {
    /// Derivative filter parameter C
    #[arg(long)]
    pub c: Option<f64>,
    /// Ultra-local model order (1 or 2)
    #[arg(long)]
    pub order: Option<u8>,
    /// Safety factor applied to the alpha bound
    #[arg(long)]
    pub margin: Option<f64>,
    /// Alpha-bound rule (exact-first, upper-first, exact-second, upper-second)
    #[arg(long)]
    pub rule: Option<String>,
    /// Frequency grid density
    #[arg(long, env = "MFC_GRID_POINTS")]
    pub grid_points: Option<usize>,
    /// Lower end of the frequency grid, rad/s
    #[arg(long)]
    pub omega_min: Option<f64>,
    /// Upper end of the frequency grid, rad/s (at most the Nyquist frequency)
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Use this alpha instead of bound x margin
    #[arg(long)]
    pub alpha: Option<f64>,
}
layered!(DesignOpts { c, order, margin, rule, grid_points, omega_min, omega_max, alpha });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RegionOpts {
    /// Kp range as MIN,MAX
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub kp_range: Option<Vec<f64>>,
    /// Kd range as MIN,MAX
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub kd_range: Option<Vec<f64>>,
    /// Points per axis of the Kp-Kd grid
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Criterion for the best-configuration search (iae, iaudd, os)
    #[arg(long)]
    pub criterion: Option<String>,
}
layered!(RegionOpts { kp_range, kd_range, resolution, criterion });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ControllerOpts {
    #[arg(long)]
    pub kp: Option<f64>,
    #[arg(long)]
    pub kd: Option<f64>,
    /// JSON file holding a full controller configuration
    #[arg(long)]
    pub controller: Option<PathBuf>,
}
layered!(ControllerOpts { kp, kd, controller });

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    /// Unit step (scaled by --amplitude)
    Step,
    /// Reproducible 0-100 km/h speed profile
    Profile,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SimOpts {
    #[arg(long, value_enum)]
    pub reference: Option<ReferenceKind>,
    /// Run length in seconds
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Step amplitude
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Step time in seconds
    #[arg(long)]
    pub step_time: Option<f64>,
    /// Symmetric bound on the plant input
    #[arg(long)]
    pub saturation: Option<f64>,
    /// Regulatory mode: the reference does not enter the F estimate
    #[arg(long)]
    pub regulatory: Option<bool>,
    /// Seed of the speed profile
    #[arg(long)]
    pub seed: Option<u64>,
}
layered!(SimOpts { reference, horizon, amplitude, step_time, saturation, regulatory, seed });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct OutputOpts {
    /// Directory for result files
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
layered!(OutputOpts { out_dir });

/// Contents of a `--config` file. Every table is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub plant: PlantOpts,
    pub design: DesignOpts,
    pub region: RegionOpts,
    pub controller: ControllerOpts,
    pub simulation: SimOpts,
    pub output: OutputOpts,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }

    pub fn load_optional(path: Option<&Path>) -> CliResult<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }
}

pub fn range(v: &Option<Vec<f64>>, name: &str) -> CliResult<Option<(f64, f64)>> {
    match v.as_deref() {
        None => Ok(None),
        Some([lo, hi]) if lo.is_finite() && hi.is_finite() && hi > lo => Ok(Some((*lo, *hi))),
        Some(other) => Err(CliError::Usage(format!(
            "{name} must be two finite numbers MIN,MAX with MIN < MAX, got {other:?}"
        ))),
    }
}

pub fn out_dir(o: &OutputOpts) -> PathBuf {
    o.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
}

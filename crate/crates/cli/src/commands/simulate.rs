use std::path::Path;

use clap::{Args, ValueEnum};

use mfc_design::plants::{table1_inner_config, table1_outer_config, vehicle_tf, VEHICLE_TS};
use mfc_design::sim::{
    compute_metrics, simulate_cascade, simulate_loop, speed_profile, step_reference, CascadeSpec, Limits, SimTrace,
};
use mfc_design::IpdConfig;

use super::Design;
use crate::config::{out_dir, ControllerOpts, DesignOpts, FileConfig, Layer, OutputOpts, PlantOpts, ReferenceKind, SimOpts};
use crate::error::{CliError, CliResult};
use crate::output::Bundle;
use crate::plant::{self, LoadedPlant};

pub const DEFAULT_PROFILE_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CascadePreset {
    /// Frequency-designed speed and acceleration controllers of the vehicle
    Table1Freq,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub plant: PlantOpts,
    #[command(flatten)]
    pub design: DesignOpts,
    #[command(flatten)]
    pub controller: ControllerOpts,
    #[command(flatten)]
    pub sim: SimOpts,
    #[command(flatten)]
    pub output: OutputOpts,
    /// Run a speed/acceleration cascade instead of a single loop
    #[arg(long, value_enum)]
    pub cascade: Option<CascadePreset>,
    /// Feed the profile acceleration forward into the inner reference
    #[arg(long)]
    pub feedforward: bool,
}

fn read_controller(path: &Path) -> CliResult<IpdConfig> {
    let err = |reason: String| CliError::Config {
        path: path.to_path_buf(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    let cfg: IpdConfig = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn controller(plant: &LoadedPlant, d: &DesignOpts, c: &ControllerOpts) -> CliResult<IpdConfig> {
    let base = match &c.controller {
        Some(path) => Some(read_controller(path)?),
        None => plant.controller,
    };
    let cfg = match base {
        Some(mut cfg) => {
            cfg.kp = c.kp.unwrap_or(cfg.kp);
            cfg.kd = c.kd.unwrap_or(cfg.kd);
            cfg.alpha = d.alpha.unwrap_or(cfg.alpha);
            cfg.c = d.c.unwrap_or(cfg.c);
            cfg
        }
        None => {
            let design = Design::resolve(d, plant)?;
            let (kp, kd) = c.kp.zip(c.kd).ok_or_else(|| {
                CliError::Usage(format!(
                    "plant '{}' has no default controller; pass --kp and --kd or --controller",
                    plant.name
                ))
            })?;
            IpdConfig::new(design.n, design.alpha(plant)?, kp, kd, design.c, plant.tf.ts())?
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

fn samples(horizon: f64, ts: f64) -> CliResult<usize> {
    let n = (horizon / ts).round();
    if !(n >= 3.0 && n.is_finite()) {
        return Err(CliError::Usage(format!("horizon {horizon} s is shorter than three samples")));
    }
    Ok(n as usize)
}

pub fn run(args: SimulateArgs, file: FileConfig) -> CliResult<()> {
    let mut plant_opts = args.plant.or(file.plant);
    let sim = args.sim.or(file.simulation);
    let output = args.output.or(file.output);
    let servo = !sim.regulatory.unwrap_or(false);
    let limits = sim.saturation.map(Limits::symmetric);

    let trace = if let Some(CascadePreset::Table1Freq) = args.cascade {
        match plant_opts.plant.as_deref() {
            None | Some("vehicle") => plant_opts.plant = Some("vehicle".into()),
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "the table1-freq cascade runs on the vehicle plant, not '{other}'"
                )))
            }
        }
        let plant = plant::load(&plant_opts)?;
        let n = samples(sim.horizon.unwrap_or(300.0), VEHICLE_TS)?;
        let spec = CascadeSpec {
            outer: table1_outer_config(),
            inner: table1_inner_config(),
            plant: vehicle_tf(),
            inner_plant_derivation: true,
            accel_feedforward: args.feedforward,
            u_limits: limits,
            servo,
        };
        println!("plant       {} (cascade table1-freq)", plant.name);
        match sim.reference.unwrap_or(ReferenceKind::Profile) {
            ReferenceKind::Profile => {
                let prof = speed_profile(sim.seed.unwrap_or(DEFAULT_PROFILE_SEED), n as f64 * VEHICLE_TS, VEHICLE_TS);
                simulate_cascade(&spec, &prof.speed, Some(&prof.accel))?
            }
            ReferenceKind::Step => {
                let r = step(&sim, n, VEHICLE_TS);
                simulate_cascade(&spec, &r, None)?
            }
        }
    } else {
        let plant = plant::load(&plant_opts)?;
        let design_opts = args.design.or(file.design);
        let cfg = controller(&plant, &design_opts, &args.controller.or(file.controller))?;
        let ts = plant.tf.ts();
        let n = samples(sim.horizon.unwrap_or(10.0), ts)?;
        let r = match sim.reference.unwrap_or(ReferenceKind::Step) {
            ReferenceKind::Step => step(&sim, n, ts),
            ReferenceKind::Profile => speed_profile(sim.seed.unwrap_or(DEFAULT_PROFILE_SEED), n as f64 * ts, ts).speed,
        };
        println!("plant       {}", plant.name);
        println!(
            "controller  n={} alpha={} Kp={} Kd={} C={}",
            cfg.n.as_usize(),
            cfg.alpha,
            cfg.kp,
            cfg.kd,
            cfg.c
        );
        simulate_loop(&plant.tf, &cfg, &r, servo, limits)?
    };

    report_and_write(&trace, &out_dir(&output))
}

fn step(sim: &SimOpts, n: usize, ts: f64) -> Vec<f64> {
    let delay = (sim.step_time.unwrap_or(0.0) / ts).round().max(0.0) as usize;
    step_reference(n, delay.min(n), sim.amplitude.unwrap_or(1.0))
}

fn report_and_write(trace: &SimTrace, dir: &Path) -> CliResult<()> {
    println!("samples     {}", trace.len());
    println!("diverged    {}", trace.diverged);
    println!("max |e|     {:.6}", trace.max_abs_error());
    println!("max |u|     {:.6}", trace.u.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    let mut bundle = Bundle::new();
    bundle.add(dir.join("trace.csv"), trace.to_csv());
    if trace.len() >= 3 {
        let m = compute_metrics(trace)?;
        println!("IAE         {:.6}", m.iae);
        println!("IAUDD       {:.6}", m.iaudd);
        println!("OS          {:.6}", m.os);
        bundle.add(dir.join("metrics.json"), serde_json::to_string_pretty(&m).expect("serializable") + "\n");
    }
    if trace.diverged {
        log::warn!("the run diverged after {} samples; the trace is truncated there", trace.len());
    }
    for p in bundle.commit()? {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

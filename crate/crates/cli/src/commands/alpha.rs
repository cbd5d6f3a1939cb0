use clap::Args;
use serde::Serialize;

use mfc_design::design::{alpha_bound_sweep, alpha_rules, AlphaBound};

use super::{logspace, Design};
use crate::config::{out_dir, DesignOpts, FileConfig, Layer, OutputOpts, PlantOpts};
use crate::error::{CliError, CliResult};
use crate::output::Bundle;
use crate::plant;

#[derive(Debug, Args)]
pub struct AlphaArgs {
    #[command(flatten)]
    pub plant: PlantOpts,
    #[command(flatten)]
    pub design: DesignOpts,
    #[command(flatten)]
    pub output: OutputOpts,
    /// Also tabulate the bound against N low-frequency cutoffs spread
    /// logarithmically over [1e-3, 1e-1] times the Nyquist frequency
    #[arg(long, value_name = "N")]
    pub sweep: Option<usize>,
}

#[derive(Debug, Serialize)]
struct AlphaReport {
    plant: String,
    c: f64,
    #[serde(flatten)]
    bound: AlphaBound,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<Vec<SweepPoint>>,
}

#[derive(Debug, Serialize)]
struct SweepPoint {
    omega_min: f64,
    bound: f64,
}

pub fn run(args: AlphaArgs, file: FileConfig) -> CliResult<()> {
    let plant = plant::load(&args.plant.or(file.plant))?;
    let design = Design::resolve(&args.design.or(file.design), &plant)?;
    let output = args.output.or(file.output);
    let bound = design.bound(&plant)?;

    let sweep = match args.sweep {
        None => None,
        Some(0) => return Err(CliError::Usage("--sweep needs at least one point".into())),
        Some(n) => {
            let nyq = plant.tf.nyquist();
            let cutoffs = logspace(1e-3 * nyq, 1e-1 * nyq, n);
            let base = design.grid.with_cutoff(design.grid.omega_min.min(cutoffs[0]));
            let rules = alpha_rules();
            let pts = alpha_bound_sweep(&plant.tf, design.c, rules.get(&design.rule)?, &base, &cutoffs)?;
            Some(
                pts.into_iter()
                    .map(|(omega_min, bound)| SweepPoint { omega_min, bound })
                    .collect::<Vec<_>>(),
            )
        }
    };

    println!("plant         {}", plant.name);
    println!("rule          {}", bound.rule);
    println!("C             {}", design.c);
    println!("bound         {:.6}", bound.bound);
    println!("margin        {}", bound.margin);
    println!("design alpha  {:.6}", bound.alpha_design);
    println!("attained at   {:.6} rad/s", bound.omega_at_max);
    println!(
        "grid          [{:.6}, {:.6}] rad/s, {} points",
        bound.grid.omega_min, bound.grid.omega_max, bound.grid.points
    );
    if let Some(s) = &sweep {
        println!("\n{:>16}{:>16}", "omega_min", "bound");
        for p in s {
            println!("{:>16.6}{:>16.6}", p.omega_min, p.bound);
        }
    }

    let report = AlphaReport {
        plant: plant.name.clone(),
        c: design.c,
        bound,
        sweep,
    };
    let json = serde_json::to_string_pretty(&report).expect("serializable report");
    let mut bundle = Bundle::new();
    bundle.add(out_dir(&output).join("alpha_bound.json"), json + "\n");
    for p in bundle.commit()? {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

use clap::Args;

use mfc_design::design::export::{boundaries_json, region_csv, region_svg};
use mfc_design::design::region::DEFAULT_RESOLUTION;
use mfc_design::design::{build_region, RegionSpec, StabilityRegion};

use super::Design;
use crate::config::{out_dir, range, DesignOpts, FileConfig, Layer, OutputOpts, PlantOpts, RegionOpts};
use crate::error::{CliError, CliResult};
use crate::output::Bundle;
use crate::plant::{self, LoadedPlant};

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub plant: PlantOpts,
    #[command(flatten)]
    pub design: DesignOpts,
    #[command(flatten)]
    pub region: RegionOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

/// Kp/Kd window: explicit ranges, then the preset's window, then the
/// bounding box of the module ellipse.
fn window(
    opts: &RegionOpts,
    plant: &LoadedPlant,
    design: &Design,
    alpha: f64,
) -> CliResult<((f64, f64), (f64, f64))> {
    let kp = range(&opts.kp_range, "--kp-range")?.or(plant.kp_range);
    let kd = range(&opts.kd_range, "--kd-range")?.or(plant.kd_range);
    if let (Some(kp), Some(kd)) = (kp, kd) {
        return Ok((kp, kd));
    }
    let probe = RegionSpec::new(alpha, design.c, plant.tf.ts(), design.n, (0.0, 1.0), (0.0, 1.0))
        .with_resolution(2)
        .with_grid(design.grid);
    let (ekp, ekd) = build_region(&plant.tf, &probe)?.ellipse.extents();
    if !(ekp.is_finite() && ekd.is_finite() && ekp > 0.0 && ekd > 0.0) {
        return Err(CliError::Usage(
            "the module ellipse is unbounded for this plant; pass --kp-range and --kd-range".into(),
        ));
    }
    Ok((kp.unwrap_or((0.0, ekp)), kd.unwrap_or((0.0, ekd))))
}

pub fn region_for(
    plant: &LoadedPlant,
    design: &Design,
    opts: &RegionOpts,
) -> CliResult<StabilityRegion> {
    let alpha = design.alpha(plant)?;
    let (kp, kd) = window(opts, plant, design, alpha)?;
    let spec = RegionSpec::new(alpha, design.c, plant.tf.ts(), design.n, kp, kd)
        .with_resolution(opts.resolution.unwrap_or(DEFAULT_RESOLUTION))
        .with_grid(design.grid);
    Ok(build_region(&plant.tf, &spec)?)
}

/// Files written for a region: grid CSV, boundary JSON and SVG plot.
pub fn add_region_files(bundle: &mut Bundle, dir: &std::path::Path, prefix: &str, r: &StabilityRegion) -> CliResult<()> {
    bundle.add(dir.join(format!("{prefix}.csv")), region_csv(r));
    bundle.add(dir.join(format!("{prefix}_boundaries.json")), boundaries_json(r)? + "\n");
    bundle.add(dir.join(format!("{prefix}.svg")), region_svg(r));
    Ok(())
}

pub fn run(args: RegionArgs, file: FileConfig) -> CliResult<()> {
    let plant = plant::load(&args.plant.or(file.plant))?;
    let design = Design::resolve(&args.design.or(file.design), &plant)?;
    let opts = args.region.or(file.region);
    let output = args.output.or(file.output);
    let region = region_for(&plant, &design, &opts)?;

    let predicted = region.predicted_points().count();
    let stable = region.stable_points().count();
    let both = region.points.iter().filter(|p| p.predicted && p.stable).count();
    let fmt_opt = |w: Option<f64>| w.map_or_else(|| "not found".to_string(), |w| format!("{w:.6} rad/s"));
    println!("plant       {}", plant.name);
    println!("alpha       {:.6}", region.spec.alpha);
    println!("C           {}", region.spec.c);
    println!("Kp range    [{}, {}]", region.spec.kp_range.0, region.spec.kp_range.1);
    println!("Kd range    [{}, {}]", region.spec.kd_range.0, region.spec.kd_range.1);
    println!("omega0      {}", fmt_opt(region.omega0));
    println!("omega1      {}", fmt_opt(region.omega1));
    if region.fallback {
        println!("            (no phase crossover; ellipse taken at the peak of |G|)");
    }
    println!("grid        {0}x{0}", region.spec.resolution);
    println!("predicted   {predicted}");
    println!("stable      {stable}");
    println!("both        {both}");
    if let Some(p) = region.prediction_precision() {
        println!("precision   {:.2}%", 100.0 * p);
    }

    let dir = out_dir(&output);
    let mut bundle = Bundle::new();
    add_region_files(&mut bundle, &dir, "region", &region)?;
    for p in bundle.commit()? {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

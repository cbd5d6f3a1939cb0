use std::path::PathBuf;

use clap::{Args, ValueEnum};

use mfc_design::design::alpha::UpperFirst;
use mfc_design::design::{
    alpha_bound, alpha_bound_sweep, best_config_search, build_region, criteria, verify_stable, RegionSpec, SimSpec,
    StabilityRegion,
};
use mfc_design::plants::{
    self, pendulum_designed_config, pendulum_iterative_config, table1_inner_config, table1_outer_config,
    PendulumParams, PENDULUM_TS, VEHICLE_TS,
};
use mfc_design::sim::{compute_metrics, simulate_cascade, simulate_loop, speed_profile, step_reference, CascadeSpec, Limits, SimTrace};
use mfc_design::tf::grid::DEFAULT_GRID_POINTS;
use mfc_design::tf::discretizers;
use mfc_design::{FrequencyGrid, Order};

use super::logspace;
use super::region::add_region_files;
use super::simulate::DEFAULT_PROFILE_SEED;
use crate::config::{FileConfig, Layer, OutputOpts};
use crate::error::CliResult;
use crate::output::Bundle;
use crate::report::{Check, Report};

/// Reference values the case studies are checked against.
pub mod reference {
    pub const PENDULUM_ALPHA_BOUND: f64 = 17.006;
    pub const VEHICLE_INNER_ALPHA_BOUND: f64 = 147.63;
    pub const VEHICLE_OUTER_ALPHA_BOUND: f64 = 15864.4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    Pendulum,
    Vehicle,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub case: Case,
    /// Frequency grid density
    #[arg(long, env = "MFC_GRID_POINTS")]
    pub grid_points: Option<usize>,
    #[command(flatten)]
    pub output: OutputOpts,
}

fn grid(ts: f64, points: usize) -> FrequencyGrid {
    FrequencyGrid::with_points(ts, points)
}

/// Largest |e| in the last second divided by the largest |e| in the first.
fn decay_ratio(trace: &SimTrace) -> f64 {
    let w = ((1.0 / trace.ts).round() as usize).min(trace.len() / 2).max(1);
    let head = trace.e[..w].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tail = trace.e[trace.len() - w..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    tail / head
}

fn eq21_violations(region: &StabilityRegion) -> usize {
    region
        .stable_points()
        .filter(|p| !region.simplified_line.is_satisfied(p.kp, p.kd))
        .count()
}

fn counts(region: &StabilityRegion) -> (usize, usize, usize) {
    let predicted = region.predicted_points().count();
    let stable = region.stable_points().count();
    let both = region.points.iter().filter(|p| p.predicted && p.stable).count();
    (predicted, stable, both)
}

fn pendulum(points: usize, dir: &std::path::Path, bundle: &mut Bundle) -> CliResult<Report> {
    let mut rep = Report::new("pendulum");
    let params = PendulumParams::default();
    let ts = PENDULUM_TS;
    let c = 4.0;

    let mut rows = Vec::new();
    let registry = discretizers();
    for method in registry.iter() {
        let g = plants::pendulum_discrete_with(&params, ts, method)?;
        let b = alpha_bound(&g, c, &UpperFirst, &grid(ts, points), 10.0)?;
        if method.name() == "zoh" {
            rep.check(Check::relative(
                "alpha bound, zoh, upper-first",
                b.bound,
                reference::PENDULUM_ALPHA_BOUND,
                0.05,
            ));
        }
        let rel = (b.bound - reference::PENDULUM_ALPHA_BOUND) / reference::PENDULUM_ALPHA_BOUND;
        rows.push((method.name().to_string(), vec![b.bound, 100.0 * rel]));
    }
    rep.table("alpha bound by discretization", &["method", "bound", "error %"], rows);

    let g = plants::pendulum_discrete(&params, ts)?;
    let n = (10.0 / ts).round() as usize;
    let y_ref = step_reference(n, 0, 1.0);
    let designed = pendulum_designed_config();
    let iterative = pendulum_iterative_config();
    let mut traces = Vec::new();
    for (name, cfg) in [("designed", designed), ("iterative", iterative)] {
        let stable = verify_stable(&g, &cfg);
        let trace = simulate_loop(&g, &cfg, &y_ref, true, None)?;
        let ratio = decay_ratio(&trace);
        rep.check(Check::new(
            format!("{name} config verifies stable"),
            if stable { "stable" } else { "unstable" },
            "stable",
            stable,
        ));
        rep.check(Check::new(
            format!("{name} config error decays over 10 s"),
            format!("tail/head |e| = {ratio:.3e}"),
            "< 1e-3",
            !trace.diverged && ratio < 1e-3,
        ));
        traces.push((name, trace));
    }

    let spec = RegionSpec::new(designed.alpha, c, ts, Order::First, (0.0, 150.0), (0.0, 150.0))
        .with_grid(grid(ts, points));
    let region = build_region(&g, &spec)?;
    let (predicted, stable, both) = counts(&region);
    rep.note(format!(
        "region at alpha {}: {predicted} predicted, {stable} stable, {both} both, on a {}x{} grid",
        designed.alpha, spec.resolution, spec.resolution
    ));
    let v = eq21_violations(&region);
    rep.check(Check::new(
        "stable points violating the simplified half-plane",
        v.to_string(),
        "0",
        v == 0,
    ));

    let sim = SimSpec {
        y_ref: y_ref.clone(),
        servo: true,
        u_limits: None,
    };
    let crit = criteria();
    let best = best_config_search(&region, &g, crit.get("iae")?, &sim)?;
    let iter_iae = compute_metrics(&traces[1].1)?.iae;
    let mut c11 = Check::relative("best-search IAE vs iterative IAE", best.metrics.iae, iter_iae, 0.15);
    c11.computed = format!(
        "{:.6} at Kp={} Kd={} (iterative {:.6})",
        best.metrics.iae, best.config.kp, best.config.kd, iter_iae
    );
    rep.check(c11);
    traces.push(("best", simulate_loop(&g, &best.config, &y_ref, true, None)?));

    let mut rows = Vec::new();
    for (name, t) in &traces {
        let m = compute_metrics(t)?;
        rows.push((name.to_string(), vec![m.iae, m.iaudd, m.os]));
    }
    rep.table("unit-step metrics over 10 s", &["config", "IAE", "IAUDD", "OS"], rows);

    add_region_files(bundle, dir, "region", &region)?;
    for (name, t) in &traces {
        bundle.add(dir.join(format!("trace_{name}.csv")), t.to_csv());
    }
    Ok(rep)
}

fn vehicle(points: usize, dir: &std::path::Path, bundle: &mut Bundle) -> CliResult<Report> {
    let mut rep = Report::new("vehicle");
    let ts = VEHICLE_TS;
    let inner_cfg = table1_inner_config();
    let outer_cfg = table1_outer_config();

    let inner = plants::vehicle_inner_plant();
    let b = alpha_bound(&inner, inner_cfg.c, &UpperFirst, &grid(ts, points), 10.0)?;
    rep.check(Check::relative(
        "inner alpha bound, upper-first",
        b.bound,
        reference::VEHICLE_INNER_ALPHA_BOUND,
        0.01,
    ));
    rep.note(format!(
        "inner design alpha (bound x 10) {:.4}; controller in use has alpha {}",
        b.alpha_design, inner_cfg.alpha
    ));

    let outer = plants::vehicle_outer_plant(&inner_cfg)?;
    let nyq = outer.nyquist();
    let cutoffs = logspace(1e-3 * nyq, 1e-1 * nyq, 21);
    let base = grid(ts, points).with_cutoff(grid(ts, points).omega_min.min(cutoffs[0]));
    let sweep = alpha_bound_sweep(&outer, outer_cfg.c, &UpperFirst, &base, &cutoffs)?;
    let finite = sweep.iter().all(|(_, b)| b.is_finite() && *b > 0.0);
    let monotone = sweep.windows(2).all(|w| w[1].1 <= w[0].1);
    rep.check(Check::new(
        "outer bound finite and non-increasing in the cutoff",
        format!("finite={finite} non-increasing={monotone}"),
        "both true",
        finite && monotone,
    ));
    let target = reference::VEHICLE_OUTER_ALPHA_BOUND;
    let closest = sweep
        .iter()
        .map(|&(w, b)| (w, b, (b / target).ln().abs()))
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("non-empty sweep");
    rep.check(Check::new(
        "outer bound within a factor 3 of the reference value for some cutoff",
        format!("closest {:.4} at {:.6} rad/s", closest.1, closest.0),
        format!("[{:.1}, {:.1}]", target / 3.0, target * 3.0),
        closest.2 <= 3f64.ln(),
    ));
    rep.table(
        "outer alpha bound vs low-frequency cutoff",
        &["omega_min/wN", "omega_min", "bound"],
        sweep.iter().map(|&(w, b)| (format!("{:.6}", w / nyq), vec![w, b])).collect(),
    );

    let spec = RegionSpec::new(inner_cfg.alpha, inner_cfg.c, ts, Order::First, (0.0, 100.0), (0.0, 20.0))
        .with_grid(grid(ts, points));
    let region = build_region(&inner, &spec)?;
    let (predicted, stable, both) = counts(&region);
    rep.check(Check::new(
        "inner region: predicted points that verify stable",
        format!("{both} of {predicted}"),
        "all",
        predicted > 0 && both == predicted,
    ));
    rep.note(format!(
        "inner region over Kp [0, 100], Kd [0, 20]: {predicted} predicted, {stable} stable"
    ));
    let ordering = match (&region.conservative, &region.permissive) {
        (Some(cons), Some(perm)) => {
            let bad = region
                .points
                .iter()
                .filter(|p| {
                    let complete = p.predicted;
                    let phase = region.phase_ok(p.kp, p.kd);
                    let c = cons.contains(p.kp, p.kd) && phase;
                    let q = perm.contains(p.kp, p.kd) && phase;
                    (c && !complete) || (complete && !q)
                })
                .count();
            Check::new(
                "conservative within complete within permissive",
                format!("{bad} grid points out of order"),
                "0",
                bad == 0,
            )
        }
        _ => Check::new(
            "conservative within complete within permissive",
            "a simplified ellipse is unavailable",
            "both ellipses",
            false,
        ),
    };
    rep.check(ordering);
    let v = eq21_violations(&region);
    rep.check(Check::new(
        "stable points violating the simplified half-plane",
        v.to_string(),
        "0",
        v == 0,
    ));
    rep.note(format!(
        "table controllers verify stable on their own loops: inner {}, outer {}",
        verify_stable(&inner, &inner_cfg),
        verify_stable(&outer, &outer_cfg)
    ));

    let prof = speed_profile(DEFAULT_PROFILE_SEED, 300.0, ts);
    let spec = |limits: Option<Limits>| CascadeSpec {
        outer: outer_cfg,
        inner: inner_cfg,
        plant: plants::vehicle_tf(),
        inner_plant_derivation: true,
        accel_feedforward: false,
        u_limits: limits,
        servo: true,
    };
    let saturated = simulate_cascade(&spec(Some(Limits::symmetric(1.0))), &prof.speed, Some(&prof.accel))?;
    let free = simulate_cascade(&spec(None), &prof.speed, Some(&prof.accel))?;
    let max_e = saturated.max_abs_error();
    rep.check(Check::new(
        "saturated cascade completes with bounded error",
        format!(
            "{} of {} samples, max |e| {:.4} m/s",
            saturated.len(),
            prof.speed.len(),
            max_e
        ),
        "no divergence, max |e| <= 100 km/h",
        !saturated.diverged && max_e <= mfc_design::sim::TOP_SPEED,
    ));
    let mut rows = Vec::new();
    for (name, t) in [("u in [-1, 1]", &saturated), ("unsaturated", &free)] {
        let m = compute_metrics(t)?;
        rows.push((name.to_string(), vec![t.len() as f64, m.iae, m.iaudd, m.os]));
    }
    rep.table("cascade on the speed profile", &["run", "samples", "IAE", "IAUDD", "OS"], rows);

    add_region_files(bundle, dir, "inner_region", &region)?;
    bundle.add(dir.join("cascade_saturated.csv"), saturated.to_csv());
    bundle.add(dir.join("cascade_unsaturated.csv"), free.to_csv());
    Ok(rep)
}

pub fn run(args: ReproduceArgs, file: FileConfig) -> CliResult<()> {
    let points = args.grid_points.or(file.design.grid_points).unwrap_or(DEFAULT_GRID_POINTS);
    let output = args.output.or(file.output);
    let dir = output.out_dir.unwrap_or_else(|| {
        PathBuf::from(match args.case {
            Case::Pendulum => "reproduce-pendulum",
            Case::Vehicle => "reproduce-vehicle",
        })
    });
    let mut bundle = Bundle::new();
    let report = match args.case {
        Case::Pendulum => pendulum(points, &dir, &mut bundle)?,
        Case::Vehicle => vehicle(points, &dir, &mut bundle)?,
    };
    let text = report.to_text();
    print!("{text}");
    bundle.add(dir.join("report.txt"), text);
    bundle.add(
        dir.join("report.json"),
        serde_json::to_string_pretty(&report).expect("serializable") + "\n",
    );
    for p in bundle.commit()? {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

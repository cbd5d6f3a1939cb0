//! Region export: CSV grid, JSON boundary coefficients, SVG plot.

use std::fmt::Write as _;

use serde::Serialize;

use super::module::Ellipse;
use super::phase::{PhaseLine, SimplifiedPhaseLine};
use super::region::StabilityRegion;
use crate::error::Result;

pub fn region_csv(region: &StabilityRegion) -> String {
    let mut out = String::from("kp,kd,predicted,stable\n");
    for p in &region.points {
        let _ = writeln!(out, "{},{},{},{}", p.kp, p.kd, p.predicted, p.stable);
    }
    out
}

#[derive(Debug, Serialize)]
struct LineExport<'a> {
    a: f64,
    b: f64,
    c0: f64,
    slope: Option<f64>,
    intercept: Option<f64>,
    #[serde(flatten)]
    line: &'a PhaseLine,
}

#[derive(Debug, Serialize)]
struct BoundariesExport<'a> {
    omega0: Option<f64>,
    omega1: Option<f64>,
    fallback: bool,
    kind: super::region::PhaseConditionKind,
    ellipse: &'a Ellipse,
    conservative: Option<&'a Ellipse>,
    permissive: Option<&'a Ellipse>,
    line: Option<LineExport<'a>>,
    simplified_line: &'a SimplifiedPhaseLine,
}

/// Ellipse and line coefficients as pretty JSON.
pub fn boundaries_json(region: &StabilityRegion) -> Result<String> {
    let export = BoundariesExport {
        omega0: region.omega0,
        omega1: region.omega1,
        fallback: region.fallback,
        kind: region.kind,
        ellipse: &region.ellipse,
        conservative: region.conservative.as_ref(),
        permissive: region.permissive.as_ref(),
        line: region.line.as_ref().map(|l| LineExport {
            a: l.a,
            b: l.b,
            c0: l.c0,
            slope: l.slope(),
            intercept: l.intercept(),
            line: l,
        }),
        simplified_line: &region.simplified_line,
    };
    serde_json::to_string_pretty(&export).map_err(|e| crate::Error::InvalidParameter(e.to_string()))
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const PAD: f64 = 50.0;

struct Frame {
    kp: (f64, f64),
    kd: (f64, f64),
}

impl Frame {
    fn x(&self, kp: f64) -> f64 {
        PAD + (kp - self.kp.0) / (self.kp.1 - self.kp.0) * (WIDTH - 2.0 * PAD)
    }

    fn y(&self, kd: f64) -> f64 {
        HEIGHT - PAD - (kd - self.kd.0) / (self.kd.1 - self.kd.0) * (HEIGHT - 2.0 * PAD)
    }

    /// Clips the line a·Kp + b·Kd + c0 = 0 to the frame.
    fn clip_line(&self, a: f64, b: f64, c0: f64) -> Option<((f64, f64), (f64, f64))> {
        let mut pts = Vec::new();
        if b != 0.0 {
            for kp in [self.kp.0, self.kp.1] {
                let kd = -(a * kp + c0) / b;
                if kd >= self.kd.0 && kd <= self.kd.1 {
                    pts.push((kp, kd));
                }
            }
        }
        if a != 0.0 {
            for kd in [self.kd.0, self.kd.1] {
                let kp = -(b * kd + c0) / a;
                if kp >= self.kp.0 && kp <= self.kp.1 {
                    pts.push((kp, kd));
                }
            }
        }
        (pts.len() >= 2).then(|| (pts[0], pts[pts.len() - 1]))
    }
}

/// Self-contained SVG: green stable and red unstable grid points, the
/// blue module ellipse, the black phase line and the dashed gray
/// simplified half-plane boundary.
pub fn region_svg(region: &StabilityRegion) -> String {
    let f = Frame {
        kp: region.spec.kp_range,
        kd: region.spec.kd_range,
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{PAD}" y="{PAD}" width="{}" height="{}"/></clipPath></defs>"#,
        WIDTH - 2.0 * PAD,
        HEIGHT - 2.0 * PAD
    );
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * PAD,
        HEIGHT - 2.0 * PAD
    );

    let _ = writeln!(s, r#"<g clip-path="url(#plot)">"#);
    for p in &region.points {
        let color = if p.stable { "green" } else { "red" };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{color}"/>"#,
            f.x(p.kp),
            f.y(p.kd)
        );
    }

    let ring: Vec<String> = region
        .ellipse
        .boundary(256)
        .into_iter()
        .map(|(kp, kd)| format!("{:.2},{:.2}", f.x(kp), f.y(kd)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="blue" stroke-width="1.5"/>"#,
        ring.join(" ")
    );

    if let Some(l) = &region.line {
        if let Some(((x0, y0), (x1, y1))) = f.clip_line(l.a, l.b, l.c0) {
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"/>"#,
                f.x(x0),
                f.y(y0),
                f.x(x1),
                f.y(y1)
            );
        }
    }
    let sl = &region.simplified_line;
    if let Some(((x0, y0), (x1, y1))) = f.clip_line(-sl.slope, 1.0, -sl.intercept) {
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="6,4"/>"#,
            f.x(x0),
            f.y(y0),
            f.x(x1),
            f.y(y1)
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">Kp</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 15 {})">Kd</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (v, x) in [(f.kp.0, PAD), (f.kp.1, WIDTH - PAD)] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" text-anchor="middle" font-size="11">{}</text>"#,
            HEIGHT - PAD + 15.0,
            fmt_tick(v)
        );
    }
    for (v, y) in [(f.kd.0, HEIGHT - PAD), (f.kd.1, PAD)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end" font-size="11">{}</text>"#,
            PAD - 5.0,
            fmt_tick(v)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    format!("{}", (v * 1000.0).round() / 1000.0)
}

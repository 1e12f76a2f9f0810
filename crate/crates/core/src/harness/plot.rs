//! Self-contained SVG rendering of a run: the map panel shows obstacles, the
//! path and the start/target markers; two strip charts show u(t) and ω(t).

use std::fmt::Write;

use crate::sim::{Pose, Termination, TrajectoryTrace, World};

const MAP_PX: f64 = 520.0;
const CHART_W: f64 = 420.0;
const CHART_H: f64 = 230.0;
const PAD: f64 = 40.0;

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
    ox: f64,
    oy: f64,
    h: f64,
}

impl Frame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (self.ox + (x - self.x0) * self.scale, self.oy + self.h - (y - self.y0) * self.scale)
    }
}

fn extent(world: &World, trace: &TrajectoryTrace, target: &Pose) -> ([f64; 2], [f64; 2]) {
    let [mut lo, mut hi] = world.bounds();
    for (x, y) in trace.poses().map(|p| (p.x, p.y)).chain([(target.x, target.y)]) {
        lo = [lo[0].min(x), lo[1].min(y)];
        hi = [hi[0].max(x), hi[1].max(y)];
    }
    let margin = 0.5;
    ([lo[0] - margin, lo[1] - margin], [hi[0] + margin, hi[1] + margin])
}

fn polyline(out: &mut String, pts: impl Iterator<Item = (f64, f64)>, style: &str) {
    let coords: Vec<String> = pts.map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    if coords.len() >= 2 {
        let _ = writeln!(out, r#"<polyline points="{}" {style}/>"#, coords.join(" "));
    }
}

fn strip_chart(out: &mut String, ox: f64, oy: f64, label: &str, series: &[(f64, f64)], limits: [f64; 2], color: &str) {
    let _ = writeln!(
        out,
        r##"<rect x="{ox}" y="{oy}" width="{CHART_W}" height="{CHART_H}" fill="none" stroke="#999"/>"##
    );
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="13">{label}</text>"#, ox + 4.0, oy - 6.0);
    let t_max = series.last().map_or(1.0, |s| s.0).max(1e-9);
    let sy = |v: f64| oy + CHART_H - (v - limits[0]) / (limits[1] - limits[0]) * CHART_H;
    if limits[0] < 0.0 && limits[1] > 0.0 {
        let z = sy(0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{ox}" y1="{z:.2}" x2="{}" y2="{z:.2}" stroke="#ccc"/>"##,
            ox + CHART_W
        );
    }
    for (v, anchor_y) in [(limits[1], oy + 10.0), (limits[0], oy + CHART_H)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{anchor_y}" font-size="10" text-anchor="end">{v}</text>"#,
            ox - 3.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="10" text-anchor="end">t = {t_max:.1} s</text>"#,
        ox + CHART_W,
        oy + CHART_H + 12.0
    );
    polyline(
        out,
        series.iter().map(|&(t, v)| (ox + t / t_max * CHART_W, sy(v))),
        &format!(r#"fill="none" stroke="{color}" stroke-width="1.2""#),
    );
}

/// Renders the run as an SVG document.
pub fn render_svg(
    title: &str,
    world: &World,
    trace: &TrajectoryTrace,
    target: &Pose,
    u_limits: [f64; 2],
    omega_limits: [f64; 2],
) -> String {
    let (lo, hi) = extent(world, trace, target);
    let scale = MAP_PX / (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let frame = Frame {
        x0: lo[0],
        y0: lo[1],
        scale,
        ox: PAD,
        oy: PAD,
        h: (hi[1] - lo[1]) * scale,
    };
    let width = 2.0 * PAD + MAP_PX + PAD + CHART_W + PAD;
    let height = (2.0 * PAD + frame.h).max(2.0 * PAD + 2.0 * CHART_H + PAD);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let outcome = match trace.termination {
        Termination::Success => "success",
        Termination::Collision => "collision",
        Termination::Timeout => "timeout",
    };
    let _ = writeln!(out, r#"<text x="{PAD}" y="24" font-size="15">{} ({outcome})</text>"#, escape(title));

    for s in world.segments() {
        let (x1, y1) = frame.map(s.a[0], s.a[1]);
        let (x2, y2) = frame.map(s.b[0], s.b[1]);
        let _ = writeln!(
            out,
            r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#333" stroke-width="2.5" stroke-linecap="round"/>"##
        );
    }
    polyline(
        &mut out,
        trace.poses().map(|p| frame.map(p.x, p.y)),
        r##"fill="none" stroke="#1f6fd1" stroke-width="1.5""##,
    );
    if let Some(start) = trace.records.first().map(|r| r.pose) {
        let (x, y) = frame.map(start.x, start.y);
        let (hx, hy) = (x + 14.0 * start.theta.cos(), y - 14.0 * start.theta.sin());
        let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="#2a9d3f"/>"##);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{y:.2}" x2="{hx:.2}" y2="{hy:.2}" stroke="#2a9d3f" stroke-width="2"/>"##
        );
    }
    let (tx, ty) = frame.map(target.x, target.y);
    let _ = writeln!(
        out,
        r##"<path d="M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}" stroke="#d12a2a" stroke-width="2.5"/>"##,
        tx - 6.0,
        ty - 6.0,
        tx + 6.0,
        ty + 6.0,
        tx - 6.0,
        ty + 6.0,
        tx + 6.0,
        ty - 6.0
    );

    let cx = 2.0 * PAD + MAP_PX + PAD;
    let commands: Vec<(f64, f64, f64)> = trace
        .records
        .iter()
        .filter_map(|r| r.decision.map(|d| (r.t, d.command.u, d.command.omega)))
        .collect();
    let u: Vec<(f64, f64)> = commands.iter().map(|c| (c.0, c.1)).collect();
    let w: Vec<(f64, f64)> = commands.iter().map(|c| (c.0, c.2)).collect();
    strip_chart(&mut out, cx, PAD, "u (m/s)", &u, u_limits, "#1f6fd1");
    strip_chart(&mut out, cx, 2.0 * PAD + CHART_H, "ω (rad/s)", &w, omega_limits, "#c46a00");
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Segment, TraceRecord};
    use crate::behaviors::NavInputs;

    #[test]
    fn renders_obstacles_path_and_markers() {
        let world = World::from_segments(vec![Segment::new([1.0, -1.0], [1.0, 1.0])]).unwrap();
        let inputs = NavInputs { d_l: 4.0, d_f: 4.0, d_r: 4.0, alpha: 0.0, rho: 1.0, e_d: 0.0 };
        let records = (0..3)
            .map(|i| TraceRecord {
                step: i,
                t: i as f64 * 0.1,
                pose: Pose::new(0.1 * i as f64, 0.0, 0.0),
                inputs,
                decision: None,
            })
            .collect();
        let trace = TrajectoryTrace { dt: 0.1, records, termination: Termination::Timeout };
        let svg = render_svg("a<b", &world, &trace, &Pose::new(2.0, 0.0, 0.0), [0.0, 1.3], [-4.3, 4.3]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<line").count(), 2 + 1, "obstacle, heading tick, zero line");
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("a&lt;b (timeout)"));
    }
}

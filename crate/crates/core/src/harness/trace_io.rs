//! Trace CSV: one row per control step, the final row without a command.
//!
//! Floats are written in shortest round-trip form, so reading a trace back
//! reproduces every value bit for bit.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::metrics::{path_metrics, Metrics};
use crate::error::{Error, Result};
use crate::sim::{Pose, Termination, TrajectoryTrace, World};

pub const COLUMNS: [&str; 16] = [
    "step", "t", "x", "y", "theta", "d_l", "d_f", "d_r", "alpha", "rho", "e_d", "u", "omega", "H_LM", "H_OA", "H_GR",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: usize,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub d_l: f64,
    pub d_f: f64,
    pub d_r: f64,
    pub alpha: f64,
    pub rho: f64,
    pub e_d: f64,
    pub u: Option<f64>,
    pub omega: Option<f64>,
    #[serde(rename = "H_LM")]
    pub h_lm: Option<f64>,
    #[serde(rename = "H_OA")]
    pub h_oa: Option<f64>,
    #[serde(rename = "H_GR")]
    pub h_gr: Option<f64>,
}

impl TraceRow {
    pub fn pose(&self) -> Pose {
        Pose { x: self.x, y: self.y, theta: self.theta }
    }
}

pub fn trace_rows(trace: &TrajectoryTrace) -> Vec<TraceRow> {
    trace
        .records
        .iter()
        .map(|r| {
            let d = r.decision;
            TraceRow {
                step: r.step,
                t: r.t,
                x: r.pose.x,
                y: r.pose.y,
                theta: r.pose.theta,
                d_l: r.inputs.d_l,
                d_f: r.inputs.d_f,
                d_r: r.inputs.d_r,
                alpha: r.inputs.alpha,
                rho: r.inputs.rho,
                e_d: r.inputs.e_d,
                u: d.map(|d| d.command.u),
                omega: d.map(|d| d.command.omega),
                h_lm: d.map(|d| d.strengths.lm),
                h_oa: d.map(|d| d.strengths.oa),
                h_gr: d.map(|d| d.strengths.gr),
            }
        })
        .collect()
}

pub fn write_trace_csv<W: Write>(trace: &TrajectoryTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in trace_rows(trace) {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn trace_csv_string(trace: &TrajectoryTrace) -> String {
    let mut buf = Vec::new();
    write_trace_csv(trace, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != COLUMNS {
        return Err(Error::invalid(format!("unexpected trace columns: {}", header.join(","))));
    }
    let rows = r.deserialize().collect::<std::result::Result<Vec<TraceRow>, _>>()?;
    Ok(rows)
}

pub fn load_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.into(), source })?;
    read_trace_csv(std::io::BufReader::new(file))
}

/// What a replay needs to classify how a recorded episode ended.
#[derive(Clone, Debug)]
pub struct ReplayContext<'a> {
    pub stop_radius: f64,
    pub max_steps: usize,
    /// World and body radius; without them a run that neither reached the
    /// target nor ran out of steps is classified as a collision.
    pub world: Option<(&'a World, f64)>,
}

/// Recomputes [`Metrics`] from trace rows.
pub fn replay_metrics(rows: &[TraceRow], ctx: &ReplayContext<'_>) -> Result<Metrics> {
    let last = rows.last().ok_or_else(|| Error::invalid("trace has no rows"))?;
    if rows[..rows.len() - 1].iter().any(|r| r.u.is_none() || r.omega.is_none()) {
        return Err(Error::invalid("only the final trace row may lack a command"));
    }
    let poses: Vec<Pose> = rows.iter().map(TraceRow::pose).collect();
    let (traveled_distance, smoothness_deg) = path_metrics(&poses);
    // same precedence as the episode loop: collision, success, timeout
    let collided = match ctx.world {
        Some((world, radius)) => world.collides([last.x, last.y], radius),
        None => last.rho > ctx.stop_radius && last.step < ctx.max_steps,
    };
    let outcome = if last.u.is_some() {
        return Err(Error::invalid("trace was truncated: final row carries a command"));
    } else if collided {
        Termination::Collision
    } else if last.rho <= ctx.stop_radius {
        Termination::Success
    } else {
        Termination::Timeout
    };
    Ok(Metrics {
        traveled_distance,
        elapsed_time: last.t,
        smoothness_deg,
        target_error: last.rho,
        outcome,
        steps: rows.len() - 1,
    })
}

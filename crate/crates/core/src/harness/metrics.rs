use serde::{Deserialize, Serialize};

use crate::behaviors::distance_to;
use crate::error::{Error, Result};
use crate::sim::{wrap_angle, Pose, Termination, TrajectoryTrace};

/// Per-run navigation metrics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Sum of per-step displacements, meters.
    pub traveled_distance: f64,
    /// Steps × dt, seconds.
    pub elapsed_time: f64,
    /// Mean absolute heading change per step, degrees.
    pub smoothness_deg: f64,
    /// Distance from the final pose to the target, meters.
    pub target_error: f64,
    pub outcome: Termination,
    pub steps: usize,
}

pub(crate) fn path_metrics(poses: &[Pose]) -> (f64, f64) {
    let mut dist = 0.0;
    let mut turn = 0.0;
    for w in poses.windows(2) {
        dist += (w[1].x - w[0].x).hypot(w[1].y - w[0].y);
        turn += wrap_angle(w[1].theta - w[0].theta).abs();
    }
    let steps = poses.len().saturating_sub(1);
    let smooth = if steps == 0 { 0.0 } else { (turn / steps as f64).to_degrees() };
    (dist, smooth)
}

pub fn compute_metrics(trace: &TrajectoryTrace, target: &Pose) -> Result<Metrics> {
    let last = trace
        .records
        .last()
        .ok_or_else(|| Error::invalid("cannot compute metrics of an empty trace"))?;
    let poses: Vec<Pose> = trace.poses().collect();
    let (traveled_distance, smoothness_deg) = path_metrics(&poses);
    Ok(Metrics {
        traveled_distance,
        elapsed_time: last.t,
        smoothness_deg,
        target_error: distance_to(&last.pose, target),
        outcome: trace.termination,
        steps: trace.steps(),
    })
}

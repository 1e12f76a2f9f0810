use std::fmt;

use serde::{Deserialize, Serialize};

use super::kinematics::{step_kinematics, Pose, RobotParams};
use super::sensor::{sense, SensorConfig};
use super::world::World;
use crate::behaviors::{compute_nav_inputs, NavInputs};
use crate::error::Result;
use crate::fusion::VelocityCommand;

/// Maximum firing strength of each behavior in one control step; 0 for a
/// behavior that is switched off.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BehaviorStrengths {
    pub lm: f64,
    pub oa: f64,
    pub gr: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub command: VelocityCommand,
    pub strengths: BehaviorStrengths,
}

/// Maps navigation inputs to a command. Implementations are stateless; any
/// history the controller needs is carried by [`NavInputs`].
pub trait Controller {
    fn decide(&self, inputs: &NavInputs) -> Decision;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EpisodeConfig {
    /// Control and integration period, seconds.
    pub dt: f64,
    pub max_steps: usize,
    /// Success once the robot center is this close to the target.
    pub stop_radius: f64,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig { dt: 0.1, max_steps: 5000, stop_radius: 0.05 }
    }
}

impl EpisodeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(crate::Error::config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.stop_radius.is_finite() && self.stop_radius >= 0.0) {
            return Err(crate::Error::config("stop radius must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Success,
    Collision,
    Timeout,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Success => "success",
            Termination::Collision => "collision",
            Termination::Timeout => "timeout",
        })
    }
}

/// State at one control step. The final record of a trace carries no
/// command: it is the state in which the episode ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub step: usize,
    pub t: f64,
    pub pose: Pose,
    pub inputs: NavInputs,
    pub decision: Option<Decision>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryTrace {
    pub dt: f64,
    pub records: Vec<TraceRecord>,
    pub termination: Termination,
}

impl TrajectoryTrace {
    /// Number of commands that were executed.
    pub fn steps(&self) -> usize {
        self.records.iter().filter(|r| r.decision.is_some()).count()
    }

    pub fn final_pose(&self) -> Option<Pose> {
        self.records.last().map(|r| r.pose)
    }

    pub fn poses(&self) -> impl Iterator<Item = Pose> + '_ {
        self.records.iter().map(|r| r.pose)
    }
}

/// Runs sense → infer → fuse → integrate until the target is reached, the
/// body touches an obstacle, or the step budget runs out.
pub fn run_episode<C: Controller + ?Sized>(
    world: &World,
    start: Pose,
    target: Pose,
    controller: &C,
    robot: &RobotParams,
    sensors: &SensorConfig,
    limits: &EpisodeConfig,
) -> TrajectoryTrace {
    let mut records = Vec::new();
    let mut pose = start;
    let mut prev_rho = None;
    let mut step = 0;
    let termination = loop {
        let readings = sense(world, &pose, sensors);
        let inputs = compute_nav_inputs(&pose, &target, prev_rho, &readings)
            .expect("simulator produces eight finite readings");
        let t = step as f64 * limits.dt;
        let outcome = if world.collides([pose.x, pose.y], robot.body_radius) {
            Some(Termination::Collision)
        } else if inputs.rho <= limits.stop_radius {
            Some(Termination::Success)
        } else if step >= limits.max_steps {
            Some(Termination::Timeout)
        } else {
            None
        };
        if let Some(outcome) = outcome {
            records.push(TraceRecord { step, t, pose, inputs, decision: None });
            break outcome;
        }
        let decision = controller.decide(&inputs);
        records.push(TraceRecord { step, t, pose, inputs, decision: Some(decision) });
        pose = step_kinematics(&pose, &decision.command, limits.dt);
        prev_rho = Some(inputs.rho);
        step += 1;
    };
    TrajectoryTrace { dt: limits.dt, records, termination }
}

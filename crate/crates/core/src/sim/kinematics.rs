use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::VelocityCommand;

/// Wraps an angle into `[-π, π]`; angles already in range are returned as is.
pub fn wrap_angle(a: f64) -> f64 {
    if (-PI..=PI).contains(&a) {
        a
    } else {
        (a + PI).rem_euclid(TAU) - PI
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Heading in radians, counter-clockwise from +x.
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose { x, y, theta: wrap_angle(theta) }
    }

    pub fn from_degrees(x: f64, y: f64, theta_deg: f64) -> Self {
        Pose::new(x, y, theta_deg.to_radians())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.theta.is_finite()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RobotParams {
    /// Only used for wheel speed conversion; the simulator works on (u, ω).
    pub wheel_radius: f64,
    pub axle_length: f64,
    pub u_limits: [f64; 2],
    pub omega_limits: [f64; 2],
    /// Radius of the disc used for collision checks.
    pub body_radius: f64,
}

impl Default for RobotParams {
    fn default() -> Self {
        RobotParams {
            wheel_radius: 0.085,
            axle_length: 0.265,
            u_limits: [0.0, 1.3],
            omega_limits: [-4.3, 4.3],
            body_radius: 0.18,
        }
    }
}

impl RobotParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.wheel_radius, self.axle_length, self.body_radius];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::config("robot wheel radius, axle length and body radius must be > 0"));
        }
        for (name, [lo, hi]) in [("u_limits", self.u_limits), ("omega_limits", self.omega_limits)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!("robot {name} [{lo}, {hi}] are not ordered")));
            }
        }
        Ok(())
    }

    pub fn within_limits(&self, cmd: &VelocityCommand) -> bool {
        (self.u_limits[0]..=self.u_limits[1]).contains(&cmd.u)
            && (self.omega_limits[0]..=self.omega_limits[1]).contains(&cmd.omega)
    }

    /// Left and right wheel angular speeds (rad/s) realizing `cmd`.
    pub fn wheel_speeds(&self, cmd: &VelocityCommand) -> (f64, f64) {
        let half = self.axle_length / 2.0;
        (
            (cmd.u - cmd.omega * half) / self.wheel_radius,
            (cmd.u + cmd.omega * half) / self.wheel_radius,
        )
    }
}

/// One explicit Euler step of the unicycle model.
pub fn step_kinematics(pose: &Pose, cmd: &VelocityCommand, dt: f64) -> Pose {
    Pose {
        x: pose.x + cmd.u * pose.theta.cos() * dt,
        y: pose.y + cmd.u * pose.theta.sin() * dt,
        theta: wrap_angle(pose.theta + cmd.omega * dt),
    }
}

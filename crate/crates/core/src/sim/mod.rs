//! Planar differential-drive simulation with an ultrasonic range ring.

mod episode;
mod kinematics;
mod sensor;
mod world;

pub use episode::{
    run_episode, BehaviorStrengths, Controller, Decision, EpisodeConfig, Termination, TraceRecord,
    TrajectoryTrace,
};
pub use kinematics::{step_kinematics, wrap_angle, Pose, RobotParams};
pub use sensor::{sense, SensorConfig};
pub use world::{raycast, Point, Segment, World, WorldFile};

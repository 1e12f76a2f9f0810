//! Behavior-based navigation of a differential-drive robot.
//!
//! Three fuzzy behaviors (local minimum avoidance, obstacle avoidance, goal
//! reaching) stop after inference; their aggregated output memberships are
//! fused by lexicographic multi-objective optimization into one velocity
//! command. A small planar simulator and a scenario harness exercise the
//! controller end to end.

pub mod baselines;
pub mod behaviors;
pub mod config;
pub mod controller;
mod error;
pub mod fusion;
pub mod fuzzy;
pub mod harness;
pub mod sim;

pub use config::Config;
pub use controller::{NavigationController, Strategy};
pub use error::{Error, Result};

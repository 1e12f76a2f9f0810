//! Complete controller and simulator configuration.
//!
//! The on-disk form is JSON. Every section is optional and falls back to the
//! built-in defaults, so a file may override only what it needs, e.g.
//!
//! ```json
//! { "fusion": { "grid_step_omega": 0.02 }, "episode": { "dt": 0.3 } }
//! ```
//!
//! Keys:
//! - `variables`: list of `{ name, universe: [lo, hi], terms: { label: mf } }`
//!   where `mf` is `{ "shape": "gaussian", "center", "sigma" }` or
//!   `{ "shape": "sigmoid", "slope", "inflection" }`
//! - `behaviors`: list of `{ kind, priority, inputs, outputs, rules }`, rules
//!   being `{ "if": { var: term }, "then": { "u": term, "omega": term } }`
//! - `fusion`: `grid_step_u`, `grid_step_omega`, `epsilon`
//! - `robot`: `wheel_radius`, `axle_length`, `u_limits`, `omega_limits`, `body_radius`
//! - `sensors`: `mount_angles`, `cone_half_angle`, `max_range`, `min_range`, `rays_per_cone`
//! - `episode`: `dt`, `max_steps`, `stop_radius`
//! - `baseline_weights`: `lm`, `oa`, `gr`

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::BehaviorWeights;
use crate::behaviors::{default_behavior_config, default_variables, BehaviorConfig, BehaviorKind, BehaviorSpec};
use crate::error::{Error, Result};
use crate::fusion::{CommandDomain, FusionConfig};
use crate::fuzzy::LinguisticVariable;
use crate::sim::{EpisodeConfig, RobotParams, SensorConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub variables: Vec<LinguisticVariable>,
    pub behaviors: Vec<BehaviorConfig>,
    pub fusion: FusionConfig,
    pub robot: RobotParams,
    pub sensors: SensorConfig,
    pub episode: EpisodeConfig,
    pub baseline_weights: BehaviorWeights,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            variables: default_variables(),
            behaviors: BehaviorKind::ALL.iter().map(|&k| default_behavior_config(k)).collect(),
            fusion: FusionConfig::default(),
            robot: RobotParams::default(),
            sensors: SensorConfig::default(),
            episode: EpisodeConfig::default(),
            baseline_weights: BehaviorWeights::default(),
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let cfg: Config =
            serde_json::from_str(&text).map_err(|source| Error::Parse { path: path.into(), source })?;
        cfg.validate().map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        for v in &self.variables {
            v.validate()?;
        }
        let specs = self.behavior_specs()?;
        let mut priorities: Vec<u32> = specs.iter().map(|s| s.priority).collect();
        priorities.sort_unstable();
        if priorities.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("behavior priorities must be unique"));
        }
        let mut kinds: Vec<BehaviorKind> = specs.iter().map(|s| s.kind).collect();
        kinds.sort_unstable();
        if kinds.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("each behavior kind may appear only once"));
        }
        self.robot.validate()?;
        self.sensors.validate()?;
        self.episode.validate()?;
        self.baseline_weights.validate()?;
        self.domain()?;
        Ok(())
    }

    /// Behaviors in descending order of importance.
    pub fn behavior_specs(&self) -> Result<Vec<BehaviorSpec>> {
        let mut specs = self
            .behaviors
            .iter()
            .map(|b| BehaviorSpec::from_config(b, &self.variables))
            .collect::<Result<Vec<_>>>()?;
        specs.sort_by_key(|s| s.priority);
        Ok(specs)
    }

    pub fn domain(&self) -> Result<CommandDomain> {
        CommandDomain::from_config(&self.fusion, self.robot.u_limits, self.robot.omega_limits)
    }
}

//! Scenario files: a world, start and target poses, and run settings.
//!
//! ```json
//! {
//!   "name": "u-trap",
//!   "world": "worlds/u-trap.json",
//!   "start": [-6, -6, 0],
//!   "target": [-2.5, -1.5, 0],
//!   "strategy": "bbfm",
//!   "disable": ["local_minimum_avoidance"],
//!   "overrides": { "dt": 0.05, "terms": { "omega": { "Po": { "shape": "gaussian", "center": 1.4, "sigma": 0.5 } } } }
//! }
//! ```
//!
//! Poses are `[x, y, heading in degrees]`. The world path is relative to the
//! scenario file.

use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::behaviors::BehaviorKind;
use crate::config::Config;
use crate::controller::Strategy;
use crate::error::{Error, Result};
use crate::fuzzy::MembershipFunction;
use crate::sim::{Pose, World};

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../scenarios/", $name, ".json")),
             include_str!(concat!("../../scenarios/worlds/", $name, ".json")))),*]
    };
}

/// `(name, scenario json, world json)` for every scenario shipped with the crate.
const BUNDLED: &[(&str, &str, &str)] =
    bundled!["open-field", "corridor", "scenario-1", "office-like", "u-trap", "nested-trap"];

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|b| b.0)
}

/// Parameter overrides layered over a base [`Config`]. Unset fields keep the
/// base value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Overrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_step_u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_step_omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    /// Replacement membership functions, keyed by variable then term.
    #[serde(skip_serializing_if = "IndexMap::is_empty")]
    pub terms: IndexMap<String, IndexMap<String, MembershipFunction>>,
}

impl Overrides {
    /// Fields set in `other` win.
    pub fn merged(&self, other: &Overrides) -> Overrides {
        let mut terms = self.terms.clone();
        for (var, ts) in &other.terms {
            let slot = terms.entry(var.clone()).or_default();
            for (t, mf) in ts {
                slot.insert(t.clone(), *mf);
            }
        }
        Overrides {
            grid_step_u: other.grid_step_u.or(self.grid_step_u),
            grid_step_omega: other.grid_step_omega.or(self.grid_step_omega),
            epsilon: other.epsilon.or(self.epsilon),
            dt: other.dt.or(self.dt),
            stop_radius: other.stop_radius.or(self.stop_radius),
            max_steps: other.max_steps.or(self.max_steps),
            terms,
        }
    }

    pub fn apply(&self, base: &Config) -> Result<Config> {
        let mut cfg = base.clone();
        if let Some(v) = self.grid_step_u {
            cfg.fusion.grid_step_u = v;
        }
        if let Some(v) = self.grid_step_omega {
            cfg.fusion.grid_step_omega = v;
        }
        if let Some(v) = self.epsilon {
            cfg.fusion.epsilon = v;
        }
        if let Some(v) = self.dt {
            cfg.episode.dt = v;
        }
        if let Some(v) = self.stop_radius {
            cfg.episode.stop_radius = v;
        }
        if let Some(v) = self.max_steps {
            cfg.episode.max_steps = v;
        }
        for (var, ts) in &self.terms {
            let lv = cfg
                .variables
                .iter_mut()
                .find(|v| &v.name == var)
                .ok_or_else(|| Error::config(format!("overrides.terms: unknown variable `{var}`")))?;
            for (term, mf) in ts {
                match lv.terms.get_mut(term) {
                    Some(slot) => *slot = *mf,
                    None => {
                        return Err(Error::config(format!("overrides.terms.{var}: unknown term `{term}`")))
                    }
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_strategy() -> Strategy {
    Strategy::Bbfm
}

/// On-disk scenario description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub world: PathBuf,
    /// `[x, y, heading_deg]`
    pub start: [f64; 3],
    pub target: [f64; 3],
    #[serde(default = "default_strategy")]
    pub strategy: Strategy,
    #[serde(default)]
    pub disable: Vec<BehaviorKind>,
    #[serde(default)]
    pub overrides: Overrides,
    /// Reserved; the simulation is deterministic and does not draw numbers.
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| Error::config(format!("scenario: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.iter().chain(&self.target).all(|v| v.is_finite()) {
            return Err(Error::config(format!("scenario `{}`: start and target must be finite", self.name)));
        }
        Ok(())
    }

    pub fn start_pose(&self) -> Pose {
        Pose::from_degrees(self.start[0], self.start[1], self.start[2])
    }

    pub fn target_pose(&self) -> Pose {
        Pose::from_degrees(self.target[0], self.target[1], self.target[2])
    }
}

/// A scenario with its world loaded.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub world: World,
}

impl Scenario {
    pub fn bundled(name: &str) -> Result<Self> {
        let (_, scenario, world) = BUNDLED.iter().find(|b| b.0 == name).ok_or_else(|| {
            let known: Vec<&str> = bundled_names().collect();
            Error::config(format!("no bundled scenario `{name}` (known: {})", known.join(", ")))
        })?;
        let config = ScenarioConfig::from_json(scenario)?;
        let world = World::from_json(world)?;
        Ok(Scenario { config, world })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let config: ScenarioConfig =
            serde_json::from_str(&text).map_err(|source| Error::Parse { path: path.into(), source })?;
        config.validate()?;
        let world_path = path.parent().unwrap_or(Path::new(".")).join(&config.world);
        let world = World::load(&world_path)?;
        Ok(Scenario { config, world })
    }

    /// A bundled name, or else a path to a scenario file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if bundled_names().any(|n| n == name_or_path) {
            Scenario::bundled(name_or_path)
        } else if Path::new(name_or_path).exists() {
            Scenario::load(Path::new(name_or_path))
        } else {
            let known: Vec<&str> = bundled_names().collect();
            Err(Error::config(format!(
                "`{name_or_path}` is neither a bundled scenario ({}) nor an existing file",
                known.join(", ")
            )))
        }
    }

    /// Base configuration with the scenario's overrides applied.
    pub fn effective_config(&self, base: &Config) -> Result<Config> {
        self.config.overrides.apply(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_scenario_loads() {
        for name in bundled_names() {
            let s = Scenario::bundled(name).unwrap();
            assert_eq!(s.config.name, name);
            assert!(!s.world.description.is_empty(), "{name} documents its map");
            let start = s.config.start_pose();
            assert!(s.world.clearance([start.x, start.y]) > 0.5, "{name} starts clear of obstacles");
        }
    }

    #[test]
    fn unknown_bundled_name_lists_known() {
        let err = Scenario::bundled("maze").unwrap_err().to_string();
        assert!(err.contains("u-trap"), "{err}");
    }

    #[test]
    fn overrides_apply_and_merge() {
        let a = Overrides { dt: Some(0.2), max_steps: Some(10), ..Default::default() };
        let b = Overrides { dt: Some(0.05), ..Default::default() };
        let m = a.merged(&b);
        assert_eq!((m.dt, m.max_steps), (Some(0.05), Some(10)));
        let cfg = m.apply(&Config::default()).unwrap();
        assert_eq!(cfg.episode.dt, 0.05);
        assert_eq!(cfg.episode.max_steps, 10);
    }

    #[test]
    fn term_override_replaces_membership() {
        let text = r#"{ "terms": { "omega": { "Po": { "shape": "gaussian", "center": 1.0, "sigma": 0.3 } } } }"#;
        let o: Overrides = serde_json::from_str(text).unwrap();
        let cfg = o.apply(&Config::default()).unwrap();
        let omega = cfg.variables.iter().find(|v| v.name == "omega").unwrap();
        assert_eq!(omega.terms["Po"], MembershipFunction::gaussian(1.0, 0.3));
    }

    #[test]
    fn bad_overrides_are_config_errors() {
        let o: Overrides = serde_json::from_str(r#"{ "terms": { "omega": { "Huge": { "shape": "gaussian", "center": 1.0, "sigma": 0.3 } } } }"#).unwrap();
        assert!(matches!(o.apply(&Config::default()), Err(Error::Config(_))));
        let o = Overrides { grid_step_u: Some(-1.0), ..Default::default() };
        assert!(o.apply(&Config::default()).is_err());
        assert!(serde_json::from_str::<Overrides>(r#"{ "dtt": 1 }"#).is_err());
    }

    #[test]
    fn scenario_file_resolves_world_relative_to_itself() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("maps")).unwrap();
        std::fs::write(dir.path().join("maps/w.json"), r#"{ "walls": [[[1, -1], [1, 1]]] }"#).unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(&path, r#"{ "name": "s", "world": "maps/w.json", "start": [0, 0, 0], "target": [3, 0, 0] }"#)
            .unwrap();
        let s = Scenario::resolve(path.to_str().unwrap()).unwrap();
        assert_eq!(s.world.segments().len(), 1);
        assert_eq!(s.config.strategy, Strategy::Bbfm);
    }

    #[test]
    fn missing_world_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(&path, r#"{ "name": "s", "world": "nope.json", "start": [0, 0, 0], "target": [3, 0, 0] }"#)
            .unwrap();
        let err = Scenario::load(&path).unwrap_err().to_string();
        assert!(err.contains("nope.json"), "{err}");
    }
}

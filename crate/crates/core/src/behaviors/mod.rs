//! Navigation inputs and the three fuzzy behaviors.

mod tables;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{
    evaluate_rulebase, AggregatedMembership, CrispInputs, LinguisticVariable, MembershipFunction as Mf,
    Rule, RuleBase, Universe,
};
use crate::sim::{wrap_angle, Pose};

pub const D_LEFT: &str = "d_l";
pub const D_FRONT: &str = "d_f";
pub const D_RIGHT: &str = "d_r";
pub const ALPHA: &str = "alpha";
pub const RHO: &str = "rho";
pub const E_D: &str = "e_d";
pub const U: &str = "u";
pub const OMEGA: &str = "omega";

/// Number of range sensors the grouping below expects.
pub const SENSOR_COUNT: usize = 8;

/// Crisp controller inputs derived from pose, target and range readings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NavInputs {
    pub d_l: f64,
    pub d_f: f64,
    pub d_r: f64,
    /// Bearing of the target relative to the heading, in `[-π, π]`.
    pub alpha: f64,
    pub rho: f64,
    /// Change of `rho` since the previous control step.
    pub e_d: f64,
}

impl CrispInputs for NavInputs {
    fn crisp(&self, variable: &str) -> Option<f64> {
        match variable {
            D_LEFT => Some(self.d_l),
            D_FRONT => Some(self.d_f),
            D_RIGHT => Some(self.d_r),
            ALPHA => Some(self.alpha),
            RHO => Some(self.rho),
            E_D => Some(self.e_d),
            _ => None,
        }
    }
}

pub fn distance_to(pose: &Pose, target: &Pose) -> f64 {
    (target.x - pose.x).hypot(target.y - pose.y)
}

/// Builds [`NavInputs`] from the current pose and the eight range readings.
///
/// Sensors are indexed right to left: 1–3 form the right group, 4–5 the
/// front and 6–8 the left. `prev_rho` is `None` on the first control step,
/// which yields `e_d = 0`.
pub fn compute_nav_inputs(
    pose: &Pose,
    target: &Pose,
    prev_rho: Option<f64>,
    readings: &[f64],
) -> Result<NavInputs> {
    if readings.len() != SENSOR_COUNT {
        return Err(Error::invalid(format!(
            "expected {SENSOR_COUNT} range readings, got {}",
            readings.len()
        )));
    }
    if let Some(bad) = readings.iter().find(|d| !d.is_finite() || **d < 0.0) {
        return Err(Error::invalid(format!("range reading {bad} is not a distance")));
    }
    if ![pose.x, pose.y, pose.theta, target.x, target.y].iter().all(|v| v.is_finite()) {
        return Err(Error::invalid("pose and target must be finite"));
    }
    let group_min = |s: &[f64]| s.iter().copied().fold(f64::INFINITY, f64::min);
    let rho = distance_to(pose, target);
    let bearing = (target.y - pose.y).atan2(target.x - pose.x);
    Ok(NavInputs {
        d_r: group_min(&readings[0..3]),
        d_f: group_min(&readings[3..5]),
        d_l: group_min(&readings[5..8]),
        alpha: wrap_angle(bearing - pose.theta),
        rho,
        e_d: prev_rho.map_or(0.0, |prev| rho - prev),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BehaviorKind {
    LocalMinimumAvoidance,
    ObstacleAvoidance,
    GoalReaching,
}

impl BehaviorKind {
    pub const ALL: [BehaviorKind; 3] = [
        BehaviorKind::LocalMinimumAvoidance,
        BehaviorKind::ObstacleAvoidance,
        BehaviorKind::GoalReaching,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            BehaviorKind::LocalMinimumAvoidance => "LM",
            BehaviorKind::ObstacleAvoidance => "OA",
            BehaviorKind::GoalReaching => "GR",
        }
    }

    pub fn default_priority(self) -> u32 {
        match self {
            BehaviorKind::LocalMinimumAvoidance => 1,
            BehaviorKind::ObstacleAvoidance => 2,
            BehaviorKind::GoalReaching => 3,
        }
    }
}

impl fmt::Display for BehaviorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for BehaviorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "lm" | "local_minimum" | "local_minimum_avoidance" => Ok(BehaviorKind::LocalMinimumAvoidance),
            "oa" | "obstacle" | "obstacle_avoidance" => Ok(BehaviorKind::ObstacleAvoidance),
            "gr" | "goal" | "goal_reaching" => Ok(BehaviorKind::GoalReaching),
            _ => Err(Error::invalid(format!("unknown behavior `{s}` (expected lm, oa or gr)"))),
        }
    }
}

/// Serializable description of a behavior: which variables it reads and its
/// rules, by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BehaviorConfig {
    pub kind: BehaviorKind,
    pub priority: u32,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rules: Vec<Rule>,
}

#[derive(Clone, Debug)]
pub struct BehaviorSpec {
    pub kind: BehaviorKind,
    /// 1 is the most important.
    pub priority: u32,
    pub rule_base: RuleBase,
}

/// A behavior's un-defuzzified outputs for one control step.
#[derive(Clone, Debug)]
pub struct BehaviorOutput {
    pub kind: BehaviorKind,
    pub u: AggregatedMembership,
    pub omega: AggregatedMembership,
}

impl BehaviorOutput {
    /// Largest rule firing strength of the step.
    pub fn max_strength(&self) -> f64 {
        self.u.max_strength().max(self.omega.max_strength())
    }
}

impl BehaviorSpec {
    pub fn from_config(cfg: &BehaviorConfig, variables: &[LinguisticVariable]) -> Result<Self> {
        let lookup = |name: &String| {
            variables
                .iter()
                .find(|v| &v.name == name)
                .cloned()
                .ok_or_else(|| Error::config(format!("behavior {}: unknown variable `{name}`", cfg.kind)))
        };
        let inputs = cfg.inputs.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let outputs = cfg.outputs.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        for required in [U, OMEGA] {
            if !cfg.outputs.iter().any(|o| o == required) {
                return Err(Error::config(format!("behavior {} must output `{required}`", cfg.kind)));
            }
        }
        let rule_base = RuleBase::new(inputs, outputs, cfg.rules.clone())
            .map_err(|e| Error::config(format!("behavior {}: {e}", cfg.kind)))?;
        Ok(BehaviorSpec { kind: cfg.kind, priority: cfg.priority, rule_base })
    }

    pub fn to_config(&self) -> BehaviorConfig {
        BehaviorConfig {
            kind: self.kind,
            priority: self.priority,
            inputs: self.rule_base.inputs().iter().map(|v| v.name.clone()).collect(),
            outputs: self.rule_base.outputs().iter().map(|v| v.name.clone()).collect(),
            rules: self.rule_base.rules().to_vec(),
        }
    }

    pub fn evaluate(&self, inputs: &NavInputs) -> Result<BehaviorOutput> {
        let mut out: IndexMap<String, AggregatedMembership> = evaluate_rulebase(&self.rule_base, inputs)?;
        let mut take = |name: &str| {
            out.shift_remove(name)
                .ok_or_else(|| Error::config(format!("behavior {} has no `{name}` output", self.kind)))
        };
        Ok(BehaviorOutput { kind: self.kind, u: take(U)?, omega: take(OMEGA)? })
    }
}

fn universe(lo: f64, hi: f64) -> Universe {
    Universe::new(lo, hi).expect("static universe")
}

fn distance_variable(name: &str) -> LinguisticVariable {
    LinguisticVariable::new(
        name,
        universe(0.0, 4.0),
        [
            ("N", Mf::sigmoid(-10.0, 0.6)),
            ("M", Mf::gaussian(1.0, 0.35)),
            ("F", Mf::sigmoid(6.0, 1.4)),
        ],
    )
}

/// Default linguistic variables shared by all behaviors.
///
/// Edge terms saturate (sigmoid), interior terms are unimodal (Gaussian).
pub fn default_variables() -> Vec<LinguisticVariable> {
    use std::f64::consts::PI;
    vec![
        distance_variable(D_LEFT),
        distance_variable(D_FRONT),
        distance_variable(D_RIGHT),
        LinguisticVariable::new(
            ALPHA,
            universe(-PI, PI),
            [
                ("LN", Mf::sigmoid(-4.0, -1.2)),
                ("N", Mf::gaussian(-0.6, 0.35)),
                ("Z", Mf::gaussian(0.0, 0.25)),
                ("P", Mf::gaussian(0.6, 0.35)),
                ("LP", Mf::sigmoid(4.0, 1.2)),
            ],
        ),
        LinguisticVariable::new(
            RHO,
            universe(0.0, 20.0),
            [
                ("N", Mf::sigmoid(-8.0, 0.8)),
                ("M", Mf::gaussian(2.5, 1.0)),
                ("F", Mf::sigmoid(2.0, 4.5)),
            ],
        ),
        LinguisticVariable::new(E_D, universe(-1.0, 1.0), [("PT", Mf::sigmoid(30.0, 0.02))]),
        LinguisticVariable::new(
            U,
            universe(0.0, 1.3),
            [
                ("S", Mf::gaussian(0.15, 0.12)),
                ("M", Mf::gaussian(0.55, 0.18)),
                ("L", Mf::sigmoid(8.0, 0.9)),
            ],
        ),
        LinguisticVariable::new(
            OMEGA,
            universe(-4.3, 4.3),
            [
                ("LNo", Mf::sigmoid(-3.0, -2.2)),
                ("No", Mf::gaussian(-1.6, 0.5)),
                ("Zo", Mf::gaussian(0.0, 0.4)),
                ("Po", Mf::gaussian(1.6, 0.5)),
                ("LPo", Mf::sigmoid(3.0, 2.2)),
            ],
        ),
    ]
}

fn strings(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Default configuration of one behavior.
pub fn default_behavior_config(kind: BehaviorKind) -> BehaviorConfig {
    let priority = kind.default_priority();
    let outputs = strings(&[U, OMEGA]);
    match kind {
        BehaviorKind::ObstacleAvoidance => BehaviorConfig {
            kind,
            priority,
            inputs: strings(&[D_LEFT, D_FRONT, D_RIGHT, ALPHA]),
            outputs,
            rules: tables::OBSTACLE_AVOIDANCE
                .iter()
                .map(|([l, f, r], alpha, [u, w])| {
                    let mut ante = vec![(D_LEFT, *l), (D_FRONT, *f), (D_RIGHT, *r)];
                    ante.extend(alpha.map(|a| (ALPHA, a)));
                    Rule::new(ante, [(U, *u), (OMEGA, *w)])
                })
                .collect(),
        },
        BehaviorKind::GoalReaching => BehaviorConfig {
            kind,
            priority,
            inputs: strings(&[RHO, ALPHA]),
            outputs,
            rules: tables::GOAL_REACHING
                .iter()
                .map(|([rho, alpha], [u, w])| Rule::new([(RHO, *rho), (ALPHA, *alpha)], [(U, *u), (OMEGA, *w)]))
                .collect(),
        },
        BehaviorKind::LocalMinimumAvoidance => BehaviorConfig {
            kind,
            priority,
            inputs: strings(&[D_LEFT, D_FRONT, D_RIGHT, E_D, ALPHA]),
            outputs,
            rules: tables::LOCAL_MINIMUM
                .iter()
                .map(|([l, f, r], trend, alpha, [u, w])| {
                    let mut ante = vec![(D_LEFT, *l), (D_FRONT, *f), (D_RIGHT, *r)];
                    ante.extend(trend.map(|t| (E_D, t)));
                    ante.push((ALPHA, *alpha));
                    Rule::new(ante, [(U, *u), (OMEGA, *w)])
                })
                .collect(),
        },
    }
}

fn build_default(kind: BehaviorKind) -> BehaviorSpec {
    BehaviorSpec::from_config(&default_behavior_config(kind), &default_variables())
        .expect("built-in rule tables are consistent")
}

pub fn build_obstacle_avoidance() -> BehaviorSpec {
    build_default(BehaviorKind::ObstacleAvoidance)
}

pub fn build_goal_reaching() -> BehaviorSpec {
    build_default(BehaviorKind::GoalReaching)
}

pub fn build_local_minimum() -> BehaviorSpec {
    build_default(BehaviorKind::LocalMinimumAvoidance)
}

//! Behavior evaluation plus a fusion strategy, packaged for the simulator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{fuse_baseline, BaselineStrategy};
use crate::behaviors::{BehaviorKind, BehaviorOutput, BehaviorSpec, NavInputs};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::fusion::{fuse, CommandDomain, VelocityCommand};
use crate::sim::{BehaviorStrengths, Controller, Decision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Lexicographic multi-objective fusion of the un-defuzzified outputs.
    Bbfm,
    /// Defuzzify each behavior, then combine.
    Fig4a,
    /// Combine the output sets, then defuzzify.
    Fig4b,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Bbfm, Strategy::Fig4a, Strategy::Fig4b];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bbfm => "bbfm",
            Strategy::Fig4a => "fig4a",
            Strategy::Fig4b => "fig4b",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bbfm" => Ok(Strategy::Bbfm),
            "fig4a" | "defuzzify-then-combine" => Ok(Strategy::Fig4a),
            "fig4b" | "combine-then-defuzzify" => Ok(Strategy::Fig4b),
            _ => Err(Error::invalid(format!("unknown strategy `{s}` (expected bbfm, fig4a or fig4b)"))),
        }
    }
}

pub struct NavigationController {
    /// Enabled behaviors, most important first.
    behaviors: Vec<BehaviorSpec>,
    domain: CommandDomain,
    strategy: Strategy,
    baseline: BaselineStrategy,
}

impl NavigationController {
    pub fn new(config: &Config, strategy: Strategy, disabled: &[BehaviorKind]) -> Result<Self> {
        config.validate()?;
        let behaviors: Vec<BehaviorSpec> = config
            .behavior_specs()?
            .into_iter()
            .filter(|b| !disabled.contains(&b.kind))
            .collect();
        if behaviors.is_empty() {
            return Err(Error::config("all behaviors are disabled"));
        }
        let probe = NavInputs { d_l: 1.0, d_f: 1.0, d_r: 1.0, alpha: 0.0, rho: 1.0, e_d: 0.0 };
        for b in &behaviors {
            // surfaces rule bases that read variables the simulator does not provide
            b.evaluate(&probe)
                .map_err(|e| Error::config(format!("behavior {}: {e}", b.kind)))?;
        }
        let baseline = match strategy {
            Strategy::Fig4b => BaselineStrategy::CombineThenDefuzzify,
            _ => BaselineStrategy::DefuzzifyThenCombine { weights: config.baseline_weights },
        };
        Ok(NavigationController { behaviors, domain: config.domain()?, strategy, baseline })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn domain(&self) -> &CommandDomain {
        &self.domain
    }

    /// Behavior outputs in priority order.
    pub fn outputs(&self, inputs: &NavInputs) -> Vec<BehaviorOutput> {
        self.behaviors
            .iter()
            .map(|b| b.evaluate(inputs).expect("rule bases validated at construction"))
            .collect()
    }

    pub fn fuse_outputs(&self, outputs: &[BehaviorOutput]) -> VelocityCommand {
        match self.strategy {
            Strategy::Bbfm => fuse(outputs, &self.domain),
            Strategy::Fig4a | Strategy::Fig4b => fuse_baseline(&self.baseline, outputs, &self.domain),
        }
    }
}

impl Controller for NavigationController {
    fn decide(&self, inputs: &NavInputs) -> Decision {
        let outputs = self.outputs(inputs);
        let mut strengths = BehaviorStrengths::default();
        for o in &outputs {
            let slot = match o.kind {
                BehaviorKind::LocalMinimumAvoidance => &mut strengths.lm,
                BehaviorKind::ObstacleAvoidance => &mut strengths.oa,
                BehaviorKind::GoalReaching => &mut strengths.gr,
            };
            *slot = o.max_strength();
        }
        Decision { command: self.fuse_outputs(&outputs), strengths }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("moasm".parse::<Strategy>().is_err());
    }

    #[test]
    fn disabled_behavior_reports_zero_strength() {
        let c = NavigationController::new(
            &Config::default(),
            Strategy::Bbfm,
            &[BehaviorKind::LocalMinimumAvoidance],
        )
        .unwrap();
        let d = c.decide(&NavInputs { d_l: 4.0, d_f: 4.0, d_r: 4.0, alpha: 0.5, rho: 3.0, e_d: 0.1 });
        assert_eq!(d.strengths.lm, 0.0);
        assert!(d.strengths.gr > 0.5);
        assert!(c.domain().contains(&d.command));
    }

    #[test]
    fn all_disabled_is_config_error() {
        assert!(NavigationController::new(&Config::default(), Strategy::Bbfm, &BehaviorKind::ALL).is_err());
    }

    #[test]
    fn rule_base_reading_unknown_variable_rejected() {
        let mut cfg = Config::default();
        let mut extra = cfg.variables[0].clone();
        extra.name = "d_b".into();
        cfg.variables.push(extra);
        cfg.behaviors[0].inputs.push("d_b".into());
        cfg.behaviors[0].rules[0].antecedent.insert("d_b".into(), "N".into());
        assert!(NavigationController::new(&cfg, Strategy::Bbfm, &[]).is_err());
    }
}

//! Conventional fuzzy command fusion, used as comparison baselines.
//!
//! Both variants defuzzify with the centroid method; they differ only in
//! whether behaviors are combined before or after defuzzification.

use serde::{Deserialize, Serialize};

use crate::behaviors::{BehaviorKind, BehaviorOutput};
use crate::error::{Error, Result};
use crate::fusion::{CommandDomain, Objective, VelocityCommand};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BehaviorWeights {
    pub lm: f64,
    pub oa: f64,
    pub gr: f64,
}

impl Default for BehaviorWeights {
    fn default() -> Self {
        BehaviorWeights { lm: 1.0, oa: 1.0, gr: 1.0 }
    }
}

impl BehaviorWeights {
    pub fn get(&self, kind: BehaviorKind) -> f64 {
        match kind {
            BehaviorKind::LocalMinimumAvoidance => self.lm,
            BehaviorKind::ObstacleAvoidance => self.oa,
            BehaviorKind::GoalReaching => self.gr,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let w = [self.lm, self.oa, self.gr];
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || w.iter().all(|v| *v == 0.0) {
            return Err(Error::config("baseline weights must be non-negative and not all zero"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineStrategy {
    /// Defuzzify every behavior, then take the weighted mean of the crisp commands.
    DefuzzifyThenCombine { weights: BehaviorWeights },
    /// Pointwise maximum of the behaviors' output sets, then defuzzify.
    CombineThenDefuzzify,
}

/// Centroid of `f` sampled on `grid`; the grid midpoint when `f` vanishes.
pub fn centroid_defuzzify<O: Objective + ?Sized>(f: &O, grid: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for &y in grid {
        let m = f.value(y);
        num += y * m;
        den += m;
    }
    if den > 0.0 {
        num / den
    } else {
        match (grid.first(), grid.last()) {
            (Some(lo), Some(hi)) => 0.5 * (lo + hi),
            _ => 0.0,
        }
    }
}

struct MaxCombined<'a, F: Fn(&BehaviorOutput) -> &dyn Objective> {
    outputs: &'a [BehaviorOutput],
    pick: F,
}

impl<F: Fn(&BehaviorOutput) -> &dyn Objective> Objective for MaxCombined<'_, F> {
    fn value(&self, y: f64) -> f64 {
        self.outputs
            .iter()
            .map(|o| (self.pick)(o).value(y))
            .fold(0.0, f64::max)
    }
}

fn weighted_mean(pairs: impl Iterator<Item = (f64, f64)>, fallback: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (w, v) in pairs {
        num += w * v;
        den += w;
    }
    if den > 0.0 {
        num / den
    } else {
        fallback
    }
}

/// Fuses behavior outputs with one of the conventional orderings. The result
/// is snapped onto the domain grids.
pub fn fuse_baseline(
    strategy: &BaselineStrategy,
    outputs: &[BehaviorOutput],
    domain: &CommandDomain,
) -> VelocityCommand {
    let (ug, wg) = (domain.u_grid(), domain.omega_grid());
    let raw = match strategy {
        BaselineStrategy::DefuzzifyThenCombine { weights } => {
            let mid = |g: &[f64]| 0.5 * (g[0] + g[g.len() - 1]);
            VelocityCommand {
                u: weighted_mean(
                    outputs.iter().map(|o| (weights.get(o.kind), centroid_defuzzify(&o.u, ug))),
                    mid(ug),
                ),
                omega: weighted_mean(
                    outputs.iter().map(|o| (weights.get(o.kind), centroid_defuzzify(&o.omega, wg))),
                    mid(wg),
                ),
            }
        }
        BaselineStrategy::CombineThenDefuzzify => VelocityCommand {
            u: centroid_defuzzify(&MaxCombined { outputs, pick: |o| &o.u }, ug),
            omega: centroid_defuzzify(&MaxCombined { outputs, pick: |o| &o.omega }, wg),
        },
    };
    domain.snap(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{FusionConfig, uniform_grid};
    use crate::fuzzy::{AggregatedMembership, MembershipFunction, Universe};

    fn omega_grid() -> Vec<f64> {
        uniform_grid(-4.3, 4.3, 0.01).unwrap()
    }

    fn domain() -> CommandDomain {
        CommandDomain::from_config(&FusionConfig::default(), [0.0, 1.3], [-4.3, 4.3]).unwrap()
    }

    fn agg(var: &str, pairs: Vec<(f64, MembershipFunction)>) -> AggregatedMembership {
        let uni = if var == "u" { Universe::new(0.0, 1.3) } else { Universe::new(-4.3, 4.3) };
        AggregatedMembership::new(var, uni.unwrap(), pairs).unwrap()
    }

    #[test]
    fn symmetric_set_has_zero_centroid() {
        let f = agg("omega", vec![(0.7, MembershipFunction::gaussian(0.0, 0.4))]);
        assert!(centroid_defuzzify(&f, &omega_grid()).abs() < 1e-12);
        let twin = agg(
            "omega",
            vec![(0.4, MembershipFunction::gaussian(-1.2, 0.5)), (0.4, MembershipFunction::gaussian(1.2, 0.5))],
        );
        assert!(centroid_defuzzify(&twin, &omega_grid()).abs() < 1e-12);
    }

    #[test]
    fn zero_set_falls_back_to_midpoint() {
        let grid = uniform_grid(0.0, 1.3, 0.01).unwrap();
        let f = AggregatedMembership::zero("u", Universe::new(0.0, 1.3).unwrap());
        assert!((centroid_defuzzify(&f, &grid) - 0.65).abs() < 1e-15);
    }

    #[test]
    fn single_gaussian_centroid_near_center() {
        let f = agg("omega", vec![(1.0, MembershipFunction::gaussian(1.2, 0.5))]);
        // Trapezoidal quadrature on a much finer grid as an independent reference.
        let n = 200_000;
        let (lo, hi) = (-4.3_f64, 4.3_f64);
        let h = (hi - lo) / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..=n {
            let y = lo + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            let m = (-(y - 1.2).powi(2) / 0.5).exp();
            num += w * y * m;
            den += w * m;
        }
        let reference = num / den;
        let c = centroid_defuzzify(&f, &omega_grid());
        assert!((c - reference).abs() < 1e-3, "{c} vs {reference}");
        assert!((c - 1.2).abs() < 1e-3);
    }

    fn output(kind: BehaviorKind, u: Vec<(f64, MembershipFunction)>, w: Vec<(f64, MembershipFunction)>) -> BehaviorOutput {
        BehaviorOutput { kind, u: agg("u", u), omega: agg("omega", w) }
    }

    #[test]
    fn identical_outputs_agree_across_variants() {
        let make = |kind| {
            output(
                kind,
                vec![(0.6, MembershipFunction::gaussian(0.55, 0.18))],
                vec![(0.8, MembershipFunction::gaussian(1.2, 0.5)), (0.3, MembershipFunction::gaussian(0.0, 0.4))],
            )
        };
        let outs = [make(BehaviorKind::ObstacleAvoidance), make(BehaviorKind::GoalReaching)];
        let a = fuse_baseline(
            &BaselineStrategy::DefuzzifyThenCombine { weights: BehaviorWeights::default() },
            &outs,
            &domain(),
        );
        let b = fuse_baseline(&BaselineStrategy::CombineThenDefuzzify, &outs, &domain());
        assert_eq!(a, b);
    }

    #[test]
    fn zero_behavior_drops_out_of_max() {
        let oa = output(
            BehaviorKind::ObstacleAvoidance,
            vec![(0.5, MembershipFunction::gaussian(0.15, 0.12))],
            vec![(0.7, MembershipFunction::gaussian(1.2, 0.5))],
        );
        let gr = output(
            BehaviorKind::GoalReaching,
            vec![(0.9, MembershipFunction::sigmoid(8.0, 0.9))],
            vec![(0.6, MembershipFunction::gaussian(-1.2, 0.5))],
        );
        let lm = BehaviorOutput {
            kind: BehaviorKind::LocalMinimumAvoidance,
            u: AggregatedMembership::zero("u", Universe::new(0.0, 1.3).unwrap()),
            omega: AggregatedMembership::zero("omega", Universe::new(-4.3, 4.3).unwrap()),
        };
        let three = [lm, oa.clone(), gr.clone()];
        let two = [oa.clone(), gr.clone()];
        let grid = omega_grid();
        let combined3 = MaxCombined { outputs: &three, pick: |o| &o.omega };
        for &y in &grid {
            assert_eq!(combined3.value(y), oa.omega.eval(y).max(gr.omega.eval(y)));
        }
        assert_eq!(
            fuse_baseline(&BaselineStrategy::CombineThenDefuzzify, &three, &domain()),
            fuse_baseline(&BaselineStrategy::CombineThenDefuzzify, &two, &domain())
        );
    }

    #[test]
    fn weights_validate() {
        assert!(BehaviorWeights { lm: 0.0, oa: 0.0, gr: 0.0 }.validate().is_err());
        assert!(BehaviorWeights { lm: -1.0, oa: 1.0, gr: 1.0 }.validate().is_err());
        BehaviorWeights::default().validate().unwrap();
    }
}

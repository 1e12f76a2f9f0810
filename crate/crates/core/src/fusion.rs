//! Lexicographic command fusion.
//!
//! Each behavior's aggregated output memberships act as objective functions
//! over a discretized command domain. `u` and `ω` are fused independently:
//! the highest-priority objective is maximized first, and every following
//! objective only chooses among the previous stage's maximizers.

use serde::{Deserialize, Serialize};

use crate::behaviors::BehaviorOutput;
use crate::error::{Error, Result};
use crate::fuzzy::AggregatedMembership;

/// Anything that can be scored at a command value.
pub trait Objective {
    fn value(&self, y: f64) -> f64;
}

impl Objective for AggregatedMembership {
    fn value(&self, y: f64) -> f64 {
        self.eval(y)
    }
}

impl<F: Fn(f64) -> f64> Objective for F {
    fn value(&self, y: f64) -> f64 {
        self(y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocityCommand {
    /// Linear velocity, m/s.
    pub u: f64,
    /// Angular velocity, rad/s; positive turns left.
    pub omega: f64,
}

/// Grid resolution and level tolerance of the optimizer. The grid extents
/// come from the robot's actuator limits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FusionConfig {
    pub grid_step_u: f64,
    pub grid_step_omega: f64,
    pub epsilon: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig { grid_step_u: 0.01, grid_step_omega: 0.01, epsilon: 1e-9 }
    }
}

/// Evenly spaced samples covering `[lo, hi]` with spacing close to `step`.
///
/// Samples are computed as convex combinations of the end points, so a
/// symmetric interval yields an exactly symmetric grid with 0 on it when the
/// point count is odd.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::config(format!("grid limits [{lo}, {hi}] are not ordered")));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::config(format!("grid step must be positive, got {step}")));
    }
    let n = ((hi - lo) / step).round().max(1.0) as usize;
    Ok((0..=n)
        .map(|i| (lo * (n - i) as f64 + hi * i as f64) / n as f64)
        .collect())
}

/// Discrete command sets the optimizer searches.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandDomain {
    u_grid: Vec<f64>,
    omega_grid: Vec<f64>,
    epsilon: f64,
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::config(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config(format!("{name} grid must be finite and strictly ascending")));
    }
    Ok(())
}

impl CommandDomain {
    pub fn new(u_grid: Vec<f64>, omega_grid: Vec<f64>, epsilon: f64) -> Result<Self> {
        check_grid("u", &u_grid)?;
        check_grid("omega", &omega_grid)?;
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::config(format!("level tolerance must be >= 0, got {epsilon}")));
        }
        Ok(CommandDomain { u_grid, omega_grid, epsilon })
    }

    pub fn from_config(cfg: &FusionConfig, u_limits: [f64; 2], omega_limits: [f64; 2]) -> Result<Self> {
        let [u_lo, u_hi] = u_limits;
        let [w_lo, w_hi] = omega_limits;
        CommandDomain::new(
            uniform_grid(u_lo, u_hi, cfg.grid_step_u)?,
            uniform_grid(w_lo, w_hi, cfg.grid_step_omega)?,
            cfg.epsilon,
        )
    }

    pub fn u_grid(&self) -> &[f64] {
        &self.u_grid
    }

    pub fn omega_grid(&self) -> &[f64] {
        &self.omega_grid
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Nearest grid sample to an arbitrary command.
    pub fn snap(&self, cmd: VelocityCommand) -> VelocityCommand {
        VelocityCommand { u: nearest(&self.u_grid, cmd.u), omega: nearest(&self.omega_grid, cmd.omega) }
    }

    pub fn contains(&self, cmd: &VelocityCommand) -> bool {
        self.u_grid.contains(&cmd.u) && self.omega_grid.contains(&cmd.omega)
    }
}

fn nearest(grid: &[f64], y: f64) -> f64 {
    grid.iter()
        .copied()
        .min_by(|a, b| (a - y).abs().total_cmp(&(b - y).abs()))
        .unwrap_or(y)
}

fn argmax_indices<O: Objective + ?Sized>(f: &O, grid: &[f64], candidates: &[usize], eps: f64) -> Vec<usize> {
    let scores: Vec<f64> = candidates.iter().map(|&i| f.value(grid[i])).collect();
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    candidates
        .iter()
        .zip(&scores)
        .filter(|(_, &s)| s >= best - eps)
        .map(|(&i, _)| i)
        .collect()
}

/// Grid points whose objective value is within `eps` of the grid maximum,
/// in grid order.
pub fn argmax_set<O: Objective + ?Sized>(objective: &O, grid: &[f64], eps: f64) -> Vec<f64> {
    let all: Vec<usize> = (0..grid.len()).collect();
    argmax_indices(objective, grid, &all, eps)
        .into_iter()
        .map(|i| grid[i])
        .collect()
}

fn lexicographic_indices(objectives: &[&dyn Objective], grid: &[f64], eps: f64) -> Vec<usize> {
    let mut survivors: Vec<usize> = (0..grid.len()).collect();
    for f in objectives {
        if survivors.len() <= 1 {
            break;
        }
        survivors = argmax_indices(*f, grid, &survivors, eps);
    }
    survivors
}

/// Maximizes the objectives in priority order, each over the previous
/// stage's solution set, stopping as soon as a single point remains.
pub fn lexicographic_solve(objectives: &[&dyn Objective], grid: &[f64], eps: f64) -> Vec<f64> {
    lexicographic_indices(objectives, grid, eps)
        .into_iter()
        .map(|i| grid[i])
        .collect()
}

/// Picks the greatest speed among equally good candidates.
pub fn tie_break_u(candidates: &[f64]) -> Option<f64> {
    candidates.iter().copied().reduce(f64::max)
}

/// Picks the smallest turn rate magnitude, preferring a left turn when `+ω`
/// and `-ω` tie.
pub fn tie_break_omega(candidates: &[f64]) -> Option<f64> {
    candidates.iter().copied().reduce(|best, w| {
        match w.abs().total_cmp(&best.abs()) {
            std::cmp::Ordering::Less => w,
            std::cmp::Ordering::Equal if w > best => w,
            _ => best,
        }
    })
}

/// Fuses behavior outputs, given in descending order of importance, into a
/// single Pareto-optimal command on the domain grids.
pub fn fuse(outputs: &[BehaviorOutput], domain: &CommandDomain) -> VelocityCommand {
    let u_obj: Vec<&dyn Objective> = outputs.iter().map(|o| &o.u as &dyn Objective).collect();
    let w_obj: Vec<&dyn Objective> = outputs.iter().map(|o| &o.omega as &dyn Objective).collect();
    let u_set = lexicographic_solve(&u_obj, &domain.u_grid, domain.epsilon);
    let w_set = lexicographic_solve(&w_obj, &domain.omega_grid, domain.epsilon);
    VelocityCommand {
        // solve never returns an empty set on a non-empty grid
        u: tie_break_u(&u_set).expect("non-empty u solution set"),
        omega: tie_break_omega(&w_set).expect("non-empty omega solution set"),
    }
}

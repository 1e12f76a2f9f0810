use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use bbfm_core::behaviors::{
    build_goal_reaching, compute_nav_inputs, default_behavior_config, default_variables, BehaviorKind, NavInputs,
};
use bbfm_core::fusion::{argmax_set, lexicographic_solve, tie_break_omega, tie_break_u, uniform_grid, Objective, VelocityCommand};
use bbfm_core::fuzzy::{eval_mf, evaluate_rulebase, AggregatedMembership, LinguisticVariable, MembershipFunction, Rule, RuleBase};
use bbfm_core::harness::{compute_metrics, read_trace_csv, replay_metrics, trace_csv_string, ReplayContext};
use bbfm_core::sim::{
    run_episode, sense, step_kinematics, wrap_angle, Controller, EpisodeConfig, Pose, Segment, SensorConfig, World,
};
use bbfm_core::{Config, NavigationController, Strategy as Fusion};
use proptest::prelude::*;

fn gaussian() -> impl Strategy<Value = MembershipFunction> {
    (-20.0..20.0f64, 1e-3..10.0f64).prop_map(|(c, s)| MembershipFunction::gaussian(c, s))
}

fn sigmoid() -> impl Strategy<Value = MembershipFunction> {
    (-100.0..100.0f64, -20.0..20.0f64).prop_map(|(a, b)| MembershipFunction::sigmoid(a, b))
}

fn any_mf() -> impl Strategy<Value = MembershipFunction> {
    prop_oneof![gaussian(), sigmoid()]
}

fn var(name: &str) -> LinguisticVariable {
    default_variables().into_iter().find(|v| v.name == name).unwrap()
}

const INPUT_NAMES: [&str; 6] = ["d_l", "d_f", "d_r", "alpha", "rho", "e_d"];

fn nav_inputs() -> impl Strategy<Value = NavInputs> {
    (-0.5..4.5f64, -0.5..4.5f64, -0.5..4.5f64, -PI..=PI, 0.0..22.0f64, -0.5..0.5f64)
        .prop_map(|(d_l, d_f, d_r, alpha, rho, e_d)| NavInputs { d_l, d_f, d_r, alpha, rho, e_d })
}

/// Rules over the default variables: `None` marks a don't-care input.
fn random_rules() -> impl Strategy<Value = Vec<Rule>> {
    let rule = (prop::collection::vec(0u8..8, 6), 0u8..3, 0u8..5);
    prop::collection::vec(rule, 1..24).prop_map(|raw| {
        raw.into_iter()
            .map(|(ante, u, w)| {
                let mut antecedent = Vec::new();
                for (name, pick) in INPUT_NAMES.iter().zip(ante) {
                    let v = var(name);
                    let n = v.terms.len() as u8;
                    if pick % (n + 1) < n {
                        antecedent.push((name.to_string(), v.terms.get_index((pick % (n + 1)) as usize).unwrap().0.clone()));
                    }
                }
                let u_term = var("u").terms.get_index(u as usize).unwrap().0.clone();
                let w_term = var("omega").terms.get_index(w as usize).unwrap().0.clone();
                Rule {
                    antecedent: antecedent.into_iter().collect(),
                    consequent: [("u".to_string(), u_term), ("omega".to_string(), w_term)].into_iter().collect(),
                }
            })
            .collect()
    })
}

fn rule_base(rules: Vec<Rule>) -> RuleBase {
    let inputs = INPUT_NAMES.iter().map(|n| var(n)).collect();
    RuleBase::new(inputs, vec![var("u"), var("omega")], rules).unwrap()
}

fn crisp(inputs: &NavInputs) -> BTreeMap<String, f64> {
    [inputs.d_l, inputs.d_f, inputs.d_r, inputs.alpha, inputs.rho, inputs.e_d]
        .into_iter()
        .zip(INPUT_NAMES)
        .map(|(x, n)| (n.to_string(), x))
        .collect()
}

/// Double loop over rules and antecedents, written from the definition.
fn oracle(rules: &[Rule], inputs: &BTreeMap<String, f64>, output: &str, y: f64) -> f64 {
    let mut best = 0.0f64;
    for rule in rules {
        let mut h = 1.0f64;
        for (name, term) in &rule.antecedent {
            let v = var(name);
            let x = inputs[name].max(v.universe.lo()).min(v.universe.hi());
            h = h.min(eval_mf(&v.terms[term.as_str()], x).unwrap());
        }
        let out = var(output);
        best = best.max(h.min(eval_mf(&out.terms[rule.consequent[output].as_str()], y).unwrap()));
    }
    best
}

fn coarse(name: &str) -> Vec<f64> {
    let u = var(name).universe;
    uniform_grid(u.lo(), u.hi(), (u.hi() - u.lo()) / 40.0).unwrap()
}

proptest! {
    #[test]
    fn membership_in_unit_interval(mf in any_mf(), x in prop_oneof![-50.0..50.0f64, -1e300..1e300f64]) {
        let v = eval_mf(&mf, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&v), "{mf:?}({x}) = {v}");
    }

    #[test]
    fn gaussian_is_symmetric(c in -20.0..20.0f64, s in 1e-2..10.0f64, d in 0.0..30.0f64) {
        let g = MembershipFunction::gaussian(c, s);
        let (a, b) = (eval_mf(&g, c + d).unwrap(), eval_mf(&g, c - d).unwrap());
        prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn rising_sigmoid_is_monotone(a in 1e-3..100.0f64, b in -20.0..20.0f64, x1 in -50.0..50.0f64, dx in 0.0..50.0f64) {
        let s = MembershipFunction::sigmoid(a, b);
        prop_assert!(eval_mf(&s, x1).unwrap() <= eval_mf(&s, x1 + dx).unwrap());
    }

    #[test]
    fn aggregate_never_exceeds_strongest_rule(inputs in nav_inputs()) {
        for kind in BehaviorKind::ALL {
            let out = bbfm_core::behaviors::BehaviorSpec::from_config(&default_behavior_config(kind), &default_variables())
                .unwrap()
                .evaluate(&inputs)
                .unwrap();
            for (agg, name) in [(&out.u, "u"), (&out.omega, "omega")] {
                for y in coarse(name) {
                    prop_assert!(agg.eval(y) <= agg.max_strength());
                }
            }
        }
    }

    #[test]
    fn inference_matches_double_loop(rules in random_rules(), inputs in nav_inputs()) {
        let rb = rule_base(rules.clone());
        let map = crisp(&inputs);
        let out = evaluate_rulebase(&rb, &map).unwrap();
        for name in ["u", "omega"] {
            for y in coarse(name) {
                prop_assert_eq!(out[name].eval(y).to_bits(), oracle(&rules, &map, name, y).to_bits());
            }
        }
    }

    #[test]
    fn rule_order_is_irrelevant(rules in random_rules(), inputs in nav_inputs(), seed in any::<u64>()) {
        let mut shuffled = rules.clone();
        // Fisher-Yates driven by a splitmix sequence
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            shuffled.swap(i, ((z ^ (z >> 31)) % (i as u64 + 1)) as usize);
        }
        let map = crisp(&inputs);
        let a = evaluate_rulebase(&rule_base(rules), &map).unwrap();
        let b = evaluate_rulebase(&rule_base(shuffled), &map).unwrap();
        for name in ["u", "omega"] {
            for y in coarse(name) {
                prop_assert_eq!(a[name].eval(y).to_bits(), b[name].eval(y).to_bits());
            }
        }
    }
}

/// Objective tables over the grid `0, 1, ..., n-1`, quantized so ties occur.
fn tables() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..60).prop_flat_map(|n| prop::collection::vec(prop::collection::vec((0u8..5).prop_map(|q| f64::from(q) / 4.0), n), 1..5))
}

fn as_objectives(tables: &[Vec<f64>]) -> Vec<impl Fn(f64) -> f64 + '_> {
    tables.iter().map(|t| move |y: f64| t[y as usize]).collect()
}

fn int_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64).collect()
}

proptest! {
    #[test]
    fn lexicographic_stages_shrink_and_stay_nonempty(tables in tables(), eps in prop_oneof![Just(0.0), Just(1e-9), 0.0..0.3f64]) {
        let grid = int_grid(tables[0].len());
        let objs = as_objectives(&tables);
        let dyns: Vec<&dyn Objective> = objs.iter().map(|f| f as &dyn Objective).collect();
        let mut previous = grid.clone();
        for k in 1..=dyns.len() {
            let set = lexicographic_solve(&dyns[..k], &grid, eps);
            prop_assert!(!set.is_empty());
            prop_assert!(set.iter().all(|y| previous.contains(y)), "stage {k} left the previous set");
            previous = set;
        }
    }

    #[test]
    fn exact_solution_is_pareto_optimal(tables in tables()) {
        let grid = int_grid(tables[0].len());
        let objs = as_objectives(&tables);
        let dyns: Vec<&dyn Objective> = objs.iter().map(|f| f as &dyn Objective).collect();
        for pick in [tie_break_u, tie_break_omega] {
            let y_star = pick(&lexicographic_solve(&dyns, &grid, 0.0)).unwrap() as usize;
            for y in 0..grid.len() {
                let ge = tables.iter().all(|t| t[y] >= t[y_star]);
                let gt = tables.iter().any(|t| t[y] > t[y_star]);
                prop_assert!(!(ge && gt), "{y} dominates {y_star}");
            }
        }
    }

    #[test]
    fn unique_top_maximizer_fixes_the_result(tables in tables(), other in tables(), peak in any::<prop::sample::Index>()) {
        let grid = int_grid(tables[0].len());
        let mut first = tables.clone();
        // plant a single point above the quantized levels
        first[0][peak.index(grid.len())] = 1.25;
        let top = &first[0];
        prop_assert_eq!(argmax_set(&|y: f64| top[y as usize], &grid, 1e-9).len(), 1);
        let mut second = vec![top.clone()];
        second.extend(other.iter().map(|t| (0..grid.len()).map(|i| t[i % t.len()]).collect::<Vec<f64>>()));
        let a = as_objectives(&first);
        let b = as_objectives(&second);
        let da: Vec<&dyn Objective> = a.iter().map(|f| f as &dyn Objective).collect();
        let db: Vec<&dyn Objective> = b.iter().map(|f| f as &dyn Objective).collect();
        let expected = vec![grid[peak.index(grid.len())]];
        prop_assert_eq!(lexicographic_solve(&da, &grid, 1e-9), expected.clone());
        prop_assert_eq!(lexicographic_solve(&db, &grid, 1e-9), expected);
    }

    #[test]
    fn alpha_is_wrapped_and_periodic(x in -50.0..50.0f64, y in -50.0..50.0f64, th in -10.0..10.0f64,
                                     tx in -50.0..50.0f64, ty in -50.0..50.0f64) {
        let target = Pose::new(tx, ty, 0.0);
        let readings = [4.0; 8];
        let a = compute_nav_inputs(&Pose { x, y, theta: th }, &target, None, &readings).unwrap();
        let b = compute_nav_inputs(&Pose { x, y, theta: th + TAU }, &target, None, &readings).unwrap();
        prop_assert!((-PI..=PI).contains(&a.alpha));
        prop_assert!(wrap_angle(a.alpha - b.alpha).abs() <= 1e-9);
    }

    #[test]
    fn rho_is_rigid_motion_invariant(x in -50.0..50.0f64, y in -50.0..50.0f64, tx in -50.0..50.0f64, ty in -50.0..50.0f64,
                                     phi in -PI..PI, dx in -100.0..100.0f64, dy in -100.0..100.0f64) {
        let rigid = |px: f64, py: f64| (px * phi.cos() - py * phi.sin() + dx, px * phi.sin() + py * phi.cos() + dy);
        let readings = [4.0; 8];
        let a = compute_nav_inputs(&Pose::new(x, y, 0.3), &Pose::new(tx, ty, 0.0), None, &readings).unwrap();
        let (x2, y2) = rigid(x, y);
        let (tx2, ty2) = rigid(tx, ty);
        let b = compute_nav_inputs(&Pose::new(x2, y2, 0.3 + phi), &Pose::new(tx2, ty2, 0.0), None, &readings).unwrap();
        prop_assert!((a.rho - b.rho).abs() <= 1e-9 * (1.0 + a.rho));
    }

    #[test]
    fn goal_reaching_is_mirror_symmetric(rho in 0.0..20.0f64, alpha in -PI..=PI) {
        let gr = build_goal_reaching();
        let base = NavInputs { d_l: 4.0, d_f: 4.0, d_r: 4.0, alpha, rho, e_d: 0.0 };
        let left = gr.evaluate(&base).unwrap();
        let right = gr.evaluate(&NavInputs { alpha: -alpha, ..base }).unwrap();
        let domain = Config::default().domain().unwrap();
        for &w in domain.omega_grid() {
            prop_assert_eq!(left.omega.eval(w).to_bits(), right.omega.eval(-w).to_bits());
        }
        for &u in domain.u_grid() {
            prop_assert_eq!(left.u.eval(u).to_bits(), right.u.eval(u).to_bits());
        }
    }

    #[test]
    fn zero_turn_rate_keeps_heading(th in -PI..PI, u in 0.0..1.3f64, steps in 1usize..500) {
        let cmd = VelocityCommand { u, omega: 0.0 };
        let mut p = Pose::new(0.0, 0.0, th);
        for _ in 0..steps {
            p = step_kinematics(&p, &cmd, 0.1);
        }
        prop_assert_eq!(p.theta, th);
    }

    #[test]
    fn baseline_commands_are_legal(inputs in nav_inputs()) {
        let cfg = Config::default();
        for s in [Fusion::Fig4a, Fusion::Fig4b] {
            let c = NavigationController::new(&cfg, s, &[]).unwrap();
            let cmd = c.decide(&inputs).command;
            prop_assert!(cfg.robot.within_limits(&cmd), "{s}: {cmd:?}");
            prop_assert!(c.domain().contains(&cmd));
        }
    }
}

fn segment() -> impl Strategy<Value = Segment> {
    (-5.0..5.0f64, -5.0..5.0f64, 0.05..4.0f64, -PI..PI)
        .prop_map(|(x, y, len, dir)| Segment::new([x, y], [x + len * dir.cos(), y + len * dir.sin()]))
}

fn world() -> impl Strategy<Value = World> {
    prop::collection::vec(segment(), 0..6).prop_map(|s| World::from_segments(s).unwrap())
}

/// Ray–segment hit distance, solved by Cramer's rule.
fn hit(origin: [f64; 2], dir: f64, s: &Segment) -> Option<f64> {
    let (dx, dy) = (dir.cos(), dir.sin());
    let (ex, ey) = (s.b[0] - s.a[0], s.b[1] - s.a[1]);
    let det = ex * dy - dx * ey;
    if det.abs() < 1e-12 {
        return None;
    }
    let (wx, wy) = (s.a[0] - origin[0], s.a[1] - origin[1]);
    let t = (ex * wy - wx * ey) / det;
    let k = (dx * wy - wx * dy) / det;
    (t >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&k)).then_some(t)
}

fn point_segment_distance(p: [f64; 2], s: &Segment) -> f64 {
    let (ex, ey) = (s.b[0] - s.a[0], s.b[1] - s.a[1]);
    let k = (((p[0] - s.a[0]) * ex + (p[1] - s.a[1]) * ey) / (ex * ex + ey * ey)).clamp(0.0, 1.0);
    (p[0] - s.a[0] - k * ex).hypot(p[1] - s.a[1] - k * ey)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sensor_readings_are_sound(world in world(), x in -6.0..6.0f64, y in -6.0..6.0f64, th in -PI..PI) {
        let cfg = SensorConfig::default();
        let pose = Pose::new(x, y, th);
        let readings = sense(&world, &pose, &cfg);
        for (d, &mount) in readings.iter().zip(&cfg.mount_angles) {
            let m = th + mount;
            let origin = [x + cfg.mount_radius * m.cos(), y + cfg.mount_radius * m.sin()];
            prop_assert!(*d <= cfg.max_range);
            for off in cfg.ray_offsets(mount) {
                for s in world.segments() {
                    if let Some(t) = hit(origin, th + off, s) {
                        prop_assert!(*d <= t + 1e-9, "reading {d} beyond obstacle at {t} in the cone");
                    }
                }
            }
            let nearest = world.segments().iter().map(|s| point_segment_distance(origin, s)).fold(cfg.max_range, f64::min);
            prop_assert!(*d >= nearest - 1e-9, "reading {d} closer than any obstacle ({nearest})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn episodes_are_legal_deterministic_and_replayable(
        world in world(),
        start in (-6.0..6.0f64, -6.0..6.0f64, -PI..PI),
        target in (-6.0..6.0f64, -6.0..6.0f64),
        strategy in prop_oneof![Just(Fusion::Bbfm), Just(Fusion::Fig4a), Just(Fusion::Fig4b)],
    ) {
        let cfg = Config::default();
        let controller = NavigationController::new(&cfg, strategy, &[]).unwrap();
        let limits = EpisodeConfig { max_steps: 150, ..cfg.episode.clone() };
        let (start, target) = (Pose::new(start.0, start.1, start.2), Pose::new(target.0, target.1, 0.0));
        let run = || run_episode(&world, start, target, &controller, &cfg.robot, &cfg.sensors, &limits);
        let trace = run();
        prop_assert_eq!(&trace, &run());

        let u_max = cfg.robot.u_limits[1];
        for pair in trace.records.windows(2) {
            let (a, b) = (pair[0].pose, pair[1].pose);
            prop_assert!((b.x - a.x).hypot(b.y - a.y) <= u_max * limits.dt + 1e-12);
        }
        for cmd in trace.records.iter().filter_map(|r| r.decision).map(|d| d.command) {
            prop_assert!(cfg.robot.within_limits(&cmd));
            prop_assert!(controller.domain().contains(&cmd));
        }

        let csv = trace_csv_string(&trace);
        prop_assert_eq!(&csv, &trace_csv_string(&run()));
        let rows = read_trace_csv(csv.as_bytes()).unwrap();
        let ctx = ReplayContext { stop_radius: limits.stop_radius, max_steps: limits.max_steps, world: Some((&world, cfg.robot.body_radius)) };
        prop_assert_eq!(replay_metrics(&rows, &ctx).unwrap(), compute_metrics(&trace, &target).unwrap());
    }
}

#[test]
fn aggregated_membership_zero_is_inactive() {
    let z = AggregatedMembership::zero("u", var("u").universe);
    assert!(z.is_inactive());
    assert_eq!(z.eval(0.5), 0.0);
}

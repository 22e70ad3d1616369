//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p pto-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{dijkstra, scenario, suite_config, toy_optimum, GridWorld, SUITE};
use pto_core::planner::{
    build_belief_graph, build_random_graph, compute_expected_costs, extract_path_tree,
};
use pto_core::{
    branching_probability, compute_camera_frame, evaluate_path_tree_cost, plan, validate_path_tree,
    Belief, Bounds, Environment, EnvironmentSpec, HypothesisSpace, Mode, PlannerConfig, RobotState,
    Sampler, SamplerConfig, SamplerKind, SensorParams,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn ratio(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((p, q)) => BigRational::new(p.parse().unwrap(), q.parse().unwrap()),
        None => BigRational::from_integer(s.parse().unwrap()),
    }
}

fn belief(entries: &[&str]) -> Belief {
    Belief::new(entries.iter().map(|s| ratio(s)).collect()).unwrap()
}

fn same_set(got: &[Belief], want: &[Belief]) -> bool {
    got.len() == want.len() && want.iter().all(|b| got.contains(b))
}

/// Fastest of several runs, to keep scheduler noise out of the timing.
fn best_time(mut f: impl FnMut()) -> Duration {
    (0..20)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .min()
        .unwrap()
}

fn criterion_1() -> Outcome {
    let door = HypothesisSpace::enumerate(Mode::Obstacles, 2).unwrap();
    let b_door = [
        ["1/4", "1/4", "1/4", "1/4"],
        ["1/2", "0", "1/2", "0"],
        ["0", "1/2", "0", "1/2"],
        ["1/2", "1/2", "0", "0"],
        ["0", "0", "1/2", "1/2"],
        ["1", "0", "0", "0"],
        ["0", "1", "0", "0"],
        ["0", "0", "1", "0"],
        ["0", "0", "0", "1"],
    ]
    .map(|b| belief(&b));
    let boxes = HypothesisSpace::enumerate(Mode::Goals, 3).unwrap();
    let b_box = [
        ["1/3", "1/3", "1/3"],
        ["1", "0", "0"],
        ["0", "1", "0"],
        ["0", "0", "1"],
        ["0", "1/2", "1/2"],
        ["1/2", "0", "1/2"],
        ["1/2", "1/2", "0"],
    ]
    .map(|b| belief(&b));
    let got_door = door.all_belief_states(&Belief::uniform(4)).unwrap();
    let got_box = boxes.all_belief_states(&Belief::uniform(3)).unwrap();
    let t = best_time(|| {
        door.all_belief_states(&Belief::uniform(4)).unwrap();
        boxes.all_belief_states(&Belief::uniform(3)).unwrap();
    });
    outcome(
        same_set(&got_door, &b_door) && same_set(&got_box, &b_box) && t < Duration::from_millis(1),
        format!(
            "door {} beliefs, box {} beliefs, both enumerations in {:.1} µs",
            got_door.len(),
            got_box.len(),
            t.as_secs_f64() * 1e6
        ),
    )
}

fn criterion_2() -> Outcome {
    let space = HypothesisSpace::enumerate(Mode::Obstacles, 2).unwrap();
    let result = space.observe(&Belief::uniform(4), 0).unwrap();
    let posteriors: Vec<Belief> = result.iter().map(|(_, b)| b.clone()).collect();
    let want = vec![
        belief(&["1/2", "0", "1/2", "0"]),
        belief(&["0", "1/2", "0", "1/2"]),
    ];
    let outcomes_ok = !result[0].0.seen_present && result[1].0.seen_present;
    outcome(
        posteriors == want && outcomes_ok,
        format!("posteriors {} and {}", posteriors[0], posteriors[1]),
    )
}

fn criterion_3() -> Outcome {
    let half = BigRational::new(1.into(), 2.into());
    let mut checked = 0;
    let mut ok = true;
    for n in 0..=4 {
        let space = HypothesisSpace::enumerate(Mode::Obstacles, n).unwrap();
        let beliefs = space.all_belief_states(&space.uniform_belief()).unwrap();
        ok &= beliefs.len() == 3usize.pow(n as u32);
        for b in &beliefs {
            for object in 0..n {
                let result = space.observe(b, object).unwrap();
                for (_, child) in &result {
                    let p = branching_probability(b, child);
                    ok &= if result.len() == 2 {
                        p == half
                    } else {
                        p.is_one()
                    };
                    checked += 1;
                }
            }
        }
    }
    outcome(ok, format!("{checked} branches over n = 0..4, |B| = 3^n"))
}

fn random_open_world(rng: &mut ChaCha8Rng) -> Environment {
    let w = rng.gen_range(2.0..5.0);
    let h = rng.gen_range(2.0..5.0);
    let point = |rng: &mut ChaCha8Rng| {
        RobotState::new(
            rng.gen_range(0.2..w - 0.2),
            rng.gen_range(0.2..h - 0.2),
            rng.gen_range(-3.0..3.0),
        )
    };
    let start = point(rng);
    let goal = point(rng);
    Environment::new(EnvironmentSpec {
        bounds: Bounds {
            min: [0.0, 0.0],
            max: [w, h],
        },
        static_obstacles: Vec::new(),
        po_objects: Vec::new(),
        mode: Mode::Obstacles,
        start,
        goals: vec![goal],
        robot_radius: 0.1,
        sensor: SensorParams {
            fov_half_angle: 1.0,
            range: 2.0,
        },
        initial_belief: None,
        angular_weight: rng.gen_range(0.0..0.5),
    })
    .unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut solved = 0;
    for seed in 0..20 {
        let env = random_open_world(&mut rng);
        let cfg = PlannerConfig {
            iterations: 600,
            radius: 1.0,
            simplify_rounds: 0,
            sampler: SamplerConfig {
                seed,
                ..SamplerConfig::default()
            },
            ..PlannerConfig::default()
        };
        let report = plan(&env, &cfg).unwrap();
        let mut sampler = Sampler::new(cfg.sampler).unwrap();
        let graph = build_random_graph(&env, &mut sampler, &common::graph_config(&cfg)).unwrap();
        let oracle = dijkstra(&graph, |s| env.is_goal_in(s, 0));
        let got = match &report.raw_tree {
            Some(t) => evaluate_path_tree_cost(t, &env.initial_belief, env.angular_weight).unwrap(),
            None => f64::INFINITY,
        };
        if oracle.is_finite() {
            solved += 1;
            worst = worst.max((got - oracle).abs());
        } else if got.is_finite() {
            worst = f64::INFINITY;
        }
    }
    outcome(
        worst <= 1e-9 && solved == 20,
        format!("{solved}/20 solved, max |pipeline − Dijkstra| = {worst:.2e}"),
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for doors in [vec![(3, 1)], vec![(3, 1), (3, 3)]] {
        let grid = GridWorld::new(&doors);
        let (graph, space) = grid.random_graph();
        let beliefs = space.all_belief_states(&space.uniform_belief()).unwrap();
        let goal = GridWorld::state(grid.goal);
        let bg = build_belief_graph(&graph, &space, &beliefs, |s, _| *s == goal).unwrap();
        let costs = compute_expected_costs(&bg);
        let tree = extract_path_tree(&bg, &costs).unwrap();
        let got = evaluate_path_tree_cost(&tree, &beliefs[0], 0.0).unwrap();
        let want = grid.optimal_cost();
        ok &= (got - want).abs() <= 1e-9;
        details.push(format!(
            "{} door(s): tree {got:.6} vs DP {want:.6}",
            doors.len()
        ));
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    outcome(
        ok,
        format!("{} in {:.2} s", details.join(", "), elapsed.as_secs_f64()),
    )
}

struct SuiteRun {
    scenario: &'static str,
    solved: bool,
    valid: bool,
    start_cost: f64,
    raw_cost: f64,
    cost: f64,
}

fn suite_runs() -> Vec<SuiteRun> {
    let jobs: Vec<(&'static str, u64)> = SUITE
        .iter()
        .flat_map(|&s| (0..12).map(move |k| (s, k)))
        .collect();
    jobs.par_iter()
        .map(|&(name, seed)| {
            let env = scenario(name);
            let report = plan(&env, &suite_config(name, seed)).unwrap();
            let res = env.default_resolution();
            match (&report.raw_tree, &report.tree) {
                (Some(raw), Some(tree)) => SuiteRun {
                    scenario: name,
                    solved: true,
                    valid: validate_path_tree(raw, &env, res).passed()
                        && validate_path_tree(tree, &env, res).passed(),
                    start_cost: report.start_cost,
                    raw_cost: evaluate_path_tree_cost(raw, &env.initial_belief, env.angular_weight)
                        .unwrap(),
                    cost: evaluate_path_tree_cost(tree, &env.initial_belief, env.angular_weight)
                        .unwrap(),
                },
                _ => SuiteRun {
                    scenario: name,
                    solved: false,
                    valid: true,
                    start_cost: f64::INFINITY,
                    raw_cost: f64::INFINITY,
                    cost: f64::INFINITY,
                },
            }
        })
        .collect()
}

fn criterion_6(runs: &[SuiteRun]) -> Outcome {
    let per: Vec<String> = SUITE
        .iter()
        .map(|&s| {
            let mine: Vec<_> = runs.iter().filter(|r| r.scenario == s).collect();
            let solved = mine.iter().filter(|r| r.solved).count();
            let valid = mine.iter().filter(|r| r.solved && r.valid).count();
            format!("{s} {valid}/{solved} valid of {} runs", mine.len())
        })
        .collect();
    let any_solved = SUITE
        .iter()
        .all(|&s| runs.iter().any(|r| r.scenario == s && r.solved));
    outcome(runs.iter().all(|r| r.valid) && any_solved, per.join(", "))
}

fn criterion_7(runs: &[SuiteRun]) -> Outcome {
    let solved: Vec<_> = runs.iter().filter(|r| r.solved).collect();
    let gap = solved
        .iter()
        .map(|r| (r.raw_cost - r.start_cost).abs())
        .fold(0.0, f64::max);
    let worse = solved
        .iter()
        .filter(|r| r.cost > r.raw_cost + 1e-12)
        .count();
    outcome(
        gap <= 1e-6 && worse == 0 && !solved.is_empty(),
        format!(
            "{} solved runs, max |tree − table| = {gap:.2e}, {worse} got worse after simplification",
            solved.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let env = scenario("toy");
    let costs: Vec<f64> = (0..12u64)
        .into_par_iter()
        .map(|seed| {
            let report = plan(&env, &suite_config("toy", seed)).unwrap();
            report
                .tree
                .map(|t| {
                    evaluate_path_tree_cost(&t, &env.initial_belief, env.angular_weight).unwrap()
                })
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    let elapsed = t.elapsed();
    let n = costs.len() as f64;
    let mean = costs.iter().sum::<f64>() / n;
    let std = (costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n).sqrt();
    let optimum = toy_optimum();
    let rel = (mean - optimum) / optimum;
    outcome(
        rel.abs() <= 0.02 && std / mean < 0.05 && elapsed < Duration::from_secs(300),
        format!(
            "mean {mean:.4} vs optimum {optimum:.4} ({:+.2} %), std/mean {:.2} %, {:.1} s",
            100.0 * rel,
            100.0 * std / mean,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_9() -> Outcome {
    let env = scenario("corridor3");
    let rate = |kind: SamplerKind| {
        let solved = (0..12u64)
            .into_par_iter()
            .filter(|&seed| {
                let cfg = PlannerConfig {
                    iterations: 400,
                    radius: 1.0,
                    simplify_rounds: 0,
                    sampler: SamplerConfig {
                        kind,
                        seed,
                        ..SamplerConfig::default()
                    },
                    ..PlannerConfig::default()
                };
                plan(&env, &cfg).unwrap().solved()
            })
            .count();
        solved as f64 / 12.0
    };
    let uniform = rate(SamplerKind::Uniform);
    let camera = rate(SamplerKind::CameraBased);
    outcome(
        uniform <= 0.75 && camera >= uniform,
        format!(
            "400 iterations: uniform {:.0} %, camera {:.0} %",
            100.0 * uniform,
            100.0 * camera
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut frames = 0;
    while frames < 10_000 {
        let c: [f64; 3] = [
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
        ];
        let t: [f64; 3] = [
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
        ];
        let Ok(m) = compute_camera_frame(c, t) else {
            continue;
        };
        frames += 1;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        worst = worst.max((det - 1.0).abs());
    }
    let col = |m: &[[f64; 3]; 3], j: usize| [m[0][j], m[1][j], m[2][j]];
    let a = compute_camera_frame([0.0, 0.0, 1.0], [1.0, 0.0, 1.0]).unwrap();
    let b = compute_camera_frame([0.0; 3], [0.0, 1.0, 0.0]).unwrap();
    let hand = col(&a, 0) == [0.0, 1.0, 0.0]
        && col(&a, 1) == [0.0, 0.0, 1.0]
        && col(&a, 2) == [1.0, 0.0, 0.0]
        && col(&b, 0) == [-1.0, 0.0, 0.0]
        && col(&b, 1) == [0.0, 0.0, 1.0]
        && col(&b, 2) == [0.0, 1.0, 0.0];
    outcome(
        worst <= 1e-12 && hand,
        format!("{frames} frames, max deviation {worst:.1e}, hand-derived frames match: {hand}"),
    )
}

fn main() -> ExitCode {
    // `cargo test -- --list` and similar harness probes
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let runs = suite_runs();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "belief-set enumeration", criterion_1()),
        (2, "belief update", criterion_2()),
        (3, "branching probabilities", criterion_3()),
        (4, "Dijkstra degeneration", criterion_4()),
        (5, "product-graph oracle", criterion_5()),
        (6, "constraint suite", criterion_6(&runs)),
        (7, "cost consistency", criterion_7(&runs)),
        (8, "convergence proxy", criterion_8()),
        (9, "camera sampler benefit", criterion_9()),
        (10, "camera frame", criterion_10()),
    ];
    let mut failed = 0;
    for (n, name, o) in &results {
        println!(
            "criterion {n:>2} {}: {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

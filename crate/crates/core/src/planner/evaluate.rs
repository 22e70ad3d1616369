//! Expected cost of a path tree and checks of its completeness, edge
//! validity, and belief consistency.

use num_traits::ToPrimitive;

use crate::belief::{branching_probability, Belief};
use crate::error::{Error, Result};
use crate::geometry::{distance, Environment};
use crate::planner::tree::PathTree;

/// Sum of movement-edge costs weighted by the probability of reaching each
/// edge from `initial`. Observation edges are free.
pub fn evaluate_path_tree_cost(
    tree: &PathTree,
    initial: &Belief,
    angular_weight: f64,
) -> Result<f64> {
    if tree.is_empty() {
        return Ok(0.0);
    }
    if &tree.vertex(tree.root()).belief != initial {
        return Err(Error::PathTree(format!(
            "root belief {} differs from the initial belief {initial}",
            tree.vertex(tree.root()).belief
        )));
    }
    let mut total = 0.0;
    let mut stack = vec![(tree.root(), 1.0)];
    while let Some((v, p)) = stack.pop() {
        for e in tree.out_edges(v) {
            let (from, to) = (tree.vertex(e.from), tree.vertex(e.to));
            if e.is_observation {
                let q = branching_probability(&from.belief, &to.belief)
                    .to_f64()
                    .unwrap_or(f64::NAN);
                stack.push((e.to, p * q));
            } else {
                total += p * distance(&from.state, &to.state, angular_weight);
                stack.push((e.to, p));
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintCheck {
    pub violations: Vec<String>,
}

impl ConstraintCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of [`validate_path_tree`], one entry per constraint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    /// Every world reaches a goal leaf.
    pub complete: ConstraintCheck,
    /// Every motion is collision-free in every world its belief allows.
    pub valid_edges: ConstraintCheck,
    /// Observation edges carry exactly the Bayes posteriors.
    pub consistent_beliefs: ConstraintCheck,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.complete.passed() && self.valid_edges.passed() && self.consistent_beliefs.passed()
    }
}

/// Checks a path tree against `env`, starting in `env.initial_belief`.
pub fn validate_path_tree(tree: &PathTree, env: &Environment, resolution: f64) -> ValidationReport {
    let mut report = ValidationReport::default();
    if tree.is_empty() {
        report.complete.violations.push("empty tree".into());
        return report;
    }
    let space = env.hypotheses();
    let root = tree.vertex(tree.root());
    if root.belief != env.initial_belief {
        report.consistent_beliefs.violations.push(format!(
            "root belief {} is not the initial belief",
            root.belief
        ));
    }
    if root.state.planar_distance(&env.start) > 1e-9 {
        report
            .complete
            .violations
            .push("root is not the start state".into());
    }

    for leaf in tree.leaves() {
        let v = tree.vertex(leaf);
        if !v.is_goal || !env.is_goal(&v.state, &v.belief) {
            report
                .complete
                .violations
                .push(format!("leaf {leaf} does not satisfy the goal condition"));
        }
    }
    // execute the tree in every world the initial belief allows
    for h in env.initial_belief.support().iter() {
        let mut v = tree.root();
        loop {
            let edges: Vec<_> = tree.out_edges(v).copied().collect();
            if edges.is_empty() {
                if !env.is_goal_in(&tree.vertex(v).state, h) {
                    report
                        .complete
                        .violations
                        .push(format!("world {h} ends at leaf {v} outside its goal"));
                }
                break;
            }
            let next = if edges.iter().any(|e| e.is_observation) {
                edges
                    .iter()
                    .filter(|e| e.is_observation && tree.vertex(e.to).belief.support().contains(h))
                    .map(|e| e.to)
                    .next()
            } else if edges.len() == 1 {
                Some(edges[0].to)
            } else {
                None
            };
            match next {
                Some(n) => v = n,
                None => {
                    report.complete.violations.push(format!(
                        "world {h} has no unique continuation at vertex {v}"
                    ));
                    break;
                }
            }
        }
    }

    for e in tree.edges().iter().filter(|e| !e.is_observation) {
        let (from, to) = (tree.vertex(e.from), tree.vertex(e.to));
        if from.belief != to.belief {
            report.valid_edges.violations.push(format!(
                "movement edge {}->{} changes the belief",
                e.from, e.to
            ));
        }
        for h in from.belief.support().iter() {
            if !env.is_motion_valid(&from.state, &to.state, h, resolution) {
                report.valid_edges.violations.push(format!(
                    "movement edge {}->{} collides in world {h}",
                    e.from, e.to
                ));
            }
        }
    }

    for v in tree.observation_vertices() {
        let parent = tree.vertex(v);
        let edges: Vec<_> = tree.out_edges(v).copied().collect();
        if edges.iter().any(|e| !e.is_observation) {
            report
                .consistent_beliefs
                .violations
                .push(format!("vertex {v} both observes and moves"));
        }
        let mut objects: Vec<usize> = parent
            .belief
            .support()
            .iter()
            .flat_map(|h| env.targets_found(&parent.state, h))
            .collect();
        objects.sort_unstable();
        objects.dedup();
        let expected = match space.observe_all(&parent.belief, &objects) {
            Ok(e) => e,
            Err(err) => {
                report
                    .consistent_beliefs
                    .violations
                    .push(format!("vertex {v}: {err}"));
                continue;
            }
        };
        let mut got: Vec<&Belief> = edges
            .iter()
            .filter(|e| e.is_observation)
            .map(|e| &tree.vertex(e.to).belief)
            .collect();
        let mut want: Vec<&Belief> = expected.iter().collect();
        let key = |b: &&Belief| b.to_string();
        got.sort_by_key(key);
        want.sort_by_key(key);
        if got != want {
            report.consistent_beliefs.violations.push(format!(
                "observation at vertex {v} yields {} posteriors, expected {}",
                got.len(),
                want.len()
            ));
        }
        for e in edges.iter().filter(|e| e.is_observation) {
            if tree.vertex(e.to).state != parent.state {
                report
                    .consistent_beliefs
                    .violations
                    .push(format!("observation edge {v}->{} moves the robot", e.to));
            }
        }
    }
    report
}

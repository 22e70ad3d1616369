//! Shortcutting of path trees between observation points.

use rand::Rng;

use crate::belief::WorldSet;
use crate::geometry::{Environment, RobotState};
use crate::planner::tree::{PathTree, TreeVertex};

/// Maximal movement-only chains `[start, .., end]` of tree vertex ids.
///
/// Chains break at the root, at observation sources and targets, at branch
/// points, and at leaves.
pub fn movement_segments(tree: &PathTree) -> Vec<Vec<usize>> {
    let is_break = |v: usize| {
        v == tree.root()
            || tree.is_leaf(v)
            || tree.out_edges(v).count() > 1
            || tree.out_edges(v).any(|e| e.is_observation)
            || tree.is_observation_target(v)
    };
    let mut segments = Vec::new();
    for start in (0..tree.len()).filter(|&v| is_break(v)) {
        for e in tree.out_edges(start).filter(|e| !e.is_observation) {
            let mut chain = vec![start, e.to];
            let mut v = e.to;
            while !is_break(v) {
                v = tree
                    .out_edges(v)
                    .next()
                    .expect("non-break vertex has one child")
                    .to;
                chain.push(v);
            }
            segments.push(chain);
        }
    }
    segments
}

struct Shortcutter<'a> {
    env: &'a Environment,
    worlds: WorldSet,
    resolution: f64,
}

impl Shortcutter<'_> {
    fn clear(&self, a: &RobotState, b: &RobotState) -> bool {
        self.worlds
            .iter()
            .all(|h| self.env.is_motion_valid(a, b, h, self.resolution))
    }

    fn length(&self, path: &[RobotState]) -> f64 {
        path.windows(2)
            .map(|w| self.env.distance(&w[0], &w[1]))
            .sum()
    }

    /// Jumps from each kept waypoint to the farthest one reachable in a
    /// straight line.
    fn greedy(&self, path: &[RobotState]) -> Vec<RobotState> {
        let mut out = vec![path[0]];
        let mut i = 0;
        while i + 1 < path.len() {
            let j = (i + 2..path.len())
                .rev()
                .find(|&j| self.clear(&path[i], &path[j]))
                .unwrap_or(i + 1);
            out.push(path[j]);
            i = j;
        }
        out
    }

    /// Replaces the stretch between two random points on the polyline by a
    /// straight motion when that is valid and shorter.
    fn random_shortcut(&self, path: &mut Vec<RobotState>, rng: &mut impl Rng) {
        if path.len() < 3 {
            return;
        }
        let lengths: Vec<f64> = path
            .windows(2)
            .map(|w| self.env.distance(&w[0], &w[1]))
            .collect();
        let total: f64 = lengths.iter().sum();
        if !(total > 0.0) {
            return;
        }
        let (mut s1, mut s2) = (rng.gen_range(0.0..total), rng.gen_range(0.0..total));
        if s1 > s2 {
            std::mem::swap(&mut s1, &mut s2);
        }
        let locate = |s: f64| {
            let mut acc = 0.0;
            for (i, &l) in lengths.iter().enumerate() {
                if s < acc + l || i + 1 == lengths.len() {
                    let t = if l > 0.0 {
                        ((s - acc) / l).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    return (i, path[i].interpolate(&path[i + 1], t));
                }
                acc += l;
            }
            unreachable!("polyline has at least one edge")
        };
        let (e1, p1) = locate(s1);
        let (e2, p2) = locate(s2);
        if e1 == e2 {
            return;
        }
        let mut detour = vec![p1];
        detour.extend_from_slice(&path[e1 + 1..=e2]);
        detour.push(p2);
        if self.env.distance(&p1, &p2) >= self.length(&detour) - 1e-12 || !self.clear(&p1, &p2) {
            return;
        }
        // sub-segments of checked edges are sampled at different points
        if !self.clear(&path[e1], &p1) || !self.clear(&p2, &path[e2 + 1]) {
            return;
        }
        let mut next = path[..=e1].to_vec();
        next.extend([p1, p2]);
        next.extend_from_slice(&path[e2 + 1..]);
        next.dedup();
        *path = next;
    }
}

/// Shortens every movement segment of `tree`.
///
/// Each segment gets a greedy straight-line pass followed by `rounds`
/// random shortcut attempts, accepted only if valid in every world of the
/// segment's belief. Segment endpoints, observation edges, and branching
/// are left untouched. `rounds == 0` returns the tree unchanged.
pub fn simplify_path_tree(
    tree: &PathTree,
    env: &Environment,
    rounds: usize,
    resolution: f64,
    rng: &mut impl Rng,
) -> PathTree {
    if rounds == 0 || tree.is_empty() {
        return tree.clone();
    }
    let segments = movement_segments(tree);
    let mut simplified: Vec<Vec<RobotState>> = Vec::with_capacity(segments.len());
    for seg in &segments {
        let path: Vec<RobotState> = seg.iter().map(|&v| tree.vertex(v).state).collect();
        let sc = Shortcutter {
            env,
            worlds: tree.vertex(seg[0]).belief.support(),
            resolution,
        };
        let mut path = sc.greedy(&path);
        for _ in 0..rounds {
            sc.random_shortcut(&mut path, rng);
        }
        simplified.push(path);
    }

    // rebuild, depth first from the root
    let mut out = PathTree::with_root(tree.vertex(tree.root()).clone());
    let mut stack = vec![(tree.root(), out.root())];
    while let Some((old, new)) = stack.pop() {
        let observation_targets: Vec<usize> = tree
            .out_edges(old)
            .filter(|e| e.is_observation)
            .map(|e| e.to)
            .collect();
        for child in observation_targets {
            let id = out.add_child(new, tree.vertex(child).clone(), true);
            stack.push((child, id));
        }
        for (seg, path) in segments
            .iter()
            .zip(&simplified)
            .filter(|(s, _)| s[0] == old)
        {
            let belief = tree.vertex(old).belief.clone();
            let mut at = new;
            for state in &path[1..path.len() - 1] {
                at = out.add_child(
                    at,
                    TreeVertex {
                        state: *state,
                        is_goal: false,
                        belief: belief.clone(),
                    },
                    false,
                );
            }
            let end = *seg.last().expect("segment has two vertices");
            let id = out.add_child(at, tree.vertex(end).clone(), false);
            stack.push((end, id));
        }
    }
    out
}

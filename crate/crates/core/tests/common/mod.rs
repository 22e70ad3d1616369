//! Scenario access and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::path::PathBuf;

use pto_core::planner::{RandomGraph, RandomGraphConfig};
use pto_core::{
    load_environment, Belief, Environment, HypothesisSpace, Mode, PlannerConfig, RobotState,
    SamplerConfig, SamplerKind, WorldSet,
};

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.json"))
}

pub fn scenario(name: &str) -> Environment {
    load_environment(scenario_path(name)).unwrap()
}

/// Planner settings used for each shipped scenario in the seeded suites.
pub fn suite_config(name: &str, seed: u64) -> PlannerConfig {
    let (iterations, radius) = match name {
        "toy" => (2000, 0.5),
        "corridor3" => (1000, 1.0),
        "goals3" => (1000, 0.5),
        other => panic!("unknown scenario {other}"),
    };
    PlannerConfig {
        iterations,
        radius,
        sampler: SamplerConfig {
            kind: SamplerKind::Uniform,
            seed,
            ..SamplerConfig::default()
        },
        ..PlannerConfig::default()
    }
}

pub const SUITE: [&str; 3] = ["toy", "corridor3", "goals3"];

/// Shortest distance from vertex 0 to any vertex satisfying `is_goal`,
/// using only edges valid in world 0.
pub fn dijkstra(graph: &RandomGraph, is_goal: impl Fn(&RobotState) -> bool) -> f64 {
    let n = graph.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for e in graph.edges().iter().filter(|e| e.valid_worlds.contains(0)) {
        adj[e.source].push((e.target, e.length));
        adj[e.target].push((e.source, e.length));
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[0] = 0.0;
    heap.push((Reverse(OrdF64(0.0)), 0usize));
    while let Some((Reverse(OrdF64(d)), u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if is_goal(&graph.vertex(u).state) {
            return d;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                heap.push((Reverse(OrdF64(d + w)), v));
            }
        }
    }
    f64::INFINITY
}

#[derive(PartialEq)]
struct OrdF64(f64);
impl Eq for OrdF64 {}
impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// 6×6 grid with a wall in column 3. Door cells in that column hold the
/// partially observable obstacles; cell (3, 5) is always open. Cells
/// 4-adjacent to a door see it in every world.
pub struct GridWorld {
    pub doors: Vec<(i32, i32)>,
    pub start: (i32, i32),
    pub goal: (i32, i32),
}

pub const GRID: i32 = 6;

impl GridWorld {
    pub fn new(doors: &[(i32, i32)]) -> Self {
        Self {
            doors: doors.to_vec(),
            start: (0, 2),
            goal: (5, 2),
        }
    }

    fn num_worlds(&self) -> usize {
        1 << self.doors.len()
    }

    fn static_wall(&self, c: (i32, i32)) -> bool {
        c.0 == 3 && c.1 != 5 && !self.doors.contains(&c)
    }

    fn blocked(&self, c: (i32, i32), h: usize) -> bool {
        self.doors
            .iter()
            .position(|&d| d == c)
            .is_some_and(|k| h >> k & 1 == 1)
    }

    pub fn cells(&self) -> Vec<(i32, i32)> {
        let mut cells = vec![self.start];
        for y in 0..GRID {
            for x in 0..GRID {
                if (x, y) != self.start && !self.static_wall((x, y)) {
                    cells.push((x, y));
                }
            }
        }
        cells
    }

    fn neighbors(&self, c: (i32, i32)) -> impl Iterator<Item = (i32, i32)> + '_ {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(move |(dx, dy)| (c.0 + dx, c.1 + dy))
            .filter(|&(x, y)| (0..GRID).contains(&x) && (0..GRID).contains(&y))
            .filter(move |&n| !self.static_wall(n))
    }

    fn seen(&self, c: (i32, i32)) -> Vec<usize> {
        (0..self.doors.len())
            .filter(|&k| {
                let d = self.doors[k];
                (d.0 - c.0).abs() + (d.1 - c.1).abs() == 1
            })
            .collect()
    }

    pub fn state(c: (i32, i32)) -> RobotState {
        RobotState::new(c.0 as f64, c.1 as f64, 0.0)
    }

    /// The random graph the planner sees; vertex 0 is the start.
    pub fn random_graph(&self) -> (RandomGraph, HypothesisSpace) {
        let cells = self.cells();
        let id: HashMap<_, _> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut g = RandomGraph::new();
        for &c in &cells {
            g.add_vertex(Self::state(c), vec![self.seen(c); self.num_worlds()]);
        }
        for &c in &cells {
            for n in self.neighbors(c) {
                if id[&c] < id[&n] {
                    let worlds: WorldSet = (0..self.num_worlds())
                        .filter(|&h| !self.blocked(c, h) && !self.blocked(n, h))
                        .collect();
                    g.add_edge(id[&c], id[&n], &worlds, 1.0);
                }
            }
        }
        let space = HypothesisSpace::enumerate(Mode::Obstacles, self.doors.len()).unwrap();
        (g, space)
    }

    /// Optimal expected cost by value iteration over (cell, support) with a
    /// uniform prior, observing every adjacent door at once.
    pub fn optimal_cost(&self) -> f64 {
        let full: u32 = (1u32 << self.num_worlds()) - 1;
        let mut masks = vec![full];
        let mut i = 0;
        while i < masks.len() {
            for c in self.cells() {
                for part in self.partition(masks[i], &self.seen(c)) {
                    if !masks.contains(&part) {
                        masks.push(part);
                    }
                }
            }
            i += 1;
        }
        let cells = self.cells();
        let mut value: HashMap<((i32, i32), u32), f64> = HashMap::new();
        let free = |c: (i32, i32), m: u32| {
            (0..self.num_worlds()).all(|h| m >> h & 1 == 0 || !self.blocked(c, h))
        };
        for &m in &masks {
            for &c in &cells {
                if free(c, m) {
                    value.insert((c, m), if c == self.goal { 0.0 } else { f64::INFINITY });
                }
            }
        }
        loop {
            let mut changed = false;
            for &m in &masks {
                for &c in &cells {
                    let Some(&old) = value.get(&(c, m)) else {
                        continue;
                    };
                    let mut best = old;
                    for n in self.neighbors(c) {
                        if let Some(&v) = value.get(&(n, m)) {
                            best = best.min(1.0 + v);
                        }
                    }
                    let parts = self.partition(m, &self.seen(c));
                    if parts.len() > 1 {
                        let total = m.count_ones() as f64;
                        let exp: f64 = parts
                            .iter()
                            .map(|&p| p.count_ones() as f64 / total * value[&(c, p)])
                            .sum();
                        best = best.min(exp);
                    }
                    if best < old {
                        value.insert((c, m), best);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        value[&(self.start, full)]
    }

    /// Splits the worlds in `mask` by the presence bits of `objects`.
    fn partition(&self, mask: u32, objects: &[usize]) -> Vec<u32> {
        let mut parts: HashMap<usize, u32> = HashMap::new();
        for h in (0..self.num_worlds()).filter(|&h| mask >> h & 1 == 1) {
            let key = objects.iter().fold(0, |k, &o| k << 1 | (h >> o & 1));
            *parts.entry(key).or_default() |= 1 << h;
        }
        let mut v: Vec<u32> = parts.into_values().collect();
        v.sort_unstable();
        v
    }
}

/// Shortest path length for a disc of radius `r` from `p` to its mirror
/// image across the vertical line `x = cx`, passing over (above, if
/// `above`) or under a wall whose rounded corners sit at `(cx ± half, cy)`.
/// Straight tangent, arc around the near corner, the flat run of length
/// `2·half`, then the mirrored arc and tangent.
pub fn corner_detour(p: [f64; 2], cx: f64, half: f64, cy: f64, r: f64) -> f64 {
    let dx = cx - half - p[0];
    let dy = (cy - p[1]).abs();
    let d = dx.hypot(dy);
    let tangent = (d * d - r * r).sqrt();
    let turn = dy.atan2(dx) + (r / d).asin();
    2.0 * (tangent + r * turn) + 2.0 * half
}

/// Optimal expected cost on the toy scenario: both doors are visible from
/// the start, so the optimum averages the per-world shortest paths.
pub fn toy_optimum() -> f64 {
    let start = [0.5, 2.0];
    let straight = 4.0;
    // door 0 closed, door 1 open: over the top of the wall piece at y ∈ [2.4, 2.8]
    let via_upper = corner_detour(start, 2.5, 0.1, 2.8, 0.1);
    // both closed: under the wall piece starting at y = 0.8
    let via_lower = corner_detour(start, 2.5, 0.1, 0.8, 0.1);
    (straight + straight + via_upper + via_lower) / 4.0
}

pub fn uniform_prior(n: usize) -> Belief {
    Belief::uniform(n)
}

/// The random-graph settings `plan` derives from `cfg`.
pub fn graph_config(cfg: &PlannerConfig) -> RandomGraphConfig {
    RandomGraphConfig {
        max_iterations: cfg.iterations,
        radius: cfg.radius,
        ..RandomGraphConfig::default()
    }
}

//! Rapidly-exploring random graph over robot configurations.
//!
//! Every vertex remembers which objects the sensor sees from it in each
//! world; every edge remembers the worlds in which its motion is
//! collision-free.

use std::collections::HashMap;

use log::{debug, warn};

use crate::belief::WorldSet;
use crate::error::{Error, Result};
use crate::geometry::{Environment, RobotState};
use crate::sampler::{heading_towards, Sampler};
use crate::spatial::GridIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomVertex {
    pub state: RobotState,
    /// `observable[h]`: objects seen from this state in world `h`, ascending.
    pub observable: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomEdge {
    pub source: usize,
    pub target: usize,
    pub valid_worlds: WorldSet,
    /// Traversal cost.
    pub length: f64,
}

/// Undirected graph; vertex 0 is the start state.
#[derive(Debug, Clone, Default)]
pub struct RandomGraph {
    vertices: Vec<RandomVertex>,
    edges: Vec<RandomEdge>,
    incident: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl RandomGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, state: RobotState, observable: Vec<Vec<usize>>) -> usize {
        self.vertices.push(RandomVertex { state, observable });
        self.incident.push(Vec::new());
        self.vertices.len() - 1
    }

    /// Marks edge `u`–`v` valid in world `hypothesis`, creating it on first use.
    pub fn add_valid_world(&mut self, u: usize, v: usize, hypothesis: usize, length: f64) -> usize {
        let key = (u.min(v), u.max(v));
        let id = match self.lookup.get(&key) {
            Some(&id) => id,
            None => {
                let id = self.edges.len();
                self.edges.push(RandomEdge {
                    source: key.0,
                    target: key.1,
                    valid_worlds: WorldSet::default(),
                    length,
                });
                self.incident[key.0].push(id);
                self.incident[key.1].push(id);
                self.lookup.insert(key, id);
                id
            }
        };
        self.edges[id].valid_worlds.insert(hypothesis);
        id
    }

    /// Adds an edge valid in `worlds`; empty sets are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize, worlds: &WorldSet, length: f64) {
        for h in worlds.iter() {
            self.add_valid_world(u, v, h, length);
        }
    }

    pub fn vertices(&self) -> &[RandomVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &RandomVertex {
        &self.vertices[id]
    }

    pub fn edges(&self) -> &[RandomEdge] {
        &self.edges
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<&RandomEdge> {
        self.lookup
            .get(&(u.min(v), u.max(v)))
            .map(|&id| &self.edges[id])
    }

    /// Ids of the edges touching `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGraphConfig {
    /// Accepted samples to add.
    pub max_iterations: usize,
    /// Connection radius in the state metric.
    pub radius: f64,
    /// Motion-check spacing; the environment default when `None`.
    pub resolution: Option<f64>,
    /// Add start-position states facing every object before sampling.
    pub seed_start_observations: bool,
    /// Hard stop on total draws, as a multiple of `max_iterations`.
    pub max_draws_factor: usize,
}

impl Default for RandomGraphConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            radius: 0.5,
            resolution: None,
            seed_start_observations: true,
            max_draws_factor: 100,
        }
    }
}

struct Builder<'a> {
    env: &'a Environment,
    graph: RandomGraph,
    index: GridIndex,
    radius: f64,
    resolution: f64,
}

impl Builder<'_> {
    fn insert(&mut self, state: RobotState) -> usize {
        let env = self.env;
        let observable = (0..env.num_hypotheses())
            .map(|h| env.targets_found(&state, h))
            .collect();
        let neighbors = self.index.within(state.position(), self.radius);
        let v = self.graph.add_vertex(state, observable);
        for u in neighbors {
            let other = self.graph.vertices[u].state;
            let length = env.distance(&state, &other);
            if length > self.radius {
                continue;
            }
            let worlds = env.motion_valid_worlds(&state, &other, self.resolution);
            self.graph.add_edge(v, u, &worlds, length);
        }
        self.index.insert(state.position());
        v
    }

    fn contains_state(&self, state: &RobotState) -> bool {
        self.index
            .within(state.position(), 0.0)
            .into_iter()
            .any(|id| self.graph.vertices[id].state == *state)
    }
}

/// Builds the random graph by rejection sampling in randomly drawn worlds.
///
/// Rejected draws do not count as iterations. A draw that reproduces an
/// existing vertex exactly (typically a repeated goal sample) counts but
/// adds nothing.
pub fn build_random_graph(
    env: &Environment,
    sampler: &mut Sampler,
    config: &RandomGraphConfig,
) -> Result<RandomGraph> {
    if !(config.radius > 0.0) {
        return Err(Error::InvalidEnvironment(
            "connection radius must be positive".into(),
        ));
    }
    let resolution = config
        .resolution
        .unwrap_or_else(|| env.default_resolution());
    if !(resolution > 0.0) {
        return Err(Error::InvalidEnvironment(
            "motion resolution must be positive".into(),
        ));
    }
    for h in 0..env.num_hypotheses() {
        if !env.is_valid(&env.start, h) {
            return Err(Error::InvalidStart(h));
        }
    }
    let mut b = Builder {
        env,
        graph: RandomGraph::new(),
        index: GridIndex::new(config.radius),
        radius: config.radius,
        resolution,
    };
    b.insert(env.start);

    if config.seed_start_observations {
        for hyp in env.hypotheses().hypotheses() {
            for object in hyp.present_objects() {
                let theta =
                    heading_towards(env.start.x, env.start.y, env.po_objects[object].center);
                let state = RobotState::new(env.start.x, env.start.y, theta);
                if !b.contains_state(&state) {
                    b.insert(state);
                }
            }
        }
    }

    let max_draws = config
        .max_iterations
        .saturating_mul(config.max_draws_factor)
        .max(1000);
    let mut iteration = 0;
    let mut draws = 0;
    while iteration < config.max_iterations {
        if draws == max_draws {
            warn!("random graph stopped after {draws} draws with {iteration} accepted samples");
            break;
        }
        draws += 1;
        let h = sampler.sample_hypothesis(env.num_hypotheses());
        let (_, state) = sampler.draw(env, h);
        if !env.is_valid(&state, h) {
            continue;
        }
        if !b.contains_state(&state) {
            b.insert(state);
        }
        iteration += 1;
    }
    debug!(
        "random graph: {} vertices, {} edges, {draws} draws",
        b.graph.num_vertices(),
        b.graph.num_edges()
    );
    Ok(b.graph)
}

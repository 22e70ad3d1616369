//! Lifting the random graph into belief space.
//!
//! One layer per reachable belief. Movement edges stay inside a layer and
//! only exist where the random edge is valid in every world the belief still
//! allows. Observation edges leave a vertex towards the same configuration
//! in the posterior layers.

use log::debug;
use num_traits::ToPrimitive;

use crate::belief::{branching_probability, Belief, HypothesisSpace, WorldSet};
use crate::error::{Error, Result};
use crate::geometry::RobotState;
use crate::planner::random_graph::RandomGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefVertex {
    pub random_vertex: usize,
    /// Index into [`BeliefGraph::beliefs`].
    pub belief: usize,
    pub is_goal: bool,
    /// Posterior vertices reached by observing here, empty if none.
    pub belief_children: Vec<usize>,
    /// Branching probability of each entry of `belief_children`.
    pub branch_probabilities: Vec<f64>,
    /// Objects observed on the observation edges.
    pub observed_objects: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BeliefGraph {
    beliefs: Vec<Belief>,
    supports: Vec<WorldSet>,
    vertices: Vec<BeliefVertex>,
    states: Vec<RobotState>,
    /// Undirected movement adjacency `(neighbor, length)`, ascending by neighbor.
    movement: Vec<Vec<(usize, f64)>>,
    /// Sources of observation edges pointing at each vertex.
    observation_parents: Vec<Vec<usize>>,
    /// `lookup[random_vertex][belief]`.
    lookup: Vec<Vec<Option<usize>>>,
    start: usize,
    num_movement_edges: usize,
}

impl BeliefGraph {
    pub fn beliefs(&self) -> &[Belief] {
        &self.beliefs
    }

    pub fn vertices(&self) -> &[BeliefVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &BeliefVertex {
        &self.vertices[id]
    }

    pub fn state(&self, id: usize) -> &RobotState {
        &self.states[id]
    }

    pub fn belief_of(&self, id: usize) -> &Belief {
        &self.beliefs[self.vertices[id].belief]
    }

    pub fn support_of(&self, id: usize) -> &WorldSet {
        &self.supports[self.vertices[id].belief]
    }

    pub fn movement_neighbors(&self, id: usize) -> &[(usize, f64)] {
        &self.movement[id]
    }

    pub fn observation_parents(&self, id: usize) -> &[usize] {
        &self.observation_parents[id]
    }

    /// The belief vertex for a random vertex in a belief layer, if present.
    pub fn find(&self, random_vertex: usize, belief: usize) -> Option<usize> {
        self.lookup
            .get(random_vertex)?
            .get(belief)
            .copied()
            .flatten()
    }

    /// Start configuration in the initial belief.
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_movement_edges(&self) -> usize {
        self.num_movement_edges
    }

    pub fn num_observation_edges(&self) -> usize {
        self.vertices.iter().map(|v| v.belief_children.len()).sum()
    }
}

/// Builds the belief graph.
///
/// `beliefs` must be the reachable set of `beliefs[0]`, the initial belief
/// (see [`HypothesisSpace::all_belief_states`]). A random vertex enters a
/// layer iff it touches an edge valid in all worlds of that belief; the
/// start vertex enters every layer. Observations at a vertex cover the
/// objects it sees in any world of its belief, observed jointly.
pub fn build_belief_graph(
    graph: &RandomGraph,
    space: &HypothesisSpace,
    beliefs: &[Belief],
    is_goal: impl Fn(&RobotState, &Belief) -> bool,
) -> Result<BeliefGraph> {
    if beliefs.is_empty() || graph.num_vertices() == 0 {
        return Err(Error::StartUnreachable);
    }
    let supports: Vec<WorldSet> = beliefs.iter().map(Belief::support).collect();
    let index_of: std::collections::HashMap<&Belief, usize> =
        beliefs.iter().enumerate().map(|(i, b)| (b, i)).collect();

    // compatible[e][b]
    let compatible: Vec<Vec<bool>> = graph
        .edges()
        .iter()
        .map(|e| {
            supports
                .iter()
                .map(|s| s.is_subset(&e.valid_worlds))
                .collect()
        })
        .collect();

    let mut vertices = Vec::new();
    let mut states = Vec::new();
    let mut lookup = vec![vec![None; beliefs.len()]; graph.num_vertices()];
    for (rv, random_vertex) in graph.vertices().iter().enumerate() {
        for (bi, belief) in beliefs.iter().enumerate() {
            let reachable = rv == 0 || graph.incident_edges(rv).iter().any(|&e| compatible[e][bi]);
            if !reachable {
                continue;
            }
            lookup[rv][bi] = Some(vertices.len());
            vertices.push(BeliefVertex {
                random_vertex: rv,
                belief: bi,
                is_goal: is_goal(&random_vertex.state, belief),
                belief_children: Vec::new(),
                branch_probabilities: Vec::new(),
                observed_objects: Vec::new(),
            });
            states.push(random_vertex.state);
        }
    }

    let mut movement = vec![Vec::new(); vertices.len()];
    let mut num_movement_edges = 0;
    for (ei, edge) in graph.edges().iter().enumerate() {
        for bi in (0..beliefs.len()).filter(|&bi| compatible[ei][bi]) {
            let (Some(s), Some(t)) = (lookup[edge.source][bi], lookup[edge.target][bi]) else {
                continue;
            };
            movement[s].push((t, edge.length));
            movement[t].push((s, edge.length));
            num_movement_edges += 1;
        }
    }
    for adj in &mut movement {
        adj.sort_by_key(|&(n, _)| n);
    }

    let mut observation_parents = vec![Vec::new(); vertices.len()];
    for (v, vertex) in vertices.iter_mut().enumerate() {
        let (rv, bi) = (vertex.random_vertex, vertex.belief);
        let mut objects: Vec<usize> = supports[bi]
            .iter()
            .flat_map(|h| graph.vertex(rv).observable[h].iter().copied())
            .collect();
        objects.sort_unstable();
        objects.dedup();
        if objects.is_empty() {
            continue;
        }
        let posteriors = space.observe_all(&beliefs[bi], &objects)?;
        let mut children = Vec::with_capacity(posteriors.len());
        for child in &posteriors {
            let ci = *index_of.get(child).ok_or_else(|| {
                Error::InvalidBelief(format!("posterior {child} is not a reachable belief"))
            })?;
            children.push((lookup[rv][ci], branching_probability(&beliefs[bi], child)));
        }
        // a posterior layer never drops a vertex of its parent layer
        if children.is_empty() || children.iter().any(|(t, _)| t.is_none()) {
            continue;
        }
        for (target, p) in children {
            let target = target.expect("checked above");
            vertex.belief_children.push(target);
            vertex
                .branch_probabilities
                .push(p.to_f64().unwrap_or(f64::NAN));
            observation_parents[target].push(v);
        }
        vertex.observed_objects = objects;
    }

    let start = lookup[0][0].ok_or(Error::StartUnreachable)?;
    debug!(
        "belief graph: {} beliefs, {} vertices, {num_movement_edges} movement edges",
        beliefs.len(),
        vertices.len()
    );
    Ok(BeliefGraph {
        beliefs: beliefs.to_vec(),
        supports,
        vertices,
        states,
        movement,
        observation_parents,
        lookup,
        start,
        num_movement_edges,
    })
}

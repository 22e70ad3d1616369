//! The planning pipeline: random graph, belief graph, cost-to-go, path-tree
//! extraction, and simplification.

pub mod belief_graph;
pub mod costs;
pub mod evaluate;
pub mod random_graph;
pub mod simplify;
pub mod tree;

use std::time::{Duration, Instant};

use log::info;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Environment;
use crate::sampler::{Sampler, SamplerConfig};

pub use belief_graph::{build_belief_graph, BeliefGraph, BeliefVertex};
pub use costs::{compute_expected_costs, observation_cost, CostTable};
pub use evaluate::{
    evaluate_path_tree_cost, validate_path_tree, ConstraintCheck, ValidationReport,
};
pub use random_graph::{
    build_random_graph, RandomEdge, RandomGraph, RandomGraphConfig, RandomVertex,
};
pub use simplify::{movement_segments, simplify_path_tree};
pub use tree::{
    extract_path_tree, PathTree, PathTreeJson, TreeEdge, TreeEdgeJson, TreeVertex, TreeVertexJson,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    pub iterations: usize,
    pub radius: f64,
    /// Motion-check spacing; the environment default when `None`.
    pub resolution: Option<f64>,
    pub sampler: SamplerConfig,
    pub simplify_rounds: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            iterations: 1000,
            radius: 0.5,
            resolution: None,
            sampler: SamplerConfig::default(),
            simplify_rounds: 100,
        }
    }
}

/// Wall-clock time per pipeline phase.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimes {
    pub random_graph: Duration,
    pub belief_graph: Duration,
    pub costs: Duration,
    pub extraction: Duration,
    pub simplification: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphCounts {
    pub random_vertices: usize,
    pub random_edges: usize,
    pub beliefs: usize,
    pub belief_vertices: usize,
    pub movement_edges: usize,
    pub observation_edges: usize,
}

#[derive(Debug, Clone)]
pub struct PlanReport {
    pub times: PhaseTimes,
    pub counts: GraphCounts,
    /// Cost-to-go of the start vertex; infinite when unsolved.
    pub start_cost: f64,
    /// Extracted tree before simplification.
    pub raw_tree: Option<PathTree>,
    pub tree: Option<PathTree>,
}

impl PlanReport {
    pub fn solved(&self) -> bool {
        self.tree.is_some()
    }
}

/// Runs the whole pipeline once.
///
/// Errors signal bad input; a run that simply finds no complete tree
/// returns a report with `tree == None`.
pub fn plan(env: &Environment, config: &PlannerConfig) -> Result<PlanReport> {
    let t0 = Instant::now();
    let mut times = PhaseTimes::default();
    let mut counts = GraphCounts::default();
    let resolution = config
        .resolution
        .unwrap_or_else(|| env.default_resolution());

    let mut sampler = Sampler::new(config.sampler)?;
    let rg_config = RandomGraphConfig {
        max_iterations: config.iterations,
        radius: config.radius,
        resolution: Some(resolution),
        ..RandomGraphConfig::default()
    };
    let t = Instant::now();
    let graph = build_random_graph(env, &mut sampler, &rg_config)?;
    times.random_graph = t.elapsed();
    counts.random_vertices = graph.num_vertices();
    counts.random_edges = graph.num_edges();

    let t = Instant::now();
    let beliefs = env.hypotheses().all_belief_states(&env.initial_belief)?;
    let bg = build_belief_graph(&graph, env.hypotheses(), &beliefs, |s, b| env.is_goal(s, b))?;
    times.belief_graph = t.elapsed();
    counts.beliefs = beliefs.len();
    counts.belief_vertices = bg.num_vertices();
    counts.movement_edges = bg.num_movement_edges();
    counts.observation_edges = bg.num_observation_edges();

    let t = Instant::now();
    let costs = compute_expected_costs(&bg);
    times.costs = t.elapsed();
    let start_cost = costs.get(bg.start());

    let t = Instant::now();
    let raw = match extract_path_tree(&bg, &costs) {
        Ok(tree) => Some(tree),
        Err(Error::NoSolution) => None,
        Err(e) => return Err(e),
    };
    times.extraction = t.elapsed();

    let t = Instant::now();
    let tree = raw.as_ref().map(|raw| {
        // separate stream so simplification does not perturb graph sampling
        let mut rng = ChaCha8Rng::seed_from_u64(config.sampler.seed ^ 0x5EED_5EED_5EED_5EED);
        simplify_path_tree(raw, env, config.simplify_rounds, resolution, &mut rng)
    });
    times.simplification = t.elapsed();
    times.total = t0.elapsed();

    info!(
        "plan: {} random vertices, {} belief vertices, start cost {start_cost}",
        counts.random_vertices, counts.belief_vertices
    );
    Ok(PlanReport {
        times,
        counts,
        start_cost,
        raw_tree: raw,
        tree,
    })
}

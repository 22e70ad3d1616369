//! Multi-seed benchmark runs and their CSV report.
//!
//! Columns, in order: `kind` (`run` or `summary`), `seed`, `iterations`,
//! `sampler`, `success`, `tree_cost` (after simplification), `raw_cost`
//! (expected cost-to-go of the start before simplification), per-phase
//! seconds `t_random_graph`, `t_belief_graph`, `t_costs`, `t_extraction`,
//! `t_simplification`, `t_total`, graph sizes `random_vertices`,
//! `random_edges`, `beliefs`, `belief_vertices`, `movement_edges`,
//! `observation_edges`, and for summary rows `runs`, `success_rate`,
//! `mean_cost`, `std_cost` (population deviation over successful runs).
//! Fields that do not apply to a row are empty.

use std::io::Write;
use std::ops::Range;

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;

use pto_core::{evaluate_path_tree_cost, plan, Environment};

use crate::{PlannerArgs, SamplerArg};

#[derive(Debug, Clone, Default, Serialize)]
pub struct Record {
    pub kind: &'static str,
    pub seed: Option<u64>,
    pub iterations: usize,
    pub sampler: &'static str,
    pub success: Option<bool>,
    pub tree_cost: Option<f64>,
    pub raw_cost: Option<f64>,
    pub t_random_graph: Option<f64>,
    pub t_belief_graph: Option<f64>,
    pub t_costs: Option<f64>,
    pub t_extraction: Option<f64>,
    pub t_simplification: Option<f64>,
    pub t_total: Option<f64>,
    pub random_vertices: Option<usize>,
    pub random_edges: Option<usize>,
    pub beliefs: Option<usize>,
    pub belief_vertices: Option<usize>,
    pub movement_edges: Option<usize>,
    pub observation_edges: Option<usize>,
    pub runs: Option<usize>,
    pub success_rate: Option<f64>,
    pub mean_cost: Option<f64>,
    pub std_cost: Option<f64>,
}

fn sampler_name(s: SamplerArg) -> &'static str {
    match s {
        SamplerArg::Uniform => "uniform",
        SamplerArg::Camera => "camera",
    }
}

fn run_one(env: &Environment, args: &PlannerArgs, seed: u64, iterations: usize) -> Result<Record> {
    let report = plan(env, &args.config(iterations, seed))?;
    let tree_cost = report
        .tree
        .as_ref()
        .map(|t| evaluate_path_tree_cost(t, &env.initial_belief, env.angular_weight))
        .transpose()?;
    let t = report.times;
    let c = report.counts;
    Ok(Record {
        kind: "run",
        seed: Some(seed),
        iterations,
        sampler: sampler_name(args.sampler),
        success: Some(report.solved()),
        tree_cost,
        raw_cost: report.solved().then_some(report.start_cost),
        t_random_graph: Some(t.random_graph.as_secs_f64()),
        t_belief_graph: Some(t.belief_graph.as_secs_f64()),
        t_costs: Some(t.costs.as_secs_f64()),
        t_extraction: Some(t.extraction.as_secs_f64()),
        t_simplification: Some(t.simplification.as_secs_f64()),
        t_total: Some(t.total.as_secs_f64()),
        random_vertices: Some(c.random_vertices),
        random_edges: Some(c.random_edges),
        beliefs: Some(c.beliefs),
        belief_vertices: Some(c.belief_vertices),
        movement_edges: Some(c.movement_edges),
        observation_edges: Some(c.observation_edges),
        ..Record::default()
    })
}

/// Summary over the runs of one iteration budget.
pub fn summarize(runs: &[Record]) -> Record {
    let costs: Vec<f64> = runs.iter().filter_map(|r| r.tree_cost).collect();
    let n = costs.len() as f64;
    let (mean, std) = if costs.is_empty() {
        (None, None)
    } else {
        let mean = costs.iter().sum::<f64>() / n;
        let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n;
        (Some(mean), Some(var.sqrt()))
    };
    Record {
        kind: "summary",
        iterations: runs.first().map_or(0, |r| r.iterations),
        sampler: runs.first().map_or("", |r| r.sampler),
        runs: Some(runs.len()),
        success_rate: Some(costs.len() as f64 / runs.len().max(1) as f64),
        mean_cost: mean,
        std_cost: std,
        ..Record::default()
    }
}

/// Runs every (iterations, seed) pair in parallel. Rows come back grouped
/// by iteration budget, seeds ascending, each group followed by its
/// summary.
pub fn run(
    env: &Environment,
    args: &PlannerArgs,
    seeds: Range<u64>,
    iterations: &[usize],
) -> Result<Vec<Record>> {
    let jobs: Vec<(usize, u64)> = iterations
        .iter()
        .flat_map(|&it| seeds.clone().map(move |s| (it, s)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(it, seed)| run_one(env, args, seed, it))
        .collect::<Result<Vec<_>>>()?;
    let per_budget = seeds.end.saturating_sub(seeds.start) as usize;
    let mut out = Vec::with_capacity(runs.len() + iterations.len());
    for group in runs.chunks(per_budget.max(1)) {
        out.extend_from_slice(group);
        out.push(summarize(group));
    }
    Ok(out)
}

pub fn write_csv(writer: impl Write, records: &[Record]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

//! Expected cost-to-go by Dijkstra-style Bellman updates.
//!
//! Movement edges relax like plain Dijkstra. An observation vertex takes the
//! branching-probability-weighted sum of its posterior vertices' costs,
//! which is infinite while any posterior is still unreachable.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::planner::belief_graph::BeliefGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost, then on vertex id
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cost-to-go per belief-graph vertex; `f64::INFINITY` when unreachable.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    costs: Vec<f64>,
}

impl CostTable {
    pub fn get(&self, vertex: usize) -> f64 {
        self.costs[vertex]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.costs
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }
}

/// Probability-weighted cost of the posteriors of `vertex`, or `None` if it
/// has no observation edges.
pub fn observation_cost(bg: &BeliefGraph, costs: &[f64], vertex: usize) -> Option<f64> {
    let v = bg.vertex(vertex);
    if v.belief_children.is_empty() {
        return None;
    }
    let mut total = 0.0;
    for (&child, &p) in v.belief_children.iter().zip(&v.branch_probabilities) {
        let c = costs[child];
        if c.is_infinite() {
            return Some(f64::INFINITY);
        }
        total += p * c;
    }
    Some(total)
}

pub fn compute_expected_costs(bg: &BeliefGraph) -> CostTable {
    let n = bg.num_vertices();
    let mut costs = vec![f64::INFINITY; n];
    let mut queue = BinaryHeap::new();
    for (id, v) in bg.vertices().iter().enumerate() {
        if v.is_goal {
            costs[id] = 0.0;
            queue.push(Entry {
                cost: 0.0,
                vertex: id,
            });
        }
    }
    while let Some(Entry { cost, vertex }) = queue.pop() {
        if cost > costs[vertex] {
            continue;
        }
        for &(u, length) in bg.movement_neighbors(vertex) {
            let candidate = length + costs[vertex];
            if candidate < costs[u] {
                costs[u] = candidate;
                queue.push(Entry {
                    cost: candidate,
                    vertex: u,
                });
            }
        }
        for &u in bg.observation_parents(vertex) {
            let candidate = observation_cost(bg, &costs, u).unwrap_or(f64::INFINITY);
            if candidate < costs[u] {
                costs[u] = candidate;
                queue.push(Entry {
                    cost: candidate,
                    vertex: u,
                });
            }
        }
    }
    CostTable { costs }
}

//! Path trees: the contingency plan handed to the robot.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::belief::Belief;
use crate::error::{Error, Result};
use crate::geometry::RobotState;
use crate::planner::belief_graph::BeliefGraph;
use crate::planner::costs::{observation_cost, CostTable};

#[derive(Debug, Clone, PartialEq)]
pub struct TreeVertex {
    pub state: RobotState,
    pub is_goal: bool,
    pub belief: Belief,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub from: usize,
    pub to: usize,
    pub is_observation: bool,
}

/// Directed tree of motions (movement edges) and belief updates
/// (observation edges) rooted at the start state.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTree {
    vertices: Vec<TreeVertex>,
    edges: Vec<TreeEdge>,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    root: usize,
}

impl PathTree {
    pub fn with_root(root: TreeVertex) -> Self {
        Self {
            vertices: vec![root],
            edges: Vec::new(),
            children: vec![Vec::new()],
            parent: vec![None],
            root: 0,
        }
    }

    pub fn add_child(&mut self, parent: usize, vertex: TreeVertex, is_observation: bool) -> usize {
        let id = self.vertices.len();
        self.vertices.push(vertex);
        self.children.push(Vec::new());
        self.parent.push(Some(parent));
        self.children[parent].push(self.edges.len());
        self.edges.push(TreeEdge {
            from: parent,
            to: id,
            is_observation,
        });
        id
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> &TreeVertex {
        &self.vertices[id]
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Outgoing edges of `id`, in insertion order.
    pub fn out_edges(&self, id: usize) -> impl Iterator<Item = &TreeEdge> + '_ {
        self.children[id].iter().map(|&e| &self.edges[e])
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.children[id].is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_leaf(v)).collect()
    }

    /// Vertices with outgoing observation edges.
    pub fn observation_vertices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.out_edges(v).any(|e| e.is_observation))
            .collect()
    }

    /// Vertices reached by an observation edge.
    pub fn is_observation_target(&self, id: usize) -> bool {
        self.parent[id].is_some_and(|p| self.out_edges(p).any(|e| e.to == id && e.is_observation))
    }

    pub fn to_json(&self) -> PathTreeJson {
        PathTreeJson {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| TreeVertexJson {
                    id,
                    x: v.state.x,
                    y: v.state.y,
                    theta_deg: v.state.theta.to_degrees(),
                    is_goal: v.is_goal,
                    belief: v.belief.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| TreeEdgeJson {
                    from: e.from,
                    to: e.to,
                    is_observation: e.is_observation,
                })
                .collect(),
            root: self.root,
        }
    }

    /// Rebuilds a tree, checking ids, single parents, and acyclicity.
    pub fn from_json(json: &PathTreeJson) -> Result<Self> {
        let bad = |m: String| Err(Error::PathTree(m));
        let n = json.vertices.len();
        for (i, v) in json.vertices.iter().enumerate() {
            if v.id != i {
                return bad(format!("vertex at position {i} has id {}", v.id));
            }
        }
        if json.root >= n {
            return bad(format!("root {} out of range", json.root));
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        for (ei, e) in json.edges.iter().enumerate() {
            if e.from >= n || e.to >= n {
                return bad(format!("edge {ei} references a missing vertex"));
            }
            if e.to == json.root || parent[e.to].is_some() {
                return bad(format!("vertex {} has more than one parent", e.to));
            }
            parent[e.to] = Some(e.from);
            children[e.from].push(ei);
        }
        // every vertex must hang off the root
        let mut seen = HashSet::new();
        let mut stack = vec![json.root];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                return bad("cycle in path tree".into());
            }
            stack.extend(children[v].iter().map(|&e| json.edges[e].to));
        }
        if seen.len() != n {
            return bad("path tree is not connected to its root".into());
        }
        Ok(Self {
            vertices: json
                .vertices
                .iter()
                .map(|v| TreeVertex {
                    state: RobotState::new(v.x, v.y, v.theta_deg.to_radians()),
                    is_goal: v.is_goal,
                    belief: v.belief.clone(),
                })
                .collect(),
            edges: json
                .edges
                .iter()
                .map(|e| TreeEdge {
                    from: e.from,
                    to: e.to,
                    is_observation: e.is_observation,
                })
                .collect(),
            children,
            parent,
            root: json.root,
        })
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: PathTreeJson = serde_json::from_str(text)?;
        Self::from_json(&json)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeVertexJson {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub theta_deg: f64,
    pub is_goal: bool,
    pub belief: Belief,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeEdgeJson {
    pub from: usize,
    pub to: usize,
    pub is_observation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTreeJson {
    pub vertices: Vec<TreeVertexJson>,
    pub edges: Vec<TreeEdgeJson>,
    pub root: usize,
}

struct Extractor<'a> {
    bg: &'a BeliefGraph,
    costs: &'a [f64],
    tree: PathTree,
    visited: HashSet<usize>,
}

impl Extractor<'_> {
    fn tree_vertex(&self, bv: usize) -> TreeVertex {
        TreeVertex {
            state: *self.bg.state(bv),
            is_goal: self.bg.vertex(bv).is_goal,
            belief: self.bg.belief_of(bv).clone(),
        }
    }

    /// Best unvisited movement successor of `bv` and its total cost.
    fn best_move(&self, bv: usize) -> Option<(usize, f64)> {
        let own = self.costs[bv];
        let mut best: Option<(usize, f64)> = None;
        for &(u, length) in self.bg.movement_neighbors(bv) {
            if self.visited.contains(&u) {
                continue;
            }
            let total = self.costs[u] + length;
            match best {
                None => best = Some((u, total)),
                // a free move must not displace a successor that already
                // realises this vertex's cost
                Some((_, incumbent))
                    if total < incumbent && (length != 0.0 || incumbent != own) =>
                {
                    best = Some((u, total));
                }
                _ => {}
            }
        }
        best
    }

    fn grow(&mut self, mut tv: usize, mut bv: usize) -> Result<()> {
        while !self.bg.vertex(bv).is_goal {
            let movement = self.best_move(bv);
            let observation = observation_cost(self.bg, self.costs, bv).filter(|_| {
                self.bg
                    .vertex(bv)
                    .belief_children
                    .iter()
                    .all(|c| !self.visited.contains(c))
            });
            let observe = match (observation, movement) {
                (Some(o), Some((_, m))) => o.is_finite() && o <= m,
                (Some(o), None) => o.is_finite(),
                _ => false,
            };
            if observe {
                let children = self.bg.vertex(bv).belief_children.clone();
                for child in children {
                    let t = self.tree.add_child(tv, self.tree_vertex(child), true);
                    self.visited.insert(child);
                    if !self.bg.vertex(child).is_goal {
                        self.grow(t, child)?;
                    }
                }
                return Ok(());
            }
            match movement {
                Some((next, total)) if total.is_finite() => {
                    tv = self.tree.add_child(tv, self.tree_vertex(next), false);
                    self.visited.insert(next);
                    bv = next;
                }
                _ => return Err(Error::ExtractionStuck(bv)),
            }
        }
        Ok(())
    }
}

/// Extracts the optimal path tree from the start vertex.
///
/// Walks greedily down the cost-to-go: from each vertex either observe
/// (branching into every posterior) when the expected posterior cost is no
/// worse than the best move, or move to the unvisited neighbor minimising
/// `cost + distance`, ties to the lowest vertex id. Branches end at goal
/// vertices.
pub fn extract_path_tree(bg: &BeliefGraph, costs: &CostTable) -> Result<PathTree> {
    let start = bg.start();
    if !costs.get(start).is_finite() {
        return Err(Error::NoSolution);
    }
    let mut ex = Extractor {
        bg,
        costs: costs.as_slice(),
        tree: PathTree::with_root(TreeVertex {
            state: *bg.state(start),
            is_goal: bg.vertex(start).is_goal,
            belief: bg.belief_of(start).clone(),
        }),
        visited: HashSet::from([start]),
    };
    ex.grow(0, start)?;
    Ok(ex.tree)
}

//! SVG drawing of a scenario with a path tree on top.
//!
//! Edges shared by several leaves are black segments (class
//! `shared`); the part of the tree leading to a single leaf is one colored
//! polyline per leaf (class `branch`), colored by the world the leaf
//! resolves. Observation vertices are dots (class `observation`).

use std::fmt::Write;

use pto_core::{Environment, PathTree, Point, Shape};

const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#17becf", "#e377c2", "#8c564b",
];
const SCALE: f64 = 100.0;

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

struct Canvas<'a> {
    env: &'a Environment,
    out: String,
}

impl Canvas<'_> {
    fn map(&self, p: Point) -> (f64, f64) {
        let b = &self.env.bounds;
        ((p[0] - b.min[0]) * SCALE, (b.max[1] - p[1]) * SCALE)
    }

    fn points(&self, pts: impl IntoIterator<Item = Point>) -> String {
        pts.into_iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn circle(&mut self, c: Point, r: f64, attrs: &str) {
        let (x, y) = self.map(c);
        let _ = writeln!(
            self.out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" {attrs}/>"#,
            r * SCALE
        );
    }
}

/// Number of leaves below each vertex.
fn leaf_counts(tree: &PathTree) -> Vec<usize> {
    let mut order = vec![tree.root()];
    let mut i = 0;
    while i < order.len() {
        order.extend(tree.out_edges(order[i]).map(|e| e.to));
        i += 1;
    }
    let mut counts = vec![0; tree.len()];
    for &v in order.iter().rev() {
        if tree.is_leaf(v) {
            counts[v] = 1;
        }
        if let Some(p) = tree.parent(v) {
            counts[p] += counts[v];
        }
    }
    counts
}

pub fn render_svg(env: &Environment, tree: &PathTree) -> String {
    let b = env.bounds;
    let (w, h) = ((b.max[0] - b.min[0]) * SCALE, (b.max[1] - b.min[1]) * SCALE);
    let mut c = Canvas {
        env,
        out: String::new(),
    };
    let _ = writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(
        c.out,
        r##"<rect class="bounds" x="0" y="0" width="{w:.2}" height="{h:.2}" fill="white" stroke="#444"/>"##
    );
    for shape in &env.static_obstacles {
        match shape {
            Shape::Circle { center, radius } => {
                c.circle(*center, *radius, r##"class="obstacle" fill="#888""##)
            }
            Shape::Polygon { vertices } => {
                let pts = c.points(vertices.iter().copied());
                let _ = writeln!(
                    c.out,
                    r##"<polygon class="obstacle" points="{pts}" fill="#888"/>"##
                );
            }
        }
    }
    for o in &env.po_objects {
        let attrs = format!(
            r#"class="object" fill="{}" fill-opacity="0.35" stroke="{0}""#,
            color(o.index)
        );
        c.circle(o.center, o.radius, &attrs);
    }

    let counts = leaf_counts(tree);
    for e in tree
        .edges()
        .iter()
        .filter(|e| !e.is_observation && counts[e.to] > 1)
    {
        let pts = c.points([
            tree.vertex(e.from).state.position(),
            tree.vertex(e.to).state.position(),
        ]);
        let _ = writeln!(
            c.out,
            r#"<polyline class="shared" points="{pts}" fill="none" stroke="black" stroke-width="2"/>"#
        );
    }
    for leaf in tree.leaves() {
        // climb while the subtree still holds only this leaf
        let mut path = vec![leaf];
        let mut v = leaf;
        while let Some(p) = tree.parent(v) {
            path.push(p);
            if counts[p] > 1 {
                break;
            }
            v = p;
        }
        let world = tree
            .vertex(leaf)
            .belief
            .resolved_hypothesis()
            .unwrap_or(leaf);
        let pts = c.points(path.iter().rev().map(|&v| tree.vertex(v).state.position()));
        let _ = writeln!(
            c.out,
            r#"<polyline class="branch" points="{pts}" fill="none" stroke="{}" stroke-width="2"/>"#,
            color(world)
        );
    }
    for v in tree.observation_vertices() {
        c.circle(
            tree.vertex(v).state.position(),
            0.06,
            r#"class="observation" fill="gold" stroke="black""#,
        );
    }
    let start = env.start.position();
    c.circle(start, 0.05, r#"class="start" fill="black""#);
    for g in &env.goals {
        c.circle(
            g.position(),
            0.05,
            r#"class="goal" fill="none" stroke="black""#,
        );
    }
    c.out.push_str("</svg>\n");
    c.out
}

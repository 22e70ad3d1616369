//! Uniform-grid bucket index for fixed-radius neighbor queries in the plane.

use std::collections::HashMap;

use crate::geometry::Point;

#[derive(Debug, Clone)]
pub struct GridIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Point>,
}

impl GridIndex {
    /// `cell` should be about the query radius.
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0, "grid cell size must be positive");
        Self {
            cell,
            buckets: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        (
            (p[0] / self.cell).floor() as i64,
            (p[1] / self.cell).floor() as i64,
        )
    }

    /// Inserts `p` and returns its id (insertion order).
    pub fn insert(&mut self, p: Point) -> usize {
        let id = self.points.len();
        self.points.push(p);
        self.buckets.entry(self.key(p)).or_default().push(id);
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ids within Euclidean distance `radius` of `p`, ascending.
    pub fn within(&self, p: Point, radius: f64) -> Vec<usize> {
        let (cx, cy) = self.key(p);
        let reach = (radius / self.cell).ceil() as i64;
        let r2 = radius * radius;
        let mut out = Vec::new();
        for ix in cx - reach..=cx + reach {
            for iy in cy - reach..=cy + reach {
                if let Some(ids) = self.buckets.get(&(ix, iy)) {
                    out.extend(ids.iter().copied().filter(|&id| {
                        let q = self.points[id];
                        let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                        dx * dx + dy * dy <= r2
                    }));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

//! Planar world model: a disc robot in SE(2), static convex obstacles,
//! partially observable circular objects, and a cone-of-view sensor.
//!
//! The hypothesis index is always an explicit argument; there is no mutable
//! "current world".

use std::f64::consts::PI;

use crate::belief::{Belief, HypothesisSpace, Mode, WorldSet};
use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Wraps an angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut a = theta % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Signed shortest rotation taking `from` to `to`, in `(-π, π]`.
pub fn shortest_arc(from: f64, to: f64) -> f64 {
    normalize_angle(to - from)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl RobotState {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn position(&self) -> Point {
        [self.x, self.y]
    }

    pub fn planar_distance(&self, other: &RobotState) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Straight-line interpolation in the plane, shortest-arc in heading.
    pub fn interpolate(&self, other: &RobotState, t: f64) -> RobotState {
        RobotState::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
            self.theta + t * shortest_arc(self.theta, other.theta),
        )
    }

    fn lex_key(&self) -> (f64, f64, f64) {
        (self.x, self.y, self.theta)
    }
}

/// `sqrt(dx² + dy²) + angular_weight · |shortest_arc|`.
pub fn distance(a: &RobotState, b: &RobotState, angular_weight: f64) -> f64 {
    a.planar_distance(b) + angular_weight * shortest_arc(a.theta, b.theta).abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Point,
    pub max: Point,
}

impl Bounds {
    pub fn contains_disc(&self, c: Point, r: f64) -> bool {
        c[0] - r >= self.min[0]
            && c[0] + r <= self.max[0]
            && c[1] - r >= self.min[1]
            && c[1] + r <= self.max[1]
    }

    pub fn center(&self) -> Point {
        [
            0.5 * (self.min[0] + self.max[0]),
            0.5 * (self.min[1] + self.max[1]),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Circle {
        center: Point,
        radius: f64,
    },
    /// Convex polygon, vertices counter-clockwise.
    Polygon {
        vertices: Vec<Point>,
    },
}

impl Shape {
    /// Builds a convex polygon, reordering clockwise input.
    pub fn polygon(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidEnvironment(
                "polygon needs at least three vertices".into(),
            ));
        }
        let area2: f64 = (0..vertices.len())
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % vertices.len()];
                a[0] * b[1] - b[0] * a[1]
            })
            .sum();
        if area2.abs() <= f64::EPSILON {
            return Err(Error::InvalidEnvironment("polygon has zero area".into()));
        }
        if area2 < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            if cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) < -1e-12 {
                return Err(Error::InvalidEnvironment("polygon is not convex".into()));
            }
        }
        Ok(Shape::Polygon { vertices })
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidEnvironment(
                "circle radius must be positive".into(),
            ));
        }
        Ok(Shape::Circle { center, radius })
    }

    /// Whether a disc of radius `r` at `c` overlaps this shape. Touching is
    /// not overlap.
    pub fn intersects_disc(&self, c: Point, r: f64) -> bool {
        match self {
            Shape::Circle { center, radius } => dist(*center, c) < radius + r,
            Shape::Polygon { vertices } => {
                polygon_contains(vertices, c) || polygon_boundary_distance(vertices, c) < r
            }
        }
    }

    /// Whether the segment `p`–`q` passes through this shape.
    pub fn intersects_segment(&self, p: Point, q: Point) -> bool {
        match self {
            Shape::Circle { center, radius } => point_segment_distance(*center, p, q) < *radius,
            Shape::Polygon { vertices } => {
                if polygon_contains_strict(vertices, p) || polygon_contains_strict(vertices, q) {
                    return true;
                }
                let n = vertices.len();
                (0..n).any(|i| segments_intersect(p, q, vertices[i], vertices[(i + 1) % n]))
            }
        }
    }
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

fn polygon_contains(vertices: &[Point], p: Point) -> bool {
    let n = vertices.len();
    (0..n).all(|i| cross(vertices[i], vertices[(i + 1) % n], p) >= 0.0)
}

fn polygon_contains_strict(vertices: &[Point], p: Point) -> bool {
    let n = vertices.len();
    (0..n).all(|i| cross(vertices[i], vertices[(i + 1) % n], p) > 0.0)
}

fn polygon_boundary_distance(vertices: &[Point], p: Point) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| point_segment_distance(p, vertices[i], vertices[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

/// Closed segment intersection, collinear overlaps included.
fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartiallyObservableObject {
    pub index: usize,
    pub center: Point,
    pub radius: f64,
    pub blocks_when_present: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorParams {
    /// Half opening angle of the view cone, radians in `(0, π]`.
    pub fov_half_angle: f64,
    pub range: f64,
}

/// Immutable planning world.
#[derive(Debug, Clone)]
pub struct Environment {
    pub bounds: Bounds,
    pub static_obstacles: Vec<Shape>,
    pub po_objects: Vec<PartiallyObservableObject>,
    pub start: RobotState,
    /// Obstacles mode: one shared goal. Goals mode: one goal per location.
    pub goals: Vec<RobotState>,
    pub robot_radius: f64,
    pub sensor: SensorParams,
    pub initial_belief: Belief,
    pub angular_weight: f64,
    hypotheses: HypothesisSpace,
}

/// Everything needed to build an [`Environment`].
#[derive(Debug, Clone)]
pub struct EnvironmentSpec {
    pub bounds: Bounds,
    pub static_obstacles: Vec<Shape>,
    /// Circle centers and radii; indices follow list order.
    pub po_objects: Vec<(Point, f64)>,
    pub mode: Mode,
    pub start: RobotState,
    pub goals: Vec<RobotState>,
    pub robot_radius: f64,
    pub sensor: SensorParams,
    /// Uniform when `None`.
    pub initial_belief: Option<Belief>,
    pub angular_weight: f64,
}

impl Environment {
    pub fn new(spec: EnvironmentSpec) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidEnvironment(m));
        let EnvironmentSpec {
            bounds,
            static_obstacles,
            po_objects,
            mode,
            start,
            goals,
            robot_radius,
            sensor,
            initial_belief,
            angular_weight,
        } = spec;
        if !(bounds.min[0] <= bounds.max[0] && bounds.min[1] <= bounds.max[1]) {
            return bad("bounds min exceeds max".into());
        }
        if !(robot_radius >= 0.0) {
            return bad("robot radius must be non-negative".into());
        }
        if !(sensor.fov_half_angle > 0.0 && sensor.fov_half_angle <= PI) {
            return bad("sensor half angle must lie in (0, 180] degrees".into());
        }
        if !(sensor.range > 0.0) {
            return bad("sensor range must be positive".into());
        }
        if !(angular_weight >= 0.0) {
            return bad("angular weight must be non-negative".into());
        }
        let hypotheses = HypothesisSpace::enumerate(mode, po_objects.len())?;
        match mode {
            Mode::Obstacles if goals.len() != 1 => {
                return bad(format!(
                    "obstacles mode needs exactly one goal, got {}",
                    goals.len()
                ))
            }
            Mode::Goals if goals.len() != po_objects.len() => {
                return bad(format!(
                    "goals mode needs one goal per location: {} goals for {} locations",
                    goals.len(),
                    po_objects.len()
                ))
            }
            _ => {}
        }
        let initial_belief = initial_belief.unwrap_or_else(|| hypotheses.uniform_belief());
        if initial_belief.len() != hypotheses.len() {
            return bad(format!(
                "initial belief has {} entries, expected {}",
                initial_belief.len(),
                hypotheses.len()
            ));
        }
        let po_objects = po_objects
            .into_iter()
            .enumerate()
            .map(|(index, (center, radius))| {
                if !(radius > 0.0) {
                    return Err(Error::InvalidEnvironment(format!(
                        "object {index} radius must be positive"
                    )));
                }
                Ok(PartiallyObservableObject {
                    index,
                    center,
                    radius,
                    blocks_when_present: mode == Mode::Obstacles,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let env = Self {
            bounds,
            static_obstacles,
            po_objects,
            start,
            goals,
            robot_radius,
            sensor,
            initial_belief,
            angular_weight,
            hypotheses,
        };
        for h in 0..env.hypotheses.len() {
            if !env.is_valid(&env.start, h) {
                return Err(Error::InvalidStart(h));
            }
        }
        Ok(env)
    }

    pub fn hypotheses(&self) -> &HypothesisSpace {
        &self.hypotheses
    }

    pub fn mode(&self) -> Mode {
        self.hypotheses.mode()
    }

    pub fn num_objects(&self) -> usize {
        self.po_objects.len()
    }

    pub fn num_hypotheses(&self) -> usize {
        self.hypotheses.len()
    }

    /// Default motion-check spacing: half the robot radius.
    pub fn default_resolution(&self) -> f64 {
        if self.robot_radius > 0.0 {
            self.robot_radius / 2.0
        } else {
            0.01
        }
    }

    /// Positional tolerance for goal membership.
    pub fn goal_tolerance(&self) -> f64 {
        self.robot_radius / 10.0
    }

    pub fn distance(&self, a: &RobotState, b: &RobotState) -> f64 {
        distance(a, b, self.angular_weight)
    }

    fn blocks(&self, object: &PartiallyObservableObject, hypothesis: usize) -> bool {
        object.blocks_when_present && self.hypotheses.is_present(hypothesis, object.index)
    }

    /// Collision test of the robot disc in world `hypothesis`.
    pub fn is_valid(&self, s: &RobotState, hypothesis: usize) -> bool {
        let c = s.position();
        let r = self.robot_radius;
        self.bounds.contains_disc(c, r)
            && !self
                .static_obstacles
                .iter()
                .any(|o| o.intersects_disc(c, r))
            && !self
                .po_objects
                .iter()
                .any(|o| self.blocks(o, hypothesis) && dist(o.center, c) < o.radius + r)
    }

    /// Checks every interpolated state at planar spacing at most
    /// `resolution`, endpoints included. Symmetric in `a` and `b`.
    pub fn is_motion_valid(
        &self,
        a: &RobotState,
        b: &RobotState,
        hypothesis: usize,
        resolution: f64,
    ) -> bool {
        let (a, b) = if a.lex_key() <= b.lex_key() {
            (a, b)
        } else {
            (b, a)
        };
        let len = a.planar_distance(b);
        let steps = ((len / resolution).ceil() as usize).max(1);
        // endpoints first: most rejections happen there
        if !self.is_valid(a, hypothesis) || !self.is_valid(b, hypothesis) {
            return false;
        }
        (1..steps).all(|i| self.is_valid(&a.interpolate(b, i as f64 / steps as f64), hypothesis))
    }

    /// Every hypothesis in which the motion `a`–`b` is valid.
    ///
    /// Samples the same states as [`Self::is_motion_valid`], checks the
    /// hypothesis-independent geometry once, and records which blocking
    /// objects the swept disc touches.
    pub fn motion_valid_worlds(&self, a: &RobotState, b: &RobotState, resolution: f64) -> WorldSet {
        let (a, b) = if a.lex_key() <= b.lex_key() {
            (a, b)
        } else {
            (b, a)
        };
        let len = a.planar_distance(b);
        let steps = ((len / resolution).ceil() as usize).max(1);
        let r = self.robot_radius;
        let mut touched = vec![false; self.po_objects.len()];
        for i in 0..=steps {
            let s = if i == 0 {
                *a
            } else if i == steps {
                *b
            } else {
                a.interpolate(b, i as f64 / steps as f64)
            };
            let c = s.position();
            if !self.bounds.contains_disc(c, r)
                || self
                    .static_obstacles
                    .iter()
                    .any(|o| o.intersects_disc(c, r))
            {
                return WorldSet::default();
            }
            for (t, o) in touched.iter_mut().zip(&self.po_objects) {
                if o.blocks_when_present && !*t && dist(o.center, c) < o.radius + r {
                    *t = true;
                }
            }
        }
        self.hypotheses
            .hypotheses()
            .iter()
            .filter(|h| !touched.iter().enumerate().any(|(o, &t)| t && h.presence[o]))
            .map(|h| h.index)
            .collect()
    }

    /// Objects whose location the sensor can inspect from `s` in world
    /// `hypothesis`: within range, inside the view cone, and not occluded
    /// by static obstacles or other present objects.
    pub fn targets_found(&self, s: &RobotState, hypothesis: usize) -> Vec<usize> {
        let eye = s.position();
        self.po_objects
            .iter()
            .filter(|o| {
                let d = dist(eye, o.center);
                if d > self.sensor.range {
                    return false;
                }
                if d > 0.0 {
                    let bearing = (o.center[1] - eye[1]).atan2(o.center[0] - eye[0]);
                    if shortest_arc(s.theta, bearing).abs() > self.sensor.fov_half_angle {
                        return false;
                    }
                }
                !self.line_of_sight_blocked(eye, o.index, hypothesis)
            })
            .map(|o| o.index)
            .collect()
    }

    fn line_of_sight_blocked(&self, eye: Point, target: usize, hypothesis: usize) -> bool {
        let center = self.po_objects[target].center;
        self.static_obstacles
            .iter()
            .any(|o| o.intersects_segment(eye, center))
            || self.po_objects.iter().any(|o| {
                o.index != target
                    && self.hypotheses.is_present(hypothesis, o.index)
                    && point_segment_distance(o.center, eye, center) < o.radius
            })
    }

    /// The goal state a hypothesis has to reach.
    pub fn goal_for(&self, hypothesis: usize) -> &RobotState {
        match self.mode() {
            Mode::Obstacles => &self.goals[0],
            Mode::Goals => &self.goals[hypothesis],
        }
    }

    /// Goal condition: at the shared goal (obstacles), or at the goal of
    /// location `i` while certain that the object is at `i` (goals).
    pub fn is_goal(&self, s: &RobotState, belief: &Belief) -> bool {
        let tol = self.goal_tolerance();
        match self.mode() {
            Mode::Obstacles => s.planar_distance(&self.goals[0]) <= tol,
            Mode::Goals => belief
                .resolved_hypothesis()
                .is_some_and(|h| s.planar_distance(&self.goals[h]) <= tol),
        }
    }

    /// Positional goal test for a single known world.
    pub fn is_goal_in(&self, s: &RobotState, hypothesis: usize) -> bool {
        s.planar_distance(self.goal_for(hypothesis)) <= self.goal_tolerance()
    }
}

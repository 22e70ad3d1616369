//! Scenario files: the JSON description of an [`Environment`].
//!
//! Angles are stored in degrees, beliefs as `"p/q"` strings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::belief::{Belief, Mode};
use crate::error::{Error, Result};
use crate::geometry::{
    Bounds, Environment, EnvironmentSpec, Point, RobotState, SensorParams, Shape,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub bounds: BoundsJson,
    pub robot_radius: f64,
    pub sensor: SensorJson,
    #[serde(default)]
    pub static_obstacles: Vec<ObstacleJson>,
    #[serde(default)]
    pub po_objects: Vec<CircleJson>,
    pub mode: Mode,
    pub start: StateJson,
    pub goals: Vec<StateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_belief: Option<Belief>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub angular_weight: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsJson {
    pub min: Point,
    pub max: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SensorJson {
    pub fov_half_angle_deg: f64,
    pub range: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleJson {
    pub center: Point,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ObstacleJson {
    Polygon(Vec<Point>),
    Circle(CircleJson),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StateJson {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta_deg: f64,
}

impl From<StateJson> for RobotState {
    fn from(s: StateJson) -> Self {
        RobotState::new(s.x, s.y, s.theta_deg.to_radians())
    }
}

impl From<&RobotState> for StateJson {
    fn from(s: &RobotState) -> Self {
        StateJson {
            x: s.x,
            y: s.y,
            theta_deg: s.theta.to_degrees(),
        }
    }
}

fn semantic(path: &str, err: Error) -> Error {
    Error::Scenario {
        path: path.to_string(),
        message: err.to_string(),
    }
}

impl Scenario {
    /// Parses JSON, reporting the path of the first offending field.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Scenario {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_environment(&self) -> Result<Environment> {
        let static_obstacles = self
            .static_obstacles
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let path = format!("staticObstacles[{i}]");
                match o {
                    ObstacleJson::Polygon(v) => Shape::polygon(v.clone()),
                    ObstacleJson::Circle(c) => Shape::circle(c.center, c.radius),
                }
                .map_err(|e| semantic(&path, e))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = EnvironmentSpec {
            bounds: Bounds {
                min: self.bounds.min,
                max: self.bounds.max,
            },
            static_obstacles,
            po_objects: self
                .po_objects
                .iter()
                .map(|c| (c.center, c.radius))
                .collect(),
            mode: self.mode,
            start: self.start.into(),
            goals: self.goals.iter().map(|&g| g.into()).collect(),
            robot_radius: self.robot_radius,
            sensor: SensorParams {
                fov_half_angle: self.sensor.fov_half_angle_deg.to_radians(),
                range: self.sensor.range,
            },
            initial_belief: self.initial_belief.clone(),
            angular_weight: self.angular_weight,
        };
        Environment::new(spec).map_err(|e| {
            let path = match &e {
                Error::InvalidStart(_) => "start",
                Error::TooManyObjects(_) | Error::NoGoalLocations => "poObjects",
                Error::InvalidEnvironment(m) if m.contains("goal") => "goals",
                Error::InvalidEnvironment(m) if m.contains("initial belief") => "initialBelief",
                Error::InvalidEnvironment(m) if m.contains("sensor") => "sensor",
                Error::InvalidEnvironment(m) if m.contains("object") => "poObjects",
                _ => ".",
            };
            semantic(path, e)
        })
    }
}

/// Loads and validates a scenario file in one step.
pub fn load_environment(path: impl AsRef<Path>) -> Result<Environment> {
    Scenario::load(path)?.to_environment()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOOR: &str = r#"{
        "bounds": {"min": [0, 0], "max": [4, 4]},
        "robotRadius": 0.1,
        "sensor": {"fovHalfAngleDeg": 45, "range": 3},
        "staticObstacles": [
            {"polygon": [[1.9, 0], [2.1, 0], [2.1, 1.6], [1.9, 1.6]]},
            {"circle": {"center": [3, 3.5], "radius": 0.2}}
        ],
        "poObjects": [{"center": [2, 2], "radius": 0.4}],
        "mode": "obstacles",
        "start": {"x": 0.5, "y": 2, "thetaDeg": 90},
        "goals": [{"x": 3.5, "y": 2}],
        "initialBelief": ["1/4", "3/4"]
    }"#;

    #[test]
    fn parses_and_converts_units() {
        let env = Scenario::from_json_str(DOOR)
            .unwrap()
            .to_environment()
            .unwrap();
        assert!((env.start.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((env.sensor.fov_half_angle - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert_eq!(env.static_obstacles.len(), 2);
        assert_eq!(env.num_hypotheses(), 2);
        assert_eq!(env.initial_belief.to_f64(), vec![0.25, 0.75]);
    }

    #[test]
    fn reports_json_path_of_type_errors() {
        let bad = DOOR.replace(r#""radius": 0.4"#, r#""radius": "big""#);
        match Scenario::from_json_str(&bad) {
            Err(Error::Scenario { path, .. }) => assert_eq!(path, "poObjects[0].radius"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_path_of_semantic_errors() {
        let bad = DOOR.replace("[2.1, 1.6], [1.9, 1.6]", "[1.9, 1.6], [2.1, 1.6]");
        match Scenario::from_json_str(&bad).unwrap().to_environment() {
            Err(Error::Scenario { path, .. }) => assert_eq!(path, "staticObstacles[0]"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = DOOR.replace(r#""x": 0.5, "y": 2"#, r#""x": 2.0, "y": 2"#);
        match Scenario::from_json_str(&bad).unwrap().to_environment() {
            Err(Error::Scenario { path, .. }) => assert_eq!(path, "start"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = DOOR.replace(r#"["1/4", "3/4"]"#, r#"["1/4", "1/4"]"#);
        match Scenario::from_json_str(&bad) {
            Err(Error::Scenario { path, .. }) => assert_eq!(path, "initialBelief"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trips() {
        let s = Scenario::from_json_str(DOOR).unwrap();
        let back = Scenario::from_json_str(&s.to_json_string().unwrap()).unwrap();
        assert_eq!(back, s);
    }
}

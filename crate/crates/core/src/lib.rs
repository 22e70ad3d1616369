//! Contingency path-tree planning for a disc robot in 2D worlds with
//! partially observable obstacles or goals.
//!
//! ```no_run
//! use pto_core::{plan, load_environment, PlannerConfig};
//!
//! let env = load_environment("scenarios/toy.json").unwrap();
//! let report = plan(&env, &PlannerConfig::default()).unwrap();
//! println!("expected cost {}", report.start_cost);
//! ```

// `!(x > 0.0)` is used on purpose: it rejects NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod belief;
pub mod error;
pub mod geometry;
pub mod planner;
pub mod sampler;
pub mod scenario;
pub mod spatial;

pub use belief::{
    branching_probability, compatible_beliefs, Belief, HypothesisSpace, Mode, ObservationOutcome,
    WorldHypothesis, WorldSet, MAX_OBJECTS,
};
pub use error::{Error, Result};
pub use geometry::{
    distance, normalize_angle, Bounds, Environment, EnvironmentSpec, PartiallyObservableObject,
    Point, RobotState, SensorParams, Shape,
};
pub use planner::{
    evaluate_path_tree_cost, plan, validate_path_tree, GraphCounts, PathTree, PhaseTimes,
    PlanReport, PlannerConfig, ValidationReport,
};
pub use sampler::{compute_camera_frame, Sampler, SamplerConfig, SamplerKind};
pub use scenario::{load_environment, Scenario};

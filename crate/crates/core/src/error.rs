use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("goals mode needs at least one goal location")]
    NoGoalLocations,
    #[error("{0} partially observable objects is more than the supported maximum of {max}", max = crate::belief::MAX_OBJECTS)]
    TooManyObjects(usize),
    #[error("object index {index} out of range for {count} objects")]
    InvalidObject { index: usize, count: usize },
    #[error("hypothesis index {index} out of range for {count} hypotheses")]
    InvalidHypothesis { index: usize, count: usize },
    #[error("invalid belief: {0}")]
    InvalidBelief(String),
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),
    #[error("no partially observable object present in hypothesis {0}")]
    NoPresentObject(usize),
    #[error("camera pose sampling exhausted {0} attempts")]
    SamplingExhausted(usize),
    #[error("camera direction is parallel to the world z axis")]
    SingularCameraFrame,
    #[error("start state is invalid in hypothesis {0}")]
    InvalidStart(usize),
    #[error("start vertex is not reachable in the initial belief")]
    StartUnreachable,
    #[error("start vertex has infinite expected cost; no complete path tree exists")]
    NoSolution,
    #[error("path tree extraction stuck at belief vertex {0}")]
    ExtractionStuck(usize),
    #[error("malformed scenario at `{path}`: {message}")]
    Scenario { path: String, message: String },
    #[error("malformed path tree: {0}")]
    PathTree(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

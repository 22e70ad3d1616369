//! State samplers for random-graph construction.
//!
//! Besides uniform and goal-biased draws, the camera-based sampler places the
//! robot at a random valid position and turns it to face a partially
//! observable object that exists in the sampled world.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Environment, RobotState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Uniform,
    #[serde(alias = "camera")]
    CameraBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    pub goal_bias: f64,
    /// Probability that a non-goal draw is camera-aimed (camera sampler only).
    pub camera_fraction: f64,
    pub seed: u64,
    /// Position retries for one camera-aimed draw.
    pub max_camera_attempts: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            kind: SamplerKind::Uniform,
            goal_bias: 0.2,
            camera_fraction: 0.5,
            seed: 0,
            max_camera_attempts: 100,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("goal bias", self.goal_bias),
            ("camera fraction", self.camera_fraction),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidEnvironment(format!(
                    "{name} {p} is not a probability"
                )));
            }
        }
        Ok(())
    }
}

/// Where a drawn state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    Goal,
    Uniform,
    Camera { object: usize },
}

/// Seeded sampler; one instance per planning run.
#[derive(Debug, Clone)]
pub struct Sampler {
    config: SamplerConfig,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
        })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform hypothesis index in `0..count`.
    pub fn sample_hypothesis(&mut self, count: usize) -> usize {
        self.rng.gen_range(0..count)
    }

    fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        if hi > lo {
            self.rng.gen_range(lo..hi)
        } else {
            lo
        }
    }

    /// Heading uniform in `(-π, π]`.
    fn uniform_heading(&mut self) -> f64 {
        PI - 2.0 * PI * self.rng.gen::<f64>()
    }

    pub fn sample_uniform(&mut self, env: &Environment) -> RobotState {
        let x = self.uniform_in(env.bounds.min[0], env.bounds.max[0]);
        let y = self.uniform_in(env.bounds.min[1], env.bounds.max[1]);
        let theta = self.uniform_heading();
        RobotState::new(x, y, theta)
    }

    /// Valid pose in world `hypothesis` facing a random present object.
    pub fn sample_camera_pose(
        &mut self,
        env: &Environment,
        hypothesis: usize,
    ) -> Result<(usize, RobotState)> {
        let present: Vec<usize> = env
            .hypotheses()
            .get(hypothesis)?
            .present_objects()
            .collect();
        if present.is_empty() {
            return Err(Error::NoPresentObject(hypothesis));
        }
        let object = present[self.rng.gen_range(0..present.len())];
        let target = env.po_objects[object].center;
        for _ in 0..self.config.max_camera_attempts {
            let x = self.uniform_in(env.bounds.min[0], env.bounds.max[0]);
            let y = self.uniform_in(env.bounds.min[1], env.bounds.max[1]);
            let state = RobotState::new(x, y, (target[1] - y).atan2(target[0] - x));
            if env.is_valid(&state, hypothesis) {
                return Ok((object, state));
            }
        }
        Err(Error::SamplingExhausted(self.config.max_camera_attempts))
    }

    /// One random-graph draw for world `hypothesis`: the goal with
    /// probability `goal_bias`, otherwise a camera-aimed pose with
    /// probability `camera_fraction` (camera sampler only), otherwise a
    /// uniform state. A failed camera draw falls back to uniform.
    pub fn draw(&mut self, env: &Environment, hypothesis: usize) -> (SampleSource, RobotState) {
        if self.rng.gen::<f64>() < self.config.goal_bias {
            return (SampleSource::Goal, *env.goal_for(hypothesis));
        }
        if self.config.kind == SamplerKind::CameraBased
            && self.rng.gen::<f64>() < self.config.camera_fraction
        {
            if let Ok((object, state)) = self.sample_camera_pose(env, hypothesis) {
                return (SampleSource::Camera { object }, state);
            }
        }
        (SampleSource::Uniform, self.sample_uniform(env))
    }
}

pub type Vec3 = [f64; 3];

/// Rotation matrix stored by rows; column `j` is the frame's `j`-th axis.
pub type Matrix3 = [[f64; 3]; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: Vec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Camera orientation looking from `camera` at `target` with a level x axis.
///
/// `z` is the unit viewing direction, `x = normalize(e_z × z)` and
/// `y = z × x`. The result is a proper rotation with columns `[x, y, z]`.
pub fn compute_camera_frame(camera: Vec3, target: Vec3) -> Result<Matrix3> {
    let d = sub(target, camera);
    let len = norm(d);
    if len == 0.0 {
        return Err(Error::SingularCameraFrame);
    }
    let z = scale(d, 1.0 / len);
    let x = cross3([0.0, 0.0, 1.0], z);
    let x_len = norm(x);
    if x_len < 1e-12 {
        return Err(Error::SingularCameraFrame);
    }
    let x = scale(x, 1.0 / x_len);
    let y = cross3(z, x);
    let y = scale(y, 1.0 / norm(y));
    Ok([[x[0], y[0], z[0]], [x[1], y[1], z[1]], [x[2], y[2], z[2]]])
}

/// Planar heading that points the robot from `(x, y)` at `target`.
pub fn heading_towards(x: f64, y: f64, target: [f64; 2]) -> f64 {
    (target[1] - y).atan2(target[0] - x)
}

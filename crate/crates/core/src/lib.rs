//! Decentralized multi-agent Q-learning on grid mazes.
//!
//! Agents never communicate or observe each other. Each learns its own
//! Q-table and keeps per-goal statistics: a goal value (running average of
//! the minimum steps to a goal, credited only when the agent reached that goal
//! first) and the mean external reward earned there. The agent targets the goal
//! with the largest value, and an internal reward replaces the external one so
//! that the targeted goal dominates every other goal it knows about. Goals
//! where the mean reward stays below a threshold stop accruing value, which
//! steers agents away from goals other agents reach first.
//!
//! Also included: the Profit-Sharing and plain Q-learning baselines, exact
//! oracles (BFS, brute-force goal assignment, value iteration), and a seeded
//! experiment harness.

pub mod drl;
pub mod episode;
pub mod error;
pub mod experiment;
pub mod learner;
pub mod maze;
pub mod mdp;
pub mod oracle;
pub mod plain;
pub mod ps;
pub mod render;
pub mod suite;

pub use error::{Error, Result};
pub use maze::{Action, Cell, GeneratorSpec, GoalId, Maze};

/// Published defaults of the learning setup.
pub mod defaults {
    pub const ALPHA: f64 = 0.1;
    pub const GAMMA: f64 = 0.9;
    pub const EXTERNAL_REWARD: f64 = 10.0;
    pub const DELTA: f64 = 10.0;
    pub const THRESHOLD: f64 = 5.0;
    pub const MAX_STEP: u32 = 100;
    pub const INITIAL_Q: f64 = 0.0;
    pub const SEEDS: u64 = 10;
    /// Not published; chosen here.
    pub const EPSILON: f64 = 0.1;
    /// Not published; chosen here.
    pub const GOAL_RANDOM_PROB: f64 = 0.1;
}

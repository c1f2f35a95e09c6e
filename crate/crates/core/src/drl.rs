//! Goal-directed learners: DRL and its PMRL configuration.
//!
//! Each agent keeps, per goal, the fewest steps it has ever needed to reach
//! it, a goal value (`bid`) averaging those step counts over the iterations in
//! which the goal was selected, and the external reward earned there. After
//! every episode the agent targets the goal with the largest value. Arriving
//! first at the targeted goal pays an internal reward large enough that the
//! target outranks every other goal the agent has reached before:
//!
//! ```text
//! ir(g) = max_{g' != g, t[g'] recorded} r * gamma^(t[g'] - t[g]) + delta
//! ```
//!
//! A goal value is credited (`bid <- ((n-1) bid + t[g]) / n`) only when the
//! agent reached the selected goal first in the episode; otherwise it averages
//! in a zero. DRL additionally requires the mean external reward earned at the
//! goal to exceed a threshold, so goals another agent usually claims first
//! lose their value and the agent moves on to one it can claim.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::defaults;
use crate::episode::{agent_rng, run_episode, Agent, EpisodeRecord, GoalSnapshot, Observation};
use crate::error::ConfigError;
use crate::learner::{q_update, select_action, LearningParams, QTable};
use crate::maze::{Action, Cell, GoalId, Maze};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Drl,
    Pmrl,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionParams {
    pub delta: f64,
    pub threshold: f64,
    pub goal_random_prob: f64,
    pub mode: Mode,
}

impl Default for DirectionParams {
    fn default() -> Self {
        DirectionParams {
            delta: defaults::DELTA,
            threshold: defaults::THRESHOLD,
            goal_random_prob: defaults::GOAL_RANDOM_PROB,
            mode: Mode::Drl,
        }
    }
}

impl DirectionParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(ConfigError::Param { name: "delta", msg: format!("{} is not positive", self.delta) });
        }
        if !self.threshold.is_finite() {
            return Err(ConfigError::Param { name: "threshold", msg: "must be finite".into() });
        }
        if !(0.0..=1.0).contains(&self.goal_random_prob) {
            return Err(ConfigError::Param {
                name: "goal_random_prob",
                msg: format!("{} is not in [0, 1]", self.goal_random_prob),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GoalStatsError {
    #[error("minimum steps to {0} are not recorded")]
    UnrecordedSteps(GoalId),
}

/// Bookkeeping for one goal.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GoalRecord {
    pub bid: f64,
    /// Fewest steps ever observed to reach the goal.
    pub min_steps: Option<u32>,
    /// Number of goal-value updates.
    pub bid_updates: u64,
    /// Sum of external rewards received on arrival.
    pub reward_sum: f64,
    /// Number of arrivals.
    pub reward_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoalStats {
    goals: Vec<GoalRecord>,
}

impl GoalStats {
    pub fn new(n_goals: usize) -> Self {
        assert!(n_goals > 0, "at least one goal");
        GoalStats { goals: vec![GoalRecord::default(); n_goals] }
    }

    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }

    pub fn get(&self, g: GoalId) -> &GoalRecord {
        &self.goals[g.0]
    }

    pub fn get_mut(&mut self, g: GoalId) -> &mut GoalRecord {
        &mut self.goals[g.0]
    }

    pub fn bids(&self) -> Vec<f64> {
        self.goals.iter().map(|r| r.bid).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GoalId, &GoalRecord)> {
        self.goals.iter().enumerate().map(|(g, r)| (GoalId(g), r))
    }

    /// Lowers the recorded minimum step count if `steps` improves on it.
    pub fn record_steps(&mut self, g: GoalId, steps: u32) {
        let t = &mut self.goals[g.0].min_steps;
        if t.is_none_or(|t| steps < t) {
            *t = Some(steps);
        }
    }

    pub fn record_reward(&mut self, g: GoalId, reward: f64) {
        let rec = &mut self.goals[g.0];
        rec.reward_sum += reward;
        rec.reward_count += 1;
    }
}

/// Internal reward for reaching `g`; zero unless the arrival was first.
pub fn internal_reward(
    stats: &GoalStats,
    g: GoalId,
    was_first: bool,
    r: f64,
    gamma: f64,
    delta: f64,
) -> Result<f64, GoalStatsError> {
    if !was_first {
        return Ok(0.0);
    }
    let t_g = stats.get(g).min_steps.ok_or(GoalStatsError::UnrecordedSteps(g))?;
    let best = stats
        .iter()
        .filter(|&(other, _)| other != g)
        .filter_map(|(_, rec)| rec.min_steps)
        .map(|t_o| r * gamma.powi(t_o as i32 - t_g as i32))
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    Ok(best.unwrap_or(r) + delta)
}

/// Goal-value update for `g`. The update count of `g` must already include
/// this update.
pub fn update_goal_value(stats: &mut GoalStats, g: GoalId, condition_met: bool) {
    let rec = stats.get_mut(g);
    let n = rec.bid_updates;
    assert!(n > 0, "goal-value update count must be incremented before updating");
    let target =
        if condition_met { rec.min_steps.expect("credited goal must have recorded steps") as f64 } else { 0.0 };
    rec.bid = (rec.bid * (n - 1) as f64 + target) / n as f64;
}

/// Mean external reward at `g` strictly above `threshold`; false before any
/// arrival.
pub fn drl_condition(stats: &GoalStats, g: GoalId, threshold: f64) -> bool {
    let rec = stats.get(g);
    rec.reward_count > 0 && rec.reward_sum / rec.reward_count as f64 > threshold
}

/// Goal with the largest value (ties uniform), or a uniformly random goal
/// with probability `goal_random_prob`.
pub fn select_goal<R: Rng + ?Sized>(stats: &GoalStats, goal_random_prob: f64, rng: &mut R) -> GoalId {
    let m = stats.len();
    if goal_random_prob > 0.0 && rng.gen_bool(goal_random_prob) {
        return GoalId(rng.gen_range(0..m));
    }
    let best = stats.goals.iter().map(|r| r.bid).fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..m).filter(|&g| stats.goals[g].bid == best).collect();
    GoalId(if ties.len() == 1 { ties[0] } else { ties[rng.gen_range(0..ties.len())] })
}

/// Outcome of the end-of-episode goal-value step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidUpdate {
    pub goal: GoalId,
    pub condition_met: bool,
}

/// One goal-directed learner. Holds only its own table, statistics and
/// random stream.
#[derive(Debug, Clone)]
pub struct AgentBrain {
    pub qtable: QTable,
    pub stats: GoalStats,
    pub g_sel: GoalId,
    pub received_reward_this_episode: f64,
    learning: LearningParams,
    direction: DirectionParams,
    rng: ChaCha8Rng,
    arrival: Option<GoalId>,
    internal_this_episode: f64,
}

impl AgentBrain {
    /// Fresh brain with a uniformly random initial target goal.
    pub fn new(maze: &Maze, learning: LearningParams, direction: DirectionParams, mut rng: ChaCha8Rng) -> Self {
        let g_sel = GoalId(rng.gen_range(0..maze.n_goals()));
        AgentBrain {
            qtable: QTable::new(maze, defaults::INITIAL_Q),
            stats: GoalStats::new(maze.n_goals()),
            g_sel,
            received_reward_this_episode: 0.0,
            learning,
            direction,
            rng,
            arrival: None,
            internal_this_episode: 0.0,
        }
    }

    pub fn learning(&self) -> &LearningParams {
        &self.learning
    }

    pub fn direction(&self) -> &DirectionParams {
        &self.direction
    }

    /// Goal reached in the current episode, if any.
    pub fn arrival(&self) -> Option<GoalId> {
        self.arrival
    }

    pub fn internal_reward_this_episode(&self) -> f64 {
        self.internal_this_episode
    }

    /// End-of-episode step: reselect the target goal, count the update and
    /// credit or decay its value.
    pub fn finish_episode(&mut self) -> BidUpdate {
        let g_sel = select_goal(&self.stats, self.direction.goal_random_prob, &mut self.rng);
        self.g_sel = g_sel;
        self.stats.get_mut(g_sel).bid_updates += 1;
        let first_reach = self.arrival == Some(g_sel) && self.received_reward_this_episode > 0.0;
        let condition_met = match self.direction.mode {
            Mode::Drl => first_reach && drl_condition(&self.stats, g_sel, self.direction.threshold),
            Mode::Pmrl => first_reach,
        };
        update_goal_value(&mut self.stats, g_sel, condition_met);
        BidUpdate { goal: g_sel, condition_met }
    }
}

impl Agent for AgentBrain {
    fn begin_episode(&mut self) {
        self.arrival = None;
        self.received_reward_this_episode = 0.0;
        self.internal_this_episode = 0.0;
    }

    fn act(&mut self, state: Cell) -> Action {
        select_action(&self.qtable, state, self.learning.epsilon, &mut self.rng)
    }

    fn observe(&mut self, obs: &Observation) {
        let mut ir = 0.0;
        if let Some(g) = obs.arrived {
            self.arrival = Some(g);
            self.received_reward_this_episode += obs.reward;
            self.stats.record_steps(g, obs.step);
            self.stats.record_reward(g, obs.reward);
            if g == self.g_sel {
                let p = &self.learning;
                ir =
                    internal_reward(&self.stats, g, obs.reward > 0.0, p.external_reward, p.gamma, self.direction.delta)
                        .expect("steps to an arrived goal are recorded");
            }
        }
        self.internal_this_episode += ir;
        q_update(&mut self.qtable, obs.state, obs.action, ir, obs.next, &self.learning);
    }
}

/// Fresh brains for every agent of `maze`, each on its own stream of `seed`.
pub fn new_brains(maze: &Maze, learning: LearningParams, direction: DirectionParams, seed: u64) -> Vec<AgentBrain> {
    (0..maze.n_agents()).map(|i| AgentBrain::new(maze, learning, direction, agent_rng(seed, i))).collect()
}

/// One training iteration: an episode with per-step learning, then each
/// agent's goal-value step.
pub fn run_iteration(brains: &mut [AgentBrain], maze: &Maze) -> EpisodeRecord {
    let (r, max_step) = {
        let p = brains[0].learning();
        (p.external_reward, p.max_step)
    };
    let mut record = run_episode(maze, brains, r, max_step);
    for (brain, rec) in brains.iter_mut().zip(&mut record.agents) {
        let update = brain.finish_episode();
        rec.learning_reward = brain.internal_reward_this_episode();
        rec.goal =
            Some(GoalSnapshot { g_sel: update.goal, condition_met: update.condition_met, bids: brain.stats.bids() });
    }
    record
}

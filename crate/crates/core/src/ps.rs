//! Profit Sharing baseline.
//!
//! Agents act epsilon-greedily without per-step learning. At the end of an
//! episode the joint outcome is inspected: if every agent sits on its own
//! goal, all agents receive `r / N`, where `N` is the step at which the last
//! one arrived, and each credits its trajectory backwards with a geometric
//! factor. Any other outcome pays zero. This is the only learner allowed to
//! see the joint outcome.

use rand_chacha::ChaCha8Rng;

use crate::defaults;
use crate::episode::{agent_rng, run_episode, Agent, EpisodeRecord, Observation};
use crate::learner::{select_action, LearningParams, QTable};
use crate::maze::{Action, Cell, Maze};

/// State-action pairs visited by one agent in one episode, in order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EpisodeTrace {
    pub steps: Vec<(Cell, Action)>,
    pub terminal_step: u32,
}

/// Shared terminal reward: `r / n_steps` on success, zero otherwise.
pub fn ps_terminal_reward(r: f64, n_steps: u32, success: bool) -> f64 {
    assert!(n_steps >= 1);
    if success {
        r / n_steps as f64
    } else {
        0.0
    }
}

/// Backward credit: the pair `k` positions before the end moves toward
/// `terminal_reward * gamma^k` with rate `alpha`, last pair first.
pub fn ps_credit_update(q: &mut QTable, trace: &EpisodeTrace, terminal_reward: f64, alpha: f64, gamma: f64) {
    let mut credit = terminal_reward;
    for &(s, a) in trace.steps.iter().rev() {
        let old = q.get(s, a);
        q.set(s, a, (1.0 - alpha) * old + alpha * credit);
        credit *= gamma;
    }
}

#[derive(Debug, Clone)]
pub struct PsAgent {
    pub qtable: QTable,
    pub trace: EpisodeTrace,
    params: LearningParams,
    rng: ChaCha8Rng,
}

impl PsAgent {
    pub fn new(maze: &Maze, params: LearningParams, rng: ChaCha8Rng) -> Self {
        PsAgent { qtable: QTable::new(maze, defaults::INITIAL_Q), trace: EpisodeTrace::default(), params, rng }
    }
}

impl Agent for PsAgent {
    fn begin_episode(&mut self) {
        self.trace.steps.clear();
        self.trace.terminal_step = 0;
    }

    fn act(&mut self, state: Cell) -> Action {
        select_action(&self.qtable, state, self.params.epsilon, &mut self.rng)
    }

    fn observe(&mut self, obs: &Observation) {
        self.trace.steps.push((obs.state, obs.action));
        self.trace.terminal_step = obs.step;
    }
}

pub fn new_agents(maze: &Maze, params: LearningParams, seed: u64) -> Vec<PsAgent> {
    (0..maze.n_agents()).map(|i| PsAgent::new(maze, params, agent_rng(seed, i))).collect()
}

/// One episode followed by the shared terminal credit.
pub fn run_iteration_ps(agents: &mut [PsAgent], maze: &Maze) -> EpisodeRecord {
    let p = agents[0].params;
    let mut record = run_episode(maze, agents, p.external_reward, p.max_step);
    let success = record.all_distinct_arrivals();
    let n = record.completion_step().unwrap_or(record.steps).max(1);
    let reward = ps_terminal_reward(p.external_reward, n, success);
    for (agent, rec) in agents.iter_mut().zip(&mut record.agents) {
        ps_credit_update(&mut agent.qtable, &agent.trace, reward, p.alpha, p.gamma);
        rec.learning_reward = reward;
    }
    record
}

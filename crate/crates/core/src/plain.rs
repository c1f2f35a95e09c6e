//! Independent Q-learners trained directly on the external reward.

use rand_chacha::ChaCha8Rng;

use crate::defaults;
use crate::episode::{agent_rng, run_episode, Agent, EpisodeRecord, Observation};
use crate::learner::{q_update, select_action, LearningParams, QTable};
use crate::maze::{Action, Cell, Maze};

#[derive(Debug, Clone)]
pub struct PlainQAgent {
    pub qtable: QTable,
    params: LearningParams,
    rng: ChaCha8Rng,
}

impl PlainQAgent {
    pub fn new(maze: &Maze, params: LearningParams, rng: ChaCha8Rng) -> Self {
        PlainQAgent { qtable: QTable::new(maze, defaults::INITIAL_Q), params, rng }
    }
}

impl Agent for PlainQAgent {
    fn act(&mut self, state: Cell) -> Action {
        select_action(&self.qtable, state, self.params.epsilon, &mut self.rng)
    }

    fn observe(&mut self, obs: &Observation) {
        q_update(&mut self.qtable, obs.state, obs.action, obs.reward, obs.next, &self.params);
    }
}

pub fn new_agents(maze: &Maze, params: LearningParams, seed: u64) -> Vec<PlainQAgent> {
    (0..maze.n_agents()).map(|i| PlainQAgent::new(maze, params, agent_rng(seed, i))).collect()
}

pub fn run_iteration_plain(agents: &mut [PlainQAgent], maze: &Maze) -> EpisodeRecord {
    let p = agents[0].params;
    let mut record = run_episode(maze, agents, p.external_reward, p.max_step);
    for rec in &mut record.agents {
        rec.learning_reward = rec.external_reward;
    }
    record
}

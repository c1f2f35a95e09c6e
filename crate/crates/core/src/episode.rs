//! Episode driver shared by all learners.
//!
//! The driver is the only place that sees the joint state. Each agent is
//! handed its own cell when asked for an action and its own transition
//! afterwards; nothing about other agents flows through [`Agent`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::maze::{Action, Cell, GoalId, Maze};
use crate::mdp::{Arrival, WorldState};

/// What one agent perceives after a joint step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub state: Cell,
    pub action: Action,
    pub reward: f64,
    pub next: Cell,
    /// Set when `next` is a goal; the agent is absorbed from here on.
    pub arrived: Option<GoalId>,
    pub step: u32,
}

pub trait Agent {
    fn begin_episode(&mut self) {}
    fn act(&mut self, state: Cell) -> Action;
    fn observe(&mut self, obs: &Observation);
}

impl<T: Agent + ?Sized> Agent for Box<T> {
    fn begin_episode(&mut self) {
        (**self).begin_episode()
    }
    fn act(&mut self, state: Cell) -> Action {
        (**self).act(state)
    }
    fn observe(&mut self, obs: &Observation) {
        (**self).observe(obs)
    }
}

/// Goal-selection state of a goal-directed agent at the end of an episode.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalSnapshot {
    /// Goal selected after the episode (the one whose value was updated).
    pub g_sel: GoalId,
    /// Whether that update credited the minimum steps.
    pub condition_met: bool,
    pub bids: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentEpisode {
    /// Visited cells including the start.
    pub trajectory: Vec<Cell>,
    pub actions: Vec<Action>,
    pub arrival: Option<Arrival>,
    pub external_reward: f64,
    /// Reward the learner actually trained on: internal reward for the
    /// goal-directed learners, credited terminal reward for Profit Sharing,
    /// external reward for plain Q-learning.
    pub learning_reward: f64,
    pub goal: Option<GoalSnapshot>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub steps: u32,
    pub agents: Vec<AgentEpisode>,
}

impl EpisodeRecord {
    /// Distinct-goal completion: every agent arrived and no two share a goal.
    pub fn all_distinct_arrivals(&self) -> bool {
        let mut seen = 0u32;
        for a in &self.agents {
            match a.arrival {
                Some(arr) if seen & (1 << arr.goal.0) == 0 => seen |= 1 << arr.goal.0,
                _ => return false,
            }
        }
        true
    }

    /// Step at which the last agent arrived, if all arrived.
    pub fn completion_step(&self) -> Option<u32> {
        self.agents.iter().map(|a| a.arrival.map(|arr| arr.step)).try_fold(0, |m, s| s.map(|s| m.max(s)))
    }
}

/// Runs one episode from the starts until every agent is absorbed or
/// `max_step` steps have elapsed.
pub fn run_episode<A: Agent>(maze: &Maze, agents: &mut [A], external_reward: f64, max_step: u32) -> EpisodeRecord {
    assert_eq!(agents.len(), maze.n_agents(), "one agent per maze start");
    let mut state = WorldState::initial(maze);
    let mut record = EpisodeRecord {
        steps: 0,
        agents: maze
            .starts()
            .iter()
            .map(|&s| AgentEpisode {
                trajectory: vec![s],
                actions: Vec::new(),
                arrival: None,
                external_reward: 0.0,
                learning_reward: 0.0,
                goal: None,
            })
            .collect(),
    };
    for agent in agents.iter_mut() {
        agent.begin_episode();
    }

    let mut actions = vec![Action::Up; agents.len()];
    let mut rewards = Vec::with_capacity(agents.len());
    let mut arrivals = Vec::with_capacity(agents.len());
    while !crate::mdp::is_episode_done(&state, max_step) {
        let before: Vec<_> = state.positions.iter().map(|p| (p.cell, p.is_absorbed())).collect();
        for (i, agent) in agents.iter_mut().enumerate() {
            if !before[i].1 {
                actions[i] = agent.act(before[i].0);
            }
        }
        state.advance(maze, &actions, external_reward, &mut rewards, &mut arrivals);
        for (i, agent) in agents.iter_mut().enumerate() {
            let (cell, absorbed) = before[i];
            if absorbed {
                continue;
            }
            let pos = state.positions[i];
            let obs = Observation {
                state: cell,
                action: actions[i],
                reward: rewards[i],
                next: pos.cell,
                arrived: pos.arrived_goal,
                step: state.step,
            };
            agent.observe(&obs);
            let rec = &mut record.agents[i];
            rec.trajectory.push(pos.cell);
            rec.actions.push(actions[i]);
            rec.external_reward += rewards[i];
        }
        for arr in &arrivals {
            record.agents[arr.agent].arrival = Some(*arr);
        }
    }
    record.steps = state.step;
    record
}

/// Independent per-agent RNG stream for a run seed. Agents never share a
/// generator, so one agent's draws cannot perturb another's.
pub fn agent_rng(seed: u64, agent: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(agent as u64 + 1);
    rng
}

//! Deterministic joint transitions of the multi-agent maze.
//!
//! Every non-absorbed agent moves one cell per step. Goals are absorbing and
//! pay the external reward only to the agent that claims them first; agents
//! entering an already claimed goal, or entering an unclaimed goal together in
//! the same step, receive nothing but are absorbed all the same. Non-goal cells
//! may be shared freely.

use crate::maze::{Action, Cell, GoalId, Maze};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentPosition {
    pub cell: Cell,
    pub arrived_goal: Option<GoalId>,
    pub arrival_step: Option<u32>,
}

impl AgentPosition {
    pub fn is_absorbed(&self) -> bool {
        self.arrived_goal.is_some()
    }
}

/// Who owns a goal's reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    Agent(usize),
    /// Two or more agents entered the unclaimed goal on the same step.
    Tied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldState {
    pub positions: Vec<AgentPosition>,
    pub step: u32,
    goal_claims: Vec<Option<Claim>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrival {
    pub agent: usize,
    pub goal: GoalId,
    pub step: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointAction(pub Vec<Action>);

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: WorldState,
    pub rewards: Vec<f64>,
    pub arrivals: Vec<Arrival>,
}

impl WorldState {
    /// All agents at their starts, step 0, nothing claimed.
    pub fn initial(maze: &Maze) -> Self {
        let positions =
            maze.starts().iter().map(|&cell| AgentPosition { cell, arrived_goal: None, arrival_step: None }).collect();
        WorldState { positions, step: 0, goal_claims: vec![None; maze.n_goals()] }
    }

    pub fn claim(&self, g: GoalId) -> Option<Claim> {
        self.goal_claims[g.0]
    }

    pub fn claims(&self) -> impl Iterator<Item = (GoalId, Claim)> + '_ {
        self.goal_claims.iter().enumerate().filter_map(|(g, c)| c.map(|c| (GoalId(g), c)))
    }

    pub fn all_absorbed(&self) -> bool {
        self.positions.iter().all(AgentPosition::is_absorbed)
    }

    /// Applies one joint action in place. `rewards` and `arrivals` are
    /// cleared and refilled; absorbed agents ignore their entry of `actions`.
    pub fn advance(
        &mut self,
        maze: &Maze,
        actions: &[Action],
        external_reward: f64,
        rewards: &mut Vec<f64>,
        arrivals: &mut Vec<Arrival>,
    ) {
        assert_eq!(actions.len(), self.positions.len(), "joint action length must match agent count");
        self.step += 1;
        rewards.clear();
        rewards.resize(self.positions.len(), 0.0);
        arrivals.clear();

        for (agent, (pos, &action)) in self.positions.iter_mut().zip(actions).enumerate() {
            if pos.is_absorbed() {
                continue;
            }
            pos.cell = maze.move_from(pos.cell, action);
            if let Some(goal) = maze.goal_at(pos.cell) {
                pos.arrived_goal = Some(goal);
                pos.arrival_step = Some(self.step);
                arrivals.push(Arrival { agent, goal, step: self.step });
            }
        }

        for (i, arrival) in arrivals.iter().enumerate() {
            if self.goal_claims[arrival.goal.0].is_some() {
                continue;
            }
            let rivals = arrivals.iter().filter(|a| a.goal == arrival.goal).count();
            if rivals == 1 {
                self.goal_claims[arrival.goal.0] = Some(Claim::Agent(arrival.agent));
                rewards[arrival.agent] = external_reward;
            } else {
                // Only the first entrant in the list gets here for a tied goal.
                debug_assert!(arrivals[..i].iter().all(|a| a.goal != arrival.goal));
                self.goal_claims[arrival.goal.0] = Some(Claim::Tied);
            }
        }
    }
}

/// Pure form of [`WorldState::advance`].
pub fn step(maze: &Maze, state: &WorldState, joint: &JointAction, external_reward: f64) -> StepOutcome {
    let mut next = state.clone();
    let mut rewards = Vec::new();
    let mut arrivals = Vec::new();
    next.advance(maze, &joint.0, external_reward, &mut rewards, &mut arrivals);
    StepOutcome { state: next, rewards, arrivals }
}

pub fn is_episode_done(state: &WorldState, max_step: u32) -> bool {
    state.all_absorbed() || state.step >= max_step
}

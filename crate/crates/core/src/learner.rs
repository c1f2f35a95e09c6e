//! Tabular Q-learning shared by every algorithm: one table per agent, keyed
//! by the agent's own cell.

use std::fmt::Write as _;

use rand::Rng;

use crate::defaults;
use crate::error::{ConfigError, FormatError};
use crate::maze::{Action, Cell, Maze};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearningParams {
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub max_step: u32,
    pub external_reward: f64,
}

impl Default for LearningParams {
    fn default() -> Self {
        LearningParams {
            alpha: defaults::ALPHA,
            gamma: defaults::GAMMA,
            epsilon: defaults::EPSILON,
            max_step: defaults::MAX_STEP,
            external_reward: defaults::EXTERNAL_REWARD,
        }
    }
}

impl LearningParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let open_unit = |name, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(ConfigError::Param { name, msg: format!("{v} is not in (0, 1)") })
            }
        };
        open_unit("alpha", self.alpha)?;
        open_unit("gamma", self.gamma)?;
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(ConfigError::Param { name: "epsilon", msg: format!("{} is not in [0, 1]", self.epsilon) });
        }
        if self.max_step == 0 {
            return Err(ConfigError::Param { name: "max_step", msg: "must be positive".into() });
        }
        if !(self.external_reward > 0.0 && self.external_reward.is_finite()) {
            return Err(ConfigError::Param {
                name: "external_reward",
                msg: format!("{} is not a positive real", self.external_reward),
            });
        }
        Ok(())
    }
}

/// Dense state-action table over the cells of one maze.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    width: usize,
    height: usize,
    initial_q: f64,
    values: Vec<[f64; 4]>,
}

impl QTable {
    pub fn new(maze: &Maze, initial_q: f64) -> Self {
        Self::with_shape(maze.width(), maze.height(), initial_q)
    }

    pub fn with_shape(width: usize, height: usize, initial_q: f64) -> Self {
        assert!(initial_q.is_finite());
        QTable { width, height, initial_q, values: vec![[initial_q; 4]; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn initial_q(&self) -> f64 {
        self.initial_q
    }

    fn slot(&self, s: Cell) -> usize {
        debug_assert!(s.row < self.height && s.col < self.width);
        s.row * self.width + s.col
    }

    pub fn get(&self, s: Cell, a: Action) -> f64 {
        self.values[self.slot(s)][a.index()]
    }

    pub fn set(&mut self, s: Cell, a: Action, q: f64) {
        debug_assert!(q.is_finite(), "non-finite Q value {q} at {s} {a:?}");
        let i = self.slot(s);
        self.values[i][a.index()] = q;
    }

    pub fn row(&self, s: Cell) -> &[f64; 4] {
        &self.values[self.slot(s)]
    }

    pub fn max_value(&self, s: Cell) -> f64 {
        self.row(s).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Argmax with the fixed Up, Down, Left, Right tie order.
    pub fn greedy_action(&self, s: Cell) -> Action {
        let row = self.row(s);
        let mut best = 0;
        for i in 1..4 {
            if row[i] > row[best] {
                best = i;
            }
        }
        Action::from_index(best)
    }

    /// Writes `agent,row,col,action,q` rows (no header) for every non-wall
    /// cell of `maze`.
    pub fn write_csv_rows(&self, agent: usize, maze: &Maze, out: &mut String) {
        for cell in maze.cells().filter(|&c| !maze.is_wall(c)) {
            for a in Action::ALL {
                let _ = writeln!(out, "{agent},{},{},{},{:.6}", cell.row, cell.col, a.name(), self.get(cell, a));
            }
        }
    }
}

pub const QTABLE_CSV_HEADER: &str = "agent,row,col,action,q";

/// Serializes one table per agent in the Q-table dump format.
pub fn dump_qtables(tables: &[QTable], maze: &Maze) -> String {
    let mut out = String::from(QTABLE_CSV_HEADER);
    out.push('\n');
    for (agent, q) in tables.iter().enumerate() {
        q.write_csv_rows(agent, maze, &mut out);
    }
    out
}

/// Reads a Q-table dump back against the maze it was produced on. Entries
/// not present in the dump keep the initial value 0.
pub fn load_qtables(text: &str, maze: &Maze) -> Result<Vec<QTable>, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == QTABLE_CSV_HEADER => {}
        Some((i, _)) => {
            return Err(FormatError::Line { line: i + 1, msg: format!("expected header `{QTABLE_CSV_HEADER}`") })
        }
        None => return Err(FormatError::Empty),
    }
    let mut tables: Vec<QTable> = Vec::new();
    for (i, line) in lines {
        let bad = |msg: &str| FormatError::Line { line: i + 1, msg: msg.to_string() };
        let fields: Vec<&str> = line.trim().split(',').collect();
        let [agent, row, col, action, q] = fields.as_slice() else {
            return Err(bad("expected 5 fields"));
        };
        let agent: usize = agent.parse().map_err(|_| bad("bad agent index"))?;
        let row: usize = row.parse().map_err(|_| bad("bad row"))?;
        let col: usize = col.parse().map_err(|_| bad("bad col"))?;
        let action = Action::parse(action).ok_or_else(|| bad("bad action"))?;
        let q: f64 = q.parse().map_err(|_| bad("bad q value"))?;
        if !q.is_finite() {
            return Err(bad("non-finite q value"));
        }
        let cell = Cell::new(row, col);
        if !maze.contains(cell) {
            return Err(FormatError::Shape(format!(
                "cell {cell} lies outside the {}x{} maze",
                maze.width(),
                maze.height()
            )));
        }
        if maze.is_wall(cell) {
            return Err(FormatError::Shape(format!("cell {cell} is a wall in the maze")));
        }
        if agent >= maze.n_agents() {
            return Err(FormatError::Shape(format!("agent {agent} does not exist in the maze")));
        }
        while tables.len() <= agent {
            tables.push(QTable::new(maze, 0.0));
        }
        tables[agent].set(cell, action, q);
    }
    if tables.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(tables)
}

/// One Q-learning backup of `(s, a)` toward `reward + gamma * max Q(s_next, .)`.
pub fn q_update(q: &mut QTable, s: Cell, a: Action, reward: f64, s_next: Cell, params: &LearningParams) {
    let target = reward + params.gamma * q.max_value(s_next);
    let old = q.get(s, a);
    q.set(s, a, (1.0 - params.alpha) * old + params.alpha * target);
}

/// Epsilon-greedy over `Q(s, .)`, ties among maximizers broken uniformly.
pub fn select_action<R: Rng + ?Sized>(q: &QTable, s: Cell, epsilon: f64, rng: &mut R) -> Action {
    if epsilon > 0.0 && rng.gen_bool(epsilon) {
        return Action::from_index(rng.gen_range(0..4));
    }
    let row = q.row(s);
    let best = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut ties = [0usize; 4];
    let mut n = 0;
    for (i, &v) in row.iter().enumerate() {
        if v == best {
            ties[n] = i;
            n += 1;
        }
    }
    let pick = if n == 1 { ties[0] } else { ties[rng.gen_range(0..n)] };
    Action::from_index(pick)
}

/// Deterministic argmax rollout from `start`, stopping on any goal cell or
/// after `max_step` moves. The returned path includes `start`.
pub fn greedy_trajectory(q: &QTable, maze: &Maze, start: Cell, max_step: u32) -> Vec<Cell> {
    let mut path = vec![start];
    let mut cell = start;
    for _ in 0..max_step {
        if maze.goal_at(cell).is_some() {
            break;
        }
        cell = maze.move_from(cell, q.greedy_action(cell));
        path.push(cell);
    }
    path
}

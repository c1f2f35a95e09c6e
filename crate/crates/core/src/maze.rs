//! Grid mazes: walls, agent starts and labeled goals.
//!
//! Text format, one maze per file:
//!
//! ```text
//! 5 3
//! A...0
//! .#.#.
//! B...1
//! ```
//!
//! The first line is `W H`, followed by `H` rows of `W` characters: `#` wall,
//! `.` free, `A`..`Z` agent starts (alphabetical order = agent index) and
//! `0`..`9` goals `G0`..`G9`.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::MazeError;

pub const MAX_GOALS: usize = 10;
pub const MAX_AGENTS: usize = 26;

const GENERATOR_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// One of the four moves. The declaration order is also the fixed
/// tie-break order used by deterministic greedy rollouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Up,
    Down,
    Left,
    Right,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Action {
        Action::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::Up => "up",
            Action::Down => "down",
            Action::Left => "left",
            Action::Right => "right",
        }
    }

    pub fn parse(s: &str) -> Option<Action> {
        match s {
            "up" => Some(Action::Up),
            "down" => Some(Action::Down),
            "left" => Some(Action::Left),
            "right" => Some(Action::Right),
            _ => None,
        }
    }
}

/// Goal label `G0`..`G9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoalId(pub usize);

impl fmt::Display for GoalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.0)
    }
}

impl GoalId {
    pub fn parse(s: &str) -> Option<GoalId> {
        s.strip_prefix('G')?.parse().ok().map(GoalId)
    }
}

/// Immutable maze description shared read-only by every agent of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Maze {
    width: usize,
    height: usize,
    walls: Vec<bool>,
    starts: Vec<Cell>,
    goals: Vec<Cell>,
    goal_at: Vec<Option<GoalId>>,
}

impl Maze {
    /// Builds and validates a maze from its parts.
    pub fn new(
        width: usize,
        height: usize,
        walls: &[Cell],
        starts: Vec<Cell>,
        goals: Vec<Cell>,
    ) -> Result<Maze, MazeError> {
        if width == 0 || height == 0 {
            return Err(MazeError::Invalid("width and height must be positive".into()));
        }
        let in_bounds = |c: &Cell| c.row < height && c.col < width;
        if let Some(c) = walls.iter().chain(&starts).chain(&goals).find(|c| !in_bounds(c)) {
            return Err(MazeError::Invalid(format!("cell {c} is outside the {width}x{height} grid")));
        }
        if starts.is_empty() {
            return Err(MazeError::Invalid("maze has no agent starts".into()));
        }
        if starts.len() > MAX_AGENTS {
            return Err(MazeError::Invalid(format!("at most {MAX_AGENTS} agents are supported")));
        }
        if goals.len() > MAX_GOALS {
            return Err(MazeError::Invalid(format!("at most {MAX_GOALS} goals are supported")));
        }
        if goals.len() < starts.len() {
            return Err(MazeError::Invalid(format!("{} goals cannot serve {} agents", goals.len(), starts.len())));
        }

        let mut wall_grid = vec![false; width * height];
        let mut used = vec![false; width * height];
        for c in walls {
            wall_grid[c.row * width + c.col] = true;
        }
        for c in walls.iter().chain(&starts).chain(&goals) {
            let i = c.row * width + c.col;
            if used[i] {
                return Err(MazeError::Invalid(format!("cell {c} is assigned twice")));
            }
            used[i] = true;
        }
        let mut goal_at = vec![None; width * height];
        for (g, c) in goals.iter().enumerate() {
            goal_at[c.row * width + c.col] = Some(GoalId(g));
        }

        let maze = Maze { width, height, walls: wall_grid, starts, goals, goal_at };
        maze.check_connectivity()?;
        Ok(maze)
    }

    fn check_connectivity(&self) -> Result<(), MazeError> {
        for (agent, &start) in self.starts.iter().enumerate() {
            let dist = self.distances_from(start);
            for (g, goal) in self.goals.iter().enumerate() {
                if dist[self.index(*goal)].is_none() {
                    return Err(MazeError::Unreachable { agent, goal: GoalId(g) });
                }
            }
        }
        Ok(())
    }

    /// Breadth-first step counts from `source`. Goal cells are terminal: they
    /// receive a distance but are never expanded, since entering any goal
    /// ends an agent's movement.
    pub(crate) fn distances_from(&self, source: Cell) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.width * self.height];
        dist[self.index(source)] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(cell) = queue.pop_front() {
            if cell != source && self.goal_at(cell).is_some() {
                continue;
            }
            let d = dist[self.index(cell)].unwrap_or(0);
            for action in Action::ALL {
                let next = self.move_from(cell, action);
                let slot = &mut dist[self.index(next)];
                if slot.is_none() {
                    *slot = Some(d + 1);
                    queue.push_back(next);
                }
            }
        }
        dist
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn n_cells(&self) -> usize {
        self.width * self.height
    }

    pub fn n_agents(&self) -> usize {
        self.starts.len()
    }

    pub fn n_goals(&self) -> usize {
        self.goals.len()
    }

    pub fn starts(&self) -> &[Cell] {
        &self.starts
    }

    pub fn goals(&self) -> &[Cell] {
        &self.goals
    }

    pub fn goal_cell(&self, g: GoalId) -> Cell {
        self.goals[g.0]
    }

    pub fn goal_ids(&self) -> impl Iterator<Item = GoalId> {
        (0..self.goals.len()).map(GoalId)
    }

    pub fn walls(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells().filter(|&c| self.is_wall(c))
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height).flat_map(move |row| (0..self.width).map(move |col| Cell { row, col }))
    }

    /// Row-major index of an in-bounds cell.
    pub fn index(&self, c: Cell) -> usize {
        c.row * self.width + c.col
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.row < self.height && c.col < self.width
    }

    pub fn is_wall(&self, c: Cell) -> bool {
        self.walls[self.index(c)]
    }

    pub fn goal_at(&self, c: Cell) -> Option<GoalId> {
        self.goal_at[self.index(c)]
    }

    /// Cell reached by `action` from `from`; moves off the grid or into a
    /// wall leave the position unchanged.
    pub fn move_from(&self, from: Cell, action: Action) -> Cell {
        let next = match action {
            Action::Up if from.row > 0 => Cell::new(from.row - 1, from.col),
            Action::Down if from.row + 1 < self.height => Cell::new(from.row + 1, from.col),
            Action::Left if from.col > 0 => Cell::new(from.row, from.col - 1),
            Action::Right if from.col + 1 < self.width => Cell::new(from.row, from.col + 1),
            _ => return from,
        };
        if self.is_wall(next) {
            from
        } else {
            next
        }
    }

    /// Parses the line-oriented maze format and validates the result.
    pub fn parse(text: &str) -> Result<Maze, MazeError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| MazeError::parse(1, "empty maze file"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let [w, h] = dims.as_slice() else {
            return Err(MazeError::parse(1, "header must be `W H`"));
        };
        let width: usize = w.parse().map_err(|_| MazeError::parse(1, "bad width"))?;
        let height: usize = h.parse().map_err(|_| MazeError::parse(1, "bad height"))?;

        let mut walls = Vec::new();
        let mut starts: Vec<Option<Cell>> = vec![None; MAX_AGENTS];
        let mut goals: Vec<Option<Cell>> = vec![None; MAX_GOALS];
        let mut rows = 0;
        for (lineno, line) in lines {
            let lineno = lineno + 1;
            if rows == height {
                return Err(MazeError::parse(lineno, "more rows than the header declares"));
            }
            let chars: Vec<char> = line.trim_end().chars().collect();
            if chars.len() != width {
                return Err(MazeError::parse(lineno, format!("expected {width} columns, found {}", chars.len())));
            }
            for (col, ch) in chars.into_iter().enumerate() {
                let cell = Cell::new(rows, col);
                match ch {
                    '.' => {}
                    '#' => walls.push(cell),
                    'A'..='Z' => {
                        let slot = &mut starts[(ch as u8 - b'A') as usize];
                        if slot.replace(cell).is_some() {
                            return Err(MazeError::parse(lineno, format!("start {ch} appears twice")));
                        }
                    }
                    '0'..='9' => {
                        let slot = &mut goals[(ch as u8 - b'0') as usize];
                        if slot.replace(cell).is_some() {
                            return Err(MazeError::parse(lineno, format!("goal {ch} appears twice")));
                        }
                    }
                    other => return Err(MazeError::parse(lineno, format!("unexpected character {other:?}"))),
                }
            }
            rows += 1;
        }
        if rows != height {
            return Err(MazeError::parse(0, format!("expected {height} rows, found {rows}")));
        }
        let starts = dense_prefix(starts, "agent starts must be consecutive letters from A")?;
        let goals = dense_prefix(goals, "goals must be consecutive digits from 0")?;
        Maze::new(width, height, &walls, starts, goals)
    }

    /// Seeded random maze: walls, then starts and goals on distinct free
    /// cells. Candidates failing validation are redrawn a bounded number of
    /// times.
    pub fn generate(spec: &GeneratorSpec) -> Result<Maze, MazeError> {
        let GeneratorSpec { seed, n_agents, width, height, wall_density } = *spec;
        let fail = |reason: String| MazeError::Generation { spec: *spec, reason };
        if n_agents == 0 || n_agents > MAX_GOALS {
            return Err(fail(format!("agent count must be in 1..={MAX_GOALS}")));
        }
        if width == 0 || height == 0 {
            return Err(fail("width and height must be positive".into()));
        }
        if !(0.0..1.0).contains(&wall_density) {
            return Err(fail("wall density must be in [0, 1)".into()));
        }
        let cells = width * height;
        let n_walls = (wall_density * cells as f64).round() as usize;
        if n_walls + 2 * n_agents > cells {
            return Err(fail(format!(
                "{cells} cells cannot hold {n_walls} walls, {n_agents} starts and {n_agents} goals"
            )));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<Cell> = (0..height).flat_map(|row| (0..width).map(move |col| Cell::new(row, col))).collect();
        for _ in 0..GENERATOR_ATTEMPTS {
            let picked: Vec<Cell> = all.choose_multiple(&mut rng, n_walls + 2 * n_agents).copied().collect();
            let (walls, rest) = picked.split_at(n_walls);
            let (starts, goals) = rest.split_at(n_agents);
            if let Ok(maze) = Maze::new(width, height, walls, starts.to_vec(), goals.to_vec()) {
                return Ok(maze);
            }
        }
        Err(fail(format!("no connected layout after {GENERATOR_ATTEMPTS} attempts")))
    }
}

fn dense_prefix(slots: Vec<Option<Cell>>, msg: &str) -> Result<Vec<Cell>, MazeError> {
    let n = slots.iter().take_while(|s| s.is_some()).count();
    if slots[n..].iter().any(Option::is_some) {
        return Err(MazeError::parse(0, msg));
    }
    Ok(slots.into_iter().take(n).flatten().collect())
}

impl fmt::Display for Maze {
    /// Serializes in the same format `parse` reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut grid: Vec<char> = self.walls.iter().map(|&w| if w { '#' } else { '.' }).collect();
        for (i, s) in self.starts.iter().enumerate() {
            grid[self.index(*s)] = (b'A' + i as u8) as char;
        }
        for (g, c) in self.goals.iter().enumerate() {
            grid[self.index(*c)] = (b'0' + g as u8) as char;
        }
        writeln!(f, "{} {}", self.width, self.height)?;
        for row in grid.chunks(self.width) {
            writeln!(f, "{}", row.iter().collect::<String>())?;
        }
        Ok(())
    }
}

/// Parameters of [`Maze::generate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub n_agents: usize,
    pub width: usize,
    pub height: usize,
    pub wall_density: f64,
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed={} agents={} size={}x{} density={}",
            self.seed, self.n_agents, self.width, self.height, self.wall_density
        )
    }
}

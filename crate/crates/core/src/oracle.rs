//! Exact reference solutions used by tests and evaluation, never by learners.

use crate::error::{Error, Result};
use crate::learner::QTable;
use crate::maze::{Action, Cell, GoalId, Maze};

/// Shortest step counts from one source cell. Goal cells other than the
/// source are terminal: reachable, but never passed through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceField {
    pub source: Cell,
    width: usize,
    dist: Vec<Option<u32>>,
}

impl DistanceField {
    pub fn get(&self, c: Cell) -> Option<u32> {
        self.dist[c.row * self.width + c.col]
    }
}

pub fn bfs_shortest_paths(maze: &Maze, source: Cell) -> DistanceField {
    assert!(maze.contains(source) && !maze.is_wall(source), "source must be a free cell");
    DistanceField { source, width: maze.width(), dist: maze.distances_from(source) }
}

/// Injective agent-to-goal mapping with its makespan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub goals: Vec<GoalId>,
    pub makespan: u32,
}

/// Start-to-goal distance matrix, `None` where unreachable.
pub fn distance_matrix(maze: &Maze) -> Vec<Vec<Option<u32>>> {
    maze.starts()
        .iter()
        .map(|&s| {
            let field = bfs_shortest_paths(maze, s);
            maze.goals().iter().map(|&g| field.get(g)).collect()
        })
        .collect()
}

/// Brute-force minimum-makespan assignment. Among optimal assignments the
/// lexicographically smallest goal sequence wins.
pub fn optimal_assignment(maze: &Maze) -> Result<Assignment> {
    let dist = distance_matrix(maze);
    if let Some(agent) = dist.iter().position(|row| row.iter().all(Option::is_none)) {
        return Err(Error::Infeasible(format!("agent {agent} reaches no goal")));
    }
    let mut best: Option<Assignment> = None;
    let mut current = Vec::with_capacity(dist.len());
    let mut used = vec![false; maze.n_goals()];
    search(&dist, &mut current, &mut used, 0, &mut best);
    best.ok_or_else(|| Error::Infeasible("no injective assignment reaches every goal".into()))
}

fn search(
    dist: &[Vec<Option<u32>>],
    current: &mut Vec<GoalId>,
    used: &mut [bool],
    makespan: u32,
    best: &mut Option<Assignment>,
) {
    let agent = current.len();
    if agent == dist.len() {
        if best.as_ref().is_none_or(|b| makespan < b.makespan) {
            *best = Some(Assignment { goals: current.clone(), makespan });
        }
        return;
    }
    for g in 0..used.len() {
        let Some(d) = dist[agent][g] else { continue };
        if used[g] {
            continue;
        }
        used[g] = true;
        current.push(GoalId(g));
        search(dist, current, used, makespan.max(d), best);
        current.pop();
        used[g] = false;
    }
}

/// Makespan of a given injective assignment, `None` if some agent cannot
/// reach its goal.
pub fn makespan_of(maze: &Maze, goals: &[GoalId]) -> Option<u32> {
    let dist = distance_matrix(maze);
    goals.iter().enumerate().map(|(a, g)| dist[a][g.0]).try_fold(0, |m, d| d.map(|d| m.max(d)))
}

/// Optimal action values for a lone agent heading to `goal`: entering
/// `goal` pays `reward` once and ends the episode, entering any other goal
/// ends it with nothing.
pub fn value_iteration(maze: &Maze, goal: GoalId, gamma: f64, reward: f64, tol: f64) -> QTable {
    assert!(tol > 0.0);
    let mut q = QTable::new(maze, 0.0);
    let states: Vec<Cell> = maze.cells().filter(|&c| !maze.is_wall(c) && maze.goal_at(c).is_none()).collect();
    loop {
        let mut residual = 0.0f64;
        for &s in &states {
            for a in Action::ALL {
                let next = maze.move_from(s, a);
                let value = match maze.goal_at(next) {
                    Some(g) if g == goal => reward,
                    Some(_) => 0.0,
                    None => gamma * q.max_value(next),
                };
                residual = residual.max((value - q.get(s, a)).abs());
                q.set(s, a, value);
            }
        }
        if residual < tol {
            return q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::greedy_trajectory;

    #[test]
    fn line_distance() {
        let maze = Maze::parse("3 1\nA.0\n").unwrap();
        let f = bfs_shortest_paths(&maze, maze.starts()[0]);
        assert_eq!(f.get(Cell::new(0, 2)), Some(2));
        assert_eq!(f.get(Cell::new(0, 0)), Some(0));
    }

    #[test]
    fn walled_off_cell_unreachable() {
        let maze = Maze::parse("5 3\nA.#..\n..#.#\n0.#.#\n").unwrap();
        let f = bfs_shortest_paths(&maze, maze.starts()[0]);
        assert_eq!(f.get(Cell::new(0, 3)), None);
        assert_eq!(f.get(Cell::new(1, 3)), None);
        assert_eq!(f.get(Cell::new(2, 0)), Some(2));
    }

    #[test]
    fn goals_are_not_passed_through() {
        // Reaching goal 1 through goal 0 is impossible: the agent would stop at 0.
        let maze = Maze::parse("4 2\nA0.1\n....\n").unwrap();
        let f = bfs_shortest_paths(&maze, maze.starts()[0]);
        assert_eq!(f.get(Cell::new(0, 1)), Some(1));
        assert_eq!(f.get(Cell::new(0, 3)), Some(5));
    }

    #[test]
    fn symmetric_assignment() {
        let maze = Maze::parse("3 3\nA.0\n...\nB.1\n").unwrap();
        let a = optimal_assignment(&maze).unwrap();
        assert_eq!(a.makespan, 2);
        assert_eq!(a.goals, vec![GoalId(0), GoalId(1)]);
    }

    #[test]
    fn value_iteration_line() {
        let maze = Maze::parse("3 1\nA.0\n").unwrap();
        let q = value_iteration(&maze, GoalId(0), 0.9, 10.0, 1e-12);
        assert!((q.get(Cell::new(0, 1), Action::Right) - 10.0).abs() < 1e-12);
        assert!((q.get(Cell::new(0, 0), Action::Right) - 9.0).abs() < 1e-12);
        // Left bump from the start: stay, then best continuation 9.
        assert!((q.get(Cell::new(0, 0), Action::Left) - 8.1).abs() < 1e-12);
    }

    #[test]
    fn myopic_value_iteration() {
        let maze = Maze::parse("4 2\nA..0\n..1.\n").unwrap();
        let q = value_iteration(&maze, GoalId(0), 0.0, 10.0, 1e-12);
        for c in maze.cells() {
            for a in Action::ALL {
                let expected = if maze.goal_at(c).is_none() && maze.goal_at(maze.move_from(c, a)) == Some(GoalId(0)) {
                    10.0
                } else {
                    0.0
                };
                assert_eq!(q.get(c, a), expected, "{c} {a:?}");
            }
        }
    }

    #[test]
    fn value_iteration_policy_is_shortest() {
        let maze = Maze::parse("6 4\nA.....\n.####.\n.#..#.\n...#.0\n").unwrap();
        let q = value_iteration(&maze, GoalId(0), 0.9, 10.0, 1e-10);
        let path = greedy_trajectory(&q, &maze, maze.starts()[0], 100);
        let d = bfs_shortest_paths(&maze, maze.starts()[0]).get(maze.goals()[0]).unwrap();
        assert_eq!(path.len() as u32 - 1, d);
    }
}

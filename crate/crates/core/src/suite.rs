//! Mazes shipped with the repository.
//!
//! `conflict.maze` is a hand-drawn two-agent maze. Both starts are one step
//! from goal 0 and five steps from goal 1:
//!
//! ```text
//! .....
//! ..A..
//! .B0..
//! .....
//! ....1
//! ```
//!
//! Agents that each chase their nearest goal collide on goal 0, while any
//! assignment sending one of them to goal 1 finishes in 5 steps.
//!
//! The two generated suites come from fixed generator specs. The files are
//! committed so they can be inspected and rendered, and tests check that
//! regenerating each spec reproduces its file.

use crate::maze::{GeneratorSpec, Maze};

pub const CONFLICT: &str = include_str!("../mazes/conflict.maze");

pub fn conflict_maze() -> Maze {
    Maze::parse(CONFLICT).expect("shipped conflict maze is valid")
}

/// A generated maze together with the spec it came from.
#[derive(Debug, Clone, Copy)]
pub struct SuiteMaze {
    pub name: &'static str,
    pub spec: GeneratorSpec,
    pub text: &'static str,
}

impl SuiteMaze {
    pub fn maze(&self) -> Maze {
        Maze::parse(self.text).expect("shipped suite maze is valid")
    }
}

macro_rules! suite {
    ($agents:expr, $w:expr, $h:expr, $density:expr; $($name:literal => $seed:expr),* $(,)?) => {
        [$(SuiteMaze {
            name: $name,
            spec: GeneratorSpec { seed: $seed, n_agents: $agents, width: $w, height: $h, wall_density: $density },
            text: include_str!(concat!("../mazes/", $name, ".maze")),
        }),*]
    };
}

/// Two agents, 6x6, 15% walls, seeds 101..=110.
pub static TWO_AGENT: [SuiteMaze; 10] = suite!(2, 6, 6, 0.15;
    "two01" => 101, "two02" => 102, "two03" => 103, "two04" => 104, "two05" => 105,
    "two06" => 106, "two07" => 107, "two08" => 108, "two09" => 109, "two10" => 110,
);

/// Five agents, 30x30, 15% walls, seeds 501..=510.
pub static FIVE_AGENT: [SuiteMaze; 10] = suite!(5, FIVE_SIZE, FIVE_SIZE, 0.15;
    "five01" => 501, "five02" => 502, "five03" => 503, "five04" => 504, "five05" => 505,
    "five06" => 506, "five07" => 507, "five08" => 508, "five09" => 509, "five10" => 510,
);

const FIVE_SIZE: usize = 30;

/// Every shipped maze with its name, the conflict maze first.
pub fn all() -> Vec<(&'static str, Maze)> {
    let mut out = vec![("conflict", conflict_maze())];
    out.extend(TWO_AGENT.iter().chain(FIVE_AGENT.iter()).map(|s| (s.name, s.maze())));
    out
}

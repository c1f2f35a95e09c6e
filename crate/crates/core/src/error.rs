use thiserror::Error;

use crate::maze::{GeneratorSpec, GoalId};

#[derive(Debug, Error)]
pub enum MazeError {
    #[error("maze parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid maze: {0}")]
    Invalid(String),
    #[error("agent {agent} cannot reach goal {goal}")]
    Unreachable { agent: usize, goal: GoalId },
    #[error("maze generation failed ({spec}): {reason}")]
    Generation { spec: GeneratorSpec, reason: String },
}

impl MazeError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        MazeError::Parse { line, msg: msg.into() }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid parameter {name}: {msg}")]
    Param { name: &'static str, msg: String },
    #[error("seed list is empty")]
    NoSeeds,
    #[error("iterations ({iterations}) must be at least the evaluation window ({window})")]
    WindowTooLarge { iterations: u64, window: u64 },
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("no rows")]
    Empty,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Maze(#[from] MazeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("infeasible assignment: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Optional TOML run configuration. Every key mirrors a `run` flag; flags
//! given on the command line win.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub algo: Option<String>,
    pub maze: Option<PathBuf>,
    pub preset: Option<String>,
    pub seeds: Option<u64>,
    pub iterations: Option<u64>,
    pub eval_window: Option<u64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub threshold: Option<f64>,
    pub goal_random_prob: Option<f64>,
    pub out: Option<PathBuf>,
    pub episode_logs: Option<bool>,
    pub dump_q: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<FileConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

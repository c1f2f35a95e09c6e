//! Seeded training runs, the joint-steps metric and summary tables.

use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::drl::{self, AgentBrain, DirectionParams, Mode};
use crate::episode::{run_episode, Agent, EpisodeRecord, Observation};
use crate::error::{ConfigError, FormatError, Result};
use crate::learner::{LearningParams, QTable};
use crate::maze::{Action, Cell, GeneratorSpec, GoalId, Maze};
use crate::oracle;
use crate::plain::{self, PlainQAgent};
use crate::ps::{self, PsAgent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Drl,
    Pmrl,
    Ps,
    PlainQ,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Drl, Algorithm::Pmrl, Algorithm::Ps, Algorithm::PlainQ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Drl => "DRL",
            Algorithm::Pmrl => "PMRL",
            Algorithm::Ps => "PS",
            Algorithm::PlainQ => "PlainQ",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "drl" => Ok(Algorithm::Drl),
            "pmrl" => Ok(Algorithm::Pmrl),
            "ps" => Ok(Algorithm::Ps),
            "plainq" => Ok(Algorithm::PlainQ),
            _ => Err(format!("unknown algorithm {s:?} (expected drl, pmrl, ps or plainq)")),
        }
    }
}

/// Iteration budgets by agent count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 10,000 iterations for up to two agents, 100,000 beyond.
    Desk,
    /// 50,000 iterations for up to two agents, 500,000 beyond.
    Paper,
}

impl Preset {
    pub fn iterations(self, n_agents: usize) -> u64 {
        match (self, n_agents <= 2) {
            (Preset::Desk, true) => 10_000,
            (Preset::Desk, false) => 100_000,
            (Preset::Paper, true) => 50_000,
            (Preset::Paper, false) => 500_000,
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "desk" => Ok(Preset::Desk),
            "paper" => Ok(Preset::Paper),
            _ => Err(format!("unknown preset {s:?} (expected desk or paper)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MazeSource {
    File(PathBuf),
    Generated(GeneratorSpec),
    Inline { name: String, maze: Maze },
}

impl MazeSource {
    pub fn load(&self) -> Result<Maze> {
        match self {
            MazeSource::File(path) => Ok(Maze::parse(&std::fs::read_to_string(path)?)?),
            MazeSource::Generated(spec) => Ok(Maze::generate(spec)?),
            MazeSource::Inline { maze, .. } => Ok(maze.clone()),
        }
    }

    /// Label used in result rows.
    pub fn name(&self) -> String {
        match self {
            MazeSource::File(path) => {
                path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
            }
            MazeSource::Generated(spec) => {
                format!("gen-s{}-a{}-{}x{}", spec.seed, spec.n_agents, spec.width, spec.height)
            }
            MazeSource::Inline { name, .. } => name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub maze: MazeSource,
    pub iterations: u64,
    pub seeds: Vec<u64>,
    pub learning: LearningParams,
    pub direction: DirectionParams,
    /// Trailing training iterations scanned for the minimum joint steps.
    pub eval_window: u64,
}

pub const DEFAULT_EVAL_WINDOW: u64 = 100;

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, maze: MazeSource, iterations: u64) -> Self {
        ExperimentConfig {
            algorithm,
            maze,
            iterations,
            seeds: (1..=crate::defaults::SEEDS).collect(),
            learning: LearningParams::default(),
            direction: DirectionParams::default(),
            eval_window: DEFAULT_EVAL_WINDOW.min(iterations.max(1)),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.seeds.is_empty() {
            return Err(ConfigError::NoSeeds);
        }
        if self.iterations == 0 {
            return Err(ConfigError::Param { name: "iterations", msg: "must be positive".into() });
        }
        if self.eval_window == 0 {
            return Err(ConfigError::Param { name: "eval_window", msg: "must be positive".into() });
        }
        if self.iterations < self.eval_window {
            return Err(ConfigError::WindowTooLarge { iterations: self.iterations, window: self.eval_window });
        }
        self.learning.validate()?;
        self.direction.validate()
    }
}

/// Steps until every agent sits on its own goal; `max_step` when two agents
/// share a goal or any agent never arrived.
pub fn joint_steps(record: &EpisodeRecord, max_step: u32) -> u32 {
    if record.all_distinct_arrivals() {
        record.completion_step().unwrap_or(max_step)
    } else {
        max_step
    }
}

fn has_conflict(record: &EpisodeRecord) -> bool {
    let mut seen = 0u32;
    for arr in record.agents.iter().filter_map(|a| a.arrival) {
        if seen & (1 << arr.goal.0) != 0 {
            return true;
        }
        seen |= 1 << arr.goal.0;
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub seed: u64,
    pub joint_steps: Vec<u32>,
    /// Joint steps of the greedy rollout after training.
    pub final_joint_steps: u32,
    /// Minimum joint steps over the trailing evaluation window.
    pub window_min_steps: u32,
    pub conflict: bool,
    pub goal_assignment: Vec<Option<GoalId>>,
    pub duration: Duration,
}

/// Learners of one run.
#[derive(Debug, Clone)]
pub enum Learners {
    Goal(Vec<AgentBrain>),
    Ps(Vec<PsAgent>),
    Plain(Vec<PlainQAgent>),
}

impl Learners {
    pub fn new(config: &ExperimentConfig, maze: &Maze, seed: u64) -> Self {
        match config.algorithm {
            Algorithm::Drl | Algorithm::Pmrl => {
                let mode = if config.algorithm == Algorithm::Drl { Mode::Drl } else { Mode::Pmrl };
                let direction = DirectionParams { mode, ..config.direction };
                Learners::Goal(drl::new_brains(maze, config.learning, direction, seed))
            }
            Algorithm::Ps => Learners::Ps(ps::new_agents(maze, config.learning, seed)),
            Algorithm::PlainQ => Learners::Plain(plain::new_agents(maze, config.learning, seed)),
        }
    }

    pub fn iterate(&mut self, maze: &Maze) -> EpisodeRecord {
        match self {
            Learners::Goal(b) => drl::run_iteration(b, maze),
            Learners::Ps(a) => ps::run_iteration_ps(a, maze),
            Learners::Plain(a) => plain::run_iteration_plain(a, maze),
        }
    }

    pub fn qtables(&self) -> Vec<&QTable> {
        match self {
            Learners::Goal(b) => b.iter().map(|b| &b.qtable).collect(),
            Learners::Ps(a) => a.iter().map(|a| &a.qtable).collect(),
            Learners::Plain(a) => a.iter().map(|a| &a.qtable).collect(),
        }
    }
}

struct Greedy<'a>(&'a QTable);

impl Agent for Greedy<'_> {
    fn act(&mut self, state: Cell) -> Action {
        self.0.greedy_action(state)
    }
    fn observe(&mut self, _: &Observation) {}
}

/// Joint rollout with every agent acting greedily (fixed tie order).
pub fn greedy_evaluation(tables: &[&QTable], maze: &Maze, params: &LearningParams) -> EpisodeRecord {
    let mut agents: Vec<Greedy> = tables.iter().map(|q| Greedy(q)).collect();
    run_episode(maze, &mut agents, params.external_reward, params.max_step)
}

/// Header of the per-iteration episode log.
pub fn episode_log_header(n_goals: usize) -> String {
    let mut h =
        String::from("iteration,agent,g_sel,condition,arrival_goal,arrival_step,external_reward,internal_reward");
    for g in 0..n_goals {
        let _ = write!(h, ",bid_g{g}");
    }
    h
}

/// Episode log rows of one iteration. Learners without goal values leave
/// `g_sel`, `condition` and the bid columns empty.
pub fn episode_log_rows(iteration: u64, record: &EpisodeRecord, n_goals: usize, out: &mut String) {
    for (i, a) in record.agents.iter().enumerate() {
        let _ = write!(out, "{iteration},{i},");
        match &a.goal {
            Some(snap) => {
                let _ = write!(out, "{},{}", snap.g_sel, snap.condition_met);
            }
            None => out.push(','),
        }
        match a.arrival {
            Some(arr) => {
                let _ = write!(out, ",{},{}", arr.goal, arr.step);
            }
            None => out.push_str(",,"),
        }
        let _ = write!(out, ",{},{}", a.external_reward, a.learning_reward);
        match &a.goal {
            Some(snap) => {
                for b in &snap.bids {
                    let _ = write!(out, ",{b}");
                }
            }
            None => out.push_str(&",".repeat(n_goals)),
        }
        out.push('\n');
    }
}

/// Result of one seed: metrics plus the trained tables.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub metrics: RunMetrics,
    pub learners: Learners,
}

/// Trains one seed from scratch. When `log` is given, every iteration is
/// appended to it in the episode log format.
pub fn run_seed(config: &ExperimentConfig, maze: &Maze, seed: u64, mut log: Option<&mut dyn Write>) -> Result<SeedRun> {
    let start = Instant::now();
    let max_step = config.learning.max_step;
    let mut learners = Learners::new(config, maze, seed);
    let mut joint = Vec::with_capacity(config.iterations as usize);
    let mut buf = String::new();
    if let Some(w) = log.as_deref_mut() {
        writeln!(w, "{}", episode_log_header(maze.n_goals()))?;
    }
    for it in 0..config.iterations {
        let record = learners.iterate(maze);
        joint.push(joint_steps(&record, max_step));
        if let Some(w) = log.as_deref_mut() {
            buf.clear();
            episode_log_rows(it + 1, &record, maze.n_goals(), &mut buf);
            w.write_all(buf.as_bytes())?;
        }
    }
    let window = config.eval_window.min(config.iterations) as usize;
    let window_min_steps = joint[joint.len() - window..].iter().copied().min().unwrap_or(max_step);

    let eval = greedy_evaluation(&learners.qtables(), maze, &config.learning);
    let metrics = RunMetrics {
        seed,
        final_joint_steps: joint_steps(&eval, max_step),
        window_min_steps,
        conflict: has_conflict(&eval),
        goal_assignment: eval.agents.iter().map(|a| a.arrival.map(|arr| arr.goal)).collect(),
        joint_steps: joint,
        duration: start.elapsed(),
    };
    Ok(SeedRun { metrics, learners })
}

/// Worker count: `DIRL_THREADS` if set to a positive integer, otherwise all
/// available cores.
pub fn worker_threads() -> usize {
    std::env::var("DIRL_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` over `items` on a pool capped by [`worker_threads`]; output keeps
/// input order.
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(worker_threads()).build();
    match pool {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

/// Every seed of `config`, sorted by seed.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunMetrics>> {
    Ok(run_experiment_full(config)?.into_iter().map(|r| r.metrics).collect())
}

pub fn run_experiment_full(config: &ExperimentConfig) -> Result<Vec<SeedRun>> {
    config.validate()?;
    let maze = config.maze.load()?;
    oracle::optimal_assignment(&maze)?;
    let mut seeds = config.seeds.clone();
    seeds.sort_unstable();
    par_map(&seeds, |&seed| run_seed(config, &maze, seed, None)).into_iter().collect()
}

pub const RESULTS_CSV_HEADER: &str =
    "maze,algorithm,seed,final_joint_steps,window_min_steps,conflict,goal_assignment,duration_ms";

/// One row of the results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub maze: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub final_joint_steps: u32,
    pub window_min_steps: u32,
    pub conflict: bool,
    pub goal_assignment: Vec<Option<GoalId>>,
    pub duration_ms: u128,
}

impl ResultRow {
    pub fn new(maze: &str, algorithm: Algorithm, m: &RunMetrics) -> Self {
        ResultRow {
            maze: maze.to_string(),
            algorithm,
            seed: m.seed,
            final_joint_steps: m.final_joint_steps,
            window_min_steps: m.window_min_steps,
            conflict: m.conflict,
            goal_assignment: m.goal_assignment.clone(),
            duration_ms: m.duration.as_millis(),
        }
    }

    pub fn n_agents(&self) -> usize {
        self.goal_assignment.len()
    }

    fn assignment_field(&self) -> String {
        self.goal_assignment
            .iter()
            .map(|g| g.map_or_else(|| "-".to_string(), |g| g.to_string()))
            .collect::<Vec<_>>()
            .join(";")
    }
}

pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(RESULTS_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.maze,
            r.algorithm,
            r.seed,
            r.final_joint_steps,
            r.window_min_steps,
            r.conflict,
            r.assignment_field(),
            r.duration_ms
        );
    }
    out
}

pub fn parse_results_csv(text: &str) -> Result<Vec<ResultRow>, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == RESULTS_CSV_HEADER => {}
        Some((i, _)) => return Err(FormatError::Line { line: i + 1, msg: "unexpected results header".into() }),
        None => return Err(FormatError::Empty),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let bad = |what: &str| FormatError::Line { line: i + 1, msg: format!("bad {what}") };
        let f: Vec<&str> = line.trim().split(',').collect();
        let [maze, algo, seed, fin, win, conflict, assignment, ms] = f.as_slice() else {
            return Err(FormatError::Line { line: i + 1, msg: "expected 8 fields".into() });
        };
        let goal_assignment = assignment
            .split(';')
            .map(|g| if g == "-" { Ok(None) } else { GoalId::parse(g).map(Some).ok_or_else(|| bad("goal assignment")) })
            .collect::<Result<_, _>>()?;
        rows.push(ResultRow {
            maze: maze.to_string(),
            algorithm: algo.parse().map_err(|_| bad("algorithm"))?,
            seed: seed.parse().map_err(|_| bad("seed"))?,
            final_joint_steps: fin.parse().map_err(|_| bad("final_joint_steps"))?,
            window_min_steps: win.parse().map_err(|_| bad("window_min_steps"))?,
            conflict: conflict.parse().map_err(|_| bad("conflict"))?,
            goal_assignment,
            duration_ms: ms.parse().map_err(|_| bad("duration_ms"))?,
        });
    }
    if rows.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(rows)
}

/// Per maze and algorithm statistics over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryCell {
    pub maze: String,
    pub algorithm: Algorithm,
    pub n_agents: usize,
    pub seeds: usize,
    pub min_steps: u32,
    pub mean_steps: f64,
    pub success_rate: f64,
}

/// Comparison table grouped by agent count; mazes and algorithms keep their
/// order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub cells: Vec<SummaryCell>,
}

pub fn summarize(rows: &[ResultRow], max_step: u32) -> Summary {
    let mut cells: Vec<SummaryCell> = Vec::new();
    let mut sums: Vec<(u64, usize)> = Vec::new();
    for r in rows {
        let idx = cells.iter().position(|c| c.maze == r.maze && c.algorithm == r.algorithm).unwrap_or_else(|| {
            cells.push(SummaryCell {
                maze: r.maze.clone(),
                algorithm: r.algorithm,
                n_agents: r.n_agents(),
                seeds: 0,
                min_steps: u32::MAX,
                mean_steps: 0.0,
                success_rate: 0.0,
            });
            sums.push((0, 0));
            cells.len() - 1
        });
        let c = &mut cells[idx];
        c.seeds += 1;
        c.min_steps = c.min_steps.min(r.final_joint_steps);
        sums[idx].0 += r.final_joint_steps as u64;
        if r.final_joint_steps < max_step {
            sums[idx].1 += 1;
        }
    }
    for (c, (total, ok)) in cells.iter_mut().zip(sums) {
        c.mean_steps = total as f64 / c.seeds as f64;
        c.success_rate = ok as f64 / c.seeds as f64;
    }
    Summary { cells }
}

impl Summary {
    pub fn agent_counts(&self) -> Vec<usize> {
        let mut counts: Vec<usize> = self.cells.iter().map(|c| c.n_agents).collect();
        counts.sort_unstable();
        counts.dedup();
        counts
    }

    pub fn mazes(&self, n_agents: usize) -> Vec<&str> {
        let mut mazes: Vec<&str> = Vec::new();
        for c in self.cells.iter().filter(|c| c.n_agents == n_agents) {
            if !mazes.contains(&c.maze.as_str()) {
                mazes.push(&c.maze);
            }
        }
        mazes
    }

    pub fn algorithms(&self, n_agents: usize) -> Vec<Algorithm> {
        let mut algos = Vec::new();
        for c in self.cells.iter().filter(|c| c.n_agents == n_agents) {
            if !algos.contains(&c.algorithm) {
                algos.push(c.algorithm);
            }
        }
        algos
    }

    pub fn get(&self, maze: &str, algorithm: Algorithm) -> Option<&SummaryCell> {
        self.cells.iter().find(|c| c.maze == maze && c.algorithm == algorithm)
    }

    /// Minimum steps with rows = algorithm and columns = maze, one section
    /// per agent count introduced by a `# agents=N` line.
    pub fn table_csv(&self) -> String {
        let mut out = String::new();
        for (i, n) in self.agent_counts().into_iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let mazes = self.mazes(n);
            let _ = writeln!(out, "# agents={n}");
            let _ = writeln!(out, "algorithm,{}", mazes.join(","));
            for algo in self.algorithms(n) {
                out.push_str(algo.name());
                for m in &mazes {
                    match self.get(m, algo) {
                        Some(c) => {
                            let _ = write!(out, ",{}", c.min_steps);
                        }
                        None => out.push(','),
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn stats_csv(&self) -> String {
        let mut out = String::from("maze,algorithm,agents,seeds,min_steps,mean_steps,success_rate\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.3},{:.3}",
                c.maze, c.algorithm, c.n_agents, c.seeds, c.min_steps, c.mean_steps, c.success_rate
            );
        }
        out
    }
}

/// Convenience for callers holding an already loaded maze.
pub fn run_on_maze(config: &ExperimentConfig, maze: &Maze) -> Result<Vec<RunMetrics>> {
    config.validate()?;
    oracle::optimal_assignment(maze)?;
    let mut seeds = config.seeds.clone();
    seeds.sort_unstable();
    par_map(&seeds, |&seed| run_seed(config, maze, seed, None).map(|r| r.metrics)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::episode::AgentEpisode;
    use crate::mdp::Arrival;

    fn record(arrivals: &[Option<(usize, u32)>]) -> EpisodeRecord {
        EpisodeRecord {
            steps: 0,
            agents: arrivals
                .iter()
                .enumerate()
                .map(|(i, a)| AgentEpisode {
                    trajectory: vec![],
                    actions: vec![],
                    arrival: a.map(|(g, step)| Arrival { agent: i, goal: GoalId(g), step }),
                    external_reward: 0.0,
                    learning_reward: 0.0,
                    goal: None,
                })
                .collect(),
        }
    }

    #[test]
    fn joint_steps_cases() {
        assert_eq!(joint_steps(&record(&[Some((0, 3)), Some((1, 7))]), 100), 7);
        assert_eq!(joint_steps(&record(&[Some((0, 3)), Some((0, 7))]), 100), 100);
        assert_eq!(joint_steps(&record(&[Some((0, 3)), None]), 100), 100);
        assert!(has_conflict(&record(&[Some((0, 3)), Some((0, 7))])));
        assert!(!has_conflict(&record(&[Some((0, 3)), None])));
    }

    fn row(maze: &str, algorithm: Algorithm, seed: u64, steps: u32, agents: usize) -> ResultRow {
        ResultRow {
            maze: maze.into(),
            algorithm,
            seed,
            final_joint_steps: steps,
            window_min_steps: steps,
            conflict: steps == 100,
            goal_assignment: (0..agents).map(|g| Some(GoalId(g))).collect(),
            duration_ms: 1,
        }
    }

    #[test]
    fn summary_takes_minimum_over_seeds() {
        let rows: Vec<_> =
            [7, 7, 8].iter().enumerate().map(|(s, &t)| row("m1", Algorithm::Drl, s as u64, t, 2)).collect();
        let s = summarize(&rows, 100);
        let c = s.get("m1", Algorithm::Drl).unwrap();
        assert_eq!(c.min_steps, 7);
        assert!((c.mean_steps - 22.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.success_rate, 1.0);

        let rows: Vec<_> = (0..10).map(|s| row("m1", Algorithm::Ps, s, 100, 5)).collect();
        let s = summarize(&rows, 100);
        assert_eq!(s.get("m1", Algorithm::Ps).unwrap().min_steps, 100);
        assert_eq!(s.get("m1", Algorithm::Ps).unwrap().success_rate, 0.0);
    }

    #[test]
    fn table_shapes() {
        let single = summarize(&[row("m", Algorithm::Drl, 1, 5, 2)], 100);
        assert_eq!(single.table_csv(), "# agents=2\nalgorithm,m\nDRL,5\n");

        let mut rows = Vec::new();
        for m in 0..10 {
            rows.push(row(&format!("maze{m}"), Algorithm::Drl, 1, 5, 2));
            rows.push(row(&format!("maze{m}"), Algorithm::Ps, 1, 6, 2));
        }
        let t = summarize(&rows, 100).table_csv();
        let lines: Vec<_> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1].split(',').count(), 11);

        rows.push(row("big", Algorithm::Drl, 1, 9, 5));
        let s = summarize(&rows, 100);
        assert_eq!(s.agent_counts(), vec![2, 5]);
        let t = s.table_csv();
        assert!(t.contains("\n\n# agents=5\nalgorithm,big\nDRL,9\n"), "{t}");
    }

    #[test]
    fn results_csv_round_trip() {
        let mut rows = vec![row("m", Algorithm::Drl, 3, 5, 2), row("m", Algorithm::PlainQ, 4, 100, 2)];
        rows[1].goal_assignment = vec![Some(GoalId(0)), None];
        let text = results_csv(&rows);
        assert!(text.starts_with(RESULTS_CSV_HEADER));
        assert!(text.contains("m,PlainQ,4,100,100,true,G0;-,1"));
        assert_eq!(parse_results_csv(&text).unwrap(), rows);
        assert!(parse_results_csv("").is_err());
    }

    #[test]
    fn config_validation() {
        let maze = Maze::parse("3 1\nA.0\n").unwrap();
        let src = MazeSource::Inline { name: "line".into(), maze };
        let mut c = ExperimentConfig::new(Algorithm::Drl, src, 50);
        assert!(c.validate().is_ok());
        c.seeds.clear();
        assert!(matches!(c.validate(), Err(ConfigError::NoSeeds)));
        c.seeds = vec![1];
        c.eval_window = 60;
        assert!(matches!(c.validate(), Err(ConfigError::WindowTooLarge { .. })));
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("sarsa".parse::<Algorithm>().is_err());
    }

    #[test]
    fn seed_runs_are_reproducible() {
        let maze = Maze::parse("4 3\nA..0\n.#..\nB..1\n").unwrap();
        for algo in Algorithm::ALL {
            let src = MazeSource::Inline { name: "m".into(), maze: maze.clone() };
            let mut c = ExperimentConfig::new(algo, src, 300);
            c.seeds = vec![2, 1];
            let a = run_experiment(&c).unwrap();
            let b = run_experiment(&c).unwrap();
            assert_eq!(a.iter().map(|m| m.seed).collect::<Vec<_>>(), vec![1, 2]);
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.joint_steps, y.joint_steps);
                assert_eq!(x.final_joint_steps, y.final_joint_steps);
                assert_eq!(x.goal_assignment, y.goal_assignment);
                if x.conflict {
                    assert_eq!(x.final_joint_steps, 100);
                }
            }
        }
    }
}

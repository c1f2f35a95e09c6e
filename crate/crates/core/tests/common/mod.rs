//! Helpers shared by the integration tests: an episode-log reader and an
//! independent replay of the goal-value recurrence from logged quantities.

#![allow(dead_code)]

use dirl_core::drl::{AgentBrain, Mode};
use dirl_core::episode::{Agent, Observation};
use dirl_core::{Action, Cell};

#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub iteration: u64,
    pub agent: usize,
    pub g_sel: Option<usize>,
    pub condition: Option<bool>,
    pub arrival: Option<(usize, u32)>,
    pub external_reward: f64,
    pub internal_reward: f64,
    pub bids: Vec<f64>,
}

fn goal(field: &str) -> usize {
    field.strip_prefix('G').and_then(|g| g.parse().ok()).unwrap_or_else(|| panic!("bad goal field {field:?}"))
}

pub fn parse_episode_log(text: &str) -> Vec<LogRow> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().expect("log header").split(',').collect();
    assert_eq!(
        &header[..8],
        [
            "iteration",
            "agent",
            "g_sel",
            "condition",
            "arrival_goal",
            "arrival_step",
            "external_reward",
            "internal_reward"
        ]
    );
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f.len(), header.len(), "{line}");
            let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
            LogRow {
                iteration: f[0].parse().unwrap(),
                agent: f[1].parse().unwrap(),
                g_sel: opt(f[2]).map(|s| goal(&s)),
                condition: opt(f[3]).map(|s| s.parse().unwrap()),
                arrival: opt(f[4]).map(|s| (goal(&s), f[5].parse().unwrap())),
                external_reward: f[6].parse().unwrap(),
                internal_reward: f[7].parse().unwrap(),
                bids: f[8..].iter().filter(|s| !s.is_empty()).map(|s| s.parse().unwrap()).collect(),
            }
        })
        .collect()
}

/// Per-agent state rebuilt from the log alone.
#[derive(Debug, Clone)]
struct Replay {
    t: Vec<Option<u32>>,
    n: Vec<u64>,
    reward_sum: Vec<f64>,
    reward_count: Vec<u64>,
    bids: Vec<f64>,
}

/// Outcome of replaying a log.
#[derive(Debug, Default)]
pub struct ReplayReport {
    pub rows: usize,
    pub max_bid_error: f64,
    pub condition_mismatches: usize,
    /// Largest violation of `0 <= mean reward <= r` seen at any goal.
    pub max_mean_violation: f64,
}

/// Replays the goal-value recurrence for every agent in `rows`.
///
/// Minimum steps come from logged arrivals, update counts from logged goal
/// selections, and the condition is recomputed from logged external rewards
/// and compared with the logged flag.
pub fn replay_bids(rows: &[LogRow], n_goals: usize, r: f64, threshold: f64, mode: Mode) -> ReplayReport {
    let n_agents = rows.iter().map(|row| row.agent + 1).max().unwrap_or(0);
    let fresh = Replay {
        t: vec![None; n_goals],
        n: vec![0; n_goals],
        reward_sum: vec![0.0; n_goals],
        reward_count: vec![0; n_goals],
        bids: vec![0.0; n_goals],
    };
    let mut agents = vec![fresh; n_agents];
    let mut report = ReplayReport::default();
    for row in rows {
        let st = &mut agents[row.agent];
        if let Some((g, step)) = row.arrival {
            st.t[g] = Some(st.t[g].map_or(step, |t| t.min(step)));
            st.reward_sum[g] += row.external_reward;
            st.reward_count[g] += 1;
        }
        for g in 0..n_goals {
            if st.reward_count[g] > 0 {
                let mean = st.reward_sum[g] / st.reward_count[g] as f64;
                report.max_mean_violation = report.max_mean_violation.max(-mean).max(mean - r);
            }
        }
        let g = row.g_sel.expect("goal learner rows carry g_sel");
        st.n[g] += 1;
        let first = row.arrival.map(|(a, _)| a) == Some(g) && row.external_reward > 0.0;
        let mean_ok = st.reward_count[g] > 0 && st.reward_sum[g] / st.reward_count[g] as f64 > threshold;
        let cond = match mode {
            Mode::Drl => first && mean_ok,
            Mode::Pmrl => first,
        };
        if Some(cond) != row.condition {
            report.condition_mismatches += 1;
        }
        let target = if cond { st.t[g].expect("credited goal was reached") as f64 } else { 0.0 };
        let n = st.n[g] as f64;
        st.bids[g] = (st.bids[g] * (n - 1.0) + target) / n;
        for (want, got) in st.bids.iter().zip(&row.bids) {
            report.max_bid_error = report.max_bid_error.max((want - got).abs());
        }
        assert_eq!(row.bids.len(), n_goals);
        report.rows += 1;
    }
    report
}

/// Replays a fixed action list, one action per call, then repeats the last.
#[derive(Debug, Clone)]
pub struct Scripted {
    pub actions: Vec<Action>,
    pub cursor: usize,
}

impl Scripted {
    pub fn new(actions: Vec<Action>) -> Self {
        Scripted { actions, cursor: 0 }
    }
}

impl Agent for Scripted {
    fn begin_episode(&mut self) {
        self.cursor = 0;
    }
    fn act(&mut self, _: Cell) -> Action {
        let a = self.actions[self.cursor.min(self.actions.len() - 1)];
        self.cursor += 1;
        a
    }
    fn observe(&mut self, _: &Observation) {}
}

/// Minimum makespan over every injective agent-to-goal map, found by
/// counting through all `goals^agents` maps.
pub fn enumerated_makespan(dist: &[Vec<Option<u32>>], n_goals: usize) -> Option<(u32, Vec<usize>)> {
    let n = dist.len();
    let total = n_goals.pow(n as u32);
    let mut best: Option<(u32, Vec<usize>)> = None;
    for code in 0..total {
        let mut map = Vec::with_capacity(n);
        let mut x = code;
        for _ in 0..n {
            map.push(x % n_goals);
            x /= n_goals;
        }
        let mut seen = map.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n {
            continue;
        }
        let Some(span) = map.iter().enumerate().map(|(a, &g)| dist[a][g]).try_fold(0, |m, d| d.map(|d| m.max(d)))
        else {
            continue;
        };
        let better = match &best {
            None => true,
            Some((b, bm)) => span < *b || (span == *b && map < *bm),
        };
        if better {
            best = Some((span, map));
        }
    }
    best
}

/// One agent of a mixed team. `Poisoned` acts from a script but still
/// feeds its observations to a brain whose state holds sentinel values.
pub enum Slot<'a> {
    Brain(&'a mut AgentBrain),
    Script(Scripted),
    Poisoned(&'a mut AgentBrain, Scripted),
}

impl Agent for Slot<'_> {
    fn begin_episode(&mut self) {
        match self {
            Slot::Brain(b) => b.begin_episode(),
            Slot::Script(s) => s.begin_episode(),
            Slot::Poisoned(b, s) => {
                b.begin_episode();
                s.begin_episode();
            }
        }
    }
    fn act(&mut self, state: Cell) -> Action {
        match self {
            Slot::Brain(b) => b.act(state),
            Slot::Script(s) | Slot::Poisoned(_, s) => s.act(state),
        }
    }
    fn observe(&mut self, obs: &Observation) {
        match self {
            Slot::Brain(b) | Slot::Poisoned(b, _) => b.observe(obs),
            Slot::Script(s) => s.observe(obs),
        }
    }
}

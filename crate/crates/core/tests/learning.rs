mod common;

use common::{parse_episode_log, replay_bids, Scripted, Slot};
use dirl_core::drl::{AgentBrain, DirectionParams, Mode};
use dirl_core::episode::{agent_rng, run_episode};
use dirl_core::experiment::{run_seed, Algorithm, ExperimentConfig, MazeSource};
use dirl_core::learner::LearningParams;
use dirl_core::ps::{self, EpisodeTrace};
use dirl_core::suite::conflict_maze;
use dirl_core::{defaults, Action, GoalId, Maze};

fn logged_run(algorithm: Algorithm, maze: &Maze, iterations: u64, seed: u64) -> String {
    let config =
        ExperimentConfig::new(algorithm, MazeSource::Inline { name: "m".into(), maze: maze.clone() }, iterations);
    let mut log = Vec::new();
    run_seed(&config, maze, seed, Some(&mut log)).unwrap();
    String::from_utf8(log).unwrap()
}

#[test]
fn logged_bids_follow_the_recurrence() {
    let maze = conflict_maze();
    for (algorithm, mode) in [(Algorithm::Drl, Mode::Drl), (Algorithm::Pmrl, Mode::Pmrl)] {
        for seed in [1, 2] {
            let rows = parse_episode_log(&logged_run(algorithm, &maze, 3_000, seed));
            let report = replay_bids(&rows, 2, defaults::EXTERNAL_REWARD, defaults::THRESHOLD, mode);
            assert_eq!(report.rows, 6_000);
            assert_eq!(report.condition_mismatches, 0, "{algorithm:?} seed {seed}");
            assert!(report.max_bid_error <= 1e-12, "{algorithm:?} seed {seed}: {}", report.max_bid_error);
            assert!(report.max_mean_violation <= 0.0);
        }
    }
}

#[test]
fn logged_bids_on_a_five_agent_maze() {
    let maze = dirl_core::suite::FIVE_AGENT[0].maze();
    let rows = parse_episode_log(&logged_run(Algorithm::Drl, &maze, 400, 9));
    let report = replay_bids(&rows, 5, defaults::EXTERNAL_REWARD, defaults::THRESHOLD, Mode::Drl);
    assert_eq!(report.rows, 2_000);
    assert_eq!(report.condition_mismatches, 0);
    assert!(report.max_bid_error <= 1e-12);
}

/// Two PS agents whose tables both point at goal 0 and nowhere else. Without
/// exploration they tie there every episode, so no credit ever arrives and
/// the visited values only decay.
#[test]
fn ps_without_exploration_stays_locked_on_a_shared_goal() {
    let maze = conflict_maze();
    let params = LearningParams { epsilon: 0.0, ..LearningParams::default() };
    let mut agents = ps::new_agents(&maze, params, 4);
    let (a, b) = (maze.starts()[0], maze.starts()[1]);
    agents[0].qtable.set(a, Action::Down, 1.0);
    agents[1].qtable.set(b, Action::Right, 1.0);
    let window = 300;
    for k in 1..=window {
        let rec = ps::run_iteration_ps(&mut agents, &maze);
        assert!(rec.agents.iter().all(|x| x.learning_reward == 0.0 && x.external_reward == 0.0));
        assert_eq!(rec.agents[0].actions, [Action::Down]);
        assert_eq!(rec.agents[1].actions, [Action::Right]);
        let expected = 0.9f64.powi(k);
        assert!((agents[0].qtable.get(a, Action::Down) - expected).abs() < 1e-12);
        assert!((agents[1].qtable.get(b, Action::Right) - expected).abs() < 1e-12);
    }
    assert_eq!(agents[0].trace, EpisodeTrace { steps: vec![(a, Action::Down)], terminal_step: 1 });
}

/// A rival one step from goal 0 takes it every episode. The learner, which
/// once reached goal 0 first in 3 steps, sees the value of goal 0 fall as
/// 3 / n and eventually switches to goal 1.
#[test]
fn goal_value_decays_when_always_beaten() {
    let maze = Maze::parse("5 2\nA..0B\n....1\n").unwrap();
    let mut brain = AgentBrain::new(&maze, LearningParams::default(), DirectionParams::default(), agent_rng(5, 0));
    {
        let g0 = brain.stats.get_mut(GoalId(0));
        g0.bid = 3.0;
        g0.bid_updates = 1;
        g0.min_steps = Some(3);
        g0.reward_sum = 10.0;
        g0.reward_count = 1;
    }
    brain.g_sel = GoalId(0);
    let mut seen_g0 = Vec::new();
    let mut late_g1 = 0;
    for it in 0..2_000 {
        let mut slots = [Slot::Brain(&mut brain), Slot::Script(Scripted::new(vec![Action::Left]))];
        let rec = run_episode(&maze, &mut slots, defaults::EXTERNAL_REWARD, defaults::MAX_STEP);
        drop(slots);
        assert_eq!(rec.agents[1].arrival.map(|a| (a.goal, a.step)), Some((GoalId(0), 1)));
        let update = brain.finish_episode();
        if update.goal == GoalId(0) {
            assert!(!update.condition_met);
            let rec0 = brain.stats.get(GoalId(0));
            assert!((rec0.bid - 3.0 / rec0.bid_updates as f64).abs() < 1e-12);
            seen_g0.push(rec0.bid);
        }
        if it >= 1_000 && update.goal == GoalId(1) {
            late_g1 += 1;
        }
    }
    assert!(seen_g0.windows(2).all(|w| w[1] < w[0]));
    assert!(brain.stats.get(GoalId(1)).bid > brain.stats.get(GoalId(0)).bid);
    // Goal 1 is picked greedily except for random reselection.
    assert!(late_g1 > 850, "{late_g1}");
}

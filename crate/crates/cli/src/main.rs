use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use dirl_core::experiment::{
    par_map, parse_results_csv, results_csv, run_seed, summarize, Algorithm, ExperimentConfig, MazeSource, Preset,
    ResultRow, RESULTS_CSV_HEADER,
};
use dirl_core::learner::{dump_qtables, load_qtables, QTable};
use dirl_core::{oracle, render, GeneratorSpec, Maze};

mod config;

use config::FileConfig;

#[derive(Parser, Debug)]
#[command(name = "dirl", version, about = "Decentralized multi-agent Q-learning on grid mazes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random maze and print its optimal makespan.
    Gen(GenArgs),
    /// Train an algorithm on a maze over several seeds.
    Run(RunArgs),
    /// Draw learned Q-tables as text or SVG.
    Render(RenderArgs),
    /// Summarize a directory of result CSVs.
    Table(TableArgs),
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    agents: usize,
    /// Grid size as WIDTHxHEIGHT.
    #[arg(long, value_parser = parse_size)]
    size: (usize, usize),
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    /// Write the maze here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// TOML file with defaults for any of the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    algo: Option<Algorithm>,
    #[arg(long)]
    maze: Option<PathBuf>,
    #[arg(long)]
    preset: Option<Preset>,
    /// Number of seeds; runs use seeds 1..=N.
    #[arg(long)]
    seeds: Option<u64>,
    /// Overrides the preset's iteration count.
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long)]
    eval_window: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    goal_random_prob: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write one per-iteration log per seed.
    #[arg(long)]
    episode_logs: bool,
    /// Also write the trained Q-tables of every seed.
    #[arg(long)]
    dump_q: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(clap::Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    maze: PathBuf,
    /// Q-table CSV as written by `run --dump-q`.
    #[arg(long)]
    q: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    #[arg(long, default_value_t = dirl_core::defaults::MAX_STEP)]
    max_step: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct TableArgs {
    /// Directory holding result CSVs.
    dir: PathBuf,
    /// Write the minimum-steps table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-cell statistics (min, mean, success rate).
    #[arg(long)]
    stats: Option<PathBuf>,
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let dim = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("bad dimension {v:?}"));
    Ok((dim(w)?, dim(h)?))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<()> {
    let spec = GeneratorSpec {
        seed: args.seed,
        n_agents: args.agents,
        width: args.size.0,
        height: args.size.1,
        wall_density: args.density,
    };
    let maze = Maze::generate(&spec)?;
    let makespan = oracle::optimal_assignment(&maze)?.makespan;
    emit(args.out.as_deref(), &maze.to_string())?;
    if args.out.is_some() {
        println!("makespan {makespan}");
    } else {
        eprintln!("makespan {makespan}");
    }
    Ok(())
}

/// Flags merged over the optional config file.
struct RunPlan {
    config: ExperimentConfig,
    maze: Maze,
    out: PathBuf,
    episode_logs: bool,
    dump_q: bool,
}

fn plan_run(args: RunArgs) -> anyhow::Result<RunPlan> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let algo = match (args.algo, &file.algo) {
        (Some(a), _) => a,
        (None, Some(s)) => s.parse().map_err(anyhow::Error::msg)?,
        (None, None) => bail!("--algo is required"),
    };
    let maze_path = args.maze.or(file.maze).context("--maze is required")?;
    let source = MazeSource::File(maze_path);
    let maze = source.load().with_context(|| format!("loading maze {}", source.name()))?;
    let preset = match (args.preset, &file.preset) {
        (Some(p), _) => p,
        (None, Some(s)) => s.parse().map_err(anyhow::Error::msg)?,
        (None, None) => Preset::Desk,
    };
    let iterations = args.iterations.or(file.iterations).unwrap_or_else(|| preset.iterations(maze.n_agents()));
    let mut config = ExperimentConfig::new(algo, source, iterations);
    let seeds = args.seeds.or(file.seeds).unwrap_or(dirl_core::defaults::SEEDS);
    config.seeds = (1..=seeds).collect();
    if let Some(w) = args.eval_window.or(file.eval_window) {
        config.eval_window = w;
    }
    let l = &mut config.learning;
    l.alpha = args.alpha.or(file.alpha).unwrap_or(l.alpha);
    l.gamma = args.gamma.or(file.gamma).unwrap_or(l.gamma);
    l.epsilon = args.epsilon.or(file.epsilon).unwrap_or(l.epsilon);
    let d = &mut config.direction;
    d.delta = args.delta.or(file.delta).unwrap_or(d.delta);
    d.threshold = args.threshold.or(file.threshold).unwrap_or(d.threshold);
    d.goal_random_prob = args.goal_random_prob.or(file.goal_random_prob).unwrap_or(d.goal_random_prob);
    config.validate()?;
    Ok(RunPlan {
        config,
        maze,
        out: args.out.or(file.out).unwrap_or_else(|| PathBuf::from("results")),
        episode_logs: args.episode_logs || file.episode_logs.unwrap_or(false),
        dump_q: args.dump_q || file.dump_q.unwrap_or(false),
    })
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let plan = plan_run(args)?;
    let RunPlan { config, maze, out, .. } = &plan;
    let makespan = oracle::optimal_assignment(maze)?.makespan;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let name = config.maze.name();
    let stem = format!("{name}_{}", config.algorithm.name().to_ascii_lowercase());

    let mut seeds = config.seeds.clone();
    seeds.sort_unstable();
    let runs = par_map(&seeds, |&seed| -> anyhow::Result<_> {
        let run = if plan.episode_logs {
            let path = out.join(format!("{stem}_seed{seed}_episodes.csv"));
            let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
            let run = run_seed(config, maze, seed, Some(&mut w))?;
            w.flush()?;
            run
        } else {
            run_seed(config, maze, seed, None)?
        };
        if plan.dump_q {
            let tables: Vec<QTable> = run.learners.qtables().into_iter().cloned().collect();
            fs::write(out.join(format!("{stem}_seed{seed}_q.csv")), dump_qtables(&tables, maze))?;
        }
        Ok(run.metrics)
    });
    let mut rows = Vec::with_capacity(runs.len());
    for run in runs {
        rows.push(ResultRow::new(&name, config.algorithm, &run?));
    }
    let path = out.join(format!("{stem}.csv"));
    fs::write(&path, results_csv(&rows)).with_context(|| format!("writing {}", path.display()))?;

    let solved = rows.iter().filter(|r| r.final_joint_steps < config.learning.max_step).count();
    let best = rows.iter().map(|r| r.final_joint_steps).min().unwrap_or(config.learning.max_step);
    println!(
        "{name} {}: {} iterations, {solved}/{} seeds conflict-free, min steps {best} (optimal {makespan}) -> {}",
        config.algorithm,
        config.iterations,
        rows.len(),
        path.display()
    );
    Ok(())
}

fn cmd_render(args: RenderArgs) -> anyhow::Result<()> {
    let maze =
        Maze::parse(&fs::read_to_string(&args.maze).with_context(|| format!("reading {}", args.maze.display()))?)?;
    let text = fs::read_to_string(&args.q).with_context(|| format!("reading {}", args.q.display()))?;
    let tables = load_qtables(&text, &maze)?;
    let drawn = match args.format {
        Format::Ascii => render::render_ascii(&tables, &maze, args.max_step),
        Format::Svg => render::render_svg(&tables, &maze, args.max_step),
    };
    emit(args.out.as_deref(), &drawn)
}

fn cmd_table(args: TableArgs) -> anyhow::Result<()> {
    let mut paths: Vec<PathBuf> = fs::read_dir(&args.dir)
        .with_context(|| format!("reading {}", args.dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "csv"));
    paths.sort();
    let mut rows = Vec::new();
    for path in &paths {
        let text = fs::read_to_string(path)?;
        if text.lines().next().map(str::trim) != Some(RESULTS_CSV_HEADER) {
            continue;
        }
        rows.extend(parse_results_csv(&text).with_context(|| format!("parsing {}", path.display()))?);
    }
    if rows.is_empty() {
        bail!("no result CSVs in {}", args.dir.display());
    }
    let summary = summarize(&rows, dirl_core::defaults::MAX_STEP);
    emit(args.out.as_deref(), &summary.table_csv())?;
    if let Some(stats) = &args.stats {
        fs::write(stats, summary.stats_csv()).with_context(|| format!("writing {}", stats.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Render(a) => cmd_render(a),
        Command::Table(a) => cmd_table(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

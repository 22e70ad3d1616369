mod benchmark;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use pto_core::planner::PlanReport;
use pto_core::{
    evaluate_path_tree_cost, load_environment, plan, validate_path_tree, Environment, PathTree,
    PlannerConfig, SamplerConfig, SamplerKind,
};

/// Malformed input: scenario, tree, or flags.
const EXIT_BAD_INPUT: u8 = 1;
/// No complete path tree within the iteration budget.
const EXIT_UNSOLVED: u8 = 3;
/// A path tree failed validation.
const EXIT_INVALID_TREE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pto",
    version,
    about = "Path tree planning under partial observability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a path tree and write it as JSON.
    Plan {
        #[command(flatten)]
        planner: PlannerArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tree output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan over several seeds and iteration budgets and report CSV rows.
    Benchmark {
        #[command(flatten)]
        planner: PlannerArgs,
        /// Number of seeds, starting at `--seed`.
        #[arg(long, default_value_t = 12)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check a path tree for completeness, edge validity and belief consistency.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Draw a scenario and a path tree as SVG.
    Render {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        /// SVG output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplerArg {
    Uniform,
    Camera,
}

#[derive(Args)]
struct PlannerArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Accepted samples for the random graph; a comma list in `benchmark`.
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    iterations: Vec<usize>,
    #[arg(long, value_enum, default_value_t = SamplerArg::Uniform)]
    sampler: SamplerArg,
    #[arg(long, default_value_t = 0.2)]
    goal_bias: f64,
    #[arg(long, default_value_t = 0.5)]
    camera_fraction: f64,
    /// Connection radius.
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    /// Motion-check spacing; half the robot radius by default.
    #[arg(long)]
    resolution: Option<f64>,
    #[arg(long, default_value_t = 100)]
    simplify_rounds: usize,
}

impl PlannerArgs {
    fn config(&self, iterations: usize, seed: u64) -> PlannerConfig {
        PlannerConfig {
            iterations,
            radius: self.radius,
            resolution: self.resolution,
            sampler: SamplerConfig {
                kind: match self.sampler {
                    SamplerArg::Uniform => SamplerKind::Uniform,
                    SamplerArg::Camera => SamplerKind::CameraBased,
                },
                goal_bias: self.goal_bias,
                camera_fraction: self.camera_fraction,
                seed,
                ..SamplerConfig::default()
            },
            simplify_rounds: self.simplify_rounds,
        }
    }
}

/// Error carrying the process exit code.
#[derive(Debug)]
struct Exit(u8, anyhow::Error);

macro_rules! bad_input_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Exit {
            fn from(e: $t) -> Self {
                Exit(EXIT_BAD_INPUT, e.into())
            }
        }
    )*};
}

bad_input_from!(anyhow::Error, pto_core::Error, std::io::Error);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PTO_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Plan { planner, seed, out } => run_plan(&planner, seed, out.as_deref()),
        Command::Benchmark {
            planner,
            seeds,
            seed,
            csv,
        } => {
            if seeds == 0 {
                return Err(anyhow::anyhow!("--seeds must be at least 1").into());
            }
            let env = load(&planner.scenario)?;
            let records = benchmark::run(&env, &planner, seed..seed + seeds, &planner.iterations)?;
            match csv {
                Some(path) => {
                    let file = std::fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    benchmark::write_csv(file, &records)?;
                }
                None => benchmark::write_csv(std::io::stdout().lock(), &records)?,
            }
            Ok(())
        }
        Command::Validate {
            scenario,
            tree,
            resolution,
        } => {
            let env = load(&scenario)?;
            let tree = load_tree(&tree, &env)?;
            let report =
                validate_path_tree(&tree, &env, resolution.unwrap_or(env.default_resolution()));
            for (name, check) in [
                ("completeness", &report.complete),
                ("edge validity", &report.valid_edges),
                ("belief consistency", &report.consistent_beliefs),
            ] {
                println!("{name}: {}", if check.passed() { "pass" } else { "FAIL" });
                for v in &check.violations {
                    println!("  {v}");
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Exit(
                    EXIT_INVALID_TREE,
                    anyhow::anyhow!("path tree is invalid"),
                ))
            }
        }
        Command::Render {
            scenario,
            tree,
            out,
        } => {
            let env = load(&scenario)?;
            let tree = load_tree(&tree, &env)?;
            let svg = render::render_svg(&env, &tree);
            match out {
                Some(path) => std::fs::write(&path, svg)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{svg}"),
            }
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<Environment> {
    load_environment(path).with_context(|| format!("loading scenario {}", path.display()))
}

/// Loads a tree and checks that it belongs to `env`.
fn load_tree(path: &Path, env: &Environment) -> anyhow::Result<PathTree> {
    let tree =
        PathTree::load(path).with_context(|| format!("loading path tree {}", path.display()))?;
    if let Some(v) = tree
        .vertices()
        .iter()
        .position(|v| v.belief.len() != env.num_hypotheses())
    {
        bail!(
            "vertex {v} has a belief over {} worlds but the scenario has {}",
            tree.vertex(v).belief.len(),
            env.num_hypotheses()
        );
    }
    Ok(tree)
}

fn run_plan(args: &PlannerArgs, seed: u64, out: Option<&Path>) -> Result<(), Exit> {
    let env = load(&args.scenario)?;
    let [iterations] = args.iterations[..] else {
        return Err(anyhow::anyhow!("plan takes a single --iterations value").into());
    };
    let report = plan(&env, &args.config(iterations, seed))?;
    print_timings(&report);
    let Some(tree) = &report.tree else {
        return Err(Exit(
            EXIT_UNSOLVED,
            anyhow::anyhow!("no complete path tree within {iterations} iterations"),
        ));
    };
    let cost = evaluate_path_tree_cost(tree, &env.initial_belief, env.angular_weight)?;
    eprintln!(
        "expected cost: {cost:.6} (before simplification {:.6})",
        report.start_cost
    );
    let json = tree.to_json_string()? + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
            info!("wrote {}", path.display());
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn print_timings(report: &PlanReport) {
    let t = &report.times;
    let total = t.total.as_secs_f64();
    for (name, d) in [
        ("random graph", t.random_graph),
        ("belief graph", t.belief_graph),
        ("costs", t.costs),
        ("extraction", t.extraction),
        ("simplification", t.simplification),
    ] {
        let s = d.as_secs_f64();
        let pct = if total > 0.0 { 100.0 * s / total } else { 0.0 };
        eprintln!("{name:>15}: {s:9.4} s {pct:5.1} %");
    }
    eprintln!("{:>15}: {total:9.4} s", "total");
    let c = &report.counts;
    eprintln!(
        "random graph {} vertices / {} edges; belief graph {} beliefs, {} vertices, {} movement / {} observation edges",
        c.random_vertices, c.random_edges, c.beliefs, c.belief_vertices, c.movement_edges, c.observation_edges
    );
}

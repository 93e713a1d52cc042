//! `omm`: run, generate, verify and bound matroid bandit experiments.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matroid_bandit::config::{EnvironmentSpec, InstanceSpec, MatroidSpec, RunConfig};
use matroid_bandit::greedy::evaluate_modular;
use matroid_bandit::harness::gaps::gap_free_bound;
use matroid_bandit::harness::instances::{
    generate_lower_bound_instance, random_graphic, random_linear, random_reward_rows,
    random_transversal,
};
use matroid_bandit::harness::loaders::{
    format_bipartite, format_edge_list, format_feature_matrix, format_reward_rows,
};
use matroid_bandit::harness::{mean_at, run_episodes};
use matroid_bandit::matroid::Family;
use matroid_bandit::report::{summary_episodes, write_outputs, RunManifest};
use matroid_bandit::verify::verify_instance;
use matroid_bandit::{Error, PolicySpec};

const OUTPUT_DIR_ENV: &str = "OMM_OUTPUT_DIR";

#[derive(Parser)]
#[command(name = "omm", version, about = "Matroid bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config and write traces.csv, summary.csv and manifest.toml.
    Run {
        /// Run config, or a manifest from an earlier run.
        config: PathBuf,
        /// Output directory; overrides the config and $OMM_OUTPUT_DIR.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic instance and a config that runs it.
    Generate(GenerateArgs),
    /// Run the invariant suites against a config's instance.
    Verify {
        config: PathBuf,
        /// Random instances per matroid family.
        #[arg(long, default_value_t = 40)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print regret bounds for a config's instance.
    Bounds {
        config: PathBuf,
        /// Horizon to evaluate at; defaults to the config's.
        #[arg(long)]
        horizon: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    /// Capacity-one partition blocks with equal gaps.
    Partition,
    Uniform,
    /// Random connected graph with latency weights.
    Graphic,
    /// Random bipartite graph with Bernoulli weights.
    Transversal,
    /// Random 0/1 feature vectors with reward rows.
    Linear,
}

#[derive(clap::Args)]
struct GenerateArgs {
    family: GenFamily,
    /// Directory for the generated files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Number of items (partition, uniform, linear).
    #[arg(long = "L", default_value_t = 20)]
    items: usize,
    /// Rank (partition, uniform).
    #[arg(long = "K", default_value_t = 4)]
    rank: usize,
    /// Gap between the best and every other item of a block (partition).
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 20)]
    vertices: usize,
    #[arg(long, default_value_t = 50)]
    edges: usize,
    /// Largest expected latency (graphic).
    #[arg(long, default_value_t = 20.0)]
    max_latency: f64,
    /// Left vertices (transversal).
    #[arg(long, default_value_t = 30)]
    left: usize,
    /// Right vertices (transversal).
    #[arg(long, default_value_t = 10)]
    right: usize,
    /// Edge or nonzero probability (transversal, linear).
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    /// Feature dimension (linear).
    #[arg(long, default_value_t = 8)]
    dimension: usize,
    /// Reward rows (linear).
    #[arg(long, default_value_t = 500)]
    rows: usize,
    /// Seed for the instance itself.
    #[arg(long, default_value_t = 1)]
    instance_seed: u64,
    /// Run seed written to the config.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    horizon: u64,
    #[arg(long, default_value_t = 20)]
    replications: usize,
    /// Add per-episode instrumentation to the generated config.
    #[arg(long)]
    instrument: bool,
}

enum Failure {
    Validation(String),
    Invariants,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Run { config, output } => run(&config, output),
        Command::Generate(args) => generate(&args),
        Command::Verify {
            config,
            cases,
            seed,
        } => verify(&config, cases, seed),
        Command::Bounds { config, horizon } => bounds(&config, horizon),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invariants) => ExitCode::from(2),
    }
}

/// Reads a run config; a manifest from an earlier run works too.
fn load_config(path: &Path) -> Result<RunConfig, Error> {
    match RunConfig::from_file(path) {
        Ok(cfg) => Ok(cfg),
        Err(first) => {
            let Ok(text) = std::fs::read_to_string(path) else {
                return Err(first);
            };
            match RunManifest::from_toml(&text) {
                Ok(manifest) => {
                    // manifests record absolute paths
                    let cfg = manifest.config;
                    cfg.validate()?;
                    Ok(cfg)
                }
                Err(_) => Err(first),
            }
        }
    }
}

fn run(config: &Path, output: Option<PathBuf>) -> Result<(), Failure> {
    let mut cfg = load_config(config)?;
    if let Some(dir) = output.or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from)) {
        cfg.output = dir;
    }
    let start = Instant::now();
    let (instance, traces) = run_episodes(&cfg)?;
    let files = write_outputs(&cfg.output, &cfg, &instance, &traces, start.elapsed())?;

    let mean = instance.environment.mean_vector();
    let optimum = evaluate_modular(instance.gap_profile().optimal(), mean);
    println!(
        "{} items, rank {}, optimal expected return {optimum:.6}",
        instance.matroid.len(),
        instance.matroid.rank()
    );
    for policy in &cfg.policies {
        let group: Vec<_> = traces
            .iter()
            .filter(|t| t.policy == *policy)
            .cloned()
            .collect();
        println!(
            "{:<22} per-step return {:.6}  pseudo-regret {:.3}",
            policy.label(),
            mean_at(&group, cfg.horizon, |e| e.per_step_return()),
            mean_at(&group, cfg.horizon, |e| e.cumulative_pseudo_regret),
        );
    }
    println!("wrote {}", files.traces.display());
    println!("wrote {}", files.summary.display());
    println!("wrote {}", files.manifest.display());
    Ok(())
}

fn verify(config: &Path, cases: usize, seed: u64) -> Result<(), Failure> {
    let cfg = load_config(config)?;
    let instance = cfg.build_instance()?;
    let report = verify_instance(&instance, cases, seed)?;
    for suite in &report.suites {
        let status = if suite.passed() { "pass" } else { "FAIL" };
        println!("{status} {:<24} {} cases", suite.name, suite.cases);
        for f in suite.failures.iter().take(5) {
            println!("     {f}");
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Invariants)
    }
}

fn bounds(config: &Path, horizon: Option<u64>) -> Result<(), Failure> {
    let cfg = load_config(config)?;
    let instance = cfg.build_instance()?;
    let profile = instance.gap_profile();
    let (l, k) = (profile.ground_set_size(), profile.rank());
    let horizon = horizon.unwrap_or(cfg.horizon);
    println!("items {l}, rank {k}");
    match profile.delta_min() {
        Some(d) => println!("smallest positive gap {d}"),
        None => println!("no suboptimal item has a positive gap"),
    }
    let slope = match cfg.instance {
        InstanceSpec::LowerBound { items, rank, delta } => {
            Some(generate_lower_bound_instance(items, rank, delta)?.2)
        }
        _ => None,
    };
    print!("{:>12} {:>16} {:>16}", "n", "gap_dependent", "gap_free");
    if slope.is_some() {
        print!(" {:>16}", "lower_bound");
    }
    println!();
    for n in summary_episodes(horizon) {
        let nf = n as f64;
        let free = gap_free_bound(l, k, nf).map_or("-".to_string(), |b| format!("{b:.3}"));
        print!(
            "{n:>12} {:>16.3} {free:>16}",
            profile.gap_dependent_bound(nf)
        );
        if let Some(s) = slope {
            print!(" {:>16.3}", s * nf.ln());
        }
        println!();
    }
    Ok(())
}

fn generate(args: &GenerateArgs) -> Result<(), Failure> {
    let out = &args.out;
    std::fs::create_dir_all(out)
        .map_err(|e| Failure::Validation(format!("{}: {e}", out.display())))?;
    let write = |name: &str, text: &str| -> Result<PathBuf, Failure> {
        let path = out.join(name);
        std::fs::write(&path, text)
            .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(path)
    };
    let mut means_rng = ChaCha8Rng::seed_from_u64(args.instance_seed);

    let instance = match args.family {
        GenFamily::Partition => {
            let (m, env, _) = generate_lower_bound_instance(args.items, args.rank, args.delta)?;
            let Family::Partition { block_of, .. } = m.family() else {
                unreachable!("the lower-bound instance is a partition matroid")
            };
            InstanceSpec::Explicit {
                matroid: MatroidSpec::Partition {
                    block_of: block_of.clone(),
                    capacities: None,
                },
                environment: EnvironmentSpec::Bernoulli {
                    means: env.mean_vector().to_vec(),
                },
            }
        }
        GenFamily::Uniform => {
            if args.rank > args.items {
                return Err(Failure::Validation(format!(
                    "rank {} exceeds the {} items",
                    args.rank, args.items
                )));
            }
            InstanceSpec::Explicit {
                matroid: MatroidSpec::Uniform {
                    items: args.items,
                    rank: args.rank,
                },
                environment: EnvironmentSpec::Bernoulli {
                    means: (0..args.items).map(|_| means_rng.random()).collect(),
                },
            }
        }
        GenFamily::Graphic => {
            let (m, latencies) = random_graphic(
                args.vertices,
                args.edges,
                args.max_latency,
                args.instance_seed,
            )?;
            write("graph.txt", &format_edge_list(&m, &latencies)?)?;
            InstanceSpec::EdgeList {
                path: "graph.txt".into(),
                normalization: None,
                mc_samples: None,
                mc_seed: None,
            }
        }
        GenFamily::Transversal => {
            let (m, means) =
                random_transversal(args.left, args.right, args.density, args.instance_seed)?;
            write("bipartite.txt", &format_bipartite(&m, &means)?)?;
            InstanceSpec::Bipartite {
                path: "bipartite.txt".into(),
            }
        }
        GenFamily::Linear => {
            let m = random_linear(args.items, args.dimension, args.density, args.instance_seed)?;
            let means: Vec<f64> = (0..args.items).map(|_| means_rng.random()).collect();
            let rows = random_reward_rows(&means, args.rows, args.instance_seed.wrapping_add(1));
            write("features.txt", &format_feature_matrix(&m)?)?;
            write("rewards.txt", &format_reward_rows(&rows))?;
            InstanceSpec::FeatureMatrix {
                path: "features.txt".into(),
                rewards: "rewards.txt".into(),
            }
        }
    };

    let cfg = RunConfig {
        seed: args.seed,
        horizon: args.horizon,
        replications: args.replications,
        output: "output".into(),
        policies: vec![
            PolicySpec::Omm,
            PolicySpec::EpsilonGreedy { epsilon: 0.1 },
            PolicySpec::Optimal,
        ],
        instrument: args.instrument,
        instance,
    };
    cfg.validate()?;
    let config_path = write("config.toml", &cfg.to_toml())?;

    let mut resolved = cfg;
    resolved.resolve_paths(out);
    let built = resolved.build_instance()?;
    let mut optimal = built.gap_profile().optimal().to_vec();
    optimal.sort_unstable();
    println!(
        "{} items, rank {}, optimal basis {optimal:?}",
        built.matroid.len(),
        built.matroid.rank()
    );
    println!("run it with: omm run {}", config_path.display());
    Ok(())
}

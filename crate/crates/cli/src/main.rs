//! `lplist`: generate data, learn LP-lists, compare objects, evaluate models
//! and run experiments from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use lplist::bench::{self, Algorithm, ExperimentConfig};
use lplist::datagen::{self, GenConfig};
use lplist::ga::{self, GaConfig};
use lplist::{io, oracle, Schema};

const FORMATS: &str = "\
FILE FORMATS
  schema JSON    {\"attributes\":[{\"name\":\"B\",\"values\":[\"s\",\"t\"]}, ...]}
                 attribute order is the index order used everywhere else.
  model text     one line, entries joined by ';', each NAME:v1>v2>...>vk with the
                 most preferred value first, e.g. B:s>t;M:t>c;C:w>b>k
  examples CSV   header a_<name1>,...,a_<nameN>,b_<name1>,...,b_<nameN>; one row per
                 example, value names as cells; the a-object is the preferred one.
  bench config   JSON object with optional keys sizes, algorithms, repetitions,
                 base_seed, n, x, noise, train_fraction, ga {population_size,
                 parent_count, generations, two_parent_crossover}, full_scale,
                 record_timing, output_dir.
  results.csv    algo,m,rep,train_acc,test_acc,train_s,test_s,total_s
  history CSV    generation,best_fitness,mean_fitness

EXIT STATUS
  0 success, 1 usage error, 2 data or validation error.";

#[derive(Parser)]
#[command(name = "lplist", version, about = "Learn lexicographic preference lists from pairwise examples", after_long_help = FORMATS)]
struct Cli {
    /// Worker threads (default: all cores). 1 is the reference behavior.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Log progress to standard error (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hidden model and noisy train/test examples.
    Generate(GenerateArgs),
    /// Learn a model from training examples.
    Train(TrainArgs),
    /// Compare two objects under a model.
    Compare(CompareArgs),
    /// Print the accuracy of a model on test examples.
    Eval(EvalArgs),
    /// Run an experiment grid and write CSV tables and SVG charts.
    Bench(BenchArgs),
    /// Check the exact learners against exhaustive search.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Attribute count.
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Values per attribute.
    #[arg(long, default_value_t = 5)]
    x: usize,
    /// Example count before splitting.
    #[arg(long, default_value_t = 1000)]
    m: usize,
    /// Fraction of examples flipped.
    #[arg(long, default_value_t = 0.15)]
    noise: f64,
    #[arg(long, default_value_t = 0.8)]
    train_fraction: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Dpa,
    Ga,
    Greedy,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Dpa => Algorithm::Dpa,
            Algo::Ga => Algorithm::Ga,
            Algo::Greedy => Algorithm::Greedy,
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    train: PathBuf,
    /// Where to write the model text.
    #[arg(long)]
    out: PathBuf,
    /// Where to write training statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// GA population size.
    #[arg(long, default_value_t = 100)]
    pop: usize,
    /// GA parents per generation.
    #[arg(long, default_value_t = 50)]
    parents: usize,
    /// GA generations.
    #[arg(long, default_value_t = 100)]
    gens: usize,
    /// GA: use two-parent order crossover instead of the attribute reshuffle.
    #[arg(long)]
    two_parent_crossover: bool,
    /// GA: write per-generation fitness as CSV.
    #[arg(long)]
    history: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// First object: comma-separated value names in attribute order.
    #[arg(long)]
    a: String,
    /// Second object, same format.
    #[arg(long)]
    b: String,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    test: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment config JSON; defaults are used for missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add the one-million-example point.
    #[arg(long)]
    full_scale: bool,
    /// Write zeros in the time columns so output depends only on the seed.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random single-attribute instances.
    #[arg(long, default_value_t = 200)]
    lpo: usize,
    /// Random multi-attribute instances.
    #[arg(long, default_value_t = 100)]
    lpl: usize,
    /// How many multi-attribute instances also search shorter lists.
    #[arg(long, default_value_t = 50)]
    sublists: usize,
}

/// Failure that should exit with status 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(UsageError("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Generate(args) => generate(args, seed),
        Command::Train(args) => train(args, seed),
        Command::Compare(args) => compare(args),
        Command::Eval(args) => eval(args),
        Command::Bench(args) => run_bench(args, cli.seed),
        Command::Verify(args) => verify(args, seed),
    }
}

fn load_schema(path: &Path) -> Result<Schema> {
    io::read_schema(path).with_context(|| format!("reading schema {}", path.display()))
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Serialize)]
struct Manifest {
    config: GenConfig,
    flip_count: usize,
    train_flips: usize,
    test_flips: usize,
    train_size: usize,
    test_size: usize,
    files: Vec<(String, String)>,
}

fn generate(args: GenerateArgs, seed: u64) -> Result<ExitCode> {
    let cfg = GenConfig {
        n: args.n,
        x: args.x,
        m: args.m,
        noise: args.noise,
        train_fraction: args.train_fraction,
        seed,
    };
    let data = datagen::generate(&cfg)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let path = |name: &str| args.out.join(name);
    io::write_schema(&path("schema.json"), &data.schema)?;
    io::write_model(&path("hidden.txt"), &data.schema, &data.hidden)?;
    io::write_examples_file(&path("examples.csv"), &data.schema, &data.examples)?;
    io::write_examples_file(&path("train.csv"), &data.schema, &data.train)?;
    io::write_examples_file(&path("test.csv"), &data.schema, &data.test)?;

    let names = [
        "schema.json",
        "hidden.txt",
        "examples.csv",
        "train.csv",
        "test.csv",
    ];
    let files = names
        .iter()
        .map(|n| Ok((n.to_string(), sha256_file(&path(n))?)))
        .collect::<Result<Vec<_>>>()?;
    let manifest = Manifest {
        config: cfg,
        flip_count: data.flipped.len(),
        train_flips: data.train_flips(),
        test_flips: data.test_flips(),
        train_size: data.train.len(),
        test_size: data.test.len(),
        files,
    };
    fs::write(
        path("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    println!(
        "wrote {} train and {} test examples to {}",
        data.train.len(),
        data.test.len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TrainStats {
    algo: String,
    train_examples: usize,
    train_satisfied: usize,
    train_accuracy: f64,
    model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    ga: Option<GaConfig>,
}

fn train(args: TrainArgs, seed: u64) -> Result<ExitCode> {
    let schema = load_schema(&args.schema)?;
    let examples = io::read_examples_file(&args.train, &schema)
        .with_context(|| format!("reading examples {}", args.train.display()))?;
    let algo = Algorithm::from(args.algo);
    let ga_cfg = GaConfig {
        population_size: args.pop,
        parent_count: args.parents,
        generations: args.gens,
        seed,
        two_parent_crossover: args.two_parent_crossover,
    };
    if matches!(algo, Algorithm::Ga) {
        ga_cfg.validate().map_err(|e| UsageError(e.to_string()))?;
    }
    let start = std::time::Instant::now();
    let model = match algo {
        Algorithm::Ga => {
            let result = ga::evolve(&examples, &schema, &ga_cfg)?;
            if let Some(path) = &args.history {
                let file = fs::File::create(path)
                    .with_context(|| format!("creating {}", path.display()))?;
                ga::write_history(file, &result.history)?;
            }
            result.best
        }
        other => bench::learn(other, &schema, &examples, &ga_cfg)?,
    };
    log::info!("trained {algo} in {:.3}s", start.elapsed().as_secs_f64());
    io::write_model(&args.out, &schema, &model)
        .with_context(|| format!("writing {}", args.out.display()))?;

    let satisfied = model.count_satisfied(&examples)?;
    let stats = TrainStats {
        algo: algo.to_string(),
        train_examples: examples.len(),
        train_satisfied: satisfied,
        train_accuracy: if examples.is_empty() {
            0.0
        } else {
            satisfied as f64 / examples.len() as f64
        },
        model: model.to_text(&schema),
        ga: matches!(algo, Algorithm::Ga).then_some(ga_cfg),
    };
    if let Some(path) = &args.stats {
        fs::write(path, serde_json::to_string_pretty(&stats)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{}", model.to_text(&schema));
    Ok(ExitCode::SUCCESS)
}

fn parse_object(schema: &Schema, text: &str) -> Result<lplist::Object> {
    let names: Vec<&str> = text.split(',').collect();
    Ok(schema.object_from_names(&names)?)
}

fn compare(args: CompareArgs) -> Result<ExitCode> {
    let schema = load_schema(&args.schema)?;
    let model = io::read_model(&args.model, &schema)
        .with_context(|| format!("reading model {}", args.model.display()))?;
    let a = parse_object(&schema, &args.a).context("--a")?;
    let b = parse_object(&schema, &args.b).context("--b")?;
    println!("{}", model.compare(&a, &b)?);
    Ok(ExitCode::SUCCESS)
}

fn eval(args: EvalArgs) -> Result<ExitCode> {
    let schema = load_schema(&args.schema)?;
    let model = io::read_model(&args.model, &schema)
        .with_context(|| format!("reading model {}", args.model.display()))?;
    let test = io::read_examples_file(&args.test, &schema)
        .with_context(|| format!("reading examples {}", args.test.display()))?;
    println!("{:.4}", bench::evaluate(&model, &test)?);
    Ok(ExitCode::SUCCESS)
}

fn run_bench(args: BenchArgs, seed: Option<u64>) -> Result<ExitCode> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = seed {
        cfg.base_seed = seed;
    }
    if args.full_scale {
        cfg.full_scale = true;
    }
    if args.no_timing {
        cfg.record_timing = false;
    }
    let Some(out) = args.out.or_else(|| cfg.output_dir.clone()) else {
        bail!(UsageError(
            "bench needs --out or output_dir in the config".into()
        ));
    };
    let records = bench::run_experiment(&cfg)?;
    let files = bench::emit_report(&records, &out)?;
    for row in bench::summarize(&records) {
        println!(
            "{:<7} m={:<8} test_acc={:.4}±{:.4} total_s={:.3}",
            row.algo, row.m, row.test_acc.0, row.test_acc.1, row.total_s.0
        );
    }
    println!("wrote {}", files.results.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs, seed: u64) -> Result<ExitCode> {
    let cfg = oracle::SuiteConfig {
        seed,
        lpo_instances: args.lpo,
        lpl_instances: args.lpl,
        sublist_instances: args.sublists.min(args.lpl),
    };
    let results = oracle::run_suite(&cfg)?;
    let mut all_ok = true;
    for r in &results {
        println!(
            "{} {}: {} passed, {} failed",
            if r.ok() { "PASS" } else { "FAIL" },
            r.name,
            r.passed,
            r.failed
        );
        all_ok &= r.ok();
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

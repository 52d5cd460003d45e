use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use drlpart::a2c::{A2cParams, ReturnMode};
use drlpart::edge::{edge_separator, CoarseSolver, MultilevelConfig, Refiner};
use drlpart::io::{
    build_training_dataset, format_bisection, format_permutation, format_separator, load_graph,
    parse_permutation, read_matrix_market, Dataset, DatasetSource,
};
use drlpart::nn::{load_checkpoint_for, save_checkpoint};
use drlpart::ordering::{
    minimum_degree, nested_dissection, symbolic_fill, DrlSeparator, FillRecord, GreedySeparator,
    Permutation, SeparatorProvider, SparsePattern, FILL_REPORT_HEADER,
};
use drlpart::train::{train, TrainConfig, TRAIN_LOG_HEADER};
use drlpart::vertex::vertex_separator;
use drlpart::{Agent, Graph, Label, TaskKind};

mod config;
mod external;

const CHECKPOINT_DIR_ENV: &str = "DRLPART_CHECKPOINT_DIR";

#[derive(Parser)]
#[command(
    name = "drlpart",
    version,
    about = "Multilevel partitioning with learned refinement"
)]
struct Cli {
    /// Plain `key = value` file; any long flag may be set, flags given here win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train an agent on a dataset directory.
    Train(TrainArgs),
    /// Edge separator (bisection) of a graph.
    Partition(PartitionArgs),
    /// Vertex separator of a graph.
    Separator(SeparatorArgs),
    /// Fill-reducing ordering of a matrix.
    Order(OrderArgs),
    /// Symbolic fill of several orderings of one matrix.
    Evalfill(EvalfillArgs),
    /// Build a training dataset directory.
    GenDataset(GenDatasetArgs),
}

#[derive(Args, Clone)]
struct MultilevelArgs {
    /// Coarsening stops below this many nodes.
    #[arg(long, default_value_t = 100)]
    n_min: usize,
    #[arg(long, default_value_t = 3)]
    k_hops: usize,
    /// Extra coarse-agent moves, in percent of n.
    #[arg(long, default_value_t = 1.0)]
    imbalance: f64,
    /// Recheck partition state after every refinement step.
    #[arg(long)]
    audit: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MultilevelArgs {
    fn config(&self) -> MultilevelConfig {
        MultilevelConfig {
            n_min: self.n_min,
            k_hops: self.k_hops,
            seed: self.seed,
            imbalance: self.imbalance,
            audit: self.audit,
        }
    }
}

#[derive(Args, Clone)]
struct CheckpointArgs {
    /// Refinement agent checkpoint.
    #[arg(long, value_name = "FILE")]
    checkpoint: Option<PathBuf>,
    /// Directory holding `<task>.ckpt` files.
    #[arg(long, env = CHECKPOINT_DIR_ENV, value_name = "DIR")]
    checkpoint_dir: Option<PathBuf>,
}

impl CheckpointArgs {
    fn path(&self, kind: TaskKind) -> Option<PathBuf> {
        self.checkpoint.clone().or_else(|| {
            self.checkpoint_dir
                .as_ref()
                .map(|d| d.join(format!("{}.ckpt", kind.name())))
        })
    }

    /// Explicit checkpoints must load; directory defaults are used when present.
    fn load(&self, kind: TaskKind) -> Result<Option<Agent>, CliError> {
        if let Some(p) = &self.checkpoint {
            return Ok(Some(load_checkpoint_for(p, kind)?));
        }
        match self.path(kind) {
            Some(p) if p.exists() => Ok(Some(load_checkpoint_for(p, kind)?)),
            _ => Ok(None),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Edge,
    Coarse,
    Vertex,
}

impl From<TaskArg> for TaskKind {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Edge => TaskKind::Edge,
            TaskArg::Coarse => TaskKind::Coarse,
            TaskArg::Vertex => TaskKind::Vertex,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReturnsArg {
    RewardToGo,
    Accumulated,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_enum)]
    task: TaskArg,
    /// Dataset directory written by `gen-dataset`.
    #[arg(long, value_name = "DIR")]
    dataset: PathBuf,
    #[arg(long, default_value_t = 1)]
    epochs: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Discount factor.
    #[arg(long, default_value_t = 0.9)]
    gamma: f64,
    /// Critic loss weight.
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// SGD learning rate.
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 20)]
    update_every: usize,
    #[arg(long, value_enum, default_value_t = ReturnsArg::RewardToGo)]
    returns: ReturnsArg,
    /// Start from this checkpoint instead of a fresh network.
    #[arg(long, value_name = "FILE")]
    init: Option<PathBuf>,
    #[command(flatten)]
    out: CheckpointArgs,
    /// Training log; defaults to the checkpoint path with `.log` appended.
    #[arg(long, value_name = "FILE")]
    log: Option<PathBuf>,
    #[command(flatten)]
    ml: MultilevelArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RefinerArg {
    /// Agent when a checkpoint is available, greedy otherwise.
    Auto,
    Agent,
    Greedy,
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoarseArg {
    Fallback,
    Agent,
}

#[derive(Args)]
struct PartitionArgs {
    /// Graph as Matrix Market (`.mtx`) or graph cache (`.bin`).
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = RefinerArg::Auto)]
    refiner: RefinerArg,
    #[arg(long, value_enum, default_value_t = CoarseArg::Fallback)]
    coarse: CoarseArg,
    #[arg(long, value_name = "FILE")]
    coarse_checkpoint: Option<PathBuf>,
    #[command(flatten)]
    ckpt: CheckpointArgs,
    /// Label file, one `A` or `B` per node.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// METIS-style executable to compare against.
    #[arg(long, value_name = "EXE")]
    external_cmd: Option<String>,
    #[command(flatten)]
    ml: MultilevelArgs,
}

#[derive(Args)]
struct SeparatorArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = RefinerArg::Auto)]
    refiner: RefinerArg,
    #[arg(long, value_enum, default_value_t = CoarseArg::Fallback)]
    coarse: CoarseArg,
    #[arg(long, value_name = "FILE")]
    coarse_checkpoint: Option<PathBuf>,
    #[command(flatten)]
    ckpt: CheckpointArgs,
    /// Label file, one `A`, `B` or `S` per node.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(flatten)]
    ml: MultilevelArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Nd,
    Md,
    Natural,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProviderArg {
    Auto,
    Drl,
    Greedy,
}

#[derive(Args)]
struct OrderArgs {
    /// Matrix Market file.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Nd)]
    method: MethodArg,
    /// Separator source for nested dissection.
    #[arg(long, value_enum, default_value_t = ProviderArg::Auto)]
    provider: ProviderArg,
    #[command(flatten)]
    ckpt: CheckpointArgs,
    /// Permutation file, one old index per line in new order.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(flatten)]
    ml: MultilevelArgs,
}

#[derive(Args)]
struct EvalfillArgs {
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Built-in orderings: natural, md, nd-greedy, nd-drl, nd (best available).
    #[arg(long, value_delimiter = ',', default_value = "natural,md,nd")]
    orderings: Vec<String>,
    /// Extra permutation files to evaluate.
    #[arg(long = "perm", value_name = "FILE")]
    perms: Vec<PathBuf>,
    #[command(flatten)]
    ckpt: CheckpointArgs,
    /// Fill report file.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(flatten)]
    ml: MultilevelArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Delaunay,
    MatrixDir,
}

#[derive(Args)]
struct GenDatasetArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Delaunay)]
    kind: KindArg,
    /// Directory of `.mtx` files for `--kind matrix-dir`.
    #[arg(long, value_name = "DIR")]
    matrix_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    n_min: usize,
    #[arg(long, default_value_t = 5000)]
    n_max: usize,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "DIR")]
    output: PathBuf,
}

enum CliError {
    Usage(String),
    Run(drlpart::Error),
}

impl From<drlpart::Error> for CliError {
    fn from(e: drlpart::Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.into())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read_graph(path: &Path) -> CliResult<Graph> {
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "input {} does not exist",
            path.display()
        )));
    }
    let is_cache = path.extension().is_some_and(|e| e == "bin");
    Ok(if is_cache {
        load_graph(path)?
    } else {
        read_matrix_market(path)?.to_graph()
    })
}

fn read_pattern(path: &Path) -> CliResult<SparsePattern> {
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "input {} does not exist",
            path.display()
        )));
    }
    Ok(read_matrix_market(path)?)
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, text)?;
    Ok(())
}

fn require_connected(g: &Graph) -> CliResult {
    let (count, _) = g.components();
    if count > 1 {
        return Err(CliError::Run(drlpart::Error::Disconnected(count)));
    }
    Ok(())
}

fn pick_refiner<'a>(arg: RefinerArg, agent: Option<&'a Agent>) -> CliResult<Refiner<'a>> {
    Ok(match (arg, agent) {
        (RefinerArg::Agent | RefinerArg::Auto, Some(a)) => Refiner::Agent(a),
        (RefinerArg::Agent, None) => {
            return Err(CliError::Usage("--refiner agent needs a checkpoint".into()))
        }
        (RefinerArg::Auto, None) => {
            log::info!("no checkpoint found, refining greedily");
            Refiner::Greedy
        }
        (RefinerArg::Greedy, _) => Refiner::Greedy,
        (RefinerArg::None, _) => Refiner::None,
    })
}

fn load_coarse(
    arg: CoarseArg,
    path: &Option<PathBuf>,
    ckpt: &CheckpointArgs,
) -> CliResult<Option<Agent>> {
    if arg == CoarseArg::Fallback {
        return Ok(None);
    }
    let path = path
        .clone()
        .or_else(|| ckpt.checkpoint_dir.as_ref().map(|d| d.join("coarse.ckpt")));
    match path {
        Some(p) => Ok(Some(load_checkpoint_for(p, TaskKind::Coarse)?)),
        None => Err(CliError::Usage(
            "--coarse agent needs --coarse-checkpoint".into(),
        )),
    }
}

fn cmd_train(a: TrainArgs) -> CliResult {
    let kind = TaskKind::from(a.task);
    if !a.dataset.join("manifest.txt").is_file() {
        return Err(CliError::Usage(format!(
            "dataset {} not found",
            a.dataset.display()
        )));
    }
    let ckpt = a.out.path(kind).ok_or_else(|| {
        CliError::Usage(format!(
            "give --checkpoint or --checkpoint-dir (or set {CHECKPOINT_DIR_ENV})"
        ))
    })?;
    let log_path = a.log.clone().unwrap_or_else(|| {
        let mut p = ckpt.clone().into_os_string();
        p.push(".log");
        p.into()
    });
    let cfg = TrainConfig {
        epochs: a.epochs,
        workers: a.workers,
        seed: a.ml.seed,
        a2c: A2cParams {
            gamma: a.gamma,
            alpha: a.alpha,
            lr: a.lr,
            update_every: a.update_every,
            return_mode: match a.returns {
                ReturnsArg::RewardToGo => ReturnMode::RewardToGo,
                ReturnsArg::Accumulated => ReturnMode::AccumulatedPast,
            },
        },
        multilevel: a.ml.config(),
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let dataset = Dataset::load(&a.dataset)?;
    let agent = match &a.init {
        Some(p) => load_checkpoint_for(p, kind)?,
        None => Agent::new(kind, a.ml.seed),
    };
    if let Some(dir) = ckpt.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut log = std::io::BufWriter::new(fs::File::create(&log_path)?);
    writeln!(log, "{TRAIN_LOG_HEADER}")?;
    let mut total = 0usize;
    let mut last_mean = 0.0;
    let agent = train(agent, &dataset.graphs, &cfg, |records| {
        for r in records {
            writeln!(log, "{r}")?;
        }
        total += records.len();
        last_mean = records.iter().map(|r| r.reward).sum::<f64>() / records.len().max(1) as f64;
        log::info!(
            "epoch {} mean reward {last_mean:.6}",
            records.first().map_or(0, |r| r.epoch)
        );
        Ok(())
    })?;
    log.flush()?;
    save_checkpoint(&agent, &ckpt)?;
    println!("task {}", kind.name());
    println!("episodes {total}");
    println!("final-epoch-mean-reward {last_mean:.6}");
    println!("checkpoint {}", ckpt.display());
    println!("log {}", log_path.display());
    Ok(())
}

fn cmd_partition(a: PartitionArgs) -> CliResult {
    let g = read_graph(&a.input)?;
    require_connected(&g)?;
    let agent = if a.refiner == RefinerArg::Greedy || a.refiner == RefinerArg::None {
        None
    } else {
        a.ckpt.load(TaskKind::Edge)?
    };
    let refiner = pick_refiner(a.refiner, agent.as_ref())?;
    let coarse_agent = load_coarse(a.coarse, &a.coarse_checkpoint, &a.ckpt)?;
    let coarse = coarse_agent
        .as_ref()
        .map_or(CoarseSolver::Fallback, CoarseSolver::Agent);
    let out = edge_separator(&g, &a.ml.config(), refiner, coarse)?;
    let b = &out.bisection;
    println!("nodes {}", g.n());
    println!("edges {}", g.m());
    println!("levels {}", out.levels.len());
    println!("cut {}", b.cut());
    println!("normalized-cut {:.6}", b.normalized_cut()?);
    println!("balance {:.6}", b.balance());
    println!("vol-a {}", b.vol_a());
    println!("vol-b {}", b.vol_b());
    if let Some(exe) = &a.external_cmd {
        match external::run_external(exe, &g) {
            Some(e) => {
                println!("external-cut {}", e.cut());
                println!("external-normalized-cut {:.6}", e.normalized_cut()?);
                println!("external-balance {:.6}", e.balance());
            }
            None => println!("external unavailable"),
        }
    }
    if let Some(p) = &a.output {
        write_text(p, &format_bisection(b))?;
    }
    Ok(())
}

fn cmd_separator(a: SeparatorArgs) -> CliResult {
    let g = read_graph(&a.input)?;
    require_connected(&g)?;
    let agent = if a.refiner == RefinerArg::Greedy || a.refiner == RefinerArg::None {
        None
    } else {
        a.ckpt.load(TaskKind::Vertex)?
    };
    let refiner = pick_refiner(a.refiner, agent.as_ref())?;
    let coarse_agent = load_coarse(a.coarse, &a.coarse_checkpoint, &a.ckpt)?;
    let coarse = coarse_agent
        .as_ref()
        .map_or(CoarseSolver::Fallback, CoarseSolver::Agent);
    let out = vertex_separator(&g, &a.ml.config(), refiner, coarse)?;
    let s = &out.separator;
    let (na, nb) = (s.card(Label::A) as f64, s.card(Label::B) as f64);
    println!("nodes {}", g.n());
    println!("edges {}", g.m());
    println!("levels {}", out.levels.len());
    println!("separator {}", s.card(Label::S));
    println!("normalized-separator {:.6}", s.normalized_separator()?);
    println!("size-a {}", s.card(Label::A));
    println!("size-b {}", s.card(Label::B));
    println!("balance {:.6}", (na / nb).max(nb / na));
    if let Some(p) = &a.output {
        write_text(p, &format_separator(s))?;
    }
    Ok(())
}

/// Nested dissection provider: the vertex agent when requested or found,
/// greedy thinning otherwise.
fn provider<'a>(
    arg: ProviderArg,
    agent: Option<&'a Agent>,
    ml: &MultilevelArgs,
) -> CliResult<Box<dyn SeparatorProvider + 'a>> {
    let cfg = ml.config();
    Ok(match (arg, agent) {
        (ProviderArg::Drl | ProviderArg::Auto, Some(a)) => Box::new(DrlSeparator::new(a, cfg)?),
        (ProviderArg::Drl, None) => {
            return Err(CliError::Usage(
                "--provider drl needs a vertex checkpoint".into(),
            ))
        }
        _ => Box::new(GreedySeparator { cfg }),
    })
}

fn cmd_order(a: OrderArgs) -> CliResult {
    let pattern = read_pattern(&a.input)?;
    let g = pattern.to_graph();
    let agent = if a.method == MethodArg::Nd && a.provider != ProviderArg::Greedy {
        a.ckpt.load(TaskKind::Vertex)?
    } else {
        None
    };
    let (name, p) = match a.method {
        MethodArg::Natural => ("natural".to_string(), Permutation::identity(g.n())),
        MethodArg::Md => ("md".to_string(), minimum_degree(&g)),
        MethodArg::Nd => {
            let prov = provider(a.provider, agent.as_ref(), &a.ml)?;
            (
                prov.name().to_string(),
                nested_dissection(&g, a.ml.n_min, prov.as_ref()),
            )
        }
    };
    let natural = symbolic_fill(&pattern, &Permutation::identity(g.n()))?;
    let ordered = symbolic_fill(&pattern, &p)?;
    println!("n {}", pattern.n());
    println!("nnz {}", pattern.nnz());
    println!("ordering {name}");
    println!("natural-factor-nnz {}", natural.lu_nnz());
    println!("ordered-factor-nnz {}", ordered.lu_nnz());
    println!("ordered-fill {}", 2 * ordered.fill_count);
    if let Some(out) = &a.output {
        write_text(out, &format_permutation(&p))?;
    }
    Ok(())
}

fn cmd_evalfill(a: EvalfillArgs) -> CliResult {
    let pattern = read_pattern(&a.input)?;
    let g = pattern.to_graph();
    let id = a.input.file_stem().map_or_else(
        || "matrix".to_string(),
        |s| s.to_string_lossy().replace(' ', "_"),
    );
    let wants_drl = a.orderings.iter().any(|o| o == "nd" || o == "nd-drl");
    let agent = if wants_drl {
        a.ckpt.load(TaskKind::Vertex)?
    } else {
        None
    };
    let mut rows: Vec<(String, Permutation, f64)> = Vec::new();
    for name in &a.orderings {
        let t = Instant::now();
        let (label, p) = match name.as_str() {
            "natural" => ("natural".to_string(), Permutation::identity(g.n())),
            "md" => ("md".to_string(), minimum_degree(&g)),
            "nd" | "nd-greedy" | "nd-drl" => {
                let arg = match name.as_str() {
                    "nd-greedy" => ProviderArg::Greedy,
                    "nd-drl" => ProviderArg::Drl,
                    _ => ProviderArg::Auto,
                };
                let prov = provider(arg, agent.as_ref(), &a.ml)?;
                (
                    prov.name().to_string(),
                    nested_dissection(&g, a.ml.n_min, prov.as_ref()),
                )
            }
            other => return Err(CliError::Usage(format!("unknown ordering '{other}'"))),
        };
        rows.push((label, p, t.elapsed().as_secs_f64()));
    }
    for path in &a.perms {
        let p = parse_permutation(&fs::read_to_string(path)?)?;
        if p.len() != g.n() {
            return Err(CliError::Run(drlpart::Error::DimensionMismatch(format!(
                "{} orders {} rows, the matrix has {}",
                path.display(),
                p.len(),
                g.n()
            ))));
        }
        let label = format!(
            "file:{}",
            path.file_name()
                .map_or_else(String::new, |s| s.to_string_lossy().into_owned())
        );
        rows.push((label, p, 0.0));
    }
    if rows.len() < 2 {
        return Err(CliError::Usage(
            "evalfill compares at least two orderings".into(),
        ));
    }
    let mut report = format!("{FILL_REPORT_HEADER}\n");
    for (label, p, secs) in &rows {
        let stats = symbolic_fill(&pattern, p)?;
        report.push_str(&format!(
            "{}\n",
            FillRecord::new(&id, pattern.nnz(), label, &stats, *secs)
        ));
    }
    print!("{report}");
    if let Some(out) = &a.output {
        write_text(out, &report)?;
    }
    Ok(())
}

fn cmd_gen_dataset(a: GenDatasetArgs) -> CliResult {
    let source = match a.kind {
        KindArg::Delaunay => DatasetSource::Delaunay,
        KindArg::MatrixDir => {
            let dir = a
                .matrix_dir
                .clone()
                .ok_or_else(|| CliError::Usage("--kind matrix-dir needs --matrix-dir".into()))?;
            if !dir.is_dir() {
                return Err(CliError::Usage(format!(
                    "matrix directory {} not found",
                    dir.display()
                )));
            }
            DatasetSource::MatrixDir(dir)
        }
    };
    if a.n_min >= a.n_max {
        return Err(CliError::Usage(format!(
            "--n-min {} must be below --n-max {}",
            a.n_min, a.n_max
        )));
    }
    let d = build_training_dataset(&source, a.n_min, a.n_max, a.count, a.seed)?;
    d.save(&a.output)?;
    let nodes: usize = d.graphs.iter().map(Graph::n).sum();
    println!("graphs {}", d.len());
    println!("total-nodes {nodes}");
    println!("output {}", a.output.display());
    Ok(())
}

fn main() -> ExitCode {
    let args = match config::merge_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Separator(a) => cmd_separator(a),
        Command::Order(a) => cmd_order(a),
        Command::Evalfill(a) => cmd_evalfill(a),
        Command::GenDataset(a) => cmd_gen_dataset(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

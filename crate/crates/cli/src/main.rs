//! `constkit` command-line front end.

mod config;
mod manifest;
mod plot;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use constkit_core::io::{self, MetricsRow};
use constkit_core::optim::EnergyAware;
use constkit_core::{
    ga_optimize, generate, mean_distance, min_distance, papr_db, pso_optimize, rank_designs, run_sweep,
    simulated_catalog, ChannelModel, DesignEntry, FitnessWeights, GaConfig, PsoConfig, Scheme, SchemeSpec,
    ScoreWeights, SnrGrid, SweepConfig,
};

use config::FileConfig;
use manifest::{now, RunManifest};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Io(String),
    /// Stdout was closed by the reader; exit quietly.
    Closed,
}

/// `println!` that reports write failures instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        writeln!(std::io::stdout().lock(), $($arg)*).map_err(CliError::from)?
    }};
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::Closed
        } else {
            CliError::Io(format!("stdout: {e}"))
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Io(_) => 4,
            CliError::Closed => 0,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Io(m) => f.write_str(m),
            CliError::Closed => f.write_str("stdout closed"),
        }
    }
}

impl From<constkit_core::Error> for CliError {
    fn from(e: constkit_core::Error) -> Self {
        match e {
            constkit_core::Error::Io(m) => CliError::Io(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "constkit", version, about = "Constellation generation, simulation, scoring and design")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed (flag > config file > CONSTKIT_SEED > 1)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// INI-style key = value file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Machine-readable stdout
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel stages
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in constellation families
    List,
    /// Geometry metrics for one or more schemes (default: the simulated catalog)
    Metrics(MetricsArgs),
    /// Monte Carlo SER over schemes, channels and an SNR grid
    Sweep(SweepArgs),
    /// Search for an M-point constellation with PSO or GA
    Optimize(OptimizeArgs),
    /// Rank designs from a metrics CSV and a sweep CSV
    Score(ScoreArgs),
    /// Render an SVG figure
    Plot(PlotArgs),
}

#[derive(Args)]
struct MetricsArgs {
    /// Scheme ids as `id[:M]`, or constellation CSV paths
    schemes: Vec<String>,
    /// Order for ids given without `:M`
    #[arg(short = 'M', long = "order")]
    order: Option<usize>,
    /// Scheme parameter as `name=v1[,v2...]`; repeatable
    #[arg(long = "param")]
    params: Vec<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated `id[:M]` entries or CSV paths (default: the simulated catalog)
    #[arg(long)]
    schemes: Option<String>,
    /// Comma-separated channel ids (default: awgn,rayleigh)
    #[arg(long)]
    channels: Option<String>,
    /// SNR grid `start:stop:step` in dB (default -5:50:1)
    #[arg(long, allow_hyphen_values = true)]
    snr: Option<String>,
    /// Symbols per grid point
    #[arg(long)]
    symbols: Option<usize>,
    /// Symbols per random stream
    #[arg(long)]
    chunk_size: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Pso,
    Ga,
}

#[derive(Args)]
struct OptimizeArgs {
    algo: Algo,
    #[arg(short = 'M', long = "order")]
    order: Option<usize>,
    /// PSO iterations or GA generations
    #[arg(long)]
    iterations: Option<usize>,
    /// Swarm or population size
    #[arg(long)]
    population: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    papr_cap: Option<f64>,
    /// Switch to the union-bound objective with this PAPR weight
    #[arg(long, allow_hyphen_values = true)]
    lambda_papr: Option<f64>,
    /// SNR for the union-bound objective (default 10 dB)
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Metrics CSV (`scheme,order,d_min,mean_dist,papr_db`)
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Sweep CSV supplying the SER column
    #[arg(long)]
    ser: Option<PathBuf>,
    /// SNR at which SER is taken
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    #[arg(long)]
    channel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w_dmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    w_power: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    w_ser: Option<f64>,
    /// Reference distance (default: largest d_min among inputs)
    #[arg(long, allow_hyphen_values = true)]
    d_ref: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PlotKind {
    Scatter,
    SerCurves,
    PaprCdf,
}

impl PlotKind {
    fn name(self) -> &'static str {
        match self {
            PlotKind::Scatter => "scatter",
            PlotKind::SerCurves => "ser-curves",
            PlotKind::PaprCdf => "papr-cdf",
        }
    }
}

#[derive(Args)]
struct PlotArgs {
    kind: PlotKind,
    /// Input CSV; repeat for several PAPR CDF series
    #[arg(long = "input", required = true)]
    inputs: Vec<PathBuf>,
    /// Channel drawn by ser-curves (default: awgn)
    #[arg(long)]
    channel: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) | Err(CliError::Closed) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("constkit: {e}");
            ExitCode::from(e.code())
        }
    }
}

const COMMON_KEYS: [&str; 3] = ["seed", "out", "workers"];

fn load_config(g: &Global, verb: &str, keys: &[&str]) -> CliResult<FileConfig> {
    let known: Vec<&str> = COMMON_KEYS.iter().chain(keys).copied().collect();
    match &g.config {
        Some(p) => FileConfig::load(p, verb, &known),
        None => Ok(FileConfig::default()),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    match cli.command {
        Command::List => cmd_list(g),
        Command::Metrics(a) => cmd_metrics(g, a),
        Command::Sweep(a) => cmd_sweep(g, a),
        Command::Optimize(a) => cmd_optimize(g, a),
        Command::Score(a) => cmd_score(g, a),
        Command::Plot(a) => cmd_plot(g, a),
    }
}

fn out_dir(cfg: &FileConfig, g: &Global) -> CliResult<Option<PathBuf>> {
    let dir = cfg.pick_opt(g.out.clone(), "out")?;
    if let Some(d) = &dir {
        fs::create_dir_all(d).map_err(|e| CliError::Io(format!("{}: {e}", d.display())))?;
    }
    Ok(dir)
}

fn print_json(v: &serde_json::Value) -> CliResult<()> {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    Ok(())
}

fn cmd_list(g: &Global) -> CliResult<()> {
    let simulated: BTreeSet<Scheme> = simulated_catalog().into_iter().map(|s| s.scheme).collect();
    if g.json {
        let items: Vec<_> = Scheme::ALL
            .iter()
            .map(|s| {
                json!({
                    "id": s.id(),
                    "default_order": s.default_order(),
                    "params": s.params().iter().map(|(k, d)| json!({"name": k, "doc": d})).collect::<Vec<_>>(),
                    "description": s.description(),
                    "simulated": simulated.contains(s),
                })
            })
            .collect();
        print_json(&json!(items))?;
        return Ok(());
    }
    for s in Scheme::ALL {
        let params: Vec<&str> = s.params().iter().map(|p| p.0).collect();
        let sig = format!("{}({})", s.id(), params.join(", "));
        let order = match s.default_order() {
            0 => "-".to_string(),
            m => m.to_string(),
        };
        let mark = if simulated.contains(&s) { "*" } else { " " };
        out!("{mark} {sig:<36} M={order:<3} {}", s.description());
    }
    out!("(* = included in the default sweep)");
    Ok(())
}

/// Parse `id[:M]`, or treat an entry ending in `.csv` as a constellation file.
fn parse_scheme_entry(entry: &str, order: Option<usize>) -> CliResult<SchemeSpec> {
    let entry = entry.trim();
    if entry.to_ascii_lowercase().ends_with(".csv") {
        return Ok(SchemeSpec::from_file(entry));
    }
    let (id, m) = match entry.split_once(':') {
        Some((id, m)) => {
            let m: usize = m.parse().map_err(|_| CliError::Usage(format!("bad order in `{entry}`")))?;
            (id, Some(m))
        }
        None => (entry, None),
    };
    let scheme: Scheme = id.parse()?;
    Ok(SchemeSpec::new(scheme, m.or(order).unwrap_or(scheme.default_order())))
}

fn parse_param(text: &str) -> CliResult<(String, Vec<f64>)> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("parameter `{text}` must look like name=v1[,v2...]")))?;
    let values = v
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("parameter `{text}` has a non-numeric value")))?;
    Ok((k.trim().to_string(), values))
}

fn cmd_metrics(g: &Global, a: MetricsArgs) -> CliResult<()> {
    let started = now();
    let cfg = load_config(g, "metrics", &["order"])?;
    let order = cfg.pick_opt(a.order, "order")?;
    let mut specs = if a.schemes.is_empty() {
        simulated_catalog()
    } else {
        a.schemes.iter().map(|s| parse_scheme_entry(s, order)).collect::<CliResult<Vec<_>>>()?
    };
    for p in &a.params {
        let (k, v) = parse_param(p)?;
        for s in specs.iter_mut() {
            s.params.insert(k.clone(), v.clone());
        }
    }
    let mut rows = Vec::new();
    for spec in &specs {
        let c = generate(spec)?;
        rows.push(MetricsRow {
            scheme: c.label().to_string(),
            order: c.order(),
            d_min: min_distance(&c),
            mean_dist: mean_distance(&c),
            papr_db: papr_db(&c),
        });
    }
    if g.json {
        let items: Vec<_> = rows
            .iter()
            .map(|r| json!({"scheme": r.scheme, "order": r.order, "d_min": r.d_min, "mean_dist": r.mean_dist, "papr_db": r.papr_db}))
            .collect();
        print_json(&json!(items))?;
    } else {
        out!("{:<28} {:>4} {:>10} {:>10} {:>10}", "scheme", "M", "d_min", "mean_dist", "papr_db");
        for r in &rows {
            out!("{:<28} {:>4} {:>10.5} {:>10.5} {:>10.4}", r.scheme, r.order, r.d_min, r.mean_dist, r.papr_db);
        }
    }
    if let Some(dir) = out_dir(&cfg, g)? {
        let path = dir.join("metrics.csv");
        io::write_metrics(create(&path)?, &rows)?;
        let labels: Vec<String> = specs.iter().map(|s| s.label()).collect();
        RunManifest::new(json!({"schemes": labels, "params": a.params}), None, started).write(
            &dir,
            "metrics",
            &[path],
        )?;
    }
    Ok(())
}

fn create(path: &Path) -> CliResult<fs::File> {
    fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_grid(text: &str) -> CliResult<SnrGrid> {
    let parts: Vec<&str> = text.split(':').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("SNR grid `{text}` must be start:stop:step")))?;
    match nums.as_slice() {
        [a, b, c] => SnrGrid::new(*a, *b, *c).map_err(|e| CliError::Usage(e.to_string())),
        [a] => SnrGrid::new(*a, *a, 1.0).map_err(|e| CliError::Usage(e.to_string())),
        _ => Err(CliError::Usage(format!("SNR grid `{text}` must be start:stop:step"))),
    }
}

fn cmd_sweep(g: &Global, a: SweepArgs) -> CliResult<()> {
    let started = now();
    let cfg = load_config(g, "sweep", &["schemes", "channels", "snr", "symbols", "chunk_size"])?;
    let defaults = SweepConfig::default();
    let seed = cfg.seed(g.seed)?;
    let schemes = match cfg.pick_opt(a.schemes, "schemes")? {
        None => defaults.schemes.clone(),
        Some(list) => list.split(',').map(|s| parse_scheme_entry(s, None)).collect::<CliResult<Vec<_>>>()?,
    };
    let channels = match cfg.pick_opt(a.channels, "channels")? {
        None => defaults.channels.clone(),
        Some(list) => list
            .split(',')
            .map(|s| s.parse::<ChannelModel>().map_err(|e| CliError::Usage(e.to_string())))
            .collect::<CliResult<Vec<_>>>()?,
    };
    let snr = match cfg.pick_opt(a.snr, "snr")? {
        None => defaults.snr,
        Some(t) => parse_grid(&t)?,
    };
    let sweep = SweepConfig {
        schemes,
        channels,
        snr,
        symbols: cfg.pick(a.symbols, "symbols", defaults.symbols)?,
        seed,
        chunk_size: cfg.pick(a.chunk_size, "chunk_size", defaults.chunk_size)?,
        workers: cfg.pick_opt(g.workers, "workers")?,
    };
    sweep.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let dir = out_dir(&cfg, g)?.unwrap_or_else(|| PathBuf::from("."));
    let result = run_sweep(&sweep)?;
    for f in &result.failures {
        eprintln!("constkit: skipped {}: {}", f.scheme, f.error);
    }
    if result.rows.is_empty() {
        return Err(CliError::Data("no scheme could be generated".into()));
    }
    let path = dir.join("sweep.csv");
    io::write_sweep(create(&path)?, &result.rows)?;
    let skipped: Vec<_> = result.failures.iter().map(|f| json!({"scheme": f.scheme, "error": f.error.to_string()})).collect();
    let config = json!({
        "schemes": sweep.schemes.iter().map(|s| s.label()).collect::<Vec<_>>(),
        "channels": sweep.channels.iter().map(|c| c.id()).collect::<Vec<_>>(),
        "snr": {"start": sweep.snr.start, "stop": sweep.snr.stop, "step": sweep.snr.step},
        "symbols": sweep.symbols,
        "chunk_size": sweep.chunk_size,
        "workers": sweep.workers,
        "skipped_schemes": skipped,
    });
    let manifest = RunManifest::new(config, Some(seed), started).write(&dir, "sweep", &[path.clone()])?;
    if g.json {
        print_json(&json!({"rows": result.rows.len(), "csv": path.display().to_string(), "manifest": manifest.display().to_string()}))?;
    } else {
        out!("wrote {} rows to {}", result.rows.len(), path.display());
    }
    Ok(())
}

fn cmd_optimize(g: &Global, a: OptimizeArgs) -> CliResult<()> {
    let started = now();
    let keys = [
        "order", "iterations", "population", "tau", "alpha", "beta", "gamma", "papr_cap", "lambda_papr", "snr_db",
    ];
    let cfg = load_config(g, "optimize", &keys)?;
    let seed = cfg.seed(g.seed)?;
    let m = cfg.pick(a.order, "order", 16)?;
    let d = FitnessWeights::default();
    let lambda = cfg.pick_opt(a.lambda_papr, "lambda_papr")?;
    let snr_db = cfg.pick_opt(a.snr_db, "snr_db")?;
    let energy = match (lambda, snr_db) {
        (None, None) => None,
        (l, s) => Some(EnergyAware { lambda_papr: l.unwrap_or(0.0), snr_db: s.unwrap_or(10.0) }),
    };
    let w = FitnessWeights {
        tau: cfg.pick(a.tau, "tau", d.tau)?,
        alpha: cfg.pick(a.alpha, "alpha", d.alpha)?,
        beta: cfg.pick(a.beta, "beta", d.beta)?,
        gamma: cfg.pick(a.gamma, "gamma", d.gamma)?,
        papr_cap_db: cfg.pick(a.papr_cap, "papr_cap", d.papr_cap_db)?,
        energy,
    };
    w.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let iterations = cfg.pick_opt(a.iterations, "iterations")?;
    let population = cfg.pick_opt(a.population, "population")?;
    let workers = cfg.pick_opt(g.workers, "workers")?;
    let dir = out_dir(&cfg, g)?.unwrap_or_else(|| PathBuf::from("."));

    let (trace, algo_cfg) = match a.algo {
        Algo::Pso => {
            let dflt = PsoConfig::default();
            let c = PsoConfig {
                particles: population.unwrap_or(dflt.particles),
                iterations: iterations.unwrap_or(dflt.iterations),
                seed,
                ..dflt
            };
            c.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let t = with_workers(workers, || pso_optimize(m, &c, &w))??;
            (t, json!({"algorithm": "pso", "particles": c.particles, "iterations": c.iterations,
                "inertia": [c.inertia_start, c.inertia_end], "c1": c.c1, "c2": c.c2, "bound": c.bound,
                "init_velocity": c.init_velocity}))
        }
        Algo::Ga => {
            let dflt = GaConfig::default();
            let c = GaConfig {
                population: population.unwrap_or(dflt.population),
                generations: iterations.unwrap_or(dflt.generations),
                seed,
                ..dflt
            };
            c.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let t = with_workers(workers, || ga_optimize(m, &c, &w))??;
            (t, json!({"algorithm": "ga", "population": c.population, "generations": c.generations,
                "elite_fraction": c.elite_fraction, "crossover_prob": c.crossover_prob,
                "mutation": [c.mutation_sigma, c.mutation_prob], "jitter": [c.jitter, c.jitter_prob], "bound": c.bound}))
        }
    };
    let label = trace.constellation.label().to_string();
    let points_path = dir.join(format!("{label}.csv"));
    let trace_path = dir.join(format!("{label}.trace.csv"));
    io::write_constellation(create(&points_path)?, &trace.constellation)?;
    io::write_trace(create(&trace_path)?, &trace.best_costs)?;
    let config = json!({
        "order": m,
        "optimizer": algo_cfg,
        "weights": {"tau": w.tau, "alpha": w.alpha, "beta": w.beta, "gamma": w.gamma, "papr_cap_db": w.papr_cap_db,
            "lambda_papr": w.energy.map(|e| e.lambda_papr), "snr_db": w.energy.map(|e| e.snr_db)},
    });
    RunManifest::new(config, Some(seed), started).write(&dir, "optimize", &[points_path.clone(), trace_path.clone()])?;
    let c = &trace.constellation;
    let summary = json!({
        "label": label,
        "d_min": min_distance(c),
        "papr_db": papr_db(c),
        "best_cost": trace.best_cost(),
        "constellation": points_path.display().to_string(),
        "trace": trace_path.display().to_string(),
    });
    if g.json {
        print_json(&summary)?;
    } else {
        out!(
            "{label}: d_min {:.5}, PAPR {:.3} dB, best cost {:.6}",
            min_distance(c),
            papr_db(c),
            trace.best_cost()
        );
        out!("wrote {} and {}", points_path.display(), trace_path.display());
    }
    Ok(())
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("workers must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn open(path: &Path) -> CliResult<fs::File> {
    fs::File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn cmd_score(g: &Global, a: ScoreArgs) -> CliResult<()> {
    let started = now();
    let keys = ["metrics", "ser", "snr_db", "channel", "w_dmin", "w_power", "w_ser", "d_ref"];
    let cfg = load_config(g, "score", &keys)?;
    let metrics_path: PathBuf = cfg
        .pick_opt(a.metrics, "metrics")?
        .ok_or_else(|| CliError::Usage("score needs --metrics".into()))?;
    let ser_path: PathBuf = cfg.pick_opt(a.ser, "ser")?.ok_or_else(|| CliError::Usage("score needs --ser".into()))?;
    let snr_db = cfg.pick(a.snr_db, "snr_db", 10.0)?;
    let channel: ChannelModel = cfg
        .pick(a.channel, "channel", "awgn".to_string())?
        .parse()
        .map_err(|e: constkit_core::Error| CliError::Usage(e.to_string()))?;
    let d = ScoreWeights::default();
    let w = ScoreWeights {
        w_dmin: cfg.pick(a.w_dmin, "w_dmin", d.w_dmin)?,
        w_power: cfg.pick(a.w_power, "w_power", d.w_power)?,
        w_ser: cfg.pick(a.w_ser, "w_ser", d.w_ser)?,
        d_ref: cfg.pick_opt(a.d_ref, "d_ref")?,
    };
    w.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let metrics = io::parse_metrics_csv(open(&metrics_path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", metrics_path.display())))?;
    let sweep = io::parse_sweep_csv(open(&ser_path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", ser_path.display())))?;
    let mut ser: BTreeMap<&str, f64> = BTreeMap::new();
    for r in sweep.iter().filter(|r| r.channel == channel && (r.point.snr_db - snr_db).abs() < 1e-9) {
        if ser.insert(&r.scheme, r.point.ser).is_some() {
            return Err(CliError::Data(format!("label `{}` appears twice in {}", r.scheme, ser_path.display())));
        }
    }
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for m in &metrics {
        if !seen.insert(m.scheme.as_str()) {
            return Err(CliError::Data(format!("label `{}` appears twice in {}", m.scheme, metrics_path.display())));
        }
        let s = ser.get(m.scheme.as_str()).ok_or_else(|| {
            CliError::Data(format!(
                "label `{}` has no {channel} SER at {snr_db} dB in {}",
                m.scheme,
                ser_path.display()
            ))
        })?;
        entries.push(DesignEntry::new(m.scheme.clone(), m.d_min, m.papr_db, *s));
    }
    if let Some(extra) = ser.keys().find(|k| !seen.contains(*k)) {
        return Err(CliError::Data(format!("label `{extra}` is missing from {}", metrics_path.display())));
    }
    if entries.is_empty() {
        return Err(CliError::Data("nothing to score".into()));
    }
    let ranked = rank_designs(&entries, &w)?;
    if g.json {
        let items: Vec<_> = ranked
            .iter()
            .map(|r| json!({"rank": r.rank, "label": r.label, "d_min": r.d_min, "papr_db": r.papr_db,
                "ser_10db": r.ser_10db, "power_eff": r.power_eff, "composite": r.composite}))
            .collect();
        print_json(&json!(items))?;
    } else {
        out!("{:>4} {:<28} {:>8} {:>8} {:>8} {:>9} {:>9}", "rank", "label", "d_min", "papr_db", "ser", "power_eff", "composite");
        for r in &ranked {
            out!(
                "{:>4} {:<28} {:>8.4} {:>8.3} {:>8.4} {:>9.4} {:>9.4}",
                r.rank, r.label, r.d_min, r.papr_db, r.ser_10db, r.power_eff, r.composite
            );
        }
    }
    if let Some(dir) = out_dir(&cfg, g)? {
        let path = dir.join("ranking.csv");
        io::write_ranking(create(&path)?, &ranked)?;
        let config = json!({
            "metrics": metrics_path.display().to_string(),
            "ser": ser_path.display().to_string(),
            "snr_db": snr_db,
            "channel": channel.id(),
            "weights": {"w_dmin": w.w_dmin, "w_power": w.w_power, "w_ser": w.w_ser, "d_ref": w.d_ref},
        });
        RunManifest::new(config, None, started).write(&dir, "score", &[path])?;
    }
    Ok(())
}

fn cmd_plot(g: &Global, a: PlotArgs) -> CliResult<()> {
    let started = now();
    let cfg = load_config(g, "plot", &["channel"])?;
    let seed = cfg.seed(g.seed)?;
    let dir = out_dir(&cfg, g)?.unwrap_or_else(|| PathBuf::from("."));
    let schema_err = |p: &Path, e: constkit_core::Error| match e {
        constkit_core::Error::Io(m) => CliError::Io(m),
        other => CliError::Data(format!("{}: {other}", p.display())),
    };
    let single = || -> CliResult<&PathBuf> {
        match a.inputs.as_slice() {
            [p] => Ok(p),
            _ => Err(CliError::Usage(format!("{} takes exactly one --input", a.kind.name()))),
        }
    };
    let (svg, used_seed, extra) = match a.kind {
        PlotKind::Scatter => {
            let p = single()?;
            let c = io::read_constellation_csv(p).map_err(|e| schema_err(p, e))?;
            (plot::scatter(&c), None, json!({}))
        }
        PlotKind::SerCurves => {
            let p = single()?;
            let rows = io::read_sweep_csv(p).map_err(|e| schema_err(p, e))?;
            let channel: ChannelModel = cfg
                .pick(a.channel, "channel", "awgn".to_string())?
                .parse()
                .map_err(|e: constkit_core::Error| CliError::Usage(e.to_string()))?;
            if !rows.iter().any(|r| r.channel == channel) {
                return Err(CliError::Data(format!("{} has no {channel} rows", p.display())));
            }
            (plot::ser_curves(&rows, channel), None, json!({"channel": channel.id()}))
        }
        PlotKind::PaprCdf => {
            let cs = a
                .inputs
                .iter()
                .map(|p| io::read_constellation_csv(p).map_err(|e| schema_err(p, e)))
                .collect::<CliResult<Vec<_>>>()?;
            (plot::papr_cdf(&cs, seed), Some(seed), json!({"draws": plot::PAPR_DRAWS}))
        }
    };
    let path = dir.join(format!("{}.svg", a.kind.name()));
    fs::write(&path, svg).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let inputs: Vec<String> = a.inputs.iter().map(|p| p.display().to_string()).collect();
    let config = json!({"kind": a.kind.name(), "inputs": inputs, "options": extra});
    RunManifest::new(config, used_seed, started).write(&dir, "plot", &[path.clone()])?;
    if g.json {
        print_json(&json!({"svg": path.display().to_string()}))?;
    } else {
        out!("wrote {}", path.display());
    }
    Ok(())
}

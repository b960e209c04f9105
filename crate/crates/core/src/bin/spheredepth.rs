//! Command-line front end over `sphere_depth::experiments`.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sphere_depth::baseline::{HalfspaceConfig, KernelConfig};
use sphere_depth::experiments::{
    cmd_anomaly, cmd_contour, cmd_depth, cmd_htest, cmd_rankbench, cmd_speedbench, AnomalyCommand, ContourCommand,
    DataSource, DepthCommand, Distribution, HtestCommand, Queries, RankBenchCommand, SpeedBenchCommand,
};
use sphere_depth::io::{load_labeled_csv, LabelColumn};
use sphere_depth::report::{write_atomic, ExperimentReport};
use sphere_depth::{DepthError, DepthMethod, DepthParams, InitStrategy, MethodSettings, OptimizerConfig};

#[derive(Parser)]
#[command(name = "spheredepth", version, about = "Sphere depth experiments")]
struct Cli {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (stdout when absent); written atomically.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of query points (or every sample) against a dataset.
    Depth(DepthArgs),
    /// Depth field over a 2-D grid.
    Contour(ContourArgs),
    /// Rank correlation of depths against the true bi-Gaussian density.
    Rankbench(RankArgs),
    /// Monte-Carlo size/power of the depth-based homogeneity test.
    Htest(HtestArgs),
    /// AUROC of 1 - depth on a labelled CSV.
    Anomaly(AnomalyArgs),
    /// Wall time of sphere depth versus Nelder-Mead halfspace depth.
    Speedbench(SpeedArgs),
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// CSV file with numeric features.
    #[arg(long, conflicts_with = "generate")]
    data: Option<PathBuf>,
    /// Label column to drop from --data (name, 0-based index or `last`).
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Distribution: gauss:D, bigauss:D, tgauss:D:MAXNORM, t2, t3corr.
    #[arg(long)]
    generate: Option<String>,
    /// Sample size for --generate.
    #[arg(long, default_value_t = 500)]
    n: usize,
}

impl SourceArgs {
    fn source(&self) -> Result<DataSource, DepthError> {
        match (&self.data, &self.generate) {
            (Some(path), _) => Ok(DataSource::Csv {
                path: path.clone(),
                delimiter: self.delimiter,
                label_column: self.label_column.as_deref().map(str::parse).transpose()?,
            }),
            (None, Some(spec)) => Ok(DataSource::Generated {
                distribution: Distribution::parse(spec)?,
                n: self.n,
            }),
            (None, None) => Err(DepthError::InvalidParameter("pass --data PATH or --generate DIST".into())),
        }
    }
}

#[derive(Args, Clone)]
struct SettingsArgs {
    /// Ball radius r.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Sigmoid scale s (0 selects the indicator depth, oracle-grid only).
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    alpha0: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// paper-mean, mean-minus-z or random:SEED.
    #[arg(long, default_value = "paper-mean")]
    init: String,
    /// Keep loss-increasing steps instead of reverting them.
    #[arg(long)]
    literal: bool,
    /// Kernel bandwidth for kspatial.
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Nelder-Mead restarts for halfspace.
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 0.0)]
    mahalanobis_reg: f64,
    /// Directions in the oracle grid.
    #[arg(long, default_value_t = 4096)]
    grid_size: usize,
    #[arg(long, default_value_t = 0)]
    grid_seed: u64,
}

fn parse_init(s: &str) -> Result<InitStrategy, DepthError> {
    match s {
        "paper-mean" => Ok(InitStrategy::PaperMean),
        "mean-minus-z" => Ok(InitStrategy::MeanMinusZ),
        other => match other.strip_prefix("random:").map(str::parse) {
            Some(Ok(seed)) => Ok(InitStrategy::SeededRandom(seed)),
            _ => Err(DepthError::InvalidParameter(format!("unknown init '{other}'"))),
        },
    }
}

impl SettingsArgs {
    fn optimizer(&self) -> Result<OptimizerConfig, DepthError> {
        Ok(OptimizerConfig {
            tol: self.tol,
            alpha0: self.alpha0,
            max_iter: self.max_iter,
            init: parse_init(&self.init)?,
            revert_on_increase: !self.literal,
            record_trace: false,
        })
    }

    fn settings(&self, seed: u64) -> Result<MethodSettings, DepthError> {
        Ok(MethodSettings {
            params: DepthParams { r: self.r, s: self.s },
            optimizer: self.optimizer()?,
            halfspace: HalfspaceConfig {
                restarts: self.restarts,
                seed,
                ..HalfspaceConfig::default()
            },
            kernel: KernelConfig { bandwidth_h: self.h },
            mahalanobis_regularization: self.mahalanobis_reg,
            grid_size: self.grid_size,
            grid_seed: self.grid_seed,
        })
    }
}

#[derive(Args)]
struct DepthArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Query point as comma-separated coordinates; repeatable.
    #[arg(long = "query", value_delimiter = ';', allow_hyphen_values = true)]
    queries: Vec<String>,
    /// Score every sample (default when no --query is given).
    #[arg(long)]
    self_score: bool,
    #[arg(long, default_value = "sphere")]
    method: DepthMethod,
    #[command(flatten)]
    settings: SettingsArgs,
    /// Compare against a grid oracle with this many directions.
    #[arg(long)]
    oracle_check: Option<usize>,
}

#[derive(Args)]
struct ContourArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value = "sphere")]
    method: DepthMethod,
    #[command(flatten)]
    settings: SettingsArgs,
    /// MIN:MAX
    #[arg(long, allow_hyphen_values = true, default_value = "-7:7")]
    x_range: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-7:7")]
    y_range: String,
    #[arg(long, default_value_t = 50)]
    nx: usize,
    #[arg(long, default_value_t = 50)]
    ny: usize,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long, value_delimiter = ',', default_value = "2")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    runs: usize,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    #[arg(long)]
    include_density: bool,
}

#[derive(Args)]
struct HtestArgs {
    /// Distribution of the first sample (see --generate).
    #[arg(long, default_value = "t2")]
    f: String,
    #[arg(long, default_value = "t3corr")]
    g: String,
    #[arg(long, value_delimiter = ',', default_value = "100,300,500")]
    n: Vec<usize>,
    /// Second-sample sizes (default: same as --n).
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    #[arg(long, value_delimiter = ',', default_value = "sphere,mahalanobis")]
    methods: Vec<DepthMethod>,
    #[command(flatten)]
    settings: SettingsArgs,
}

#[derive(Args)]
struct AnomalyArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "last")]
    label_column: String,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    #[arg(long, value_delimiter = ',', default_value = "sphere")]
    methods: Vec<DepthMethod>,
    /// Radius (default: pooled standard deviation).
    #[arg(long)]
    r: Option<f64>,
    /// Sigmoid scale (default: pooled standard deviation times d).
    #[arg(long)]
    s: Option<f64>,
    /// kspatial bandwidth (default: pooled standard deviation).
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    standardize: bool,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
}

#[derive(Args)]
struct SpeedArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    ns: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, value_delimiter = ',', default_value = "sphere,halfspace")]
    methods: Vec<DepthMethod>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
}

fn parse_range(s: &str) -> Result<(f64, f64), DepthError> {
    let bad = || DepthError::InvalidParameter(format!("range '{s}' must look like MIN:MAX"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_point(s: &str) -> Result<Vec<f64>, DepthError> {
    s.split(',')
        .map(|c| c.trim().parse().map_err(|_| DepthError::InvalidParameter(format!("bad coordinate '{c}' in query '{s}'"))))
        .collect()
}

fn run(cli: &Cli) -> Result<ExperimentReport, DepthError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Depth(a) => {
            let queries = if a.self_score || a.queries.is_empty() {
                Queries::SelfScore
            } else {
                Queries::Points(a.queries.iter().map(|q| parse_point(q)).collect::<Result<_, _>>()?)
            };
            cmd_depth(&DepthCommand {
                source: a.source.source()?,
                queries,
                method: a.method,
                settings: a.settings.settings(seed)?,
                oracle_check: a.oracle_check,
                seed,
            })
        }
        Command::Contour(a) => cmd_contour(&ContourCommand {
            source: a.source.source()?,
            method: a.method,
            settings: a.settings.settings(seed)?,
            x_range: parse_range(&a.x_range)?,
            y_range: parse_range(&a.y_range)?,
            resolution: (a.nx, a.ny),
            seed,
        }),
        Command::Rankbench(a) => cmd_rankbench(&RankBenchCommand {
            dims: a.dims.clone(),
            n: a.n,
            runs: a.runs,
            seed,
            params: DepthParams::smoothed(a.r, a.s)?,
            optimizer: OptimizerConfig::default(),
            bandwidth_h: a.h,
            include_density: a.include_density,
        }),
        Command::Htest(a) => {
            let ms = if a.m.is_empty() { a.n.clone() } else { a.m.clone() };
            if ms.len() != a.n.len() {
                return Err(DepthError::InvalidParameter("--m must list as many sizes as --n".into()));
            }
            cmd_htest(&HtestCommand {
                source_f: Distribution::parse(&a.f)?,
                source_g: Distribution::parse(&a.g)?,
                sizes: a.n.iter().copied().zip(ms).collect(),
                repetitions: a.reps,
                level: a.level,
                methods: a.methods.clone(),
                settings: a.settings.settings(seed)?,
                seed,
            })
        }
        Command::Anomaly(a) => {
            let label: LabelColumn = a.label_column.parse()?;
            let dataset = load_labeled_csv(&a.data, &label, a.delimiter as u8)?;
            let settings = MethodSettings {
                halfspace: HalfspaceConfig {
                    restarts: a.restarts,
                    seed,
                    ..HalfspaceConfig::default()
                },
                ..MethodSettings::default()
            };
            cmd_anomaly(
                &dataset,
                &AnomalyCommand {
                    methods: a.methods.clone(),
                    r: a.r,
                    s: a.s,
                    bandwidth_h: a.h,
                    standardize: a.standardize,
                    settings,
                    source_path: Some(a.data.clone()),
                },
            )
        }
        Command::Speedbench(a) => cmd_speedbench(&SpeedBenchCommand {
            ns: a.ns.clone(),
            d: a.d,
            methods: a.methods.clone(),
            repeats: a.repeats,
            seed,
            halfspace: HalfspaceConfig {
                restarts: a.restarts,
                seed,
                ..HalfspaceConfig::default()
            },
            ..SpeedBenchCommand::default()
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let bytes = run(&cli).and_then(|report| match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.table.as_ref().map_or_else(|| report.to_json(), |t| t.to_csv()),
    });
    let written = bytes.and_then(|b| match &cli.output {
        Some(path) => write_atomic(path, &b),
        None => std::io::stdout().write_all(&b).map_err(DepthError::from),
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

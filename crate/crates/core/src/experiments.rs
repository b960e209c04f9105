//! Experiment drivers behind the `spheredepth` subcommands. Each returns
//! structured results and an [`ExperimentReport`] that records every
//! parameter needed to replay it.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::{halfspace_depth, HalfspaceConfig, KernelConfig, KernelSpatialDepth};
use crate::data::{gen_mixture, gen_mixture_truncated, gen_student_t, standardization_stats, standardize, true_density_bi_gaussian, MixtureSpec, StudentSpec};
use crate::error::{DepthError, Result};
use crate::functional::{fit_depth, DepthMethod, MethodSettings};
use crate::grid::{grid_oracle_sphere_depth, DirectionGrid};
use crate::io::{load_labeled_csv, load_samples_csv, LabelColumn, LabeledDataset};
use crate::optim::{batch_depth, self_depths, sphere_depth, OptimizerConfig};
use crate::report::{ExperimentReport, Table};
use crate::sample::{DepthParams, QueryPoint, SampleSet};
use crate::stats::{auroc, depths_of, homogeneity_test, kendall_tau, spearman};

/// SplitMix64 finaliser; used to derive independent per-run seeds.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Deterministic seed for a position in a nested experiment loop.
pub fn derive_seed(base: u64, stream: &[u64]) -> u64 {
    stream.iter().fold(mix(base), |acc, &s| mix(acc ^ mix(s)))
}

/// Synthetic distributions used by the experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Distribution {
    Gaussian { d: usize },
    BiGaussian { d: usize },
    TruncatedGaussian { d: usize, max_norm: f64 },
    /// `t_2(0, I_2)` truncated at norm 10000.
    StudentT2,
    /// `t_3(0, I_2 + 0.6 [[0,1],[1,0]])` truncated at norm 10000.
    StudentT3Correlated,
}

impl Distribution {
    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleSet> {
        match self {
            Distribution::Gaussian { d } => gen_mixture(&MixtureSpec::standard_gaussian(*d)?, n, seed),
            Distribution::BiGaussian { d } => gen_mixture(&MixtureSpec::bi_gaussian(*d)?, n, seed),
            Distribution::TruncatedGaussian { d, max_norm } => {
                gen_mixture_truncated(&MixtureSpec::standard_gaussian(*d)?, n, *max_norm, seed)
            }
            Distribution::StudentT2 => gen_student_t(&StudentSpec::t2_identity(), n, seed),
            Distribution::StudentT3Correlated => gen_student_t(&StudentSpec::t3_correlated(), n, seed),
        }
    }

    /// Parses `gauss:D`, `bigauss:D`, `tgauss:D:MAXNORM`, `t2`, `t3corr`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let dim = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| DepthError::InvalidParameter(format!("'{spec}' is missing a dimension")))?
                .parse()
                .map_err(|_| DepthError::InvalidParameter(format!("bad dimension in '{spec}'")))
        };
        Ok(match parts[0] {
            "gauss" => Distribution::Gaussian { d: dim(1)? },
            "bigauss" => Distribution::BiGaussian { d: dim(1)? },
            "tgauss" => Distribution::TruncatedGaussian {
                d: dim(1)?,
                max_norm: parts
                    .get(2)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| DepthError::InvalidParameter(format!("'{spec}' needs tgauss:D:MAXNORM")))?,
            },
            "t2" => Distribution::StudentT2,
            "t3corr" => Distribution::StudentT3Correlated,
            other => return Err(DepthError::InvalidParameter(format!("unknown distribution '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum DataSource {
    Generated { distribution: Distribution, n: usize },
    Csv { path: PathBuf, delimiter: char, label_column: Option<LabelColumn> },
}

impl DataSource {
    pub fn load(&self, seed: u64) -> Result<SampleSet> {
        match self {
            DataSource::Generated { distribution, n } => distribution.sample(*n, seed),
            DataSource::Csv { path, delimiter, label_column: None } => load_samples_csv(path, *delimiter as u8),
            DataSource::Csv { path, delimiter, label_column: Some(col) } => {
                Ok(load_labeled_csv(path, col, *delimiter as u8)?.samples)
            }
        }
    }
}

fn to_points(rows: &[Vec<f64>]) -> Result<Vec<QueryPoint>> {
    rows.iter().map(|r| QueryPoint::new(r.clone())).collect()
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

// ---------------------------------------------------------------- depth

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Queries {
    /// Score every sample against the sample itself.
    SelfScore,
    Points(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthCommand {
    pub source: DataSource,
    pub queries: Queries,
    pub method: DepthMethod,
    pub settings: MethodSettings,
    /// Also evaluate the grid oracle with this many directions.
    pub oracle_check: Option<usize>,
    pub seed: u64,
}

pub fn cmd_depth(cmd: &DepthCommand) -> Result<ExperimentReport> {
    let sample = cmd.source.load(cmd.seed)?;
    let points = match &cmd.queries {
        Queries::SelfScore => to_points(&sample.to_rows())?,
        Queries::Points(rows) => to_points(rows)?,
    };
    for (index, z) in points.iter().enumerate() {
        z.check_against(&sample).map_err(|e| DepthError::AtPoint { index, source: Box::new(e) })?;
    }

    let mut report = ExperimentReport::new("depth", vec![cmd.seed]);
    report
        .param("source", &cmd.source)
        .param("queries", &cmd.queries)
        .param("method", cmd.method)
        .param("settings", &cmd.settings)
        .param("oracle_check", cmd.oracle_check)
        .param("seed", cmd.seed);

    let depths: Vec<f64> = if cmd.method == DepthMethod::Sphere {
        if cmd.settings.params.is_indicator() {
            return Err(DepthError::InvalidParameter(
                "s = 0 is not supported by the sphere solver; use method oracle-grid".into(),
            ));
        }
        let results = batch_depth(&points, &sample, &cmd.settings.params, &cmd.settings.optimizer)?;
        report
            .metric("iterations", results.iter().map(|r| r.iterations).collect::<Vec<_>>())
            .metric("converged", results.iter().map(|r| r.converged).collect::<Vec<_>>());
        results.into_iter().map(|r| r.value).collect()
    } else {
        let functional = fit_depth(cmd.method, &sample, &cmd.settings)?;
        points
            .par_iter()
            .map(|z| functional.depth(z))
            .collect::<Result<Vec<_>>>()?
    };

    let mut header = vec!["index".to_string(), "depth".to_string()];
    let mut oracle_values = None;
    if let Some(m) = cmd.oracle_check {
        let grid = DirectionGrid::new(sample.d(), m, cmd.settings.grid_seed)?;
        let values = points
            .par_iter()
            .map(|z| Ok(grid_oracle_sphere_depth(z, &sample, &cmd.settings.params, &grid)?.value))
            .collect::<Result<Vec<f64>>>()?;
        let gap = depths.iter().zip(&values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        report.metric("oracle_depths", &values).metric("max_abs_gap", gap);
        header.push("oracle".into());
        oracle_values = Some(values);
    }
    let mut table = Table::new(header);
    for (i, v) in depths.iter().enumerate() {
        let mut row = vec![i as f64, *v];
        if let Some(o) = &oracle_values {
            row.push(o[i]);
        }
        table.push(row);
    }
    report
        .metric("n", sample.n())
        .metric("d", sample.d())
        .metric("depths", &depths);
    report.table = Some(table);
    Ok(report)
}

// ---------------------------------------------------------------- contour

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourCommand {
    pub source: DataSource,
    pub method: DepthMethod,
    pub settings: MethodSettings,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Grid points along x and y.
    pub resolution: (usize, usize),
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `values[j][i]` is the depth at `(xs[i], ys[j])`.
    pub values: Vec<Vec<f64>>,
}

impl ContourGrid {
    /// Row-major CSV: the header carries the x axis, the first column the y axis.
    pub fn to_table(&self) -> Table {
        let mut header = vec!["y\\x".to_string()];
        header.extend(self.xs.iter().map(|x| x.to_string()));
        let mut t = Table::new(header);
        for (y, row) in self.ys.iter().zip(&self.values) {
            let mut r = vec![*y];
            r.extend(row);
            t.push(r);
        }
        t
    }
}

fn axis(range: (f64, f64), k: usize) -> Result<Vec<f64>> {
    if k == 0 || !(range.0.is_finite() && range.1.is_finite()) {
        return Err(DepthError::InvalidParameter("contour axes need finite bounds and at least one point".into()));
    }
    if k == 1 {
        return Ok(vec![0.5 * (range.0 + range.1)]);
    }
    let step = (range.1 - range.0) / (k - 1) as f64;
    Ok((0..k).map(|i| range.0 + step * i as f64).collect())
}

pub fn contour_grid(sample: &SampleSet, cmd: &ContourCommand) -> Result<ContourGrid> {
    if sample.d() != 2 {
        return Err(DepthError::InvalidParameter(format!("contour needs 2-dimensional data, got d = {}", sample.d())));
    }
    let xs = axis(cmd.x_range, cmd.resolution.0)?;
    let ys = axis(cmd.y_range, cmd.resolution.1)?;
    let functional = fit_depth(cmd.method, sample, &cmd.settings)?;
    let flat = (0..xs.len() * ys.len())
        .into_par_iter()
        .map(|k| {
            let (j, i) = (k / xs.len(), k % xs.len());
            functional.depth(&QueryPoint::new(vec![xs[i], ys[j]])?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let values = flat.chunks(xs.len()).map(<[f64]>::to_vec).collect();
    Ok(ContourGrid { xs, ys, values })
}

pub fn cmd_contour(cmd: &ContourCommand) -> Result<ExperimentReport> {
    let sample = cmd.source.load(cmd.seed)?;
    let grid = contour_grid(&sample, cmd)?;
    let mut report = ExperimentReport::new("contour", vec![cmd.seed]);
    report
        .param("source", &cmd.source)
        .param("method", cmd.method)
        .param("settings", &cmd.settings)
        .param("x_range", cmd.x_range)
        .param("y_range", cmd.y_range)
        .param("resolution", cmd.resolution)
        .param("seed", cmd.seed)
        .metric("xs", &grid.xs)
        .metric("ys", &grid.ys)
        .metric("values", &grid.values);
    report.table = Some(grid.to_table());
    Ok(report)
}

// ---------------------------------------------------------------- rankbench

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankBenchCommand {
    pub dims: Vec<usize>,
    pub n: usize,
    pub runs: usize,
    pub seed: u64,
    pub params: DepthParams,
    pub optimizer: OptimizerConfig,
    /// Bandwidth of the kernelized spatial depth.
    pub bandwidth_h: f64,
    /// Also rank by the true density itself (a sanity row with correlation 1).
    pub include_density: bool,
}

impl Default for RankBenchCommand {
    fn default() -> Self {
        Self {
            dims: vec![2],
            n: 200,
            runs: 20,
            seed: 0,
            params: DepthParams { r: 1.0, s: 1.0 },
            optimizer: OptimizerConfig::default(),
            bandwidth_h: 1.0,
            include_density: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRun {
    pub method: String,
    pub d: usize,
    pub run: usize,
    pub spearman: f64,
    pub kendall_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSummary {
    pub method: String,
    pub d: usize,
    pub spearman_mean: f64,
    pub spearman_std: f64,
    pub kendall_mean: f64,
    pub kendall_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankBenchOutcome {
    pub runs: Vec<RankRun>,
    pub summaries: Vec<RankSummary>,
}

impl RankBenchOutcome {
    pub fn summary(&self, method: &str, d: usize) -> Option<&RankSummary> {
        self.summaries.iter().find(|s| s.method == method && s.d == d)
    }
}

pub fn rankbench(cmd: &RankBenchCommand) -> Result<RankBenchOutcome> {
    if cmd.runs == 0 || cmd.n < 2 {
        return Err(DepthError::InvalidParameter("rankbench needs runs >= 1 and n >= 2".into()));
    }
    if let Some(d) = cmd.dims.iter().find(|&&d| d == 0 || d % 2 != 0) {
        return Err(DepthError::InvalidParameter(format!("dimensions must be even and positive, got {d}")));
    }
    let kernel = KernelConfig::new(cmd.bandwidth_h)?;
    let mut runs = Vec::new();
    for &d in &cmd.dims {
        let spec = MixtureSpec::bi_gaussian(d)?;
        for run in 0..cmd.runs {
            let x = gen_mixture(&spec, cmd.n, derive_seed(cmd.seed, &[d as u64, run as u64]))?;
            let density = true_density_bi_gaussian(&x.to_rows(), &spec)?;
            let mut scored: Vec<(&str, Vec<f64>)> = vec![
                ("sphere", self_depths(&x, &cmd.params, &cmd.optimizer)?),
                ("kspatial", depths_of(&KernelSpatialDepth::fit(&x, kernel)?, &x)?),
            ];
            if cmd.include_density {
                scored.push(("density", density.clone()));
            }
            for (method, depths) in scored {
                runs.push(RankRun {
                    method: method.to_string(),
                    d,
                    run,
                    spearman: spearman(&depths, &density)?,
                    kendall_tau: kendall_tau(&depths, &density)?,
                });
            }
        }
    }
    let mut summaries = Vec::new();
    for &d in &cmd.dims {
        for method in ["sphere", "kspatial", "density"] {
            let rows: Vec<&RankRun> = runs.iter().filter(|r| r.d == d && r.method == method).collect();
            if rows.is_empty() {
                continue;
            }
            let (sm, ss) = mean_std(&rows.iter().map(|r| r.spearman).collect::<Vec<_>>());
            let (km, ks) = mean_std(&rows.iter().map(|r| r.kendall_tau).collect::<Vec<_>>());
            summaries.push(RankSummary {
                method: method.to_string(),
                d,
                spearman_mean: sm,
                spearman_std: ss,
                kendall_mean: km,
                kendall_std: ks,
            });
        }
    }
    Ok(RankBenchOutcome { runs, summaries })
}

pub fn cmd_rankbench(cmd: &RankBenchCommand) -> Result<ExperimentReport> {
    let outcome = rankbench(cmd)?;
    let mut report = ExperimentReport::new("rankbench", vec![cmd.seed]);
    report
        .param("dims", &cmd.dims)
        .param("n", cmd.n)
        .param("runs", cmd.runs)
        .param("seed", cmd.seed)
        .param("params", cmd.params)
        .param("optimizer", &cmd.optimizer)
        .param("bandwidth_h", cmd.bandwidth_h)
        .param("include_density", cmd.include_density)
        .param("kspatial_note", "kernelized spatial depth with Gaussian kernel stands in for localized spatial depth")
        .metric("summaries", &outcome.summaries)
        .metric("runs", &outcome.runs);
    let mut table = Table::new(["d", "run", "method", "spearman", "kendall_tau"]);
    for r in &outcome.runs {
        let method = match r.method.as_str() {
            "sphere" => 0.0,
            "kspatial" => 1.0,
            _ => 2.0,
        };
        table.push(vec![r.d as f64, r.run as f64, method, r.spearman, r.kendall_tau]);
    }
    report.table = Some(table);
    Ok(report)
}

// ---------------------------------------------------------------- htest

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HtestCommand {
    pub source_f: Distribution,
    pub source_g: Distribution,
    /// `(n, m)` sample sizes for F and G.
    pub sizes: Vec<(usize, usize)>,
    pub repetitions: usize,
    pub level: f64,
    pub methods: Vec<DepthMethod>,
    pub settings: MethodSettings,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HtestCell {
    pub method: DepthMethod,
    pub n: usize,
    pub m: usize,
    /// `"fg"`: depths under the F sample; `"gf"`: under the G sample.
    pub ordering: String,
    pub rejection_rate: f64,
    pub mc_standard_error: f64,
    pub mean_q: f64,
    pub mean_tie_pairs: f64,
    pub z_stats: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HtestOutcome {
    pub cells: Vec<HtestCell>,
}

impl HtestOutcome {
    pub fn cell(&self, method: DepthMethod, n: usize, ordering: &str) -> Option<&HtestCell> {
        self.cells.iter().find(|c| c.method == method && c.n == n && c.ordering == ordering)
    }
}

struct RepOutcome {
    z: f64,
    q: f64,
    ties: u64,
    reject: bool,
}

pub fn htest(cmd: &HtestCommand) -> Result<HtestOutcome> {
    if cmd.repetitions == 0 {
        return Err(DepthError::InvalidParameter("repetitions must be >= 1".into()));
    }
    let mut cells = Vec::new();
    for (k, &(n, m)) in cmd.sizes.iter().enumerate() {
        // reps x methods x {fg, gf}
        let per_rep = (0..cmd.repetitions)
            .into_par_iter()
            .map(|rep| {
                let x = cmd.source_f.sample(n, derive_seed(cmd.seed, &[k as u64, rep as u64, 0]))?;
                let y = cmd.source_g.sample(m, derive_seed(cmd.seed, &[k as u64, rep as u64, 1]))?;
                let mut out = Vec::new();
                for &method in &cmd.methods {
                    for (reference, other) in [(&x, &y), (&y, &x)] {
                        let depth = fit_depth(method, reference, &cmd.settings)?;
                        let t = homogeneity_test(reference, other, depth.as_ref(), cmd.level)?;
                        out.push(RepOutcome {
                            z: t.quality.z_stat,
                            q: t.quality.q,
                            ties: t.quality.tie_pairs,
                            reject: t.reject,
                        });
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        for (mi, &method) in cmd.methods.iter().enumerate() {
            for (oi, ordering) in ["fg", "gf"].into_iter().enumerate() {
                let idx = 2 * mi + oi;
                let reps: Vec<&RepOutcome> = per_rep.iter().map(|r| &r[idx]).collect();
                let count = reps.len() as f64;
                let rate = reps.iter().filter(|r| r.reject).count() as f64 / count;
                let (sample_n, sample_m) = if oi == 0 { (n, m) } else { (m, n) };
                cells.push(HtestCell {
                    method,
                    n: sample_n,
                    m: sample_m,
                    ordering: ordering.to_string(),
                    rejection_rate: rate,
                    mc_standard_error: (rate * (1.0 - rate) / count).sqrt(),
                    mean_q: reps.iter().map(|r| r.q).sum::<f64>() / count,
                    mean_tie_pairs: reps.iter().map(|r| r.ties as f64).sum::<f64>() / count,
                    z_stats: reps.iter().map(|r| r.z).collect(),
                });
            }
        }
    }
    Ok(HtestOutcome { cells })
}

pub fn cmd_htest(cmd: &HtestCommand) -> Result<ExperimentReport> {
    let outcome = htest(cmd)?;
    let mut report = ExperimentReport::new("htest", vec![cmd.seed]);
    report
        .param("source_f", &cmd.source_f)
        .param("source_g", &cmd.source_g)
        .param("sizes", &cmd.sizes)
        .param("repetitions", cmd.repetitions)
        .param("level", cmd.level)
        .param("methods", &cmd.methods)
        .param("settings", &cmd.settings)
        .param("seed", cmd.seed)
        .metric("cells", &outcome.cells);
    let mut table = Table::new(["method", "n", "m", "ordering", "rejection_rate", "mc_standard_error", "mean_q"]);
    for c in &outcome.cells {
        let method = DepthMethod::ALL.iter().position(|m| *m == c.method).unwrap_or(0) as f64;
        let ordering = if c.ordering == "fg" { 0.0 } else { 1.0 };
        table.push(vec![method, c.n as f64, c.m as f64, ordering, c.rejection_rate, c.mc_standard_error, c.mean_q]);
    }
    report.table = Some(table);
    Ok(report)
}

// ---------------------------------------------------------------- anomaly

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalyCommand {
    pub methods: Vec<DepthMethod>,
    /// Defaults to the pooled standard deviation.
    pub r: Option<f64>,
    /// Defaults to pooled standard deviation times `d`.
    pub s: Option<f64>,
    /// Kernel bandwidth for `kspatial`; defaults to the pooled standard deviation.
    pub bandwidth_h: Option<f64>,
    pub standardize: bool,
    pub settings: MethodSettings,
    /// Recorded in the report when the dataset came from a file.
    pub source_path: Option<PathBuf>,
}

impl Default for AnomalyCommand {
    fn default() -> Self {
        Self {
            methods: vec![DepthMethod::Sphere],
            r: None,
            s: None,
            bandwidth_h: None,
            standardize: false,
            settings: MethodSettings::default(),
            source_path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnomalyOutcome {
    pub pooled_std: f64,
    pub r: f64,
    pub s: f64,
    pub bandwidth_h: f64,
    pub aurocs: Vec<(DepthMethod, f64)>,
    /// Outlier scores `1 - depth`, one vector per method.
    pub scores: Vec<Vec<f64>>,
}

impl AnomalyOutcome {
    pub fn auroc(&self, method: DepthMethod) -> Option<f64> {
        self.aurocs.iter().find(|(m, _)| *m == method).map(|(_, a)| *a)
    }
}

pub fn anomaly(dataset: &LabeledDataset, cmd: &AnomalyCommand) -> Result<AnomalyOutcome> {
    let positives = dataset.anomalies();
    if positives == 0 || positives == dataset.labels.len() {
        return Err(DepthError::SingleClass {
            positives,
            negatives: dataset.labels.len() - positives,
        });
    }
    let samples = if cmd.standardize {
        standardize(&dataset.samples)?.0
    } else {
        dataset.samples.clone()
    };
    let pooled_std = standardization_stats(&samples)?.pooled_std;
    let d = samples.d() as f64;
    let mut settings = cmd.settings.clone();
    settings.params = DepthParams {
        r: cmd.r.unwrap_or(pooled_std),
        s: cmd.s.unwrap_or(pooled_std * d),
    };
    settings.kernel = KernelConfig::new(cmd.bandwidth_h.unwrap_or(pooled_std))?;

    let mut aurocs = Vec::new();
    let mut scores = Vec::new();
    for &method in &cmd.methods {
        let functional = fit_depth(method, &samples, &settings)?;
        let s: Vec<f64> = depths_of(functional.as_ref(), &samples)?.into_iter().map(|v| 1.0 - v).collect();
        aurocs.push((method, auroc(&s, &dataset.labels)?.auroc));
        scores.push(s);
    }
    Ok(AnomalyOutcome {
        pooled_std,
        r: settings.params.r,
        s: settings.params.s,
        bandwidth_h: settings.kernel.bandwidth_h,
        aurocs,
        scores,
    })
}

pub fn cmd_anomaly(dataset: &LabeledDataset, cmd: &AnomalyCommand) -> Result<ExperimentReport> {
    let outcome = anomaly(dataset, cmd)?;
    let mut report = ExperimentReport::new("anomaly", vec![]);
    report
        .param("dataset", &dataset.name)
        .param("source_path", &cmd.source_path)
        .param("n", dataset.samples.n())
        .param("d", dataset.samples.d())
        .param("methods", &cmd.methods)
        .param("standardize", cmd.standardize)
        .param("r", outcome.r)
        .param("s", outcome.s)
        .param("bandwidth_h", outcome.bandwidth_h)
        .param("pooled_std", outcome.pooled_std)
        .param("pooled_std_rule", "sqrt of mean per-dimension unbiased variance, computed on the features as scored")
        .param("settings", &cmd.settings)
        .metric(
            "auroc",
            outcome.aurocs.iter().map(|(m, a)| (m.as_str().to_string(), *a)).collect::<std::collections::BTreeMap<_, _>>(),
        )
        .metric("anomalies", dataset.anomalies());
    let mut header = vec!["index".to_string(), "label".to_string()];
    header.extend(cmd.methods.iter().map(|m| format!("score_{m}")));
    let mut table = Table::new(header);
    for i in 0..dataset.samples.n() {
        let mut row = vec![i as f64, dataset.labels[i] as f64];
        row.extend(outcome.scores.iter().map(|s| s[i]));
        table.push(row);
    }
    report.metric("scores", &outcome.scores);
    report.table = Some(table);
    Ok(report)
}

// ---------------------------------------------------------------- speedbench

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedBenchCommand {
    pub ns: Vec<usize>,
    pub d: usize,
    pub methods: Vec<DepthMethod>,
    pub repeats: usize,
    pub seed: u64,
    pub params: DepthParams,
    pub optimizer: OptimizerConfig,
    pub halfspace: HalfspaceConfig,
    /// Every coordinate of the query point.
    pub query_coordinate: f64,
}

impl Default for SpeedBenchCommand {
    fn default() -> Self {
        Self {
            ns: vec![1_000, 10_000, 100_000],
            d: 3,
            methods: vec![DepthMethod::Sphere, DepthMethod::Halfspace],
            repeats: 3,
            seed: 0,
            params: DepthParams { r: 1.0, s: 1.0 },
            optimizer: OptimizerConfig::default(),
            halfspace: HalfspaceConfig::default(),
            query_coordinate: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedEntry {
    pub method: DepthMethod,
    pub n: usize,
    pub median_seconds: f64,
    pub seconds: Vec<f64>,
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedOutcome {
    pub entries: Vec<SpeedEntry>,
}

impl SpeedOutcome {
    pub fn median(&self, method: DepthMethod, n: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.method == method && e.n == n).map(|e| e.median_seconds)
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

pub fn speedbench(cmd: &SpeedBenchCommand) -> Result<SpeedOutcome> {
    if cmd.ns.is_empty() || cmd.ns.windows(2).any(|w| w[1] < w[0]) {
        return Err(DepthError::InvalidParameter("sample sizes must be non-empty and non-decreasing".into()));
    }
    if cmd.repeats == 0 {
        return Err(DepthError::InvalidParameter("repeats must be >= 1".into()));
    }
    let z = QueryPoint::new(vec![cmd.query_coordinate; cmd.d])?;
    let run = |method: DepthMethod, x: &SampleSet| -> Result<f64> {
        Ok(match method {
            DepthMethod::Sphere => sphere_depth(&z, x, &cmd.params, &cmd.optimizer)?.value,
            DepthMethod::Halfspace => halfspace_depth(&z, x, &cmd.halfspace)?.value,
            other => {
                return Err(DepthError::InvalidParameter(format!(
                    "speedbench supports sphere and halfspace, got {other}"
                )))
            }
        })
    };
    let spec = MixtureSpec::standard_gaussian(cmd.d)?;
    let mut entries = Vec::new();
    let mut warmed = false;
    for (k, &n) in cmd.ns.iter().enumerate() {
        let x = gen_mixture(&spec, n, derive_seed(cmd.seed, &[k as u64]))?;
        if !warmed {
            for &m in &cmd.methods {
                run(m, &x)?;
            }
            warmed = true;
        }
        for &method in &cmd.methods {
            let mut seconds = Vec::with_capacity(cmd.repeats);
            let mut depth = 0.0;
            for _ in 0..cmd.repeats {
                let start = Instant::now();
                depth = run(method, &x)?;
                seconds.push(start.elapsed().as_secs_f64());
            }
            entries.push(SpeedEntry {
                method,
                n,
                median_seconds: median(seconds.clone()),
                seconds,
                depth,
            });
        }
    }
    Ok(SpeedOutcome { entries })
}

pub fn cmd_speedbench(cmd: &SpeedBenchCommand) -> Result<ExperimentReport> {
    let outcome = speedbench(cmd)?;
    let mut report = ExperimentReport::new("speedbench", vec![cmd.seed]);
    report
        .param("ns", &cmd.ns)
        .param("d", cmd.d)
        .param("methods", &cmd.methods)
        .param("repeats", cmd.repeats)
        .param("seed", cmd.seed)
        .param("params", cmd.params)
        .param("optimizer", &cmd.optimizer)
        .param("halfspace", &cmd.halfspace)
        .param("query_coordinate", cmd.query_coordinate)
        .metric("entries", &outcome.entries);
    let mut ratios = Vec::new();
    for &n in &cmd.ns {
        if let (Some(sd), Some(hd)) = (outcome.median(DepthMethod::Sphere, n), outcome.median(DepthMethod::Halfspace, n)) {
            ratios.push(serde_json::json!({ "n": n, "halfspace_over_sphere": hd / sd }));
        }
    }
    report.metric("ratios", ratios);
    let mut table = Table::new(["method", "n", "median_seconds"]);
    for e in &outcome.entries {
        let method = DepthMethod::ALL.iter().position(|m| *m == e.method).unwrap_or(0) as f64;
        table.push(vec![method, e.n as f64, e.median_seconds]);
    }
    report.table = Some(table);
    Ok(report)
}

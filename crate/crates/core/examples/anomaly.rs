// Unsupervised anomaly scoring with `1 - depth`, evaluated by AUROC.
//
// With a path argument the labeled CSV (label in the last column) is scored,
// otherwise a synthetic contaminated Gaussian sample is used.
//
// `cargo run --release --example anomaly -- [data.csv]`

use rand::Rng;
use rand_distr::StandardNormal;
use sphere_depth::data::rng_from_seed;
use sphere_depth::experiments::{anomaly, AnomalyCommand, AnomalyOutcome};
use sphere_depth::io::{load_labeled_csv, LabelColumn, LabeledDataset};
use sphere_depth::{DepthMethod, SampleSet};

fn contaminated(n: usize, d: usize, outliers: usize, seed: u64) -> sphere_depth::Result<LabeledDataset> {
    let mut rng = rng_from_seed(seed);
    let mut rows: Vec<Vec<f64>> = (0..n - outliers)
        .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    rows.extend((0..outliers).map(|_| (0..d).map(|_| rng.gen_range(-8.0..8.0)).collect()));
    let labels = (0..n).map(|i| u8::from(i >= n - outliers)).collect();
    LabeledDataset::new(SampleSet::from_rows(&rows)?, labels, "contaminated")
}

pub fn run_example_on(dataset: &LabeledDataset) -> sphere_depth::Result<AnomalyOutcome> {
    let cmd = AnomalyCommand {
        methods: vec![DepthMethod::Sphere, DepthMethod::Mahalanobis, DepthMethod::Kspatial],
        ..AnomalyCommand::default()
    };
    let outcome = anomaly(dataset, &cmd)?;
    println!(
        "{}: n={} d={} anomalies={} r={:.3} s={:.3}",
        dataset.name,
        dataset.samples.n(),
        dataset.samples.d(),
        dataset.anomalies(),
        outcome.r,
        outcome.s
    );
    for (method, auc) in &outcome.aurocs {
        println!("  {:<12} AUROC {auc:.4}", method.as_str());
    }
    Ok(outcome)
}

pub fn run_example() -> sphere_depth::Result<AnomalyOutcome> {
    run_example_on(&contaminated(500, 5, 25, 9)?)
}

fn main() -> sphere_depth::Result<()> {
    match std::env::args().nth(1) {
        Some(path) => run_example_on(&load_labeled_csv(path, &LabelColumn::Last, b',')?),
        None => run_example(),
    }
    .map(|_| ())
}

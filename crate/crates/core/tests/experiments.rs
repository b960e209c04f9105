use sphere_depth::experiments::{
    anomaly, cmd_contour, cmd_depth, cmd_htest, cmd_rankbench, contour_grid, AnomalyCommand, ContourCommand,
    DataSource, DepthCommand, Distribution, HtestCommand, Queries, RankBenchCommand,
};
use sphere_depth::io::LabeledDataset;
use sphere_depth::stats::auroc;
use sphere_depth::{DepthMethod, MethodSettings, SampleSet};

fn generated(distribution: Distribution, n: usize) -> DataSource {
    DataSource::Generated { distribution, n }
}

fn contour_cmd(resolution: (usize, usize), x_range: (f64, f64), y_range: (f64, f64)) -> ContourCommand {
    ContourCommand {
        source: generated(Distribution::BiGaussian { d: 2 }, 300),
        method: DepthMethod::Sphere,
        settings: MethodSettings::default(),
        x_range,
        y_range,
        resolution,
        seed: 5,
    }
}

#[test]
fn contour_modes_beat_the_saddle() {
    // Grid through (-3.5, -3.5), (0, 0) and (3.5, 3.5).
    let cmd = contour_cmd((3, 3), (-3.5, 3.5), (-3.5, 3.5));
    let sample = cmd.source.load(cmd.seed).unwrap();
    let grid = contour_grid(&sample, &cmd).unwrap();
    let saddle = grid.values[1][1];
    assert!(grid.values[0][0] > saddle, "{:?}", grid.values);
    assert!(grid.values[2][2] > saddle, "{:?}", grid.values);
}

#[test]
fn contour_small_grid_and_determinism() {
    let cmd = contour_cmd((2, 2), (-1.0, 1.0), (-1.0, 1.0));
    let a = cmd_contour(&cmd).unwrap();
    let b = cmd_contour(&cmd).unwrap();
    let values: Vec<f64> = serde_json::from_value(a.metrics["values"].clone())
        .map(|v: Vec<Vec<f64>>| v.concat())
        .unwrap();
    assert_eq!(values.len(), 4);
    assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.table.unwrap().to_csv().unwrap(), b.table.unwrap().to_csv().unwrap());
}

#[test]
fn contour_rejects_other_dimensions() {
    let mut cmd = contour_cmd((2, 2), (-1.0, 1.0), (-1.0, 1.0));
    cmd.source = generated(Distribution::Gaussian { d: 3 }, 20);
    assert!(cmd_contour(&cmd).is_err());
}

fn depth_cmd(source: DataSource, queries: Queries, method: DepthMethod, settings: MethodSettings) -> DepthCommand {
    DepthCommand {
        source,
        queries,
        method,
        settings,
        oracle_check: None,
        seed: 0,
    }
}

#[test]
fn depth_oracle_check_gap() {
    let mut cmd = depth_cmd(
        generated(Distribution::Gaussian { d: 2 }, 150),
        Queries::Points(vec![vec![0.0, 0.0], vec![1.0, -0.5], vec![2.5, 2.0]]),
        DepthMethod::Sphere,
        MethodSettings::default(),
    );
    cmd.oracle_check = Some(4096);
    let report = cmd_depth(&cmd).unwrap();
    assert!(report.metric_f64("max_abs_gap").unwrap() <= 5e-3);
}

#[test]
fn depth_of_the_only_sample_is_one_half() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    std::fs::write(&path, "0.3,-1.2\n").unwrap();
    let cmd = depth_cmd(
        DataSource::Csv { path, delimiter: ',', label_column: None },
        Queries::Points(vec![vec![0.3, -1.2]]),
        DepthMethod::Sphere,
        MethodSettings::default(),
    );
    let depths: Vec<f64> = serde_json::from_value(cmd_depth(&cmd).unwrap().metrics["depths"].clone()).unwrap();
    assert!((depths[0] - 0.5).abs() < 1e-12);
}

#[test]
fn depth_indicator_cross_and_solver_refusal() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cross.csv");
    std::fs::write(&path, "1,0\n-1,0\n0,1\n0,-1\n").unwrap();
    let source = DataSource::Csv { path, delimiter: ',', label_column: None };
    let mut settings = MethodSettings::default();
    settings.params.r = 0.4;
    settings.params.s = 0.0;
    let origin = Queries::Points(vec![vec![0.0, 0.0]]);
    let cmd = depth_cmd(source.clone(), origin.clone(), DepthMethod::OracleGrid, settings.clone());
    let depths: Vec<f64> = serde_json::from_value(cmd_depth(&cmd).unwrap().metrics["depths"].clone()).unwrap();
    assert_eq!(depths, vec![0.0]);
    let err = cmd_depth(&depth_cmd(source, origin, DepthMethod::Sphere, settings)).unwrap_err();
    assert!(err.to_string().contains("oracle-grid"), "{err}");
}

#[test]
fn rankbench_is_reproducible_and_density_is_exact() {
    let cmd = RankBenchCommand {
        runs: 1,
        n: 80,
        include_density: true,
        seed: 17,
        ..RankBenchCommand::default()
    };
    let a = cmd_rankbench(&cmd).unwrap().to_json().unwrap();
    assert_eq!(a, cmd_rankbench(&cmd).unwrap().to_json().unwrap());
    let outcome = sphere_depth::experiments::rankbench(&cmd).unwrap();
    assert_eq!(outcome.summary("density", 2).unwrap().spearman_mean, 1.0);
    assert!(sphere_depth::experiments::rankbench(&RankBenchCommand { dims: vec![3], ..cmd }).is_err());
}

#[test]
fn htest_is_deterministic() {
    let cmd = HtestCommand {
        source_f: Distribution::Gaussian { d: 2 },
        source_g: Distribution::Gaussian { d: 2 },
        sizes: vec![(30, 40)],
        repetitions: 6,
        level: 0.05,
        methods: vec![DepthMethod::Sphere, DepthMethod::Mahalanobis],
        settings: MethodSettings::default(),
        seed: 3,
    };
    let a = cmd_htest(&cmd).unwrap();
    assert_eq!(a.to_json().unwrap(), cmd_htest(&cmd).unwrap().to_json().unwrap());
    let outcome = sphere_depth::experiments::htest(&cmd).unwrap();
    let fg = outcome.cell(DepthMethod::Sphere, 30, "fg").unwrap();
    let gf = outcome.cell(DepthMethod::Sphere, 40, "gf").unwrap();
    assert_eq!((fg.m, gf.m), (40, 30));
    assert_eq!(fg.z_stats.len(), 6);
    assert!(sphere_depth::experiments::htest(&HtestCommand { repetitions: 0, ..cmd }).is_err());
}

#[test]
fn anomaly_separable_set_scores_perfectly() {
    let mut rows: Vec<Vec<f64>> = (0..60)
        .map(|i| {
            let t = i as f64 * 0.37;
            vec![0.3 * t.cos(), 0.3 * t.sin(), 0.01 * i as f64 - 0.3]
        })
        .collect();
    rows.extend((0..5).map(|k| vec![40.0 + 7.0 * k as f64, -35.0, 50.0]));
    let labels: Vec<u8> = (0..65).map(|i| u8::from(i >= 60)).collect();
    let ds = LabeledDataset::new(SampleSet::from_rows(&rows).unwrap(), labels.clone(), "sep").unwrap();
    let outcome = anomaly(&ds, &AnomalyCommand::default()).unwrap();
    let scores = &outcome.scores[0];
    let worst_outlier = scores[60..].iter().cloned().fold(f64::INFINITY, f64::min);
    let best_inlier = scores[..60].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(worst_outlier > best_inlier);
    assert_eq!(outcome.auroc(DepthMethod::Sphere), Some(1.0));
    assert_eq!(auroc(scores, &labels).unwrap().auroc, 1.0);

    let single = LabeledDataset::new(ds.samples.clone(), vec![0; 65], "one").unwrap();
    assert!(anomaly(&single, &AnomalyCommand::default()).is_err());
}

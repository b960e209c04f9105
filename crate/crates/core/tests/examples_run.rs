macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(depth_basics, "depth_basics.rs");
example!(oracle_check, "oracle_check.rs");
example!(contour, "contour.rs");
example!(rankbench, "rankbench.rs");
example!(htest, "htest.rs");
example!(anomaly, "anomaly.rs");
example!(speedbench, "speedbench.rs");

use sphere_depth::DepthMethod;

#[test]
fn depth_basics_runs() {
    let depths = depth_basics::run_example().unwrap();
    assert!(depths.iter().all(|d| (0.0..=1.0).contains(d)));
    // Modes are deeper than the far point.
    assert!(depths[0] > depths[3] && depths[2] > depths[3]);
}

#[test]
fn oracle_check_runs() {
    assert!(oracle_check::run_example().unwrap() <= 5e-3);
}

#[test]
fn contour_runs() {
    let grid = contour::run_example().unwrap();
    assert_eq!((grid.xs.len(), grid.ys.len()), (29, 29));
    assert!(grid.values.iter().flatten().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn rankbench_runs() {
    let summaries = rankbench::run_example().unwrap();
    for s in summaries.iter().filter(|s| s.method == "density") {
        assert_eq!(s.spearman_mean, 1.0);
    }
}

#[test]
fn htest_runs() {
    let (null, alt) = htest::run_example().unwrap();
    assert_eq!(null.cells.len(), 4);
    assert_eq!(alt.cells.len(), 8);
}

#[test]
fn anomaly_runs() {
    let outcome = anomaly::run_example().unwrap();
    assert!(outcome.auroc(DepthMethod::Sphere).unwrap() >= 0.95);
}

#[test]
fn speedbench_runs() {
    let outcome = speedbench::run_example().unwrap();
    assert_eq!(outcome.entries.len(), 4);
    assert!(outcome.median(DepthMethod::Sphere, 1_000).is_some());
}

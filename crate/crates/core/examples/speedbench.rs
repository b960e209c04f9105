// Wall-clock comparison of the sphere depth solver and the Nelder-Mead
// halfspace depth for a far-away query point.
//
// `cargo run --release --example speedbench`

use sphere_depth::experiments::{speedbench, SpeedBenchCommand, SpeedOutcome};

pub fn run_example() -> sphere_depth::Result<SpeedOutcome> {
    let outcome = speedbench(&SpeedBenchCommand {
        ns: vec![1_000, 10_000],
        repeats: 3,
        ..SpeedBenchCommand::default()
    })?;
    for e in &outcome.entries {
        println!(
            "{:>10} n={:<6} median {:>9.3} ms  depth {:.5}",
            e.method.as_str(),
            e.n,
            e.median_seconds * 1e3,
            e.depth
        );
    }
    Ok(outcome)
}

fn main() -> sphere_depth::Result<()> {
    run_example().map(|_| ())
}

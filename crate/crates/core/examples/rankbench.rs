// How well do depth orderings track the true bi-Gaussian density?
//
// `cargo run --release --example rankbench`

use sphere_depth::experiments::{rankbench, RankBenchCommand, RankSummary};

pub fn run_example() -> sphere_depth::Result<Vec<RankSummary>> {
    let cmd = RankBenchCommand {
        dims: vec![2, 4],
        runs: 5,
        include_density: true,
        ..RankBenchCommand::default()
    };
    let outcome = rankbench(&cmd)?;
    println!("{:>3} {:>9} {:>14} {:>14}", "d", "method", "spearman", "kendall");
    for s in &outcome.summaries {
        println!(
            "{:>3} {:>9} {:>7.4} ±{:.3} {:>7.4} ±{:.3}",
            s.d, s.method, s.spearman_mean, s.spearman_std, s.kendall_mean, s.kendall_std
        );
    }
    Ok(outcome.summaries)
}

fn main() -> sphere_depth::Result<()> {
    run_example().map(|_| ())
}

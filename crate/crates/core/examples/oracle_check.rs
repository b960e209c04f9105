// Compares the Riemannian solver with the brute-force direction grid and
// shows the indicator depth sitting below the halfspace depth.
//
// `cargo run --example oracle_check`

use sphere_depth::data::{gen_mixture, MixtureSpec};
use sphere_depth::{
    grid_oracle_halfspace_depth, grid_oracle_sphere_depth, riemannian_descent, DepthParams, DirectionGrid,
    OptimizerConfig, QueryPoint,
};

/// Returns the largest solver/oracle gap.
pub fn run_example() -> sphere_depth::Result<f64> {
    let x = gen_mixture(&MixtureSpec::bi_gaussian(2)?, 200, 11)?;
    let grid = DirectionGrid::new(2, 4096, 0)?;
    let smooth = DepthParams::smoothed(1.0, 1.0)?;
    let indicator = DepthParams::indicator_or_smoothed(1.0, 0.0)?;

    let mut worst: f64 = 0.0;
    for z in [[0.0, 0.0], [3.0, 4.0], [-2.0, 1.0], [6.0, 0.0]] {
        let q = QueryPoint::new(z.to_vec())?;
        let solver = riemannian_descent(&q, &x, &smooth, &OptimizerConfig::default())?;
        let oracle = grid_oracle_sphere_depth(&q, &x, &smooth, &grid)?;
        let sd0 = grid_oracle_sphere_depth(&q, &x, &indicator, &grid)?.value;
        let hd = grid_oracle_halfspace_depth(&q, &x, &grid)?.value;
        println!(
            "z = {z:?}: solver {:.5} ({} iters), grid {:.5} at direction #{}, SD_0 {sd0:.3} <= HD {hd:.3}",
            solver.value, solver.iterations, oracle.value, oracle.index
        );
        worst = worst.max((solver.value - oracle.value).abs());
    }
    println!("largest gap {worst:.2e}");
    Ok(worst)
}

fn main() -> sphere_depth::Result<()> {
    run_example().map(|_| ())
}

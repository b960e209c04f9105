// Sphere depth of a few query points against a bi-Gaussian sample, with the
// solver diagnostics and the halfspace, Mahalanobis and kernel baselines.
//
// `cargo run --example depth_basics`

use sphere_depth::baseline::{fit_mahalanobis, halfspace_depth, kernelized_spatial_depth, mahalanobis_depth};
use sphere_depth::baseline::{HalfspaceConfig, KernelConfig};
use sphere_depth::data::{gen_mixture, MixtureSpec};
use sphere_depth::{sphere_depth, DepthParams, OptimizerConfig, QueryPoint};

pub fn run_example() -> sphere_depth::Result<Vec<f64>> {
    let x = gen_mixture(&MixtureSpec::bi_gaussian(2)?, 400, 7)?;
    let params = DepthParams::smoothed(1.0, 1.0)?;
    let cfg = OptimizerConfig::default();
    let mahalanobis = fit_mahalanobis(&x, 0.0)?;
    let kernel = KernelConfig::new(1.0)?;

    println!("{:>14} {:>8} {:>5} {:>8} {:>8} {:>8}", "z", "sphere", "iters", "tukey", "mahal", "kspat");
    let mut depths = Vec::new();
    for z in [[3.5, 3.5], [0.0, 0.0], [-3.5, -3.5], [8.0, -8.0]] {
        let q = QueryPoint::new(z.to_vec())?;
        let res = sphere_depth(&q, &x, &params, &cfg)?;
        let hd = halfspace_depth(&q, &x, &HalfspaceConfig::default())?.value;
        println!(
            "{:>14} {:>8.4} {:>5} {:>8.4} {:>8.4} {:>8.4}",
            format!("({}, {})", z[0], z[1]),
            res.value,
            res.iterations,
            hd,
            mahalanobis_depth(&q, &mahalanobis)?,
            kernelized_spatial_depth(&q, &x, &kernel)?,
        );
        depths.push(res.value);
    }
    Ok(depths)
}

fn main() -> sphere_depth::Result<()> {
    run_example().map(|_| ())
}

// Depth contours of a bi-Gaussian sample, written as a CSV grid.
//
// `cargo run --example contour -- [out.csv]`

use sphere_depth::experiments::{contour_grid, ContourCommand, ContourGrid, DataSource, Distribution};
use sphere_depth::{DepthMethod, MethodSettings};

pub fn run_example() -> sphere_depth::Result<ContourGrid> {
    let cmd = ContourCommand {
        source: DataSource::Generated { distribution: Distribution::BiGaussian { d: 2 }, n: 300 },
        method: DepthMethod::Sphere,
        settings: MethodSettings::default(),
        x_range: (-7.0, 7.0),
        y_range: (-7.0, 7.0),
        resolution: (29, 29),
        seed: 3,
    };
    let sample = cmd.source.load(cmd.seed)?;
    let grid = contour_grid(&sample, &cmd)?;

    // Coarse ASCII rendering; darker characters are deeper.
    let peak = grid.values.iter().flatten().cloned().fold(0.0, f64::max);
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    for row in grid.values.iter().rev() {
        let line: String = row
            .iter()
            .map(|v| shades[((v / peak) * 9.0).round() as usize])
            .flat_map(|c| [c, c])
            .collect();
        println!("{line}");
    }
    Ok(grid)
}

fn main() -> sphere_depth::Result<()> {
    let grid = run_example()?;
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, grid.to_table().to_csv()?)?;
        println!("wrote {path}");
    }
    Ok(())
}

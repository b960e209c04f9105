//! Finite direction sets and brute-force minimisation over them.
//!
//! The oracles here replace the continuous infimum over the unit sphere with
//! a minimum over a [`DirectionGrid`]. They are the ground truth against
//! which the gradient solver and the Nelder-Mead halfspace baseline are
//! checked.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::objective::{in_tangent_ball, loss_at};
use crate::sample::{check_dim, dot, DepthParams, Direction, QueryPoint, SampleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridGeneration {
    /// Equiangular on the circle (d = 2), Fibonacci lattice (d = 3), `{+1, -1}` for d = 1.
    Fibonacci,
    /// Normalized standard Gaussians from a seeded ChaCha8 stream.
    RandomUniform,
    /// Caller-supplied directions (e.g. a rotated copy of another grid).
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionGrid {
    directions: Vec<Direction>,
    generation: GridGeneration,
    seed: u64,
}

impl DirectionGrid {
    /// Deterministic lattice for `d <= 3`, seeded uniform directions otherwise.
    pub fn new(d: usize, m: usize, seed: u64) -> Result<Self> {
        if d <= 3 {
            Self::fibonacci(d, m)
        } else {
            Self::random_uniform(d, m, seed)
        }
    }

    pub fn fibonacci(d: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(DepthError::EmptyGrid);
        }
        let directions = match d {
            1 => (0..m)
                .map(|k| Direction::new(vec![if k % 2 == 0 { 1.0 } else { -1.0 }]))
                .collect::<Result<Vec<_>>>()?,
            2 => (0..m)
                .map(|k| {
                    // Half-step offset keeps the axes out of the grid.
                    let theta = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                    Direction::new(vec![theta.cos(), theta.sin()])
                })
                .collect::<Result<Vec<_>>>()?,
            3 => {
                let golden = PI * (3.0 - 5f64.sqrt());
                (0..m)
                    .map(|k| {
                        let y = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                        let rho = (1.0 - y * y).max(0.0).sqrt();
                        let phi = golden * k as f64;
                        Direction::new(vec![rho * phi.cos(), y, rho * phi.sin()])
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            _ => {
                return Err(DepthError::InvalidParameter(format!(
                    "lattice grids exist for d in 1..=3, got d = {d}"
                )))
            }
        };
        Ok(Self {
            directions,
            generation: GridGeneration::Fibonacci,
            seed: 0,
        })
    }

    pub fn random_uniform(d: usize, m: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(DepthError::EmptyGrid);
        }
        if d == 0 {
            return Err(DepthError::Empty("direction dimension is zero"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut directions = Vec::with_capacity(m);
        while directions.len() < m {
            let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            if let Ok(u) = Direction::new(g) {
                directions.push(u);
            }
        }
        Ok(Self {
            directions,
            generation: GridGeneration::RandomUniform,
            seed,
        })
    }

    pub fn from_directions(directions: Vec<Direction>) -> Result<Self> {
        let Some(first) = directions.first() else {
            return Err(DepthError::EmptyGrid);
        };
        let d = first.dim();
        for u in &directions {
            check_dim(d, u.dim())?;
        }
        Ok(Self {
            directions,
            generation: GridGeneration::Custom,
            seed: 0,
        })
    }

    /// Applies the linear map `q` (given as rows) to every direction.
    pub fn transformed(&self, q: &[Vec<f64>]) -> Result<Self> {
        let d = self.dim();
        check_dim(d, q.len())?;
        let directions = self
            .directions
            .iter()
            .map(|u| {
                let v = q.iter().map(|row| dot(row, u.as_slice())).collect();
                Direction::new(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_directions(directions)
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.directions[0].dim()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn generation(&self) -> GridGeneration {
        self.generation
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Minimum of an objective over a grid, with the first minimising direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub argmin: Direction,
    pub index: usize,
}

/// Evaluates `f` on every grid direction in parallel and reduces in index
/// order, so the result is identical to a sequential scan.
fn grid_min<F>(grid: &DirectionGrid, f: F) -> OracleResult
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let values: Vec<f64> = grid.directions.par_iter().map(&f).collect();
    let (index, value) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best });
    OracleResult {
        value,
        argmin: grid.directions[index].clone(),
        index,
    }
}

fn check_grid(z: &QueryPoint, x: &SampleSet, grid: &DirectionGrid) -> Result<()> {
    if grid.is_empty() {
        return Err(DepthError::EmptyGrid);
    }
    z.check_against(x)?;
    check_dim(x.d(), grid.dim())
}

/// Indicator ball mass of `B(z + r u, r)`; the boundary counts as inside.
pub(crate) fn ball_count(u: &[f64], z: &[f64], x: &SampleSet, r: f64) -> usize {
    x.rows().filter(|row| in_tangent_ball(row, z, u, r)).count()
}

/// Grid minimum of the sphere-depth objective. `s = 0` uses the indicator
/// (ball mass counts), `s > 0` the sigmoid-smoothed loss.
pub fn grid_oracle_sphere_depth(
    z: &QueryPoint,
    x: &SampleSet,
    p: &DepthParams,
    grid: &DirectionGrid,
) -> Result<OracleResult> {
    p.check_oracle()?;
    check_grid(z, x, grid)?;
    let n = x.n() as f64;
    let zs = z.as_slice();
    Ok(if p.is_indicator() {
        grid_min(grid, |u| ball_count(u.as_slice(), zs, x, p.r) as f64 / n)
    } else {
        grid_min(grid, |u| loss_at(u.as_slice(), zs, x, p))
    })
}

/// Fraction of samples in the closed halfspace `<u, x_i - z> >= 0`.
pub(crate) fn halfspace_fraction(u: &[f64], z: &[f64], x: &SampleSet) -> f64 {
    let count = x
        .rows()
        .filter(|row| row.iter().zip(z).zip(u).map(|((xi, zi), ui)| ui * (xi - zi)).sum::<f64>() >= 0.0)
        .count();
    count as f64 / x.n() as f64
}

/// Grid minimum of the closed-halfspace mass (Tukey depth).
pub fn grid_oracle_halfspace_depth(
    z: &QueryPoint,
    x: &SampleSet,
    grid: &DirectionGrid,
) -> Result<OracleResult> {
    check_grid(z, x, grid)?;
    let zs = z.as_slice();
    Ok(grid_min(grid, |u| halfspace_fraction(u.as_slice(), zs, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::norm;

    fn cross() -> SampleSet {
        SampleSet::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap()
    }

    #[test]
    fn grids_are_unit_and_deterministic() {
        for d in 1..=6 {
            let g = DirectionGrid::new(d, 257, 3).unwrap();
            assert_eq!(g.len(), 257);
            for u in g.directions() {
                assert!((norm(u.as_slice()) - 1.0).abs() <= 1e-12);
            }
            assert_eq!(g, DirectionGrid::new(d, 257, 3).unwrap());
        }
        assert!(DirectionGrid::new(2, 0, 0).is_err());
        assert!(DirectionGrid::from_directions(vec![]).is_err());
    }

    #[test]
    fn single_coincident_sample_has_full_depth() {
        let z = QueryPoint::new(vec![0.4, -0.1]).unwrap();
        let x = SampleSet::from_rows(&[z.as_slice()]).unwrap();
        let grid = DirectionGrid::new(2, 64, 0).unwrap();
        let p = DepthParams::indicator_or_smoothed(0.7, 0.0).unwrap();
        assert_eq!(grid_oracle_sphere_depth(&z, &x, &p, &grid).unwrap().value, 1.0);
        assert_eq!(grid_oracle_halfspace_depth(&z, &x, &grid).unwrap().value, 1.0);
    }

    #[test]
    fn far_query_has_zero_indicator_depth() {
        let x = cross();
        let r = 0.5;
        let z = QueryPoint::new(vec![2.0 * r + 12.0, 0.0]).unwrap();
        let p = DepthParams::indicator_or_smoothed(r, 0.0).unwrap();
        let grid = DirectionGrid::new(2, 128, 0).unwrap();
        assert_eq!(grid_oracle_sphere_depth(&z, &x, &p, &grid).unwrap().value, 0.0);
        assert_eq!(grid_oracle_halfspace_depth(&z, &x, &grid).unwrap().value, 0.0);
    }

    #[test]
    fn cross_at_origin() {
        let x = cross();
        let z = QueryPoint::new(vec![0.0, 0.0]).unwrap();
        let grid = DirectionGrid::new(2, 4096, 0).unwrap();
        let p = DepthParams::indicator_or_smoothed(0.4, 0.0).unwrap();
        let sd = grid_oracle_sphere_depth(&z, &x, &p, &grid).unwrap();
        assert_eq!(sd.value, 0.0);
        assert_eq!(sd.index, 0);
        // Exhaustive count: every generic direction leaves exactly two points on the closed side.
        let mut counts = Vec::new();
        for u in grid.directions() {
            counts.push(x.rows().filter(|row| dot(u.as_slice(), row) >= 0.0).count());
        }
        assert!(counts.iter().all(|&c| c == 2));
        assert_eq!(grid_oracle_halfspace_depth(&z, &x, &grid).unwrap().value, 0.5);
    }

    #[test]
    fn indicator_values_are_multiples_of_one_over_n() {
        let x = SampleSet::from_rows(&[[0.1, 0.2], [0.5, -0.3], [-0.4, 0.9], [1.0, 1.0], [0.0, 0.0], [0.3, 0.3], [-1.0, 0.2]]).unwrap();
        let grid = DirectionGrid::new(2, 512, 0).unwrap();
        let p = DepthParams::indicator_or_smoothed(0.8, 0.0).unwrap();
        for zi in [[0.0, 0.0], [0.2, 0.1], [1.5, -0.5]] {
            let z = QueryPoint::new(zi.to_vec()).unwrap();
            let v = grid_oracle_sphere_depth(&z, &x, &p, &grid).unwrap().value * 7.0;
            assert!((v - v.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn ties_resolve_to_lowest_index() {
        let x = SampleSet::from_rows(&[[100.0, 100.0]]).unwrap();
        let z = QueryPoint::new(vec![0.0, 0.0]).unwrap();
        let grid = DirectionGrid::new(2, 16, 0).unwrap();
        let p = DepthParams::indicator_or_smoothed(1.0, 0.0).unwrap();
        let res = grid_oracle_sphere_depth(&z, &x, &p, &grid).unwrap();
        assert_eq!(res.index, 0);
        assert_eq!(&res.argmin, &grid.directions()[0]);
    }

    #[test]
    fn parallel_reduction_matches_sequential_scan() {
        let x = SampleSet::from_rows(&[[0.1, 0.2, 0.0], [0.5, -0.3, 1.0], [-0.4, 0.9, 0.2], [0.3, 0.3, -0.6]]).unwrap();
        let z = QueryPoint::new(vec![0.1, 0.1, 0.1]).unwrap();
        let grid = DirectionGrid::new(3, 1000, 0).unwrap();
        let p = DepthParams::smoothed(0.9, 0.2).unwrap();
        let res = grid_oracle_sphere_depth(&z, &x, &p, &grid).unwrap();
        let mut best = (0, f64::INFINITY);
        for (i, u) in grid.directions().iter().enumerate() {
            let v = loss_at(u.as_slice(), z.as_slice(), &x, &p);
            if v < best.1 {
                best = (i, v);
            }
        }
        assert_eq!(res.index, best.0);
        assert_eq!(res.value.to_bits(), best.1.to_bits());
    }
}

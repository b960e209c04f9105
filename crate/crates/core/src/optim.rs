//! Riemannian gradient descent on the unit sphere for the smoothed sphere
//! depth.
//!
//! Each step projects the ambient gradient onto the tangent space at `u`,
//! normalises the descent direction and moves along the great circle by the
//! current angle `alpha`. The angle starts at `alpha0` (default `pi`) and is
//! halved on every step that increases the loss; it is never increased again.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::objective::loss_and_gradient_at;
use crate::sample::{check_dim, dot, norm, DepthParams, Direction, QueryPoint, SampleSet};

/// Tangent-gradient norm below which the current point is declared stationary.
pub const STATIONARY_NORM: f64 = 1e-14;

const ORTHO_TOL: f64 = 1e-8;

/// How the starting direction is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum InitStrategy {
    /// Normalised sample mean.
    PaperMean,
    /// Normalised `mean - z`; equivariant under isometries.
    MeanMinusZ,
    FixedDirection(Vec<f64>),
    SeededRandom(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Stop once an accepted step changes the loss by less than this.
    pub tol: f64,
    /// Initial step angle in `(0, pi]`.
    pub alpha0: f64,
    pub max_iter: usize,
    pub init: InitStrategy,
    /// Reject loss-increasing steps. When false the step is kept and only the
    /// angle is halved.
    pub revert_on_increase: bool,
    pub record_trace: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            alpha0: std::f64::consts::PI,
            max_iter: 1000,
            init: InitStrategy::PaperMean,
            revert_on_increase: true,
            record_trace: false,
        }
    }
}

impl OptimizerConfig {
    pub fn with_init(mut self, init: InitStrategy) -> Self {
        self.init = init;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(DepthError::InvalidParameter(format!("tol must be > 0, got {}", self.tol)));
        }
        if !(self.alpha0 > 0.0 && self.alpha0 <= std::f64::consts::PI) {
            return Err(DepthError::InvalidParameter(format!(
                "alpha0 must lie in (0, pi], got {}",
                self.alpha0
            )));
        }
        if self.max_iter == 0 {
            return Err(DepthError::InvalidParameter("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

/// Which starting direction was actually used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitReport {
    pub strategy: InitStrategy,
    /// The strategy produced a zero vector and `e_1` was used instead.
    pub fell_back: bool,
}

/// Outcome of a depth solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthResult {
    pub value: f64,
    pub direction: Direction,
    pub iterations: usize,
    pub converged: bool,
    /// Objective evaluations (including the initial one).
    pub evaluations: usize,
    pub init: Option<InitReport>,
    /// Reference loss after initialisation and after every iteration.
    pub loss_trace: Option<Vec<f64>>,
    /// Step angle in effect at the start of every iteration.
    pub alpha_trace: Option<Vec<f64>>,
}

/// Removes the component of `g` along the unit vector `u`.
pub fn tangent_project(u: &Direction, g: &[f64]) -> Result<Vec<f64>> {
    check_dim(u.dim(), g.len())?;
    Ok(project(u.as_slice(), g))
}

fn project(u: &[f64], g: &[f64]) -> Vec<f64> {
    let radial = dot(g, u);
    g.iter().zip(u).map(|(gi, ui)| gi - radial * ui).collect()
}

/// Geodesic step `cos(alpha) u + sin(alpha) v` for orthonormal `u`, `v`.
pub fn exp_map(u: &Direction, v: &Direction, alpha: f64) -> Result<Direction> {
    check_dim(u.dim(), v.dim())?;
    let ip = dot(u.as_slice(), v.as_slice());
    if ip.abs() > ORTHO_TOL {
        return Err(DepthError::NotOrthogonal(ip));
    }
    if !(0.0..=std::f64::consts::PI).contains(&alpha) {
        return Err(DepthError::InvalidParameter(format!(
            "step angle must lie in [0, pi], got {alpha}"
        )));
    }
    Ok(geodesic(u.as_slice(), v.as_slice(), alpha))
}

fn geodesic(u: &[f64], v: &[f64], alpha: f64) -> Direction {
    let (s, c) = alpha.sin_cos();
    let w: Vec<f64> = u.iter().zip(v).map(|(ui, vi)| c * ui + s * vi).collect();
    let nw = norm(&w);
    Direction::from_unit(w.into_iter().map(|x| x / nw).collect())
}

fn initial_direction(z: &QueryPoint, x: &SampleSet, init: &InitStrategy) -> Result<(Direction, bool)> {
    let d = x.d();
    let raw = match init {
        InitStrategy::PaperMean => x.mean(),
        InitStrategy::MeanMinusZ => {
            let mut m = x.mean();
            m.iter_mut().zip(z.as_slice()).for_each(|(mi, zi)| *mi -= zi);
            m
        }
        InitStrategy::FixedDirection(u) => {
            check_dim(d, u.len())?;
            u.clone()
        }
        InitStrategy::SeededRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            loop {
                let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                if norm(&g) > 0.0 {
                    break g;
                }
            }
        }
    };
    let nr = norm(&raw);
    if nr > 0.0 && nr.is_finite() {
        Ok((Direction::new(raw)?, false))
    } else if matches!(init, InitStrategy::FixedDirection(_)) {
        Err(DepthError::InvalidParameter("fixed initial direction is zero".into()))
    } else {
        Ok((Direction::basis(d, 0), true))
    }
}

struct Evaluation {
    loss: f64,
    grad: Vec<f64>,
}

fn evaluate(u: &Direction, z: &QueryPoint, x: &SampleSet, p: &DepthParams) -> Evaluation {
    let mut grad = vec![0.0; x.d()];
    let loss = loss_and_gradient_at(u.as_slice(), z.as_slice(), x, p, &mut grad);
    Evaluation { loss, grad }
}

/// Minimises the smoothed ball mass over unit directions.
///
/// Returns the best loss encountered together with its direction. When
/// `revert_on_increase` is set the reported loss sequence is non-increasing;
/// otherwise the iterate follows every step, including worsening ones, and
/// the best visited point is what gets reported.
pub fn riemannian_descent(
    z: &QueryPoint,
    x: &SampleSet,
    p: &DepthParams,
    cfg: &OptimizerConfig,
) -> Result<DepthResult> {
    p.check_smoothed()?;
    cfg.validate()?;
    z.check_against(x)?;

    let (mut u, fell_back) = initial_direction(z, x, &cfg.init)?;
    let mut current = evaluate(&u, z, x, p);
    let mut evaluations = 1;
    // Reference value `d` of the algorithm; differs from the loss at `u` only in literal mode.
    let mut reference = current.loss;
    let mut best = (current.loss, u.clone());
    let mut alpha = cfg.alpha0;

    let mut loss_trace = cfg.record_trace.then(|| vec![reference]);
    let mut alpha_trace = cfg.record_trace.then(Vec::new);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        let tangent = project(u.as_slice(), &current.grad);
        let tn = norm(&tangent);
        if tn < STATIONARY_NORM {
            converged = true;
            break;
        }
        iterations += 1;
        if let Some(t) = alpha_trace.as_mut() {
            t.push(alpha);
        }

        let v: Vec<f64> = tangent.iter().map(|t| -t / tn).collect();
        let candidate = geodesic(u.as_slice(), &v, alpha);
        let next = evaluate(&candidate, z, x, p);
        evaluations += 1;
        if next.loss < best.0 {
            best = (next.loss, candidate.clone());
        }

        if next.loss > reference {
            alpha /= 2.0;
            if !cfg.revert_on_increase {
                u = candidate;
                current = next;
            }
        } else if (next.loss - reference).abs() < cfg.tol {
            reference = next.loss;
            u = candidate;
            current = next;
            converged = true;
        } else {
            reference = next.loss;
            u = candidate;
            current = next;
        }
        if let Some(t) = loss_trace.as_mut() {
            t.push(reference);
        }
        if converged {
            break;
        }
    }

    let (value, direction) = if cfg.revert_on_increase {
        (current.loss, u)
    } else {
        best
    };
    Ok(DepthResult {
        value,
        direction,
        iterations,
        converged,
        evaluations,
        init: Some(InitReport {
            strategy: cfg.init.clone(),
            fell_back,
        }),
        loss_trace,
        alpha_trace,
    })
}

/// Smoothed sphere depth of `z` with respect to the sample `x`.
pub fn sphere_depth(
    z: &QueryPoint,
    x: &SampleSet,
    p: &DepthParams,
    cfg: &OptimizerConfig,
) -> Result<DepthResult> {
    riemannian_descent(z, x, p, cfg)
}

/// Depth of every query point against `x`, evaluated in parallel. Output order
/// follows input order and each entry equals the single-point result exactly.
pub fn batch_depth(
    points: &[QueryPoint],
    x: &SampleSet,
    p: &DepthParams,
    cfg: &OptimizerConfig,
) -> Result<Vec<DepthResult>> {
    points
        .par_iter()
        .enumerate()
        .map(|(index, z)| {
            sphere_depth(z, x, p, cfg).map_err(|e| DepthError::AtPoint {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Scores every row of `x` against `x` itself.
pub fn self_depths(x: &SampleSet, p: &DepthParams, cfg: &OptimizerConfig) -> Result<Vec<f64>> {
    let points = x
        .rows()
        .map(|row| QueryPoint::new(row.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(batch_depth(&points, x, p, cfg)?.into_iter().map(|r| r.value).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{grid_oracle_sphere_depth, DirectionGrid};
    use crate::objective::sphere_loss;
    use std::f64::consts::PI;

    fn gaussian(n: usize, d: usize, seed: u64) -> SampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..n * d).map(|_| StandardNormal.sample(&mut rng)).collect();
        SampleSet::new(data, n, d).unwrap()
    }

    #[test]
    fn tangent_projection_cases() {
        let u = Direction::basis(2, 0);
        assert_eq!(tangent_project(&u, &[3.0, 4.0]).unwrap(), vec![0.0, 4.0]);
        assert_eq!(tangent_project(&u, &[0.0, 2.5]).unwrap(), vec![0.0, 2.5]);
        let w = Direction::new(vec![1.0, 2.0, -2.0]).unwrap();
        let radial: Vec<f64> = w.as_slice().iter().map(|x| 4.2 * x).collect();
        let t = tangent_project(&w, &radial).unwrap();
        assert!(norm(&t) < 1e-14);
        let g = [0.3, -7.0, 2.0];
        let t = tangent_project(&w, &g).unwrap();
        assert!(dot(&t, w.as_slice()).abs() <= 1e-12 * norm(&g));
        assert!(tangent_project(&w, &[1.0]).is_err());
    }

    #[test]
    fn exp_map_endpoints() {
        let u = Direction::new(vec![0.6, 0.8, 0.0]).unwrap();
        let v = Direction::new(vec![-0.8, 0.6, 0.0]).unwrap();
        let at = |a| exp_map(&u, &v, a).unwrap();
        assert_eq!(at(0.0).as_slice(), u.as_slice());
        for (a, b) in at(PI / 2.0).as_slice().iter().zip(v.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in at(PI).as_slice().iter().zip(u.as_slice()) {
            assert!((a + b).abs() < 1e-15);
        }
        assert!((norm(at(1.234).as_slice()) - 1.0).abs() < 1e-10);
        let not_orth = Direction::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(exp_map(&u, &not_orth, 0.5), Err(DepthError::NotOrthogonal(_))));
        assert!(exp_map(&u, &v, 4.0).is_err());
    }

    #[test]
    fn single_coincident_sample_is_stationary() {
        let z = QueryPoint::new(vec![0.5, -0.25]).unwrap();
        let x = SampleSet::from_rows(&[z.as_slice()]).unwrap();
        let p = DepthParams::smoothed(1.0, 1.0).unwrap();
        let res = sphere_depth(&z, &x, &p, &OptimizerConfig::default()).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.converged);
        assert!((res.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_mean_falls_back_to_first_axis() {
        let x = SampleSet::from_rows(&[[1.0, 0.5], [-1.0, -0.5], [0.2, -1.0], [-0.2, 1.0]]).unwrap();
        let z = QueryPoint::new(vec![0.1, 0.3]).unwrap();
        let p = DepthParams::smoothed(1.0, 0.5).unwrap();
        let res = sphere_depth(&z, &x, &p, &OptimizerConfig::default()).unwrap();
        assert!(res.init.as_ref().unwrap().fell_back);
        assert!(res.converged);
    }

    #[test]
    fn deep_outlier_collapses() {
        let x = gaussian(1000, 3, 5);
        let z = QueryPoint::new(vec![10.0, 10.0, 10.0]).unwrap();
        let p = DepthParams::smoothed(1.0, 1.0).unwrap();
        let res = sphere_depth(&z, &x, &p, &OptimizerConfig::default()).unwrap();
        assert!(res.value < 1e-6, "{}", res.value);
        // Closest sample to any tangent ball is at least `dist(z, X) - 2r` away from its centre.
        let min_dist = x
            .rows()
            .map(|row| row.iter().zip(z.as_slice()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min);
        let gap = min_dist - p.r;
        let bound = 1.0 / (1.0 + (-(p.r * p.r - gap * gap) / p.s).exp());
        assert!(res.value <= bound);
    }

    #[test]
    fn agrees_with_grid_oracle_on_gaussian() {
        let x = gaussian(500, 2, 42);
        let z = QueryPoint::new(vec![0.0, 0.0]).unwrap();
        let p = DepthParams::smoothed(1.0, 1.0).unwrap();
        let res = sphere_depth(&z, &x, &p, &OptimizerConfig::default()).unwrap();
        let grid = DirectionGrid::new(2, 4096, 0).unwrap();
        let oracle = grid_oracle_sphere_depth(&z, &x, &p, &grid).unwrap();
        assert!((res.value - oracle.value).abs() <= 5e-3, "{} vs {}", res.value, oracle.value);
    }

    #[test]
    fn reported_value_matches_direction() {
        let x = gaussian(300, 4, 9);
        let z = QueryPoint::new(vec![0.3, 0.0, -0.2, 0.5]).unwrap();
        let p = DepthParams::smoothed(1.2, 0.7).unwrap();
        for revert in [true, false] {
            let cfg = OptimizerConfig { revert_on_increase: revert, ..Default::default() };
            let res = sphere_depth(&z, &x, &p, &cfg).unwrap();
            let direct = sphere_loss(&res.direction, &z, &x, &p).unwrap();
            assert!((res.value - direct).abs() <= 1e-12);
            assert!(res.iterations <= cfg.max_iter);
        }
    }

    #[test]
    fn traces_are_monotone_and_alpha_halves_on_increase() {
        let x = gaussian(400, 3, 21);
        let z = QueryPoint::new(vec![0.2, -0.4, 0.1]).unwrap();
        let p = DepthParams::smoothed(1.0, 0.3).unwrap();
        let cfg = OptimizerConfig::default().with_trace();
        let res = sphere_depth(&z, &x, &p, &cfg).unwrap();
        let losses = res.loss_trace.unwrap();
        let alphas = res.alpha_trace.unwrap();
        assert_eq!(alphas.len(), res.iterations);
        assert!(losses.windows(2).all(|w| w[1] <= w[0]));
        for (i, w) in alphas.windows(2).enumerate() {
            assert!(w[1] == w[0] || w[1] == w[0] / 2.0, "step {i}");
        }
    }

    #[test]
    fn seeded_random_starts_agree_on_unimodal_data() {
        let x = gaussian(400, 2, 77);
        let z = QueryPoint::new(vec![0.5, 0.2]).unwrap();
        let p = DepthParams::smoothed(1.0, 1.0).unwrap();
        let values: Vec<f64> = (1..=3)
            .map(|seed| {
                let cfg = OptimizerConfig::default().with_init(InitStrategy::SeededRandom(seed));
                sphere_depth(&z, &x, &p, &cfg).unwrap().value
            })
            .collect();
        let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread <= 1e-2, "{values:?}");
    }

    #[test]
    fn batch_matches_sequential() {
        let x = gaussian(150, 2, 3);
        let p = DepthParams::smoothed(1.0, 1.0).unwrap();
        let cfg = OptimizerConfig::default();
        let mut points: Vec<QueryPoint> = x.rows().take(20).map(|r| QueryPoint::new(r.to_vec()).unwrap()).collect();
        points.push(points[3].clone());
        let batch = batch_depth(&points, &x, &p, &cfg).unwrap();
        for (z, b) in points.iter().zip(&batch) {
            assert_eq!(&sphere_depth(z, &x, &p, &cfg).unwrap(), b);
        }
        assert_eq!(batch[3], batch[20]);
        let bad = vec![points[0].clone(), QueryPoint::new(vec![1.0]).unwrap()];
        assert!(matches!(batch_depth(&bad, &x, &p, &cfg), Err(DepthError::AtPoint { index: 1, .. })));
    }

    #[test]
    fn rejects_invalid_config() {
        let x = gaussian(10, 2, 1);
        let z = QueryPoint::new(vec![0.0, 0.0]).unwrap();
        let p = DepthParams::smoothed(1.0, 1.0).unwrap();
        for cfg in [
            OptimizerConfig { tol: 0.0, ..Default::default() },
            OptimizerConfig { alpha0: 4.0, ..Default::default() },
            OptimizerConfig { max_iter: 0, ..Default::default() },
        ] {
            assert!(sphere_depth(&z, &x, &p, &cfg).is_err());
        }
        let indicator = DepthParams { r: 1.0, s: 0.0 };
        assert!(sphere_depth(&z, &x, &indicator, &OptimizerConfig::default()).is_err());
    }
}

//! Tukey halfspace depth by derivative-free search over directions.
//!
//! The objective `y -> #{<y/|y|, x_i> >= <y/|y|, z>} / n` is piecewise
//! constant, so single simplex runs stall on plateaus. We run several
//! Nelder-Mead searches from different starts and keep the best.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use crate::error::{DepthError, Result};
use crate::grid::halfspace_fraction;
use crate::optim::DepthResult;
use crate::sample::{norm, Direction, QueryPoint, SampleSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceConfig {
    pub restarts: usize,
    pub seed: u64,
    pub simplex_tolerance: f64,
    /// Evaluation budget per restart.
    pub max_evals: usize,
}

impl Default for HalfspaceConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            seed: 0,
            simplex_tolerance: 1e-6,
            max_evals: 1000,
        }
    }
}

impl HalfspaceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(DepthError::InvalidParameter("restarts must be >= 1".into()));
        }
        if !(self.simplex_tolerance > 0.0) {
            return Err(DepthError::InvalidParameter("simplex_tolerance must be > 0".into()));
        }
        if self.max_evals == 0 {
            return Err(DepthError::InvalidParameter("max_evals must be >= 1".into()));
        }
        Ok(())
    }
}

fn starts(z: &QueryPoint, x: &SampleSet, cfg: &HalfspaceConfig) -> Vec<Vec<f64>> {
    let d = x.d();
    let mut out = Vec::with_capacity(cfg.restarts);
    // First start points from the sample mean towards z.
    let away: Vec<f64> = z.as_slice().iter().zip(x.mean()).map(|(zi, mi)| zi - mi).collect();
    let na = norm(&away);
    out.push(if na > 0.0 {
        away.iter().map(|v| v / na).collect()
    } else {
        Direction::basis(d, 0).into_inner()
    });
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    while out.len() < cfg.restarts {
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let ng = norm(&g);
        if ng > 0.0 {
            out.push(g.iter().map(|v| v / ng).collect());
        }
    }
    out
}

/// Halfspace depth of `z` in `x`, best of `cfg.restarts` Nelder-Mead runs.
pub fn halfspace_depth(z: &QueryPoint, x: &SampleSet, cfg: &HalfspaceConfig) -> Result<DepthResult> {
    cfg.validate()?;
    z.check_against(x)?;
    let zs = z.as_slice();
    let objective = |y: &[f64]| {
        let ny = norm(y);
        if !(ny > 0.0 && ny.is_finite()) {
            return 1.0;
        }
        let u: Vec<f64> = y.iter().map(|v| v / ny).collect();
        halfspace_fraction(&u, zs, x)
    };
    let opts = NelderMeadOptions {
        initial_step: 0.5,
        tolerance: cfg.simplex_tolerance,
        max_evals: cfg.max_evals,
    };

    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    let mut evaluations = 0;
    for start in starts(z, x, cfg) {
        let out = nelder_mead(objective, &start, &opts);
        evaluations += out.evals;
        if best.as_ref().is_none_or(|b| out.f < b.0) {
            best = Some((out.f, out.x, out.converged));
        }
    }
    let (value, y, converged) = best.expect("at least one restart");
    let direction = Direction::new(y).unwrap_or_else(|_| Direction::basis(x.d(), 0));
    Ok(DepthResult {
        value,
        direction,
        iterations: cfg.restarts,
        converged,
        evaluations,
        init: None,
        loss_trace: None,
        alpha_trace: None,
    })
}

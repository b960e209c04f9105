//! Kernelized spatial depth with a Gaussian kernel.
//!
//! `1 - | (1/m) sum_i (phi(z) - phi(x_i)) / |phi(z) - phi(x_i)| |` in the
//! feature space, expanded entirely through kernel evaluations. Samples that
//! coincide with `z` in feature space are dropped and `m` counts the rest.
//! This is the stand-in used for the localised spatial depth comparison.

use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::sample::{QueryPoint, SampleSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    /// Bandwidth `h` of `exp(-|x - y|^2 / h^2)`.
    pub bandwidth_h: f64,
}

impl KernelConfig {
    pub fn new(bandwidth_h: f64) -> Result<Self> {
        let k = Self { bandwidth_h };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_h > 0.0 && self.bandwidth_h.is_finite()) {
            return Err(DepthError::InvalidParameter(format!(
                "bandwidth h must be > 0, got {}",
                self.bandwidth_h
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn kernel(&self, a: &[f64], b: &[f64]) -> f64 {
        let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        (-d2 / (self.bandwidth_h * self.bandwidth_h)).exp()
    }
}

/// Kernelized spatial depth fitted to a reference sample. Holds the sample
/// Gram matrix so repeated queries cost `O(n^2)` arithmetic but only `O(n)`
/// kernel evaluations.
#[derive(Debug, Clone)]
pub struct KernelSpatialDepth {
    sample: SampleSet,
    config: KernelConfig,
    gram: Vec<f64>,
}

impl KernelSpatialDepth {
    pub fn fit(sample: &SampleSet, config: KernelConfig) -> Result<Self> {
        config.validate()?;
        let n = sample.n();
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            gram[i * n + i] = 1.0;
            for j in 0..i {
                let k = config.kernel(sample.row(i), sample.row(j));
                gram[i * n + j] = k;
                gram[j * n + i] = k;
            }
        }
        Ok(Self {
            sample: sample.clone(),
            config,
            gram,
        })
    }

    pub fn config(&self) -> KernelConfig {
        self.config
    }

    pub fn depth(&self, z: &QueryPoint) -> Result<f64> {
        z.check_against(&self.sample)?;
        let n = self.sample.n();
        let kz: Vec<f64> = self
            .sample
            .rows()
            .map(|row| self.config.kernel(z.as_slice(), row))
            .collect();
        Ok(spatial_from_kernels(&kz, |i, j| self.gram[i * n + j]))
    }
}

/// Depth from `k(z, x_i)` values and a Gram accessor, using
/// `<phi(z) - phi(x_i), phi(z) - phi(x_j)> = 1 - k(z,x_i) - k(z,x_j) + k(x_i,x_j)`.
fn spatial_from_kernels<G>(kz: &[f64], gram: G) -> f64
where
    G: Fn(usize, usize) -> f64,
{
    let kept: Vec<(usize, f64)> = kz
        .iter()
        .enumerate()
        .filter_map(|(i, &k)| {
            let sq = 2.0 - 2.0 * k;
            (sq > 0.0).then(|| (i, sq.sqrt()))
        })
        .collect();
    if kept.is_empty() {
        return 1.0;
    }
    let mut total = 0.0;
    for &(i, di) in &kept {
        for &(j, dj) in &kept {
            let inner = if i == j { di * di } else { 1.0 - kz[i] - kz[j] + gram(i, j) };
            total += inner / (di * dj);
        }
    }
    let m = kept.len() as f64;
    (1.0 - total.max(0.0).sqrt() / m).clamp(0.0, 1.0)
}

/// One-shot kernelized spatial depth of `z` in `x`.
pub fn kernelized_spatial_depth(z: &QueryPoint, x: &SampleSet, k: &KernelConfig) -> Result<f64> {
    k.validate()?;
    z.check_against(x)?;
    let kz: Vec<f64> = x.rows().map(|row| k.kernel(z.as_slice(), row)).collect();
    Ok(spatial_from_kernels(&kz, |i, j| k.kernel(x.row(i), x.row(j))))
}

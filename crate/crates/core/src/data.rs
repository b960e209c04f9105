//! Seeded synthetic distributions, their exact densities, and data
//! standardisation.
//!
//! Every generator owns a private `ChaCha8Rng` seeded from a `u64`, so output
//! is a pure function of `(spec, n, seed)` and identical across platforms.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::sample::{check_dim, SampleSet};

/// Identifies the RNG algorithm behind every seeded routine.
pub const RNG_NAME: &str = "rand_chacha::ChaCha8Rng/0.3";

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub mean: Vec<f64>,
    /// Row-major `d x d`.
    pub covariance: Vec<Vec<f64>>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<GaussianComponent>,
}

fn to_matrix(rows: &[Vec<f64>], d: usize) -> Result<DMatrix<f64>> {
    check_dim(d, rows.len())?;
    for r in rows {
        check_dim(d, r.len())?;
    }
    Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

fn cholesky(rows: &[Vec<f64>], d: usize) -> Result<Cholesky<f64, Dyn>> {
    let m = to_matrix(rows, d)?;
    if (&m - m.transpose()).amax() > 1e-12 * m.amax().max(1.0) {
        return Err(DepthError::InvalidParameter("covariance is not symmetric".into()));
    }
    m.cholesky().ok_or_else(|| DepthError::Singular {
        hint: "covariance must be symmetric positive-definite".into(),
    })
}

fn identity(d: usize) -> Vec<Vec<f64>> {
    (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

impl MixtureSpec {
    /// Normalises weights and checks that every covariance is SPD.
    pub fn new(mut components: Vec<GaussianComponent>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(DepthError::Empty("mixture has no components"));
        };
        let d = first.mean.len();
        if d == 0 {
            return Err(DepthError::Empty("component mean has no coordinates"));
        }
        let mut total = 0.0;
        for c in &components {
            check_dim(d, c.mean.len())?;
            if !(c.weight > 0.0 && c.weight.is_finite()) {
                return Err(DepthError::InvalidParameter(format!("weight must be > 0, got {}", c.weight)));
            }
            cholesky(&c.covariance, d)?;
            total += c.weight;
        }
        components.iter_mut().for_each(|c| c.weight /= total);
        Ok(Self { components })
    }

    pub fn gaussian(mean: Vec<f64>, covariance: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(vec![GaussianComponent { mean, covariance, weight: 1.0 }])
    }

    pub fn standard_gaussian(d: usize) -> Result<Self> {
        Self::gaussian(vec![0.0; d], identity(d))
    }

    /// Equal-weight mixture of `N(-3.5 * 1, I)` and `N(3.5 * 1, I)`.
    pub fn bi_gaussian(d: usize) -> Result<Self> {
        Self::new(vec![
            GaussianComponent { mean: vec![-3.5; d], covariance: identity(d), weight: 0.5 },
            GaussianComponent { mean: vec![3.5; d], covariance: identity(d), weight: 0.5 },
        ])
    }

    pub fn dim(&self) -> usize {
        self.components[0].mean.len()
    }
}

struct PreparedComponent {
    mean: DVector<f64>,
    factor: DMatrix<f64>,
    inverse: DMatrix<f64>,
    log_norm: f64,
    weight: f64,
}

fn prepare(spec: &MixtureSpec) -> Result<Vec<PreparedComponent>> {
    let d = spec.dim();
    spec.components
        .iter()
        .map(|c| {
            let chol = cholesky(&c.covariance, d)?;
            let factor = chol.l();
            let log_det: f64 = factor.diagonal().iter().map(|v| 2.0 * v.ln()).sum();
            Ok(PreparedComponent {
                mean: DVector::from_column_slice(&c.mean),
                inverse: chol.inverse(),
                factor,
                log_norm: -0.5 * (d as f64 * (2.0 * std::f64::consts::PI).ln() + log_det),
                weight: c.weight,
            })
        })
        .collect()
}

fn pick_component(rng: &mut ChaCha8Rng, comps: &[PreparedComponent]) -> usize {
    if comps.len() == 1 {
        return 0;
    }
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (k, c) in comps.iter().enumerate() {
        acc += c.weight;
        if u < acc {
            return k;
        }
    }
    comps.len() - 1
}

fn draw_mixture(rng: &mut ChaCha8Rng, comps: &[PreparedComponent], d: usize) -> Vec<f64> {
    let c = &comps[pick_component(rng, comps)];
    let g = DVector::from_iterator(d, (0..d).map(|_| StandardNormal.sample(&mut *rng)));
    (&c.mean + &c.factor * g).iter().copied().collect()
}

fn collect_rows<F>(n: usize, d: usize, max_norm: Option<f64>, mut draw: F) -> Result<SampleSet>
where
    F: FnMut() -> Vec<f64>,
{
    if n == 0 {
        return Err(DepthError::Empty("requested zero samples"));
    }
    let mut data = Vec::with_capacity(n * d);
    let mut count = 0;
    while count < n {
        let x = draw();
        if let Some(limit) = max_norm {
            if x.iter().map(|v| v * v).sum::<f64>().sqrt() > limit {
                continue;
            }
        }
        data.extend_from_slice(&x);
        count += 1;
    }
    SampleSet::new(data, n, d)
}

/// `n` i.i.d. draws from the mixture.
pub fn gen_mixture(spec: &MixtureSpec, n: usize, seed: u64) -> Result<SampleSet> {
    let comps = prepare(spec)?;
    let d = spec.dim();
    let mut rng = rng_from_seed(seed);
    collect_rows(n, d, None, || draw_mixture(&mut rng, &comps, d))
}

/// Mixture draws conditioned on `|x| <= max_norm` by rejection.
pub fn gen_mixture_truncated(spec: &MixtureSpec, n: usize, max_norm: f64, seed: u64) -> Result<SampleSet> {
    if !(max_norm > 0.0) {
        return Err(DepthError::InvalidParameter(format!("truncation norm must be > 0, got {max_norm}")));
    }
    let comps = prepare(spec)?;
    let d = spec.dim();
    let mut rng = rng_from_seed(seed);
    collect_rows(n, d, Some(max_norm), || draw_mixture(&mut rng, &comps, d))
}

/// Mixture density at every point.
pub fn true_density_bi_gaussian(points: &[Vec<f64>], spec: &MixtureSpec) -> Result<Vec<f64>> {
    let comps = prepare(spec)?;
    let d = spec.dim();
    points
        .iter()
        .map(|p| {
            check_dim(d, p.len())?;
            let x = DVector::from_column_slice(p);
            Ok(comps
                .iter()
                .map(|c| {
                    let diff = &x - &c.mean;
                    let q = diff.dot(&(&c.inverse * &diff));
                    c.weight * (c.log_norm - 0.5 * q).exp()
                })
                .sum())
        })
        .collect()
}

/// Multivariate Student t, optionally truncated by rejection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudentSpec {
    pub df: f64,
    pub mean: Vec<f64>,
    pub scale: Vec<Vec<f64>>,
    pub truncation_norm: Option<f64>,
}

impl StudentSpec {
    pub fn new(df: f64, mean: Vec<f64>, scale: Vec<Vec<f64>>, truncation_norm: Option<f64>) -> Result<Self> {
        if !(df > 0.0 && df.is_finite()) {
            return Err(DepthError::InvalidParameter(format!("df must be > 0, got {df}")));
        }
        if let Some(t) = truncation_norm {
            if !(t > 0.0) {
                return Err(DepthError::InvalidParameter(format!("truncation norm must be > 0, got {t}")));
            }
        }
        cholesky(&scale, mean.len())?;
        Ok(Self { df, mean, scale, truncation_norm })
    }

    /// `t_2(0, I_2)` truncated at norm 10000.
    pub fn t2_identity() -> Self {
        Self::new(2.0, vec![0.0, 0.0], identity(2), Some(10_000.0)).expect("valid preset")
    }

    /// `t_3(0, I_2 + 0.6 [[0,1],[1,0]])` truncated at norm 10000.
    pub fn t3_correlated() -> Self {
        Self::new(3.0, vec![0.0, 0.0], vec![vec![1.0, 0.6], vec![0.6, 1.0]], Some(10_000.0)).expect("valid preset")
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// `mean + L g / sqrt(chi2_df / df)` with `L L^T = scale`; draws beyond the
/// truncation norm are rejected and redrawn.
pub fn gen_student_t(spec: &StudentSpec, n: usize, seed: u64) -> Result<SampleSet> {
    let d = spec.dim();
    let factor = cholesky(&spec.scale, d)?.l();
    let mean = DVector::from_column_slice(&spec.mean);
    let chi2 = ChiSquared::new(spec.df).map_err(|e| DepthError::InvalidParameter(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    collect_rows(n, d, spec.truncation_norm, || {
        let g = DVector::from_iterator(d, (0..d).map(|_| StandardNormal.sample(&mut rng)));
        let w: f64 = chi2.sample(&mut rng);
        let scale = (spec.df / w).sqrt();
        (&mean + &factor * g * scale).iter().copied().collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationStats {
    pub per_dimension_mean: Vec<f64>,
    /// Square root of the average unbiased per-dimension variance.
    pub pooled_std: f64,
}

/// Pooled standard deviation without transforming the data.
pub fn standardization_stats(x: &SampleSet) -> Result<StandardizationStats> {
    if x.n() < 2 {
        return Err(DepthError::InvalidParameter(format!(
            "standardization needs at least 2 samples, got {}",
            x.n()
        )));
    }
    let mean = x.mean();
    let mut var = vec![0.0; x.d()];
    for row in x.rows() {
        for ((v, xi), m) in var.iter_mut().zip(row).zip(&mean) {
            *v += (xi - m) * (xi - m);
        }
    }
    let denom = (x.n() - 1) as f64;
    let avg = var.iter().map(|v| v / denom).sum::<f64>() / x.d() as f64;
    let pooled_std = avg.sqrt();
    if !(pooled_std > 0.0) {
        return Err(DepthError::ConstantData("every feature is constant".into()));
    }
    Ok(StandardizationStats { per_dimension_mean: mean, pooled_std })
}

/// Centres every column and divides by the pooled standard deviation.
pub fn standardize(x: &SampleSet) -> Result<(SampleSet, StandardizationStats)> {
    let stats = standardization_stats(x)?;
    let out = x.map_rows(x.d(), |row, dst| {
        for ((o, xi), m) in dst.iter_mut().zip(row).zip(&stats.per_dimension_mean) {
            *o = (xi - m) / stats.pooled_std;
        }
    })?;
    Ok((out, stats))
}

//! The smoothed ball-mass objective over directions.
//!
//! For a query `z`, radius `r` and direction `u`, the ball `B(z + r u, r)` is
//! tangent to `z`. The objective is the sigmoid-smoothed fraction of samples
//! inside that ball:
//!
//! ```text
//! L(u) = 1/n * sum_i sig_s(r^2 - |x_i - z - r u|^2)
//! ```
//!
//! and the sphere depth is its infimum over unit `u`.

use crate::error::{DepthError, Result};
use crate::sample::{check_dim, DepthParams, Direction, QueryPoint, SampleSet};

fn check_scale(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(DepthError::InvalidParameter(format!(
            "sigmoid scale s must be > 0, got {s}"
        )));
    }
    Ok(())
}

/// `1 / (1 + exp(-t/s))`, saturating cleanly for large `|t/s|`.
pub fn sigmoid(t: f64, s: f64) -> Result<f64> {
    check_scale(s)?;
    Ok(sigmoid_unchecked(t / s))
}

/// `(1/s) * sig(t/s) * (1 - sig(t/s))`.
pub fn sigmoid_derivative(t: f64, s: f64) -> Result<f64> {
    check_scale(s)?;
    Ok(sigmoid_derivative_unchecked(t / s) / s)
}

#[inline]
pub(crate) fn sigmoid_unchecked(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Derivative of the unit-scale sigmoid at `x`, written in terms of
/// `exp(-|x|)` so neither branch overflows.
#[inline]
pub(crate) fn sigmoid_derivative_unchecked(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    let d = 1.0 + e;
    e / (d * d)
}

fn check_inputs(u: &Direction, z: &QueryPoint, x: &SampleSet) -> Result<()> {
    z.check_against(x)?;
    check_dim(x.d(), u.dim())
}

/// Empirical objective `L(u)`.
pub fn sphere_loss(
    u: &Direction,
    z: &QueryPoint,
    x: &SampleSet,
    p: &DepthParams,
) -> Result<f64> {
    p.check_smoothed()?;
    check_inputs(u, z, x)?;
    Ok(loss_at(u.as_slice(), z.as_slice(), x, p))
}

/// Ambient-space gradient of [`sphere_loss`] with respect to `u`, before
/// tangent projection:
/// `1/n * sum_i sig_s'(r^2 - |w_i|^2) * 2 r w_i` with `w_i = x_i - z - r u`.
pub fn sphere_loss_gradient(
    u: &Direction,
    z: &QueryPoint,
    x: &SampleSet,
    p: &DepthParams,
) -> Result<Vec<f64>> {
    p.check_smoothed()?;
    check_inputs(u, z, x)?;
    let mut grad = vec![0.0; x.d()];
    loss_and_gradient_at(u.as_slice(), z.as_slice(), x, p, &mut grad);
    Ok(grad)
}

/// `|x - z - r u|^2`, subtracting `z` first so that `x = z` gives `r^2 |u|^2`.
#[inline]
fn offset_sq_norm(row: &[f64], z: &[f64], u: &[f64], r: f64) -> f64 {
    row.iter()
        .zip(z)
        .zip(u)
        .map(|((xi, zi), ui)| {
            let w = (xi - zi) - r * ui;
            w * w
        })
        .sum()
}

/// Smoothed loss; parameters are assumed validated.
pub(crate) fn loss_at(u: &[f64], z: &[f64], x: &SampleSet, p: &DepthParams) -> f64 {
    let r2 = p.r * p.r;
    let inv_s = 1.0 / p.s;
    let total: f64 = x
        .rows()
        .map(|row| sigmoid_unchecked((r2 - offset_sq_norm(row, z, u, p.r)) * inv_s))
        .sum();
    total / x.n() as f64
}

/// Ball membership `|x - z - r u|^2 <= r^2` for unit `u`, evaluated as
/// `2 r <u, x - z> - |x - z|^2 >= 0`. The rewrite is exact at `x = z`, and a
/// member always has `<u, x - z> >= 0`, so it lies in the matching halfspace.
#[inline]
pub(crate) fn in_tangent_ball(row: &[f64], z: &[f64], u: &[f64], r: f64) -> bool {
    let (mut proj, mut sq) = (0.0, 0.0);
    for ((xi, zi), ui) in row.iter().zip(z).zip(u) {
        let v = xi - zi;
        proj += ui * v;
        sq += v * v;
    }
    2.0 * r * proj - sq >= 0.0
}

/// Loss and ambient gradient in a single pass over the samples; the gradient
/// is written into `grad`.
pub(crate) fn loss_and_gradient_at(
    u: &[f64],
    z: &[f64],
    x: &SampleSet,
    p: &DepthParams,
    grad: &mut [f64],
) -> f64 {
    let r2 = p.r * p.r;
    let inv_s = 1.0 / p.s;
    grad.iter_mut().for_each(|g| *g = 0.0);
    let mut total = 0.0;
    for row in x.rows() {
        let t = (r2 - offset_sq_norm(row, z, u, p.r)) * inv_s;
        total += sigmoid_unchecked(t);
        let weight = sigmoid_derivative_unchecked(t);
        if weight == 0.0 {
            continue;
        }
        for (((g, xi), zi), ui) in grad.iter_mut().zip(row).zip(z).zip(u) {
            *g += weight * ((xi - zi) - p.r * ui);
        }
    }
    let n = x.n() as f64;
    // d/du of the sigmoid argument is 2 r w_i, and sig_s' carries a 1/s factor.
    let scale = 2.0 * p.r * inv_s / n;
    grad.iter_mut().for_each(|g| *g *= scale);
    total / n
}

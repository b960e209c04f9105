//! Core value types: sample matrices, query points, unit directions and the
//! `(r, s)` depth parameters.

use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};

/// Immutable `n x d` matrix of observations stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl SampleSet {
    /// Builds a sample set from row-major storage.
    pub fn new(data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(DepthError::Empty("sample set has no rows"));
        }
        if d == 0 {
            return Err(DepthError::Empty("sample set has no columns"));
        }
        if data.len() != n * d {
            return Err(DepthError::DimensionMismatch {
                expected: n * d,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(DepthError::NonFinite {
                row: pos / d,
                col: pos % d,
            });
        }
        Ok(Self { data, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(DepthError::Empty("sample set has no rows"));
        }
        let d = rows[0].as_ref().len();
        let mut data = Vec::with_capacity(n * d);
        for row in rows {
            let row = row.as_ref();
            if row.len() != d {
                return Err(DepthError::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(data, n, d)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.d)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Column means.
    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.d];
        for row in self.rows() {
            for (m, x) in mean.iter_mut().zip(row) {
                *m += x;
            }
        }
        let inv = 1.0 / self.n as f64;
        mean.iter_mut().for_each(|m| *m *= inv);
        mean
    }

    /// Applies `f` to every row, producing a new sample set of dimension `d_out`.
    pub fn map_rows<F>(&self, d_out: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let mut out = vec![0.0; self.n * d_out];
        for (row, dst) in self.rows().zip(out.chunks_exact_mut(d_out)) {
            f(row, dst);
        }
        Self::new(out, self.n, d_out)
    }

    /// Concatenates the rows of two sample sets of equal dimension.
    pub fn concat(&self, other: &SampleSet) -> Result<Self> {
        check_dim(self.d, other.d)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self::new(data, self.n + other.n, self.d)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }
}

/// A point whose depth is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryPoint(Vec<f64>);

impl QueryPoint {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if z.is_empty() {
            return Err(DepthError::Empty("query point has no coordinates"));
        }
        if let Some(col) = z.iter().position(|v| !v.is_finite()) {
            return Err(DepthError::NonFinite { row: 0, col });
        }
        Ok(Self(z))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn check_against(&self, sample: &SampleSet) -> Result<()> {
        check_dim(sample.d(), self.dim())
    }
}

impl AsRef<[f64]> for QueryPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Unit vector on the sphere `S^{d-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction(Vec<f64>);

const UNIT_TOL: f64 = 1e-12;

impl Direction {
    /// Normalizes `u` unless it is already unit within `1e-12`.
    pub fn new(mut u: Vec<f64>) -> Result<Self> {
        if u.is_empty() {
            return Err(DepthError::Empty("direction has no coordinates"));
        }
        let norm = norm(&u);
        if !norm.is_finite() || norm == 0.0 {
            return Err(DepthError::InvalidParameter(format!(
                "direction must have finite non-zero norm, got {norm}"
            )));
        }
        if (norm - 1.0).abs() > UNIT_TOL {
            u.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(Self(u))
    }

    /// Wraps a vector the caller has already normalised.
    pub(crate) fn from_unit(u: Vec<f64>) -> Self {
        Self(u)
    }

    /// `e_k` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut u = vec![0.0; d];
        u[k] = 1.0;
        Self(u)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Direction {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Radius `r` and smoothing scale `s` of the sphere depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthParams {
    pub r: f64,
    pub s: f64,
}

impl DepthParams {
    /// Parameters for the smoothed depth; requires `r > 0` and `s > 0`.
    pub fn smoothed(r: f64, s: f64) -> Result<Self> {
        let p = Self { r, s };
        p.check_smoothed()?;
        Ok(p)
    }

    /// Parameters admitting `s = 0`, the indicator depth. Only grid oracles accept these.
    pub fn indicator_or_smoothed(r: f64, s: f64) -> Result<Self> {
        let p = Self { r, s };
        p.check_oracle()?;
        Ok(p)
    }

    pub fn check_oracle(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(DepthError::InvalidParameter(format!(
                "radius r must be > 0, got {}",
                self.r
            )));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(DepthError::InvalidParameter(format!(
                "smoothing s must be >= 0, got {}",
                self.s
            )));
        }
        Ok(())
    }

    pub fn check_smoothed(&self) -> Result<()> {
        self.check_oracle()?;
        if self.s == 0.0 {
            return Err(DepthError::InvalidParameter(
                "s = 0 is the indicator depth; use a grid oracle".into(),
            ));
        }
        Ok(())
    }

    pub fn is_indicator(&self) -> bool {
        self.s == 0.0
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(DepthError::DimensionMismatch { expected, got });
    }
    Ok(())
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let err = SampleSet::new(vec![1.0, f64::NAN, 2.0, 3.0], 2, 2).unwrap_err();
        assert!(matches!(err, DepthError::NonFinite { row: 0, col: 1 }));
        assert!(SampleSet::new(vec![], 0, 2).is_err());
        assert!(SampleSet::new(vec![1.0; 5], 2, 2).is_err());
    }

    #[test]
    fn direction_is_renormalized() {
        let u = Direction::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(u.as_slice(), &[0.6, 0.8]);
        assert!(Direction::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(DepthParams::smoothed(1.0, 0.0).is_err());
        assert!(DepthParams::smoothed(0.0, 1.0).is_err());
        assert!(DepthParams::indicator_or_smoothed(1.0, 0.0).is_ok());
        assert!(DepthParams::indicator_or_smoothed(1.0, -1.0).is_err());
    }

    #[test]
    fn mean_and_rows() {
        let x = SampleSet::from_rows(&[[0.0, 0.0], [2.0, 4.0]]).unwrap();
        assert_eq!(x.mean(), vec![1.0, 2.0]);
        assert_eq!(x.row(1), &[2.0, 4.0]);
    }
}

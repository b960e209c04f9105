use nalgebra::{DMatrix, DVector};
use crate::error::{DepthError, Result};
use crate::sample::{check_dim, QueryPoint, SampleSet};

/// Location and inverse scatter for the Mahalanobis depth
/// `1 / (1 + (z - mu)^T Sigma^{-1} (z - mu))`.
#[derive(Debug, Clone, PartialEq)]
pub struct MahalanobisModel {
    mean: Vec<f64>,
    covariance: DMatrix<f64>,
    covariance_inverse: DMatrix<f64>,
    regularization: f64,
}

fn singular(regularization: f64) -> DepthError {
    let hint = if regularization == 0.0 {
        "set a positive regularization to add to the covariance diagonal".to_string()
    } else {
        format!("regularization {regularization} was not enough; increase it")
    };
    DepthError::Singular { hint }
}

impl MahalanobisModel {
    /// Builds a model from a covariance matrix (regularization is added to its diagonal).
    pub fn from_covariance(mean: Vec<f64>, covariance: DMatrix<f64>, regularization: f64) -> Result<Self> {
        let d = mean.len();
        if d == 0 {
            return Err(DepthError::Empty("mean has no coordinates"));
        }
        check_dim(d, covariance.nrows())?;
        check_dim(d, covariance.ncols())?;
        if !(regularization >= 0.0 && regularization.is_finite()) {
            return Err(DepthError::InvalidParameter(format!(
                "regularization must be >= 0, got {regularization}"
            )));
        }
        let covariance = covariance + DMatrix::identity(d, d) * regularization;
        let chol = covariance.clone().cholesky().ok_or_else(|| singular(regularization))?;
        let inv = chol.inverse();
        let covariance_inverse = (&inv + inv.transpose()) * 0.5;
        if covariance_inverse.iter().any(|v| !v.is_finite()) {
            return Err(singular(regularization));
        }
        Ok(Self {
            mean,
            covariance,
            covariance_inverse,
            regularization,
        })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Regularized covariance.
    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn covariance_inverse(&self) -> &DMatrix<f64> {
        &self.covariance_inverse
    }

    pub fn regularization(&self) -> f64 {
        self.regularization
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Column means and unbiased covariance (plus `regularization * I`).
pub fn fit_mahalanobis(x: &SampleSet, regularization: f64) -> Result<MahalanobisModel> {
    if x.n() < 2 {
        return Err(DepthError::InvalidParameter(format!(
            "covariance needs at least 2 samples, got {}",
            x.n()
        )));
    }
    let d = x.d();
    let mean = x.mean();
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for row in x.rows() {
        let c = DVector::from_iterator(d, row.iter().zip(&mean).map(|(a, m)| a - m));
        cov += &c * c.transpose();
    }
    cov /= (x.n() - 1) as f64;
    MahalanobisModel::from_covariance(mean, cov, regularization)
}

pub fn mahalanobis_depth(z: &QueryPoint, model: &MahalanobisModel) -> Result<f64> {
    check_dim(model.dim(), z.dim())?;
    let diff = DVector::from_iterator(
        model.dim(),
        z.as_slice().iter().zip(&model.mean).map(|(a, m)| a - m),
    );
    let q = diff.dot(&(&model.covariance_inverse * &diff)).max(0.0);
    Ok(1.0 / (1.0 + q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn depth_at_mean_and_identity_case() {
        let model = MahalanobisModel::from_covariance(vec![1.0, -1.0, 0.0], DMatrix::identity(3, 3), 0.0).unwrap();
        assert_eq!(mahalanobis_depth(&QueryPoint::new(vec![1.0, -1.0, 0.0]).unwrap(), &model).unwrap(), 1.0);
        let z = QueryPoint::new(vec![2.0, 0.0, 1.0]).unwrap();
        assert!((mahalanobis_depth(&z, &model).unwrap() - 0.25).abs() < 1e-15);
        assert!(mahalanobis_depth(&QueryPoint::new(vec![0.0]).unwrap(), &model).is_err());
    }

    #[test]
    fn two_point_fit_by_hand() {
        let x = SampleSet::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let m = fit_mahalanobis(&x, 1.0).unwrap();
        assert_eq!(m.mean(), &[1.0, 0.0]);
        let inv = m.covariance_inverse();
        assert!((inv[(0, 0)] - 1.0 / 3.0).abs() < 1e-14);
        assert!((inv[(1, 1)] - 1.0).abs() < 1e-14);
        assert!(inv[(0, 1)].abs() < 1e-14);
    }

    #[test]
    fn degenerate_inputs() {
        let same = SampleSet::from_rows(&[[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]]).unwrap();
        match fit_mahalanobis(&same, 0.0) {
            Err(DepthError::Singular { hint }) => assert!(hint.contains("regularization")),
            other => panic!("expected singular error, got {other:?}"),
        }
        assert!(fit_mahalanobis(&same, 0.1).is_ok());
        let one = SampleSet::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(fit_mahalanobis(&one, 1.0).is_err());
    }

    #[test]
    fn inverse_and_solve_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|_| {
                let a: f64 = rng.gen_range(-1.0..1.0);
                vec![a, 0.5 * a + rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0)]
            })
            .collect();
        let x = SampleSet::from_rows(&rows).unwrap();
        let m = fit_mahalanobis(&x, 0.0).unwrap();
        let prod = m.covariance() * m.covariance_inverse();
        let eye = DMatrix::<f64>::identity(4, 4);
        assert!((prod - &eye).amax() < 1e-8);
        let inv = m.covariance_inverse();
        assert!((inv - inv.transpose()).amax() < 1e-10);

        // Independent route: LU solve of Sigma w = (z - mu).
        let z = [0.3, -0.2, 1.1, 0.7];
        let diff = DVector::from_iterator(4, z.iter().zip(m.mean()).map(|(a, b)| a - b));
        let w = m.covariance().clone().lu().solve(&diff).unwrap();
        let expected = 1.0 / (1.0 + diff.dot(&w));
        let got = mahalanobis_depth(&QueryPoint::new(z.to_vec()).unwrap(), &m).unwrap();
        assert!((got - expected).abs() < 1e-12);
    }
}

//! A common interface over every depth in the crate, fitted to a reference
//! sample, so tests and experiments can swap methods.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baseline::{fit_mahalanobis, halfspace_depth, mahalanobis_depth, HalfspaceConfig, KernelConfig, KernelSpatialDepth, MahalanobisModel};
use crate::error::{DepthError, Result};
use crate::grid::{grid_oracle_sphere_depth, DirectionGrid};
use crate::optim::{sphere_depth, OptimizerConfig};
use crate::sample::{DepthParams, QueryPoint, SampleSet};

/// Depth of a point with respect to a fixed reference distribution.
pub trait DepthFunctional: Sync {
    fn depth(&self, z: &QueryPoint) -> Result<f64>;
}

impl DepthFunctional for MahalanobisModel {
    fn depth(&self, z: &QueryPoint) -> Result<f64> {
        mahalanobis_depth(z, self)
    }
}

impl DepthFunctional for KernelSpatialDepth {
    fn depth(&self, z: &QueryPoint) -> Result<f64> {
        KernelSpatialDepth::depth(self, z)
    }
}

/// Smoothed sphere depth computed by Riemannian descent.
#[derive(Debug, Clone)]
pub struct SphereDepthFunctional {
    pub sample: SampleSet,
    pub params: DepthParams,
    pub config: OptimizerConfig,
}

impl DepthFunctional for SphereDepthFunctional {
    fn depth(&self, z: &QueryPoint) -> Result<f64> {
        Ok(sphere_depth(z, &self.sample, &self.params, &self.config)?.value)
    }
}

#[derive(Debug, Clone)]
pub struct HalfspaceFunctional {
    pub sample: SampleSet,
    pub config: HalfspaceConfig,
}

impl DepthFunctional for HalfspaceFunctional {
    fn depth(&self, z: &QueryPoint) -> Result<f64> {
        Ok(halfspace_depth(z, &self.sample, &self.config)?.value)
    }
}

/// Sphere depth (indicator when `s = 0`) minimised over a direction grid.
#[derive(Debug, Clone)]
pub struct GridOracleFunctional {
    pub sample: SampleSet,
    pub params: DepthParams,
    pub grid: DirectionGrid,
}

impl DepthFunctional for GridOracleFunctional {
    fn depth(&self, z: &QueryPoint) -> Result<f64> {
        Ok(grid_oracle_sphere_depth(z, &self.sample, &self.params, &self.grid)?.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepthMethod {
    Sphere,
    Halfspace,
    Mahalanobis,
    Kspatial,
    OracleGrid,
}

impl DepthMethod {
    pub const ALL: [DepthMethod; 5] = [
        DepthMethod::Sphere,
        DepthMethod::Halfspace,
        DepthMethod::Mahalanobis,
        DepthMethod::Kspatial,
        DepthMethod::OracleGrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DepthMethod::Sphere => "sphere",
            DepthMethod::Halfspace => "halfspace",
            DepthMethod::Mahalanobis => "mahalanobis",
            DepthMethod::Kspatial => "kspatial",
            DepthMethod::OracleGrid => "oracle-grid",
        }
    }
}

impl fmt::Display for DepthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DepthMethod {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| DepthError::InvalidParameter(format!("unknown depth method '{s}'")))
    }
}

/// Every knob any method might need; each method reads its own fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSettings {
    pub params: DepthParams,
    pub optimizer: OptimizerConfig,
    pub halfspace: HalfspaceConfig,
    pub kernel: KernelConfig,
    pub mahalanobis_regularization: f64,
    pub grid_size: usize,
    pub grid_seed: u64,
}

impl Default for MethodSettings {
    fn default() -> Self {
        Self {
            params: DepthParams { r: 1.0, s: 1.0 },
            optimizer: OptimizerConfig::default(),
            halfspace: HalfspaceConfig::default(),
            kernel: KernelConfig { bandwidth_h: 1.0 },
            mahalanobis_regularization: 0.0,
            grid_size: 4096,
            grid_seed: 0,
        }
    }
}

/// Fits `method` to the reference sample.
pub fn fit_depth(method: DepthMethod, sample: &SampleSet, settings: &MethodSettings) -> Result<Box<dyn DepthFunctional>> {
    Ok(match method {
        DepthMethod::Sphere => {
            if settings.params.is_indicator() {
                return Err(DepthError::InvalidParameter(
                    "s = 0 is not supported by the sphere solver; use method oracle-grid".into(),
                ));
            }
            settings.params.check_smoothed()?;
            settings.optimizer.validate()?;
            Box::new(SphereDepthFunctional {
                sample: sample.clone(),
                params: settings.params,
                config: settings.optimizer.clone(),
            })
        }
        DepthMethod::Halfspace => {
            settings.halfspace.validate()?;
            Box::new(HalfspaceFunctional {
                sample: sample.clone(),
                config: settings.halfspace.clone(),
            })
        }
        DepthMethod::Mahalanobis => Box::new(fit_mahalanobis(sample, settings.mahalanobis_regularization)?),
        DepthMethod::Kspatial => Box::new(KernelSpatialDepth::fit(sample, settings.kernel)?),
        DepthMethod::OracleGrid => {
            settings.params.check_oracle()?;
            Box::new(GridOracleFunctional {
                sample: sample.clone(),
                params: settings.params,
                grid: DirectionGrid::new(sample.d(), settings.grid_size, settings.grid_seed)?,
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in DepthMethod::ALL {
            assert_eq!(m.as_str().parse::<DepthMethod>().unwrap(), m);
        }
        assert!("tukey".parse::<DepthMethod>().is_err());
    }

    #[test]
    fn sphere_rejects_indicator_params() {
        let x = SampleSet::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let settings = MethodSettings {
            params: DepthParams { r: 1.0, s: 0.0 },
            ..Default::default()
        };
        let err = fit_depth(DepthMethod::Sphere, &x, &settings).err().unwrap();
        assert!(err.to_string().contains("oracle-grid"));
        assert!(fit_depth(DepthMethod::OracleGrid, &x, &settings).is_ok());
    }

    #[test]
    fn all_methods_score_in_unit_interval() {
        let x = SampleSet::from_rows(&[[0.0, 0.0], [1.0, 0.2], [0.3, 0.9], [-0.5, 0.4], [0.2, -0.6]]).unwrap();
        let z = QueryPoint::new(vec![0.1, 0.1]).unwrap();
        let settings = MethodSettings { grid_size: 256, ..Default::default() };
        for m in DepthMethod::ALL {
            let f = fit_depth(m, &x, &settings).unwrap();
            let v = f.depth(&z).unwrap();
            assert!((0.0..=1.0).contains(&v), "{m}: {v}");
        }
    }
}

//! Sphere depth: a kernelized halfspace depth computed by Riemannian gradient
//! descent on the unit sphere.
//!
//! The depth of `z` with respect to a sample is the smallest smoothed mass of
//! any ball of radius `r` whose boundary passes through `z`. Parameterising
//! the ball centre as `z + r u` turns this into a minimisation over unit
//! directions `u`, which [`optim::sphere_depth`] solves with a geodesic
//! descent and step halving.
//!
//! Alongside the solver the crate provides
//! - brute-force direction-grid oracles ([`grid`]),
//! - halfspace, Mahalanobis and kernelized spatial depths ([`baseline`]),
//! - the depth quality index, homogeneity test, rank correlations and AUROC ([`stats`]),
//! - seeded synthetic distributions ([`data`]),
//! - CSV ingestion, reports and experiment drivers ([`io`], [`report`], [`experiments`]).
//!
//! ```
//! use sphere_depth::{sphere_depth, DepthParams, OptimizerConfig, QueryPoint, SampleSet};
//!
//! let x = SampleSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
//! let z = QueryPoint::new(vec![0.5, 0.5]).unwrap();
//! let p = DepthParams::smoothed(1.0, 0.1).unwrap();
//! let res = sphere_depth(&z, &x, &p, &OptimizerConfig::default()).unwrap();
//! assert!(res.value > 0.0 && res.value < 1.0);
//! ```

pub mod baseline;
pub mod data;
pub mod error;
pub mod experiments;
pub mod functional;
pub mod grid;
pub mod io;
pub mod objective;
pub mod optim;
pub mod report;
pub mod sample;
pub mod stats;

pub use error::{DepthError, Result};
pub use functional::{fit_depth, DepthFunctional, DepthMethod, MethodSettings};
pub use grid::{grid_oracle_halfspace_depth, grid_oracle_sphere_depth, DirectionGrid, OracleResult};
pub use objective::{sigmoid, sigmoid_derivative, sphere_loss, sphere_loss_gradient};
pub use optim::{batch_depth, exp_map, riemannian_descent, self_depths, sphere_depth, tangent_project, DepthResult, InitStrategy, OptimizerConfig};
pub use sample::{DepthParams, Direction, QueryPoint, SampleSet};

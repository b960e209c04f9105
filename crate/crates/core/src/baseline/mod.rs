//! Comparison depths: halfspace (Tukey) depth by Nelder-Mead, Mahalanobis
//! depth and kernelized spatial depth.

mod halfspace;
mod kspatial;
mod mahalanobis;
pub mod nelder_mead;

pub use halfspace::{halfspace_depth, HalfspaceConfig};
pub use kspatial::{kernelized_spatial_depth, KernelConfig, KernelSpatialDepth};
pub use mahalanobis::{fit_mahalanobis, mahalanobis_depth, MahalanobisModel};

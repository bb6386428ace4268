//! Planar Gaussian random fields and their representations as space-domain
//! scaled stationary Ornstein-Uhlenbeck fields.
//!
//! The crate is organized in four layers:
//!
//! * [`kernels`]: closed-form covariances of the Wiener field, the stationary
//!   OU field, bivariate and tied-down Wiener bridges, tied-down scaled
//!   bridges, the Kiefer process and `(F,G)`-Wiener bridges.
//! * [`transforms`]: the `(g, f)` axis transforms that turn a standard OU
//!   field into each bridge-type field, with deterministic identity checks
//!   and a rank-based separability falsifier.
//! * [`sampling`]: exact seeded sampling on rectangular grids, either by a
//!   dense Cholesky factor, by Kronecker factors for separable kernels, or
//!   pathwise through a transformed Wiener field.
//! * [`mcverify`]: empirical covariance estimation and the statistical gates
//!   that compare sampled fields against their target kernels.
//!
//! [`catalog`] names each field family with its default grid and sampler, and
//! [`suites`] runs the checks across the whole catalog.

// Negated comparisons are used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod grid;
pub mod kernels;
pub mod mcverify;
pub mod report;
pub mod sampling;
pub mod suites;
pub mod transforms;

pub use catalog::Family;
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use kernels::{AxisKernel, CdfSpec, Kernel2D, OUParams};
pub use report::VerificationReport;
pub use sampling::FieldSample;
pub use transforms::{AxisTransform, OURepresentation};

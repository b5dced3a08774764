//! Uniform sampling of unit vectors on n-dimensional spherical caps and
//! hollow cones in O(n) arithmetic per sample.
//!
//! The planar angle of each sample is drawn from the exact angle law of the
//! cap (by inverse transform through the solid-angle map, or by a
//! one-dimensional rejection step that never touches it), combined with a
//! uniform point on the lower-dimensional sphere, and rotated onto the
//! requested axis by a single plane rotation.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod anglemap;
pub mod baselines;
pub mod cli;
pub mod direction;
pub mod error;
pub mod output;
pub mod rng;
pub mod sampler;
pub mod specfun;
pub mod stats;

pub use anglemap::{AngleMap, Cost};
pub use direction::{ConeSpec, Direction, HollowConeSpec};
pub use error::{Error, Result};
pub use rng::RandomStream;
pub use sampler::{CapSampler, HollowConeSampler, Method, PlanarAngleSampler};
pub use stats::{KsReport, ThetaDistribution};

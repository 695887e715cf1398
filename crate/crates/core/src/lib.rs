//! Geodesics of the Grassmann manifold between zero-set subspaces of
//! reproducing kernel Hilbert spaces.

pub mod error;
pub mod gram;
pub mod grassmann;
pub mod hardy;
pub mod infinite;
pub mod kernels;
pub mod metrics;
pub mod numerics;

pub use error::{Error, Result};
pub use kernels::{Point, PointSet, SpaceSpec};
pub use numerics::{CMatrix, C64};

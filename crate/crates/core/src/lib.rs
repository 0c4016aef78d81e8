//! Computations on the one-loop deformed c-map spaces N̄ₙ: the metric and its
//! curvature, exact Killing fields and their Lie algebra, center lattices,
//! Heisenberg and quaternion lattices, and fiber volumes.

pub mod error;
pub mod exact;
pub mod fd;
pub mod fields;
pub mod geometry;
pub mod heis;
pub mod liealg;
pub mod quatarith;
pub mod sample;
pub mod volume;

pub use error::{Error, Result};
pub use geometry::{ModelParams, PointBarN};

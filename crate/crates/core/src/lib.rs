//! Scale-indexed homology of finite metric spaces.
//!
//! A finite metric space carries, for every scale `ε > 0`, a chain complex
//! generated by the cliques of its strict-`ε` proximity graph (the
//! Vietoris–Rips complex at open scale `ε`). This crate computes the
//! homology of those complexes over exact rationals, tracks how classes
//! connect across a decreasing tower of scales, derives induced maps and
//! spectral radii for sampled self-maps, and estimates Bowen topological
//! entropy from orbit metrics.
//!
//! Everything that branches on a comparison `d < ε` is exact: distances and
//! scales are arbitrary-precision rationals, so threshold ties are resolved
//! deterministically rather than by floating-point luck.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live
//! in the companion `scaled-homology-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod complex;
pub mod entropy;
pub mod homology;
pub mod matrix;
pub mod metric;
pub mod reduce;
pub mod scalar;
pub mod selfmap;
pub mod spectral;
pub mod tower;

pub use complex::ScaleComplex;
pub use homology::{ChainVector, HomologyGroup};
pub use matrix::QMat;
pub use metric::{FiniteMetricSpace, MetricKind, Net};
pub use scalar::Q;
pub use selfmap::{InducedMatrix, SampledSelfMap};
pub use tower::{ScaleTower, StabilityReport};

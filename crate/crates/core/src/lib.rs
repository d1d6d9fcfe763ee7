//! Stable multi-matchings of marked Poisson point processes.
//!
//! Points of a homogeneous Poisson process in a box or torus each carry a
//! number of stubs (half-edges). This crate samples such instances, matches
//! the stubs into simple graphs (the stable multi-matching and several
//! constructive schemes), and measures the component structure of the result.
//!
//! All numeric code is generic over [`Real`]; the `*64` aliases at the crate
//! root fix the scalar to `f64`, which is what the command-line tool uses.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod io;
pub mod matching;
pub mod process;
pub mod scalar;
pub mod schemes;

pub use error::{Error, Result};
pub use geometry::{distance, BoxSpec, PointSet, SpatialIndex};
pub use matching::{Edge, ForbiddenPairs, MatchResult, Matching};
pub use process::{DegreeDistribution, MarkedPointSet};
pub use scalar::Real;

pub type BoxSpec64 = BoxSpec<f64>;
pub type PointSet64 = PointSet<f64>;
pub type MarkedPointSet64 = MarkedPointSet<f64>;
pub type Matching64 = Matching<f64>;
pub type MatchResult64 = MatchResult<f64>;

pub type BoxSpec32 = BoxSpec<f32>;
pub type PointSet32 = PointSet<f32>;
pub type MarkedPointSet32 = MarkedPointSet<f32>;

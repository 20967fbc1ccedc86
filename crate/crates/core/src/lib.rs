//! Face counts of random spherical Voronoi tessellations.
//!
//! `n + 1` independent uniform points on the sphere `S^d` generate a Voronoi
//! tessellation; the cell of a uniformly chosen generator, rotated to the
//! north pole, is the *typical cell*. This crate computes its expected
//! f-vector exactly (by one-dimensional quadrature) and estimates it by
//! simulation, together with the hull machinery and samplers both sides
//! need.
//!
//! Throughout, `n` denotes the number of *competitor* points around the
//! north pole, so the tessellation behind a typical cell has `n + 1` cells.
//! Functions that describe a whole tessellation take the cell count
//! explicitly and say so.
//!
//! * [`hull`] general-dimension convex hulls and f-vectors.
//! * [`samplers`] uniform sphere points, their polar decomposition and
//!   beta' points.
//! * [`voronoi`] Monte Carlo realisations of the typical cell and of the
//!   whole tessellation.
//! * [`exact`] quadrature formulas for the expected f-vector.
//! * [`harness`] simulation reports, exact-vs-simulated comparison and
//!   distributional tests.

pub mod error;
pub mod exact;
pub mod harness;
pub mod hull;
mod linalg;
pub mod quadrature;
pub mod rng;
pub mod samplers;
pub mod special;
pub mod stats;
pub mod voronoi;

pub use error::{Error, Result};
pub use exact::{expected_fvector_exact, ExactFVectorResult, QuadratureSpec};
pub use hull::{build_hull, f_vector, FVector, PointCloud, SimplicialHull};
pub use rng::RngStream;

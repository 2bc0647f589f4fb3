//! Exact computation of Zariski decompositions, Newton-Okounkov polygons and
//! convex-geometric positivity tests on polyhedrally-modeled smooth
//! projective surfaces.
//!
//! A surface is described by its Picard lattice (an integer Gram matrix of
//! signature (1, rank-1)), a catalog of irreducible curves, generators of
//! the nef and pseudo-effective cones, and a suite of flags (a host curve
//! plus local intersection data at a point). Everything downstream is exact
//! rational arithmetic: cone membership, Zariski decomposition by iterated
//! negative-definite solves, the polygon between the two piecewise-linear
//! profiles of a big class along a flag, the origin/simplex positivity
//! criteria, and two independent oracles (exhaustive support search and
//! toric lattice-point enumeration) that cross-check the fast paths.

mod error;
mod linalg;
pub mod cones;
pub mod criteria;
pub mod model;
pub mod models;
pub mod okounkov;
pub mod polygon;
pub mod pwl;
pub mod rat;
pub mod suite;
pub mod svg;
pub mod toric;
pub mod zariski;

pub use error::{Error, Result};
pub use model::{load_model, CurveRecord, DivisorClass, Flag, SurfaceModel};
pub use polygon::{standard_simplex, Polygon, ValuationVector};
pub use rat::Rat;

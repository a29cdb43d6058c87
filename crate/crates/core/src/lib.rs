//! Exact computation of mixed fiber polytopes.
//!
//! Given a tuple of finite lattice point sets `A_0, ..., A_k` in `Z^n` and a
//! split of the coordinates into `n - k` kept and `k` eliminated ones, this
//! crate computes the mixed fiber polytope of their convex hulls. That polytope
//! is the Newton polytope of the eliminant of a generic sparse system with
//! those supports.
//!
//! The pieces, bottom-up:
//!
//! * [`geometry`]: exact rational primitives (lower hulls, volumes, Minkowski
//!   sums, dual descriptions, lattice point counting) built on a pivoting
//!   regular-triangulation kernel.
//! * [`subdivision`]: point configurations, the Cayley trick, coherent and
//!   fine mixed subdivisions, validity checks.
//! * [`oracle`]: the vertex oracle. It reduces every fiber of the projection
//!   to its minimizer, subdivides the projected configuration and sums the
//!   volume-weighted images of the fully mixed cells.
//! * [`reconstruct`]: rebuilds a polytope from any vertex oracle.
//! * [`verify`]: an independent brute-force oracle based on Minkowski
//!   integrals and inclusion-exclusion.
//!
//! Everything is exact. No floating point value ever reaches a predicate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod geometry;
mod kernel;
pub mod lex;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod polytope;
pub mod reconstruct;
pub mod rng;
pub mod scalar;
pub mod subdivision;
pub mod verify;

pub use error::{Error, Result};
pub use lex::Lex;
pub use oracle::{
    fiber_reduce, mfp_support_value, mfp_vertex, mfp_vertex_detailed, FiberReducedConfig, OracleOutput, OracleStats,
    ProjectionSplit,
};
pub use polytope::{Facet, Polytope};
pub use reconstruct::{
    detect_affine_hull, reconstruct, replay_facets, AffineProbe, ListOracle, MfpOracle, Reconstruction, ReferenceOracle,
    VertexOracle,
};
pub use scalar::{Covector, LatticePoint, PerturbedCovector, RationalPoint, Scalar};
pub use subdivision::{
    cayley_embed, coherent_subdivision, fine_mixed_refinement, is_valid_subdivision, refines, Cell, PointConfiguration,
    Refinement, Subdivision, Violation, WeightVector,
};
pub use verify::{minkowski_integral_vertex, mfp_vertex_reference};

//! Command line front end for mixed fiber polytopes: parses polynomial
//! systems and dynamical systems, builds the elimination problem, runs the
//! reconstruction and prints the result.

pub mod output;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod problem;

pub use output::{format_report, read_vertices, Emit};
pub use parse::{parse_raw, parse_system, ParseError, ParseErrorKind, PolySystem, RawSupports};
pub use pipeline::{compute_newton_polytope, Options, ParallelOracle, Report, BATCH};
pub use poly::Poly;
pub use problem::{
    implicitization_problem, ode_problem, parse_ode, relation_supports, EliminationProblem, OdeInput, OdeSystem,
    ProblemError, Provenance, Relations,
};

//! From an elimination problem to a reported polytope.

use std::time::{Duration, Instant};

use mfp_core::{
    reconstruct, Covector, LatticePoint, MfpOracle, Polytope, ReferenceOracle, Result, Scalar, VertexOracle,
};
use num_traits::Zero;
use rayon::prelude::*;

use crate::problem::EliminationProblem;

/// Facets queried per round of reconstruction. Fixed so that the result does
/// not depend on the number of threads.
pub const BATCH: usize = 16;

/// Evaluates batches of queries on the rayon pool.
pub struct ParallelOracle<O>(pub O);

impl<O: VertexOracle + Sync> VertexOracle for ParallelOracle<O> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn query(&self, gamma: &Covector) -> Result<LatticePoint> {
        self.0.query(gamma)
    }

    fn query_batch(&self, gammas: &[Covector]) -> Vec<Result<LatticePoint>> {
        gammas.par_iter().map(|g| self.0.query(g)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub seed: u64,
    pub verify: bool,
    pub count_lattice: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub polytope: Polytope,
    pub vertex_count: usize,
    pub facet_count: usize,
    pub lattice_count: Option<u64>,
    pub oracle_calls: usize,
    pub subdivisions: usize,
    /// `None` unless verification was requested.
    pub verified: Option<bool>,
    /// Covectors whose reference answer differed from the reconstruction.
    pub mismatches: Vec<Covector>,
    pub timings: Vec<(&'static str, Duration)>,
}

/// A covector minimized over the polytope exactly at `v`: the sum of the
/// inner normals of the facets through `v`.
fn vertex_covector(poly: &Polytope, v: &LatticePoint) -> Covector {
    let r = v.to_rational();
    let mut c = vec![Scalar::zero(); poly.ambient_dim()];
    for f in poly.facets().iter().filter(|f| f.value(&r) == f.offset) {
        for (ci, ni) in c.iter_mut().zip(&f.normal) {
            *ci -= Scalar::from_integer(ni.clone());
        }
    }
    Covector::new(c)
}

pub fn compute_newton_polytope(problem: &EliminationProblem, opts: Options) -> Result<Report> {
    let mut timings = Vec::new();
    let start = Instant::now();
    let oracle = ParallelOracle(MfpOracle::new(problem.config.clone(), problem.split, opts.seed));
    let rec = reconstruct(&oracle, BATCH)?;
    timings.push(("reconstruct", start.elapsed()));

    let polytope = rec.polytope;
    let mut verified = None;
    let mut mismatches = Vec::new();
    if opts.verify {
        let start = Instant::now();
        let reference = ParallelOracle(ReferenceOracle::new(problem.config.clone(), problem.split, opts.seed));
        let vertices = polytope.lattice_vertices().ok_or(mfp_core::Error::NonIntegralResult)?;
        let queries: Vec<Covector> = vertices.iter().map(|v| vertex_covector(&polytope, v)).collect();
        for ((q, v), a) in queries.iter().zip(&vertices).zip(reference.query_batch(&queries)) {
            if a? != *v {
                mismatches.push(q.clone());
            }
        }
        verified = Some(mismatches.is_empty());
        timings.push(("verify", start.elapsed()));
    }
    let lattice_count = opts.count_lattice.then(|| {
        let start = Instant::now();
        let n = polytope.lattice_count();
        timings.push(("lattice", start.elapsed()));
        n
    });
    Ok(Report {
        vertex_count: polytope.vertices().len(),
        facet_count: polytope.facets().len(),
        lattice_count,
        oracle_calls: rec.oracle_calls,
        subdivisions: oracle.0.stats().subdivisions,
        verified,
        mismatches,
        timings,
        polytope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_raw;

    #[test]
    fn triangles() {
        let raw = parse_raw("dim 2 split 1\npolytope 0: (0,0) (2,0) (0,2)\npolytope 1: (0,0) (3,0) (0,3)\n").unwrap();
        let p = EliminationProblem::from_raw(&raw).unwrap();
        let r = compute_newton_polytope(&p, Options { seed: 1, verify: true, count_lattice: true }).unwrap();
        assert_eq!(r.polytope.lattice_vertices().unwrap(), [LatticePoint::from_i64(&[0]), LatticePoint::from_i64(&[6])]);
        assert_eq!(r.lattice_count, Some(7));
        assert_eq!(r.verified, Some(true));
        assert!(r.subdivisions >= 1);
    }
}

//! Rebuilding a polytope from a vertex oracle.
//!
//! The current hull of all answers so far is refined facet by facet: the
//! oracle is asked for the point maximizing the outer normal. A point beyond
//! the facet is added; an answer on the facet confirms it for good.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicUsize, Ordering};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{rank, AffineHull};
use crate::oracle::{mfp_vertex, OracleStats, ProjectionSplit};
use crate::polytope::{Facet, Polytope};
use crate::rng::{covector_key, fold_key};
use crate::scalar::{Covector, LatticePoint, PerturbedCovector, RationalPoint, Scalar};
use crate::subdivision::PointConfiguration;
use crate::verify::mfp_vertex_reference;

/// A black box returning, for a covector, a point of the target polytope
/// minimizing it; a vertex of the optimal face when ties occur.
pub trait VertexOracle {
    fn dim(&self) -> usize;

    fn query(&self, gamma: &Covector) -> Result<LatticePoint>;

    /// Answers several queries; implementations may run them concurrently
    /// but must return answers in input order.
    fn query_batch(&self, gammas: &[Covector]) -> Vec<Result<LatticePoint>> {
        gammas.iter().map(|g| self.query(g)).collect()
    }
}

impl<T: VertexOracle + ?Sized> VertexOracle for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn query(&self, gamma: &Covector) -> Result<LatticePoint> {
        (**self).query(gamma)
    }

    fn query_batch(&self, gammas: &[Covector]) -> Vec<Result<LatticePoint>> {
        (**self).query_batch(gammas)
    }
}

/// Per-query seed: a function of the run seed and the query only.
pub fn query_seed(seed: u64, gamma: &Covector) -> u64 {
    fold_key(seed, &covector_key(gamma)).0
}

/// The mixed fiber polytope oracle.
#[derive(Debug)]
pub struct MfpOracle {
    config: PointConfiguration,
    split: ProjectionSplit,
    seed: u64,
    calls: AtomicUsize,
    subdivisions: AtomicUsize,
    fine_cells: AtomicUsize,
    mixed_cells: AtomicUsize,
}

impl MfpOracle {
    pub fn new(config: PointConfiguration, split: ProjectionSplit, seed: u64) -> Self {
        Self {
            config,
            split,
            seed,
            calls: AtomicUsize::new(0),
            subdivisions: AtomicUsize::new(0),
            fine_cells: AtomicUsize::new(0),
            mixed_cells: AtomicUsize::new(0),
        }
    }

    pub fn config(&self) -> &PointConfiguration {
        &self.config
    }

    pub fn split(&self) -> &ProjectionSplit {
        &self.split
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The perturbed covector and refinement seed used for `gamma`.
    pub fn perturb(&self, gamma: &Covector) -> (PerturbedCovector, u64) {
        let s = query_seed(self.seed, gamma);
        (PerturbedCovector::with_seed(gamma.clone(), s), s)
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn stats(&self) -> OracleStats {
        OracleStats {
            subdivisions: self.subdivisions.load(Ordering::Relaxed),
            fine_cells: self.fine_cells.load(Ordering::Relaxed),
            mixed_cells: self.mixed_cells.load(Ordering::Relaxed),
        }
    }
}

impl VertexOracle for MfpOracle {
    fn dim(&self) -> usize {
        self.split.kept()
    }

    fn query(&self, gamma: &Covector) -> Result<LatticePoint> {
        let (g, s) = self.perturb(gamma);
        let (v, stats) = mfp_vertex(&self.config, &self.split, &g, s)?;
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.subdivisions.fetch_add(stats.subdivisions, Ordering::Relaxed);
        self.fine_cells.fetch_add(stats.fine_cells, Ordering::Relaxed);
        self.mixed_cells.fetch_add(stats.mixed_cells, Ordering::Relaxed);
        Ok(v)
    }
}

/// The brute-force oracle of [`crate::verify`].
#[derive(Debug)]
pub struct ReferenceOracle {
    config: PointConfiguration,
    split: ProjectionSplit,
    seed: u64,
}

impl ReferenceOracle {
    pub fn new(config: PointConfiguration, split: ProjectionSplit, seed: u64) -> Self {
        Self { config, split, seed }
    }
}

impl VertexOracle for ReferenceOracle {
    fn dim(&self) -> usize {
        self.split.kept()
    }

    fn query(&self, gamma: &Covector) -> Result<LatticePoint> {
        let g = PerturbedCovector::with_seed(gamma.clone(), query_seed(self.seed, gamma));
        mfp_vertex_reference(&self.config, &self.split, &g)?
            .to_lattice()
            .ok_or(Error::NonIntegralResult)
    }
}

/// Answers queries by scanning an explicit point list.
#[derive(Clone, Debug)]
pub struct ListOracle {
    points: Vec<LatticePoint>,
    seed: u64,
}

impl ListOracle {
    pub fn new(points: Vec<LatticePoint>, seed: u64) -> Self {
        Self { points, seed }
    }
}

impl VertexOracle for ListOracle {
    fn dim(&self) -> usize {
        self.points.first().map_or(0, LatticePoint::dim)
    }

    fn query(&self, gamma: &Covector) -> Result<LatticePoint> {
        let g = PerturbedCovector::with_seed(gamma.clone(), query_seed(self.seed, gamma));
        self.points
            .iter()
            .min_by(|a, b| g.compare(a, b))
            .cloned()
            .ok_or(Error::Empty("oracle point list"))
    }
}

/// The affine hull of the oracle's polytope together with the points that
/// span it.
#[derive(Clone, Debug)]
pub struct AffineProbe {
    pub points: Vec<LatticePoint>,
    pub hull: AffineHull,
    pub calls: usize,
}

fn rational(points: &[LatticePoint]) -> Vec<RationalPoint> {
    points.iter().map(LatticePoint::to_rational).collect()
}

fn unit(m: usize, i: usize, sign: i64) -> Covector {
    let mut c = alloc::vec![Scalar::zero(); m];
    c[i] = Scalar::from_integer(sign.into());
    Covector::new(c)
}

fn insert_sorted(points: &mut Vec<LatticePoint>, p: LatticePoint) -> bool {
    match points.binary_search(&p) {
        Ok(_) => false,
        Err(i) => {
            points.insert(i, p);
            true
        }
    }
}

/// Finds the affine hull by probing `+-e_i`, then `+-n` for each hull
/// equation `n` not yet known to hold on the whole polytope.
pub fn detect_affine_hull(oracle: &impl VertexOracle) -> Result<AffineProbe> {
    let m = oracle.dim();
    let queries: Vec<Covector> = (0..m).flat_map(|i| [unit(m, i, 1), unit(m, i, -1)]).collect();
    let mut calls = queries.len();
    let mut points = Vec::new();
    for r in oracle.query_batch(&queries) {
        insert_sorted(&mut points, r?);
    }
    let mut hull = AffineHull::of(&rational(&points));
    // Normals n with min and max of n over the polytope both on the hull.
    let mut verified: Vec<Vec<Scalar>> = Vec::new();
    loop {
        let next = hull.equations.iter().find(|n| {
            let mut rows = verified.clone();
            rows.push((*n).clone());
            rank(&rows, m) > verified.len()
        });
        let Some(n) = next.cloned() else {
            break;
        };
        let c = Covector::new(n.clone());
        let answers = oracle.query_batch(&[c.clone(), c.neg()]);
        calls += 2;
        let mut grew = false;
        for a in answers {
            let a = a?;
            if !hull.contains(&a.to_rational()) {
                grew |= insert_sorted(&mut points, a);
            }
        }
        if grew {
            hull = AffineHull::of(&rational(&points));
        } else {
            verified.push(n);
        }
    }
    Ok(AffineProbe { points, hull, calls })
}

/// A reconstructed polytope and the number of oracle queries spent.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub polytope: Polytope,
    pub oracle_calls: usize,
    /// Queries spent on affine hull detection (included in `oracle_calls`).
    pub probe_calls: usize,
}

/// Reconstructs the oracle's polytope. Up to `batch` unconfirmed facets are
/// queried at once, in lexicographic order; the result depends on `batch`
/// but not on how a batch is evaluated.
pub fn reconstruct(oracle: &impl VertexOracle, batch: usize) -> Result<Reconstruction> {
    let batch = batch.max(1);
    let probe = detect_affine_hull(oracle)?;
    let mut calls = probe.calls;
    let mut points = probe.points;
    let mut confirmed: BTreeSet<Facet> = BTreeSet::new();
    loop {
        let poly = Polytope::dual_description(&rational(&points))?;
        let open: Vec<&Facet> = poly.facets().iter().filter(|f| !confirmed.contains(*f)).take(batch).collect();
        if open.is_empty() {
            return Ok(Reconstruction {
                polytope: poly,
                oracle_calls: calls,
                probe_calls: probe.calls,
            });
        }
        let queries: Vec<Covector> = open.iter().map(|f| Covector::from_ints(&f.normal).neg()).collect();
        calls += queries.len();
        let answers = oracle.query_batch(&queries);
        points = poly.lattice_vertices().ok_or(Error::NonIntegralResult)?;
        for (f, a) in open.into_iter().zip(answers) {
            let a = a?;
            let r = a.to_rational();
            if !probe.hull.contains(&r) || confirmed.iter().any(|c| c.value(&r) > c.offset) {
                return Err(Error::OracleInconsistent);
            }
            if f.value(&r) > f.offset {
                insert_sorted(&mut points, a);
            } else {
                confirmed.insert(f.clone());
            }
        }
    }
}

/// Checks every facet by re-querying its outer normal.
pub fn replay_facets(oracle: &impl VertexOracle, polytope: &Polytope) -> Result<bool> {
    let queries: Vec<Covector> = polytope.facets().iter().map(|f| Covector::from_ints(&f.normal).neg()).collect();
    let answers = oracle.query_batch(&queries);
    for (f, a) in polytope.facets().iter().zip(answers) {
        if f.value(&a?.to_rational()) != f.offset {
            return Ok(false);
        }
    }
    Ok(true)
}

//! The vertex oracle for mixed fiber polytopes.
//!
//! For a covector `gamma` on the kept coordinates, each set is reduced to the
//! `gamma`-minimal point of every fiber of the projection `p`. The fiber
//! minima lift `p(A)` to the p-coherent subdivision; a fine mixed refinement
//! of it then yields the vertex as the sum, over the mixed cells of type
//! `e_i`, of the cell volume times the kept part of the single point in slot
//! `i`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lex::Lex;
use crate::scalar::{LatticePoint, PerturbedCovector, Scalar};
use crate::subdivision::{fine_mixed_refinement, PointConfiguration, Refinement, WeightVector};

/// Splits `Z^n` into the first `n - k` kept coordinates and the last `k`
/// eliminated ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionSplit {
    n: usize,
    k: usize,
}

impl ProjectionSplit {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidSplit { n, k });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kept(&self) -> usize {
        self.n - self.k
    }

    /// The kept coordinates.
    pub fn pi(&self, a: &LatticePoint) -> LatticePoint {
        LatticePoint::new(a.coords()[..self.kept()].to_vec())
    }

    /// The eliminated coordinates.
    pub fn p(&self, a: &LatticePoint) -> LatticePoint {
        LatticePoint::new(a.coords()[self.kept()..].to_vec())
    }
}

/// The fiber-reduced configuration for one covector.
#[derive(Clone, Debug)]
pub struct FiberReducedConfig {
    /// The fiber minimizers of each set.
    pub reduced: Vec<Vec<LatticePoint>>,
    /// The `p`-images, one point per fiber.
    pub projected: PointConfiguration,
    /// Weights `(gamma, tiebreak)` of each fiber minimizer.
    pub weights: WeightVector,
    /// `argmin_map[i][j]` is the minimizer over the fiber of
    /// `projected.sets()[i][j]`.
    pub argmin_map: Vec<Vec<LatticePoint>>,
}

pub fn fiber_reduce(
    config: &PointConfiguration,
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
) -> Result<FiberReducedConfig> {
    if config.ambient_dim() != split.n() {
        return Err(Error::DimensionMismatch {
            expected: split.n(),
            got: config.ambient_dim(),
        });
    }
    if gamma.dim() != split.kept() {
        return Err(Error::DimensionMismatch {
            expected: split.kept(),
            got: gamma.dim(),
        });
    }
    let mut projected = Vec::with_capacity(config.num_sets());
    let mut argmin_map = Vec::with_capacity(config.num_sets());
    let mut weights = Vec::with_capacity(config.num_sets());
    for set in config.sets() {
        let mut fibers: BTreeMap<LatticePoint, (&LatticePoint, (Scalar, Scalar))> = BTreeMap::new();
        for a in set {
            let key = gamma.key(a);
            let q = split.p(a);
            match fibers.get(&q) {
                Some((_, best)) if *best < key => {}
                Some((_, best)) if *best == key => return Err(Error::TieUnresolved),
                _ => {
                    fibers.insert(q, (a, key));
                }
            }
        }
        let mut qs = Vec::with_capacity(fibers.len());
        let mut mins = Vec::with_capacity(fibers.len());
        let mut ws = Vec::with_capacity(fibers.len());
        for (q, (a, (v, t))) in fibers {
            qs.push(q);
            mins.push(a.clone());
            ws.push(Lex(alloc::vec![v, t]));
        }
        projected.push(qs);
        argmin_map.push(mins);
        weights.push(ws);
    }
    Ok(FiberReducedConfig {
        reduced: argmin_map.clone(),
        // Fiber keys come out of the map sorted and distinct, so the
        // configuration keeps their order.
        projected: PointConfiguration::new(projected)?,
        weights: WeightVector::from_lex(weights),
        argmin_map,
    })
}

/// Work done by one oracle call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleStats {
    /// Lifted triangulations computed (each one yields the p-coherent
    /// subdivision together with its fine mixed refinement).
    pub subdivisions: usize,
    pub fine_cells: usize,
    pub mixed_cells: usize,
}

impl core::ops::AddAssign for OracleStats {
    fn add_assign(&mut self, o: Self) {
        self.subdivisions += o.subdivisions;
        self.fine_cells += o.fine_cells;
        self.mixed_cells += o.mixed_cells;
    }
}

/// Everything one oracle call produced.
#[derive(Clone, Debug)]
pub struct OracleOutput {
    pub vertex: LatticePoint,
    pub stats: OracleStats,
    /// `None` when the projected configuration is not full-dimensional.
    pub refinement: Option<Refinement>,
}

/// The vertex of the mixed fiber polytope minimizing `gamma`.
pub fn mfp_vertex(
    config: &PointConfiguration,
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
    seed: u64,
) -> Result<(LatticePoint, OracleStats)> {
    mfp_vertex_detailed(config, split, gamma, seed).map(|o| (o.vertex, o.stats))
}

pub fn mfp_vertex_detailed(
    config: &PointConfiguration,
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
    seed: u64,
) -> Result<OracleOutput> {
    let fr = fiber_reduce(config, split, gamma)?;
    let kept = split.kept();
    if !fr.projected.is_full_dimensional() {
        return Ok(OracleOutput {
            vertex: LatticePoint::zero(kept),
            stats: OracleStats::default(),
            refinement: None,
        });
    }
    let refinement = fine_mixed_refinement(&fr.projected, &fr.weights, seed)?;
    let mut sum = alloc::vec![BigInt::zero(); kept];
    let mut mixed = 0;
    for cell in refinement.fine.cells() {
        let Some(i) = cell.mixed_slot() else {
            continue;
        };
        mixed += 1;
        let vol = cell.volume(&fr.projected)?;
        if !vol.is_integer() {
            return Err(Error::NonIntegralResult);
        }
        let vol = vol.to_integer();
        let a = &fr.argmin_map[i][cell.parts()[i][0]];
        for (s, x) in sum.iter_mut().zip(a.coords()) {
            *s += &vol * x;
        }
    }
    Ok(OracleOutput {
        vertex: LatticePoint::new(sum),
        stats: OracleStats {
            subdivisions: refinement.lifts,
            fine_cells: refinement.fine.cells().len(),
            mixed_cells: mixed,
        },
        refinement: Some(refinement),
    })
}

/// `gamma . mfp_vertex(gamma)`, the support value in direction `gamma`.
pub fn mfp_support_value(
    config: &PointConfiguration,
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
    seed: u64,
) -> Result<Scalar> {
    let (v, _) = mfp_vertex(config, split, gamma, seed)?;
    Ok(gamma.primary.eval_lattice(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Covector};

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint::from_i64(c)).collect()
    }

    fn triangles(d0: i64, d1: i64) -> PointConfiguration {
        PointConfiguration::new(alloc::vec![
            pts(&[&[0, 0], &[0, d0], &[d0, 0]]),
            pts(&[&[0, 0], &[0, d1], &[d1, 0]]),
        ])
        .unwrap()
    }

    fn gamma(c: &[i64]) -> PerturbedCovector {
        PerturbedCovector::with_seed(Covector::from_i64(c), 3)
    }

    #[test]
    fn fiber_reduction_of_triangles() {
        let split = ProjectionSplit::new(2, 1).unwrap();
        let fr = fiber_reduce(&triangles(2, 3), &split, &gamma(&[-1])).unwrap();
        assert_eq!(fr.argmin_map[0], pts(&[&[2, 0], &[0, 2]]));
        assert_eq!(fr.argmin_map[1], pts(&[&[3, 0], &[0, 3]]));
        let lead: Vec<Scalar> = (0..2).map(|j| fr.weights.get(0, j).leading()).collect();
        assert_eq!(lead, [rat(-2), rat(0)]);
        let lead: Vec<Scalar> = (0..2).map(|j| fr.weights.get(1, j).leading()).collect();
        assert_eq!(lead, [rat(-3), rat(0)]);

        let fr = fiber_reduce(&triangles(2, 3), &split, &gamma(&[1])).unwrap();
        assert_eq!(fr.argmin_map[0], pts(&[&[0, 0], &[0, 2]]));
        assert!((0..2).all(|j| fr.weights.get(0, j).leading().is_zero()));
    }

    #[test]
    fn triangle_vertices() {
        let split = ProjectionSplit::new(2, 1).unwrap();
        let c = triangles(2, 3);
        for seed in 0..4 {
            assert_eq!(mfp_vertex(&c, &split, &gamma(&[-1]), seed).unwrap().0, LatticePoint::from_i64(&[6]));
            assert_eq!(mfp_vertex(&c, &split, &gamma(&[1]), seed).unwrap().0, LatticePoint::from_i64(&[0]));
        }
        assert_eq!(mfp_support_value(&c, &split, &gamma(&[-1]), 0).unwrap(), rat(-6));
    }

    #[test]
    fn singletons_give_the_origin() {
        let split = ProjectionSplit::new(3, 1).unwrap();
        let c = PointConfiguration::new(alloc::vec![pts(&[&[1, 2, 3]]), pts(&[&[4, 5, 6]])]).unwrap();
        let (v, stats) = mfp_vertex(&c, &split, &gamma(&[1, 1]), 0).unwrap();
        assert_eq!(v, LatticePoint::zero(2));
        assert_eq!(stats.subdivisions, 0);
        assert_eq!(mfp_support_value(&c, &split, &gamma(&[1, 1]), 0).unwrap(), rat(0));
    }

    #[test]
    fn invalid_split() {
        assert_eq!(ProjectionSplit::new(2, 2), Err(Error::InvalidSplit { n: 2, k: 2 }));
        assert_eq!(ProjectionSplit::new(2, 0), Err(Error::InvalidSplit { n: 2, k: 0 }));
    }
}

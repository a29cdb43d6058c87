//! A brute-force vertex oracle from first principles.
//!
//! The fiber polytope of a single polytope is the projection of its Minkowski
//! integral, whose `gamma`-extremal point is the integral of the fiberwise
//! `gamma`-minimal section. The mixed fiber polytope is the coefficient of
//! `l_0 ... l_k` in the fiber polytope of `l_0 D_0 + ... + l_k D_k`, which
//! inclusion-exclusion over subset sums extracts.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{factorial, lower_faces, reduce, triangulate_lifted};
use crate::lex::Lex;
use crate::oracle::ProjectionSplit;
use crate::scalar::{LatticePoint, PerturbedCovector, RationalPoint, Scalar};
use crate::subdivision::PointConfiguration;

/// One point per fiber: `(p-image, minimizer, (gamma, tiebreak) value)`.
fn fiber_minima(
    points: &[LatticePoint],
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
) -> Result<Vec<(LatticePoint, LatticePoint, Lex)>> {
    let mut fibers: BTreeMap<LatticePoint, (&LatticePoint, (Scalar, Scalar))> = BTreeMap::new();
    for a in points {
        let key = gamma.key(a);
        let q = split.p(a);
        match fibers.get(&q) {
            Some((b, best)) if *best == key && *b != a => return Err(Error::TieUnresolved),
            Some((_, best)) if *best <= key => {}
            _ => {
                fibers.insert(q, (a, key));
            }
        }
    }
    Ok(fibers
        .into_iter()
        .map(|(q, (a, (v, t)))| (q, a.clone(), Lex(alloc::vec![v, t])))
        .collect())
}

/// The `gamma`-extremal point of the fiber polytope of `conv(points)`,
/// i.e. the projection of the integral of the `gamma`-minimal section.
pub fn minkowski_integral_vertex(
    points: &[LatticePoint],
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
) -> Result<RationalPoint> {
    minkowski_integral_vertex_seeded(points, split, gamma, 0)
}

/// As [`minkowski_integral_vertex`], triangulating the lower cells with the
/// given auxiliary seed.
pub fn minkowski_integral_vertex_seeded(
    points: &[LatticePoint],
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
    seed: u64,
) -> Result<RationalPoint> {
    if points.is_empty() {
        return Err(Error::Empty("point set"));
    }
    let kept = split.kept();
    let k = split.k();
    let minima = fiber_minima(points, split, gamma)?;
    let projected: Vec<RationalPoint> = minima.iter().map(|(q, _, _)| q.to_rational()).collect();
    let reduced = reduce(&projected);
    if reduced.dim() < k {
        return Ok(RationalPoint::zero(kept));
    }
    let heights: Vec<Lex> = minima.iter().map(|(_, _, h)| h.clone()).collect();
    let simplices = triangulate_lifted(&reduced, &heights, 2, seed)?;
    let mut sum = alloc::vec![BigInt::zero(); kept];
    for s in &simplices {
        for &v in &s.verts {
            for (acc, x) in sum.iter_mut().zip(&minima[v].1.coords()[..kept]) {
                *acc += &s.det * x;
            }
        }
    }
    // Each simplex contributes det / k! times the mean of its k + 1 values.
    let den = factorial(k) * BigInt::from(k + 1) * num_traits::pow(reduced.scale.clone(), k);
    Ok(RationalPoint::new(sum.into_iter().map(|v| Scalar::new(v, den.clone())).collect()))
}

/// Points of `points` on the lower envelope of their image under
/// `a -> (p(a), gamma(a), tiebreak(a))`. Minkowski sums of such sets keep
/// every point the section integral can see.
fn lower_envelope(
    points: Vec<LatticePoint>,
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
) -> Result<Vec<LatticePoint>> {
    let minima = fiber_minima(&points, split, gamma)?;
    let projected: Vec<RationalPoint> = minima.iter().map(|(q, _, _)| q.to_rational()).collect();
    let heights: Vec<Lex> = minima.iter().map(|(_, _, h)| h.clone()).collect();
    let faces = lower_faces(&projected, &heights, 0)?;
    let mut keep: Vec<usize> = faces.into_iter().flatten().collect();
    keep.sort_unstable();
    keep.dedup();
    Ok(keep.into_iter().map(|i| minima[i].1.clone()).collect())
}

fn summed_envelope(
    sets: &[&Vec<LatticePoint>],
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
) -> Result<Vec<LatticePoint>> {
    let mut acc = lower_envelope(sets[0].clone(), split, gamma)?;
    for set in &sets[1..] {
        let next = lower_envelope((*set).clone(), split, gamma)?;
        let mut sums = Vec::with_capacity(acc.len() * next.len());
        for a in &acc {
            for b in &next {
                sums.push(a.add(b));
            }
        }
        sums.sort();
        sums.dedup();
        acc = lower_envelope(sums, split, gamma)?;
    }
    Ok(acc)
}

/// The `gamma`-vertex of the mixed fiber polytope by inclusion-exclusion over
/// all subset sums.
pub fn mfp_vertex_reference(
    config: &PointConfiguration,
    split: &ProjectionSplit,
    gamma: &PerturbedCovector,
) -> Result<RationalPoint> {
    let r = config.num_sets();
    let kept = split.kept();
    let mut total = RationalPoint::zero(kept);
    for mask in 1u64..(1 << r) {
        let chosen: Vec<&Vec<LatticePoint>> = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| &config.sets()[i]).collect();
        let pts = summed_envelope(&chosen, split, gamma)?;
        let term = minkowski_integral_vertex(&pts, split, gamma)?;
        if (r - chosen.len()) % 2 == 0 {
            total = total.add(&term);
        } else {
            total = total.sub(&term);
        }
    }
    if !total.is_integral() {
        return Err(Error::NonIntegralResult);
    }
    Ok(total)
}

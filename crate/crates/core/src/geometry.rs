//! Exact polyhedral primitives on top of the triangulation kernel.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{regular_triangulation, Simplex};
use crate::lex::Lex;
use crate::linalg::{nullspace, rank, AffineHull};
use crate::rng::{Domain, KeyedDraws};
use crate::scalar::{common_denominator, primitive_direction, LatticePoint, RationalPoint, Scalar};

/// Number of fresh auxiliary height draws before giving up.
const AUX_ATTEMPTS: u64 = 16;
/// Auxiliary heights are uniform integers below `2^AUX_BITS`.
const AUX_BITS: u32 = 31;

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Points expressed in integer coordinates on their affine hull.
///
/// The coordinates are a subset of the original ones (the pivot columns of
/// the hull), scaled by a common denominator. Both maps are affine
/// isomorphisms onto the image, so lower hull combinatorics are preserved.
#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    pub hull: AffineHull,
    pub coords: Vec<Vec<BigInt>>,
    /// Common denominator used to clear the selected coordinates.
    pub scale: BigInt,
}

impl Reduced {
    pub fn dim(&self) -> usize {
        self.hull.dim()
    }
}

pub(crate) fn reduce(points: &[RationalPoint]) -> Reduced {
    let hull = AffineHull::of(points);
    let scale = common_denominator(points.iter().flat_map(|p| hull.pivots.iter().map(move |&c| &p.coords()[c])));
    let s = Scalar::from_integer(scale.clone());
    let coords = points
        .iter()
        .map(|p| hull.pivots.iter().map(|&c| (&p.coords()[c] * &s).to_integer()).collect())
        .collect();
    Reduced { hull, coords, scale }
}

/// Clears denominators level by level, padding to at least `min_levels`.
/// Positive per-level scaling leaves the lexicographic lower hull unchanged.
fn integer_heights(heights: &[Lex], min_levels: usize) -> Vec<Vec<BigInt>> {
    let levels = heights.iter().map(Lex::levels).max().unwrap_or(0).max(min_levels);
    let mut out: Vec<Vec<BigInt>> = alloc::vec![Vec::with_capacity(levels + 1); heights.len()];
    for l in 0..levels {
        let zero = Scalar::zero();
        let vals: Vec<&Scalar> = heights.iter().map(|h| h.level(l).unwrap_or(&zero)).collect();
        let den = Scalar::from_integer(common_denominator(vals.iter().copied()));
        for (o, v) in out.iter_mut().zip(vals) {
            o.push((v * &den).to_integer());
        }
    }
    out
}

/// Regular triangulation of the reduced points under `heights` followed by
/// pseudo-random auxiliary heights. `group` leading levels define the faces.
pub(crate) fn triangulate_lifted(
    reduced: &Reduced,
    heights: &[Lex],
    group: usize,
    aux_seed: u64,
) -> Result<Vec<Simplex>> {
    triangulate_counted(reduced, heights, group, aux_seed).map(|(s, _)| s)
}

/// As [`triangulate_lifted`], also returning the number of lifts tried.
pub(crate) fn triangulate_counted(
    reduced: &Reduced,
    heights: &[Lex],
    group: usize,
    aux_seed: u64,
) -> Result<(Vec<Simplex>, usize)> {
    let base = integer_heights(heights, group);
    let draws = KeyedDraws::new(aux_seed, Domain::Auxiliary);
    for attempt in 0..AUX_ATTEMPTS {
        let lifted: Vec<Vec<BigInt>> = base
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let mut h = h.clone();
                h.push(BigInt::from(draws.perturbation(attempt, i as u64) >> (31 - AUX_BITS)));
                h
            })
            .collect();
        match regular_triangulation(&reduced.coords, &lifted, group) {
            Err(Error::DegenerateHeights) => continue,
            other => return other.map(|s| (s, attempt as usize + 1)),
        }
    }
    Err(Error::RetriesExhausted(AUX_ATTEMPTS as usize))
}

/// Lower faces of maximal dimension of `points`, lifted by Lex heights.
///
/// Each face is the sorted list of indices of all points lying on it.
pub(crate) fn lower_faces(points: &[RationalPoint], heights: &[Lex], aux_seed: u64) -> Result<Vec<Vec<usize>>> {
    if points.is_empty() {
        return Err(Error::Empty("point set"));
    }
    let reduced = reduce(points);
    if reduced.dim() == 0 {
        let min = heights.iter().min().expect("nonempty");
        return Ok(alloc::vec![(0..points.len()).filter(|&i| heights[i] == *min).collect()]);
    }
    let levels = heights.iter().map(Lex::levels).max().unwrap_or(0);
    let simplices = triangulate_lifted(&reduced, heights, levels, aux_seed)?;
    let mut faces: Vec<Vec<usize>> = simplices.into_iter().map(|s| s.face).collect();
    faces.sort();
    faces.dedup();
    Ok(faces)
}

/// Lower facets of a lifted point set: the faces of `conv(points)` of full
/// projected dimension whose outer normals can be chosen with negative last
/// coordinate (supporting from below). Each facet lists every input point on
/// it, by index.
pub fn lower_hull(points: &[RationalPoint]) -> Result<Vec<Vec<usize>>> {
    let m = points.first().ok_or(Error::Empty("point set"))?.dim();
    if m == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let projected: Vec<RationalPoint> = points.iter().map(|p| RationalPoint::new(p.coords()[..m - 1].to_vec())).collect();
    let heights: Vec<Lex> = points.iter().map(|p| Lex::constant(p.coords()[m - 1].clone())).collect();
    lower_faces(&projected, &heights, 0)
}

/// `dim`-dimensional Euclidean volume of `conv(points)`; zero when the points
/// do not span `dim` dimensions.
pub fn euclidean_volume(points: &[RationalPoint], dim: usize) -> Result<Scalar> {
    euclidean_volume_seeded(points, dim, 0)
}

pub(crate) fn euclidean_volume_seeded(points: &[RationalPoint], dim: usize, seed: u64) -> Result<Scalar> {
    if points.is_empty() {
        return Ok(Scalar::zero());
    }
    let reduced = reduce(points);
    if reduced.dim() < dim || dim == 0 {
        return Ok(if dim == 0 { Scalar::one() } else { Scalar::zero() });
    }
    // The selected pivot coordinates are a coordinate projection, which is
    // volume preserving only for full-dimensional sets.
    if reduced.dim() != points[0].dim() {
        return Err(Error::DimensionMismatch {
            expected: points[0].dim(),
            got: dim,
        });
    }
    let flat: Vec<Lex> = alloc::vec![Lex::default(); points.len()];
    let simplices = triangulate_lifted(&reduced, &flat, 0, seed)?;
    let total: BigInt = simplices.iter().map(|s| &s.det).sum();
    let scale = num_traits::pow(reduced.scale.clone(), dim);
    Ok(Scalar::new(total, factorial(dim) * scale))
}

pub fn lattice_volume(points: &[LatticePoint]) -> Result<Scalar> {
    let dim = points.first().map(LatticePoint::dim).unwrap_or(0);
    let rat: Vec<RationalPoint> = points.iter().map(LatticePoint::to_rational).collect();
    euclidean_volume(&rat, dim)
}

/// A facet of `conv(points)` found from a triangulation, in reduced
/// coordinates: `normal . x <= offset`, with the indices of the points on it.
#[derive(Clone, Debug)]
pub(crate) struct HullFacet {
    pub normal: Vec<BigInt>,
    pub points: Vec<usize>,
}

/// Facets and vertex indices of `conv(points)` inside the reduced coordinates.
pub(crate) fn hull_facets(reduced: &Reduced, seed: u64) -> Result<(Vec<HullFacet>, Vec<usize>)> {
    let n = reduced.coords.len();
    let d = reduced.dim();
    if d == 0 {
        return Ok((Vec::new(), alloc::vec![0]));
    }
    let flat: Vec<Lex> = alloc::vec![Lex::default(); n];
    let simplices = triangulate_lifted(reduced, &flat, 0, seed)?;
    let mut facets: BTreeMap<(Vec<BigInt>, BigInt), ()> = BTreeMap::new();
    for s in &simplices {
        for (j, &b) in s.boundary.iter().enumerate() {
            if !b {
                continue;
            }
            let on: Vec<usize> = s.verts.iter().copied().filter(|&v| v != s.verts[j]).collect();
            let p0 = &reduced.coords[on[0]];
            let rows: Vec<Vec<Scalar>> = on[1..]
                .iter()
                .map(|&v| {
                    reduced.coords[v]
                        .iter()
                        .zip(p0)
                        .map(|(a, b)| Scalar::from_integer(a - b))
                        .collect()
                })
                .collect();
            let ns = nullspace(&rows, d);
            debug_assert_eq!(ns.len(), 1);
            let mut normal = primitive_direction(&ns[0]);
            let dot = |p: &[BigInt]| -> BigInt { normal.iter().zip(p).map(|(a, b)| a * b).sum() };
            let mut offset: BigInt = dot(p0);
            if dot(&reduced.coords[s.verts[j]]) > offset {
                normal.iter_mut().for_each(|v| *v = -v.clone());
                offset = -offset;
            }
            facets.insert((normal, offset), ());
        }
    }
    let facets: Vec<HullFacet> = facets
        .into_keys()
        .map(|(normal, offset)| {
            let points = (0..n)
                .filter(|&i| normal.iter().zip(&reduced.coords[i]).map(|(a, b)| a * b).sum::<BigInt>() == offset)
                .collect();
            HullFacet { normal, points }
        })
        .collect();
    let mut incident: Vec<Vec<Vec<Scalar>>> = alloc::vec![Vec::new(); n];
    for f in &facets {
        for &p in &f.points {
            incident[p].push(f.normal.iter().map(|v| Scalar::from_integer(v.clone())).collect());
        }
    }
    let vertices = (0..n).filter(|&i| incident[i].len() >= d && rank(&incident[i], d) == d).collect();
    Ok((facets, vertices))
}

/// Indices of the extreme points of a finite set (duplicates collapse to
/// their first occurrence).
pub fn extreme_points(points: &[RationalPoint]) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]).then(a.cmp(&b)));
    order.dedup_by(|a, b| points[*a] == points[*b]);
    let unique: Vec<RationalPoint> = order.iter().map(|&i| points[i].clone()).collect();
    let reduced = reduce(&unique);
    let (_, verts) = hull_facets(&reduced, 0)?;
    let mut out: Vec<usize> = verts.into_iter().map(|i| order[i]).collect();
    out.sort_unstable();
    Ok(out)
}

/// Vertex set of the Minkowski sum of the convex hulls of `sets`, sorted.
pub fn minkowski_vertices(sets: &[Vec<LatticePoint>]) -> Result<Vec<LatticePoint>> {
    let first = sets.first().ok_or(Error::Empty("summand list"))?;
    let dim = first.first().ok_or(Error::Empty("summand"))?.dim();
    let mut acc = lattice_extreme(first)?;
    for set in &sets[1..] {
        if set.is_empty() {
            return Err(Error::Empty("summand"));
        }
        let verts = lattice_extreme(set)?;
        let mut sums = Vec::with_capacity(acc.len() * verts.len());
        for a in &acc {
            for b in &verts {
                if b.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: b.dim() });
                }
                sums.push(a.add(b));
            }
        }
        acc = lattice_extreme(&sums)?;
    }
    Ok(acc)
}

fn lattice_extreme(points: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let rat: Vec<RationalPoint> = pts.iter().map(LatticePoint::to_rational).collect();
    Ok(extreme_points(&rat)?.into_iter().map(|i| pts[i].clone()).collect())
}

/// All pairwise sums of one point from each set, deduplicated and sorted.
pub fn minkowski_points(sets: &[&[LatticePoint]]) -> Vec<LatticePoint> {
    let mut acc: Vec<LatticePoint> = alloc::vec![LatticePoint::zero(sets[0][0].dim())];
    for set in sets {
        let mut next = Vec::with_capacity(acc.len() * set.len());
        for a in &acc {
            for b in set.iter() {
                next.push(a.add(b));
            }
        }
        next.sort();
        next.dedup();
        acc = next;
    }
    acc
}

/// Absolute determinant of integer row vectors.
pub(crate) fn abs_det(rows: &[Vec<BigInt>]) -> BigInt {
    let m: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| r.iter().map(|v| Scalar::from_integer(v.clone())).collect())
        .collect();
    crate::linalg::det(&m).abs().to_integer()
}

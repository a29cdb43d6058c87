//! Point configurations and their mixed subdivisions.
//!
//! All subdivisions are computed through the Cayley embedding: the point
//! `b` of set `i` becomes `(b, e_i)` with `e_0 = 0`, and regular subdivisions
//! of the embedded points correspond to coherent mixed subdivisions of the
//! configuration. A single lifted triangulation yields both the coherent
//! subdivision of the base weights (its lower faces) and a fine mixed
//! refinement (its simplices).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{euclidean_volume, factorial, minkowski_vertices, reduce, triangulate_counted};
use crate::lex::Lex;
use crate::linalg::{nullspace, rank};
use crate::lp::{maximize, LpOutcome};
use crate::rng::{Domain, KeyedDraws, PERTURBATION_BITS};
use crate::scalar::{LatticePoint, RationalPoint, Scalar};

/// A tuple of finite lattice point sets sharing one ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    sets: Vec<Vec<LatticePoint>>,
    ambient: usize,
    dim: usize,
}

impl PointConfiguration {
    /// Sorts and deduplicates every set.
    pub fn new(mut sets: Vec<Vec<LatticePoint>>) -> Result<Self> {
        let ambient = sets
            .first()
            .and_then(|s| s.first())
            .ok_or(Error::Empty("point configuration"))?
            .dim();
        for s in &mut sets {
            if s.is_empty() {
                return Err(Error::Empty("configuration set"));
            }
            if let Some(p) = s.iter().find(|p| p.dim() != ambient) {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: p.dim(),
                });
            }
            s.sort();
            s.dedup();
        }
        let diffs: Vec<Vec<Scalar>> = sets
            .iter()
            .flat_map(|s| {
                s[1..]
                    .iter()
                    .map(|p| p.sub(&s[0]).coords().iter().cloned().map(Scalar::from_integer).collect())
            })
            .collect();
        let dim = rank(&diffs, ambient);
        Ok(Self { sets, ambient, dim })
    }

    pub fn sets(&self) -> &[Vec<LatticePoint>] {
        &self.sets
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine span of the Minkowski sum of the sets.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.sets.len() + 1);
        out.push(0);
        for s in &self.sets {
            out.push(out.last().unwrap() + s.len());
        }
        out
    }

    /// Integer Cayley coordinates `(b, e_i)`, set-major.
    fn cayley_coords(&self) -> Vec<Vec<BigInt>> {
        let r = self.sets.len();
        let mut out = Vec::new();
        for (i, s) in self.sets.iter().enumerate() {
            for p in s {
                let mut c = p.coords().to_vec();
                c.extend((1..r).map(|j| BigInt::from((i == j) as u8)));
                out.push(c);
            }
        }
        out
    }

    /// Euclidean volume of the Minkowski sum of the convex hulls.
    pub fn volume(&self) -> Result<Scalar> {
        let verts = minkowski_vertices(&self.sets)?;
        euclidean_volume(&verts.iter().map(LatticePoint::to_rational).collect::<Vec<_>>(), self.ambient)
    }
}

/// A tuple of subsets, one per configuration set, given by point indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    parts: Vec<Vec<usize>>,
    type_vector: Vec<usize>,
}

impl Cell {
    pub fn new(config: &PointConfiguration, mut parts: Vec<Vec<usize>>) -> Result<Self> {
        if parts.len() != config.num_sets() {
            return Err(Error::DimensionMismatch {
                expected: config.num_sets(),
                got: parts.len(),
            });
        }
        for (i, part) in parts.iter_mut().enumerate() {
            part.sort_unstable();
            part.dedup();
            if let Some(&j) = part.iter().find(|&&j| j >= config.sets[i].len()) {
                return Err(Error::NotInConfiguration(alloc::format!("set {i} index {j}")));
            }
        }
        let type_vector = parts.iter().enumerate().map(|(i, part)| part_rank(config, i, part)).collect();
        Ok(Self { parts, type_vector })
    }

    /// Cells read off a Cayley simplex: every part is affinely independent.
    fn from_simplex(parts: Vec<Vec<usize>>) -> Self {
        let type_vector = parts.iter().map(|p| p.len().saturating_sub(1)).collect();
        Self { parts, type_vector }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn type_vector(&self) -> &[usize] {
        &self.type_vector
    }

    pub fn points(&self, config: &PointConfiguration) -> Vec<Vec<LatticePoint>> {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, part)| part.iter().map(|&j| config.sets[i][j].clone()).collect())
            .collect()
    }

    /// Dimension of the Minkowski sum of the parts.
    pub fn dim(&self, config: &PointConfiguration) -> usize {
        let diffs: Vec<Vec<Scalar>> = self
            .parts
            .iter()
            .enumerate()
            .flat_map(|(i, part)| {
                let pts = &config.sets[i];
                part.iter().skip(1).map(move |&j| {
                    pts[j].sub(&pts[part[0]]).coords().iter().cloned().map(Scalar::from_integer).collect()
                })
            })
            .collect();
        rank(&diffs, config.ambient)
    }

    /// Both fine mixed equalities: the part dimensions and the part sizes
    /// minus one each sum to the configuration dimension.
    pub fn is_fine_mixed(&self, config: &PointConfiguration) -> bool {
        let d = config.dim();
        self.type_vector.iter().sum::<usize>() == d
            && self.parts.iter().map(|p| p.len().saturating_sub(1)).sum::<usize>() == d
    }

    /// `Some(i)` when the type is `e_i`: zero in slot `i`, one elsewhere.
    pub fn mixed_slot(&self) -> Option<usize> {
        let zero: Vec<usize> = (0..self.type_vector.len()).filter(|&i| self.type_vector[i] == 0).collect();
        match zero[..] {
            [i] if self.type_vector.iter().all(|&t| t <= 1) => Some(i),
            _ => None,
        }
    }

    /// Euclidean volume of the Minkowski sum of the parts.
    pub fn volume(&self, config: &PointConfiguration) -> Result<Scalar> {
        if self.dim(config) < config.ambient {
            return Ok(Scalar::zero());
        }
        if self.is_fine_mixed(config) {
            let mut rows = Vec::new();
            let mut denom = BigInt::from(1);
            for (i, part) in self.parts.iter().enumerate() {
                let pts = &config.sets[i];
                for &j in &part[1..] {
                    rows.push(pts[j].sub(&pts[part[0]]).coords().to_vec());
                }
                denom *= factorial(part.len() - 1);
            }
            return Ok(Scalar::new(crate::geometry::abs_det(&rows), denom));
        }
        let verts = minkowski_vertices(&self.points(config))?;
        euclidean_volume(&verts.iter().map(LatticePoint::to_rational).collect::<Vec<_>>(), config.ambient)
    }

    fn contains(&self, other: &Cell) -> bool {
        self.parts
            .iter()
            .zip(&other.parts)
            .all(|(mine, theirs)| theirs.iter().all(|j| mine.binary_search(j).is_ok()))
    }
}

fn part_rank(config: &PointConfiguration, i: usize, part: &[usize]) -> usize {
    if part.len() <= 2 {
        return part.len().saturating_sub(1);
    }
    let pts = &config.sets[i];
    let diffs: Vec<Vec<Scalar>> = part[1..]
        .iter()
        .map(|&j| pts[j].sub(&pts[part[0]]).coords().iter().cloned().map(Scalar::from_integer).collect())
        .collect();
    rank(&diffs, config.ambient)
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

/// Per-point weights. Each weight may carry several infinitesimal levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    values: Vec<Vec<Lex>>,
}

impl WeightVector {
    pub fn zero(config: &PointConfiguration) -> Self {
        Self {
            values: config.sets.iter().map(|s| alloc::vec![Lex::default(); s.len()]).collect(),
        }
    }

    pub fn from_scalars(values: Vec<Vec<Scalar>>) -> Self {
        Self {
            values: values.into_iter().map(|s| s.into_iter().map(Lex::constant).collect()).collect(),
        }
    }

    pub fn from_lex(values: Vec<Vec<Lex>>) -> Self {
        Self { values }
    }

    pub fn get(&self, set: usize, index: usize) -> &Lex {
        &self.values[set][index]
    }

    /// Number of significant levels; weights without any level count as a
    /// single zero level.
    pub fn levels(&self) -> usize {
        self.values.iter().flatten().map(Lex::levels).max().unwrap_or(0).max(1)
    }

    /// Appends a pseudo-random perturbation level `u / 2^31`, keyed by
    /// `(seed, set, point)`.
    pub fn perturbed(&self, seed: u64) -> Self {
        let draws = KeyedDraws::new(seed, Domain::Perturbation);
        let levels = self.levels();
        let den = BigInt::from(1u64 << PERTURBATION_BITS);
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, set)| {
                set.iter()
                    .enumerate()
                    .map(|(j, w)| {
                        let mut w = w.clone();
                        w.0.resize(levels, Scalar::zero());
                        let u = draws.perturbation(i as u64, j as u64);
                        w.then(Scalar::new(BigInt::from(u), den.clone()))
                    })
                    .collect()
            })
            .collect();
        Self { values }
    }

    fn check(&self, config: &PointConfiguration) -> Result<()> {
        let ok = self.values.len() == config.num_sets()
            && self.values.iter().zip(&config.sets).all(|(w, s)| w.len() == s.len());
        if ok {
            Ok(())
        } else {
            Err(Error::NotInConfiguration("weight vector shape".into()))
        }
    }
}

/// An embedded point with the `(set, index)` it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyPoint {
    pub point: RationalPoint,
    pub set: usize,
    pub index: usize,
}

/// Cayley embedding with the leading weight level as last coordinate.
pub fn cayley_embed(config: &PointConfiguration, weights: &WeightVector) -> Result<Vec<CayleyPoint>> {
    weights.check(config)?;
    let coords = config.cayley_coords();
    let mut out = Vec::with_capacity(coords.len());
    let mut it = coords.into_iter();
    for (set, s) in config.sets.iter().enumerate() {
        for index in 0..s.len() {
            let mut c: Vec<Scalar> = it.next().expect("one per point").into_iter().map(Scalar::from_integer).collect();
            c.push(weights.get(set, index).leading());
            out.push(CayleyPoint {
                point: RationalPoint::new(c),
                set,
                index,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    config: PointConfiguration,
    cells: Vec<Cell>,
}

impl Subdivision {
    /// Cells are kept in canonical (sorted) order.
    pub fn new(config: PointConfiguration, mut cells: Vec<Cell>) -> Self {
        cells.sort();
        Self { config, cells }
    }

    pub fn config(&self) -> &PointConfiguration {
        &self.config
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_fine_mixed(&self) -> bool {
        self.cells.iter().all(|c| c.is_fine_mixed(&self.config))
    }

    /// Sum of the cell volumes.
    pub fn covered_volume(&self) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for c in &self.cells {
            total += c.volume(&self.config)?;
        }
        Ok(total)
    }

    /// True iff every cell of `self` lies componentwise inside a cell of
    /// `coarser`.
    pub fn refines(&self, coarser: &Subdivision) -> bool {
        refines(self, coarser)
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// Checks that every cell is full-dimensional, that cells meet in common
    /// faces, and that the cell volumes add up to the volume of the
    /// configuration.
    pub fn check(&self) -> core::result::Result<(), Violation> {
        is_valid_subdivision(self)
    }
}

/// The outcome of a fine mixed refinement.
#[derive(Clone, Debug)]
pub struct Refinement {
    /// The coherent subdivision of the base weights.
    pub base: Subdivision,
    /// A fine mixed subdivision refining `base`.
    pub fine: Subdivision,
    /// Number of lifted triangulations computed.
    pub lifts: usize,
}

fn lifted_triangulation(
    config: &PointConfiguration,
    weights: &WeightVector,
    group: usize,
    seed: u64,
) -> Result<(Vec<crate::kernel::Simplex>, usize)> {
    weights.check(config)?;
    if !config.is_full_dimensional() {
        return Err(Error::ConfigDegenerate {
            dim: config.dim(),
            ambient: config.ambient_dim(),
        });
    }
    let points: Vec<RationalPoint> = config
        .cayley_coords()
        .into_iter()
        .map(|c| RationalPoint::new(c.into_iter().map(Scalar::from_integer).collect()))
        .collect();
    let reduced = reduce(&points);
    let heights: Vec<Lex> = weights.values.iter().flatten().cloned().collect();
    triangulate_counted(&reduced, &heights, group, seed)
}

fn split_flat(config: &PointConfiguration, offsets: &[usize], flat: &[usize]) -> Vec<Vec<usize>> {
    let mut parts = alloc::vec![Vec::new(); config.num_sets()];
    for &f in flat {
        let set = offsets.partition_point(|&o| o <= f) - 1;
        parts[set].push(f - offsets[set]);
    }
    parts
}

fn cell_from_flat(config: &PointConfiguration, offsets: &[usize], flat: &[usize]) -> Result<Cell> {
    Cell::new(config, split_flat(config, offsets, flat))
}

/// The coherent mixed subdivision induced by `weights`. All weight levels
/// are significant.
pub fn coherent_subdivision(config: &PointConfiguration, weights: &WeightVector) -> Result<Subdivision> {
    let (simplices, _) = lifted_triangulation(config, weights, weights.levels(), 0)?;
    let offsets = config.offsets();
    let mut faces: Vec<&Vec<usize>> = simplices.iter().map(|s| &s.face).collect();
    faces.sort();
    faces.dedup();
    let cells = faces
        .into_iter()
        .map(|f| cell_from_flat(config, &offsets, f))
        .collect::<Result<_>>()?;
    Ok(Subdivision::new(config.clone(), cells))
}

/// A fine mixed subdivision refining the coherent subdivision of `base`,
/// obtained by lifting with `base` followed by an infinitesimal
/// perturbation drawn from `seed`.
pub fn fine_mixed_refinement(config: &PointConfiguration, base: &WeightVector, seed: u64) -> Result<Refinement> {
    let levels = base.levels();
    let lifted = base.perturbed(seed);
    let (simplices, lifts) = lifted_triangulation(config, &lifted, levels, seed)?;
    let offsets = config.offsets();
    let mut faces: Vec<&Vec<usize>> = simplices.iter().map(|s| &s.face).collect();
    faces.sort();
    faces.dedup();
    let base_cells = faces
        .into_iter()
        .map(|f| cell_from_flat(config, &offsets, f))
        .collect::<Result<_>>()?;
    let fine_cells: Vec<Cell> = simplices
        .iter()
        .map(|s| Cell::from_simplex(split_flat(config, &offsets, &s.verts)))
        .collect();
    if let Some(bad) = fine_cells.iter().find(|c| !c.is_fine_mixed(config)) {
        return Err(Error::NotInConfiguration(alloc::format!("non-fine cell {bad}")));
    }
    Ok(Refinement {
        base: Subdivision::new(config.clone(), base_cells),
        fine: Subdivision::new(config.clone(), fine_cells),
        lifts,
    })
}

pub fn refines(fine: &Subdivision, coarse: &Subdivision) -> bool {
    // Index the coarse cells by the points of their first part.
    let mut by_point: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, c) in coarse.cells.iter().enumerate() {
        for &j in &c.parts[0] {
            by_point.entry(j).or_default().push(ci);
        }
    }
    fine.cells.iter().all(|c| {
        let Some(&first) = c.parts[0].first() else {
            return coarse.cells.iter().any(|d| d.contains(c));
        };
        by_point
            .get(&first)
            .is_some_and(|cands| cands.iter().any(|&ci| coarse.cells[ci].contains(c)))
    })
}

/// The first violated subdivision condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The configuration itself does not span its ambient space.
    DegenerateConfiguration,
    /// Cell `0` has a part that is empty or a Minkowski sum of lower
    /// dimension than the configuration.
    LowDimensionalCell(usize),
    /// The two cells do not meet in a common face.
    ImproperIntersection(usize, usize),
    /// A facet of the cell is interior to the configuration but belongs to
    /// no other cell.
    UnmatchedFacet(usize),
    /// The cells do not cover the configuration.
    VolumeMismatch { covered: Scalar, expected: Scalar },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DegenerateConfiguration => f.write_str("configuration is not full-dimensional"),
            Self::LowDimensionalCell(c) => write!(f, "cell {c} is not full-dimensional"),
            Self::ImproperIntersection(a, b) => write!(f, "cells {a} and {b} do not meet in a common face"),
            Self::UnmatchedFacet(c) => write!(f, "cell {c} has an interior facet shared with no other cell"),
            Self::VolumeMismatch { covered, expected } => {
                write!(f, "cells cover volume {covered}, configuration has {expected}")
            }
        }
    }
}

pub fn is_valid_subdivision(s: &Subdivision) -> core::result::Result<(), Violation> {
    let config = &s.config;
    if !config.is_full_dimensional() {
        return Err(Violation::DegenerateConfiguration);
    }
    for (ci, c) in s.cells.iter().enumerate() {
        if c.parts.iter().any(Vec::is_empty) || c.dim(config) != config.dim() {
            return Err(Violation::LowDimensionalCell(ci));
        }
    }
    let cayley = config.cayley_coords();
    let offsets = config.offsets();
    let flat: Vec<Vec<usize>> = s
        .cells
        .iter()
        .map(|c| {
            c.parts
                .iter()
                .enumerate()
                .flat_map(|(i, p)| {
                    let o = offsets[i];
                    p.iter().map(move |&j| o + j)
                })
                .collect()
        })
        .collect();
    let simplicial = cayley.first().map(Vec::len).is_some_and(|d| flat.iter().all(|c| c.len() == d + 1));
    if simplicial {
        facet_matching(&cayley, &flat)?;
    } else if let Some((a, b)) = first_improper_pair(&cayley, &flat) {
        return Err(Violation::ImproperIntersection(a, b));
    }
    let covered = s.covered_volume().map_err(|_| Violation::DegenerateConfiguration)?;
    let expected = config.volume().map_err(|_| Violation::DegenerateConfiguration)?;
    if covered != expected {
        return Err(Violation::VolumeMismatch { covered, expected });
    }
    Ok(())
}

/// Pseudo-manifold test for full-dimensional simplices: every facet lies on
/// the boundary of the configuration or is shared by exactly two cells on
/// opposite sides. Together with the volume sum this certifies a
/// triangulation.
fn facet_matching(points: &[Vec<BigInt>], cells: &[Vec<usize>]) -> core::result::Result<(), Violation> {
    let dim = points[0].len();
    let mut facets: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in cells.iter().enumerate() {
        for (k, &opposite) in c.iter().enumerate() {
            let mut f = c.clone();
            f.remove(k);
            facets.entry(f).or_default().push((ci, opposite));
        }
    }
    let diff = |p: usize, base: usize| -> Vec<Scalar> {
        points[p].iter().zip(&points[base]).map(|(x, y)| Scalar::from_integer(x - y)).collect()
    };
    for (f, users) in &facets {
        let rows: Vec<Vec<Scalar>> = f[1..].iter().map(|&p| diff(p, f[0])).collect();
        let normal = nullspace(&rows, dim);
        let [normal] = &normal[..] else {
            return Err(Violation::LowDimensionalCell(users[0].0));
        };
        let side = |p: usize| crate::linalg::dot(normal, &diff(p, f[0])).cmp(&Scalar::zero());
        match users[..] {
            [(a, pa), (b, pb)] => {
                if side(pa) == side(pb) {
                    return Err(Violation::ImproperIntersection(a.min(b), a.max(b)));
                }
            }
            [(a, pa)] => {
                let s = side(pa);
                if (0..points.len()).any(|p| side(p) == s.reverse()) {
                    return Err(Violation::UnmatchedFacet(a));
                }
            }
            _ => return Err(Violation::ImproperIntersection(users[0].0, users[2].0)),
        }
    }
    Ok(())
}

/// Per-cell coordinate ranges, used to skip pairs that are strictly
/// separated along some coordinate.
struct Boxes {
    lo: Vec<Vec<i64>>,
    hi: Vec<Vec<i64>>,
}

impl Boxes {
    fn new(points: &[Vec<BigInt>], cells: &[Vec<usize>]) -> Option<Self> {
        let dim = points.first()?.len();
        let mut lo = Vec::with_capacity(cells.len());
        let mut hi = Vec::with_capacity(cells.len());
        for c in cells {
            let mut l = alloc::vec![i64::MAX; dim];
            let mut h = alloc::vec![i64::MIN; dim];
            for &p in c {
                for (j, v) in points[p].iter().enumerate() {
                    let v = v.to_i64()?;
                    l[j] = l[j].min(v);
                    h[j] = h[j].max(v);
                }
            }
            lo.push(l);
            hi.push(h);
        }
        Some(Self { lo, hi })
    }

    fn separated(&self, a: usize, b: usize) -> bool {
        (0..self.lo[a].len()).any(|j| self.hi[a][j] < self.lo[b][j] || self.hi[b][j] < self.lo[a][j])
    }
}

fn first_improper_pair(points: &[Vec<BigInt>], cells: &[Vec<usize>]) -> Option<(usize, usize)> {
    let boxes = Boxes::new(points, cells);
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            if boxes.as_ref().is_some_and(|bx| bx.separated(a, b)) {
                continue;
            }
            if !meet_properly(points, &cells[a], &cells[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Two point sets meet properly when a hyperplane contains their common
/// points and strictly separates the remaining points of each.
pub(crate) fn meet_properly(points: &[Vec<BigInt>], a: &[usize], b: &[usize]) -> bool {
    let dim = points[a[0]].len();
    let row = |p: usize| -> Vec<Scalar> {
        let mut r: Vec<Scalar> = points[p].iter().cloned().map(Scalar::from_integer).collect();
        r.push(Scalar::from_integer((-1).into()));
        r
    };
    let common: Vec<usize> = a.iter().copied().filter(|p| b.contains(p)).collect();
    let only_a: Vec<usize> = a.iter().copied().filter(|p| !common.contains(p)).collect();
    let only_b: Vec<usize> = b.iter().copied().filter(|p| !common.contains(p)).collect();
    let eq: Vec<Vec<Scalar>> = common.iter().map(|&p| row(p)).collect();
    let basis = nullspace(&eq, dim + 1);
    if basis.is_empty() {
        return false;
    }
    let q = basis.len();
    let project = |p: usize| -> Vec<Scalar> {
        let r = row(p);
        basis.iter().map(|v| crate::linalg::dot(&r, v)).collect()
    };
    // Variables: z+ (q), z- (q), delta.
    let mut rows = Vec::new();
    for (pts, sign) in [(&only_a, 1i64), (&only_b, -1i64)] {
        for &p in pts {
            let g = project(p);
            let s = Scalar::from_integer(sign.into());
            let mut r: Vec<Scalar> = g.iter().map(|v| v * &s).collect();
            r.extend(g.iter().map(|v| -(v * &s)));
            r.push(Scalar::from_integer(1.into()));
            rows.push(r);
        }
    }
    let mut cap = alloc::vec![Scalar::zero(); 2 * q + 1];
    cap[2 * q] = Scalar::from_integer(1.into());
    rows.push(cap.clone());
    let mut b = alloc::vec![Scalar::zero(); rows.len()];
    *b.last_mut().unwrap() = Scalar::from_integer(1.into());
    match maximize(&rows, &b, &cap) {
        LpOutcome::Optimal { value, .. } => value > Scalar::zero(),
        LpOutcome::Unbounded => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint::from_i64(c)).collect()
    }

    fn config(sets: &[&[&[i64]]]) -> PointConfiguration {
        PointConfiguration::new(sets.iter().map(|s| pts(s)).collect()).unwrap()
    }

    fn weights(v: &[&[i64]]) -> WeightVector {
        WeightVector::from_scalars(v.iter().map(|s| s.iter().map(|&x| rat(x)).collect()).collect())
    }

    fn parts(s: &Subdivision) -> Vec<Vec<Vec<usize>>> {
        s.cells().iter().map(|c| c.parts().to_vec()).collect()
    }

    #[test]
    fn cayley_embedding_of_two_segments() {
        let c = config(&[&[&[0], &[3]], &[&[0], &[5]]]);
        let emb = cayley_embed(&c, &weights(&[&[0, 2], &[0, 1]])).unwrap();
        let coords: Vec<RationalPoint> = emb.iter().map(|e| e.point.clone()).collect();
        let expect: Vec<RationalPoint> = [[0, 0, 0], [3, 0, 2], [0, 1, 0], [5, 1, 1]]
            .iter()
            .map(|c| LatticePoint::from_i64(c).to_rational())
            .collect();
        assert_eq!(coords, expect);
        assert_eq!((emb[3].set, emb[3].index), (1, 1));
    }

    #[test]
    fn coherent_subdivision_of_two_segments() {
        let c = config(&[&[&[0], &[3]], &[&[0], &[5]]]);
        let s = coherent_subdivision(&c, &weights(&[&[0, 2], &[0, 1]])).unwrap();
        // ({0},{0,5}) and ({0,3},{5})
        assert_eq!(parts(&s), [[alloc::vec![0], alloc::vec![0, 1]], [alloc::vec![0, 1], alloc::vec![1]]]);
        assert!(s.is_fine_mixed());
        assert_eq!(s.check(), Ok(()));
    }

    #[test]
    fn coherent_subdivision_by_slopes() {
        // Lifted Minkowski points (0,0), (2,1), (3,5), (5,6): lower edges
        // [0,2] and [2,5], i.e. ({0,2},{0}) and ({2},{0,3}).
        let c = config(&[&[&[0], &[2]], &[&[0], &[3]]]);
        let s = coherent_subdivision(&c, &weights(&[&[0, 1], &[0, 5]])).unwrap();
        assert_eq!(parts(&s), [[alloc::vec![0, 1], alloc::vec![0]], [alloc::vec![1], alloc::vec![0, 1]]]);
    }

    #[test]
    fn flat_lift_gives_one_cell() {
        let c = config(&[&[&[0, 0], &[1, 0], &[0, 1]], &[&[0, 0], &[2, 0], &[0, 2]]]);
        let s = coherent_subdivision(&c, &WeightVector::zero(&c)).unwrap();
        assert_eq!(s.cells().len(), 1);
        assert_eq!(s.cells()[0].parts(), [alloc::vec![0, 1, 2], alloc::vec![0, 1, 2]]);
    }

    #[test]
    fn refinement_of_two_unit_segments() {
        let c = config(&[&[&[0], &[1]], &[&[0], &[1]]]);
        let options = [
            alloc::vec![alloc::vec![alloc::vec![0], alloc::vec![0, 1]], alloc::vec![alloc::vec![0, 1], alloc::vec![1]]],
            alloc::vec![alloc::vec![alloc::vec![0, 1], alloc::vec![0]], alloc::vec![alloc::vec![1], alloc::vec![0, 1]]],
        ];
        let mut seen = [false; 2];
        for seed in 0..16 {
            let r = fine_mixed_refinement(&c, &WeightVector::zero(&c), seed).unwrap();
            let p = parts(&r.fine);
            let k = options.iter().position(|o| *o == p).expect("one of the two fine mixed subdivisions");
            seen[k] = true;
            assert!(r.fine.refines(&r.base));
            assert_eq!(r.fine.check(), Ok(()));
        }
        assert_eq!(seen, [true, true]);
    }

    #[test]
    fn refinement_of_square_with_a_point() {
        let c = config(&[&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[&[0, 0]]]);
        let diag_a = [alloc::vec![0usize, 1, 2], alloc::vec![1, 2, 3]];
        let diag_b = [alloc::vec![0usize, 1, 3], alloc::vec![0, 2, 3]];
        for seed in 0..8 {
            let r = fine_mixed_refinement(&c, &WeightVector::zero(&c), seed).unwrap();
            let firsts: Vec<Vec<usize>> = r.fine.cells().iter().map(|c| c.parts()[0].clone()).collect();
            assert!(firsts == diag_a || firsts == diag_b, "{firsts:?}");
            for cell in r.fine.cells() {
                assert_eq!(cell.parts()[1], [0]);
                assert!(cell.is_fine_mixed(&c));
            }
        }
    }

    #[test]
    fn refines_is_reflexive_and_distinguishes_diagonals() {
        let c = config(&[&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[&[0, 0]]]);
        let a = coherent_subdivision(&c, &weights(&[&[0, 0, 0, 1], &[0]])).unwrap();
        let b = coherent_subdivision(&c, &weights(&[&[0, 1, 0, 0], &[0]])).unwrap();
        assert!(a.refines(&a));
        assert!(!a.refines(&b));
        assert!(!b.refines(&a));
    }

    #[test]
    fn fine_refinement_keeps_fine_input() {
        let c = config(&[&[&[0], &[3]], &[&[0], &[5]]]);
        let w = weights(&[&[0, 2], &[0, 1]]);
        let r = fine_mixed_refinement(&c, &w, 9).unwrap();
        assert_eq!(r.fine.cells(), r.base.cells());
        assert_eq!(r.base, coherent_subdivision(&c, &w).unwrap());
    }

    #[test]
    fn invalid_subdivisions_are_diagnosed() {
        let c = config(&[&[&[0], &[3]], &[&[0], &[5]]]);
        let s = coherent_subdivision(&c, &weights(&[&[0, 2], &[0, 1]])).unwrap();
        let one = Subdivision::new(c.clone(), s.cells()[..1].to_vec());
        assert!(matches!(one.check(), Err(Violation::UnmatchedFacet(0))));
        // The whole Cayley polytope as a single non-simplicial cell is valid.
        let whole = Subdivision::new(c.clone(), alloc::vec![Cell::new(&c, alloc::vec![alloc::vec![0, 1], alloc::vec![0, 1]]).unwrap()]);
        assert_eq!(whole.check(), Ok(()));
        // The same segment pair twice overlaps itself.
        let mut cells = s.cells().to_vec();
        cells.push(Cell::new(&c, alloc::vec![alloc::vec![1], alloc::vec![0, 1]]).unwrap());
        let dup = Subdivision::new(c.clone(), cells);
        assert!(matches!(dup.check(), Err(Violation::ImproperIntersection(..) | Violation::UnmatchedFacet(_))));
    }

    #[test]
    fn cell_types() {
        let c = config(&[&[&[0, 0], &[1, 0]], &[&[0, 0], &[0, 1]], &[&[0, 0]]]);
        let cell = Cell::new(&c, alloc::vec![alloc::vec![0, 1], alloc::vec![0, 1], alloc::vec![0]]).unwrap();
        assert_eq!(cell.type_vector(), [1, 1, 0]);
        assert_eq!(cell.mixed_slot(), Some(2));
        assert_eq!(cell.volume(&c).unwrap(), rat(1));
    }
}

//! Polytopes in dual description.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{hull_facets, reduce};
use crate::linalg::{dot, AffineHull};
use crate::scalar::{primitive_direction, LatticePoint, RationalPoint, Scalar};

/// `normal . x <= offset`, with `normal` a primitive integer vector parallel
/// to the affine hull of the polytope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Scalar,
}

impl Facet {
    pub fn value(&self, p: &RationalPoint) -> Scalar {
        self.normal
            .iter()
            .zip(p.coords())
            .map(|(a, x)| x * Scalar::from_integer(a.clone()))
            .sum()
    }

    pub fn normal_rational(&self) -> Vec<Scalar> {
        self.normal.iter().cloned().map(Scalar::from_integer).collect()
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.normal.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ") <= {}", self.offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<RationalPoint>,
    facets: Vec<Facet>,
    hull: AffineHull,
}

impl Polytope {
    /// Minimal vertex set and irredundant facets of `conv(points)`.
    pub fn dual_description(points: &[RationalPoint]) -> Result<Self> {
        Self::dual_description_seeded(points, 0)
    }

    pub(crate) fn dual_description_seeded(points: &[RationalPoint], seed: u64) -> Result<Self> {
        let ambient_dim = points.first().ok_or(Error::Empty("vertex set"))?.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                got: p.dim(),
            });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let reduced = reduce(&pts);
        let (raw, verts) = hull_facets(&reduced, seed)?;
        let vertices: Vec<RationalPoint> = verts.iter().map(|&i| pts[i].clone()).collect();
        let hull = AffineHull::of(&vertices);
        let mut facets: Vec<Facet> = raw
            .iter()
            .map(|f| {
                let mut ambient = alloc::vec![Scalar::zero(); ambient_dim];
                for (&c, v) in reduced.hull.pivots.iter().zip(&f.normal) {
                    ambient[c] = Scalar::from_integer(v.clone());
                }
                let normal = primitive_direction(&hull.project_direction(&ambient));
                let on = &pts[f.points[0]];
                let offset = normal
                    .iter()
                    .zip(on.coords())
                    .map(|(a, x)| x * Scalar::from_integer(a.clone()))
                    .sum();
                Facet { normal, offset }
            })
            .collect();
        facets.sort();
        Ok(Self {
            ambient_dim,
            vertices,
            facets,
            hull,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn lattice_vertices(&self) -> Option<Vec<LatticePoint>> {
        self.vertices.iter().map(RationalPoint::to_lattice).collect()
    }

    /// Facets in lexicographic order of `(normal, offset)`.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn affine_hull(&self) -> &AffineHull {
        &self.hull
    }

    /// Hull equations `n . x = c`.
    pub fn equations(&self) -> Vec<(Vec<Scalar>, Scalar)> {
        self.hull
            .equations
            .iter()
            .map(|n| (n.clone(), dot(n, self.hull.base.coords())))
            .collect()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.hull.contains(p) && self.facets.iter().all(|f| f.value(p) <= f.offset)
    }

    /// Integer inequalities `a . x <= b` cutting out the lattice points.
    fn integer_constraints(&self) -> Option<Vec<(Vec<BigInt>, BigInt)>> {
        let mut out: Vec<(Vec<BigInt>, BigInt)> = self
            .facets
            .iter()
            .map(|f| (f.normal.clone(), f.offset.floor().to_integer()))
            .collect();
        for (n, c) in self.equations() {
            // Equation normals are primitive integer vectors.
            let n: Vec<BigInt> = n.iter().map(|v| v.to_integer()).collect();
            if !c.is_integer() {
                return None;
            }
            let c = c.to_integer();
            out.push((n.iter().map(|v| -v).collect(), -c.clone()));
            out.push((n, c));
        }
        Some(out)
    }

    fn lattice_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        (0..self.ambient_dim)
            .map(|j| {
                let vals = self.vertices.iter().map(|v| &v.coords()[j]);
                let lo = vals.clone().min().expect("nonempty").ceil().to_integer();
                let hi = vals.max().expect("nonempty").floor().to_integer();
                (lo, hi)
            })
            .unzip()
    }

    /// Number of integer points in the polytope.
    pub fn lattice_count(&self) -> u64 {
        let mut n = 0u64;
        self.for_each_lattice_point(|_| n += 1);
        n
    }

    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        self.for_each_lattice_point(|p| out.push(p));
        out
    }

    /// Streams the integer points in lexicographic order.
    pub fn for_each_lattice_point(&self, mut f: impl FnMut(LatticePoint)) {
        let Some(cons) = self.integer_constraints() else {
            return;
        };
        let (lo, hi) = self.lattice_box();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return;
        }
        if let Some(small) = Narrow::try_from_big(&cons, &lo, &hi) {
            small.run(&mut |x: &[i128]| f(LatticePoint::new(x.iter().map(|&v| BigInt::from(v)).collect())));
        } else {
            Enumerator::new(cons, lo, hi).run(&mut |x: &[BigInt]| f(LatticePoint::new(x.to_vec())));
        }
    }
}

/// Box enumeration with per-coordinate interval tightening.
struct Enumerator<T> {
    cons: Vec<(Vec<T>, T)>,
    lo: Vec<T>,
    hi: Vec<T>,
    /// `rest[c][j]`: minimum of `sum_{i >= j} a_i x_i` over the box.
    rest: Vec<Vec<T>>,
}

type Narrow = Enumerator<i128>;

impl Narrow {
    /// Uses machine integers when every partial sum provably fits.
    fn try_from_big(cons: &[(Vec<BigInt>, BigInt)], lo: &[BigInt], hi: &[BigInt]) -> Option<Self> {
        let bound = BigInt::from(1u128 << 100);
        let m = BigInt::from(lo.len() + 1);
        let max_x = lo.iter().chain(hi).map(Signed::abs).max().unwrap_or_default();
        for (a, b) in cons {
            let max_a = a.iter().map(Signed::abs).max().unwrap_or_default();
            if &max_a * &max_x * &m >= bound || b.abs() >= bound {
                return None;
            }
        }
        let conv = |v: &BigInt| v.to_i128().expect("bounded");
        Some(Enumerator::new(
            cons.iter().map(|(a, b)| (a.iter().map(conv).collect(), conv(b))).collect(),
            lo.iter().map(conv).collect(),
            hi.iter().map(conv).collect(),
        ))
    }
}

impl<T> Enumerator<T>
where
    T: Clone + Ord + Integer + Signed,
    for<'a> &'a T: core::ops::Mul<&'a T, Output = T> + core::ops::Add<&'a T, Output = T> + core::ops::Sub<&'a T, Output = T>,
{
    fn new(cons: Vec<(Vec<T>, T)>, lo: Vec<T>, hi: Vec<T>) -> Self {
        let m = lo.len();
        let rest = cons
            .iter()
            .map(|(a, _)| {
                let mut r = alloc::vec![T::zero(); m + 1];
                for j in (0..m).rev() {
                    let x = &a[j] * &lo[j];
                    let y = &a[j] * &hi[j];
                    r[j] = &r[j + 1] + &x.min(y);
                }
                r
            })
            .collect();
        Self { cons, lo, hi, rest }
    }

    fn run(&self, f: &mut impl FnMut(&[T])) {
        let mut x = Vec::with_capacity(self.lo.len());
        let partial = alloc::vec![T::zero(); self.cons.len()];
        self.descend(&mut x, &partial, f);
    }

    fn descend(&self, x: &mut Vec<T>, partial: &[T], f: &mut impl FnMut(&[T])) {
        let j = x.len();
        if j == self.lo.len() {
            f(x);
            return;
        }
        let mut lo = self.lo[j].clone();
        let mut hi = self.hi[j].clone();
        for (c, (a, b)) in self.cons.iter().enumerate() {
            // a_j x_j <= b - partial - rest_{j+1}
            let slack = &(b - &partial[c]) - &self.rest[c][j + 1];
            let aj = &a[j];
            if aj.is_zero() {
                if slack.is_negative() {
                    return;
                }
            } else if aj.is_positive() {
                hi = hi.min(slack.div_floor(aj));
            } else {
                lo = lo.max(-slack.div_floor(&-aj.clone()));
            }
        }
        let mut v = lo;
        while v <= hi {
            let next: Vec<T> = self
                .cons
                .iter()
                .zip(partial)
                .map(|((a, _), p)| p + &(&a[j] * &v))
                .collect();
            x.push(v.clone());
            self.descend(x, &next, f);
            x.pop();
            v = v + T::one();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(c: &[i64]) -> RationalPoint {
        LatticePoint::from_i64(c).to_rational()
    }

    #[test]
    fn square_with_interior_point() {
        let pts = [
            rp(&[0, 0]),
            rp(&[1, 0]),
            rp(&[0, 1]),
            rp(&[1, 1]),
            RationalPoint::from_ratios(&[(1, 2), (1, 2)]),
        ];
        let p = Polytope::dual_description(&pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.lattice_count(), 4);
    }

    #[test]
    fn segment_facets() {
        let p = Polytope::dual_description(&[rp(&[0]), rp(&[6])]).unwrap();
        let facets: Vec<alloc::string::String> = p.facets().iter().map(|f| alloc::format!("{f}")).collect();
        assert_eq!(facets, ["(-1) <= 0", "(1) <= 6"]);
        assert_eq!(p.lattice_count(), 7);
    }

    #[test]
    fn triangle_lattice_points() {
        let p = Polytope::dual_description(&[rp(&[0, 0]), rp(&[2, 0]), rp(&[0, 2])]).unwrap();
        assert_eq!(p.lattice_count(), 6);
        let pts = p.lattice_points();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn lower_dimensional_polytope_keeps_equations() {
        // A triangle on the plane x + y + z = 3.
        let p = Polytope::dual_description(&[rp(&[3, 0, 0]), rp(&[0, 3, 0]), rp(&[0, 0, 3])]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.equations().len(), 1);
        assert_eq!(p.facets().len(), 3);
        assert_eq!(p.lattice_count(), 10);
        for f in p.facets() {
            // Normals lie in the direction space of the hull.
            assert_eq!(f.normal.iter().sum::<BigInt>(), BigInt::zero());
        }
    }

    #[test]
    fn point_polytope() {
        let p = Polytope::dual_description(&[rp(&[2, -1])]).unwrap();
        assert_eq!(p.dim(), 0);
        assert!(p.facets().is_empty());
        assert_eq!(p.lattice_count(), 1);
    }

    #[test]
    fn dual_description_is_idempotent() {
        let pts = [rp(&[0, 0, 0]), rp(&[2, 0, 1]), rp(&[0, 3, 0]), rp(&[1, 1, 4]), rp(&[1, 1, 1])];
        let p = Polytope::dual_description(&pts).unwrap();
        let q = Polytope::dual_description(p.vertices()).unwrap();
        assert_eq!(p, q);
    }
}

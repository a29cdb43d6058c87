//! Regular triangulations by pivoting.
//!
//! Input is a full-dimensional point set in `Z^d` with integer heights given
//! as [`Lex`](crate::lex::Lex)-style levels. The heights must be generic: the
//! lower hull of the lifted points is then simplicial and its projection is a
//! regular triangulation.
//!
//! One lower simplex is found by walking to a vertex of the polyhedron of
//! affine functions lying below all lifted points. From there the
//! triangulation is traversed through interior facets: the neighbour across a
//! facet is the candidate on the far side whose lifted hyperplane keeps every
//! other candidate above it.
//!
//! All predicates are integer and fraction free. The walk first runs on
//! checked `i128` and switches to `BigInt` on overflow.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lex::Lex;
use crate::linalg::{dot, nullspace};
use crate::scalar::Scalar;

/// One simplex of a regular triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Simplex {
    /// Sorted point indices, `d + 1` of them.
    pub verts: Vec<usize>,
    /// `|det [p_j 1]|`, that is `d!` times the volume.
    pub det: BigInt,
    /// `boundary[j]` is set when the facet opposite `verts[j]` lies on the
    /// boundary of the convex hull.
    pub boundary: Vec<bool>,
    /// Points on the lower face of the first `group` height levels that
    /// contains this simplex. Equal to `verts` when `group == 0`.
    pub face: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KernelError {
    Overflow,
    Degenerate,
}

trait KInt: Clone + Ord + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
}

impl KInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        debug_assert_eq!(self % o, 0);
        self.checked_div(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
}

impl KInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

type KResult<T> = core::result::Result<T, KernelError>;

fn ov<T>(v: Option<T>) -> KResult<T> {
    v.ok_or(KernelError::Overflow)
}

/// Regular triangulation of `points` (full-dimensional in `Z^d`) lifted by
/// `heights` (one integer per level, same number of levels for every point).
///
/// Simplices are returned sorted by vertex list.
pub(crate) fn regular_triangulation(
    points: &[Vec<BigInt>],
    heights: &[Vec<BigInt>],
    group: usize,
) -> Result<Vec<Simplex>> {
    assert_eq!(points.len(), heights.len());
    if points.is_empty() {
        return Err(Error::Empty("point set"));
    }
    let start = initial_simplex(points, heights)?;
    let fast = convert::<i128>(points, heights).and_then(|(p, h)| walk(&p, &h, start.clone(), group).ok());
    let mut out = match fast {
        Some(s) => s,
        None => match walk::<BigInt>(points, heights, start, group) {
            Ok(s) => s,
            Err(_) => return Err(Error::DegenerateHeights),
        },
    };
    out.sort_by(|a, b| a.verts.cmp(&b.verts));
    Ok(out)
}

#[allow(clippy::type_complexity)]
fn convert<T: KInt>(points: &[Vec<BigInt>], heights: &[Vec<BigInt>]) -> Option<(Vec<Vec<T>>, Vec<Vec<T>>)> {
    let conv = |rows: &[Vec<BigInt>]| -> Option<Vec<Vec<T>>> {
        rows.iter()
            .map(|r| r.iter().map(T::from_big).collect::<Option<Vec<T>>>())
            .collect()
    };
    Some((conv(points)?, conv(heights)?))
}

/// Finds one lower simplex: the tight set of a vertex of
/// `{ (c, c0) : c . q + c0 <= h(q) for all q }`.
fn initial_simplex(points: &[Vec<BigInt>], heights: &[Vec<BigInt>]) -> Result<Vec<usize>> {
    let d = points[0].len();
    let rows: Vec<Vec<Scalar>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| Scalar::from_integer(c.clone()))
                .chain(core::iter::once(Scalar::one()))
                .collect()
        })
        .collect();
    let h: Vec<Lex> = heights
        .iter()
        .map(|l| Lex(l.iter().map(|v| Scalar::from_integer(v.clone())).collect()))
        .collect();

    let first = (0..points.len()).min_by(|&a, &b| h[a].cmp(&h[b]).then(a.cmp(&b))).unwrap();
    let levels = heights[0].len();
    let mut y: Vec<Lex> = alloc::vec![Lex::zero_levels(levels); d + 1];
    y[d] = h[first].clone();
    let mut tight = alloc::vec![first];

    while tight.len() < d + 1 {
        let active: Vec<Vec<Scalar>> = tight.iter().map(|&t| rows[t].clone()).collect();
        let mut dir = nullspace(&active, d + 1)
            .into_iter()
            .next()
            .ok_or(Error::ConfigDegenerate { dim: tight.len() - 1, ambient: d })?;
        let mut slopes: Vec<Scalar> = rows.iter().map(|a| dot(a, &dir)).collect();
        if !slopes.iter().any(|s| s.is_positive()) {
            dir.iter_mut().for_each(|v| *v = -v.clone());
            slopes.iter_mut().for_each(|v| *v = -v.clone());
        }
        let mut best: Option<(usize, Lex)> = None;
        for (q, s) in slopes.iter().enumerate() {
            if !s.is_positive() {
                continue;
            }
            let mut value = Lex::zero_levels(levels);
            for (a, yi) in rows[q].iter().zip(&y) {
                if !a.is_zero() {
                    value = &value + &yi.scale(a);
                }
            }
            let step = (&h[q] - &value).scale(&(Scalar::one() / s));
            if best.as_ref().is_none_or(|(_, b)| step < *b) {
                best = Some((q, step));
            }
        }
        let Some((q, step)) = best else {
            return Err(Error::ConfigDegenerate { dim: tight.len() - 1, ambient: d });
        };
        for (yi, di) in y.iter_mut().zip(&dir) {
            if !di.is_zero() {
                *yi = &*yi + &step.scale(di);
            }
        }
        tight.push(q);
    }
    tight.sort_unstable();
    Ok(tight)
}

/// Fraction-free Gauss-Jordan on `[m | I]`. Returns `(D, R)` with `D > 0` and
/// `R = D * m^{-1}`.
fn scaled_inverse<T: KInt>(m: &[Vec<T>]) -> KResult<(T, Vec<Vec<T>>)> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Err(KernelError::Degenerate);
            };
            a.swap(k, r);
        }
        let p = a[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..2 * n {
                let v = ov(p.mul(&a[i][j]))?;
                let w = ov(f.mul(&a[k][j]))?;
                a[i][j] = ov(ov(v.sub(&w))?.div_exact(&prev))?;
            }
        }
        prev = p;
    }
    let mut det = a[n - 1][n - 1].clone();
    let mut inv: Vec<Vec<T>> = a.into_iter().map(|r| r[n..].to_vec()).collect();
    if det.is_negative() {
        det = ov(det.neg())?;
        for row in inv.iter_mut() {
            for v in row.iter_mut() {
                *v = ov(v.neg())?;
            }
        }
    }
    Ok((det, inv))
}

fn lex_cmp_scaled<T: KInt>(a: &[T], fa: &T, b: &[T], fb: &T) -> KResult<Ordering> {
    for (x, y) in a.iter().zip(b) {
        let l = ov(x.mul(fa))?;
        let r = ov(y.mul(fb))?;
        match l.cmp(&r) {
            Ordering::Equal => continue,
            o => return Ok(o),
        }
    }
    Ok(Ordering::Equal)
}

fn walk<T: KInt>(pts: &[Vec<T>], hs: &[Vec<T>], start: Vec<usize>, group: usize) -> KResult<Vec<Simplex>> {
    let n = pts.len();
    let d = pts[0].len();
    let levels = hs[0].len();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = alloc::vec![start.clone()];
    seen.insert(start);
    let mut out = Vec::new();

    let mut bary: Vec<Vec<T>> = alloc::vec![alloc::vec![T::zero(); d + 1]; n];
    let mut excess: Vec<Vec<T>> = alloc::vec![alloc::vec![T::zero(); levels]; n];

    while let Some(verts) = queue.pop() {
        let m: Vec<Vec<T>> = verts
            .iter()
            .map(|&v| {
                let mut r = pts[v].clone();
                r.push(T::one());
                r
            })
            .collect();
        let (det, inv) = scaled_inverse(&m)?;
        let mut member = alloc::vec![usize::MAX; n];
        for (j, &v) in verts.iter().enumerate() {
            member[v] = j;
        }
        for q in 0..n {
            if member[q] != usize::MAX {
                continue;
            }
            for j in 0..=d {
                let mut acc = inv[d][j].clone();
                for i in 0..d {
                    if !pts[q][i].is_zero() {
                        acc = ov(acc.add(&ov(pts[q][i].mul(&inv[i][j]))?))?;
                    }
                }
                bary[q][j] = acc;
            }
            let mut sign = Ordering::Equal;
            for l in 0..levels {
                let mut acc = ov(det.mul(&hs[q][l]))?;
                for (j, &v) in verts.iter().enumerate() {
                    if !bary[q][j].is_zero() {
                        acc = ov(acc.sub(&ov(hs[v][l].mul(&bary[q][j]))?))?;
                    }
                }
                if sign == Ordering::Equal {
                    sign = acc.cmp(&T::zero());
                }
                excess[q][l] = acc;
            }
            // Every other point must lie strictly above the lifted simplex.
            if sign != Ordering::Greater {
                return Err(KernelError::Degenerate);
            }
        }

        let mut boundary = alloc::vec![true; d + 1];
        for j in 0..=d {
            let mut best: Option<usize> = None;
            for q in 0..n {
                if member[q] != usize::MAX || !bary[q][j].is_negative() {
                    continue;
                }
                best = Some(match best {
                    None => q,
                    Some(b) => {
                        // lambda_q = E_q / l_q; larger lambda wins.
                        match lex_cmp_scaled(&excess[q], &bary[b][j], &excess[b], &bary[q][j])? {
                            Ordering::Greater => q,
                            Ordering::Less => b,
                            Ordering::Equal => return Err(KernelError::Degenerate),
                        }
                    }
                });
            }
            if let Some(q) = best {
                boundary[j] = false;
                let mut next: Vec<usize> = verts.iter().copied().filter(|&v| v != verts[j]).collect();
                next.push(q);
                next.sort_unstable();
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }

        let face = if group == 0 {
            verts.clone()
        } else {
            let g = group.min(levels);
            (0..n)
                .filter(|&q| member[q] != usize::MAX || excess[q][..g].iter().all(KInt::is_zero))
                .collect()
        };
        out.push(Simplex {
            verts,
            det: det.to_big(),
            boundary,
            face,
        });
    }
    Ok(out)
}

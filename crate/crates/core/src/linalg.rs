//! Dense exact linear algebra over the rationals.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::scalar::{primitive_direction, RationalPoint, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Scalar>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows * x = 0}`, one vector per free column, in column order.
pub fn nullspace(rows: &[Vec<Scalar>], ncols: usize) -> Matrix {
    let (m, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = alloc::vec![Scalar::zero(); ncols];
        v[free] = Scalar::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Determinant of a square matrix by Gaussian elimination.
pub fn det(rows: &[Vec<Scalar>]) -> Scalar {
    let n = rows.len();
    let mut m: Matrix = rows.to_vec();
    let mut d = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    d
}

/// Solves `a * x = b` for square nonsingular `a`.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.len();
    let rows: Matrix = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let (m, pivots) = rref(&rows, n + 1);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Affine hull of a finite point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHull {
    pub base: RationalPoint,
    /// Reduced row echelon basis of the direction space.
    pub directions: Matrix,
    /// Pivot column of each direction. Projecting onto these coordinates is
    /// injective on the hull.
    pub pivots: Vec<usize>,
    /// Primitive integer normals `n` with `n . x = n . base` on the hull.
    pub equations: Vec<Vec<Scalar>>,
}

impl AffineHull {
    pub fn of(points: &[RationalPoint]) -> Self {
        let base = points[0].clone();
        let m = base.dim();
        let diffs: Matrix = points[1..].iter().map(|p| p.sub(&base).coords().to_vec()).collect();
        let (directions, pivots) = rref(&diffs, m);
        let equations = nullspace(&directions, m)
            .iter()
            .map(|n| {
                primitive_direction(n)
                    .into_iter()
                    .map(Scalar::from_integer)
                    .collect()
            })
            .collect();
        Self {
            base,
            directions,
            pivots,
            equations,
        }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.equations
            .iter()
            .all(|n| dot(n, p.coords()) == dot(n, self.base.coords()))
    }

    /// Orthogonal projection of a vector onto the direction space.
    pub fn project_direction(&self, v: &[Scalar]) -> Vec<Scalar> {
        // Subtract the component in the span of the equation normals.
        if self.equations.is_empty() {
            return v.to_vec();
        }
        let k = self.equations.len();
        let gram: Matrix = (0..k)
            .map(|i| (0..k).map(|j| dot(&self.equations[i], &self.equations[j])).collect())
            .collect();
        let rhs: Vec<Scalar> = self.equations.iter().map(|n| dot(n, v)).collect();
        let coeffs = solve(&gram, &rhs).expect("equation normals are independent");
        let mut out = v.to_vec();
        for (c, n) in coeffs.iter().zip(&self.equations) {
            for (o, x) in out.iter_mut().zip(n) {
                *o -= c * x;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            assert!(dot(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn determinant_and_solve() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a), rat(5));
        let x = solve(&a, &[rat(3), rat(4)]).unwrap();
        assert_eq!(x, alloc::vec![rat(1), rat(1)]);
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[rat(1), rat(1)]).is_none());
    }

    #[test]
    fn affine_hull_of_a_segment() {
        let pts = [
            RationalPoint::from_ratios(&[(0, 1), (0, 1), (1, 1)]),
            RationalPoint::from_ratios(&[(2, 1), (2, 1), (1, 1)]),
        ];
        let h = AffineHull::of(&pts);
        assert_eq!(h.dim(), 1);
        assert_eq!(h.equations.len(), 2);
        assert!(h.contains(&RationalPoint::from_ratios(&[(1, 1), (1, 1), (1, 1)])));
        assert!(!h.contains(&RationalPoint::from_ratios(&[(1, 1), (0, 1), (1, 1)])));
        let p = h.project_direction(&[rat(1), rat(0), rat(5)]);
        assert_eq!(p, alloc::vec![Scalar::new(1.into(), 2.into()), Scalar::new(1.into(), 2.into()), rat(0)]);
    }
}

//! Exact linear programming for small feasibility questions.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Scalar, x: Vec<Scalar> },
    Unbounded,
}

/// Maximizes `c . x` subject to `a x <= b`, `x >= 0`, where `b >= 0` so the
/// origin is feasible. Dense tableau simplex with Bland's rule.
pub fn maximize(a: &[Vec<Scalar>], b: &[Scalar], c: &[Scalar]) -> LpOutcome {
    let rows = a.len();
    let n = c.len();
    assert!(b.iter().all(|v| !v.is_negative()), "origin must be feasible");
    // Columns: n structural, rows slack, then the right-hand side.
    let width = n + rows + 1;
    let mut t: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, rhs))| {
            let mut r = row.clone();
            r.resize(n + rows, Scalar::zero());
            r[n + i] = Scalar::one();
            r.push(rhs.clone());
            r
        })
        .collect();
    // Reduced costs, stored as -c so that negative entries can still improve.
    let mut obj: Vec<Scalar> = c.iter().map(|v| -v).collect();
    obj.resize(width, Scalar::zero());
    let mut basis: Vec<usize> = (n..n + rows).collect();

    loop {
        let Some(enter) = (0..n + rows).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Scalar)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[enter];
            let better = match &leave {
                None => true,
                Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let inv = Scalar::one() / &t[pr][enter];
        t[pr].iter_mut().for_each(|v| *v *= &inv);
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= &f * p);
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            obj.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= &f * p);
        }
        basis[pr] = enter;
    }

    let mut x = alloc::vec![Scalar::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    LpOutcome::Optimal {
        value: obj[width - 1].clone(),
        x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18
        let out = maximize(&m(&[&[1, 0], &[0, 2], &[3, 2]]), &[rat(4), rat(12), rat(18)], &[rat(3), rat(5)]);
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: rat(36),
                x: alloc::vec![rat(2), rat(6)]
            }
        );
    }

    #[test]
    fn unbounded_and_degenerate() {
        assert_eq!(maximize(&m(&[&[1, -1]]), &[rat(1)], &[rat(0), rat(1)]), LpOutcome::Unbounded);
        // Degenerate vertex at the origin; Bland's rule must not cycle.
        let a = m(&[&[1, 1], &[1, -1], &[-1, 1]]);
        let out = maximize(&a, &[rat(0), rat(0), rat(0)], &[rat(1), rat(1)]);
        assert!(matches!(out, LpOutcome::Optimal { value, .. } if value.is_zero()));
    }
}

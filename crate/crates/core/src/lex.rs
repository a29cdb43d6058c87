//! Numbers with infinitesimal perturbation levels.
//!
//! `Lex([a0, a1, a2])` stands for `a0 + a1*e + a2*e^2` where `e > 0` is
//! infinitely small. Comparison is lexicographic; missing trailing levels are
//! zero. Heights of this kind realize "a sufficiently small perturbation"
//! without ever choosing its size.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::scalar::Scalar;

#[derive(Clone, Debug, Default)]
pub struct Lex<T = Scalar>(pub Vec<T>);

impl<T> Lex<T> {
    pub fn levels(&self) -> usize {
        self.0.len()
    }

    pub fn level(&self, i: usize) -> Option<&T> {
        self.0.get(i)
    }
}

impl<T: Clone + Zero> Lex<T> {
    pub fn constant(v: T) -> Self {
        Self(alloc::vec![v])
    }

    pub fn zero_levels(levels: usize) -> Self {
        Self(alloc::vec![T::zero(); levels])
    }

    /// Appends a lower-order level.
    pub fn then(mut self, v: T) -> Self {
        self.0.push(v);
        self
    }

    /// Keeps the leading `levels` levels.
    pub fn truncate(&self, levels: usize) -> Self {
        Self(self.0.iter().take(levels).cloned().collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn leading(&self) -> T {
        self.0.first().cloned().unwrap_or_else(T::zero)
    }


    fn get_or_zero(&self, i: usize) -> T {
        self.0.get(i).cloned().unwrap_or_else(T::zero)
    }
}

impl Lex {
    pub fn scale(&self, factor: &Scalar) -> Self {
        Self(self.0.iter().map(|v| v * factor).collect())
    }
}

impl<T: Clone + Zero + Ord> Lex<T> {
    pub fn signum(&self) -> Ordering {
        let zero = T::zero();
        self.0
            .iter()
            .map(|v| v.cmp(&zero))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    }
}

impl<T: Clone + Zero + Ord> PartialEq for Lex<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Clone + Zero + Ord> Eq for Lex<T> {}

impl<T: Clone + Zero + Ord> PartialOrd for Lex<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Clone + Zero + Ord> Ord for Lex<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for i in 0..n {
            match self.get_or_zero(i).cmp(&other.get_or_zero(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl Add for &Lex {
    type Output = Lex;
    fn add(self, rhs: Self) -> Lex {
        let n = self.0.len().max(rhs.0.len());
        Lex((0..n).map(|i| self.get_or_zero(i) + rhs.get_or_zero(i)).collect())
    }
}

impl Sub for &Lex {
    type Output = Lex;
    fn sub(self, rhs: Self) -> Lex {
        let n = self.0.len().max(rhs.0.len());
        Lex((0..n).map(|i| self.get_or_zero(i) - rhs.get_or_zero(i)).collect())
    }
}

impl Neg for &Lex {
    type Output = Lex;
    fn neg(self) -> Lex {
        Lex(self.0.iter().map(|v| -v).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn lex(v: &[i64]) -> Lex {
        Lex(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn lexicographic_order() {
        assert!(lex(&[1, -100]) > lex(&[0, 100]));
        assert!(lex(&[0, 1]) > lex(&[0]));
        assert_eq!(lex(&[2, 0, 0]), lex(&[2]));
        assert!(lex(&[0, 0, -1]) < Lex::zero_levels(1));
    }

    #[test]
    fn arithmetic_is_levelwise() {
        let a = lex(&[1, 2]);
        let b = lex(&[3]);
        assert_eq!(&a + &b, lex(&[4, 2]));
        assert_eq!(&a - &b, lex(&[-2, 2]));
        assert_eq!(a.scale(&rat(-2)), lex(&[-2, -4]));
        assert_eq!((&a - &a).signum(), Ordering::Equal);
    }
}

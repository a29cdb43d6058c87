//! Sparse Laurent polynomials with integer coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exponent vector to nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(BigInt::one(), e)
    }

    pub fn monomial(c: BigInt, exps: Vec<i64>) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    /// Exponent vectors, sorted.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigInt) {
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.add_term(e, ca * cb);
            }
        }
        r
    }

    /// Integer power. Negative exponents are only defined for monomials
    /// with coefficient `+-1`.
    pub fn pow(&self, k: i64) -> Option<Self> {
        if k < 0 {
            let (e, c) = self.single_term()?;
            if !c.abs().is_one() {
                return None;
            }
            let c = if k % 2 == 0 { BigInt::one() } else { c.clone() };
            return Some(Self::monomial(c, e.iter().map(|x| x * k).collect()));
        }
        let mut r = Self::constant(self.nvars, BigInt::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        Some(r)
    }

    fn single_term(&self) -> Option<(&Vec<i64>, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = e.clone();
                f[i] -= 1;
                r.add_term(f, c * BigInt::from(e[i]));
            }
        }
        r
    }

    /// Re-indexes variables: variable `i` becomes `map[i]` among `nvars`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        let mut r = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &x) in e.iter().enumerate() {
                f[map[i]] += x;
            }
            r.add_term(f, c.clone());
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    fn c(v: i64) -> Poly {
        Poly::constant(2, v.into())
    }

    #[test]
    fn arithmetic() {
        let p = x(0).add(&x(1)).pow(2).unwrap();
        assert_eq!(p.support(), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert!(p.sub(&p).is_zero());
        let q = x(0).mul(&x(1)).pow(-2).unwrap();
        assert_eq!(q.support(), vec![vec![-2, -2]]);
        assert!(x(0).add(&c(1)).pow(-1).is_none());
        assert!(c(2).pow(-1).is_none());
        assert_eq!(c(-1).pow(-3).unwrap(), c(-1));
    }

    #[test]
    fn derivatives() {
        // d/dx0 (x0^3 x1 - 2 x0^-1) = 3 x0^2 x1 + 2 x0^-2
        let p = x(0).pow(3).unwrap().mul(&x(1)).sub(&c(2).mul(&x(0).pow(-1).unwrap()));
        let d = p.derivative(0);
        let want = c(3).mul(&x(0).pow(2).unwrap()).mul(&x(1)).add(&c(2).mul(&x(0).pow(-2).unwrap()));
        assert_eq!(d, want);
        assert!(c(7).derivative(1).is_zero());
    }
}

//! Exact scalars, points and covectors.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational. Always reduced with a positive denominator.
pub type Scalar = BigRational;


pub(crate) fn rat(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// A point of `Z^m`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(alloc::vec![BigInt::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self(self.0.iter().map(|a| a * factor).collect())
    }

    /// Keeps the coordinates listed in `indices`, in that order.
    pub fn select(&self, indices: impl IntoIterator<Item = usize>) -> Self {
        Self(indices.into_iter().map(|i| self.0[i].clone()).collect())
    }

    pub fn to_rational(&self) -> RationalPoint {
        RationalPoint(self.0.iter().map(|c| Scalar::from_integer(c.clone())).collect())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A point of `Q^m`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint(Vec<Scalar>);

impl RationalPoint {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Self(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self(alloc::vec![Scalar::zero(); dim])
    }

    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        Self(
            coords
                .iter()
                .map(|&(n, d)| Scalar::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        Self(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// The same point as a lattice point, if every coordinate is an integer.
    pub fn to_lattice(&self) -> Option<LatticePoint> {
        self.is_integral()
            .then(|| LatticePoint(self.0.iter().map(|c| c.to_integer()).collect()))
    }
}

impl From<&LatticePoint> for RationalPoint {
    fn from(p: &LatticePoint) -> Self {
        p.to_rational()
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A linear functional, evaluated by the dot product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Covector(Vec<Scalar>);

impl Covector {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        Self(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self(coeffs.iter().map(|c| Scalar::from_integer(c.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn eval_lattice(&self, p: &LatticePoint) -> Scalar {
        debug_assert_eq!(self.dim(), p.dim());
        let mut acc = Scalar::zero();
        for (c, x) in self.0.iter().zip(p.coords()) {
            if !x.is_zero() {
                acc += c * Scalar::from_integer(x.clone());
            }
        }
        acc
    }

    pub fn eval(&self, p: &RationalPoint) -> Scalar {
        debug_assert_eq!(self.dim(), p.dim());
        self.0.iter().zip(p.coords()).map(|(c, x)| c * x).sum()
    }

    /// Evaluates on the leading `self.dim()` coordinates of `p`.
    pub fn eval_prefix(&self, p: &LatticePoint) -> Scalar {
        let mut acc = Scalar::zero();
        for (c, x) in self.0.iter().zip(p.coords()) {
            if !x.is_zero() {
                acc += c * Scalar::from_integer(x.clone());
            }
        }
        acc
    }

    /// Scales to the primitive integer vector with the same direction.
    pub fn primitive(&self) -> Vec<BigInt> {
        primitive_direction(&self.0)
    }
}

impl fmt::Debug for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

/// Scales a rational vector by a positive factor to a primitive integer vector.
pub fn primitive_direction(v: &[Scalar]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|c| (c * Scalar::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|c| c / &g).collect()
    }
}

/// A covector with a secondary covector that breaks its ties.
///
/// Points are compared by the primary value first and by the tiebreak value
/// on equality. This realizes `primary + t * tiebreak` for an infinitesimal
/// `t > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedCovector {
    pub primary: Covector,
    pub tiebreak: Covector,
}

impl PerturbedCovector {
    pub fn new(primary: Covector, tiebreak: Covector) -> Result<Self> {
        if primary.dim() != tiebreak.dim() {
            return Err(Error::DimensionMismatch {
                expected: primary.dim(),
                got: tiebreak.dim(),
            });
        }
        Ok(Self { primary, tiebreak })
    }

    /// Pairs `primary` with a pseudo-random integer tiebreak drawn from `seed`.
    pub fn with_seed(primary: Covector, seed: u64) -> Self {
        let tiebreak = crate::rng::KeyedDraws::new(seed, crate::rng::Domain::Tiebreak)
            .covector(primary.dim(), &[]);
        Self { primary, tiebreak }
    }

    pub fn dim(&self) -> usize {
        self.primary.dim()
    }

    /// `(primary, tiebreak)` values on the leading coordinates of `p`.
    pub fn key(&self, p: &LatticePoint) -> (Scalar, Scalar) {
        (self.primary.eval_prefix(p), self.tiebreak.eval_prefix(p))
    }

    pub fn compare(&self, a: &LatticePoint, b: &LatticePoint) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    pub fn neg(&self) -> Self {
        Self {
            primary: self.primary.neg(),
            tiebreak: self.tiebreak.neg(),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn covector_is_linear() {
        let g = Covector::from_i64(&[2, -3]);
        let a = LatticePoint::from_i64(&[1, 4]);
        let b = LatticePoint::from_i64(&[-2, 5]);
        assert_eq!(g.eval_lattice(&a.add(&b)), g.eval_lattice(&a) + g.eval_lattice(&b));
        assert_eq!(g.eval_lattice(&a.scale(&int(3))), g.eval_lattice(&a) * rat(3));
    }

    #[test]
    fn tiebreak_orders_primary_ties() {
        let g = PerturbedCovector::new(Covector::from_i64(&[1, 0]), Covector::from_i64(&[0, 1])).unwrap();
        let a = LatticePoint::from_i64(&[0, 1]);
        let b = LatticePoint::from_i64(&[0, 2]);
        assert_eq!(g.compare(&a, &b), Ordering::Less);
        assert_eq!(g.compare(&b, &a), Ordering::Greater);
    }

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = [Scalar::new(int(2), int(3)), Scalar::new(int(-4), int(9))];
        assert_eq!(primitive_direction(&v), alloc::vec![int(3), int(-2)]);
    }

    #[test]
    fn rational_to_lattice() {
        assert!(RationalPoint::from_ratios(&[(1, 2)]).to_lattice().is_none());
        assert_eq!(
            RationalPoint::from_ratios(&[(4, 2), (-3, 1)]).to_lattice(),
            Some(LatticePoint::from_i64(&[2, -3]))
        );
    }
}

//! Counter-based random draws.
//!
//! Every draw is a pure function of `(seed, domain, key)`: a ChaCha stream is
//! seeded with those words, so results never depend on evaluation order or on
//! how work is scheduled across threads.

use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::scalar::{Covector, Scalar};

/// Perturbation weights are `u / 2^31` with `u` uniform in `[0, 2^31)`.
pub const PERTURBATION_BITS: u32 = 31;
/// Tiebreak coefficients are uniform in `[-2^20, 2^20]`.
pub const TIEBREAK_BITS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Tiebreak = 1,
    Perturbation = 2,
    Auxiliary = 3,
    Query = 4,
    Probe = 5,
}

#[derive(Clone, Copy, Debug)]
pub struct KeyedDraws {
    seed: u64,
    domain: Domain,
}

impl KeyedDraws {
    pub fn new(seed: u64, domain: Domain) -> Self {
        Self { seed, domain }
    }

    pub fn stream(&self, a: u64, b: u64) -> ChaCha8Rng {
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&self.seed.to_le_bytes());
        bytes[8..16].copy_from_slice(&(self.domain as u64).to_le_bytes());
        bytes[16..24].copy_from_slice(&a.to_le_bytes());
        bytes[24..].copy_from_slice(&b.to_le_bytes());
        ChaCha8Rng::from_seed(bytes)
    }

    /// Numerator of a perturbation weight; the implied denominator is `2^31`.
    pub fn perturbation(&self, a: u64, b: u64) -> i64 {
        (self.stream(a, b).next_u64() >> (64 - PERTURBATION_BITS)) as i64
    }

    /// A covector with tiebreak-sized integer coefficients.
    pub fn covector(&self, dim: usize, key: &[u64]) -> Covector {
        let (a, b) = fold_key(self.seed, key);
        let mut rng = self.stream(a, b);
        let span = 1u64 << (TIEBREAK_BITS + 1);
        let coeffs = (0..dim)
            .map(|_| {
                let v = (rng.next_u64() % (span + 1)) as i64 - (1i64 << TIEBREAK_BITS);
                Scalar::from_integer(BigInt::from(v))
            })
            .collect();
        Covector::new(coeffs)
    }
}

/// Compresses an arbitrary key into two words by chaining ChaCha blocks.
pub fn fold_key(seed: u64, key: &[u64]) -> (u64, u64) {
    let mut state = (seed ^ 0x6d66_705f_6b65_7973, key.len() as u64);
    for &k in key {
        let mut rng = KeyedDraws::new(state.0, Domain::Query).stream(state.1, k);
        state = (rng.next_u64(), rng.next_u64());
    }
    state
}

/// Key words identifying a covector, for seeds that follow the query itself.
pub fn covector_key(c: &Covector) -> Vec<u64> {
    let mut key = Vec::new();
    for v in c.coeffs() {
        push_int(&mut key, v.numer());
        push_int(&mut key, v.denom());
    }
    key
}

fn push_int(key: &mut Vec<u64>, v: &BigInt) {
    let (sign, digits) = v.to_u64_digits();
    key.push(match sign {
        Sign::Minus => 1,
        Sign::NoSign => 0,
        Sign::Plus => 2,
    } | ((digits.len() as u64) << 2));
    key.extend(digits);
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn draws_are_keyed_not_sequential() {
        let d = KeyedDraws::new(7, Domain::Perturbation);
        let a = d.perturbation(3, 4);
        let _ = d.perturbation(1, 1);
        assert_eq!(a, d.perturbation(3, 4));
        assert_ne!(a, d.perturbation(4, 3));
        assert!(a >= 0 && a < (1 << PERTURBATION_BITS));
    }

    #[test]
    fn covector_coefficients_in_range() {
        let c = KeyedDraws::new(1, Domain::Tiebreak).covector(50, &[9]);
        let bound = Scalar::from_integer(BigInt::from(1i64 << TIEBREAK_BITS));
        assert!(c.coeffs().iter().all(|v| v.abs() <= bound));
    }
}

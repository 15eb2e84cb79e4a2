//! Exact elementary number theory and coefficient rings.
//!
//! Everything here is exact: rationals are arbitrary-precision reduced
//! fractions, cyclotomic integers are canonical residues modulo the
//! cyclotomic polynomial. No floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};

mod cyclotomic;
pub use cyclotomic::CyclotomicInt;

/// Exact arbitrary-precision rational number.
///
/// Backed by `num_rational::BigRational`, which keeps every value reduced
/// with a positive denominator — exactly the invariants we need for orders
/// of vanishing in (1/24)Z.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from machine integers.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integral rational.
pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Prime factorization as (prime, exponent) pairs with strictly
/// increasing primes and every exponent >= 1. `factor(1)` is the empty
/// sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// The (prime, exponent) pairs in ascending prime order.
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Multiplies the factorization back together.
    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }

    /// Exponent of `p` (0 if `p` does not divide the value).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

/// Exact prime factorization by trial division.
///
/// Inputs are small levels (<= ~10^6), so trial division is ample.
pub fn factor(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut pairs = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        pairs.push((m, 1));
    }
    Ok(Factorization { pairs })
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let f = factor(n)?;
    let mut divs = vec![1u64];
    for &(p, e) in f.pairs() {
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(prev.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Euler's totient.
pub fn totient(n: u64) -> Result<u64> {
    let f = factor(n)?;
    let mut t = 1u64;
    for &(p, e) in f.pairs() {
        t *= p.pow(e - 1) * (p - 1);
    }
    Ok(t)
}

/// True iff every prime factor of `n` is at most `m`.
pub fn is_smooth(n: u64, m: u64) -> bool {
    match factor(n) {
        Ok(f) => f.pairs().iter().all(|&(p, _)| p <= m),
        Err(_) => false,
    }
}

/// Index of the Hecke congruence subgroup of level `n` in the full modular
/// group: n * prod_{p | n} (1 + 1/p).
///
/// This never appears in the order formulas themselves; it only scales the
/// valence identity, and that identity is cross-checked empirically against
/// every holomorphic quotient the test suite produces.
pub fn gamma0_index(n: u64) -> u64 {
    let f = factor(n).expect("positive level");
    f.pairs()
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p + 1))
        .product::<u64>()
        .max(1)
}

/// gcd on u64.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// lcm on u64.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// p-adic valuation of n.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

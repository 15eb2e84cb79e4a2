//! Cyclotomic integers Z[zeta_n] for n in {1, 2, 4, 12, 24, 48}.
//!
//! Elements are stored as canonical residues modulo the n-th cyclotomic
//! polynomial, so equality is coefficient-wise. These six orders are the
//! coefficient rings the series layer needs: plain integers for
//! q-expansions, Z[zeta_12] for the triple-product substitutions (units i
//! and omega), Z[zeta_48] for the sign transform q -> -q.
//!
//! For the orders above the reduction rules are short:
//! zeta_1 = 1, zeta_2 = -1, zeta_4^2 = -1, and for n in {12, 24, 48}
//! the polynomial is x^m - x^{m/2} + 1 with m = phi(n).
//!
//! Mixing orders is not implicit; use [`CyclotomicInt::embed`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Ring orders supported by [`CyclotomicInt`].
pub const SUPPORTED_ORDERS: [u32; 6] = [1, 2, 4, 12, 24, 48];

fn phi_of(order: u32) -> usize {
    match order {
        1 | 2 => 1,
        4 => 2,
        12 => 4,
        24 => 8,
        48 => 16,
        _ => panic!("unsupported cyclotomic order {order}"),
    }
}

/// An element of Z[zeta_n], reduced modulo the n-th cyclotomic polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    order: u32,
    /// Length phi(order); coefficient of zeta^i at index i.
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    /// The zero element of Z[zeta_order].
    pub fn zero(order: u32) -> Self {
        let phi = phi_of(order);
        CyclotomicInt {
            order,
            coeffs: vec![BigInt::zero(); phi],
        }
    }

    /// The unit element.
    pub fn one(order: u32) -> Self {
        Self::from_int(order, BigInt::one())
    }

    /// Embeds an ordinary integer.
    pub fn from_int<T: Into<BigInt>>(order: u32, value: T) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value.into();
        z
    }

    /// zeta_order^k, reduced.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let n = order as i64;
        let k = k.rem_euclid(n) as usize;
        let mut raw = vec![BigInt::zero(); k + 1];
        raw[k] = BigInt::one();
        Self::reduce(order, raw)
    }

    fn reduce(order: u32, mut raw: Vec<BigInt>) -> Self {
        let phi = phi_of(order);
        let mut i = raw.len();
        while i > phi {
            i -= 1;
            if raw[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut raw[i], BigInt::zero());
            match order {
                1 => raw[i - 1] += &c,
                2 => raw[i - 1] -= &c,
                4 => raw[i - 2] -= &c,
                // x^phi = x^{phi/2} - 1, applied at degree i >= phi:
                // x^i = x^{i - phi/2} - x^{i - phi}
                12 | 24 | 48 => {
                    raw[i - phi / 2] += &c;
                    raw[i - phi] -= &c;
                }
                _ => unreachable!(),
            }
        }
        raw.resize(phi, BigInt::zero());
        CyclotomicInt {
            order,
            coeffs: raw,
        }
    }

    /// Ring order n of Z[zeta_n].
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Canonical coefficients (length phi(order)).
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// If the element is an integer, returns it.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn assert_same_order(&self, other: &Self) {
        assert_eq!(
            self.order, other.order,
            "cyclotomic order mismatch: {} vs {} (embed first)",
            self.order, other.order
        );
    }

    /// Injective ring embedding Z[zeta_m] -> Z[zeta_n] for m | n,
    /// sending zeta_m to zeta_n^{n/m}.
    pub fn embed(&self, order: u32) -> Result<Self> {
        if order == self.order {
            return Ok(self.clone());
        }
        if !SUPPORTED_ORDERS.contains(&order) || order % self.order != 0 {
            return Err(Error::Inconsistency(format!(
                "no embedding of Z[zeta_{}] into Z[zeta_{}]",
                self.order, order
            )));
        }
        let stride = (order / self.order) as usize;
        let mut raw = vec![BigInt::zero(); (self.coeffs.len() - 1) * stride + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * stride] = c.clone();
        }
        Ok(Self::reduce(order, raw))
    }

    /// Multiplies by zeta_order^k.
    pub fn rotate(&self, k: i64) -> Self {
        self * &Self::root_of_unity(self.order, k)
    }

    /// Multiplicative inverse when the element is a root of unity times
    /// a sign; `None` otherwise. Enough for series leading coefficients.
    pub fn inverse_if_unit(&self) -> Option<Self> {
        let n = self.order as i64;
        for k in 0..n {
            for sign in [1i64, -1] {
                let mut cand = Self::root_of_unity(self.order, k);
                if sign < 0 {
                    cand = -&cand;
                }
                if (self * &cand).is_one() {
                    return Some(cand);
                }
            }
        }
        None
    }
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.assert_same_order(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicInt {
            order: self.order,
            coeffs,
        }
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.assert_same_order(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CyclotomicInt {
            order: self.order,
            coeffs,
        }
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(Neg::neg).collect(),
        }
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.assert_same_order(rhs);
        let mut raw = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        CyclotomicInt::reduce(self.order, raw)
    }
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "z{}^{}", self.order, i)?;
            } else {
                write!(f, "{c}*z{}^{}", self.order, i)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roots_have_exact_order() {
        for &n in &SUPPORTED_ORDERS {
            let z = CyclotomicInt::root_of_unity(n, 1);
            let mut pow = CyclotomicInt::one(n);
            for k in 1..=n {
                pow = &pow * &z;
                if k < n {
                    assert!(!pow.is_one(), "zeta_{n}^{k} must not be 1");
                }
            }
            assert!(pow.is_one(), "zeta_{n}^{n} must be 1");
        }
    }

    #[test]
    fn omega_is_cube_root() {
        // omega = zeta_12^4 satisfies omega^2 + omega + 1 = 0
        let omega = CyclotomicInt::root_of_unity(12, 4);
        let sum = &(&(&omega * &omega) + &omega) + &CyclotomicInt::one(12);
        assert!(sum.is_zero());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = CyclotomicInt::root_of_unity(12, 3);
        let minus_one = -&CyclotomicInt::one(12);
        assert_eq!(&i * &i, minus_one);
    }

    #[test]
    fn embedding_sends_roots_to_roots() {
        // zeta_24 embedded into Z[zeta_48] equals zeta_48^2
        let z24 = CyclotomicInt::root_of_unity(24, 1);
        let embedded = z24.embed(48).unwrap();
        assert_eq!(embedded, CyclotomicInt::root_of_unity(48, 2));
    }

    #[test]
    fn embedding_is_injective_on_roots() {
        for &(m, n) in &[(4u32, 12u32), (12, 24), (12, 48), (24, 48), (2, 24)] {
            let mut seen = Vec::new();
            for k in 0..m as i64 {
                let e = CyclotomicInt::root_of_unity(m, k).embed(n).unwrap();
                assert!(!seen.contains(&e), "collision for zeta_{m}^{k} in Z[zeta_{n}]");
                seen.push(e);
            }
        }
    }

    #[test]
    fn unit_inverse() {
        for k in 0..48 {
            let z = CyclotomicInt::root_of_unity(48, k);
            let inv = z.inverse_if_unit().expect("roots are units");
            assert!((&z * &inv).is_one());
        }
        assert!(CyclotomicInt::from_int(12, 2).inverse_if_unit().is_none());
    }

    fn arb_elem(order: u32) -> impl Strategy<Value = CyclotomicInt> {
        let phi = phi_of(order);
        proptest::collection::vec(-20i64..20, phi).prop_map(move |v| {
            let mut z = CyclotomicInt::zero(order);
            for (i, c) in v.into_iter().enumerate() {
                z.coeffs[i] = BigInt::from(c);
            }
            z
        })
    }

    proptest! {
        #[test]
        fn embedding_is_ring_homomorphism(a in arb_elem(12), b in arb_elem(12)) {
            let ea = a.embed(48).unwrap();
            let eb = b.embed(48).unwrap();
            prop_assert_eq!((&a + &b).embed(48).unwrap(), &ea + &eb);
            prop_assert_eq!((&a * &b).embed(48).unwrap(), &ea * &eb);
        }

        #[test]
        fn ring_laws(a in arb_elem(24), b in arb_elem(24), c in arb_elem(24)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}

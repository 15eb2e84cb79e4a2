//! The eta-quotient data model.
//!
//! An eta quotient is a finite product of rescaled eta factors with integer
//! exponents; we represent it by its exponent vector, a finitely supported
//! map d -> X_d with no stored zeros. The empty map is the constant
//! quotient 1. The level (lcm of the support) and twice the weight (sum of
//! exponents) are computed, never stored: the same vector may be viewed on
//! any level its own level divides.
//!
//! Text format, bit-exact: terms `base^exp` separated by single spaces,
//! ascending base, exponent always written. `"2^5 1^-2 4^-2"` parses to
//! the same vector as `"1^-2 2^5 4^-2"`; the latter is the canonical form.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{divisors, gcd, lcm};
use crate::error::{Error, Result};

mod zagier;
pub use zagier::{zagier_member_name, zagier_members, ZAGIER_COUNT};

/// Exponent vector of an eta quotient: support map d -> X_d, zero-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector {
    support: BTreeMap<u64, i64>,
}

impl ExponentVector {
    /// The constant quotient 1.
    pub fn constant() -> Self {
        Self::default()
    }

    /// Builds a vector from (base, exponent) pairs. Zero exponents are
    /// dropped; duplicate bases and base 0 are rejected.
    pub fn from_pairs<I: IntoIterator<Item = (u64, i64)>>(pairs: I) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (d, e) in pairs {
            if d == 0 {
                return Err(Error::ZeroArgument);
            }
            if e == 0 {
                continue;
            }
            if support.insert(d, e).is_some() {
                return Err(Error::DuplicateBase(d));
            }
        }
        Ok(ExponentVector { support })
    }

    /// Parses the quotient grammar. The empty string is the constant 1.
    pub fn parse(text: &str) -> Result<Self> {
        let mut support = BTreeMap::new();
        let mut pos = 0usize;
        let bytes = text.as_bytes();
        let n = bytes.len();
        while pos < n {
            if bytes[pos] == b' ' {
                pos += 1;
                continue;
            }
            let start = pos;
            while pos < n && bytes[pos] != b' ' {
                pos += 1;
            }
            let term = &text[start..pos];
            let (base_str, exp_str) = match term.find('^') {
                Some(i) => (&term[..i], Some(&term[i + 1..])),
                None => (term, None),
            };
            let base: u64 = base_str.parse().map_err(|_| Error::Parse {
                pos: start,
                msg: format!("expected positive base, got {base_str:?}"),
            })?;
            if base == 0 {
                return Err(Error::Parse {
                    pos: start,
                    msg: "base must be positive".into(),
                });
            }
            let exp: i64 = match exp_str {
                None => 1,
                Some(s) => s.parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: format!("expected integer exponent, got {s:?}"),
                })?,
            };
            if exp == 0 {
                return Err(Error::ZeroExponent(base));
            }
            if support.insert(base, exp).is_some() {
                return Err(Error::DuplicateBase(base));
            }
        }
        Ok(ExponentVector { support })
    }

    /// Exponent at `d` (0 if absent).
    pub fn get(&self, d: u64) -> i64 {
        self.support.get(&d).copied().unwrap_or(0)
    }

    /// Iterates over (base, exponent) pairs in ascending base order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.support.iter().map(|(&d, &e)| (d, e))
    }

    /// Number of support points.
    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn is_constant(&self) -> bool {
        self.support.is_empty()
    }

    /// Level: lcm of the support (1 for the constant quotient).
    pub fn level(&self) -> u64 {
        self.support.keys().fold(1, |acc, &d| lcm(acc, d))
    }

    /// Twice the weight: sigma(X) = sum of exponents.
    pub fn weight2(&self) -> i64 {
        self.support.values().sum()
    }

    /// Sum of d * X_d: 24 times the order at the cusp at infinity; the
    /// leading u-exponent of the q-expansion.
    pub fn weighted_degree(&self) -> i64 {
        self.support.iter().map(|(&d, &e)| d as i64 * e).sum()
    }

    /// Substitutes z -> nu z: the support shifts d -> nu d.
    pub fn rescale(&self, nu: u64) -> Self {
        assert!(nu >= 1, "rescaling factor must be positive");
        ExponentVector {
            support: self.support.iter().map(|(&d, &e)| (d * nu, e)).collect(),
        }
    }

    /// gcd of the support keys; `None` for the constant quotient.
    pub fn support_gcd(&self) -> Option<u64> {
        self.support.keys().copied().reduce(gcd)
    }

    /// True iff the quotient is not a rescaling by nu > 1 of another
    /// quotient, i.e. the support gcd is 1. Errors on the constant.
    pub fn is_primitive(&self) -> Result<bool> {
        match self.support_gcd() {
            Some(g) => Ok(g == 1),
            None => Err(Error::EmptySupport),
        }
    }

    /// Unique factorization X = rescale(P, g) with P primitive:
    /// returns (P, g). Errors on the constant.
    pub fn primitive_part(&self) -> Result<(Self, u64)> {
        let g = self.support_gcd().ok_or(Error::EmptySupport)?;
        let primitive = ExponentVector {
            support: self.support.iter().map(|(&d, &e)| (d / g, e)).collect(),
        };
        Ok((primitive, g))
    }

    /// Reindexes along an exact divisor d of N: entry (d1, d2) with
    /// d1 | N/d, d2 | d is X_{d1 d2}. Requires level | N and gcd(d, N/d) = 1.
    pub fn reindex(&self, n: u64, d: u64) -> Result<ReindexedMatrix> {
        if n == 0 || d == 0 {
            return Err(Error::ZeroArgument);
        }
        if n % d != 0 {
            return Err(Error::NotDivisor { d, n });
        }
        if gcd(d, n / d) != 1 {
            return Err(Error::NotExactDivisor { d, n });
        }
        let level = self.level();
        if n % level != 0 {
            return Err(Error::LevelMismatch { level, n });
        }
        let outer = divisors(n / d)?;
        let inner = divisors(d)?;
        let mut entries = vec![0i64; outer.len() * inner.len()];
        for (i, &d1) in outer.iter().enumerate() {
            for (j, &d2) in inner.iter().enumerate() {
                entries[i * inner.len() + j] = self.get(d1 * d2);
            }
        }
        Ok(ReindexedMatrix {
            outer,
            inner,
            entries,
        })
    }

    /// Coprime-level tensor product: Z_{d d'} = X_d * Y_{d'}.
    /// Levels multiply; sigma multiplies. Rejects non-coprime levels.
    pub fn star_product(&self, other: &Self) -> Result<Self> {
        let (lx, ly) = (self.level(), other.level());
        if gcd(lx, ly) != 1 {
            return Err(Error::NonCoprimeLevels(lx, ly));
        }
        let mut support = BTreeMap::new();
        for (d, e) in self.iter() {
            for (d2, e2) in other.iter() {
                let prod = e * e2;
                if prod != 0 {
                    support.insert(d * d2, prod);
                }
            }
        }
        Ok(ExponentVector { support })
    }
}

impl fmt::Display for ExponentVector {
    /// Canonical text: ascending base, single spaces, exponent always
    /// written (including ^1). The constant formats as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, e) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{d}^{e}")?;
        }
        Ok(())
    }
}

/// The image of an exponent vector under the canonical bijection
/// Z^{D_N} = Z^{D_{N/d} x D_d} for d exactly dividing N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReindexedMatrix {
    outer: Vec<u64>,
    inner: Vec<u64>,
    entries: Vec<i64>,
}

impl ReindexedMatrix {
    /// Row index set: divisors of N/d, ascending.
    pub fn outer_divisors(&self) -> &[u64] {
        &self.outer
    }

    /// Column index set: divisors of d, ascending.
    pub fn inner_divisors(&self) -> &[u64] {
        &self.inner
    }

    /// Entry at (d1, d2), indexed by divisor value.
    pub fn entry(&self, d1: u64, d2: u64) -> i64 {
        let i = self
            .outer
            .binary_search(&d1)
            .expect("d1 must divide N/d");
        let j = self
            .inner
            .binary_search(&d2)
            .expect("d2 must divide d");
        self.entries[i * self.inner.len() + j]
    }

    /// Flattens back to an exponent vector on the divisors of N.
    pub fn flatten(&self) -> ExponentVector {
        let mut pairs = Vec::new();
        for (i, &d1) in self.outer.iter().enumerate() {
            for (j, &d2) in self.inner.iter().enumerate() {
                let e = self.entries[i * self.inner.len() + j];
                if e != 0 {
                    pairs.push((d1 * d2, e));
                }
            }
        }
        ExponentVector::from_pairs(pairs).expect("coprime index sets cannot collide")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(pairs: &[(u64, i64)]) -> ExponentVector {
        ExponentVector::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(ExponentVector::parse("1^2 2^-1").unwrap(), ev(&[(1, 2), (2, -1)]));
        assert_eq!(
            ExponentVector::parse("2^5 1^-2 4^-2").unwrap(),
            ev(&[(1, -2), (2, 5), (4, -2)])
        );
        assert_eq!(ExponentVector::parse("").unwrap(), ExponentVector::constant());
        // bare base means exponent 1
        assert_eq!(ExponentVector::parse("3").unwrap(), ev(&[(3, 1)]));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            ExponentVector::parse("1^2 1^3"),
            Err(Error::DuplicateBase(1))
        ));
        assert!(matches!(
            ExponentVector::parse("2^0"),
            Err(Error::ZeroExponent(2))
        ));
        assert!(matches!(ExponentVector::parse("x^2"), Err(Error::Parse { .. })));
        assert!(matches!(ExponentVector::parse("0^2"), Err(Error::Parse { .. })));
        assert!(matches!(ExponentVector::parse("2^"), Err(Error::Parse { .. })));
    }

    #[test]
    fn level_examples() {
        assert_eq!(ev(&[(1, 2), (2, -1)]).level(), 2);
        assert_eq!(ExponentVector::constant().level(), 1);
        assert_eq!(
            ev(&[(2, 2), (3, 1), (12, 1), (1, -1), (4, -1), (6, -1)]).level(),
            12
        );
    }

    #[test]
    fn weight2_examples() {
        assert_eq!(ev(&[(1, 1)]).weight2(), 1);
        assert_eq!(ev(&[(1, 2), (2, -1)]).weight2(), 1);
        assert_eq!(ExponentVector::constant().weight2(), 0);
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(ev(&[(1, 1)]).rescale(6), ev(&[(6, 1)]));
        assert_eq!(ev(&[(1, 2), (2, -1)]).rescale(3), ev(&[(3, 2), (6, -1)]));
        assert_eq!(ExponentVector::constant().rescale(5), ExponentVector::constant());
    }

    #[test]
    fn primitivity_examples() {
        assert!(ev(&[(1, 2), (2, -1)]).is_primitive().unwrap());
        assert!(!ev(&[(3, 2), (6, -1)]).is_primitive().unwrap());
        assert!(ev(&[(2, 1), (3, 1)]).is_primitive().unwrap());
        assert_eq!(
            ExponentVector::constant().is_primitive(),
            Err(Error::EmptySupport)
        );
    }

    #[test]
    fn reindex_examples() {
        let x = ev(&[(1, -1), (2, 1), (3, 2), (6, -1)]);
        let m = x.reindex(6, 3).unwrap();
        assert_eq!(m.outer_divisors(), &[1, 2]);
        assert_eq!(m.inner_divisors(), &[1, 3]);
        assert_eq!(m.entry(1, 1), -1);
        assert_eq!(m.entry(1, 3), 2);
        assert_eq!(m.entry(2, 1), 1);
        assert_eq!(m.entry(2, 3), -1);

        let zero = ExponentVector::constant().reindex(6, 3).unwrap();
        assert!(zero.entries.iter().all(|&e| e == 0));

        let m = ev(&[(4, 1)]).reindex(4, 4).unwrap();
        assert_eq!(m.outer_divisors(), &[1]);
        assert_eq!(m.inner_divisors(), &[1, 2, 4]);
        assert_eq!(m.entry(1, 1), 0);
        assert_eq!(m.entry(1, 2), 0);
        assert_eq!(m.entry(1, 4), 1);
    }

    #[test]
    fn reindex_rejects_bad_arguments() {
        let x = ev(&[(1, 1)]);
        assert!(matches!(x.reindex(12, 2), Err(Error::NotExactDivisor { .. })));
        let y = ev(&[(5, 1)]);
        assert!(matches!(y.reindex(12, 3), Err(Error::LevelMismatch { .. })));
    }

    #[test]
    fn star_product_examples() {
        let a = ev(&[(5, 1)]);
        let b = ev(&[(1, 2), (2, -1)]);
        assert_eq!(a.star_product(&b).unwrap(), ev(&[(5, 2), (10, -1)]));

        let one = ev(&[(1, 1)]);
        assert_eq!(one.star_product(&b).unwrap(), b);

        let c = ev(&[(1, 2), (2, -1)]);
        let d = ev(&[(1, 2), (3, -1)]);
        assert_eq!(
            c.star_product(&d).unwrap(),
            ev(&[(1, 4), (3, -2), (2, -2), (6, 1)])
        );

        assert!(matches!(
            b.star_product(&c),
            Err(Error::NonCoprimeLevels(2, 2))
        ));
    }

    fn arb_vector() -> impl Strategy<Value = ExponentVector> {
        proptest::collection::btree_map(1u64..30, (-6i64..6).prop_filter("nonzero", |&e| e != 0), 0..6)
            .prop_map(|support| ExponentVector { support })
    }

    proptest! {
        #[test]
        fn rescale_composes(x in arb_vector(), a in 1u64..10, b in 1u64..10) {
            prop_assert_eq!(x.rescale(a).rescale(b), x.rescale(a * b));
            prop_assert_eq!(x.rescale(a).weight2(), x.weight2());
        }

        #[test]
        fn rescaled_is_never_primitive(x in arb_vector(), nu in 2u64..8) {
            if !x.is_constant() {
                prop_assert!(!x.rescale(nu).is_primitive().unwrap());
                let (p, g) = x.primitive_part().unwrap();
                prop_assert!(p.is_primitive().unwrap());
                prop_assert_eq!(p.rescale(g), x);
            }
        }

        #[test]
        fn reindex_round_trips(x in arb_vector(), p in prop::sample::select(vec![2u64, 3, 5]), k in 1u32..4) {
            // choose d = p^max(k, v_p(level)) so that d exactly divides
            // n = d * (level with the p-part removed)
            let level = x.level();
            let v = crate::arith::valuation(level, p);
            let d = p.pow(k.max(v));
            let n = d * (level / p.pow(v));
            let m = x.reindex(n, d).unwrap();
            prop_assert_eq!(m.flatten(), x);
        }

        #[test]
        fn star_multiplies_sigma_and_level(a in arb_vector(), b in arb_vector()) {
            if crate::arith::gcd(a.level(), b.level()) == 1 {
                let z = a.star_product(&b).unwrap();
                prop_assert_eq!(z.weight2(), a.weight2() * b.weight2());
                if !a.is_constant() && !b.is_constant() {
                    prop_assert_eq!(z.level(), a.level() * b.level());
                }
            }
        }

        #[test]
        fn parse_format_round_trip(x in arb_vector()) {
            let text = x.to_string();
            prop_assert_eq!(ExponentVector::parse(&text).unwrap(), x);
        }
    }
}

//! Holomorphy-preserving exponent maps between levels.
//!
//! For N exactly dividing M, a weight vector on the divisors of Q = M/N
//! induces a homomorphism from quotients on level M to quotients on
//! level N: reindex the exponent vector into a D_N x D_Q matrix and apply
//! it to the weight vector. When the weights satisfy an exact per-prime
//! inequality system the map preserves holomorphy; when every inequality
//! is strict it also never sends a nonconstant holomorphic quotient to
//! the constant 1.
//!
//! The inequality at prime p and exponent j (with a(p^-1) = 0 and values
//! outside the divisors of Q read as 0) is
//!
//! ```text
//! a(p^(j-1)) + a(p^(j+1)) <= c * a(p^j),
//! c = p         if p^j exactly divides Q (j = 0 or j = v_p(Q)),
//! c = p + 1/p   otherwise,
//! ```
//!
//! evaluated in exact rational arithmetic, over all primes p and all
//! j with p^j | Q. For primes not dividing Q the system degenerates to
//! a(1) >= 0. Equivalently, the inverse symmetrized order matrix of Q
//! applied to the weight vector is entrywise nonnegative; that inequality
//! chain is re-checked directly on construction.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::arith::{divisors, factor, gcd, valuation, Rational};
use crate::error::{Error, Result};
use crate::etaq::ExponentVector;
use crate::orders::sym_order_matrix_inverse;

/// An admissible weight vector for the level-lowering map from level `m`
/// to level `n` (n exactly divides m), with values on the divisors of m/n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiWeights {
    m: u64,
    n: u64,
    values: BTreeMap<u64, i64>,
    strict: bool,
}

impl PhiWeights {
    /// Validates a weight vector. The values must cover every divisor of
    /// m/n, be multiplicative across coprime splittings (projectively:
    /// a(d1 d2) a(1) = a(d1) a(d2), so prime-power cofactors are
    /// unconstrained), and satisfy the inequality system above.
    pub fn validate(m: u64, n: u64, values: &BTreeMap<u64, i64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::ZeroArgument);
        }
        if m % n != 0 {
            return Err(Error::NotDivisor { d: n, n: m });
        }
        if gcd(n, m / n) != 1 {
            return Err(Error::NotExactDivisor { d: n, n: m });
        }
        let q = m / n;
        let divs = divisors(q)?;
        for &d in &divs {
            if !values.contains_key(&d) {
                return Err(Error::WeightsDomain { expected: q, d });
            }
        }
        if let Some((&d, _)) = values.iter().find(|(&d, _)| d == 0 || q % d != 0) {
            return Err(Error::WeightsDomain { expected: q, d });
        }
        let at = |d: u64| -> i64 {
            if d == 0 {
                0
            } else {
                values.get(&d).copied().unwrap_or(0)
            }
        };

        // projective multiplicativity across coprime splittings
        for &d1 in &divs {
            for &d2 in &divs {
                if d1 > 1 && d2 > 1 && d1 <= d2 && gcd(d1, d2) == 1 && q % (d1 * d2) == 0 {
                    let lhs = at(d1 * d2) as i128 * at(1) as i128;
                    let rhs = at(d1) as i128 * at(d2) as i128;
                    if lhs != rhs {
                        return Err(Error::WeightsNotMultiplicative { d1, d2 });
                    }
                }
            }
        }

        // per-prime inequality system, exact rationals
        // j = 0 row of any prime away from q reads 0 <= p * a(1)
        if at(1) < 0 {
            let q_primes = factor(q)?;
            let outside = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
                .into_iter()
                .find(|&p| q_primes.exponent_of(p) == 0)
                .unwrap_or(41);
            return Err(Error::WeightsInequality { p: outside, j: 0 });
        }
        let mut strict = at(1) >= 1;
        for &(p, e) in factor(q)?.pairs() {
            for j in 0..=e {
                let below = if j == 0 { 0 } else { at(p.pow(j - 1)) };
                let above = if j == e { 0 } else { at(p.pow(j + 1)) };
                let lhs = Rational::from_integer(BigInt::from(below + above));
                let exact = j == 0 || j == e;
                let coef = if exact {
                    Rational::from_integer(BigInt::from(p))
                } else {
                    Rational::new(BigInt::from(p * p + 1), BigInt::from(p))
                };
                let rhs = coef * Rational::from_integer(BigInt::from(at(p.pow(j))));
                if lhs > rhs {
                    return Err(Error::WeightsInequality { p, j });
                }
                if lhs == rhs {
                    strict = false;
                }
            }
        }

        let w = PhiWeights {
            m,
            n,
            values: divs.iter().map(|&d| (d, at(d))).collect(),
            strict,
        };
        w.check_inverse_chain()?;
        Ok(w)
    }

    /// The inequality chain behind holomorphy preservation: the inverse
    /// symmetrized order matrix of m/n applied to the weights must be
    /// entrywise nonnegative, strictly so for strict weights.
    fn check_inverse_chain(&self) -> Result<()> {
        let q = self.m / self.n;
        let inv = sym_order_matrix_inverse(q)?;
        for &t in inv.divisors() {
            let mut acc: i128 = 0;
            for (&d, &a) in &self.values {
                acc += inv.numerator(t, d)? * a as i128;
            }
            if acc < 0 || (self.strict && acc == 0) {
                return Err(Error::Inconsistency(format!(
                    "inverse chain fails at divisor {t} for weights on {} -> {}",
                    self.m, self.n
                )));
            }
        }
        Ok(())
    }

    /// The all-ones weight vector; always valid and strict.
    pub fn all_ones(m: u64, n: u64) -> Result<Self> {
        let values = divisors(m.checked_div(n).ok_or(Error::ZeroArgument)?)?
            .into_iter()
            .map(|d| (d, 1))
            .collect();
        Self::validate(m, n, &values)
    }

    /// The vector with `value` at p^j and 1 elsewhere, for a prime-power
    /// cofactor m/n = p^e with 0 <= j <= e and 1 <= value <= p - 1.
    /// Always valid and strict.
    pub fn spiked(m: u64, n: u64, j: u32, value: i64) -> Result<Self> {
        if m == 0 || n == 0 || m % n != 0 {
            return Err(Error::ZeroArgument);
        }
        let q = m / n;
        let f = factor(q)?;
        if f.pairs().len() != 1 {
            return Err(Error::OutOfRange {
                name: "m/n (must be a prime power)",
                value: q as i64,
            });
        }
        let (p, e) = f.pairs()[0];
        if j > e {
            return Err(Error::OutOfRange {
                name: "j",
                value: j as i64,
            });
        }
        if value < 1 || value as u64 > p - 1 {
            return Err(Error::OutOfRange {
                name: "value",
                value,
            });
        }
        let values = divisors(q)?
            .into_iter()
            .map(|d| (d, if d == p.pow(j) { value } else { 1 }))
            .collect();
        Self::validate(m, n, &values)
    }

    /// The vector 1 + r*delta_j on a prime-power cofactor: 1 + r at p^j,
    /// 1 elsewhere. Valid for r in {0, 1}.
    pub fn ones_plus_delta(m: u64, n: u64, j: u32, r: i64) -> Result<Self> {
        if m == 0 || n == 0 || m % n != 0 {
            return Err(Error::ZeroArgument);
        }
        let q = m / n;
        let f = factor(q)?;
        if f.pairs().len() != 1 {
            return Err(Error::OutOfRange {
                name: "m/n (must be a prime power)",
                value: q as i64,
            });
        }
        let (p, _) = f.pairs()[0];
        let values = divisors(q)?
            .into_iter()
            .map(|d| (d, if d == p.pow(j) { 1 + r } else { 1 }))
            .collect();
        Self::validate(m, n, &values)
    }

    pub fn source_level(&self) -> u64 {
        self.m
    }

    pub fn target_level(&self) -> u64 {
        self.n
    }

    /// Weight value at a divisor of m/n.
    pub fn value(&self, d: u64) -> i64 {
        self.values.get(&d).copied().unwrap_or(0)
    }

    /// Whether every admissibility inequality is strict; strict maps never
    /// send a nonconstant holomorphic quotient to the constant.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Applies the map to a quotient on level m: the reindexed exponent
    /// matrix times the weight vector, giving a quotient on level n.
    pub fn apply(&self, x: &ExponentVector) -> Result<ExponentVector> {
        let level = x.level();
        if self.m % level != 0 {
            return Err(Error::LevelMismatch { level, n: self.m });
        }
        let q = self.m / self.n;
        let mut out: BTreeMap<u64, i64> = BTreeMap::new();
        for (d, e) in x.iter() {
            // unique coprime split d = d1 * d2 with d1 | n, d2 | q
            let d1 = gcd(d, self.n);
            let d2 = gcd(d, q);
            debug_assert_eq!(d1 * d2, d);
            let w = self.value(d2);
            if w != 0 {
                *out.entry(d1).or_insert(0) += e * w;
            }
        }
        out.retain(|_, e| *e != 0);
        ExponentVector::from_pairs(out)
    }
}

/// Applies the all-ones map onto the p-part of m: for m = p^e * n with
/// p not dividing n, collapses a quotient on level m to one on level p^e.
/// For a holomorphic weight-1/2 input with p >= 3 the image must be a
/// single eta factor; its exponent position j0 is returned, and a
/// violation of that fact is reported as an inconsistency.
pub fn project_to_prime_power(
    x: &ExponentVector,
    m: u64,
    p: u64,
) -> Result<(ExponentVector, Option<u32>)> {
    if m == 0 || p < 2 {
        return Err(Error::ZeroArgument);
    }
    let e = valuation(m, p);
    let target = p.pow(e);
    let w = PhiWeights::all_ones(m, target)?;
    let image = w.apply(x)?;

    let single = single_eta_factor(&image, p, e);
    let hypotheses = x.weight2() == 1 && p >= 3 && crate::orders::is_holomorphic(x, m)?;
    if hypotheses && single.is_none() {
        return Err(Error::Inconsistency(format!(
            "projection of {x} onto the {p}-part of {m} is {image}, not a single eta factor"
        )));
    }
    Ok((image, single))
}

fn single_eta_factor(image: &ExponentVector, p: u64, e: u32) -> Option<u32> {
    let mut it = image.iter();
    match (it.next(), it.next()) {
        (Some((d, 1)), None) => (0..=e).find(|&j| p.pow(j) == d),
        _ => None,
    }
}

/// Convenience: true iff the map sends x to the constant quotient.
pub fn maps_to_constant(w: &PhiWeights, x: &ExponentVector) -> Result<bool> {
    Ok(w.apply(x)?.is_constant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etaq::zagier_members;
    use crate::orders::is_holomorphic;

    fn ev(pairs: &[(u64, i64)]) -> ExponentVector {
        ExponentVector::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn weights(m: u64, n: u64, pairs: &[(u64, i64)]) -> Result<PhiWeights> {
        PhiWeights::validate(m, n, &pairs.iter().copied().collect())
    }

    #[test]
    fn validate_trivial_cofactor() {
        // m = n: single value at 1; valid for c >= 0, strict for c >= 1
        let w = weights(6, 6, &[(1, 3)]).unwrap();
        assert!(w.is_strict());
        let w = weights(6, 6, &[(1, 0)]).unwrap();
        assert!(!w.is_strict());
        assert!(weights(6, 6, &[(1, -1)]).is_err());
    }

    #[test]
    fn validate_all_ones_on_four() {
        let w = weights(4, 1, &[(1, 1), (2, 1), (4, 1)]).unwrap();
        assert!(w.is_strict());
    }

    #[test]
    fn validate_rejects_inequality_violation() {
        assert_eq!(
            weights(2, 1, &[(1, 1), (2, 3)]),
            Err(Error::WeightsInequality { p: 2, j: 0 })
        );
    }

    #[test]
    fn validate_rejects_wrong_domain() {
        assert!(matches!(
            weights(4, 1, &[(1, 1), (2, 1)]),
            Err(Error::WeightsDomain { .. })
        ));
        assert!(matches!(
            weights(4, 1, &[(1, 1), (2, 1), (3, 1), (4, 1)]),
            Err(Error::WeightsDomain { .. })
        ));
    }

    #[test]
    fn validate_rejects_non_exact_divisor() {
        assert!(matches!(
            PhiWeights::all_ones(4, 2),
            Err(Error::NotExactDivisor { .. })
        ));
    }

    #[test]
    fn validate_multiplicativity() {
        // on the divisors of 6, validity needs a(6) a(1) = a(2) a(3)
        assert!(weights(6, 1, &[(1, 1), (2, 1), (3, 1), (6, 2)]).is_err());
        let w = weights(6, 1, &[(1, 1), (2, 1), (3, 2), (6, 2)]).unwrap();
        assert!(w.is_strict());
    }

    #[test]
    fn lemma_style_vectors_on_prime_powers_are_accepted() {
        // end-weighted vectors with a(1) != 1 are fine on prime powers
        let w = weights(8, 1, &[(1, 1), (2, 2), (4, 2), (8, 1)]).unwrap();
        assert!(!w.is_strict()); // j = 0 row is tight: 2 <= 2*1
        let w = weights(8, 1, &[(1, 2), (2, 2), (4, 2), (8, 2)]).unwrap();
        assert!(w.is_strict());
    }

    #[test]
    fn spiked_vectors() {
        let w = PhiWeights::spiked(5, 1, 0, 4).unwrap();
        assert_eq!(w.value(1), 4);
        assert_eq!(w.value(5), 1);
        assert!(w.is_strict());

        let w = PhiWeights::spiked(3, 1, 1, 2).unwrap();
        assert_eq!(w.value(1), 1);
        assert_eq!(w.value(3), 2);
        assert!(w.is_strict());

        let w = PhiWeights::spiked(2, 1, 0, 1).unwrap();
        assert_eq!((w.value(1), w.value(2)), (1, 1));
        assert!(w.is_strict());

        assert!(PhiWeights::spiked(5, 1, 0, 5).is_err());
        assert!(PhiWeights::spiked(5, 1, 2, 1).is_err());
        assert!(PhiWeights::spiked(6, 1, 0, 1).is_err());
    }

    #[test]
    fn spiked_always_strict_sweep() {
        for (p, e) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1), (7, 2)] {
            let q = p.pow(e);
            for j in 0..=e {
                for v in 1..p.min(6) {
                    let w = PhiWeights::spiked(q, 1, j, v as i64).unwrap();
                    assert!(w.is_strict(), "spiked({p}^{e}, j={j}, v={v})");
                }
            }
        }
    }

    #[test]
    fn apply_identity() {
        let w = weights(6, 6, &[(1, 1)]).unwrap();
        let x = ev(&[(1, -1), (2, 1), (3, 2), (6, -1)]);
        assert_eq!(w.apply(&x).unwrap(), x);
    }

    #[test]
    fn apply_collapses_level_six_member() {
        let x = ev(&[(1, -1), (2, 1), (3, 2), (6, -1)]);
        let w = PhiWeights::all_ones(6, 3).unwrap();
        assert_eq!(w.apply(&x).unwrap(), ev(&[(3, 1)]));
    }

    #[test]
    fn apply_matrix_vector_example() {
        let x = ev(&[(1, 2), (2, -1)]);
        let w = weights(2, 1, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(w.apply(&x).unwrap(), ev(&[(1, 3)]));
    }

    #[test]
    fn apply_rejects_level_mismatch() {
        let w = PhiWeights::all_ones(6, 3).unwrap();
        assert!(matches!(
            w.apply(&ev(&[(4, 1)])),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn projection_examples() {
        let (img, j0) = project_to_prime_power(&ev(&[(3, 1)]), 3, 3).unwrap();
        assert_eq!(img, ev(&[(3, 1)]));
        assert_eq!(j0, Some(1));

        let x = ev(&[(1, -1), (2, 1), (3, 2), (6, -1)]);
        let (img, j0) = project_to_prime_power(&x, 6, 3).unwrap();
        assert_eq!(img, ev(&[(3, 1)]));
        assert_eq!(j0, Some(1));

        let x = ev(&[(1, 1), (2, -1), (4, 1)]);
        let (img, j0) = project_to_prime_power(&x, 12, 3).unwrap();
        assert_eq!(img, ev(&[(1, 1)]));
        assert_eq!(j0, Some(0));
    }

    #[test]
    fn holomorphy_preservation_on_members() {
        // every member rescaled into level 12 or 72, mapped along several
        // valid weight vectors, stays holomorphic
        let maps = [
            PhiWeights::all_ones(12, 3).unwrap(),
            PhiWeights::all_ones(12, 4).unwrap(),
            PhiWeights::spiked(12, 3, 1, 1).unwrap(),
            PhiWeights::ones_plus_delta(12, 4, 1, 1).unwrap(),
        ];
        for member in zagier_members() {
            for nu in [1u64, 2, 3] {
                let x = member.rescale(nu);
                if 12 % x.level() != 0 {
                    continue;
                }
                assert!(is_holomorphic(&x, 12).unwrap());
                for w in &maps {
                    let y = w.apply(&x).unwrap();
                    assert!(
                        is_holomorphic(&y, w.target_level()).unwrap(),
                        "image {y} of {x} must be holomorphic"
                    );
                    if w.is_strict() && !x.is_constant() {
                        assert!(!y.is_constant(), "strict map sent {x} to the constant");
                    }
                }
            }
        }
    }

    #[test]
    fn weight_preserved_by_all_ones() {
        for member in zagier_members() {
            let x = member.rescale(2);
            let m = x.level() * 5;
            let w = PhiWeights::all_ones(m, x.level()).unwrap();
            let y = w.apply(&x).unwrap();
            assert_eq!(y.weight2(), x.weight2());
        }
    }

    #[test]
    fn apply_is_linear() {
        let w = weights(6, 1, &[(1, 1), (2, 1), (3, 2), (6, 2)]).unwrap();
        let x1 = ev(&[(1, 2), (2, -1), (3, 1)]);
        let x2 = ev(&[(2, 3), (6, -2)]);
        let sum = {
            let mut pairs: BTreeMap<u64, i64> = x1.iter().collect();
            for (d, e) in x2.iter() {
                *pairs.entry(d).or_insert(0) += e;
            }
            ExponentVector::from_pairs(pairs).unwrap()
        };
        let lhs = w.apply(&sum).unwrap();
        let rhs = {
            let y1 = w.apply(&x1).unwrap();
            let y2 = w.apply(&x2).unwrap();
            let mut pairs: BTreeMap<u64, i64> = y1.iter().collect();
            for (d, e) in y2.iter() {
                *pairs.entry(d).or_insert(0) += e;
            }
            ExponentVector::from_pairs(pairs).unwrap()
        };
        assert_eq!(lhs, rhs);
    }
}

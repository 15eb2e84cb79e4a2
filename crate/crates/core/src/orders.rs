//! Cusps of the Hecke congruence groups, the order of an eta factor at a
//! cusp, order matrices and their exact inverses, holomorphy, and the
//! valence identity.
//!
//! # Conventions
//!
//! For level N the cusps are classified by pairs (t, a) with t | N and a a
//! residue modulo gcd(t, N/t) coprime to it; the class of a point [a : b]
//! in P^1(Q) has t = gcd(b, N). The order of a rescaled eta factor at any
//! cusp a/t depends only on t:
//!
//! ```text
//! ord_{a/t}(eta_d) = N * gcd(d, t)^2 / (24 * d * gcd(t^2, N))
//! ```
//!
//! The order matrix A_N collects 24 times these orders, rows indexed by t,
//! columns by d. Scaling row t by gcd(t, N/t) symmetrizes it; the
//! symmetrized matrix is entrywise multiplicative over the prime powers of
//! N, and its inverse has a tridiagonal closed form at prime powers. A
//! quotient with exponent vector X is holomorphic exactly when the
//! symmetrized matrix applied to X is entrywise nonnegative.
//!
//! Matrices are indexed by divisor *value*, never by position, so the
//! multiplicative assembly is independent of any prime ordering.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::arith::{divisors, factor, gcd, rational_int, totient, Rational};
use crate::error::{Error, Result};
use crate::etaq::ExponentVector;

/// A cusp class of the level-N group: denominator divisor `t` and a
/// numerator residue `a` modulo gcd(t, N/t).
///
/// `a` is the canonical residue label in [0, gcd(t, N/t)), always coprime
/// to gcd(t, N/t); it is 0 exactly when gcd(t, N/t) = 1. Use
/// [`CuspClass::representative_numerator`] for an integer numerator
/// coprime to `t` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspClass {
    t: u64,
    a: u64,
    level: u64,
}

impl CuspClass {
    /// Classifies the point [a : b] of P^1(Q), gcd(a, b) = 1; b = 0 is the
    /// cusp at infinity (t = N).
    pub fn from_point(a: i64, b: i64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        let g = gcd(a.unsigned_abs(), b.unsigned_abs());
        if g != 1 {
            return Err(Error::NotCoprime {
                a: a.unsigned_abs(),
                b: b.unsigned_abs(),
            });
        }
        let (a, b) = if b < 0 { (-a, -b) } else { (a, b) };
        if b == 0 {
            // infinity: t = N, and gcd(N, N/N) = 1 so the residue is trivial
            return Ok(CuspClass { t: n, a: 0, level: n });
        }
        let b = b as u64;
        let t = gcd(b, n);
        let g = gcd(t, n / t);
        if g == 1 {
            return Ok(CuspClass { t, a: 0, level: n });
        }
        // class residue: a * (b/t) mod gcd(t, N/t)
        let b1 = (b / t) % g;
        let a_mod = (a.rem_euclid(g as i64)) as u64;
        let r = (a_mod * b1) % g;
        Ok(CuspClass { t, a: r, level: n })
    }

    /// Denominator divisor t.
    pub fn t(&self) -> u64 {
        self.t
    }

    /// Canonical residue label modulo gcd(t, N/t).
    pub fn residue(&self) -> u64 {
        self.a
    }

    /// Ambient level.
    pub fn level(&self) -> u64 {
        self.level
    }

    /// Number of classes sharing this t: phi(gcd(t, N/t)).
    pub fn multiplicity(&self) -> u64 {
        totient(gcd(self.t, self.level / self.t)).expect("positive")
    }

    /// An integer numerator coprime to t representing this class, so that
    /// the cusp is representative/t as a point of P^1(Q).
    pub fn representative_numerator(&self) -> u64 {
        let g = gcd(self.t, self.level / self.t);
        if g == 1 {
            return 1;
        }
        let mut a = self.a;
        while gcd(a, self.t) != 1 {
            a += g;
        }
        a
    }
}

/// The complete duplicate-free set of cusp classes of level n, ordered by
/// (t, residue). Its size is the sum of phi(gcd(t, n/t)) over t | n.
pub fn cusp_classes(n: u64) -> Result<Vec<CuspClass>> {
    let mut classes = Vec::new();
    for t in divisors(n)? {
        let g = gcd(t, n / t);
        if g == 1 {
            classes.push(CuspClass { t, a: 0, level: n });
        } else {
            for r in 0..g {
                if gcd(r, g) == 1 {
                    classes.push(CuspClass { t, a: r, level: n });
                }
            }
        }
    }
    Ok(classes)
}

/// Order of vanishing of the eta factor rescaled by d at any cusp with
/// denominator t, on level n: n * gcd(d,t)^2 / (24 * d * gcd(t^2, n)).
/// Always lies in (1/24)N.
pub fn eta_order_at_cusp(d: u64, t: u64, n: u64) -> Result<Rational> {
    let (num, den) = eta_order_24(d, t, n)?;
    debug_assert_eq!(num % den, 0);
    Ok(Rational::new(BigInt::from(num / den), BigInt::from(24)))
}

/// 24 times the order, as an exact integer fraction (num, den) with
/// den | num.
fn eta_order_24(d: u64, t: u64, n: u64) -> Result<(u128, u128)> {
    if n == 0 || d == 0 || t == 0 {
        return Err(Error::ZeroArgument);
    }
    if n % d != 0 {
        return Err(Error::NotDivisor { d, n });
    }
    if n % t != 0 {
        return Err(Error::NotDivisor { d: t, n });
    }
    let g = gcd(d, t) as u128;
    let num = n as u128 * g * g;
    let den = d as u128 * gcd(t.saturating_mul(t), n) as u128;
    Ok((num, den))
}

/// Exact matrix indexed by the divisors of a level: integer numerators
/// over one common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorMatrix {
    level: u64,
    divisors: Vec<u64>,
    num: Vec<i128>,
    den: u128,
}

impl DivisorMatrix {
    pub fn level(&self) -> u64 {
        self.level
    }

    /// Ascending divisor index set.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn size(&self) -> usize {
        self.divisors.len()
    }

    fn index_of(&self, d: u64) -> Result<usize> {
        self.divisors
            .binary_search(&d)
            .map_err(|_| Error::NotDivisor { d, n: self.level })
    }

    /// Entry at (row divisor t, column divisor d) as an exact rational.
    pub fn entry(&self, t: u64, d: u64) -> Result<Rational> {
        let (i, j) = (self.index_of(t)?, self.index_of(d)?);
        Ok(Rational::new(
            BigInt::from(self.num[i * self.divisors.len() + j]),
            BigInt::from(self.den),
        ))
    }

    /// Raw integer numerator at (t, d) over the common denominator.
    pub fn numerator(&self, t: u64, d: u64) -> Result<i128> {
        let (i, j) = (self.index_of(t)?, self.index_of(d)?);
        Ok(self.num[i * self.divisors.len() + j])
    }

    /// Common denominator of all entries.
    pub fn denominator(&self) -> u128 {
        self.den
    }

    /// Row of an integer-valued matrix (denominator 1) as i64.
    pub fn integer_row(&self, t: u64) -> Result<Vec<i64>> {
        assert_eq!(self.den, 1, "integer_row requires an integer matrix");
        let i = self.index_of(t)?;
        let m = self.divisors.len();
        Ok(self.num[i * m..(i + 1) * m]
            .iter()
            .map(|&v| i64::try_from(v).expect("entry fits i64"))
            .collect())
    }

    /// Exact matrix product.
    pub fn multiply(&self, other: &DivisorMatrix) -> DivisorMatrix {
        assert_eq!(self.level, other.level, "level mismatch");
        let m = self.divisors.len();
        let mut num = vec![0i128; m * m];
        for i in 0..m {
            for k in 0..m {
                let a = self.num[i * m + k];
                if a == 0 {
                    continue;
                }
                for j in 0..m {
                    let b = other.num[k * m + j];
                    if b != 0 {
                        num[i * m + j] = num[i * m + j]
                            .checked_add(a.checked_mul(b).expect("matrix product overflow"))
                            .expect("matrix product overflow");
                    }
                }
            }
        }
        DivisorMatrix {
            level: self.level,
            divisors: self.divisors.clone(),
            num,
            den: self
                .den
                .checked_mul(other.den)
                .expect("matrix product overflow"),
        }
    }

    /// True iff the matrix is the identity.
    pub fn is_identity(&self) -> bool {
        let m = self.divisors.len();
        let den = i128::try_from(self.den).expect("denominator fits i128");
        (0..m).all(|i| {
            (0..m).all(|j| {
                let v = self.num[i * m + j];
                if i == j {
                    v == den
                } else {
                    v == 0
                }
            })
        })
    }

    /// Applies the matrix to an exponent vector (columns indexed by the
    /// vector's support), returning one exact value per row divisor.
    pub fn apply(&self, x: &ExponentVector) -> Result<Vec<(u64, Rational)>> {
        let m = self.divisors.len();
        let mut acc = vec![0i128; m];
        for (d, e) in x.iter() {
            let j = self.index_of(d)?;
            for i in 0..m {
                let term = self.num[i * m + j]
                    .checked_mul(e as i128)
                    .expect("apply overflow");
                acc[i] = acc[i].checked_add(term).expect("apply overflow");
            }
        }
        Ok(self
            .divisors
            .iter()
            .zip(acc)
            .map(|(&t, v)| {
                (
                    t,
                    Rational::new(BigInt::from(v), BigInt::from(self.den)),
                )
            })
            .collect())
    }
}

/// Order matrix of level n: entry (t, d) is 24 times the order of the
/// d-rescaled eta factor at the cusps with denominator t. Integer valued,
/// not symmetric.
pub fn order_matrix(n: u64) -> Result<Arc<DivisorMatrix>> {
    cached(n, &ORDER_CACHE, build_order_matrix)
}

fn build_order_matrix(n: u64) -> Result<DivisorMatrix> {
    let divs = divisors(n)?;
    let m = divs.len();
    let mut num = vec![0i128; m * m];
    for (i, &t) in divs.iter().enumerate() {
        for (j, &d) in divs.iter().enumerate() {
            let (a, b) = eta_order_24(d, t, n)?;
            debug_assert_eq!(a % b, 0, "order entry must be integral");
            num[i * m + j] = i128::try_from(a / b).expect("entry fits");
        }
    }
    Ok(DivisorMatrix {
        level: n,
        divisors: divs,
        num,
        den: 1,
    })
}

/// Symmetrized order matrix of level n: row t of the order matrix scaled
/// by gcd(t, n/t). Symmetric, integer, entrywise multiplicative over the
/// prime powers of n.
pub fn sym_order_matrix(n: u64) -> Result<Arc<DivisorMatrix>> {
    cached(n, &SYM_CACHE, build_sym_order_matrix)
}

fn build_sym_order_matrix(n: u64) -> Result<DivisorMatrix> {
    let a = build_order_matrix(n)?;
    let m = a.divisors.len();
    let mut num = a.num;
    for (i, &t) in a.divisors.iter().enumerate() {
        let g = gcd(t, n / t) as i128;
        for j in 0..m {
            num[i * m + j] *= g;
        }
    }
    Ok(DivisorMatrix {
        level: n,
        divisors: a.divisors,
        num,
        den: 1,
    })
}

/// The symmetrized order matrix assembled entrywise from its prime-power
/// values p^(e - |i - j|). Used to cross-check the direct formula; the two
/// constructions must agree.
pub fn sym_order_matrix_multiplicative(n: u64) -> Result<DivisorMatrix> {
    let divs = divisors(n)?;
    let primes = factor(n)?;
    let m = divs.len();
    let mut num = vec![0i128; m * m];
    for (i, &t) in divs.iter().enumerate() {
        for (j, &d) in divs.iter().enumerate() {
            let mut v: i128 = 1;
            for &(p, e) in primes.pairs() {
                let vi = crate::arith::valuation(t, p) as i32;
                let vj = crate::arith::valuation(d, p) as i32;
                let exp = e as i32 - (vi - vj).abs();
                debug_assert!(exp >= 0);
                v = v
                    .checked_mul((p as i128).pow(exp as u32))
                    .expect("entry overflow");
            }
            num[i * m + j] = v;
        }
    }
    Ok(DivisorMatrix {
        level: n,
        divisors: divs,
        num,
        den: 1,
    })
}

/// Exact inverse of the symmetrized order matrix, assembled entrywise
/// from the prime-power tridiagonal closed form
///
/// ```text
/// inv(p^e)(p^i, p^j) = w(i, j) / (p^e (p^2 - 1)),
/// w diagonal: p^2 at i in {0, e}, p^2 + 1 otherwise;
/// w off-diagonal (|i-j| = 1): -p; all other entries 0.
/// ```
pub fn sym_order_matrix_inverse(n: u64) -> Result<DivisorMatrix> {
    let divs = divisors(n)?;
    let primes = factor(n)?;
    let m = divs.len();
    let mut den: u128 = 1;
    for &(p, e) in primes.pairs() {
        let p = p as u128;
        den = den
            .checked_mul(p.pow(e) * (p * p - 1))
            .expect("denominator overflow");
    }
    let mut num = vec![0i128; m * m];
    for (i, &t) in divs.iter().enumerate() {
        for (j, &d) in divs.iter().enumerate() {
            let mut v: i128 = 1;
            for &(p, e) in primes.pairs() {
                let vi = crate::arith::valuation(t, p);
                let vj = crate::arith::valuation(d, p);
                let w = prime_power_inverse_entry(p as i128, e, vi, vj);
                if w == 0 {
                    v = 0;
                    break;
                }
                v = v.checked_mul(w).expect("entry overflow");
            }
            num[i * m + j] = v;
        }
    }
    Ok(DivisorMatrix {
        level: n,
        divisors: divs,
        num,
        den,
    })
}

/// Numerator of the prime-power inverse entry over p^e (p^2 - 1).
fn prime_power_inverse_entry(p: i128, e: u32, i: u32, j: u32) -> i128 {
    if i == j {
        if i == 0 || i == e {
            p * p
        } else {
            p * p + 1
        }
    } else if i.abs_diff(j) == 1 {
        -p
    } else {
        0
    }
}

type MatrixCache = OnceLock<Mutex<HashMap<u64, Arc<DivisorMatrix>>>>;

static ORDER_CACHE: MatrixCache = OnceLock::new();
static SYM_CACHE: MatrixCache = OnceLock::new();

fn cached(
    n: u64,
    cache: &MatrixCache,
    build: fn(u64) -> Result<DivisorMatrix>,
) -> Result<Arc<DivisorMatrix>> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = map.lock().expect("cache poisoned").get(&n) {
        return Ok(Arc::clone(m));
    }
    // build outside the lock; duplicated concurrent builds are harmless
    let built = Arc::new(build(n)?);
    let mut guard = map.lock().expect("cache poisoned");
    Ok(Arc::clone(guard.entry(n).or_insert(built)))
}

fn require_level_divides(x: &ExponentVector, n: u64) -> Result<()> {
    let level = x.level();
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if n % level != 0 {
        return Err(Error::LevelMismatch { level, n });
    }
    Ok(())
}

/// The order map of level n: cusp denominator t -> order of the quotient
/// at the cusps 1/t, as exact rationals in (1/24)Z.
pub fn order_map(x: &ExponentVector, n: u64) -> Result<BTreeMap<u64, Rational>> {
    require_level_divides(x, n)?;
    let mut out = BTreeMap::new();
    for t in divisors(n)? {
        let mut acc = Rational::from_integer(BigInt::from(0));
        for (d, e) in x.iter() {
            let (num, den) = eta_order_24(d, t, n)?;
            debug_assert_eq!(num % den, 0);
            acc += Rational::new(BigInt::from((num / den) as i128 * e as i128), BigInt::from(24));
        }
        out.insert(t, acc);
    }
    Ok(out)
}

/// Holomorphy test: every entry of the symmetrized order matrix applied
/// to X is nonnegative. The verdict does not depend on which admissible
/// level is used.
pub fn is_holomorphic(x: &ExponentVector, n: u64) -> Result<bool> {
    require_level_divides(x, n)?;
    let sym = sym_order_matrix(n)?;
    let m = sym.divisors.len();
    let mut acc = vec![0i128; m];
    for (d, e) in x.iter() {
        let j = sym.index_of(d)?;
        for i in 0..m {
            acc[i] += sym.num[i * m + j] * e as i128;
        }
    }
    Ok(acc.iter().all(|&v| v >= 0))
}

/// Classical valence identity, used to fence the enumerator: the sum of
/// the cusp orders weighted by class multiplicities equals
/// sigma(X)/24 times the index of the level-n group.
pub fn valence_identity_holds(x: &ExponentVector, n: u64) -> Result<bool> {
    let orders = order_map(x, n)?;
    let mut lhs = rational_int(0);
    for (&t, ord) in &orders {
        let mult = totient(gcd(t, n / t))?;
        lhs += Rational::from_integer(BigInt::from(mult)) * ord;
    }
    let rhs = Rational::new(
        BigInt::from(x.weight2()) * BigInt::from(crate::arith::gamma0_index(n)),
        BigInt::from(24),
    );
    Ok(lhs == rhs)
}

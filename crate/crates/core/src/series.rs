//! Truncated expansions of eta quotients in u = q^(1/24).
//!
//! Every exponent appearing anywhere here is an integer in u-units, so
//! there is no rational-exponent arithmetic at runtime. Coefficients live
//! in Z[zeta_n] with the smallest order that closes over the units in
//! play: plain integers for quotient expansions, Z[zeta_12] for the
//! triple-product substitutions, Z[zeta_48] for the sign transform.
//!
//! A series is a dense coefficient window [lead, horizon): everything
//! below the lead is zero, everything at or above the horizon is unknown.
//! Products keep the window honest (the relative precision of a product
//! is the minimum of the operands' relative precisions), and inversion is
//! valid because eta quotients have unit leading coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::arith::CyclotomicInt;
use crate::error::{Error, Result};
use crate::etaq::{zagier_members, ExponentVector, ZAGIER_COUNT};

/// A truncated series sum c_m u^(lead + m) with coefficients in
/// Z[zeta_ring], exact on the window [lead, horizon).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxSeries {
    ring: u32,
    lead: i64,
    horizon: i64,
    /// Dense window; index m holds the coefficient of u^(lead + m).
    /// Empty iff the series is zero on the whole window (then lead ==
    /// horizon); otherwise the first entry is nonzero.
    coeffs: Vec<CyclotomicInt>,
}

impl PuiseuxSeries {
    /// The zero series, known zero below `horizon`.
    pub fn zero(ring: u32, horizon: i64) -> Self {
        PuiseuxSeries {
            ring,
            lead: horizon,
            horizon,
            coeffs: Vec::new(),
        }
    }

    /// The constant 1 with window [0, horizon).
    pub fn one(ring: u32, horizon: i64) -> Self {
        Self::monomial(ring, CyclotomicInt::one(ring), 0, horizon)
    }

    /// A single term c u^exp.
    pub fn monomial(ring: u32, c: CyclotomicInt, exp: i64, horizon: i64) -> Self {
        Self::from_terms(ring, [(exp, c)], horizon)
    }

    /// Builds a series from (exponent, coefficient) terms; duplicate
    /// exponents accumulate. Terms at or above the horizon are dropped.
    pub fn from_terms<I>(ring: u32, terms: I, horizon: i64) -> Self
    where
        I: IntoIterator<Item = (i64, CyclotomicInt)>,
    {
        let mut map: BTreeMap<i64, CyclotomicInt> = BTreeMap::new();
        for (e, c) in terms {
            if e >= horizon || c.is_zero() {
                continue;
            }
            map.entry(e)
                .and_modify(|acc| *acc = &*acc + &c)
                .or_insert(c);
        }
        map.retain(|_, c| !c.is_zero());
        let lead = match map.keys().next() {
            Some(&e) => e,
            None => horizon,
        };
        let mut coeffs = vec![CyclotomicInt::zero(ring); (horizon - lead) as usize];
        for (e, c) in map {
            coeffs[(e - lead) as usize] = c;
        }
        let mut s = PuiseuxSeries {
            ring,
            lead,
            horizon,
            coeffs,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let nz = self.coeffs.iter().position(|c| !c.is_zero());
        match nz {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.lead += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.lead = self.horizon;
            }
        }
        while self.coeffs.last().is_some_and(CyclotomicInt::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ring(&self) -> u32 {
        self.ring
    }

    /// Exponent of the first nonzero coefficient; `None` if the series is
    /// zero on its window.
    pub fn lead(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lead)
        }
    }

    /// First unknown exponent.
    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    /// Number of known u-powers beyond the lead.
    pub fn precision(&self) -> usize {
        (self.horizon - self.lead) as usize
    }

    pub fn is_zero_within_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of u^exp; `None` at or above the horizon.
    pub fn coeff_at(&self, exp: i64) -> Option<CyclotomicInt> {
        if exp >= self.horizon {
            return None;
        }
        let i = exp - self.lead;
        if i < 0 || i as usize >= self.coeffs.len() {
            Some(CyclotomicInt::zero(self.ring))
        } else {
            Some(self.coeffs[i as usize].clone())
        }
    }

    /// Nonzero (exponent, coefficient) pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CyclotomicInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.lead + i as i64, c))
    }

    /// Equality of every coefficient below both horizons.
    pub fn eq_within(&self, other: &Self) -> bool {
        let h = self.horizon.min(other.horizon);
        let lo = self.lead.min(other.lead);
        (lo..h).all(|e| self.coeff_at(e) == other.coeff_at(e))
    }

    /// Clips the window to a smaller horizon.
    pub fn truncate(&self, horizon: i64) -> Self {
        assert!(horizon <= self.horizon, "cannot grow a window");
        let mut s = self.clone();
        s.horizon = horizon;
        let keep = (horizon - s.lead).max(0) as usize;
        s.coeffs.truncate(keep);
        s.normalize();
        s
    }

    /// Re-embeds the coefficients into Z[zeta_order].
    pub fn embed_ring(&self, order: u32) -> Result<Self> {
        if order == self.ring {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(PuiseuxSeries {
            ring: order,
            lead: self.lead,
            horizon: self.horizon,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            ring: self.ring,
            lead: self.lead,
            horizon: self.horizon,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "ring mismatch (embed first)");
        let horizon = self.horizon.min(other.horizon);
        let terms = self
            .terms()
            .map(|(e, c)| (e, c.clone()))
            .chain(other.terms().map(|(e, c)| (e, c.clone())));
        Self::from_terms(self.ring, terms, horizon)
    }

    /// Exact product on the honest common window.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "ring mismatch (embed first)");
        // a zero window behaves as if its lead were its horizon
        let la = self.lead;
        let lb = other.lead;
        let horizon = (la + other.horizon).min(lb + self.horizon);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(self.ring, horizon);
        }
        let lead = la + lb;
        let len = (horizon - lead).max(0) as usize;
        let mut acc = vec![CyclotomicInt::zero(self.ring); len];
        // iterate the sparser operand's nonzero terms on the outside
        let (outer, inner) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (i, a) in outer.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in inner.coeffs.iter().take(len - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = i + j;
                acc[k] = &acc[k] + &(a * b);
            }
        }
        let mut s = PuiseuxSeries {
            ring: self.ring,
            lead,
            horizon,
            coeffs: acc,
        };
        s.normalize();
        s
    }

    /// Multiplicative inverse; requires a unit leading coefficient.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::NonUnitLeading);
        }
        let u0 = self.coeffs[0]
            .inverse_if_unit()
            .ok_or(Error::NonUnitLeading)?;
        let p = self.precision();
        // normalized tail r with self = c0 u^lead (1 + r)
        let tail: Vec<(usize, CyclotomicInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c * &u0))
            .collect();
        let mut s = vec![CyclotomicInt::zero(self.ring); p];
        s[0] = CyclotomicInt::one(self.ring);
        for m in 1..p {
            let mut acc = CyclotomicInt::zero(self.ring);
            for (k, r) in &tail {
                if *k > m {
                    break;
                }
                acc = &acc + &(r * &s[m - k]);
            }
            s[m] = -&acc;
        }
        let coeffs = s.into_iter().map(|c| &c * &u0).collect();
        let lead = -self.lead;
        let mut out = PuiseuxSeries {
            ring: self.ring,
            lead,
            horizon: lead + p as i64,
            coeffs,
        };
        out.normalize();
        Ok(out)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(self.ring, self.horizon - self.lead));
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc: Option<PuiseuxSeries> = None;
        let mut sq = base;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// Substitutes u -> u^d. All coefficients between the stretched grid
    /// points are known to vanish, so the horizon stretches too.
    pub fn stretch(&self, d: u64) -> Self {
        assert!(d >= 1);
        let d = d as i64;
        if self.coeffs.is_empty() {
            return Self::zero(self.ring, self.horizon.saturating_mul(d));
        }
        let lead = self.lead * d;
        let horizon = self.horizon * d;
        let mut coeffs = vec![CyclotomicInt::zero(self.ring); (horizon - lead) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * d as usize] = c.clone();
            }
        }
        PuiseuxSeries {
            ring: self.ring,
            lead,
            horizon,
            coeffs,
        }
    }

    /// The sign transform q -> -q: the coefficient of u^m picks up the
    /// 48th root of unity to the m-th power. The coefficient ring is
    /// upgraded to Z[zeta_48].
    pub fn sign_transform(&self) -> Result<Self> {
        let s = self.embed_ring(48)?;
        let coeffs = s
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.rotate(s.lead + i as i64))
            .collect();
        Ok(PuiseuxSeries { coeffs, ..s })
    }
}

/// The eta series u prod (1 - u^24n) through relative precision `prec`,
/// via its sparse pentagonal form: coefficient (-1)^k at u^((6k-1)^2)
/// over k in Z. The direct truncated product is the independent test
/// oracle for this closed form.
pub fn eta_series(prec: usize) -> PuiseuxSeries {
    assert!(prec >= 1);
    let horizon = 1 + prec as i64;
    let mut terms = Vec::new();
    let mut k: i64 = 0;
    loop {
        let mut hit = false;
        for kk in [k, -k] {
            let e = (6 * kk - 1) * (6 * kk - 1);
            if e < horizon {
                hit = true;
                let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                terms.push((e, CyclotomicInt::from_int(1, sign)));
            }
            if k == 0 {
                break;
            }
        }
        if !hit {
            break;
        }
        k += 1;
    }
    PuiseuxSeries::from_terms(1, terms, horizon)
}

/// Expansion of the quotient with exponent vector `x` through `prec`
/// u-powers beyond its lead. Coefficients are plain integers; the lead is
/// the weighted degree sum d * X_d (24 times the order at infinity).
pub fn quotient_series(x: &ExponentVector, prec: usize) -> Result<PuiseuxSeries> {
    if prec == 0 {
        return Err(Error::PrecisionTooSmall(0));
    }
    let mut acc = PuiseuxSeries::one(1, prec as i64);
    for (d, e) in x.iter() {
        let per_factor = prec / d as usize + 2;
        let factor = eta_series(per_factor).stretch(d);
        acc = acc.mul(&factor.pow(e)?);
    }
    let expected_lead = x.weighted_degree();
    debug_assert_eq!(acc.lead(), Some(expected_lead));
    Ok(acc.truncate(expected_lead + prec as i64))
}

/// A unit times a u-power: zeta_12^zeta12 * u^exp. The substitution
/// alphabet of the triple-product table (q^(1/2) is u^12 and so on; the
/// units in play are powers of i and omega, all inside zeta_12).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitMonomial {
    pub zeta12: i64,
    pub exp: i64,
}

impl UnitMonomial {
    pub const fn new(zeta12: i64, exp: i64) -> Self {
        UnitMonomial { zeta12, exp }
    }

    /// The n-th power as (zeta exponent, u exponent).
    fn pow(&self, n: i64) -> (i64, i64) {
        (self.zeta12 * n, self.exp * n)
    }
}

/// Both sides of the Jacobi triple product identity for x, y drawn from
/// the substitution alphabet, as exact series over Z[zeta_12] with
/// horizon `prec` (in u-units):
///
/// ```text
/// prod (1 - x^2n)(1 + x^(2n-1) y)(1 + x^(2n-1) y^-1) = sum x^(n^2) y^n
/// ```
///
/// Early factors may carry negative u-exponents (the identity still holds
/// as a Laurent-window statement); the window handles them exactly.
/// Returns (lhs, rhs, unit) where the unit relates lhs to rhs; the
/// identity demands unit 1 at shift 0, and anything else is an error.
pub fn triple_product_identity(
    x: UnitMonomial,
    y: UnitMonomial,
    prec: usize,
) -> Result<(PuiseuxSeries, PuiseuxSeries, CyclotomicInt)> {
    if x.exp <= 0 {
        return Err(Error::OutOfRange {
            name: "x exponent",
            value: x.exp,
        });
    }
    let horizon = prec as i64;
    // a few early factors can dip below u^0; keep working room for them
    let slack = 4 * (y.exp.abs() + x.exp) + 16;
    let work = horizon + slack;

    let mut lhs = PuiseuxSeries::one(12, work);
    let n_max = (work + y.exp.abs()) / (2 * x.exp) + 2;
    for n in 1..=n_max {
        let (kz, ke) = x.pow(2 * n);
        let f1 = PuiseuxSeries::from_terms(
            12,
            [
                (0, CyclotomicInt::one(12)),
                (ke, -&CyclotomicInt::root_of_unity(12, kz)),
            ],
            work,
        );
        let (oz, oe) = x.pow(2 * n - 1);
        let f2 = PuiseuxSeries::from_terms(
            12,
            [
                (0, CyclotomicInt::one(12)),
                (oe + y.exp, CyclotomicInt::root_of_unity(12, oz + y.zeta12)),
            ],
            work,
        );
        let f3 = PuiseuxSeries::from_terms(
            12,
            [
                (0, CyclotomicInt::one(12)),
                (oe - y.exp, CyclotomicInt::root_of_unity(12, oz - y.zeta12)),
            ],
            work,
        );
        lhs = lhs.mul(&f1).mul(&f2).mul(&f3);
    }
    let lhs = lhs.truncate(horizon.min(lhs.horizon()));

    // sum side: every n whose exponent can land below the horizon
    let mut bound = 2i64;
    while x.exp * bound * bound - y.exp.abs() * bound <= horizon {
        bound += 1;
    }
    let mut terms = Vec::new();
    for n in -bound..=bound {
        let e = x.exp * n * n + y.exp * n;
        let z = x.zeta12 * n * n + y.zeta12 * n;
        terms.push((e, CyclotomicInt::root_of_unity(12, z)));
    }
    let rhs = PuiseuxSeries::from_terms(12, terms, lhs.horizon());

    match unit_shift_match(&lhs, &rhs, 12) {
        Some((0, 0)) => Ok((lhs, rhs, CyclotomicInt::one(12))),
        Some((k, s)) => Err(Error::Inconsistency(format!(
            "triple product sides differ by zeta_12^{k} u^{s}"
        ))),
        None => Err(Error::NoMatchingUnit),
    }
}

/// Finds (k, shift) with `a = zeta_order^k * u^shift * b` on the common
/// window, scanning k in ascending order. `None` if no root of unity
/// works, or if exactly one side is zero.
pub fn unit_shift_match(a: &PuiseuxSeries, b: &PuiseuxSeries, order: u32) -> Option<(i64, i64)> {
    let (a, b) = (a.embed_ring(order).ok()?, b.embed_ring(order).ok()?);
    match (a.lead(), b.lead()) {
        (None, None) => return Some((0, 0)),
        (None, Some(_)) | (Some(_), None) => return None,
        _ => {}
    }
    let (la, lb) = (a.lead, b.lead);
    let shift = la - lb;
    let common = a.precision().min(b.precision());
    if common == 0 {
        return None;
    }
    'unit: for k in 0..order as i64 {
        let z = CyclotomicInt::root_of_unity(order, k);
        for i in 0..common as i64 {
            let ca = a.coeff_at(la + i)?;
            let cb = b.coeff_at(lb + i)?;
            if ca != &z * &cb {
                continue 'unit;
            }
        }
        return Some((k, shift));
    }
    None
}

/// One entry of the substitution table: the x and y monomials and the
/// 1-based index of the list member the product side expands to (up to a
/// root of unity and a u-shift, which the verification reports).
#[derive(Debug, Clone, Copy)]
pub struct ThetaSubstitution {
    pub x: UnitMonomial,
    pub y: UnitMonomial,
    pub member: usize,
}

/// The fourteen substitutions, one per list member. Units are encoded as
/// powers of zeta_12 (i = zeta_12^3, omega = zeta_12^4, -1 = zeta_12^6);
/// exponents in u-units (q^(1/2) = u^12).
pub fn theta_substitutions() -> [ThetaSubstitution; ZAGIER_COUNT] {
    const fn s(xz: i64, xe: i64, yz: i64, ye: i64, member: usize) -> ThetaSubstitution {
        ThetaSubstitution {
            x: UnitMonomial::new(xz, xe),
            y: UnitMonomial::new(yz, ye),
            member,
        }
    }
    [
        s(0, 12, 0, 12, 3),   // (q^1/2, q^1/2)
        s(0, 12, 4, 12, 8),   // (q^1/2, w q^1/2)
        s(3, 12, 3, 12, 6),   // (i q^1/2, i q^1/2)
        s(3, 12, 7, 12, 12),  // (i q^1/2, i w q^1/2)
        s(0, 24, 6, 48, 2),   // (q, -q^2)
        s(0, 24, 10, 48, 9),  // (q, -w q^2)
        s(6, 24, 6, 48, 5),   // (-q, -q^2)
        s(6, 24, 10, 48, 13), // (-q, -w q^2)
        s(0, 36, 0, 12, 10),  // (q^3/2, q^1/2)
        s(0, 36, 6, 12, 1),   // (q^3/2, -q^1/2)
        s(3, 36, 3, 12, 4),   // (i q^3/2, i q^1/2)
        s(3, 36, 9, 12, 14),  // (i q^3/2, -i q^1/2)
        s(0, 72, 6, 48, 7),   // (q^3, -q^2)
        s(6, 72, 6, 48, 11),  // (-q^3, -q^2)
    ]
}

/// Verification record for one substitution: the identity held exactly,
/// and the product side equals zeta_24^unit24 * u^shift times the
/// member's expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubstitutionReport {
    pub member: usize,
    pub unit24: i64,
    pub shift: i64,
}

/// Verifies every substitution at the given horizon (u-units), returning
/// the discovered unit and shift per member.
pub fn verify_theta_substitutions(prec: usize) -> Result<Vec<SubstitutionReport>> {
    let mut out = Vec::new();
    for sub in theta_substitutions() {
        let (lhs, _rhs, _unit) = triple_product_identity(sub.x, sub.y, prec)?;
        let member = &zagier_members()[sub.member - 1];
        let member_series = quotient_series(member, prec)?;
        let (unit24, shift) = unit_shift_match(&lhs, &member_series, 24).ok_or_else(|| {
            Error::Inconsistency(format!(
                "substitution for member {} does not match its expansion",
                sub.member
            ))
        })?;
        out.push(SubstitutionReport {
            member: sub.member,
            unit24,
            shift,
        });
    }
    Ok(out)
}

/// Theta support of a series with integer coefficients: the largest
/// t | 24 such that every nonzero exponent is t n^2, together with the
/// observed coefficients indexed by n >= 0. Fails loudly if a support
/// point is off every grid or fewer than `min_points` support points are
/// visible.
pub fn theta_support(
    series: &PuiseuxSeries,
    min_points: usize,
) -> Result<(u64, BTreeMap<u64, BigInt>)> {
    let terms: Vec<(i64, BigInt)> = series
        .terms()
        .map(|(e, c)| {
            let v = c
                .as_integer()
                .ok_or_else(|| Error::Inconsistency("non-integer coefficient".into()))?;
            Ok((e, v.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    if terms.len() < min_points {
        return Err(Error::PrecisionTooSmall(terms.len()));
    }
    'grid: for t in [24u64, 12, 8, 6, 4, 3, 2, 1] {
        let mut support = BTreeMap::new();
        for (e, c) in &terms {
            if *e < 0 || *e % t as i64 != 0 {
                continue 'grid;
            }
            match exact_sqrt((*e / t as i64) as u64) {
                Some(n) => {
                    support.insert(n, c.clone());
                }
                None => continue 'grid,
            }
        }
        return Ok((t, support));
    }
    let witness = terms
        .iter()
        .map(|&(e, _)| e)
        .find(|&e| e < 0 || exact_sqrt(e as u64).is_none())
        .unwrap_or(terms[0].0);
    Err(Error::SupportOffGrid(witness))
}

fn exact_sqrt(m: u64) -> Option<u64> {
    let r = (m as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&k| k * k == m)
}

/// The permutation of the fourteen list members induced by the sign
/// transform: member i maps to (j, k) with
/// sign_transform(expansion_i) = zeta_48^k * expansion_j. The mapping
/// must come out a well-defined involution; anything else is an error.
pub fn sign_transform_pairing(prec: usize) -> Result<Vec<(usize, usize, i64)>> {
    if prec < 600 {
        return Err(Error::PrecisionTooSmall(prec));
    }
    let members = zagier_members();
    let expansions: Vec<PuiseuxSeries> = members
        .iter()
        .map(|m| quotient_series(m, prec))
        .collect::<Result<Vec<_>>>()?;
    let mut pairing = Vec::new();
    for (i, s) in expansions.iter().enumerate() {
        let transformed = s.sign_transform()?;
        let mut found = None;
        for (j, target) in expansions.iter().enumerate() {
            if let Some((k, 0)) = unit_shift_match(&transformed, target, 48) {
                if found.is_some() {
                    return Err(Error::Inconsistency(format!(
                        "sign transform of member {} matches several members",
                        i + 1
                    )));
                }
                found = Some((j + 1, k));
            }
        }
        let (j, k) = found.ok_or(Error::NoMatchingUnit)?;
        pairing.push((i + 1, j, k));
    }
    for &(i, j, _) in &pairing {
        let (_, back, _) = pairing[j - 1];
        if back != i {
            return Err(Error::Inconsistency(format!(
                "pairing is not an involution at member {i}"
            )));
        }
    }
    Ok(pairing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::orders::order_map;

    fn ev(pairs: &[(u64, i64)]) -> ExponentVector {
        ExponentVector::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn int_coeff(s: &PuiseuxSeries, e: i64) -> i64 {
        use num_traits::ToPrimitive;
        s.coeff_at(e)
            .unwrap()
            .as_integer()
            .unwrap()
            .to_i64()
            .unwrap()
    }

    #[test]
    fn eta_first_terms() {
        let s = eta_series(200);
        assert_eq!(s.lead(), Some(1));
        let expected = [(1, 1), (25, -1), (49, -1), (121, 1), (169, 1)];
        for (e, c) in expected {
            assert_eq!(int_coeff(&s, e), c, "coefficient at u^{e}");
        }
        assert_eq!(int_coeff(&s, 2), 0);
        assert_eq!(int_coeff(&s, 24), 0);
    }

    #[test]
    fn eta_matches_truncated_product() {
        // independent oracle: multiply u * (1 - u^24)(1 - u^48)... directly
        let prec = 600usize;
        let horizon = 1 + prec as i64;
        let mut prod = PuiseuxSeries::monomial(1, CyclotomicInt::one(1), 1, horizon);
        let mut n = 1i64;
        while 24 * n < horizon {
            let f = PuiseuxSeries::from_terms(
                1,
                [
                    (0, CyclotomicInt::one(1)),
                    (24 * n, CyclotomicInt::from_int(1, -1)),
                ],
                horizon,
            );
            prod = prod.mul(&f);
            n += 1;
        }
        let closed = eta_series(prec);
        assert!(closed.eq_within(&prod));
    }

    #[test]
    fn quotient_series_triangular_oracle() {
        // e2^2/e1 = sum q^((2k+1)^2 / 8): exponents 3(2k+1)^2 in u-units,
        // every coefficient 1
        let s = quotient_series(&ev(&[(2, 2), (1, -1)]), 400).unwrap();
        assert_eq!(s.lead(), Some(3));
        for (e, c) in s.terms() {
            assert_eq!(e % 3, 0);
            let n = exact_sqrt((e / 3) as u64).expect("exponent must be 3 * square");
            assert_eq!(n % 2, 1, "square root must be odd at u^{e}");
            assert!(c.is_one());
        }
        let count = s.terms().count();
        let expected = (0i64..)
            .take_while(|k| 3 * (2 * k + 1) * (2 * k + 1) < s.horizon())
            .count();
        assert_eq!(count, expected);
    }

    #[test]
    fn quotient_series_constant_and_eta() {
        let one = quotient_series(&ExponentVector::constant(), 50).unwrap();
        assert_eq!(one.lead(), Some(0));
        assert_eq!(one.terms().count(), 1);

        let via_quotient = quotient_series(&ev(&[(1, 1)]), 300).unwrap();
        assert!(via_quotient.eq_within(&eta_series(300)));
    }

    #[test]
    fn inversion_round_trips() {
        for x in [
            ev(&[(1, 1)]),
            ev(&[(2, 2), (1, -1)]),
            ev(&[(1, -2), (2, 5), (4, -2)]),
        ] {
            let s = quotient_series(&x, 240).unwrap();
            let inv = s.inverse().unwrap();
            let prod = s.mul(&inv);
            assert_eq!(prod.lead(), Some(0));
            assert_eq!(prod.terms().count(), 1, "s * s^-1 must be 1 for {x}");
        }
    }

    #[test]
    fn negated_vector_inverts_series() {
        let x = ev(&[(1, -1), (2, 3), (4, -1)]);
        let neg = ExponentVector::from_pairs(x.iter().map(|(d, e)| (d, -e))).unwrap();
        let a = quotient_series(&x, 200).unwrap();
        let b = quotient_series(&neg, 200).unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.lead(), Some(0));
        assert_eq!(prod.terms().count(), 1);
    }

    #[test]
    fn lead_matches_order_at_infinity() {
        for member in zagier_members() {
            let s = quotient_series(member, 60).unwrap();
            let n = member.level();
            let orders = order_map(member, n).unwrap();
            let at_infinity = &orders[&n];
            assert_eq!(
                rational(s.lead().unwrap(), 24),
                at_infinity.clone(),
                "lead of {member}"
            );
        }
    }

    #[test]
    fn stretch_and_truncate_windows() {
        let s = eta_series(10); // window [1, 11)
        let t = s.stretch(3); // window [3, 33), entries on multiples of 3
        assert_eq!(t.lead(), Some(3));
        assert_eq!(t.horizon(), 33);
        assert_eq!(int_coeff(&t, 3), 1);
        assert_eq!(int_coeff(&t, 4), 0);
        let u = t.truncate(10);
        assert_eq!(u.horizon(), 10);
    }

    #[test]
    fn sign_transform_twice_rotates_by_zeta24() {
        let s = quotient_series(&ev(&[(1, 2), (2, -1)]), 120).unwrap();
        let twice = s.sign_transform().unwrap().sign_transform().unwrap();
        // applying the transform twice multiplies c_m by zeta_24^m
        let direct = {
            let e = s.embed_ring(48).unwrap();
            let coeffs = e
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.rotate(2 * (e.lead + i as i64)))
                .collect();
            PuiseuxSeries { coeffs, ..e }
        };
        assert!(twice.eq_within(&direct));
    }

    #[test]
    fn sign_transform_fixes_constants() {
        let one = PuiseuxSeries::one(1, 40);
        let t = one.sign_transform().unwrap();
        assert!(t.coeff_at(0).unwrap().is_one());
        assert_eq!(t.terms().count(), 1);
    }

    #[test]
    fn triple_product_simplest_cells() {
        // (q^3/2, -q^1/2): the product side is the eta expansion shifted
        // by u^-1 (the pentagonal substitution)
        let (lhs, rhs, unit) =
            triple_product_identity(UnitMonomial::new(0, 36), UnitMonomial::new(6, 12), 500)
                .unwrap();
        assert!(unit.is_one());
        assert!(lhs.eq_within(&rhs));
        let eta = quotient_series(&ev(&[(1, 1)]), 480).unwrap();
        let (k, s) = unit_shift_match(&lhs, &eta, 24).unwrap();
        assert_eq!((k, s), (0, -1));

        // (q, -q^2): lhs = -u^-24 times the expansion of e1^2/e2
        let (lhs, _, _) =
            triple_product_identity(UnitMonomial::new(0, 24), UnitMonomial::new(6, 48), 500)
                .unwrap();
        let m2 = quotient_series(&ev(&[(1, 2), (2, -1)]), 480).unwrap();
        let (k, s) = unit_shift_match(&lhs, &m2, 24).unwrap();
        assert_eq!((k, s), (12, -24)); // unit -1, shift u^-24
    }

    #[test]
    fn degenerate_sum_is_symmetric() {
        // with y = 1 the sum side is symmetric under n <-> -n: build it
        // directly and compare coefficients pairwise
        let x = UnitMonomial::new(0, 24);
        let mut terms = Vec::new();
        for n in -20i64..=20 {
            terms.push((x.exp * n * n, CyclotomicInt::one(12)));
        }
        let sym = PuiseuxSeries::from_terms(12, terms, 24 * 300);
        for n in 1..=15i64 {
            let e = 24 * n * n;
            use num_traits::ToPrimitive;
            let c = sym.coeff_at(e).unwrap();
            assert_eq!(c.as_integer().unwrap().to_i64().unwrap(), 2);
        }
    }

    #[test]
    fn theta_support_examples() {
        let eta = quotient_series(&ev(&[(1, 1)]), 1600).unwrap();
        let (t, support) = theta_support(&eta, 10).unwrap();
        assert_eq!(t, 1);
        for (&n, c) in &support {
            assert_eq!(crate::arith::gcd(n, 6), 1, "eta support at n = {n}");
            use num_traits::ToPrimitive;
            assert_eq!(c.to_i64().unwrap().abs(), 1);
        }

        let m3 = quotient_series(&ev(&[(1, -1), (2, 2)]), 1300).unwrap();
        let (t, support) = theta_support(&m3, 10).unwrap();
        assert_eq!(t, 3);
        assert!(support.keys().all(|&n| n % 2 == 1));

        let m2 = quotient_series(&ev(&[(1, 2), (2, -1)]), 1000).unwrap();
        let (t, _) = theta_support(&m2, 5).unwrap();
        assert_eq!(t, 24);
    }

    #[test]
    fn unit_match_detects_rotation() {
        let s = quotient_series(&ev(&[(1, 1)]), 100).unwrap();
        let rotated = {
            let e = s.embed_ring(24).unwrap();
            let coeffs = e.coeffs.iter().map(|c| c.rotate(5)).collect();
            PuiseuxSeries { coeffs, ..e }
        };
        assert_eq!(unit_shift_match(&rotated, &s, 24), Some((5, 0)));
        assert_eq!(unit_shift_match(&s, &s, 24), Some((0, 0)));
    }
}

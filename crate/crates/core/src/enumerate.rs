//! Exhaustive enumeration of holomorphic eta quotients of a prescribed
//! weight on a given level, by exact integer-point search.
//!
//! The feasible set {X : sym_matrix * X >= 0, sigma(X) = k2} is a simplex:
//! the nonnegativity cone is spanned by the columns of the inverse
//! symmetrized order matrix, and every column has positive coordinate sum,
//! so fixing sigma bounds the region. The searcher
//!
//! 1. scales each inverse column to sigma = k2 (the simplex vertices),
//! 2. takes per-divisor floor/ceil bounds from the vertex coordinates,
//! 3. runs a depth-first assignment over divisors, most-constrained
//!    first, with exact interval pruning against every cusp row and the
//!    sigma constraint,
//! 4. rechecks full assignments exactly.
//!
//! All arithmetic is integer (the matrix rows are integers, the vertex
//! fractions are handled by cross multiplication); nothing is rounded.
//! A per-divisor cap (default 64) aborts loudly if the vertex box is
//! wider than expected; it never silently truncates.
//!
//! Subtrees at the first branching divisor run in parallel; results are
//! merged and canonically sorted, so the output is deterministic
//! regardless of thread count.

use rayon::prelude::*;
use std::collections::BTreeMap;


use crate::error::{Error, Result};
use crate::etaq::{zagier_members, ExponentVector};
use crate::orders::{sym_order_matrix, sym_order_matrix_inverse};

/// An enumeration instance: level, twice the weight, and the per-divisor
/// safety cap on |X_d|.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationProblem {
    pub level: u64,
    pub weight2: i64,
    pub cap: i64,
}

impl EnumerationProblem {
    pub fn new(level: u64, weight2: i64) -> Self {
        EnumerationProblem {
            level,
            weight2,
            cap: 64,
        }
    }

    /// All X with sym_matrix * X >= 0 and sigma(X) = weight2, i.e. the
    /// holomorphic quotients of weight weight2/2 with level dividing
    /// `level`, canonically sorted.
    pub fn solve(&self) -> Result<Vec<ExponentVector>> {
        if self.level == 0 {
            return Err(Error::ZeroArgument);
        }
        if self.weight2 < 0 {
            return Err(Error::OutOfRange {
                name: "weight2",
                value: self.weight2,
            });
        }
        let sym = sym_order_matrix(self.level)?;
        let inv = sym_order_matrix_inverse(self.level)?;
        let divs = sym.divisors().to_vec();
        let m = divs.len();

        // simplex vertices: column t of the inverse, scaled so that the
        // coordinate sum is weight2; per-divisor bounds by cross-multiplied
        // floor/ceil of weight2 * inv(d, t) / colsum(t)
        let mut col_sums = vec![0i128; m];
        for (ti, &t) in divs.iter().enumerate() {
            let mut s = 0i128;
            for &d in &divs {
                s += inv.numerator(d, t)?;
            }
            debug_assert!(s > 0, "inverse column sums must be positive");
            col_sums[ti] = s;
        }
        let mut lo = vec![i64::MAX; m];
        let mut hi = vec![i64::MIN; m];
        for (di, &d) in divs.iter().enumerate() {
            for (ti, &t) in divs.iter().enumerate() {
                let num = self.weight2 as i128 * inv.numerator(d, t)?;
                let den = col_sums[ti];
                let fl = num.div_euclid(den);
                let ce = -(-num).div_euclid(den);
                lo[di] = lo[di].min(i64::try_from(ce).expect("bound fits"));
                hi[di] = hi[di].max(i64::try_from(fl).expect("bound fits"));
            }
            if lo[di] < -self.cap || hi[di] > self.cap {
                return Err(Error::CapExceeded {
                    divisor: d,
                    bound: lo[di].abs().max(hi[di].abs()),
                });
            }
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(Vec::new());
        }

        // most-constrained first: descending maximum |inverse column entry|
        let mut order: Vec<usize> = (0..m).collect();
        let col_norm = |di: usize| -> i128 {
            divs.iter()
                .map(|&t| inv.numerator(divs[di], t).unwrap().abs())
                .max()
                .unwrap_or(0)
        };
        order.sort_by_key(|&di| (std::cmp::Reverse(col_norm(di)), std::cmp::Reverse(divs[di])));

        let rows: Vec<Vec<i64>> = divs
            .iter()
            .map(|&t| {
                let full = sym.integer_row(t).expect("divisor row");
                order.iter().map(|&di| full[di]).collect()
            })
            .collect();
        let spec = SearchSpec {
            rows,
            row_hi: None,
            lo: order.iter().map(|&di| lo[di]).collect(),
            hi: order.iter().map(|&di| hi[di]).collect(),
            sigma_lo: self.weight2,
            sigma_hi: self.weight2,
        };
        let solutions = spec.run();

        let mut out: Vec<ExponentVector> = solutions
            .into_iter()
            .map(|xs| {
                let pairs = xs
                    .iter()
                    .enumerate()
                    .map(|(pos, &x)| (divs[order[pos]], x));
                ExponentVector::from_pairs(pairs).expect("assignment positions are distinct")
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Convenience wrapper with the default cap.
pub fn enumerate_holomorphic(level: u64, weight2: i64) -> Result<Vec<ExponentVector>> {
    EnumerationProblem::new(level, weight2).solve()
}

/// Bounded, exact depth-first search over integer boxes with positive row
/// coefficients: find all x in prod [lo_i, hi_i] with
/// row * x in [0, row_hi] for every row and sigma(x) in [sigma_lo, sigma_hi].
struct SearchSpec {
    /// rows x positions, positions in assignment order; entries positive.
    rows: Vec<Vec<i64>>,
    /// per-row upper bounds (None: unconstrained above).
    row_hi: Option<Vec<i64>>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    sigma_lo: i64,
    sigma_hi: i64,
}

struct SearchState<'a> {
    spec: &'a SearchSpec,
    tail_lo: Vec<Vec<i64>>,
    tail_hi: Vec<Vec<i64>>,
    sig_tail_lo: Vec<i64>,
    sig_tail_hi: Vec<i64>,
}

impl SearchSpec {
    fn run(&self) -> Vec<Vec<i64>> {
        let m = self.lo.len();
        if m == 0 {
            return if self.sigma_lo <= 0 && 0 <= self.sigma_hi {
                vec![vec![]]
            } else {
                vec![]
            };
        }
        let nrows = self.rows.len();
        // suffix interval sums per position
        let mut tail_lo = vec![vec![0i64; nrows]; m + 1];
        let mut tail_hi = vec![vec![0i64; nrows]; m + 1];
        let mut sig_tail_lo = vec![0i64; m + 1];
        let mut sig_tail_hi = vec![0i64; m + 1];
        for pos in (0..m).rev() {
            for r in 0..nrows {
                let c = self.rows[r][pos];
                debug_assert!(c > 0);
                tail_lo[pos][r] = tail_lo[pos + 1][r] + c * self.lo[pos];
                tail_hi[pos][r] = tail_hi[pos + 1][r] + c * self.hi[pos];
            }
            sig_tail_lo[pos] = sig_tail_lo[pos + 1] + self.lo[pos];
            sig_tail_hi[pos] = sig_tail_hi[pos + 1] + self.hi[pos];
        }
        let state = SearchState {
            spec: self,
            tail_lo,
            tail_hi,
            sig_tail_lo,
            sig_tail_hi,
        };

        let first = state.value_range(0, &vec![0i64; nrows], 0);
        let branches: Vec<i64> = match first {
            Some((a, b)) => (a..=b).collect(),
            None => Vec::new(),
        };
        let run_branch = |&x: &i64| -> Vec<Vec<i64>> {
            let mut partial = vec![0i64; nrows];
            for r in 0..nrows {
                partial[r] += self.rows[r][0] * x;
            }
            let mut assignment = vec![x];
            let mut found = Vec::new();
            state.descend(1, x, &mut partial, &mut assignment, &mut found);
            found
        };
        let mut results: Vec<Vec<i64>> = if branches.len() > 1 && m > 4 {
            branches.par_iter().map(run_branch).reduce(Vec::new, |mut a, b| {
                a.extend(b);
                a
            })
        } else {
            branches.iter().flat_map(|x| run_branch(x)).collect()
        };
        results.sort();
        results
    }
}

impl SearchState<'_> {
    /// Exact value interval for the coordinate at `pos`, given the partial
    /// row sums and partial sigma; `None` if empty.
    fn value_range(&self, pos: usize, partial: &[i64], sigma: i64) -> Option<(i64, i64)> {
        let spec = self.spec;
        let mut a = spec.lo[pos];
        let mut b = spec.hi[pos];
        // sigma window
        a = a.max(spec.sigma_lo - sigma - self.sig_tail_hi[pos + 1]);
        b = b.min(spec.sigma_hi - sigma - self.sig_tail_lo[pos + 1]);
        // row windows: reachability of >= 0 (and <= row_hi) in the best
        // case of the remaining tail
        for (r, rp) in partial.iter().enumerate() {
            let c = spec.rows[r][pos];
            let slack = -rp - self.tail_hi[pos + 1][r];
            a = a.max(div_ceil(slack, c));
            if let Some(row_hi) = &spec.row_hi {
                let room = row_hi[r] - rp - self.tail_lo[pos + 1][r];
                b = b.min(div_floor(room, c));
            }
            if a > b {
                return None;
            }
        }
        (a <= b).then_some((a, b))
    }

    fn descend(
        &self,
        pos: usize,
        sigma: i64,
        partial: &mut Vec<i64>,
        assignment: &mut Vec<i64>,
        found: &mut Vec<Vec<i64>>,
    ) {
        let spec = self.spec;
        if pos == spec.lo.len() {
            debug_assert!(partial.iter().all(|&v| v >= 0));
            debug_assert!(sigma >= spec.sigma_lo && sigma <= spec.sigma_hi);
            found.push(assignment.clone());
            return;
        }
        let Some((a, b)) = self.value_range(pos, partial, sigma) else {
            return;
        };
        for x in a..=b {
            for (r, rp) in partial.iter_mut().enumerate() {
                *rp += spec.rows[r][pos] * x;
            }
            assignment.push(x);
            self.descend(pos + 1, sigma + x, partial, assignment, found);
            assignment.pop();
            for (r, rp) in partial.iter_mut().enumerate() {
                *rp -= spec.rows[r][pos] * x;
            }
        }
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// A classified enumeration result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedQuotient {
    pub exponents: ExponentVector,
    pub level: u64,
    pub weight2: i64,
    pub primitive: bool,
    /// `Some((index, nu))` when the quotient is list member `index`
    /// (1-based) rescaled by nu. Always present for weight-1/2 results;
    /// a missing match there is a completeness violation.
    pub zagier: Option<(usize, u64)>,
}

/// Classifies enumeration output: primitivity by support gcd, and for
/// weight 1/2 a match against the fourteen list members. Violations are
/// data (a weight-1/2 quotient with no match), not errors.
pub fn classify(results: &[ExponentVector], weight2: i64) -> Vec<ClassifiedQuotient> {
    let members = zagier_members();
    results
        .iter()
        .map(|x| {
            let (primitive, zagier) = match x.primitive_part() {
                Ok((p, nu)) => {
                    let idx = members.iter().position(|m| *m == p).map(|i| (i + 1, nu));
                    (nu == 1, idx)
                }
                Err(_) => (false, None), // constant quotient
            };
            ClassifiedQuotient {
                exponents: x.clone(),
                level: x.level(),
                weight2,
                primitive,
                zagier,
            }
        })
        .collect()
}

/// Report of a completeness run at weight 1/2.
#[derive(Debug, Clone)]
pub struct ZagierReport {
    pub level: u64,
    pub quotients: Vec<ClassifiedQuotient>,
    pub total: usize,
    pub primitive_count: usize,
    /// Weight-1/2 quotients that match no list member: must be empty.
    pub violations: Vec<ExponentVector>,
}

/// Enumerates every holomorphic weight-1/2 quotient with level dividing
/// `level` and checks each against the fourteen list members.
pub fn verify_zagier(level: u64) -> Result<ZagierReport> {
    let results = enumerate_holomorphic(level, 1)?;
    let quotients = classify(&results, 1);
    let total = quotients.len();
    let primitive_count = quotients.iter().filter(|c| c.primitive).count();
    let violations = quotients
        .iter()
        .filter(|c| c.zagier.is_none())
        .map(|c| c.exponents.clone())
        .collect();
    Ok(ZagierReport {
        level,
        quotients,
        total,
        primitive_count,
        violations,
    })
}

fn subtract(x: &ExponentVector, y: &ExponentVector) -> ExponentVector {
    let mut pairs: BTreeMap<u64, i64> = x.iter().collect();
    for (d, e) in y.iter() {
        *pairs.entry(d).or_insert(0) -= e;
    }
    pairs.retain(|_, e| *e != 0);
    ExponentVector::from_pairs(pairs).expect("no duplicates possible")
}

/// All splittings X = Y + (X - Y) into two nonconstant holomorphic
/// quotients on the given level, up to swapping the parts. Requires X
/// holomorphic with level dividing `level`.
pub fn factorizations(
    x: &ExponentVector,
    level: u64,
) -> Result<Vec<(ExponentVector, ExponentVector)>> {
    let found = factorization_search(x, level, None)?;
    Ok(found)
}

/// True iff the quotient admits no factorization at its own level.
/// Requires a nonconstant holomorphic input.
pub fn is_quasi_irreducible(x: &ExponentVector) -> Result<bool> {
    if x.is_constant() {
        return Err(Error::EmptySupport);
    }
    let found = factorization_search(x, x.level(), Some(1))?;
    Ok(found.is_empty())
}

/// Simple = primitive and quasi-irreducible.
pub fn is_simple(x: &ExponentVector) -> Result<bool> {
    Ok(x.is_primitive()? && is_quasi_irreducible(x)?)
}

fn factorization_search(
    x: &ExponentVector,
    level: u64,
    stop_after: Option<usize>,
) -> Result<Vec<(ExponentVector, ExponentVector)>> {
    if !crate::orders::is_holomorphic(x, level)? {
        return Err(Error::NotHolomorphic(level));
    }
    let sym = sym_order_matrix(level)?;
    let inv = sym_order_matrix_inverse(level)?;
    let divs = sym.divisors().to_vec();
    let m = divs.len();
    let sigma_x = x.weight2();
    if sigma_x < 2 {
        // a factor would need weight >= 1/2 on both sides
        return Ok(Vec::new());
    }

    // row budgets: 0 <= sym * Y <= sym * X entrywise
    let budget: Vec<i64> = sym
        .apply(x)?
        .into_iter()
        .map(|(_, v)| {
            let i = v.to_integer();
            i64::try_from(&i).expect("budget fits")
        })
        .collect();

    // coordinate bounds: Y = inv * y with y in the budget box
    let mut lo = vec![0i64; m];
    let mut hi = vec![0i64; m];
    for (di, &d) in divs.iter().enumerate() {
        let mut lo_num: i128 = 0;
        let mut hi_num: i128 = 0;
        for (ti, &t) in divs.iter().enumerate() {
            let w = inv.numerator(d, t)?;
            let b = budget[ti] as i128;
            if w >= 0 {
                hi_num += w * b;
            } else {
                lo_num += w * b;
            }
        }
        let den = i128::try_from(inv.denominator()).expect("fits");
        lo[di] = i64::try_from(lo_num.div_euclid(den)).expect("fits");
        hi[di] = i64::try_from(hi_num.div_euclid(den)).expect("fits");
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&di| std::cmp::Reverse(hi[di] - lo[di]));
    order.reverse(); // narrowest interval first

    let rows: Vec<Vec<i64>> = divs
        .iter()
        .map(|&t| {
            let full = sym.integer_row(t).expect("divisor row");
            order.iter().map(|&di| full[di]).collect()
        })
        .collect();
    let spec = SearchSpec {
        rows,
        row_hi: Some(budget),
        lo: order.iter().map(|&di| lo[di]).collect(),
        hi: order.iter().map(|&di| hi[di]).collect(),
        sigma_lo: 1,
        sigma_hi: sigma_x - 1,
    };
    let solutions = spec.run();

    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for xs in solutions {
        let y = ExponentVector::from_pairs(
            xs.iter().enumerate().map(|(pos, &v)| (divs[order[pos]], v)),
        )
        .expect("distinct positions");
        let z = subtract(x, &y);
        let pair = if y <= z { (y, z) } else { (z, y) };
        if seen.insert(pair.clone()) {
            out.push(pair);
            if stop_after.is_some_and(|k| out.len() >= k) {
                break;
            }
        }
    }
    Ok(out)
}

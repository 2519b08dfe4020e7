//! Smith normal form over `Q[q, q^-1]` and over the integers, and the
//! elementary-divisor comparison harness.
//!
//! The Laurent ring's units are `c q^k`, so the matrix is first scaled by a
//! global power of `q` to make every entry a polynomial, reduction then
//! runs entirely inside `Q[q]` (a Euclidean domain), and divisors are
//! normalized to canonical associates (monic, nonzero constant term) at the
//! end. Pivot rows are rescaled to monic at each step to keep coefficients
//! small; rescaling by a nonzero rational is a unit row operation and does
//! not change divisor classes.
//!
//! The comparison harness pits the divisor chain of a graded Cartan matrix
//! against the chains of the diagonal weight matrices. Its outcome is
//! reported, never asserted: a difference is a finding, not a failure. The
//! only hard assertion is internal consistency, i.e. the product of the
//! divisors must match the determinant up to a unit in every run.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::fock::{self, GradedCartan};
use crate::partitions::{
    enumerate_multipartitions, enumerate_p_class_regular, enumerate_p_cores,
};
use crate::qpoly::{LaurentPoly, ProductForm};
use crate::weights::{weight_e, weight_g, weight_h};
use crate::{Error, Result};

/// An ascending chain of elementary divisors in canonical associate form;
/// a rank-deficient input leaves explicit zeros at the end of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorChain {
    pub divisors: Vec<LaurentPoly>,
}

impl DivisorChain {
    pub fn is_full_rank(&self) -> bool {
        self.divisors.iter().all(|d| !d.is_zero())
    }

    /// Index and values of the first position where two chains differ.
    pub fn first_difference(&self, other: &DivisorChain) -> Option<(usize, String, String)> {
        let len = self.divisors.len().max(other.divisors.len());
        for i in 0..len {
            let a = self.divisors.get(i);
            let b = other.divisors.get(i);
            if a != b {
                let show = |x: Option<&LaurentPoly>| {
                    x.map_or("<absent>".to_string(), |v| v.to_string())
                };
                return Some((i, show(a), show(b)));
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.divisors
                .iter()
                .map(|d| Value::String(d.to_string()))
                .collect(),
        )
    }
}

/// Smith normal form of a matrix over `Q[q, q^-1]`.
pub fn snf(m: &[Vec<LaurentPoly>]) -> Result<DivisorChain> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for row in m {
        if row.len() != cols {
            return Err(Error::NotSquare { rows, cols: row.len() });
        }
    }
    if rows == 0 || cols == 0 {
        return Ok(DivisorChain { divisors: Vec::new() });
    }
    // scale by a global power of q so every entry is a polynomial
    let shift = m
        .iter()
        .flatten()
        .filter_map(LaurentPoly::min_exp)
        .min()
        .unwrap_or(0)
        .min(0);
    let mut work: Vec<Vec<LaurentPoly>> = m
        .iter()
        .map(|row| row.iter().map(|e| e.shift(-shift)).collect())
        .collect();

    let limit = rows.min(cols);
    let mut divisors: Vec<LaurentPoly> = Vec::with_capacity(limit);
    for t in 0..limit {
        loop {
            // nonzero entry of least degree in the trailing submatrix
            let mut pivot: Option<(usize, usize, i64)> = None;
            for (i, row) in work.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if e.is_zero() {
                        continue;
                    }
                    let deg = e.max_exp().unwrap();
                    if pivot.is_none_or(|(_, _, best)| deg < best) {
                        pivot = Some((i, j, deg));
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else {
                // the whole submatrix is zero
                break;
            };
            work.swap(t, pi);
            for row in work.iter_mut() {
                row.swap(t, pj);
            }
            // make the pivot monic
            let lead = work[t][t].coeff(work[t][t].max_exp().unwrap());
            let inv = lead.recip();
            for j in t..cols {
                work[t][j] = work[t][j].scale(&inv);
            }
            // clear the pivot column
            let mut dirty = false;
            for i in t + 1..rows {
                if work[i][t].is_zero() {
                    continue;
                }
                let (quot, rem) = work[i][t].divmod(&work[t][t])?;
                for j in t..cols {
                    let delta = quot.mul(&work[t][j]);
                    work[i][j] = work[i][j].sub(&delta);
                }
                debug_assert_eq!(work[i][t], rem);
                if !work[i][t].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // clear the pivot row
            for j in t + 1..cols {
                if work[t][j].is_zero() {
                    continue;
                }
                let (quot, _) = work[t][j].divmod(&work[t][t])?;
                for i in t..rows {
                    let delta = quot.mul(&work[i][t]);
                    work[i][j] = work[i][j].sub(&delta);
                }
                if !work[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the remaining submatrix
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !work[i][j].divisible_by(&work[t][t])? {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = offender {
                for j in t..cols {
                    let extra = work[i][j].clone();
                    work[t][j] = work[t][j].add(&extra);
                }
                continue;
            }
            break;
        }
        divisors.push(work[t][t].canonical_associate());
    }

    // chain condition, by construction
    for pair in divisors.windows(2) {
        if pair[0].is_zero() {
            assert!(pair[1].is_zero(), "zero divisor precedes a nonzero one");
        } else {
            assert!(
                pair[1].divisible_by(&pair[0]).expect("nonzero"),
                "divisor chain violated: {} does not divide {}",
                pair[0],
                pair[1]
            );
        }
    }
    // the product of the divisors matches the determinant up to a unit
    if rows == cols {
        let product = divisors
            .iter()
            .fold(LaurentPoly::one(), |acc, d| acc.mul(d))
            .canonical_associate();
        let det = laurent_det(m).canonical_associate();
        assert_eq!(product, det, "product of SNF divisors differs from the determinant");
    }
    Ok(DivisorChain { divisors })
}

/// Determinant over `Q[q, q^-1]` by fraction-free elimination on the
/// polynomial representative.
fn laurent_det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let size = m.len();
    if size == 0 {
        return LaurentPoly::one();
    }
    let shift = m
        .iter()
        .flatten()
        .filter_map(LaurentPoly::min_exp)
        .min()
        .unwrap_or(0)
        .min(0);
    let mut work: Vec<Vec<LaurentPoly>> = m
        .iter()
        .map(|row| row.iter().map(|e| e.shift(-shift)).collect())
        .collect();
    let mut previous = LaurentPoly::one();
    let mut negate = false;
    for k in 0..size {
        let pivot_row = (k..size).find(|&r| !work[r][k].is_zero());
        let Some(pivot_row) = pivot_row else {
            return LaurentPoly::zero();
        };
        if pivot_row != k {
            work.swap(k, pivot_row);
            negate = !negate;
        }
        if k == size - 1 {
            break;
        }
        let pivot = work[k][k].clone();
        for i in k + 1..size {
            for j in k + 1..size {
                let numerator = pivot.mul(&work[i][j]).sub(&work[i][k].mul(&work[k][j]));
                let (quot, rem) = numerator.divmod(&previous).expect("nonzero previous pivot");
                assert!(rem.is_zero(), "inexact division in fraction-free elimination");
                work[i][j] = quot;
            }
            work[i][k] = LaurentPoly::zero();
        }
        previous = pivot;
    }
    let det = work[size - 1][size - 1].clone();
    if negate {
        det.scale(&BigRational::from(BigInt::from(-1)))
    } else {
        det
    }
}

/// Divisor chain of the diagonal matrix with the given product-form
/// entries, by iterated gcd/lcm refinement (no full SNF run needed).
pub fn divisors_of_diagonal(entries: &[ProductForm]) -> Result<DivisorChain> {
    let polys: Vec<LaurentPoly> = entries
        .iter()
        .map(|pf| LaurentPoly::from_qpoly(&pf.expand()))
        .collect();
    diagonal_chain(polys)
}

fn diagonal_chain(mut d: Vec<LaurentPoly>) -> Result<DivisorChain> {
    for e in d.iter_mut() {
        *e = e.canonical_associate();
    }
    loop {
        let mut changed = false;
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                if d[i].is_zero() && d[j].is_zero() {
                    continue;
                }
                let g = LaurentPoly::gcd(&d[i], &d[j])?;
                if g != d[i] {
                    let l = if d[i].is_zero() || d[j].is_zero() {
                        LaurentPoly::zero()
                    } else {
                        LaurentPoly::lcm(&d[i], &d[j])?
                    };
                    d[i] = g;
                    d[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(DivisorChain { divisors: d })
}

// ---------------------------------------------------------------------------
// Integer Smith normal form (the q = 1 path)
// ---------------------------------------------------------------------------

/// Smith normal form over the integers; divisors are non-negative and form
/// a chain, zero-padded when rank deficient.
pub fn integer_snf(m: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for row in m {
        if row.len() != cols {
            return Err(Error::NotSquare { rows, cols: row.len() });
        }
    }
    let mut work: Vec<Vec<BigInt>> = m.to_vec();
    let limit = rows.min(cols);
    let mut divisors = Vec::with_capacity(limit);
    for t in 0..limit {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if work[i][j].is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj): (usize, usize)| {
                        work[i][j].magnitude() < work[pi][pj].magnitude()
                    }) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            work.swap(t, pi);
            for row in work.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if work[i][t].is_zero() {
                    continue;
                }
                let quot = div_nearest(&work[i][t], &work[t][t]);
                for j in t..cols {
                    let delta = &quot * &work[t][j];
                    work[i][j] -= delta;
                }
                if !work[i][t].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                if work[t][j].is_zero() {
                    continue;
                }
                let quot = div_nearest(&work[t][j], &work[t][t]);
                for i in t..rows {
                    let delta = &quot * &work[i][t];
                    work[i][j] -= delta;
                }
                if !work[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !work[i][j].is_multiple_of(&work[t][t]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = offender {
                for j in t..cols {
                    let extra = work[i][j].clone();
                    work[t][j] += extra;
                }
                continue;
            }
            break;
        }
        divisors.push(work[t][t].abs());
    }
    for pair in divisors.windows(2) {
        assert!(
            pair[0].is_zero() && pair[1].is_zero()
                || !pair[0].is_zero() && pair[1].is_multiple_of(&pair[0]),
            "integer divisor chain violated"
        );
    }
    Ok(divisors)
}

/// Rounded division keeping the remainder small in magnitude.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if r.magnitude() * 2u32 > *b.magnitude() {
        if r.is_negative() == b.is_negative() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Divisor chain of an integer diagonal matrix by gcd/lcm refinement.
pub fn integer_diagonal_divisors(entries: &[BigInt]) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = entries.iter().map(|x| x.abs()).collect();
    loop {
        let mut changed = false;
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                if d[i].is_zero() && d[j].is_zero() {
                    continue;
                }
                let g = d[i].gcd(&d[j]);
                if g != d[i] {
                    let l = if d[i].is_zero() || d[j].is_zero() {
                        BigInt::zero()
                    } else {
                        &d[i] / &g * &d[j]
                    };
                    d[i] = g;
                    d[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

// ---------------------------------------------------------------------------
// Conjecture harness
// ---------------------------------------------------------------------------

/// One chain-against-chain comparison; a difference is data, not an error.
#[derive(Clone, Debug)]
pub struct ChainComparison {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub first_difference: Option<(usize, String, String)>,
}

impl ChainComparison {
    fn of(lhs: &str, a: &DivisorChain, rhs: &str, b: &DivisorChain) -> Self {
        let first_difference = a.first_difference(b);
        ChainComparison {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            equal: first_difference.is_none(),
            first_difference,
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.first_difference {
            None => json!({ "lhs": self.lhs, "rhs": self.rhs, "equal": true }),
            Some((i, a, b)) => json!({
                "lhs": self.lhs,
                "rhs": self.rhs,
                "equal": false,
                "first_difference": { "index": i, "lhs": a, "rhs": b },
            }),
        }
    }
}

/// Verdict of the elementary-divisor comparison for one `(p, n)` or one
/// block. The harness completing with internally consistent SNF runs is
/// what a caller may assert; `all_equal` is reported data.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub p: u32,
    pub n: u32,
    pub blockwise: bool,
    pub comparisons: Vec<ChainComparison>,
}

impl ConjectureReport {
    pub fn all_equal(&self) -> bool {
        self.comparisons.iter().all(|c| c.equal)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "n": self.n,
            "blockwise": self.blockwise,
            "all_equal": self.all_equal(),
            "comparisons": self.comparisons.iter().map(ChainComparison::to_json).collect::<Vec<_>>(),
        })
    }
}

fn require_prime(p: u32) -> Result<()> {
    let is_prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if is_prime {
        Ok(())
    } else {
        Err(Error::NonPrimeModulus(p))
    }
}

fn cartan_matrix(n: u32, p: u32, cache_dir: Option<&Path>) -> Result<GradedCartan> {
    match cache_dir {
        Some(dir) => fock::cartan_cached(n, p, dir),
        None => fock::cartan(n, p),
    }
}

fn to_laurent(c: &GradedCartan) -> Vec<Vec<LaurentPoly>> {
    c.entries()
        .iter()
        .map(|row| row.iter().map(LaurentPoly::from_qpoly).collect())
        .collect()
}

/// Compares the divisor chain of `C_n(q)` with the chains of the diagonal
/// matrices with entries `w_E` and `w_G` over the class-regular partitions
/// of `n`. The hypothesis requires `p` prime.
pub fn check_conjecture(n: u32, p: u32, cache_dir: Option<&Path>) -> Result<ConjectureReport> {
    require_prime(p)?;
    let cartan = cartan_matrix(n, p, cache_dir)?;
    let chain_c = snf(&to_laurent(&cartan))?;
    let class_regular = enumerate_p_class_regular(n, p)?;
    let diag_e = divisors_of_diagonal(
        &class_regular.iter().map(|lam| weight_e(lam, p)).collect::<Vec<_>>(),
    )?;
    let diag_g = divisors_of_diagonal(
        &class_regular
            .iter()
            .map(|lam| weight_g(lam, p))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let comparisons = vec![
        ChainComparison::of("snf(C_n(q))", &chain_c, "diag(w_E)", &diag_e),
        ChainComparison::of("snf(C_n(q))", &chain_c, "diag(w_G)", &diag_g),
        ChainComparison::of("diag(w_E)", &diag_e, "diag(w_G)", &diag_g),
    ];
    Ok(ConjectureReport { p, n, blockwise: false, comparisons })
}

/// Blockwise comparison at one weight `d`: each block of `C_n(q)` of
/// weight `d` against the diagonal matrix with entries `w_H` over the
/// `(p-1)`-multipartitions of `d`.
pub fn check_conjecture_block(
    d: u32,
    p: u32,
    n: u32,
    cache_dir: Option<&Path>,
) -> Result<ConjectureReport> {
    require_prime(p)?;
    let cartan = cartan_matrix(n, p, cache_dir)?;
    let diag_h = divisors_of_diagonal(
        &enumerate_multipartitions(d, p - 1)
            .iter()
            .map(|mu| weight_h(&mu.last().cloned().unwrap_or_default(), p))
            .collect::<Vec<_>>(),
    )?;
    let mut comparisons = Vec::new();
    for (index, block) in fock::cartan_blocks(&cartan) {
        if index.weight != d {
            continue;
        }
        let chain = snf(&to_laurent(&block))?;
        comparisons.push(ChainComparison::of(
            &format!("snf(block core={} d={d})", index.core),
            &chain,
            "diag(w_H)",
            &diag_h,
        ));
    }
    if comparisons.is_empty() {
        return Err(Error::UnknownBlock {
            n,
            core: format!("<any of weight {d}>"),
            weight: d,
        });
    }
    Ok(ConjectureReport { p, n, blockwise: true, comparisons })
}

/// Blockwise comparisons over every weight appearing in `C_n(q)`.
pub fn check_conjecture_blockwise(
    n: u32,
    p: u32,
    cache_dir: Option<&Path>,
) -> Result<ConjectureReport> {
    require_prime(p)?;
    let cartan = cartan_matrix(n, p, cache_dir)?;
    let mut diag_cache: BTreeMap<u32, DivisorChain> = BTreeMap::new();
    let mut comparisons = Vec::new();
    for (index, block) in fock::cartan_blocks(&cartan) {
        let d = index.weight;
        if let std::collections::btree_map::Entry::Vacant(e) = diag_cache.entry(d) {
            let chain = divisors_of_diagonal(
                &enumerate_multipartitions(d, p - 1)
                    .iter()
                    .map(|mu| weight_h(&mu.last().cloned().unwrap_or_default(), p))
                    .collect::<Vec<_>>(),
            )?;
            e.insert(chain);
        }
        let chain = snf(&to_laurent(&block))?;
        comparisons.push(ChainComparison::of(
            &format!("snf(block core={} d={d})", index.core),
            &chain,
            &format!("diag(w_H, d={d})"),
            &diag_cache[&d],
        ));
        // block labels must come from the matching core set
        let cores = enumerate_p_cores(n - p * d, p)?;
        assert!(cores.contains(&index.core));
    }
    Ok(ConjectureReport { p, n, blockwise: true, comparisons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::q_integer;
    use num_traits::One;
    use proptest::prelude::*;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e, c) in pairs {
            p.add_to_coeff(*e, &BigRational::from(BigInt::from(*c)));
        }
        p
    }

    fn one_q2() -> LaurentPoly {
        lp(&[(0, 1), (2, 1)])
    }

    fn one_q4() -> LaurentPoly {
        lp(&[(0, 1), (4, 1)])
    }

    #[test]
    fn snf_of_identity() {
        let id = vec![
            vec![LaurentPoly::one(), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), LaurentPoly::one()],
        ];
        let chain = snf(&id).unwrap();
        assert_eq!(chain.divisors, vec![LaurentPoly::one(), LaurentPoly::one()]);
        assert!(chain.is_full_rank());
    }

    #[test]
    fn snf_of_diagonals() {
        // already a chain
        let d1 = vec![
            vec![one_q2(), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), one_q2().mul(&one_q4())],
        ];
        let chain = snf(&d1).unwrap();
        assert_eq!(chain.divisors, vec![one_q2(), one_q2().mul(&one_q4())]);

        // needs refinement: gcd(1+q^2, 1+q^4) = 1
        let d2 = vec![
            vec![one_q2(), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), one_q4()],
        ];
        let chain = snf(&d2).unwrap();
        assert_eq!(
            chain.divisors,
            vec![LaurentPoly::one(), one_q2().mul(&one_q4())]
        );
    }

    #[test]
    fn snf_handles_rank_deficiency() {
        let m = vec![
            vec![one_q2(), one_q2()],
            vec![one_q2(), one_q2()],
        ];
        let chain = snf(&m).unwrap();
        assert_eq!(chain.divisors.len(), 2);
        assert_eq!(chain.divisors[0], one_q2());
        assert!(chain.divisors[1].is_zero());
        assert!(!chain.is_full_rank());
    }

    #[test]
    fn diagonal_divisor_examples() {
        let pf = |factors: &[(u64, u64)]| ProductForm::from_factors(2, factors.iter().copied());
        let chain =
            divisors_of_diagonal(&[ProductForm::identity(2), pf(&[(1, 1)])]).unwrap();
        assert_eq!(chain.divisors, vec![LaurentPoly::one(), one_q2()]);

        let chain = divisors_of_diagonal(&[pf(&[(1, 1)]), pf(&[(1, 1)])]).unwrap();
        assert_eq!(chain.divisors, vec![one_q2(), one_q2()]);

        let chain = divisors_of_diagonal(&[pf(&[(1, 1)]), pf(&[(2, 1)])]).unwrap();
        assert_eq!(
            chain.divisors,
            vec![LaurentPoly::one(), one_q2().mul(&one_q4())]
        );
    }

    #[test]
    fn diagonal_chain_agrees_with_snf() {
        let pf = |factors: &[(u64, u64)]| ProductForm::from_factors(2, factors.iter().copied());
        let cases: Vec<Vec<ProductForm>> = vec![
            vec![pf(&[(1, 2)]), pf(&[(1, 1), (2, 1)]), pf(&[(2, 1)])],
            vec![
                ProductForm::identity(2),
                pf(&[(1, 1)]),
                pf(&[(1, 1)]),
                pf(&[(2, 1)]),
                pf(&[(1, 2), (3, 1)]),
                pf(&[(3, 1)]),
                pf(&[(1, 1), (2, 1)]),
                pf(&[(4, 1)]),
            ],
        ];
        for entries in cases {
            let by_refinement = divisors_of_diagonal(&entries).unwrap();
            let size = entries.len();
            let mut diag = vec![vec![LaurentPoly::zero(); size]; size];
            for (i, e) in entries.iter().enumerate() {
                diag[i][i] = LaurentPoly::from_qpoly(&e.expand());
            }
            let by_snf = snf(&diag).unwrap();
            assert_eq!(by_refinement, by_snf);
        }
    }

    #[test]
    fn snf_of_cartan_2_2() {
        let c = fock::cartan(2, 2).unwrap();
        let chain = snf(&to_laurent(&c)).unwrap();
        assert_eq!(chain.divisors, vec![LaurentPoly::from_qpoly(&q_integer(1, 2))]);
    }

    #[test]
    fn conjecture_small_cases() {
        for n in 0..=6u32 {
            let report = check_conjecture(n, 2, None).unwrap();
            assert_eq!(report.comparisons.len(), 3);
            for c in &report.comparisons {
                assert!(c.equal, "difference at n={n}: {:?}", c.first_difference);
            }
        }
        assert!(check_conjecture(4, 4, None).is_err(), "p = 4 is not prime");
    }

    #[test]
    fn conjecture_blockwise_small() {
        let report = check_conjecture_blockwise(6, 2, None).unwrap();
        assert!(report.blockwise);
        assert!(!report.comparisons.is_empty());
        for c in &report.comparisons {
            assert!(c.equal, "difference: {:?}", c.first_difference);
        }
        // single weight entry point agrees
        let single = check_conjecture_block(3, 2, 6, None).unwrap();
        assert!(single.comparisons.iter().all(|c| c.equal));
        // a weight with no block is rejected
        assert!(check_conjecture_block(4, 2, 6, None).is_err());
    }

    #[test]
    fn integer_snf_examples() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        };
        assert_eq!(
            integer_snf(&m(&[&[1, 0], &[0, 1]])).unwrap(),
            vec![BigInt::one(), BigInt::one()]
        );
        assert_eq!(
            integer_snf(&m(&[&[2, 0], &[0, 3]])).unwrap(),
            vec![BigInt::one(), BigInt::from(6)]
        );
        assert_eq!(
            integer_snf(&m(&[&[2, 4], &[4, 8]])).unwrap(),
            vec![BigInt::from(2), BigInt::zero()]
        );
        // classical 3x3 example
        assert_eq!(
            integer_snf(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]])).unwrap(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
        assert_eq!(
            integer_diagonal_divisors(&[BigInt::from(4), BigInt::from(6)]),
            vec![BigInt::from(2), BigInt::from(12)]
        );
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-2i64..4, -4i64..5), 0..4).prop_map(|pairs| {
            let mut p = LaurentPoly::zero();
            for (e, c) in pairs {
                p.add_to_coeff(e, &BigRational::from(BigInt::from(c)));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn snf_is_permutation_invariant(
            entries in proptest::collection::vec(arb_laurent(), 9),
            perm in (0usize..6, 0usize..6),
        ) {
            let m: Vec<Vec<LaurentPoly>> =
                entries.chunks(3).map(|c| c.to_vec()).collect();
            let base = snf(&m).unwrap();
            let perms = [[0usize, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let rp = perms[perm.0];
            let cp = perms[perm.1];
            let permuted: Vec<Vec<LaurentPoly>> = (0..3)
                .map(|i| (0..3).map(|j| m[rp[i]][cp[j]].clone()).collect())
                .collect();
            prop_assert_eq!(snf(&permuted).unwrap(), base);
        }

        #[test]
        fn snf_divisors_multiply_to_laplace_determinant(
            entries in proptest::collection::vec(arb_laurent(), 9),
        ) {
            let m: Vec<Vec<LaurentPoly>> =
                entries.chunks(3).map(|c| c.to_vec()).collect();
            // independent cofactor-expansion determinant
            fn laplace(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
                let n = m.len();
                if n == 1 {
                    return m[0][0].clone();
                }
                let mut acc = LaurentPoly::zero();
                for c in 0..n {
                    let minor: Vec<Vec<LaurentPoly>> = (1..n)
                        .map(|r| (0..n).filter(|&x| x != c).map(|x| m[r][x].clone()).collect())
                        .collect();
                    let term = m[0][c].mul(&laplace(&minor));
                    acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
            let chain = snf(&m).unwrap();
            let product = chain
                .divisors
                .iter()
                .fold(LaurentPoly::one(), |acc, d| acc.mul(d));
            prop_assert_eq!(
                product.canonical_associate(),
                laplace(&m).canonical_associate()
            );
        }
    }
}

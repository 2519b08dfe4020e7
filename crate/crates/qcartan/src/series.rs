//! Truncated formal power series over the integers.
//!
//! These serve as the independent counting oracle for the generating
//! function identities: every closed form is expanded exactly to a fixed
//! truncation order and compared coefficientwise against counts obtained by
//! explicit enumeration. Series never extend themselves silently: reading a
//! coefficient beyond the truncation order panics.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::partitions::{
    enumerate_p_class_regular, enumerate_partitions, enumerate_q, fold_multiplicities,
    multipartition_count, strip_multiples, Partition,
};
use crate::{determinants, Error, Result};

/// Default truncation order for the oracle sweeps.
pub const DEFAULT_ORDER: usize = 40;

/// A power series known exactly up to and including `x^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// The monomial `x^k` (zero series when `k` exceeds the order).
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = BigInt::one();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least the constant term");
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^k`; panics past the truncation order.
    pub fn coeff(&self, k: usize) -> &BigInt {
        assert!(
            k <= self.order(),
            "coefficient of x^{k} requested but series is only known to order {}",
            self.order()
        );
        &self.coeffs[k]
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), other.order(), "truncation orders must match");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), other.order(), "truncation orders must match");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.order(), other.order(), "truncation orders must match");
        let order = self.order();
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, mut exp: u32) -> TruncatedSeries {
        let mut result = TruncatedSeries::one(self.order());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse; the constant term must be a unit of `Z`.
    pub fn inverse(&self) -> Result<TruncatedSeries> {
        let c0 = &self.coeffs[0];
        if !c0.magnitude().is_one() {
            return Err(Error::Invalid(format!(
                "series with constant term {c0} is not invertible over the integers"
            )));
        }
        let order = self.order();
        let mut inv = vec![BigInt::zero(); order + 1];
        inv[0] = c0.clone(); // 1/c0 = c0 for c0 = +-1
        for k in 1..=order {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &inv[k - i];
                }
            }
            inv[k] = -c0 * acc;
        }
        Ok(TruncatedSeries { coeffs: inv })
    }

    /// Substitutes `x -> x^p`, keeping the same truncation order.
    pub fn substitute_xp(&self, p: u32) -> TruncatedSeries {
        assert!(p >= 1, "substitution exponent must be positive");
        let order = self.order();
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            let target = i.checked_mul(p as usize);
            match target {
                Some(t) if t <= order => coeffs[t] = a.clone(),
                _ => break,
            }
        }
        TruncatedSeries { coeffs }
    }

    /// Divides by `other`; the divisor's constant term must be a unit and
    /// the division must be exact at every order (always true for the unit
    /// constant terms used here).
    pub fn div(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        Ok(self.mul(&other.inverse()?))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Euler's function `phi(x) = prod_{n >= 1} (1 - x^n)`, truncated.
pub fn phi(order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    for n in 1..=order {
        // multiply by (1 - x^n) in place
        for k in (n..=order).rev() {
            let lower = s.coeffs[k - n].clone();
            s.coeffs[k] -= lower;
        }
    }
    s
}

/// The geometric series `1 / (1 - x^j)`.
pub fn geometric(j: usize, order: usize) -> TruncatedSeries {
    assert!(j >= 1);
    let mut s = TruncatedSeries::zero(order);
    let mut k = 0;
    while k <= order {
        s.coeffs[k] = BigInt::one();
        k += j;
    }
    s
}

// ---------------------------------------------------------------------------
// Oracle report
// ---------------------------------------------------------------------------

/// Outcome of one generating-function identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCheck {
    pub id: String,
    /// Index and (series value, enumerated value) of the first mismatch.
    pub first_mismatch: Option<(usize, BigInt, BigInt)>,
}

impl SeriesCheck {
    pub fn pass(&self) -> bool {
        self.first_mismatch.is_none()
    }

    pub fn to_json(&self) -> Value {
        match &self.first_mismatch {
            None => json!({ "id": self.id, "pass": true }),
            Some((n, series, counted)) => json!({
                "id": self.id,
                "pass": false,
                "first_mismatch": {
                    "n": n,
                    "series": series.to_string(),
                    "enumerated": counted.to_string(),
                }
            }),
        }
    }
}

/// Pass/fail table for every identity at one `(p, order)`.
#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub p: u32,
    pub order: usize,
    pub checks: Vec<SeriesCheck>,
}

impl SeriesReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(SeriesCheck::pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "order": self.order,
            "all_pass": self.all_pass(),
            "checks": self.checks.iter().map(SeriesCheck::to_json).collect::<Vec<_>>(),
        })
    }
}

fn compare(id: &str, series: &TruncatedSeries, counted: &[BigInt]) -> SeriesCheck {
    let upto = counted.len().min(series.order() + 1);
    let first_mismatch = (0..upto)
        .find(|&n| series.coeff(n) != &counted[n])
        .map(|n| (n, series.coeff(n).clone(), counted[n].clone()));
    SeriesCheck { id: id.to_string(), first_mismatch }
}

/// Runs every generating-function identity at modulus `p` to the given
/// order, comparing closed forms against explicit enumeration.
pub fn oracle_counts(order: usize, p: u32) -> Result<SeriesReport> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    if order > 60 {
        return Err(Error::OutOfRange(format!(
            "oracle order {order} exceeds the configured bound 60"
        )));
    }
    let mut checks = Vec::new();

    let phi_x = phi(order);
    let phi_xp = phi_x.substitute_xp(p);
    let inv_phi = phi_x.inverse()?;

    // Enumerated counts reused throughout.
    let all_parts: Vec<Vec<Partition>> =
        (0..=order as u32).map(enumerate_partitions).collect();
    let class_regular: Vec<Vec<Partition>> = (0..=order as u32)
        .map(|n| enumerate_p_class_regular(n, p))
        .collect::<Result<_>>()?;
    let p_count: Vec<BigInt> = all_parts.iter().map(|v| BigInt::from(v.len())).collect();
    let class_regular_count: Vec<BigInt> =
        class_regular.iter().map(|v| BigInt::from(v.len())).collect();
    let core_count: Vec<BigInt> = (0..=order as u32)
        .map(|d| Ok(BigInt::from(crate::partitions::count_p_cores(d, p)?)))
        .collect::<Result<_>>()?;

    // 1/phi counts all partitions.
    checks.push(compare("partition-count", &inv_phi, &p_count));

    // phi(x^p)/phi(x) counts the p-class regular partitions.
    let series_class_regular = phi_xp.mul(&inv_phi);
    checks.push(compare("eq-2.1", &series_class_regular, &class_regular_count));

    // 1/phi^r counts r-multipartitions; r = p is the displayed case and
    // r = p - 1 is the one the block index set uses.
    for r in [p, p - 1] {
        let m_counts: Vec<BigInt> = (0..=order as u32)
            .map(|d| BigInt::from(multipartition_count(d, r)))
            .collect();
        checks.push(compare(&format!("eq-2.2 r={r}"), &inv_phi.pow(r), &m_counts));
    }

    // phi(x^p)^p/phi counts p-cores.
    checks.push(compare("eq-2.3", &phi_xp.pow(p).mul(&inv_phi), &core_count));

    // The convolution rule: with A(k) all partitions and B(k) the p-class
    // regular ones, Z(n) = union over k of A(k) x B(n-pk).
    let z_counts: Vec<BigInt> = (0..=order)
        .map(|n| {
            let mut acc = BigInt::zero();
            let mut k = 0usize;
            while p as usize * k <= n {
                acc += &p_count[k] * &class_regular_count[n - p as usize * k];
                k += 1;
            }
            acc
        })
        .collect();
    let z_series = inv_phi.substitute_xp(p).mul(&series_class_regular);
    checks.push(compare("eq-2.4", &z_series, &z_counts));

    // Fiber series: for fixed class-regular nu, the number of class-regular
    // partitions of n folding to nu is the coefficient of
    // x^{p|nu|} phi(x^p)^2 / (phi(x) phi(x^{p^2})).
    let fiber_base = phi_xp
        .pow(2)
        .mul(&inv_phi)
        .mul(&phi_x.substitute_xp(p * p).inverse()?);
    let small_nus: Vec<Partition> = (0..=3u32)
        .flat_map(|k| enumerate_p_class_regular(k, p).unwrap())
        .collect();
    // bucket fold images and strip images once per n
    let mut alpha_fibers: Vec<BTreeMap<Partition, BigInt>> = Vec::with_capacity(order + 1);
    let mut beta_fibers: Vec<BTreeMap<Partition, BigInt>> = Vec::with_capacity(order + 1);
    for n in 0..=order as u32 {
        let mut alpha: BTreeMap<Partition, BigInt> = BTreeMap::new();
        for lam in &class_regular[n as usize] {
            *alpha.entry(fold_multiplicities(lam, p)?).or_default() += 1;
        }
        alpha_fibers.push(alpha);
        let mut beta: BTreeMap<Partition, BigInt> = BTreeMap::new();
        for qi in enumerate_q(n, p)? {
            *beta.entry(strip_multiples(&qi)).or_default() += 1;
        }
        beta_fibers.push(beta);
    }
    for nu in &small_nus {
        let shifted: TruncatedSeries = {
            let shift = (p * nu.size()) as usize;
            let mut coeffs = vec![BigInt::zero(); order + 1];
            for k in shift..=order {
                coeffs[k] = fiber_base.coeff(k - shift).clone();
            }
            TruncatedSeries::from_coeffs(coeffs)
        };
        let alpha_counts: Vec<BigInt> = (0..=order)
            .map(|n| alpha_fibers[n].get(nu).cloned().unwrap_or_default())
            .collect();
        let beta_counts: Vec<BigInt> = (0..=order)
            .map(|n| beta_fibers[n].get(nu).cloned().unwrap_or_default())
            .collect();
        checks.push(compare(
            &format!("fiber-alpha nu={nu}"),
            &shifted,
            &alpha_counts,
        ));
        checks.push(compare(&format!("fiber-beta nu={nu}"), &shifted, &beta_counts));
    }

    // Exponent series: the exponent of [p]_j in the graded determinant has
    // generating function x^{jp}/(1-x^{jp}) * phi(x^p)/phi(x).
    for j in 1..=4u64 {
        let jp = j as usize * p as usize;
        if jp > order {
            break;
        }
        let mut geom_shifted = geometric(jp, order);
        geom_shifted.coeffs[0] = BigInt::zero(); // x^{jp}/(1-x^{jp}) starts at x^{jp}
        let series = geom_shifted.mul(&series_class_regular);
        let counts: Vec<BigInt> = (0..=order as u32)
            .map(|n| Ok(BigInt::from(determinants::qint_exponent(j, n, p)?)))
            .collect::<Result<_>>()?;
        checks.push(compare(&format!("exponent-series j={j}"), &series, &counts));
    }

    // Multiplicity series over multipartitions, and its closed companion
    // for the block exponents: both equal x^j/((1-x^j) phi^{p-1}).
    for j in 1..=3u64 {
        if (j as usize) > order {
            break;
        }
        let mut geom_shifted = geometric(j as usize, order);
        geom_shifted.coeffs[0] = BigInt::zero();
        let closed = geom_shifted.mul(&inv_phi.pow(p - 1));

        let mj_sums: Vec<BigInt> = (0..=order as u32)
            .map(|d| sum_mj_over_multipartitions(d, p - 1, j as u32, &all_parts))
            .collect();
        checks.push(compare(&format!("multiplicity-series j={j}"), &closed, &mj_sums));

        let a_values: Vec<BigInt> = (0..=order as u32)
            .map(|d| determinants::block_exponent(j, d, p))
            .collect::<Result<_>>()?;
        checks.push(compare(&format!("block-exponent-series j={j}"), &closed, &a_values));
    }

    Ok(SeriesReport { p, order, checks })
}

/// Sum of `m_j` of the last component over all `r`-multipartitions of `d`,
/// computed by splitting off the last component: the other `r - 1`
/// components contribute a bare count.
fn sum_mj_over_multipartitions(
    d: u32,
    r: u32,
    j: u32,
    all_parts: &[Vec<Partition>],
) -> BigInt {
    if r == 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    for k in 0..=d {
        let rest = multipartition_count(d - k, r - 1);
        if rest == 0 {
            continue;
        }
        let mj: u64 = all_parts[k as usize]
            .iter()
            .map(|lam| lam.multiplicity(j) as u64)
            .sum();
        acc += BigInt::from(rest) * BigInt::from(mj);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_multipartitions;

    #[test]
    fn phi_matches_pentagonal_expansion() {
        let order = 40;
        let s = phi(order);
        let mut expected = TruncatedSeries::zero(order);
        expected.coeffs[0] = BigInt::one();
        for k in 1i64.. {
            let e1 = k * (3 * k - 1) / 2;
            let e2 = k * (3 * k + 1) / 2;
            if e1 as usize > order && e2 as usize > order {
                break;
            }
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            if e1 as usize <= order {
                expected.coeffs[e1 as usize] = sign.clone();
            }
            if e2 as usize <= order {
                expected.coeffs[e2 as usize] = sign;
            }
        }
        assert_eq!(s, expected);
    }

    #[test]
    fn phi_low_order() {
        let s = phi(5);
        let expected: Vec<i64> = vec![1, -1, -1, 0, 0, 1];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(s.coeff(k), &BigInt::from(*e));
        }
    }

    #[test]
    fn inverse_of_phi_counts_partitions() {
        let inv = phi(30).inverse().unwrap();
        for n in 0..=30u32 {
            assert_eq!(inv.coeff(n as usize), &BigInt::from(enumerate_partitions(n).len()));
        }
    }

    #[test]
    fn substitution_and_inverse_round_trip() {
        let s = phi(20);
        let s2 = s.substitute_xp(2);
        for k in 0..=20 {
            if k % 2 == 0 {
                assert_eq!(s2.coeff(k), s.coeff(k / 2));
            } else {
                assert!(s2.coeff(k).is_zero());
            }
        }
        assert_eq!(s.mul(&s.inverse().unwrap()), TruncatedSeries::one(20));
    }

    #[test]
    #[should_panic(expected = "only known to order")]
    fn reading_past_truncation_panics() {
        let s = phi(5);
        let _ = s.coeff(6);
    }

    #[test]
    fn non_unit_constant_term_rejected() {
        let mut s = TruncatedSeries::one(4);
        s.coeffs[0] = BigInt::from(2);
        assert!(s.inverse().is_err());
    }

    #[test]
    fn mj_decomposition_matches_enumeration() {
        let all_parts: Vec<Vec<Partition>> = (0..=8u32).map(enumerate_partitions).collect();
        for p in [2u32, 3, 4] {
            for d in 0..=8u32 {
                for j in 1..=3u32 {
                    let direct: u64 = enumerate_multipartitions(d, p - 1)
                        .iter()
                        .map(|mu| {
                            mu.last().map_or(0, |lam| lam.multiplicity(j) as u64)
                        })
                        .sum();
                    let split = sum_mj_over_multipartitions(d, p - 1, j, &all_parts);
                    assert_eq!(split, BigInt::from(direct), "d={d} p={p} j={j}");
                }
            }
        }
    }

    #[test]
    fn oracle_small_orders_pass() {
        for p in [2u32, 3] {
            let report = oracle_counts(14, p).unwrap();
            for check in &report.checks {
                assert!(check.pass(), "failed: {} at p={p}: {:?}", check.id, check.first_mismatch);
            }
        }
    }
}

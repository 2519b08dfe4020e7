//! Block determinants of the graded Cartan matrix, in product form.
//!
//! The block of p-weight `d` has determinant `prod_j [p]_j^{A_j(d)}`,
//! where the exponent `A_j(d)` is a sum over the partitions of `d` of
//! products of binomial coefficients. The exponents are computed here on an
//! all-integer path (combinations with repetitions); the original rational
//! form is kept as a cross-check oracle in the tests. Values are cached per
//! `(p, d)` since they do not depend on the ambient `n`.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::partitions::{count_p_cores, enumerate_partitions};
use crate::qpoly::ProductForm;
use crate::{Error, Result};

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut result = BigInt::one();
    for t in 0..k {
        result = result * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    result
}

/// The exponent `A_j(d)` of `[p]_j` in the weight-`d` block determinant.
///
/// Computed as `sum over lambda in P(d) with m_j >= 1` of
/// `C(p-2+m_j, m_j-1) * prod_{i != j} C(p-2+m_i, m_i)`, which is the
/// integer rewriting of the rational form `m_j/(p-1) * prod_i C(p-2+m_i, m_i)`.
pub fn block_exponent(j: u64, d: u32, p: u32) -> Result<BigInt> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    assert!(j >= 1, "block_exponent requires j >= 1");
    let mut total = BigInt::zero();
    for lambda in enumerate_partitions(d) {
        let mj = lambda.multiplicity(j as u32) as u64;
        if mj == 0 {
            continue;
        }
        let mut term = binomial(p as u64 - 2 + mj, mj - 1);
        for (i, m) in lambda.multiplicities() {
            if i as u64 != j {
                term *= binomial(p as u64 - 2 + m as u64, m as u64);
            }
        }
        total += term;
    }
    Ok(total)
}

/// The original rational form of the exponent,
/// `sum over lambda in P(d)` of `m_j/(p-1) * prod_i C(p-2+m_i, m_i)`,
/// asserted to be an integer. Kept as a cross-check oracle for
/// [`block_exponent`].
pub fn block_exponent_rational(j: u64, d: u32, p: u32) -> Result<BigInt> {
    use num_rational::BigRational;
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    let mut total = BigRational::zero();
    for lambda in enumerate_partitions(d) {
        let mj = lambda.multiplicity(j as u32) as u64;
        if mj == 0 {
            continue;
        }
        let mut term = BigRational::new(BigInt::from(mj), BigInt::from(p - 1));
        for (_, m) in lambda.multiplicities() {
            term *= BigRational::from(binomial(p as u64 - 2 + m as u64, m as u64));
        }
        total += term;
    }
    assert!(total.is_integer(), "A_{j}({d}) must be an integer");
    Ok(total.to_integer())
}

/// A weight-`d` block determinant: the product form and its exponent map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDeterminant {
    pub d: u32,
    pub p: u32,
    pub value: ProductForm,
    /// `j -> A_j(d)` for the nonzero exponents (all have `j <= d`).
    pub exponents: BTreeMap<u64, u64>,
}

impl BlockDeterminant {
    pub fn to_json(&self) -> Value {
        let exps: serde_json::Map<String, Value> = self
            .exponents
            .iter()
            .map(|(j, a)| (j.to_string(), json!(a)))
            .collect();
        json!({ "d": self.d, "p": self.p, "value": self.value.to_json(), "exponents": exps })
    }
}

fn block_cache() -> &'static Mutex<BTreeMap<(u32, u32), BlockDeterminant>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(u32, u32), BlockDeterminant>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// The block determinant `prod_{j <= d} [p]_j^{A_j(d)}` of p-weight `d`.
/// Results are cached per `(p, d)`.
pub fn delta_block(d: u32, p: u32) -> Result<BlockDeterminant> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    if let Some(hit) = block_cache().lock().unwrap().get(&(p, d)) {
        return Ok(hit.clone());
    }
    let mut exponents = BTreeMap::new();
    let mut value = ProductForm::identity(p);
    for j in 1..=d.max(1) as u64 {
        let a = block_exponent(j, d, p)?;
        if a.is_zero() {
            continue;
        }
        let a = a
            .to_u64()
            .unwrap_or_else(|| panic!("exponent A_{j}({d}) overflows u64"));
        exponents.insert(j, a);
        value.push(j, a);
    }
    let block = BlockDeterminant { d, p, value, exponents };
    block_cache()
        .lock()
        .unwrap()
        .entry((p, d))
        .or_insert_with(|| block.clone());
    Ok(block)
}

/// The full graded determinant
/// `prod_{0 <= d <= n/p} delta_block(d)^{c_p(n - pd)}`.
pub fn delta(n: u32, p: u32) -> Result<ProductForm> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    let mut result = ProductForm::identity(p);
    for d in 0..=(n / p) {
        let cores = count_p_cores(n - p * d, p)? as u64;
        if cores == 0 {
            continue;
        }
        let block = delta_block(d, p)?;
        for (j, a) in block.value.iter() {
            result.push(j, a * cores);
        }
    }
    Ok(result)
}

/// The exponent of `[p]_j` in `delta(n, p)`, i.e.
/// `sum_d c_p(n - pd) A_j(d)`.
pub fn qint_exponent(j: u64, n: u32, p: u32) -> Result<u64> {
    Ok(delta(n, p)?.exponent(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{
        enumerate_multipartitions, enumerate_p_class_regular,
    };
    use crate::qpoly::{base_p_digits, p_part, product_of};
    use crate::weights::{weight_e, weight_g, weight_h};

    #[test]
    fn exponent_base_cases() {
        for p in [2u32, 3, 5] {
            for j in 1..=4u64 {
                assert!(block_exponent(j, 0, p).unwrap().is_zero());
            }
            assert_eq!(block_exponent(1, 1, p).unwrap(), BigInt::one());
        }
        // p = 2: A_j(d) is the total multiplicity of j over P(d)
        assert_eq!(block_exponent(1, 2, 2).unwrap(), BigInt::from(2));
        assert_eq!(block_exponent(2, 2, 2).unwrap(), BigInt::one());
    }

    #[test]
    fn exponent_agrees_with_rational_form() {
        for p in [2u32, 3, 4, 5] {
            for d in 0..=8u32 {
                for j in 1..=d.max(1) as u64 {
                    assert_eq!(
                        block_exponent(j, d, p).unwrap(),
                        block_exponent_rational(j, d, p).unwrap(),
                        "j={j} d={d} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn exponent_agrees_with_multipartition_sums() {
        // the two sums over (p-1)-multipartitions from the block formula
        for p in [2u32, 3, 4] {
            for d in 0..=6u32 {
                let mus = enumerate_multipartitions(d, p - 1);
                for j in 1..=d.max(1) as u64 {
                    let direct: u64 = mus
                        .iter()
                        .map(|mu| mu.last().map_or(0, |lam| lam.multiplicity(j as u32) as u64))
                        .sum();
                    let digits: u64 = mus
                        .iter()
                        .map(|mu| {
                            let last = mu.last().cloned().unwrap_or_default();
                            last.multiplicities()
                                .iter()
                                .filter(|(&i, _)| i % p != 0)
                                .map(|(_, &m)| base_p_digits(m as u64 / j, p) as u64)
                                .sum::<u64>()
                        })
                        .sum();
                    let a = block_exponent(j, d, p).unwrap();
                    assert_eq!(a, BigInt::from(direct), "m_j sum at j={j} d={d} p={p}");
                    assert_eq!(a, BigInt::from(digits), "digit sum at j={j} d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn block_products_of_weight_h() {
        // delta_block(d) = prod over (p-1)-multipartitions of w_H(last)
        for p in [2u32, 3] {
            for d in 0..=5u32 {
                let product = product_of(
                    p,
                    enumerate_multipartitions(d, p - 1)
                        .iter()
                        .map(|mu| weight_h(&mu.last().cloned().unwrap_or_default(), p)),
                )
                .unwrap();
                assert_eq!(delta_block(d, p).unwrap().value, product, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn delta_block_examples() {
        for p in [2u32, 3, 5] {
            assert!(delta_block(0, p).unwrap().value.is_identity());
            assert_eq!(delta_block(1, p).unwrap().value, ProductForm::from_factors(p, [(1, 1)]));
        }
        assert_eq!(
            delta_block(2, 2).unwrap().value,
            ProductForm::from_factors(2, [(1, 2), (2, 1)])
        );
    }

    #[test]
    fn delta_examples() {
        assert!(delta(0, 2).unwrap().is_identity());
        assert_eq!(delta(2, 2).unwrap(), ProductForm::from_factors(2, [(1, 1)]));
        assert_eq!(delta(3, 2).unwrap(), ProductForm::from_factors(2, [(1, 1)]));
    }

    #[test]
    fn qint_exponent_examples() {
        assert_eq!(qint_exponent(1, 2, 2).unwrap(), 1);
        assert_eq!(qint_exponent(1, 3, 2).unwrap(), 1);
        assert_eq!(qint_exponent(3, 4, 2).unwrap(), 0);
        assert_eq!(qint_exponent(4, 6, 2).unwrap(), 0);
    }

    #[test]
    fn qint_exponent_counts_folded_multiplicities() {
        // the exponent of [p]_j, j = a p^{b-1}, equals
        // sum over class-regular lambda of floor(m_a / p^b)
        for p in [2u32, 3] {
            for n in 0..=12u32 {
                let class_regular = enumerate_p_class_regular(n, p).unwrap();
                for j in 1..=(n.max(1)) as u64 {
                    let mut a = j;
                    let mut b = 1u32;
                    while a % p as u64 == 0 {
                        a /= p as u64;
                        b += 1;
                    }
                    let expected: u64 = class_regular
                        .iter()
                        .map(|lam| lam.multiplicity(a as u32) as u64 / (p as u64).pow(b))
                        .sum();
                    assert_eq!(
                        qint_exponent(j, n, p).unwrap(),
                        expected,
                        "j={j} n={n} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn determinant_triple_equality_small() {
        for p in [2u32, 3, 4] {
            for n in 0..=10u32 {
                let class_regular = enumerate_p_class_regular(n, p).unwrap();
                let by_glaisher = product_of(
                    p,
                    class_regular.iter().map(|lam| weight_g(lam, p).unwrap()),
                )
                .unwrap();
                let by_elementary =
                    product_of(p, class_regular.iter().map(|lam| weight_e(lam, p))).unwrap();
                let by_blocks = delta(n, p).unwrap();
                assert_eq!(by_blocks, by_glaisher, "n={n} p={p}");
                assert_eq!(by_blocks, by_elementary, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn summation_identities_small() {
        // floor-sum identity over class-regular partitions
        for p in [2u32, 3] {
            for n in 0..=10u32 {
                let class_regular = enumerate_p_class_regular(n, p).unwrap();
                for j in 1..=n.max(1) {
                    if j % p == 0 {
                        continue;
                    }
                    for k in 1..=4u32 {
                        let pk = (p as u64).pow(k);
                        let lhs: u64 = class_regular
                            .iter()
                            .map(|lam| lam.multiplicity(j) as u64 / pk)
                            .sum();
                        let rhs: u64 = class_regular
                            .iter()
                            .map(|lam| {
                                lam.multiplicities()
                                    .iter()
                                    .map(|(_, &m)| {
                                        base_p_digits(m as u64 / (pk * j as u64), p) as u64
                                    })
                                    .sum::<u64>()
                            })
                            .sum();
                        assert_eq!(lhs, rhs, "n={n} p={p} j={j} k={k}");
                    }
                }
            }
        }
        // multiplicity identity over all partitions
        for p in [2u32, 3, 5] {
            for n in 0..=12u32 {
                let all = enumerate_partitions(n);
                for j in 1..=n.max(1) {
                    let lhs: u64 = all.iter().map(|lam| lam.multiplicity(j) as u64).sum();
                    let rhs: u64 = all
                        .iter()
                        .map(|lam| {
                            lam.multiplicities()
                                .iter()
                                .filter(|(&i, _)| i % p != 0)
                                .map(|(_, &m)| base_p_digits(m as u64 / j as u64, p) as u64)
                                .sum::<u64>()
                        })
                        .sum();
                    assert_eq!(lhs, rhs, "n={n} p={p} j={j}");
                }
            }
        }
    }

    #[test]
    fn q_one_specialization_is_classical_determinant() {
        fn factorial_p_part(m: u32, p: u32) -> BigInt {
            (1..=m as u64).map(|j| p_part(j, p)).product()
        }
        for p in [2u32, 3] {
            for n in 0..=10u32 {
                let classical: BigInt = enumerate_p_class_regular(n, p)
                    .unwrap()
                    .iter()
                    .map(|lam| {
                        lam.multiplicities()
                            .values()
                            .map(|&m| factorial_p_part(m, p))
                            .product::<BigInt>()
                    })
                    .product();
                assert_eq!(delta(n, p).unwrap().at_one(), classical, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn block_cache_is_stable() {
        let first = delta_block(4, 2).unwrap();
        let second = delta_block(4, 2).unwrap();
        assert_eq!(first, second);
        assert_eq!(delta_block(4, 2).unwrap().exponents, first.exponents);
    }
}

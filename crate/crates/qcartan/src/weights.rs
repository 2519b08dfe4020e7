//! The three multiplicative partition weights and the combinatorics tying
//! them together.
//!
//! Each weight attaches to a partition a product of q-integers `[p]_l`,
//! carried as a [`ProductForm`]:
//!
//! - [`weight_e`]: the product of graded p-parts `(j)_[p]` over
//!   `1 <= j <= m_i` for every part `i` prime to `p`; the q-analogue of the
//!   elementary-divisor entries `prod_i (m_i!)_p`.
//! - [`weight_h`]: exponent of `[p]_j` is the total number of base-p digits
//!   of `floor(m_i / j)` over parts `i` prime to `p`; the block form
//!   evaluates on the last component of a multipartition.
//! - [`weight_g`]: the weight accumulated by the Glaisher correspondence,
//!   `prod_i [p]_i^{d_i}` with `d_i` the number of `g_i` steps; computed
//!   here by the closed formula and cross-checked against actual step
//!   counts.
//!
//! The decorated-diagram apparatus ([`DiagramCell`], [`involution`]) swaps
//! the two tableaux values `G` and `E` and is the bijective engine behind
//! the product identity `prod w_G = prod w_E`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::partitions::{Partition, QIndex};
use crate::qpoly::{base_p_digits, graded_p_part, ProductForm};
use crate::{Error, Result};

/// Image and step counts of the Glaisher correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlaisherResult {
    /// The p-regular partition reached once no multiplicity is `>= p`.
    pub image: Partition,
    /// For each `i`, the number of `g_i` steps applied.
    pub steps: BTreeMap<u32, u32>,
}

impl GlaisherResult {
    pub fn to_json(&self) -> Value {
        let steps: serde_json::Map<String, Value> = self
            .steps
            .iter()
            .map(|(i, d)| (i.to_string(), json!(d)))
            .collect();
        json!({ "image": self.image.to_json(), "steps": steps })
    }
}

/// The weight `w_E`: product over parts `i` prime to `p` of
/// `(1)_[p] (2)_[p] ... (m_i)_[p]`.
pub fn weight_e(lambda: &Partition, p: u32) -> ProductForm {
    assert!(p >= 2, "weight_e requires p >= 2");
    let mut w = ProductForm::identity(p);
    for (i, m) in lambda.multiplicities() {
        if i % p == 0 {
            continue;
        }
        for j in 1..=m as u64 {
            w = w.try_mul(&graded_p_part(j, p)).expect("same p");
        }
    }
    w
}

/// The weight `w_H`: exponent of `[p]_j` is
/// `sum over i prime to p of o_p(floor(m_i / j))`.
pub fn weight_h(lambda: &Partition, p: u32) -> ProductForm {
    assert!(p >= 2, "weight_h requires p >= 2");
    let mut w = ProductForm::identity(p);
    for (i, m) in lambda.multiplicities() {
        if i % p == 0 {
            continue;
        }
        for j in 1..=m as u64 {
            w.push(j, base_p_digits(m as u64 / j, p) as u64);
        }
    }
    w
}

/// The weight `w_H` of a `Q_p(n)` index, read off its last component.
pub fn weight_h_index(qi: &QIndex) -> ProductForm {
    let last = qi.mu.last().cloned().unwrap_or_default();
    weight_h(&last, qi.p)
}

/// Runs the Glaisher correspondence, trading `p` copies of a part `i` for
/// one part `pi`, always at the smallest applicable `i`; records how many
/// times each `g_i` fires. The result does not depend on the order, which
/// the tests exercise through [`glaisher_with_choice`].
pub fn glaisher(lambda: &Partition, p: u32) -> GlaisherResult {
    glaisher_with_choice(lambda, p, |candidates| candidates[0])
}

/// As [`glaisher`], but the caller picks which applicable `g_i` fires next;
/// used to exercise order-independence.
pub fn glaisher_with_choice(
    lambda: &Partition,
    p: u32,
    mut choose: impl FnMut(&[u32]) -> u32,
) -> GlaisherResult {
    assert!(p >= 2, "glaisher requires p >= 2");
    let mut mult = lambda.multiplicities();
    let mut steps: BTreeMap<u32, u32> = BTreeMap::new();
    loop {
        let candidates: Vec<u32> = mult
            .iter()
            .filter(|&(_, &m)| m >= p)
            .map(|(&i, _)| i)
            .collect();
        if candidates.is_empty() {
            break;
        }
        let i = choose(&candidates);
        debug_assert!(candidates.contains(&i));
        *mult.get_mut(&i).unwrap() -= p;
        if mult[&i] == 0 {
            mult.remove(&i);
        }
        *mult.entry(p * i).or_insert(0) += 1;
        *steps.entry(i).or_insert(0) += 1;
    }
    GlaisherResult { image: Partition::from_multiplicities(&mult), steps }
}

/// The Glaisher weight of a p-class-regular partition, by the closed
/// formula: exponent of `[p]_{a p^{b-1}}` is `floor(m_a / p^b)`.
pub fn weight_g(lambda: &Partition, p: u32) -> Result<ProductForm> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    if !lambda.is_p_class_regular(p) {
        return Err(Error::NotClassRegular(lambda.to_string(), p));
    }
    let mut w = ProductForm::identity(p);
    for (a, m) in lambda.multiplicities() {
        let mut power = p as u64; // p^b
        let mut index = a as u64; // a p^{b-1}
        while m as u64 / power > 0 {
            w.push(index, m as u64 / power);
            power *= p as u64;
            index *= p as u64;
        }
    }
    Ok(w)
}

// ---------------------------------------------------------------------------
// Decorated diagrams
// ---------------------------------------------------------------------------

/// A cell `(lambda; i, j, k)` of the decorated diagram `D_i(lambda)`:
/// `lambda` is p-class regular, `i` is prime to `p`, and the coordinates
/// satisfy `1 <= k <= floor(m_i / p)` with `p^j | k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiagramCell {
    lambda: Partition,
    p: u32,
    i: u32,
    j: u32,
    k: u64,
}

impl DiagramCell {
    pub fn new(lambda: Partition, p: u32, i: u32, j: u32, k: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidModulus(p));
        }
        if !lambda.is_p_class_regular(p) {
            return Err(Error::NotClassRegular(lambda.to_string(), p));
        }
        if i.is_multiple_of(p) {
            return Err(Error::InvalidCell(format!("i = {i} is divisible by p = {p}")));
        }
        let bound = lambda.multiplicity(i) as u64 / p as u64;
        if k < 1 || k > bound {
            return Err(Error::InvalidCell(format!(
                "k = {k} outside 1..={bound} for i = {i} in {lambda}"
            )));
        }
        let pj = (p as u64).pow(j);
        if !k.is_multiple_of(pj) {
            return Err(Error::InvalidCell(format!("p^j = {pj} does not divide k = {k}")));
        }
        Ok(DiagramCell { lambda, p, i, j, k })
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn coords(&self) -> (u32, u32, u64) {
        (self.i, self.j, self.k)
    }

    /// The tableau value `G = i * p^j`.
    pub fn g_value(&self) -> u64 {
        self.i as u64 * (self.p as u64).pow(self.j)
    }

    /// The tableau value `E = k / p^j`.
    pub fn e_value(&self) -> u64 {
        self.k / (self.p as u64).pow(self.j)
    }
}

impl fmt::Display for DiagramCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}, {}, {})", self.lambda, self.i, self.j, self.k)
    }
}

/// The diagram `D_i(lambda)`: all `(j, k)` with `1 <= k <= floor(m_i / p)`
/// and `p^j | k`, in increasing `(j, k)` order.
pub fn diagram(lambda: &Partition, p: u32, i: u32) -> Result<Vec<(u32, u64)>> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    if i.is_multiple_of(p) {
        return Err(Error::InvalidCell(format!("i = {i} is divisible by p = {p}")));
    }
    let bound = lambda.multiplicity(i) as u64 / p as u64;
    let mut cells = Vec::new();
    for k in 1..=bound {
        let mut j = 0u32;
        let mut pj = 1u64;
        while k % pj == 0 {
            cells.push((j, k));
            j += 1;
            pj *= p as u64;
        }
    }
    cells.sort_unstable();
    Ok(cells)
}

/// All decorated cells of one partition, over every `i` prime to `p`.
pub fn cells_of(lambda: &Partition, p: u32) -> Result<Vec<DiagramCell>> {
    let mut out = Vec::new();
    for (i, _) in lambda.multiplicities() {
        if i % p == 0 {
            continue;
        }
        for (j, k) in diagram(lambda, p, i)? {
            out.push(DiagramCell::new(lambda.clone(), p, i, j, k)?);
        }
    }
    Ok(out)
}

/// The involution on decorated cells: with `lambda = mu + (i^{pk})` and
/// `k = i' p^{j+j'}` (`i'` the p'-part of `k`), the image is
/// `(mu + (i'^{p i p^{j+j'}}); i', j', i p^{j+j'})`. It swaps the two
/// tableaux: `E(theta(c)) = G(c)`.
pub fn involution(cell: &DiagramCell) -> Result<DiagramCell> {
    let p = cell.p as u64;
    let (i, j, k) = cell.coords();
    let removed = (p * k) as u32;
    let mu = cell
        .lambda
        .remove_copies(i, removed)
        .map_err(|_| Error::InvalidCell(format!("{cell} lacks {removed} copies of part {i}")))?;

    // k = i' * p^{valuation}, j' = valuation - j
    let mut valuation = 0u32;
    let mut i_prime = k;
    while i_prime % p == 0 {
        i_prime /= p;
        valuation += 1;
    }
    debug_assert!(valuation >= j);
    let j_prime = valuation - j;

    let copies = p * i as u64 * p.pow(valuation);
    let new_part = Partition::new(vec![i_prime as u32; copies as usize])?;
    let image_lambda = mu.concat(&new_part);
    let new_k = i as u64 * p.pow(valuation);
    DiagramCell::new(image_lambda, cell.p, i_prime as u32, j_prime, new_k)
}

//! Integer partitions and the index sets attached to a modulus `p`.
//!
//! A [`Partition`] stores its parts in weakly decreasing order; the
//! multiplicity view `m_i` is derived on demand. Every enumeration in this
//! module is deterministic: partitions of a given `n` are produced in
//! reverse-lexicographic order on part lists (largest-first), so `(4)`
//! precedes `(3,1)` precedes `(2,2)` and so on, and composite index sets
//! iterate their factors in the documented nested order.
//!
//! The p-core machinery slides beads on `p` runners of the first-column
//! hook lengths rather than removing hooks one at a time, which makes
//! order-independence automatic; the hook-removal count is recovered as
//! `(|lambda| - |core|) / p`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::{Error, Result};

/// A partition: weakly decreasing positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// The empty partition.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition from parts in any order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// Builds a partition from a multiplicity map `i -> m_i`.
    pub fn from_multiplicities(mult: &BTreeMap<u32, u32>) -> Self {
        let mut parts = Vec::new();
        for (&i, &m) in mult.iter().rev() {
            if i > 0 {
                parts.extend(std::iter::repeat_n(i, m as usize));
            }
        }
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|lambda|`, the sum of the parts.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `l(lambda)`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity `m_i` of `i` as a part.
    pub fn multiplicity(&self, i: u32) -> u32 {
        self.parts.iter().filter(|&&x| x == i).count() as u32
    }

    /// The full multiplicity map, omitting zero entries.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut mult = BTreeMap::new();
        for &x in &self.parts {
            *mult.entry(x).or_insert(0) += 1;
        }
        mult
    }

    /// All distinct part multiplicities below `p`.
    pub fn is_p_regular(&self, p: u32) -> bool {
        self.multiplicities().values().all(|&m| m < p)
    }

    /// No part divisible by `p`.
    pub fn is_p_class_regular(&self, p: u32) -> bool {
        self.parts.iter().all(|&x| x % p != 0)
    }

    /// All parts distinct.
    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    /// The conjugate partition.
    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let width = self.parts[0] as usize;
        let mut cols = vec![0u32; width];
        for &part in &self.parts {
            for c in cols.iter_mut().take(part as usize) {
                *c += 1;
            }
        }
        Partition { parts: cols }
    }

    /// Hook length of the cell `(r, c)` (1-indexed); the cell must lie in
    /// the diagram.
    pub fn hook_length(&self, r: usize, c: usize) -> u32 {
        let arm = self.parts[r - 1] - c as u32;
        let leg = self.conjugate().parts[c - 1] - r as u32;
        arm + leg + 1
    }

    /// True when some hook length is divisible by `p` (equivalently, when
    /// the partition has a p-hook).
    pub fn has_p_hook(&self, p: u32) -> bool {
        let conj = self.conjugate();
        for (r, &part) in self.parts.iter().enumerate() {
            for c in 1..=part as usize {
                let hook = part - c as u32 + conj.parts[c - 1] - r as u32;
                if hook.is_multiple_of(p) {
                    return true;
                }
            }
        }
        false
    }

    /// First-column hook lengths `lambda_i + (len - i)` padded to `len`
    /// beads; `len` must be at least the number of parts.
    pub fn beta_set(&self, len: usize) -> Vec<u64> {
        assert!(len >= self.parts.len());
        (0..len)
            .map(|i| {
                let part = self.parts.get(i).copied().unwrap_or(0) as u64;
                part + (len - 1 - i) as u64
            })
            .collect()
    }

    /// The p-core and the number of p-hooks removed to reach it.
    ///
    /// Beads of the beta-set are slid down their runners modulo `p`; the
    /// result is independent of any removal order.
    pub fn p_core_and_weight(&self, p: u32) -> (Partition, u32) {
        assert!(p >= 2, "p_core_and_weight requires p >= 2");
        let len = self.parts.len();
        if len == 0 {
            return (Partition::empty(), 0);
        }
        let beta = self.beta_set(len);
        // Count beads per runner, then refill each runner from the bottom.
        let mut runner_counts = vec![0usize; p as usize];
        for &b in &beta {
            runner_counts[(b % p as u64) as usize] += 1;
        }
        let mut slid: Vec<u64> = Vec::with_capacity(len);
        for (r, &count) in runner_counts.iter().enumerate() {
            for k in 0..count {
                slid.push(r as u64 + (k as u64) * p as u64);
            }
        }
        slid.sort_unstable_by(|a, b| b.cmp(a));
        let mut parts = Vec::new();
        for (i, &b) in slid.iter().enumerate() {
            let part = b - (len - 1 - i) as u64;
            if part > 0 {
                parts.push(part as u32);
            }
        }
        let core = Partition { parts };
        let weight = (self.size() - core.size()) / p;
        (core, weight)
    }

    /// Multiset union of parts (diagram concatenation).
    pub fn concat(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Removes `count` copies of the part `i`; errors when not present.
    pub fn remove_copies(&self, i: u32, count: u32) -> Result<Partition> {
        if self.multiplicity(i) < count {
            return Err(Error::Invalid(format!(
                "partition {self} has fewer than {count} parts equal to {i}"
            )));
        }
        let mut parts = Vec::with_capacity(self.parts.len());
        let mut to_skip = count;
        for &x in &self.parts {
            if x == i && to_skip > 0 {
                to_skip -= 1;
            } else {
                parts.push(x);
            }
        }
        Ok(Partition { parts })
    }

    /// Exponent notation, e.g. `(1^9 3 5^3)` prints as `"1^9 3 5^3"`.
    pub fn exponent_notation(&self) -> String {
        if self.parts.is_empty() {
            return "0".to_string();
        }
        self.multiplicities()
            .iter()
            .map(|(&i, &m)| if m == 1 { format!("{i}") } else { format!("{i}^{m}") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// JSON form: array of parts in decreasing order.
    pub fn to_json(&self) -> Value {
        Value::Array(self.parts.iter().map(|&x| json!(x)).collect())
    }

    pub fn from_json(value: &Value) -> Result<Partition> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Invalid("partition must be a JSON array".into()))?;
        let mut parts = Vec::with_capacity(arr.len());
        for item in arr {
            let x = item
                .as_u64()
                .filter(|&x| x > 0 && x <= u32::MAX as u64)
                .ok_or_else(|| Error::Invalid(format!("bad part {item}")))?;
            parts.push(x as u32);
        }
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{part}")?;
        }
        write!(f, ")")
    }
}

/// An ordered tuple of partitions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multipartition {
    components: Vec<Partition>,
}

impl Multipartition {
    pub fn new(components: Vec<Partition>) -> Self {
        Multipartition { components }
    }

    pub fn components(&self) -> &[Partition] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Total size, the sum over components.
    pub fn size(&self) -> u32 {
        self.components.iter().map(Partition::size).sum()
    }

    /// The last component, the one all weight evaluations read.
    pub fn last(&self) -> Option<&Partition> {
        self.components.last()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.components.iter().map(Partition::to_json).collect())
    }

    pub fn from_json(value: &Value) -> Result<Multipartition> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Invalid("multipartition must be a JSON array".into()))?;
        let components = arr.iter().map(Partition::from_json).collect::<Result<_>>()?;
        Ok(Multipartition { components })
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, comp) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{comp}")?;
        }
        write!(f, ")")
    }
}

/// A block label of the Cartan matrix: a p-core together with a weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockIndex {
    pub p: u32,
    pub core: Partition,
    pub weight: u32,
}

impl BlockIndex {
    pub fn new(p: u32, core: Partition, weight: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidModulus(p));
        }
        if core.has_p_hook(p) {
            return Err(Error::Invalid(format!("{core} is not a {p}-core")));
        }
        Ok(BlockIndex { p, core, weight })
    }

    /// Size of the ambient `n` this block lives in.
    pub fn ambient_size(&self) -> u32 {
        self.core.size() + self.p * self.weight
    }
}

/// An element of `Q_p(n)`: a `(p-1)`-multipartition together with a p-core.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QIndex {
    pub p: u32,
    pub mu: Multipartition,
    pub chi: Partition,
}

impl QIndex {
    pub fn new(p: u32, mu: Multipartition, chi: Partition) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidModulus(p));
        }
        if mu.len() != (p - 1) as usize {
            return Err(Error::Invalid(format!(
                "expected a {}-multipartition, got {} components",
                p - 1,
                mu.len()
            )));
        }
        if chi.has_p_hook(p) {
            return Err(Error::Invalid(format!("{chi} is not a {p}-core")));
        }
        Ok(QIndex { p, mu, chi })
    }

    /// The ambient `n`, i.e. `p * |mu| + |chi|`.
    pub fn ambient_size(&self) -> u32 {
        self.p * self.mu.size() + self.chi.size()
    }

    pub fn to_json(&self) -> Value {
        json!({ "mu": self.mu.to_json(), "chi": self.chi.to_json() })
    }
}

impl fmt::Display for QIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.mu, self.chi)
    }
}

// ---------------------------------------------------------------------------
// Enumerations
// ---------------------------------------------------------------------------

/// All partitions of `n` in reverse-lexicographic order on part lists.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    gen_partitions(n, n, &mut prefix, &mut out);
    out
}

fn gen_partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if n == 0 {
        out.push(Partition { parts: prefix.clone() });
        return;
    }
    let mut part = n.min(max);
    while part >= 1 {
        prefix.push(part);
        gen_partitions(n - part, part, prefix, out);
        prefix.pop();
        part -= 1;
    }
}

/// The p-regular partitions of `n` (every multiplicity below `p`).
pub fn enumerate_p_regular(n: u32, p: u32) -> Result<Vec<Partition>> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    Ok(enumerate_partitions(n)
        .into_iter()
        .filter(|part| part.is_p_regular(p))
        .collect())
}

/// The p-class-regular partitions of `n` (no part divisible by `p`).
pub fn enumerate_p_class_regular(n: u32, p: u32) -> Result<Vec<Partition>> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    Ok(enumerate_partitions(n)
        .into_iter()
        .filter(|part| part.is_p_class_regular(p))
        .collect())
}

/// All p-cores of size `d`.
pub fn enumerate_p_cores(d: u32, p: u32) -> Result<Vec<Partition>> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    Ok(enumerate_partitions(d)
        .into_iter()
        .filter(|part| part.p_core_and_weight(p).1 == 0)
        .collect())
}

/// Number of p-cores of size `d`.
pub fn count_p_cores(d: u32, p: u32) -> Result<usize> {
    Ok(enumerate_p_cores(d, p)?.len())
}

/// All `r`-tuples of partitions with total size `d`, ordered by the size of
/// the first component descending, then recursively.
pub fn enumerate_multipartitions(d: u32, r: u32) -> Vec<Multipartition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    gen_multipartitions(d, r, &mut prefix, &mut out);
    out
}

fn gen_multipartitions(d: u32, r: u32, prefix: &mut Vec<Partition>, out: &mut Vec<Multipartition>) {
    if r == 0 {
        if d == 0 {
            out.push(Multipartition::new(prefix.clone()));
        }
        return;
    }
    if r == 1 {
        for part in enumerate_partitions(d) {
            prefix.push(part);
            out.push(Multipartition::new(prefix.clone()));
            prefix.pop();
        }
        return;
    }
    for k in (0..=d).rev() {
        for part in enumerate_partitions(k) {
            prefix.push(part);
            gen_multipartitions(d - k, r - 1, prefix, out);
            prefix.pop();
        }
    }
}

/// Number of `r`-multipartitions of `d`, computed from enumerated partition
/// counts by marginalizing over the size of each component in turn.
pub fn multipartition_count(d: u32, r: u32) -> u64 {
    let p_counts: Vec<u64> = (0..=d).map(|k| enumerate_partitions(k).len() as u64).collect();
    let mut counts = vec![0u64; d as usize + 1];
    counts[0] = 1;
    for _ in 0..r {
        let mut next = vec![0u64; d as usize + 1];
        for (total, value) in next.iter_mut().enumerate() {
            for k in 0..=total {
                *value += p_counts[k] * counts[total - k];
            }
        }
        counts = next;
    }
    counts[d as usize]
}

/// The index set `Q_p(n)`: for each `0 <= d <= n/p`, all pairs of a
/// `(p-1)`-multipartition of `d` with a p-core of `n - pd`.
pub fn enumerate_q(n: u32, p: u32) -> Result<Vec<QIndex>> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    let mut out = Vec::new();
    for d in 0..=(n / p) {
        let cores = enumerate_p_cores(n - p * d, p)?;
        if cores.is_empty() {
            continue;
        }
        for mu in enumerate_multipartitions(d, p - 1) {
            for chi in &cores {
                out.push(QIndex { p, mu: mu.clone(), chi: chi.clone() });
            }
        }
    }
    Ok(out)
}

/// Divides every part multiplicity by `p` (rounding down); the fiber map
/// from p-class-regular partitions of `n` to those of size at most `n/p`.
pub fn fold_multiplicities(lambda: &Partition, p: u32) -> Result<Partition> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    if !lambda.is_p_class_regular(p) {
        return Err(Error::NotClassRegular(lambda.to_string(), p));
    }
    let mut mult = BTreeMap::new();
    for (i, m) in lambda.multiplicities() {
        if m / p > 0 {
            mult.insert(i, m / p);
        }
    }
    Ok(Partition::from_multiplicities(&mult))
}

/// Deletes all parts divisible by `p` from the last component of the
/// multipartition; the companion fiber map on `Q_p(n)`.
pub fn strip_multiples(qi: &QIndex) -> Partition {
    let last = qi.mu.last().cloned().unwrap_or_default();
    let parts = last
        .parts()
        .iter()
        .copied()
        .filter(|&x| x % qi.p != 0)
        .collect();
    Partition { parts }
}

//! The level-1 q-Fock space and the LLT canonical basis algorithm.
//!
//! Basis vectors of the Fock space are partitions; the lowering operator
//! `f_i` adds one box of residue `i`, weighted by a power of `q` counting
//! addable minus removable `i`-boxes strictly above the new box. Divided
//! powers `f_i^{(a)}` add `a` boxes at once through the closed form, so all
//! coefficients stay in `Z[q, q^-1]` and no division ever happens.
//!
//! For each p-regular `mu`, applying the divided powers along the ladders
//! of `mu` to the vacuum gives a bar-invariant first approximation
//! `A(mu) = mu + (lower terms)`; subtracting bar-symmetric integer
//! multiples of previously computed canonical vectors pushes every
//! off-diagonal coefficient into `q Z[q]`. The columns assembled this way
//! form the graded decomposition matrix `D_n(q)`, and
//! `C_n(q) = D^t D` is the graded Cartan matrix.
//!
//! Working coefficients are Laurent polynomials because intermediate bar
//! corrections can touch negative powers; the finished columns are genuine
//! polynomials and are stored as [`QPoly`].

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::partitions::{enumerate_p_regular, enumerate_partitions, BlockIndex, Partition};
use crate::qpoly::{LaurentPoly, QPoly};
use crate::{Error, Result};

/// Version tag of the on-disk decomposition matrix format.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Residue of the box in the given (1-indexed) row and column.
pub fn residue(row: u32, col: u32, p: u32) -> u32 {
    assert!(p >= 2 && row >= 1 && col >= 1);
    (col as i64 - row as i64).rem_euclid(p as i64) as u32
}

/// Boxes that can be added to the diagram, as `(row, col)` pairs with rows
/// ascending; includes the box opening a new row.
fn addable_boxes(lambda: &Partition) -> Vec<(u32, u32)> {
    let parts = lambda.parts();
    let mut out = Vec::with_capacity(parts.len() + 1);
    for (idx, &part) in parts.iter().enumerate() {
        if idx == 0 || parts[idx - 1] > part {
            out.push((idx as u32 + 1, part + 1));
        }
    }
    out.push((parts.len() as u32 + 1, 1));
    out
}

/// Boxes that can be removed, as `(row, col)` pairs with rows ascending.
fn removable_boxes(lambda: &Partition) -> Vec<(u32, u32)> {
    let parts = lambda.parts();
    let mut out = Vec::new();
    for (idx, &part) in parts.iter().enumerate() {
        let below = parts.get(idx + 1).copied().unwrap_or(0);
        if part > below {
            out.push((idx as u32 + 1, part));
        }
    }
    out
}

/// The partition with the boxes at the given rows grown by one. Each row
/// must hold an addable box of `lambda`.
fn with_boxes(lambda: &Partition, rows: &[u32]) -> Partition {
    let mut parts: Vec<u32> = lambda.parts().to_vec();
    for &row in rows {
        let idx = row as usize - 1;
        if idx == parts.len() {
            parts.push(1);
        } else {
            parts[idx] += 1;
        }
    }
    Partition::new(parts).expect("adding addable boxes keeps a partition")
}

/// An element of the Fock space restricted to one size: a finite sum of
/// partitions with Laurent polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<Partition, LaurentPoly>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector { terms: BTreeMap::new() }
    }

    /// The vacuum vector: the empty partition with coefficient 1.
    pub fn vacuum() -> Self {
        Self::basis(Partition::empty())
    }

    pub fn basis(lambda: Partition) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(lambda, LaurentPoly::one());
        FockVector { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lambda: &Partition) -> LaurentPoly {
        self.terms.get(lambda).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &LaurentPoly)> {
        self.terms.iter()
    }

    fn add_term(&mut self, lambda: Partition, coeff: LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(lambda.clone()).or_insert_with(LaurentPoly::zero);
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    /// `self -= factor * other`.
    fn sub_scaled(&mut self, factor: &LaurentPoly, other: &FockVector) {
        let minus_one = BigRational::from(BigInt::from(-1));
        for (lambda, coeff) in other.terms.clone() {
            let delta = factor.mul(&coeff).scale(&minus_one);
            self.add_term(lambda, delta);
        }
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (lambda, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff}){lambda}")?;
        }
        Ok(())
    }
}

/// Applies the lowering operator `f_i`, adding one box of residue `i` in
/// all ways: the box at `(r, c)` is weighted `q^N` with `N` the number of
/// addable `i`-boxes strictly above row `r` minus the number of removable
/// `i`-boxes strictly above row `r`.
pub fn apply_f(v: &FockVector, i: u32, p: u32) -> FockVector {
    apply_f_divided(v, i, 1, p)
}

/// The divided power `f_i^{(a)}`: adds `a` boxes of residue `i` at once.
/// For a set `S` of added boxes the exponent is
/// `sum_{box in S} N(box) - a(a-1)/2`, with `N` as in [`apply_f`].
pub fn apply_f_divided(v: &FockVector, i: u32, a: u32, p: u32) -> FockVector {
    assert!(p >= 2 && i < p, "residue must satisfy 0 <= i < p");
    if a == 0 {
        return v.clone();
    }
    let mut result = FockVector::zero();
    for (lambda, coeff) in v.terms() {
        let addable: Vec<(u32, u32)> = addable_boxes(lambda)
            .into_iter()
            .filter(|&(r, c)| residue(r, c, p) == i)
            .collect();
        if addable.len() < a as usize {
            continue;
        }
        let removable: Vec<u32> = removable_boxes(lambda)
            .into_iter()
            .filter(|&(r, c)| residue(r, c, p) == i)
            .map(|(r, _)| r)
            .collect();
        // N(box at row r) relative to the original lambda
        let stat = |row: u32| -> i64 {
            let above_addable = addable.iter().filter(|&&(r, _)| r < row).count() as i64;
            let above_removable = removable.iter().filter(|&&r| r < row).count() as i64;
            above_addable - above_removable
        };
        for subset in combinations(addable.len(), a as usize) {
            let rows: Vec<u32> = subset.iter().map(|&idx| addable[idx].0).collect();
            let n_total: i64 = rows.iter().map(|&r| stat(r)).sum();
            let exponent = n_total - (a as i64 * (a as i64 - 1)) / 2;
            let mu = with_boxes(lambda, &rows);
            result.add_term(mu, coeff.mul(&LaurentPoly::monomial(exponent, BigRational::one())));
        }
    }
    result
}

/// All size-`k` index subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // advance to the next combination
        let mut i = k;
        while i > 0 && current[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        current[i - 1] += 1;
        for j in i..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// The ladder sequence of a p-regular partition: for each ladder (read in
/// increasing ladder number), the common residue of its boxes and how many
/// boxes of `mu` lie on it. Applying the divided powers in this order to
/// the vacuum yields the first approximation `A(mu)`.
pub fn ladder_sequence(mu: &Partition, p: u32) -> Result<Vec<(u32, u32)>> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    if !mu.is_p_regular(p) {
        return Err(Error::NotRegular(mu.to_string(), p));
    }
    // box (r, c) lies on ladder r + (p-1)(c-1)
    let mut ladders: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    for (idx, &part) in mu.parts().iter().enumerate() {
        let r = idx as u32 + 1;
        for c in 1..=part {
            let ladder = r as u64 + (p as u64 - 1) * (c as u64 - 1);
            let res = residue(r, c, p);
            let entry = ladders.entry(ladder).or_insert((res, 0));
            debug_assert_eq!(entry.0, res, "boxes of one ladder share a residue");
            entry.1 += 1;
        }
    }
    Ok(ladders.into_values().collect())
}

// ---------------------------------------------------------------------------
// Canonical basis and matrices
// ---------------------------------------------------------------------------

/// The graded decomposition matrix `D_n(q)`: rows indexed by all
/// partitions of `n`, columns by the p-regular ones, both in enumeration
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionMatrix {
    pub p: u32,
    pub n: u32,
    rows: Vec<Partition>,
    cols: Vec<Partition>,
    entries: Vec<Vec<QPoly>>,
}

impl DecompositionMatrix {
    pub fn rows(&self) -> &[Partition] {
        &self.rows
    }

    pub fn cols(&self) -> &[Partition] {
        &self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &QPoly {
        &self.entries[row][col]
    }

    /// The column of `mu` as a list of `(row partition, coefficient)` pairs
    /// with nonzero coefficients.
    pub fn column(&self, mu: &Partition) -> Option<Vec<(Partition, QPoly)>> {
        let col = self.cols.iter().position(|c| c == mu)?;
        Some(
            self.rows
                .iter()
                .enumerate()
                .filter(|(r, _)| !self.entries[*r][col].is_zero())
                .map(|(r, lam)| (lam.clone(), self.entries[r][col].clone()))
                .collect(),
        )
    }

    /// Cache document: row order plus the sparse columns.
    pub fn to_json(&self) -> Value {
        let mut columns = serde_json::Map::new();
        for (c, mu) in self.cols.iter().enumerate() {
            let entries: Vec<Value> = self
                .rows
                .iter()
                .enumerate()
                .filter(|(r, _)| !self.entries[*r][c].is_zero())
                .map(|(r, lam)| json!([lam.to_json(), self.entries[r][c].to_json()]))
                .collect();
            columns.insert(mu.to_json().to_string(), Value::Array(entries));
        }
        json!({
            "version": CACHE_FORMAT_VERSION,
            "p": self.p,
            "n": self.n,
            "order": self.rows.iter().map(Partition::to_json).collect::<Vec<_>>(),
            "columns": columns,
        })
    }

    pub fn from_json(value: &Value) -> Result<DecompositionMatrix> {
        let version = value.get("version").and_then(Value::as_u64);
        if version != Some(CACHE_FORMAT_VERSION as u64) {
            return Err(Error::CacheIo(format!(
                "cache format version {version:?} does not match {CACHE_FORMAT_VERSION}"
            )));
        }
        let p = value
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::CacheIo("missing p".into()))? as u32;
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::CacheIo("missing n".into()))? as u32;
        let rows: Vec<Partition> = value
            .get("order")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::CacheIo("missing row order".into()))?
            .iter()
            .map(Partition::from_json)
            .collect::<Result<_>>()?;
        let cols: Vec<Partition> = rows
            .iter()
            .filter(|lam| lam.is_p_regular(p))
            .cloned()
            .collect();
        let row_index: BTreeMap<&Partition, usize> =
            rows.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let columns = value
            .get("columns")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::CacheIo("missing columns".into()))?;
        let mut entries = vec![vec![QPoly::zero(); cols.len()]; rows.len()];
        for (c, mu) in cols.iter().enumerate() {
            let key = mu.to_json().to_string();
            let col = columns
                .get(&key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::CacheIo(format!("missing column {key}")))?;
            for pair in col {
                let items = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::CacheIo("bad column entry".into()))?;
                let lam = Partition::from_json(&items[0])?;
                let poly = QPoly::from_json(&items[1])?;
                let r = *row_index
                    .get(&lam)
                    .ok_or_else(|| Error::CacheIo(format!("unknown row {lam}")))?;
                entries[r][c] = poly;
            }
        }
        Ok(DecompositionMatrix { p, n, rows, cols, entries })
    }
}

/// Strips the bar-symmetric part of a coefficient: the unique
/// `g(q) = c_0 + sum_{k>0} c_{-k} (q^k + q^{-k})` such that the remainder
/// lies in `q Z[q]`.
fn bar_symmetric_part(c: &LaurentPoly) -> LaurentPoly {
    let mut g = LaurentPoly::monomial(0, c.coeff(0));
    for (e, v) in c.iter() {
        if e < 0 {
            g.add_to_coeff(e, v);
            g.add_to_coeff(-e, v);
        }
    }
    g
}

/// Runs the LLT algorithm and assembles the graded decomposition matrix.
///
/// Columns are processed from the bottom of the dominance-compatible
/// enumeration order upward, so every canonical vector a column needs has
/// already been computed. A failure to reach the `q Z[q]` normal form, or
/// a negative coefficient, is a convention bug and panics.
pub fn canonical_basis(n: u32, p: u32) -> Result<DecompositionMatrix> {
    if p < 2 {
        return Err(Error::InvalidModulus(p));
    }
    let rows = enumerate_partitions(n);
    let cols = enumerate_p_regular(n, p)?;
    let mut computed: BTreeMap<Partition, FockVector> = BTreeMap::new();

    for mu in cols.iter().rev() {
        let mut v = FockVector::vacuum();
        for (i, a) in ladder_sequence(mu, p)? {
            v = apply_f_divided(&v, i, a, p);
        }
        assert!(
            v.coeff(mu).is_one(),
            "first approximation of {mu} does not have unit diagonal"
        );
        // clear bar-symmetric parts against already-computed columns,
        // scanning from the most dominant side down
        for nu in &cols {
            if nu == mu {
                continue;
            }
            let correction = bar_symmetric_part(&v.coeff(nu));
            if correction.is_zero() {
                continue;
            }
            let basis_vector = computed
                .get(nu)
                .unwrap_or_else(|| panic!("column {mu} needs uncomputed canonical vector {nu}"));
            v.sub_scaled(&correction, basis_vector);
        }
        // validate the finished column
        for (lambda, coeff) in v.terms() {
            let poly = coeff
                .to_qpoly()
                .unwrap_or_else(|| panic!("non-polynomial coefficient {coeff} in column {mu}"));
            if lambda == mu {
                assert!(poly.is_one(), "diagonal of {mu} is {poly}");
            } else {
                assert!(
                    poly.in_q_ideal(),
                    "coefficient {poly} of {lambda} in column {mu} has a constant term"
                );
            }
            assert!(poly.is_nonnegative(), "negative coefficient {poly} in column {mu}");
        }
        computed.insert(mu.clone(), v);
    }

    let row_index: BTreeMap<&Partition, usize> =
        rows.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut entries = vec![vec![QPoly::zero(); cols.len()]; rows.len()];
    for (c, mu) in cols.iter().enumerate() {
        for (lambda, coeff) in computed[mu].terms() {
            let r = row_index[lambda];
            entries[r][c] = coeff.to_qpoly().expect("validated above");
        }
    }
    Ok(DecompositionMatrix { p, n, rows, cols, entries })
}

/// Cache path for one decomposition matrix.
pub fn cache_path(cache_dir: &Path, n: u32, p: u32) -> PathBuf {
    cache_dir.join("decomp").join(format!("p{p}")).join(format!("n{n}.json"))
}

/// As [`canonical_basis`], backed by a JSON disk cache keyed by `(p, n)`.
/// Unreadable or stale cache files are recomputed and rewritten.
pub fn canonical_basis_cached(n: u32, p: u32, cache_dir: &Path) -> Result<DecompositionMatrix> {
    let path = cache_path(cache_dir, n, p);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(value) = serde_json::from_str::<Value>(&text) {
            if let Ok(matrix) = DecompositionMatrix::from_json(&value) {
                if matrix.n == n && matrix.p == p {
                    return Ok(matrix);
                }
            }
        }
    }
    let matrix = canonical_basis(n, p)?;
    let parent = path.parent().expect("cache path has a parent");
    fs::create_dir_all(parent).map_err(|e| Error::CacheIo(e.to_string()))?;
    let doc = serde_json::to_string_pretty(&matrix.to_json())
        .map_err(|e| Error::CacheIo(e.to_string()))?;
    // write-then-rename so concurrent writers never expose partial files
    let staging = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&staging, doc).map_err(|e| Error::CacheIo(e.to_string()))?;
    fs::rename(&staging, &path).map_err(|e| Error::CacheIo(e.to_string()))?;
    Ok(matrix)
}

/// The graded Cartan matrix `C_n(q)`, symmetric with rows and columns
/// labelled by the p-regular partitions of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCartan {
    pub p: u32,
    pub n: u32,
    labels: Vec<Partition>,
    entries: Vec<Vec<QPoly>>,
}

impl GradedCartan {
    pub fn labels(&self) -> &[Partition] {
        &self.labels
    }

    pub fn entries(&self) -> &[Vec<QPoly>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &QPoly {
        &self.entries[row][col]
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Exact determinant.
    pub fn det(&self) -> Result<QPoly> {
        det_exact(&self.entries)
    }

    /// The matrix specialized at `q = 1`, over the integers.
    pub fn eval_one(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(QPoly::eval_one).collect())
            .collect()
    }

    /// True when the matrix at `q = 0` is the identity.
    pub fn is_identity_at_zero(&self) -> bool {
        self.entries.iter().enumerate().all(|(r, row)| {
            row.iter().enumerate().all(|(c, e)| {
                let expected = if r == c { BigInt::one() } else { BigInt::zero() };
                e.eval_zero() == expected
            })
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "n": self.n,
            "labels": self.labels.iter().map(Partition::to_json).collect::<Vec<_>>(),
            "entries": self
                .entries
                .iter()
                .map(|row| Value::Array(row.iter().map(QPoly::to_json).collect()))
                .collect::<Vec<_>>(),
        })
    }
}

/// Forms `C = D^t D` exactly.
pub fn cartan_from(d: &DecompositionMatrix) -> GradedCartan {
    let cols = d.cols().to_vec();
    let size = cols.len();
    let mut entries = vec![vec![QPoly::zero(); size]; size];
    for a in 0..size {
        for b in a..size {
            let mut acc = QPoly::zero();
            for r in 0..d.rows().len() {
                let left = d.entry(r, a);
                if left.is_zero() {
                    continue;
                }
                let right = d.entry(r, b);
                if right.is_zero() {
                    continue;
                }
                acc = acc.add(&left.mul(right));
            }
            entries[a][b] = acc.clone();
            entries[b][a] = acc;
        }
    }
    GradedCartan { p: d.p, n: d.n, labels: cols, entries }
}

/// Computes the graded Cartan matrix from scratch.
pub fn cartan(n: u32, p: u32) -> Result<GradedCartan> {
    Ok(cartan_from(&canonical_basis(n, p)?))
}

/// As [`cartan`], using the decomposition-matrix disk cache.
pub fn cartan_cached(n: u32, p: u32, cache_dir: &Path) -> Result<GradedCartan> {
    Ok(cartan_from(&canonical_basis_cached(n, p, cache_dir)?))
}

/// Splits the Cartan matrix into its blocks, labelled by p-cores, ordered
/// by ascending weight (then by core). Entries joining distinct blocks are
/// asserted to vanish.
pub fn cartan_blocks(c: &GradedCartan) -> Vec<(BlockIndex, GradedCartan)> {
    let mut groups: BTreeMap<Partition, Vec<usize>> = BTreeMap::new();
    for (idx, mu) in c.labels.iter().enumerate() {
        let (core, _) = mu.p_core_and_weight(c.p);
        groups.entry(core).or_default().push(idx);
    }
    // cross-block entries must vanish
    for (core_a, idx_a) in &groups {
        for (core_b, idx_b) in &groups {
            if core_a == core_b {
                continue;
            }
            for &a in idx_a {
                for &b in idx_b {
                    assert!(
                        c.entries[a][b].is_zero(),
                        "nonzero Cartan entry between blocks {core_a} and {core_b}"
                    );
                }
            }
        }
    }
    let mut blocks: Vec<(BlockIndex, GradedCartan)> = groups
        .into_iter()
        .map(|(core, indices)| {
            let weight = (c.n - core.size()) / c.p;
            let labels: Vec<Partition> =
                indices.iter().map(|&i| c.labels[i].clone()).collect();
            let entries: Vec<Vec<QPoly>> = indices
                .iter()
                .map(|&r| indices.iter().map(|&s| c.entries[r][s].clone()).collect())
                .collect();
            let index = BlockIndex::new(c.p, core, weight).expect("cores are p-cores");
            (index, GradedCartan { p: c.p, n: c.n, labels, entries })
        })
        .collect();
    blocks.sort_by(|(a, _), (b, _)| a.weight.cmp(&b.weight).then_with(|| a.core.cmp(&b.core)));
    blocks
}

/// Restricts the Cartan matrix to the block with the given label.
pub fn cartan_block(c: &GradedCartan, b: &BlockIndex) -> Result<GradedCartan> {
    if b.p != c.p || b.ambient_size() != c.n {
        return Err(Error::UnknownBlock {
            n: c.n,
            core: b.core.to_string(),
            weight: b.weight,
        });
    }
    for (index, block) in cartan_blocks(c) {
        if index.core == b.core && index.weight == b.weight {
            return Ok(block);
        }
    }
    Err(Error::UnknownBlock { n: c.n, core: b.core.to_string(), weight: b.weight })
}

// ---------------------------------------------------------------------------
// Exact determinants
// ---------------------------------------------------------------------------

/// Exact determinant of a square matrix of integer polynomials by
/// fraction-free (Bareiss) elimination. The matrix is first split into the
/// connected components of its nonzero pattern, which keeps intermediate
/// degrees proportional to the component size; every interior division is
/// checked exact.
pub fn det_exact(m: &[Vec<QPoly>]) -> Result<QPoly> {
    let size = m.len();
    for row in m {
        if row.len() != size {
            return Err(Error::NotSquare { rows: size, cols: row.len() });
        }
    }
    if size == 0 {
        return Ok(QPoly::one());
    }
    // connected components of the support graph
    let mut component = vec![usize::MAX; size];
    let mut count = 0;
    for start in 0..size {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = count;
        while let Some(v) = stack.pop() {
            for w in 0..size {
                if component[w] == usize::MAX && (!m[v][w].is_zero() || !m[w][v].is_zero()) {
                    component[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    let mut det = QPoly::one();
    for comp in 0..count {
        let indices: Vec<usize> = (0..size).filter(|&i| component[i] == comp).collect();
        let sub: Vec<Vec<QPoly>> = indices
            .iter()
            .map(|&r| indices.iter().map(|&c| m[r][c].clone()).collect())
            .collect();
        det = det.mul(&bareiss(sub));
        if det.is_zero() {
            return Ok(det);
        }
    }
    Ok(det)
}

fn bareiss(mut m: Vec<Vec<QPoly>>) -> QPoly {
    let size = m.len();
    let mut previous = QPoly::one();
    let mut negate = false;
    for k in 0..size {
        // pick the nonzero pivot of least degree in column k
        let pivot_row = (k..size)
            .filter(|&r| !m[r][k].is_zero())
            .min_by_key(|&r| m[r][k].degree().unwrap_or(0));
        let Some(pivot_row) = pivot_row else {
            return QPoly::zero();
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            negate = !negate;
        }
        if k == size - 1 {
            break;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..size {
            for j in k + 1..size {
                let numerator = pivot.mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = numerator.div_exact(&previous);
            }
            m[i][k] = QPoly::zero();
        }
        previous = pivot;
    }
    let det = m[size - 1][size - 1].clone();
    if negate {
        QPoly::zero().sub(&det)
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinants::delta;
    use crate::qpoly::q_integer;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn qmono(exp: i64) -> LaurentPoly {
        LaurentPoly::monomial(exp, BigRational::one())
    }

    #[test]
    fn residues() {
        assert_eq!(residue(1, 1, 2), 0);
        assert_eq!(residue(2, 1, 2), 1);
        assert_eq!(residue(1, 4, 3), 0);
    }

    #[test]
    fn box_lists() {
        assert_eq!(addable_boxes(&Partition::empty()), vec![(1, 1)]);
        assert_eq!(addable_boxes(&pt(&[2, 2, 1])), vec![(1, 3), (3, 2), (4, 1)]);
        assert_eq!(removable_boxes(&pt(&[2, 2, 1])), vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn combination_enumeration() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(1, 2).is_empty());
        assert_eq!(combinations(5, 3).len(), 10);
    }

    #[test]
    fn lowering_on_vacuum_and_single_box() {
        let v = apply_f(&FockVector::vacuum(), 0, 2);
        assert_eq!(v.coeff(&pt(&[1])), qmono(0));
        assert_eq!(v.terms().count(), 1);

        let w = apply_f(&v, 1, 2);
        assert_eq!(w.coeff(&pt(&[2])), qmono(0));
        assert_eq!(w.coeff(&pt(&[1, 1])), qmono(1));
    }

    #[test]
    fn ladder_sequences() {
        assert_eq!(ladder_sequence(&pt(&[1]), 2).unwrap(), vec![(0, 1)]);
        assert_eq!(ladder_sequence(&pt(&[2]), 2).unwrap(), vec![(0, 1), (1, 1)]);
        assert_eq!(ladder_sequence(&pt(&[2, 1]), 2).unwrap(), vec![(0, 1), (1, 2)]);
        assert!(ladder_sequence(&pt(&[1, 1]), 2).is_err());
    }

    #[test]
    fn divided_power_reaches_column() {
        // f_1^{(2)} applied to the single box gives (2,1) with coefficient 1
        let v = apply_f(&FockVector::vacuum(), 0, 2);
        let w = apply_f_divided(&v, 1, 2, 2);
        assert_eq!(w.coeff(&pt(&[2, 1])), qmono(0));
        assert_eq!(w.terms().count(), 1);
    }

    #[test]
    fn decomposition_matrix_n2_p2() {
        let d = canonical_basis(2, 2).unwrap();
        assert_eq!(d.cols(), &[pt(&[2])]);
        let column = d.column(&pt(&[2])).unwrap();
        assert_eq!(
            column,
            vec![
                (pt(&[2]), QPoly::one()),
                (pt(&[1, 1]), QPoly::monomial(1, BigInt::one())),
            ]
        );
    }

    #[test]
    fn decomposition_matrix_n4_p2() {
        let d = canonical_basis(4, 2).unwrap();
        let q = QPoly::monomial(1, BigInt::one());
        let q2 = QPoly::monomial(2, BigInt::one());
        assert_eq!(
            d.column(&pt(&[4])).unwrap(),
            vec![
                (pt(&[4]), QPoly::one()),
                (pt(&[3, 1]), q.clone()),
                (pt(&[2, 1, 1]), q.clone()),
                (pt(&[1, 1, 1, 1]), q2.clone()),
            ]
        );
        assert_eq!(
            d.column(&pt(&[3, 1])).unwrap(),
            vec![
                (pt(&[3, 1]), QPoly::one()),
                (pt(&[2, 2]), q),
                (pt(&[2, 1, 1]), q2),
            ]
        );
    }

    #[test]
    fn empty_and_single_box_cases() {
        let d0 = canonical_basis(0, 2).unwrap();
        assert_eq!(d0.cols(), &[Partition::empty()]);
        assert!(d0.entry(0, 0).is_one());
        let d1 = canonical_basis(1, 3).unwrap();
        assert_eq!(d1.cols(), &[pt(&[1])]);
        assert!(d1.entry(0, 0).is_one());
    }

    #[test]
    fn cartan_small_values() {
        let c2 = cartan(2, 2).unwrap();
        assert_eq!(c2.size(), 1);
        assert_eq!(c2.entry(0, 0), &q_integer(1, 2));

        let c3 = cartan(3, 2).unwrap();
        assert_eq!(c3.det().unwrap(), delta(3, 2).unwrap().expand());
        assert!(c3.is_identity_at_zero());
    }

    #[test]
    fn cartan_matches_delta_small() {
        for (n, p) in [(4u32, 2u32), (5, 2), (6, 2), (4, 3), (5, 3), (6, 3)] {
            let c = cartan(n, p).unwrap();
            assert!(c.is_identity_at_zero(), "C_{n}(0) = E at p={p}");
            assert_eq!(
                c.det().unwrap(),
                delta(n, p).unwrap().expand(),
                "det C_{n}(q) at p={p}"
            );
        }
    }

    #[test]
    fn column_invariants_small() {
        for (n, p) in [(6u32, 2u32), (6, 3)] {
            let d = canonical_basis(n, p).unwrap();
            for (c, mu) in d.cols().iter().enumerate() {
                let (mu_core, _) = mu.p_core_and_weight(p);
                for (r, lam) in d.rows().iter().enumerate() {
                    let e = d.entry(r, c);
                    if lam == mu {
                        assert!(e.is_one());
                    } else {
                        assert!(e.in_q_ideal(), "entry ({lam},{mu}) = {e}");
                    }
                    if !e.is_zero() {
                        assert_eq!(lam.p_core_and_weight(p).0, mu_core, "core support");
                    }
                }
            }
        }
    }

    #[test]
    fn blocks_of_c5_at_p2() {
        let c = cartan(5, 2).unwrap();
        let blocks = cartan_blocks(&c);
        // cores of 5 - 2d: only d = 1 (core (2,1)) and d = 2 (core (1)) occur
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].0.weight, 1);
        assert_eq!(blocks[0].0.core, pt(&[2, 1]));
        assert_eq!(blocks[0].1.size(), 1);
        assert_eq!(blocks[1].0.weight, 2);
        assert_eq!(blocks[1].0.core, pt(&[1]));
        assert_eq!(blocks[1].1.size(), 2);
        // block sizes equal the multipartition counts
        for (index, block) in &blocks {
            assert_eq!(
                block.size() as u64,
                crate::partitions::multipartition_count(index.weight, c.p - 1)
            );
        }
        // restriction by label works and unknown labels are rejected
        let b = cartan_block(&c, &blocks[1].0).unwrap();
        assert_eq!(b.size(), 2);
        assert!(BlockIndex::new(2, pt(&[3]), 3).is_err(), "(3) has a 2-hook");
        let bogus = BlockIndex::new(2, pt(&[2, 1]), 3).unwrap();
        assert!(cartan_block(&c, &bogus).is_err());
    }

    #[test]
    fn determinant_basics() {
        let one = QPoly::one();
        let zero = QPoly::zero();
        let id = vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ];
        assert!(det_exact(&id).unwrap().is_one());
        assert_eq!(det_exact(&[vec![q_integer(1, 2)]]).unwrap(), q_integer(1, 2));
        // swap needed: [[0, 1], [1, 0]] has determinant -1
        let swap = vec![vec![zero.clone(), one.clone()], vec![one.clone(), zero.clone()]];
        assert_eq!(det_exact(&swap).unwrap(), QPoly::constant(-1));
        // singular
        let sing = vec![vec![one.clone(), one.clone()], vec![one.clone(), one.clone()]];
        assert!(det_exact(&sing).unwrap().is_zero());
        // non-square rejected
        assert!(det_exact(&[vec![one.clone()], vec![one.clone()]]).is_err());
        // determinant of the n=4 Cartan matrix matches the product formula
        let c4 = cartan(4, 2).unwrap();
        assert_eq!(c4.det().unwrap(), delta(4, 2).unwrap().expand());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        // dense 3x3 with polynomial entries
        let e = |k: usize| QPoly::monomial(k, BigInt::from(k as i64 + 1)).add(&QPoly::one());
        let m = vec![
            vec![e(0), e(1), e(2)],
            vec![e(3), e(4), e(5)],
            vec![e(2), e(1), e(3)],
        ];
        fn cofactor(m: &[Vec<QPoly>]) -> QPoly {
            let n = m.len();
            if n == 1 {
                return m[0][0].clone();
            }
            let mut acc = QPoly::zero();
            for c in 0..n {
                let minor: Vec<Vec<QPoly>> = (1..n)
                    .map(|r| (0..n).filter(|&x| x != c).map(|x| m[r][x].clone()).collect())
                    .collect();
                let term = m[0][c].mul(&cofactor(&minor));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        assert_eq!(det_exact(&m).unwrap(), cofactor(&m));
    }

    #[test]
    fn cache_round_trip_and_stability() {
        let dir = tempfile::tempdir().unwrap();
        let cold = canonical_basis_cached(6, 2, dir.path()).unwrap();
        assert!(cache_path(dir.path(), 6, 2).exists());
        let warm = canonical_basis_cached(6, 2, dir.path()).unwrap();
        assert_eq!(cold, warm);
        assert_eq!(cold, canonical_basis(6, 2).unwrap());
        // corrupt cache falls back to recomputation
        std::fs::write(cache_path(dir.path(), 6, 2), "{not json").unwrap();
        let repaired = canonical_basis_cached(6, 2, dir.path()).unwrap();
        assert_eq!(repaired, warm);
    }
}

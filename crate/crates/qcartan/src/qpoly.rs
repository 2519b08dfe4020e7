//! Exact polynomial arithmetic in the variable `q`.
//!
//! Three carriers live here:
//!
//! - [`QPoly`]: integer-coefficient polynomials with non-negative exponents,
//!   stored sparsely. Entries of decomposition and Cartan matrices are
//!   `QPoly` values.
//! - [`LaurentPoly`]: rational-coefficient Laurent polynomials (exponents
//!   may be negative). The units of this ring are exactly `c * q^k` with
//!   `c` a nonzero rational; Smith normal form is computed over it.
//! - [`ProductForm`]: an unexpanded product `prod_l [p]_l^{e_l}` of
//!   q-integers, kept as its exponent map. All partition weights and
//!   determinant formulas are equalities of exponent maps, so they are
//!   compared without ever expanding; expansion is on demand.
//!
//! Invariant everywhere: zero coefficients are never stored, so the zero
//! polynomial is the empty map and structural equality is semantic equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::{Error, Result};

/// Returns the q-integer `[p]_l = 1 + q^{2l} + ... + q^{2l(p-1)}`.
///
/// It has degree `2l(p-1)` and specializes to `p` at `q = 1`.
pub fn q_integer(l: u64, p: u32) -> QPoly {
    assert!(l >= 1, "q_integer requires l >= 1");
    assert!(p >= 2, "q_integer requires p >= 2");
    let mut coeffs = BTreeMap::new();
    for t in 0..p as u64 {
        coeffs.insert((2 * l * t) as usize, BigInt::one());
    }
    QPoly { coeffs }
}

/// Number of base-p digits of `m`, i.e. `r + 1` where `p^r <= m < p^{r+1}`.
///
/// By convention `0` has zero digits, so exponents of the form
/// `o_p(floor(m/j))` silently contribute trivial factors once `j > m`.
pub fn base_p_digits(m: u64, p: u32) -> u32 {
    assert!(p >= 2, "base_p_digits requires p >= 2");
    let mut m = m;
    let mut digits = 0;
    while m > 0 {
        m /= p as u64;
        digits += 1;
    }
    digits
}

/// The graded p-part of `k`: for `k = a * p^b` with `p` not dividing `a`,
/// the product `[p]_a [p]_{ap} ... [p]_{ap^{b-1}}`.
///
/// When `p` does not divide `k` this is the empty product. At `q = 1` it
/// specializes to the ordinary p-part `p^b`.
pub fn graded_p_part(k: u64, p: u32) -> ProductForm {
    assert!(k >= 1, "graded_p_part requires k >= 1");
    assert!(p >= 2, "graded_p_part requires p >= 2");
    let mut a = k;
    let mut b = 0u32;
    while a.is_multiple_of(p as u64) {
        a /= p as u64;
        b += 1;
    }
    let mut pf = ProductForm::identity(p);
    let mut l = a;
    for _ in 0..b {
        pf.push(l, 1);
        l *= p as u64;
    }
    pf
}

/// The p-part `(k)_p = p^b` for `k = a * p^b` with `p` not dividing `a`.
pub fn p_part(k: u64, p: u32) -> BigInt {
    assert!(k >= 1 && p >= 2);
    let mut a = k;
    let mut result = BigInt::one();
    while a.is_multiple_of(p as u64) {
        a /= p as u64;
        result *= p;
    }
    result
}

// ---------------------------------------------------------------------------
// QPoly
// ---------------------------------------------------------------------------

/// Integer-coefficient polynomial in `q`, stored as a sparse exponent map.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoly {
    coeffs: BTreeMap<usize, BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exp: usize, coeff: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        QPoly { coeffs }
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, BigInt::from(c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    /// Coefficient of `q^exp` (zero when absent).
    pub fn coeff(&self, exp: usize) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn set_coeff(&mut self, exp: usize, value: BigInt) {
        if value.is_zero() {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, value);
        }
    }

    pub fn add_to_coeff(&mut self, exp: usize, value: &BigInt) {
        if value.is_zero() {
            return;
        }
        let updated = self.coeff(exp) + value;
        self.set_coeff(exp, updated);
    }

    /// Iterate `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut result = self.clone();
        for (e, c) in other.iter() {
            result.add_to_coeff(e, c);
        }
        result
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let mut result = self.clone();
        for (e, c) in other.iter() {
            result.add_to_coeff(e, &(-c));
        }
        result
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        let mut result = QPoly::zero();
        for (e1, c1) in self.iter() {
            for (e2, c2) in other.iter() {
                result.add_to_coeff(e1 + e2, &(c1 * c2));
            }
        }
        result
    }

    pub fn pow(&self, mut exp: u64) -> QPoly {
        let mut base = self.clone();
        let mut result = QPoly::one();
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

    /// Exact division; panics if `other` does not divide `self`.
    ///
    /// Used by fraction-free elimination, where divisibility is guaranteed
    /// and a failure means arithmetic corruption.
    pub fn div_exact(&self, other: &QPoly) -> QPoly {
        assert!(!other.is_zero(), "exact division by zero polynomial");
        if self.is_zero() {
            return QPoly::zero();
        }
        // Divide over the rationals, then check the quotient is integral and
        // the remainder vanishes.
        let num = LaurentPoly::from_qpoly(self);
        let den = LaurentPoly::from_qpoly(other);
        let (quot, rem) = num.divmod(&den).expect("nonzero divisor");
        assert!(rem.is_zero(), "inexact polynomial division: nonzero remainder");
        quot.to_qpoly().expect("inexact polynomial division: non-integer quotient")
    }

    /// Evaluate at `q = 1` (the sum of the coefficients).
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Evaluate at `q = 0` (the constant term).
    pub fn eval_zero(&self) -> BigInt {
        self.coeff(0)
    }

    /// True when every coefficient is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// True when the polynomial lies in `q * Z[q]` (zero constant term).
    pub fn in_q_ideal(&self) -> bool {
        self.coeff(0).is_zero()
    }

    /// Sparse JSON form: ascending list of `[exponent, coefficient]` pairs,
    /// coefficients rendered as decimal strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.iter()
                .map(|(e, c)| json!([e, c.to_string()]))
                .collect(),
        )
    }

    pub fn from_json(value: &Value) -> Result<QPoly> {
        let pairs = value
            .as_array()
            .ok_or_else(|| Error::Invalid("qpoly must be a JSON array".into()))?;
        let mut poly = QPoly::zero();
        for pair in pairs {
            let items = pair
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Invalid("qpoly entry must be [exp, coeff]".into()))?;
            let exp = items[0]
                .as_u64()
                .ok_or_else(|| Error::Invalid("qpoly exponent must be a non-negative integer".into()))?;
            let coeff = match &items[1] {
                Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| Error::Invalid(format!("bad coefficient {s:?}")))?,
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Invalid("numeric coefficient out of range; use a string".into()))?,
                other => return Err(Error::Invalid(format!("bad coefficient {other}"))),
            };
            poly.add_to_coeff(exp as usize, &coeff);
        }
        Ok(poly)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.iter() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// LaurentPoly
// ---------------------------------------------------------------------------

/// Rational-coefficient Laurent polynomial in `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    pub fn monomial(exp: i64, coeff: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_qpoly(p: &QPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in p.iter() {
            coeffs.insert(e as i64, BigRational::from(c.clone()));
        }
        LaurentPoly { coeffs }
    }

    /// Converts back to an integer polynomial; `None` if any exponent is
    /// negative or any coefficient is non-integral.
    pub fn to_qpoly(&self) -> Option<QPoly> {
        let mut poly = QPoly::zero();
        for (e, c) in &self.coeffs {
            if *e < 0 || !c.is_integer() {
                return None;
            }
            poly.set_coeff(*e as usize, c.to_integer());
        }
        Some(poly)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set_coeff(&mut self, exp: i64, value: BigRational) {
        if value.is_zero() {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, value);
        }
    }

    pub fn add_to_coeff(&mut self, exp: i64, value: &BigRational) {
        if value.is_zero() {
            return;
        }
        let updated = self.coeff(exp) + value;
        self.set_coeff(exp, updated);
    }

    /// Smallest exponent with nonzero coefficient; `None` when zero.
    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Largest exponent with nonzero coefficient; `None` when zero.
    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut result = self.clone();
        for (e, c) in other.iter() {
            result.add_to_coeff(e, c);
        }
        result
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut result = self.clone();
        for (e, c) in other.iter() {
            result.add_to_coeff(e, &(-c.clone()));
        }
        result
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut result = LaurentPoly::zero();
        for (e1, c1) in self.iter() {
            for (e2, c2) in other.iter() {
                result.add_to_coeff(e1 + e2, &(c1 * c2));
            }
        }
        result
    }

    pub fn scale(&self, c: &BigRational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        let mut result = LaurentPoly::zero();
        for (e, v) in self.iter() {
            result.set_coeff(e, v * c);
        }
        result
    }

    /// Multiply by the unit `q^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        let mut result = LaurentPoly::zero();
        for (e, v) in self.iter() {
            result.set_coeff(e + k, v.clone());
        }
        result
    }

    /// Polynomial division with remainder: `self = quot * other + rem` with
    /// `deg(rem) < deg(other)`. Both operands must have no negative
    /// exponents (clear units first); fails on a zero divisor.
    pub fn divmod(&self, other: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        assert!(
            self.min_exp().unwrap_or(0) >= 0 && other.min_exp().unwrap_or(0) >= 0,
            "divmod operates on polynomial representatives; clear q-powers first"
        );
        let dd = other.max_exp().unwrap();
        let dlead = other.coeff(dd);
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while !rem.is_zero() && rem.max_exp().unwrap() >= dd {
            let e = rem.max_exp().unwrap();
            let c = rem.coeff(e) / dlead.clone();
            let term = LaurentPoly::monomial(e - dd, c);
            rem = rem.sub(&term.mul(other));
            quot = quot.add(&term);
        }
        Ok((quot, rem))
    }

    /// True when `other` divides `self` in the Laurent ring.
    pub fn divisible_by(&self, other: &LaurentPoly) -> Result<bool> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(true);
        }
        let a = self.shift(-self.min_exp().unwrap());
        let b = other.shift(-other.min_exp().unwrap());
        let (_, rem) = a.divmod(&b)?;
        Ok(rem.is_zero())
    }

    /// Greatest common divisor up to units, in canonical associate form.
    /// The arguments may be genuine Laurent polynomials; `q^k` factors are
    /// units and never survive into the result.
    pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        if a.is_zero() {
            return Ok(b.canonical_associate());
        }
        if b.is_zero() {
            return Ok(a.canonical_associate());
        }
        let mut x = a.shift(-a.min_exp().unwrap());
        let mut y = b.shift(-b.min_exp().unwrap());
        while !y.is_zero() {
            let (_, rem) = x.divmod(&y)?;
            x = y;
            y = match rem.min_exp() {
                Some(v) => rem.shift(-v),
                None => rem,
            };
        }
        Ok(x.canonical_associate())
    }

    /// Least common multiple up to units, in canonical associate form.
    pub fn lcm(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
        let g = Self::gcd(a, b)?;
        let prod = a.mul(b);
        let cleared = prod.shift(-prod.min_exp().unwrap_or(0));
        let (quot, rem) = cleared.divmod(&g)?;
        assert!(rem.is_zero(), "gcd must divide the product");
        Ok(quot.canonical_associate())
    }

    /// The canonical associate: the unique unit multiple that is a monic
    /// polynomial with nonzero constant term. Zero maps to zero.
    pub fn canonical_associate(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let shifted = self.shift(-self.min_exp().unwrap());
        let lead = shifted.coeff(shifted.max_exp().unwrap());
        shifted.scale(&lead.recip())
    }

    /// Evaluate at `q = 1`.
    pub fn eval_one(&self) -> BigRational {
        self.coeffs.values().sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.iter()
                .map(|(e, c)| json!([e, c.to_string()]))
                .collect(),
        )
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.iter() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// ProductForm
// ---------------------------------------------------------------------------

/// An unexpanded product `prod_l [p]_l^{e_l}`, stored as its exponent map.
///
/// Exponent maps over a fixed `p` are in bijection with the polynomials
/// they expand to (the q-integer family is multiplicatively independent),
/// so structural equality is the right notion of equality; the expansion
/// test certifying this is in the test suite.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductForm {
    p: u32,
    exponents: BTreeMap<u64, u64>,
}

impl ProductForm {
    /// The empty product over base `p`.
    pub fn identity(p: u32) -> Self {
        assert!(p >= 2, "ProductForm requires p >= 2");
        ProductForm { p, exponents: BTreeMap::new() }
    }

    /// Builds `prod [p]_l^{e}` from `(l, e)` pairs (repeated `l` accumulate).
    pub fn from_factors(p: u32, factors: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut pf = ProductForm::identity(p);
        for (l, e) in factors {
            pf.push(l, e);
        }
        pf
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Exponent of `[p]_l` in the product.
    pub fn exponent(&self, l: u64) -> u64 {
        self.exponents.get(&l).copied().unwrap_or(0)
    }

    /// Iterate `(l, e_l)` pairs in ascending `l`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.exponents.iter().map(|(l, e)| (*l, *e))
    }

    /// Multiply in `[p]_l^e`; `e = 0` is a no-op.
    pub fn push(&mut self, l: u64, e: u64) {
        assert!(l >= 1, "q-integer index must be >= 1");
        if e > 0 {
            *self.exponents.entry(l).or_insert(0) += e;
        }
    }

    /// Product of two forms over the same base `p` (exponent maps add).
    pub fn try_mul(&self, other: &ProductForm) -> Result<ProductForm> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        let mut result = self.clone();
        for (l, e) in other.iter() {
            result.push(l, e);
        }
        Ok(result)
    }

    /// Expand the product exactly into an integer polynomial.
    pub fn expand(&self) -> QPoly {
        let mut result = QPoly::one();
        for (l, e) in self.iter() {
            result = result.mul(&q_integer(l, self.p).pow(e));
        }
        result
    }

    /// Degree of the expansion, computed without expanding.
    pub fn expanded_degree(&self) -> u64 {
        self.iter().map(|(l, e)| 2 * l * (self.p as u64 - 1) * e).sum()
    }

    /// Evaluate the product at a rational `q0` without expanding fully.
    pub fn specialize(&self, q0: &BigRational) -> BigRational {
        let mut result = BigRational::one();
        for (l, e) in self.iter() {
            let mut factor = BigRational::zero();
            let q2l = pow_rational(q0, 2 * l);
            let mut term = BigRational::one();
            for _ in 0..self.p {
                factor += term.clone();
                term *= q2l.clone();
            }
            result *= pow_rational(&factor, e);
        }
        result
    }

    /// Value at `q = 1`, which is `p^(sum of exponents)`.
    pub fn at_one(&self) -> BigInt {
        let total: u64 = self.iter().map(|(_, e)| e).sum();
        BigInt::from(self.p).pow(total as u32)
    }

    /// JSON form `{"p": p, "factors": {"l": e_l, ...}}`.
    pub fn to_json(&self) -> Value {
        let factors: serde_json::Map<String, Value> = self
            .iter()
            .map(|(l, e)| (l.to_string(), json!(e)))
            .collect();
        json!({ "p": self.p, "factors": factors })
    }

    pub fn from_json(value: &Value) -> Result<ProductForm> {
        let p = value
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Invalid("product form needs a p field".into()))?;
        if p < 2 {
            return Err(Error::InvalidModulus(p as u32));
        }
        let mut pf = ProductForm::identity(p as u32);
        let factors = value
            .get("factors")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Invalid("product form needs a factors object".into()))?;
        for (l, e) in factors {
            let l: u64 = l
                .parse()
                .ok()
                .filter(|&l| l >= 1)
                .ok_or_else(|| Error::Invalid(format!("bad factor index {l:?}")))?;
            let e = e
                .as_u64()
                .ok_or_else(|| Error::Invalid("factor exponent must be a non-negative integer".into()))?;
            pf.push(l, e);
        }
        Ok(pf)
    }
}

impl fmt::Display for ProductForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        for (l, e) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "[{}]_{}", self.p, l)?;
            } else {
                write!(f, "[{}]_{}^{}", self.p, l, e)?;
            }
        }
        Ok(())
    }
}

fn pow_rational(base: &BigRational, mut exp: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result *= b.clone();
        }
        exp >>= 1;
        if exp > 0 {
            b = b.clone() * b;
        }
    }
    result
}

/// Product of a sequence of product forms over base `p`.
pub fn product_of(p: u32, forms: impl IntoIterator<Item = ProductForm>) -> Result<ProductForm> {
    let mut acc = ProductForm::identity(p);
    for f in forms {
        acc = acc.try_mul(&f)?;
    }
    Ok(acc)
}

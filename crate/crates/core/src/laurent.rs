//! Exact Laurent polynomials in one variable `v` with integer coefficients.
//!
//! Values are kept in canonical sparse form: a map from exponent to a
//! nonzero [`BigInt`] coefficient. Two polynomials are equal iff their term
//! maps are identical, so derived `Eq`/`Hash` are structural.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseLaurentError {
    #[error("empty input")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * v^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds `sum c_i v^{e_i}` from `(exponent, coefficient)` pairs; repeated
    /// exponents accumulate.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    /// A polynomial in `q = v^2` given by its coefficients from `q^0` upward.
    pub fn from_q_coeffs<C: Into<BigInt> + Clone>(coeffs: &[C]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(i, c)| (2 * i as i64, c.clone().into())))
    }

    /// Coefficients in `q = v^2` from `q^0` up to the degree. `None` if any
    /// exponent is odd or negative.
    pub fn q_coeffs(&self) -> Option<Vec<BigInt>> {
        if self.is_zero() {
            return Some(Vec::new());
        }
        if self.terms.keys().any(|&e| e < 0 || e % 2 != 0) {
            return None;
        }
        let deg = self.max_exponent().unwrap() / 2;
        Some((0..=deg).map(|i| self.coeff(2 * i)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&e, x)| (e, x * c)).collect() }
    }

    /// The ring involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect() }
    }

    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Membership in `Z[v^-1]`.
    pub fn in_z_v_inv(&self) -> bool {
        self.max_exponent().is_none_or(|e| e <= 0)
    }

    /// Membership in `v^-1 Z[v^-1]`.
    pub fn in_v_inv_z_v_inv(&self) -> bool {
        self.max_exponent().is_none_or(|e| e < 0)
    }

    pub fn is_palindromic(&self) -> bool {
        self.bar() == *self
    }

    /// The bar-invariant element agreeing with `self` in all exponents `>= 0`.
    pub fn symmetrize_nonneg_part(&self) -> Self {
        let mut out = Self::zero();
        for (&e, c) in self.terms.range(0..) {
            out.add_term(e, c.clone());
            if e > 0 {
                out.add_term(-e, c.clone());
            }
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self` in
    /// `Z[v, v^-1]` or `d` is zero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let d_lo = d.min_exponent()?;
        let d_hi = d.max_exponent()?;
        let lead = &d.terms[&d_hi];
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(hi) = rem.max_exponent() {
            let lo = rem.min_exponent().unwrap();
            if hi - lo < d_hi - d_lo {
                return None;
            }
            let c = &rem.terms[&hi];
            if !(c % lead).is_zero() {
                return None;
            }
            let step = Self::monomial(c / lead, hi - d_hi);
            rem = &rem - &(&step * d);
            quot += &step;
        }
        Some(quot)
    }

    /// `v^k` for some `k` if `self` is a signed unit monomial, returning
    /// `(sign, k)`.
    pub fn as_unit_monomial(&self) -> Option<(i32, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&e, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some((1, e))
        } else if (-c).is_one() {
            Some((-1, e))
        } else {
            None
        }
    }
}

impl From<i64> for LaurentPolynomial {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

impl AddAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn add_assign(&mut self, rhs: &LaurentPolynomial) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn sub_assign(&mut self, rhs: &LaurentPolynomial) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, -c);
        }
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPolynomial> for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for LaurentPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut acc = Self::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

/// Renders as e.g. `v^-3 + 2 + v^5` or `-v^-1 - 3v^2`: ascending exponents,
/// explicit signs between terms, `0` for the zero polynomial.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            if e == 1 {
                f.write_str("v")?;
            } else {
                write!(f, "v^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({self})")
    }
}

/// Parses the [`Display`](fmt::Display) form. Whitespace is optional, and a
/// bare `-` or `+` may separate terms.
impl FromStr for LaurentPolynomial {
    type Err = ParseLaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseLaurentError::Empty);
        }
        // Split into signed terms; a `-` directly after `^` belongs to an exponent.
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') && !cur.is_empty() {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        pieces.push(cur);

        let mut out = Self::zero();
        for piece in pieces {
            let bad = || ParseLaurentError::BadTerm(piece.clone());
            let (sign, body) = match piece.as_bytes()[0] {
                b'-' => (-1, &piece[1..]),
                b'+' => (1, &piece[1..]),
                _ => (1, &piece[..]),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let (coeff, exp) = match body.find('v') {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0),
                Some(pos) => {
                    let c = if pos == 0 {
                        BigInt::one()
                    } else {
                        body[..pos].parse::<BigInt>().map_err(|_| bad())?
                    };
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
                    };
                    (c, e)
                }
            };
            out.add_term(exp, coeff * sign);
        }
        Ok(out)
    }
}

/// Shorthand for tests and table data: `lp("v^-1 + v")`.
///
/// Panics on malformed input.
pub fn lp(s: &str) -> LaurentPolynomial {
    s.parse().unwrap_or_else(|e| panic!("bad polynomial literal {s:?}: {e}"))
}

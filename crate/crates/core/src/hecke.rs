//! Iwahori–Hecke algebras, Kazhdan–Lusztig polynomials and canonical bases.
//!
//! Two normalizations are supported:
//!
//! * [`Normalization::Geometric`]: basis `T_w` with `(T_s + 1)(T_s - v²) = 0`.
//! * [`Normalization::Weighted`]: basis `𝕋_w` with
//!   `(𝕋_s + v^{-L(s)})(𝕋_s - v^{L(s)}) = 0` for a weight function `L`.
//!
//! KL polynomials are stored in `v` with even exponents, so `P(v²)` is the
//! stored value itself.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem, ElemId, Gen};
use crate::laurent::LaurentPolynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("Hecke elements have different normalizations")]
    NormalizationMismatch,
    #[error("element id {0} is outside the group")]
    ForeignElement(u32),
    #[error("invalid weight function: {0}")]
    BadWeights(String),
    #[error("generator {0} has weight 0; the canonical basis needs positive weights")]
    ZeroWeight(usize),
    #[error("support is not closed downward in Bruhat order")]
    NotBruhatClosed,
    #[error("triangular correction failed at ({0}, {1})")]
    NonTriangular(u32, u32),
    #[error("KL table invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

/// `L: W → ℕ`, additive on reduced products. Stored by generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    weights: Vec<u32>,
}

impl WeightFunction {
    /// Requires one weight per generator, equal on generators joined by an
    /// odd `m(s, s')` (they are conjugate).
    pub fn new(sys: &CoxeterSystem, weights: Vec<u32>) -> Result<Self, HeckeError> {
        if weights.len() != sys.rank() {
            return Err(HeckeError::BadWeights(format!(
                "expected {} weights, got {}",
                sys.rank(),
                weights.len()
            )));
        }
        for s in 0..sys.rank() {
            for t in 0..s {
                if sys.m(s, t) % 2 == 1 && weights[s] != weights[t] {
                    return Err(HeckeError::BadWeights(format!(
                        "generators {} and {} are conjugate but have weights {} and {}",
                        t + 1,
                        s + 1,
                        weights[t],
                        weights[s]
                    )));
                }
            }
        }
        Ok(WeightFunction { weights })
    }

    /// The split case `L = l`.
    pub fn length(sys: &CoxeterSystem) -> Self {
        WeightFunction { weights: vec![1; sys.rank()] }
    }

    pub fn weight(&self, s: Gen) -> u32 {
        self.weights[s]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// `L(w)` as the sum over the canonical reduced word.
    pub fn of(&self, sys: &CoxeterSystem, w: ElemId) -> i64 {
        self.of_word(sys.word_id(w))
    }

    pub fn of_word(&self, word: &[Gen]) -> i64 {
        word.iter().map(|&s| self.weights[s] as i64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    Geometric,
    Weighted(WeightFunction),
}

/// A finite combination `Σ c_w T_w`. No zero coefficient is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    normalization: Normalization,
    terms: BTreeMap<ElemId, LaurentPolynomial>,
}

impl HeckeElement {
    pub fn zero(normalization: Normalization) -> Self {
        HeckeElement { normalization, terms: BTreeMap::new() }
    }

    pub fn basis(normalization: Normalization, w: ElemId) -> Self {
        Self::from_terms(normalization, [(w, LaurentPolynomial::one())])
    }

    pub fn from_terms<I>(normalization: Normalization, terms: I) -> Self
    where
        I: IntoIterator<Item = (ElemId, LaurentPolynomial)>,
    {
        let mut out = Self::zero(normalization);
        for (w, c) in terms {
            out.add_term(w, &c);
        }
        out
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    pub fn terms(&self) -> &BTreeMap<ElemId, LaurentPolynomial> {
        &self.terms
    }

    pub fn coeff(&self, w: ElemId) -> LaurentPolynomial {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: ElemId, c: &LaurentPolynomial) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &HeckeElement, c: &LaurentPolynomial) {
        for (&w, a) in &other.terms {
            self.add_term(w, &(a * c));
        }
    }

    pub fn scale(&self, c: &LaurentPolynomial) -> HeckeElement {
        let mut out = Self::zero(self.normalization.clone());
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        if self.normalization != other.normalization {
            return Err(HeckeError::NormalizationMismatch);
        }
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPolynomial::one());
        Ok(out)
    }

    pub fn sub(&self, other: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        if self.normalization != other.normalization {
            return Err(HeckeError::NormalizationMismatch);
        }
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPolynomial::constant(-1));
        Ok(out)
    }

    /// Relabels every basis element through `f`, keeping coefficients.
    pub fn map_basis(&self, mut f: impl FnMut(ElemId) -> ElemId) -> HeckeElement {
        let mut out = Self::zero(self.normalization.clone());
        for (&w, c) in &self.terms {
            out.add_term(f(w), c);
        }
        out
    }

    /// Renders `c_1·T_{w_1} + ...` with words from `sys`.
    pub fn display(&self, sys: &CoxeterSystem) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(&w, c)| format!("({c})T[{}]", sys.word_string_id(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Multiplication in one normalization of the Hecke algebra of `sys`.
#[derive(Clone, Debug)]
pub struct HeckeAlgebra<'a> {
    sys: &'a CoxeterSystem,
    normalization: Normalization,
}

impl<'a> HeckeAlgebra<'a> {
    pub fn geometric(sys: &'a CoxeterSystem) -> Self {
        HeckeAlgebra { sys, normalization: Normalization::Geometric }
    }

    pub fn weighted(sys: &'a CoxeterSystem, weights: WeightFunction) -> Self {
        HeckeAlgebra { sys, normalization: Normalization::Weighted(weights) }
    }

    pub fn system(&self) -> &'a CoxeterSystem {
        self.sys
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    pub fn zero(&self) -> HeckeElement {
        HeckeElement::zero(self.normalization.clone())
    }

    pub fn basis(&self, w: ElemId) -> HeckeElement {
        HeckeElement::basis(self.normalization.clone(), w)
    }

    pub fn unit(&self) -> HeckeElement {
        self.basis(ElemId::IDENTITY)
    }

    fn check(&self, h: &HeckeElement) -> Result<(), HeckeError> {
        if h.normalization != self.normalization {
            return Err(HeckeError::NormalizationMismatch);
        }
        match h.terms.keys().find(|w| w.index() >= self.sys.order()) {
            Some(w) => Err(HeckeError::ForeignElement(w.0)),
            None => Ok(()),
        }
    }

    /// The coefficient `a` in the quadratic relation `T_s² = a·T_s + b`,
    /// together with `b`.
    fn quadratic(&self, s: Gen) -> (LaurentPolynomial, LaurentPolynomial) {
        match &self.normalization {
            Normalization::Geometric => {
                (LaurentPolynomial::from_terms([(2, 1), (0, -1)]), LaurentPolynomial::v_pow(2))
            }
            Normalization::Weighted(l) => {
                let k = l.weight(s) as i64;
                (&LaurentPolynomial::v_pow(k) - &LaurentPolynomial::v_pow(-k), LaurentPolynomial::one())
            }
        }
    }

    /// `h · T_s`.
    pub fn mul_gen_right(&self, h: &HeckeElement, s: Gen) -> HeckeElement {
        let (a, b) = self.quadratic(s);
        let mut out = self.zero();
        for (&w, c) in &h.terms {
            let ws = self.sys.rmul_gen(w, s);
            if self.sys.len_id(ws) > self.sys.len_id(w) {
                out.add_term(ws, c);
            } else {
                out.add_term(w, &(c * &a));
                out.add_term(ws, &(c * &b));
            }
        }
        out
    }

    /// `T_s · h`.
    pub fn mul_gen_left(&self, s: Gen, h: &HeckeElement) -> HeckeElement {
        let (a, b) = self.quadratic(s);
        let mut out = self.zero();
        for (&w, c) in &h.terms {
            let sw = self.sys.lmul_gen(s, w);
            if self.sys.len_id(sw) > self.sys.len_id(w) {
                out.add_term(sw, c);
            } else {
                out.add_term(w, &(c * &a));
                out.add_term(sw, &(c * &b));
            }
        }
        out
    }

    /// `h · T_w`, walking a reduced word of `w`.
    pub fn mul_basis_right(&self, h: &HeckeElement, w: ElemId) -> HeckeElement {
        self.sys.word_id(w).iter().fold(h.clone(), |acc, &s| self.mul_gen_right(&acc, s))
    }

    pub fn multiply(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (&w, c) in &b.terms {
            out.add_scaled(&self.mul_basis_right(a, w), c);
        }
        Ok(out)
    }

    /// `bar(T_s) = T_s⁻¹`.
    fn bar_gen(&self, s: Gen) -> HeckeElement {
        let mut out = self.zero();
        match &self.normalization {
            Normalization::Geometric => {
                out.add_term(self.sys.rmul_gen(ElemId::IDENTITY, s), &LaurentPolynomial::v_pow(-2));
                out.add_term(ElemId::IDENTITY, &LaurentPolynomial::from_terms([(-2, 1), (0, -1)]));
            }
            Normalization::Weighted(_) => {
                let (a, _) = self.quadratic(s);
                out.add_term(self.sys.rmul_gen(ElemId::IDENTITY, s), &LaurentPolynomial::one());
                out.add_term(ElemId::IDENTITY, &-a);
            }
        }
        out
    }

    /// `bar(T_x) = T_{x⁻¹}⁻¹ = bar(T_{s_1})···bar(T_{s_k})` for a reduced word.
    pub fn bar_basis(&self, x: ElemId) -> HeckeElement {
        self.sys
            .word_id(x)
            .iter()
            .fold(self.unit(), |acc, &s| self.multiply(&acc, &self.bar_gen(s)).expect("same algebra"))
    }

    /// The ring involution with `v ↦ v⁻¹` and `T_x ↦ T_{x⁻¹}⁻¹`.
    pub fn bar_element(&self, h: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        self.check(h)?;
        let mut out = self.zero();
        for (&x, c) in &h.terms {
            out.add_scaled(&self.bar_basis(x), &c.bar());
        }
        Ok(out)
    }
}

/// Kazhdan–Lusztig polynomials `P_{y,w}` for every `y <= w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLTable {
    type_tag: String,
    /// Indexed by `w`; keyed by `y`.
    columns: Vec<BTreeMap<ElemId, LaurentPolynomial>>,
}

impl KLTable {
    /// Left recursion on `w = s·v` with `s` the smallest left descent:
    ///
    /// `P_{y,w} = q^{1-c} P_{sy,v} + q^c P_{y,v}
    ///            - Σ_{z: sz<z, y<=z<v} μ(z,v) q^{(l(w)-l(z))/2} P_{y,z}`
    ///
    /// where `c = 1` if `sy < y` and `0` otherwise.
    pub fn build(sys: &CoxeterSystem) -> KLTable {
        let lower = sys.lower_intervals();
        let n = sys.order();
        let mut columns: Vec<BTreeMap<ElemId, LaurentPolynomial>> = Vec::with_capacity(n);
        // μ(z, v) ≠ 0 entries for each v, as (z, μ).
        let mut mu_lists: Vec<Vec<(ElemId, BigInt)>> = Vec::with_capacity(n);
        for w in sys.ids() {
            let mut col = BTreeMap::new();
            if w == ElemId::IDENTITY {
                col.insert(w, LaurentPolynomial::one());
            } else {
                let s = sys.word_id(w)[0];
                let v = sys.lmul_gen(s, w);
                let lw = sys.len_id(w) as i64;
                let get = |y: ElemId, x: ElemId| columns[x.index()].get(&y);
                let relevant: Vec<(ElemId, &BigInt)> = mu_lists[v.index()]
                    .iter()
                    .filter(|(z, _)| sys.is_left_descent(s, *z))
                    .map(|(z, m)| (*z, m))
                    .collect();
                for y in lower[w.index()].iter().map(|i| ElemId(i as u32)) {
                    let sy = sys.lmul_gen(s, y);
                    let c: i64 = if sys.len_id(sy) < sys.len_id(y) { 1 } else { 0 };
                    let mut p = LaurentPolynomial::zero();
                    if let Some(a) = get(sy, v) {
                        p += &a.shift(2 * (1 - c));
                    }
                    if let Some(b) = get(y, v) {
                        p += &b.shift(2 * c);
                    }
                    for &(z, m) in &relevant {
                        if lower[z.index()].contains(y.index()) {
                            let pyz = get(y, z).expect("y <= z");
                            let k = lw - sys.len_id(z) as i64;
                            p -= &pyz.shift(k).scale(m);
                        }
                    }
                    debug_assert!(!p.is_zero());
                    col.insert(y, p);
                }
            }
            let lw = sys.len_id(w) as i64;
            let mus = col
                .iter()
                .filter_map(|(&z, p)| {
                    let d = lw - sys.len_id(z) as i64;
                    if d % 2 == 1 {
                        let m = p.coeff(d - 1);
                        (!m.is_zero()).then_some((z, m))
                    } else {
                        None
                    }
                })
                .collect();
            mu_lists.push(mus);
            columns.push(col);
        }
        KLTable { type_tag: sys.type_tag().unwrap_or("custom").to_string(), columns }
    }

    /// Rebuilds a table from explicit entries, for cache loading.
    pub fn from_entries<I>(type_tag: &str, order: usize, entries: I) -> Result<KLTable, HeckeError>
    where
        I: IntoIterator<Item = (ElemId, ElemId, LaurentPolynomial)>,
    {
        let mut columns = vec![BTreeMap::new(); order];
        for (y, w, p) in entries {
            if y.index() >= order || w.index() >= order {
                return Err(HeckeError::ForeignElement(y.0.max(w.0)));
            }
            if p.is_zero() {
                return Err(HeckeError::Invariant("stored zero polynomial".into()));
            }
            if columns[w.index()].insert(y, p).is_some() {
                return Err(HeckeError::Invariant("duplicate pair".into()));
            }
        }
        Ok(KLTable { type_tag: type_tag.to_string(), columns })
    }

    pub fn type_tag(&self) -> &str {
        &self.type_tag
    }

    pub fn order(&self) -> usize {
        self.columns.len()
    }

    /// `P_{y,w}`, or `None` when `y ≰ w`.
    pub fn poly(&self, y: ElemId, w: ElemId) -> Option<&LaurentPolynomial> {
        self.columns[w.index()].get(&y)
    }

    /// `P_{y,w}` with zero for `y ≰ w`.
    pub fn get(&self, y: ElemId, w: ElemId) -> LaurentPolynomial {
        self.poly(y, w).cloned().unwrap_or_default()
    }

    /// `μ(y, w)`: the coefficient of `q^{(l(w)-l(y)-1)/2}` in `P_{y,w}`.
    pub fn mu(&self, sys: &CoxeterSystem, y: ElemId, w: ElemId) -> BigInt {
        let d = sys.len_id(w) as i64 - sys.len_id(y) as i64;
        match self.poly(y, w) {
            Some(p) if d > 0 && d % 2 == 1 => p.coeff(d - 1),
            _ => BigInt::zero(),
        }
    }

    pub fn num_pairs(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    /// All `(y, w, P_{y,w})` ordered by `(w, y)` ids.
    pub fn entries(&self) -> impl Iterator<Item = (ElemId, ElemId, &LaurentPolynomial)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(w, col)| col.iter().map(move |(&y, p)| (y, ElemId(w as u32), p)))
    }

    /// Checks, against `sys`: support equals Bruhat order, `P_{w,w} = 1`,
    /// constant term 1, even exponents, `deg_q P_{y,w} <= (l(w)-l(y)-1)/2`
    /// and `P_{y,w} = P_{y⁻¹,w⁻¹}`.
    pub fn check_invariants(&self, sys: &CoxeterSystem) -> Result<(), HeckeError> {
        let bad = |msg: String| Err(HeckeError::Invariant(msg));
        if self.order() != sys.order() {
            return bad("table size differs from group order".into());
        }
        let lower = sys.lower_intervals();
        for w in sys.ids() {
            let col = &self.columns[w.index()];
            if col.len() != lower[w.index()].count()
                || col.keys().any(|y| !lower[w.index()].contains(y.index()))
            {
                return bad(format!("support of column {} is not [e, w]", sys.word_string_id(w)));
            }
            for (&y, p) in col {
                let name = || format!("({}, {})", sys.word_string_id(y), sys.word_string_id(w));
                if y == w && !p.is_one() {
                    return bad(format!("P_ww != 1 at {}", name()));
                }
                if p.coeff(0) != BigInt::from(1) {
                    return bad(format!("constant term != 1 at {}", name()));
                }
                let Some(qc) = p.q_coeffs() else {
                    return bad(format!("odd or negative exponent at {}", name()));
                };
                if y != w {
                    let d = (sys.len_id(w) - sys.len_id(y)) as usize;
                    if 2 * (qc.len() - 1) > d - 1 {
                        return bad(format!("degree bound fails at {}", name()));
                    }
                }
                if self.poly(sys.inv_id(y), sys.inv_id(w)) != Some(p) {
                    return bad(format!("inverse symmetry fails at {}", name()));
                }
            }
        }
        Ok(())
    }
}

/// The inverse `(P'_{x,z})` of the unitriangular matrix `(P_{x,z})` over a
/// Bruhat-closed subset, oriented so that `Σ_y P'_{x,y} P_{y,z} = δ_{x,z}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseKL {
    support: Vec<ElemId>,
    entries: BTreeMap<(ElemId, ElemId), LaurentPolynomial>,
}

impl InverseKL {
    pub fn support(&self) -> &[ElemId] {
        &self.support
    }

    /// `P'_{x,z}`, zero unless `x <= z`.
    pub fn get(&self, x: ElemId, z: ElemId) -> LaurentPolynomial {
        self.entries.get(&(x, z)).cloned().unwrap_or_default()
    }

    pub fn poly(&self, x: ElemId, z: ElemId) -> Option<&LaurentPolynomial> {
        self.entries.get(&(x, z))
    }
}

/// `P'_{x,z} = -Σ_{x<=y<z} P'_{x,y} P_{y,z}` over `support`.
pub fn inverse_kl(sys: &CoxeterSystem, table: &KLTable, support: &[ElemId]) -> Result<InverseKL, HeckeError> {
    let mut support = support.to_vec();
    support.sort();
    support.dedup();
    let lower = sys.lower_intervals();
    let member = |y: usize| support.binary_search(&ElemId(y as u32)).is_ok();
    for &z in &support {
        if !lower[z.index()].iter().all(member) {
            return Err(HeckeError::NotBruhatClosed);
        }
    }
    let mut entries: BTreeMap<(ElemId, ElemId), LaurentPolynomial> = BTreeMap::new();
    // Ids are ordered by length, so every y < z precedes z.
    for &z in &support {
        for &x in &support {
            if x == z {
                entries.insert((x, z), LaurentPolynomial::one());
                continue;
            }
            if !lower[z.index()].contains(x.index()) {
                continue;
            }
            let mut acc = LaurentPolynomial::zero();
            for &y in &support {
                if y == z || !lower[z.index()].contains(y.index()) {
                    continue;
                }
                if let Some(pxy) = entries.get(&(x, y)) {
                    acc -= &(pxy * &table.get(y, z));
                }
            }
            if !acc.is_zero() {
                entries.insert((x, z), acc);
            }
        }
    }
    Ok(InverseKL { support, entries })
}

/// The canonical basis `c_z = Σ_t p_{t,z} 𝕋_t` of the weighted algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalBasis {
    weights: WeightFunction,
    elements: Vec<HeckeElement>,
}

impl CanonicalBasis {
    pub fn weights(&self) -> &WeightFunction {
        &self.weights
    }

    pub fn element(&self, z: ElemId) -> &HeckeElement {
        &self.elements[z.index()]
    }

    /// `p_{t,z}`, zero when `t ≰ z`.
    pub fn p(&self, t: ElemId, z: ElemId) -> LaurentPolynomial {
        self.elements[z.index()].coeff(t)
    }
}

/// Builds each `c_z` from `c_s · c_{sz}` (`s` a left descent of `z`,
/// `c_s = 𝕋_s + v^{-L(s)}`) and removes, from the top down, every
/// coefficient outside `v⁻¹ℤ[v⁻¹]` by subtracting a bar-invariant multiple of
/// an already built `c_t`.
pub fn canonical_basis_weighted(
    sys: &CoxeterSystem,
    weights: &WeightFunction,
) -> Result<CanonicalBasis, HeckeError> {
    if let Some(s) = (0..sys.rank()).find(|&s| weights.weight(s) == 0) {
        return Err(HeckeError::ZeroWeight(s + 1));
    }
    let alg = HeckeAlgebra::weighted(sys, weights.clone());
    let mut elements: Vec<HeckeElement> = Vec::with_capacity(sys.order());
    for z in sys.ids() {
        if z == ElemId::IDENTITY {
            elements.push(alg.unit());
            continue;
        }
        let s = sys.word_id(z)[0];
        let rest = &elements[sys.lmul_gen(s, z).index()];
        let mut h = alg.mul_gen_left(s, rest);
        h.add_scaled(rest, &LaurentPolynomial::v_pow(-(weights.weight(s) as i64)));
        for t in (0..z.0).rev().map(ElemId) {
            let a = h.coeff(t);
            if a.in_v_inv_z_v_inv() {
                continue;
            }
            let b = a.symmetrize_nonneg_part();
            h.add_scaled(&elements[t.index()], &-b);
        }
        if !h.coeff(z).is_one() {
            return Err(HeckeError::NonTriangular(z.0, z.0));
        }
        for (&t, p) in h.terms() {
            if t != z && (!p.in_v_inv_z_v_inv() || !sys.bruhat_leq_id(t, z)) {
                return Err(HeckeError::NonTriangular(t.0, z.0));
            }
        }
        elements.push(h);
    }
    Ok(CanonicalBasis { weights: weights.clone(), elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::lp;
    use proptest::prelude::*;

    fn b2_named() -> CoxeterSystem {
        CoxeterSystem::type_b(2).unwrap().with_generator_names(&["e", "f"]).unwrap()
    }

    #[test]
    fn weight_function_validation() {
        let a2 = CoxeterSystem::type_a(2).unwrap();
        assert!(WeightFunction::new(&a2, vec![1, 2]).is_err());
        assert!(WeightFunction::new(&a2, vec![1]).is_err());
        let b2 = CoxeterSystem::type_b(2).unwrap();
        let l = WeightFunction::new(&b2, vec![1, 3]).unwrap();
        assert_eq!(l.of(&b2, b2.parse_id("2121").unwrap()), 8);
    }

    #[test]
    fn geometric_products() {
        let b4 = CoxeterSystem::type_b(4).unwrap();
        let h = HeckeAlgebra::geometric(&b4);
        let t1 = h.basis(b4.parse_id("1").unwrap());
        let t3 = h.basis(b4.parse_id("3").unwrap());
        assert_eq!(h.multiply(&t1, &t3).unwrap(), h.basis(b4.parse_id("13").unwrap()));
        let sq = h.multiply(&t1, &t1).unwrap();
        let expected = HeckeElement::from_terms(
            Normalization::Geometric,
            [(b4.parse_id("1").unwrap(), lp("-1 + v^2")), (ElemId::IDENTITY, lp("v^2"))],
        );
        assert_eq!(sq, expected);
    }

    #[test]
    fn weighted_products_and_bar() {
        let b2 = b2_named();
        let l = WeightFunction::new(&b2, vec![1, 3]).unwrap();
        let h = HeckeAlgebra::weighted(&b2, l);
        let f = b2.parse_id("f").unwrap();
        let sq = h.multiply(&h.basis(f), &h.basis(f)).unwrap();
        let expected = HeckeElement::from_terms(
            sq.normalization().clone(),
            [(f, lp("-v^-3 + v^3")), (ElemId::IDENTITY, lp("1"))],
        );
        assert_eq!(sq, expected);
        assert_eq!(h.bar_element(&h.unit()).unwrap(), h.unit());
        let bar_f = h.bar_element(&h.basis(f)).unwrap();
        let expected = HeckeElement::from_terms(
            sq.normalization().clone(),
            [(f, lp("1")), (ElemId::IDENTITY, lp("v^-3 - v^3"))],
        );
        assert_eq!(bar_f, expected);
    }

    #[test]
    fn geometric_bar_inverts_generators() {
        let b2 = CoxeterSystem::type_b(2).unwrap();
        let h = HeckeAlgebra::geometric(&b2);
        for s in 0..2 {
            let g = b2.rmul_gen(ElemId::IDENTITY, s);
            assert_eq!(h.multiply(&h.basis(g), &h.bar_basis(g)).unwrap(), h.unit());
        }
    }

    #[test]
    fn mismatched_normalizations_fail() {
        let b2 = CoxeterSystem::type_b(2).unwrap();
        let g = HeckeAlgebra::geometric(&b2);
        let w = HeckeAlgebra::weighted(&b2, WeightFunction::length(&b2));
        assert_eq!(g.multiply(&g.unit(), &w.unit()), Err(HeckeError::NormalizationMismatch));
    }

    #[test]
    fn b2_kl_polys_are_one() {
        let b2 = CoxeterSystem::type_b(2).unwrap();
        let t = KLTable::build(&b2);
        t.check_invariants(&b2).unwrap();
        assert_eq!(t.num_pairs(), 33);
        assert!(t.entries().all(|(_, _, p)| p.is_one()));
    }

    #[test]
    fn b4_table_invariants_and_a_nontrivial_poly() {
        let b4 = CoxeterSystem::type_b(4).unwrap();
        let t = KLTable::build(&b4);
        t.check_invariants(&b4).unwrap();
        assert!(t.entries().any(|(_, _, p)| *p == lp("1 + v^2")));
    }

    /// Σ_z (-1)^{l(x)+l(z)} P_{x,z} P_{w0 w, w0 z} = δ_{x,w}.
    #[test]
    fn kl_inversion_formula_b3() {
        let b3 = CoxeterSystem::type_b(3).unwrap();
        let t = KLTable::build(&b3);
        let w0 = b3.longest_id();
        for x in b3.ids() {
            for w in b3.ids() {
                let mut acc = LaurentPolynomial::zero();
                for z in b3.ids() {
                    let term = &t.get(x, z) * &t.get(b3.mul_id(w0, w), b3.mul_id(w0, z));
                    if (b3.len_id(x) + b3.len_id(z)).is_multiple_of(2) {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
                let expected = if x == w { LaurentPolynomial::one() } else { LaurentPolynomial::zero() };
                assert_eq!(acc, expected);
            }
        }
    }

    #[test]
    fn inverse_kl_on_b2_is_signed_ones() {
        let b2 = CoxeterSystem::type_b(2).unwrap();
        let t = KLTable::build(&b2);
        let all: Vec<ElemId> = b2.ids().collect();
        let inv = inverse_kl(&b2, &t, &all).unwrap();
        for &x in &all {
            for &z in &all {
                let expected = if b2.bruhat_leq_id(x, z) {
                    LaurentPolynomial::constant(if (b2.len_id(x) + b2.len_id(z)).is_multiple_of(2) {
                        1
                    } else {
                        -1
                    })
                } else {
                    LaurentPolynomial::zero()
                };
                assert_eq!(inv.get(x, z), expected);
            }
        }
        let b4 = CoxeterSystem::type_b(4).unwrap();
        let t4 = KLTable::build(&b4);
        assert_eq!(inverse_kl(&b4, &t4, &[b4.parse_id("12").unwrap()]), Err(HeckeError::NotBruhatClosed));
    }

    #[test]
    fn canonical_basis_unequal_parameters() {
        let b2 = b2_named();
        let l = WeightFunction::new(&b2, vec![1, 3]).unwrap();
        let cb = canonical_basis_weighted(&b2, &l).unwrap();
        let id = |s: &str| b2.parse_id(s).unwrap();
        let efe = id("efe");
        for t in ["∅", "e"] {
            let shift = -l.of(&b2, efe) + l.of(&b2, id(t));
            assert_eq!(cb.p(id(t), efe), lp("1 + v^2").shift(shift));
        }
        let fef = id("fef");
        for t in ["∅", "f"] {
            let shift = -l.of(&b2, fef) + l.of(&b2, id(t));
            assert_eq!(cb.p(id(t), fef), lp("1 - v^2").shift(shift));
        }
        assert!(cb.p(ElemId::IDENTITY, ElemId::IDENTITY).is_one());
        assert!(cb.p(id("e"), id("f")).is_zero());
        let alg = HeckeAlgebra::weighted(&b2, l);
        for z in b2.ids() {
            assert_eq!(&alg.bar_element(cb.element(z)).unwrap(), cb.element(z));
        }
    }

    #[test]
    fn split_case_matches_kl() {
        let b2 = CoxeterSystem::type_b(2).unwrap();
        let t = KLTable::build(&b2);
        let cb = canonical_basis_weighted(&b2, &WeightFunction::length(&b2)).unwrap();
        for z in b2.ids() {
            for y in b2.ids() {
                let shift = b2.len_id(y) as i64 - b2.len_id(z) as i64;
                assert_eq!(cb.p(y, z), t.get(y, z).shift(shift));
            }
        }
    }

    #[test]
    fn zero_weight_is_rejected() {
        let b2 = CoxeterSystem::type_b(2).unwrap();
        let l = WeightFunction::new(&b2, vec![0, 1]).unwrap();
        assert_eq!(canonical_basis_weighted(&b2, &l), Err(HeckeError::ZeroWeight(1)));
    }

    fn arb_element(order: u32) -> impl Strategy<Value = Vec<(u32, i64, i64)>> {
        prop::collection::vec((0..order, -3i64..=3, -2i64..=2), 0..4)
    }

    fn build(norm: &Normalization, terms: &[(u32, i64, i64)]) -> HeckeElement {
        HeckeElement::from_terms(
            norm.clone(),
            terms.iter().map(|&(w, e, c)| (ElemId(w), LaurentPolynomial::monomial(c, e))),
        )
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in arb_element(8), b in arb_element(8), c in arb_element(8), weighted in any::<bool>()) {
            let b2 = CoxeterSystem::type_b(2).unwrap();
            let alg = if weighted {
                HeckeAlgebra::weighted(&b2, WeightFunction::new(&b2, vec![1, 3]).unwrap())
            } else {
                HeckeAlgebra::geometric(&b2)
            };
            let n = alg.normalization().clone();
            let (a, b, c) = (build(&n, &a), build(&n, &b), build(&n, &c));
            let left = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn bar_is_an_involution(a in arb_element(8)) {
            let b2 = CoxeterSystem::type_b(2).unwrap();
            let alg = HeckeAlgebra::weighted(&b2, WeightFunction::new(&b2, vec![1, 3]).unwrap());
            let h = build(alg.normalization(), &a);
            prop_assert_eq!(alg.bar_element(&alg.bar_element(&h).unwrap()).unwrap(), h);
        }
    }
}

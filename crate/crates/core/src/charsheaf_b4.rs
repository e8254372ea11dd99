//! The worked example in `W(B_4)` with `J = {1,2}` and `δ = 1`.
//!
//! The group `N_J` of elements normalizing `J` is a Coxeter group of type
//! `B_2` with generators `e = 4` and `f = 32123`. Restrictions of
//! character-sheaf classes to its pieces are expanded in the six-element
//! basis `1, ρ, σ, σ′, θ, S` of the Levi subgroup, and the χ-values of the
//! four objects `ρ, σ, σ′, θ` of the cell block are solved from them.
//!
//! Values "modulo the unit" ignore the coordinate of `1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem, DiagramAutomorphism, ElemId, GenSet};
use crate::hecke::{
    canonical_basis_weighted, inverse_kl, CanonicalBasis, HeckeError, InverseKL, KLTable, WeightFunction,
};
use crate::laurent::LaurentPolynomial;
use crate::pieces::enumerate_n;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExampleError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error("{0} is not in W_J")]
    NotInParabolic(String),
    #[error("N_J embedding check failed: {0}")]
    Embedding(String),
    #[error("negative coefficient of {symbol} in the normalized restriction at (t, z, u) = ({t}, {z}, {u})")]
    Positivity { t: String, z: String, u: String, symbol: CsSymbol },
    #[error("multiplicity of {symbol} at (z, u) = ({z}, {u}) is not bar-invariant: {value}")]
    NotPalindromic { z: String, u: String, symbol: CsSymbol, value: LaurentPolynomial },
    #[error("no admissible χ-solution at (t, z) = ({t}, {z}): {reason}")]
    NoSolution { t: String, z: String, reason: String },
    #[error("χ-solution at (t, z) = ({t}, {z}) is not unique: {witness}")]
    Ambiguous { t: String, z: String, witness: String },
    #[error("signed combination at (t, z) = ({t}, {z}) is not a multiple of the cuspidal pattern")]
    PatternMismatch { t: String, z: String },
}

/// The six unipotent character sheaves on the Levi subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CsSymbol {
    One,
    Rho,
    Sigma,
    SigmaPrime,
    Theta,
    S,
}

impl CsSymbol {
    pub const ALL: [CsSymbol; 6] =
        [CsSymbol::One, CsSymbol::Rho, CsSymbol::Sigma, CsSymbol::SigmaPrime, CsSymbol::Theta, CsSymbol::S];

    /// The block attached to the two-sided cell `{1,2,12,21,121,212}`.
    pub const BLOCK: [CsSymbol; 4] = [CsSymbol::Rho, CsSymbol::Sigma, CsSymbol::SigmaPrime, CsSymbol::Theta];

    /// Every symbol except `1`.
    pub const NON_UNIT: [CsSymbol; 5] =
        [CsSymbol::Rho, CsSymbol::Sigma, CsSymbol::SigmaPrime, CsSymbol::Theta, CsSymbol::S];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The cuspidal map on the block, `ρ, θ ↦ +1` and `σ, σ′ ↦ -1`.
    pub fn iota(self) -> Option<i64> {
        match self {
            CsSymbol::Rho | CsSymbol::Theta => Some(1),
            CsSymbol::Sigma | CsSymbol::SigmaPrime => Some(-1),
            CsSymbol::One | CsSymbol::S => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CsSymbol::One => "1",
            CsSymbol::Rho => "ρ",
            CsSymbol::Sigma => "σ",
            CsSymbol::SigmaPrime => "σ′",
            CsSymbol::Theta => "θ",
            CsSymbol::S => "S",
        }
    }

    /// ASCII key used in JSON output.
    pub fn key(self) -> &'static str {
        match self {
            CsSymbol::One => "1",
            CsSymbol::Rho => "rho",
            CsSymbol::Sigma => "sigma",
            CsSymbol::SigmaPrime => "sigma_prime",
            CsSymbol::Theta => "theta",
            CsSymbol::S => "S",
        }
    }
}

impl fmt::Display for CsSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An `𝒜`-combination of the six symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CsVector {
    coords: [LaurentPolynomial; 6],
}

impl CsVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (CsSymbol, LaurentPolynomial)>>(pairs: I) -> Self {
        let mut out = Self::zero();
        for (s, p) in pairs {
            out.coords[s.index()] += &p;
        }
        out
    }

    /// `c·(s_1 + s_2 + ...)`.
    pub fn uniform(c: &LaurentPolynomial, symbols: &[CsSymbol]) -> Self {
        Self::from_pairs(symbols.iter().map(|&s| (s, c.clone())))
    }

    pub fn get(&self, s: CsSymbol) -> &LaurentPolynomial {
        &self.coords[s.index()]
    }

    pub fn set(&mut self, s: CsSymbol, p: LaurentPolynomial) {
        self.coords[s.index()] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(LaurentPolynomial::is_zero)
    }

    pub fn scale(&self, c: &LaurentPolynomial) -> Self {
        CsVector { coords: self.coords.clone().map(|p| &p * c) }
    }

    pub fn shift(&self, k: i64) -> Self {
        CsVector { coords: self.coords.clone().map(|p| p.shift(k)) }
    }

    pub fn add_scaled(&mut self, other: &CsVector, c: &LaurentPolynomial) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += &(b * c);
        }
    }

    /// The same vector with the unit coordinate cleared.
    pub fn mod_unit(&self) -> Self {
        let mut out = self.clone();
        out.set(CsSymbol::One, LaurentPolynomial::zero());
        out
    }

    /// Equality modulo `𝒜·1`.
    pub fn sim(&self, other: &CsVector) -> bool {
        self.mod_unit() == other.mod_unit()
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = CsSymbol::ALL
            .iter()
            .filter(|s| !self.get(**s).is_zero())
            .map(|s| (s.key().to_string(), Value::String(self.get(*s).to_string())))
            .collect();
        Value::Object(map)
    }
}

impl fmt::Display for CsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = CsSymbol::ALL
            .iter()
            .filter(|s| !self.get(**s).is_zero())
            .map(|&s| format!("{}{s}", coefficient_prefix(self.get(s))))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `""` for 1, `v^2` for a monic monomial, `(1 + v^2)` otherwise.
fn coefficient_prefix(c: &LaurentPolynomial) -> String {
    if c.is_one() {
        String::new()
    } else if c.num_terms() == 1 && c.terms().all(|(_, k)| k.is_one()) {
        c.to_string()
    } else {
        format!("({c})")
    }
}

fn poly(terms: &[(i64, i64)]) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(terms.iter().copied())
}

/// The class `[u] = v^{-|L|} χ(bar KK^{u;L})` for `u ∈ W_J`, given by its
/// word in `1, 2`.
pub fn cs_table_word(u: &str) -> Option<CsVector> {
    use CsSymbol::*;
    let one = LaurentPolynomial::one();
    let v2 = poly(&[(2, 1)]);
    let one_v2 = poly(&[(0, 1), (2, 1)]);
    let v2_v4 = poly(&[(2, 1), (4, 1)]);
    let one_v4 = poly(&[(0, 1), (4, 1)]);
    let vec = match u {
        "∅" | "" => CsVector::from_pairs([
            (One, one.clone()),
            (Rho, LaurentPolynomial::constant(2)),
            (Sigma, one.clone()),
            (SigmaPrime, one.clone()),
            (S, one),
        ]),
        "1" => CsVector::uniform(&one_v2, &[One, Rho, Sigma]),
        "2" => CsVector::uniform(&one_v2, &[One, Rho, SigmaPrime]),
        "12" | "21" => {
            let mut x = CsVector::uniform(&v2, &[Rho, Sigma, SigmaPrime, Theta]);
            x.set(One, &one_v2 * &one_v2);
            x
        }
        "121" => {
            let mut x = CsVector::uniform(&v2_v4, &[SigmaPrime, Theta]);
            x.set(One, &one_v2 * &one_v4);
            x
        }
        "212" => {
            let mut x = CsVector::uniform(&v2_v4, &[Sigma, Theta]);
            x.set(One, &one_v2 * &one_v4);
            x
        }
        "1212" => CsVector::from_pairs([(One, &(&one_v2 * &one_v2) * &one_v4)]),
        _ => return None,
    };
    Some(vec)
}

/// Everything the example needs, built once.
pub struct ExampleContext {
    pub w: CoxeterSystem,
    pub j: GenSet,
    pub delta: DiagramAutomorphism,
    pub kl: KLTable,
    pub wj: Vec<ElemId>,
    pub inverse_kl: InverseKL,
    /// `N_J` as an abstract Coxeter group with generators named `e`, `f`.
    pub nj: CoxeterSystem,
    pub weights: WeightFunction,
    pub canonical: CanonicalBasis,
    embed: Vec<ElemId>,
}

/// The six `u ∈ W_J` of the cell, in the order `121, 212, 12, 21, 2, 1`.
pub const CELL_WORDS: [&str; 6] = ["121", "212", "12", "21", "2", "1"];

/// The four `u` used to solve for χ, in the order `121, 212, 2, 1`.
pub const SOLVE_WORDS: [&str; 4] = ["121", "212", "2", "1"];

impl ExampleContext {
    pub fn new() -> Result<Self, ExampleError> {
        let w = CoxeterSystem::type_b(4)?;
        let kl = KLTable::build(&w);
        Self::with_kl(w, kl)
    }

    /// Uses a precomputed (e.g. cached) KL table of `W(B_4)`.
    pub fn with_kl(w: CoxeterSystem, kl: KLTable) -> Result<Self, ExampleError> {
        if kl.order() != w.order() {
            return Err(ExampleError::Embedding("KL table does not match W(B4)".into()));
        }
        let j = GenSet::from_labels([1, 2]);
        let delta = DiagramAutomorphism::identity(4);
        let wj = w.parabolic_ids(j);
        let inverse_kl = inverse_kl(&w, &kl, &wj)?;
        let nj = CoxeterSystem::type_b(2)?.with_generator_names(&["e", "f"])?;
        let weights = WeightFunction::new(&nj, vec![1, 3])?;
        let canonical = canonical_basis_weighted(&nj, &weights)?;
        let gens = [w.parse_id("4")?, w.parse_id("32123")?];
        let embed: Vec<ElemId> = nj
            .ids()
            .map(|x| nj.word_id(x).iter().fold(ElemId::IDENTITY, |acc, &s| w.mul_id(acc, gens[s])))
            .collect();
        let ctx = ExampleContext { w, j, delta, kl, wj, inverse_kl, nj, weights, canonical, embed };
        ctx.check_embedding()?;
        Ok(ctx)
    }

    /// The image of `N_J` is `N_{J,1}` and the map is an injective
    /// homomorphism.
    fn check_embedding(&self) -> Result<(), ExampleError> {
        let mut image = self.embed.clone();
        image.sort();
        image.dedup();
        if image.len() != self.embed.len() {
            return Err(ExampleError::Embedding("not injective".into()));
        }
        if image != enumerate_n(&self.w, self.j, &self.delta) {
            return Err(ExampleError::Embedding("image differs from N_J".into()));
        }
        for a in self.nj.ids() {
            for b in self.nj.ids() {
                if self.embed(self.nj.mul_id(a, b)) != self.w.mul_id(self.embed(a), self.embed(b)) {
                    return Err(ExampleError::Embedding("not a homomorphism".into()));
                }
            }
        }
        Ok(())
    }

    /// `N_J` in the order `∅, e, f, ef, fe, efe, fef, efef`.
    pub fn nj_elements(&self) -> Vec<ElemId> {
        self.nj.ids().collect()
    }

    pub fn nj_name(&self, x: ElemId) -> String {
        self.nj.word_string_id(x)
    }

    pub fn nj_parse(&self, s: &str) -> Result<ElemId, ExampleError> {
        Ok(self.nj.parse_id(s)?)
    }

    /// The element of `W(B_4)` represented by `x ∈ N_J`.
    pub fn embed(&self, x: ElemId) -> ElemId {
        self.embed[x.index()]
    }

    /// `ε(x) = (-1)^{number of f}`.
    pub fn epsilon(&self, x: ElemId) -> i64 {
        if self.nj.word_id(x).iter().filter(|&&s| s == 1).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn weight(&self, x: ElemId) -> i64 {
        self.weights.of(&self.nj, x)
    }

    /// Length in `W(B_4)`.
    pub fn length(&self, x: ElemId) -> i64 {
        self.w.len_id(self.embed(x)) as i64
    }

    pub fn wj_parse(&self, u: &str) -> Result<ElemId, ExampleError> {
        let id = self.w.parse_id(u)?;
        if !self.w.in_parabolic(id, self.j) {
            return Err(ExampleError::NotInParabolic(u.to_string()));
        }
        Ok(id)
    }

    pub fn wj_name(&self, u: ElemId) -> String {
        self.w.word_string_id(u)
    }

    pub fn cs_table(&self, u: ElemId) -> Result<CsVector, ExampleError> {
        cs_table_word(&self.wj_name(u)).ok_or_else(|| ExampleError::NotInParabolic(self.wj_name(u)))
    }

    fn check_wj(&self, u: ElemId) -> Result<(), ExampleError> {
        if self.w.in_parabolic(u, self.j) {
            Ok(())
        } else {
            Err(ExampleError::NotInParabolic(self.w.word_string_id(u)))
        }
    }

    /// The coefficient of `[u″]_t` in `[z⁻¹u]_(t)`:
    /// `Σ_{u′ ∈ W_J, u″ <= u′, t⁻¹u′ <= z⁻¹u} P′_{u″,u′} P_{t⁻¹u′, z⁻¹u}`.
    pub fn restriction_coefficients(
        &self,
        t: ElemId,
        z: ElemId,
        u: ElemId,
    ) -> Result<BTreeMap<ElemId, LaurentPolynomial>, ExampleError> {
        self.check_wj(u)?;
        let w = &self.w;
        let tinv = w.inv_id(self.embed(t));
        let target = w.mul_id(w.inv_id(self.embed(z)), u);
        let mut out = BTreeMap::new();
        for &u2 in &self.wj {
            let mut acc = LaurentPolynomial::zero();
            for &u1 in &self.wj {
                let Some(pinv) = self.inverse_kl.poly(u2, u1) else { continue };
                if let Some(p) = self.kl.poly(w.mul_id(tinv, u1), target) {
                    acc += &(pinv * p);
                }
            }
            if !acc.is_zero() {
                out.insert(u2, acc);
            }
        }
        Ok(out)
    }

    /// `[z⁻¹u]_(t)` in the six-symbol basis.
    pub fn piece_restriction(&self, t: ElemId, z: ElemId, u: ElemId) -> Result<CsVector, ExampleError> {
        let mut out = CsVector::zero();
        for (u2, c) in self.restriction_coefficients(t, z, u)? {
            out.add_scaled(&self.cs_table(u2)?, &c);
        }
        Ok(out)
    }

    /// `v^{-l(z)+l(t)-l(u)} [z⁻¹u]_(t)`; fails if a coordinate other than `1`
    /// has a negative coefficient.
    pub fn normalized_restriction(&self, t: ElemId, z: ElemId, u: ElemId) -> Result<CsVector, ExampleError> {
        let k = -self.length(z) + self.length(t) - self.w.len_id(u) as i64;
        let out = self.piece_restriction(t, z, u)?.shift(k);
        if let Some(&symbol) = CsSymbol::NON_UNIT.iter().find(|s| !out.get(**s).is_nonneg()) {
            return Err(ExampleError::Positivity {
                t: self.nj_name(t),
                z: self.nj_name(z),
                u: self.wj_name(u),
                symbol,
            });
        }
        Ok(out)
    }

    /// `N^{z,z,u}_{C′} = Σ_j dim V_{z⁻¹u,z,C′,j} v^{-j}` for `C′ ≠ 1`, read off
    /// the normalized restriction at `t = z`; each value must be bar-invariant.
    pub fn v_dims_at_z(
        &self,
        z: ElemId,
        u: ElemId,
    ) -> Result<BTreeMap<CsSymbol, LaurentPolynomial>, ExampleError> {
        let r = self.normalized_restriction(z, z, u)?;
        let mut out = BTreeMap::new();
        for s in CsSymbol::NON_UNIT {
            let value = r.get(s).clone();
            if !value.is_palindromic() {
                return Err(ExampleError::NotPalindromic {
                    z: self.nj_name(z),
                    u: self.wj_name(u),
                    symbol: s,
                    value,
                });
            }
            out.insert(s, value);
        }
        Ok(out)
    }

    /// Solves `[z⁻¹u]′_(t) ∼ Σ_C N^{z,z,u}_C χ_t(C_z^♯)` for `u ∈ {121, 212, 2, 1}`
    /// and the four block objects `C`.
    ///
    /// Each equation row has a single common nonzero entry, so after exact
    /// division the system splits into integer systems, one per coordinate
    /// and power of `v`. A one-dimensional kernel is resolved by requiring
    /// every unknown coefficient to be nonnegative; the admissible kernel
    /// parameters form a finite box, and the solution is unique iff the box
    /// is a point for every coordinate and exponent. For `t = z` the boundary
    /// value `χ_z(C_z^♯) = C_z` is used and verified.
    pub fn solve_chi(&self, t: ElemId, z: ElemId) -> Result<ChiSolution, ExampleError> {
        let names = (self.nj_name(t), self.nj_name(z));
        let no_solution =
            |reason: String| ExampleError::NoSolution { t: names.0.clone(), z: names.1.clone(), reason };
        let us: Vec<ElemId> = SOLVE_WORDS.iter().map(|u| self.wj_parse(u)).collect::<Result<_, _>>()?;
        let mut rows: Vec<(Vec<bool>, CsVector)> = Vec::new();
        let mut matrix_rows: Vec<BTreeMap<CsSymbol, LaurentPolynomial>> = Vec::new();
        for &u in &us {
            let n = self.v_dims_at_z(z, u)?;
            if !n[&CsSymbol::S].is_zero() {
                return Err(no_solution("multiplicity of S at t = z is not modeled".into()));
            }
            let lhs = self.normalized_restriction(t, z, u)?.mod_unit();
            matrix_rows.push(n.clone());
            let entries: Vec<&LaurentPolynomial> =
                CsSymbol::BLOCK.iter().map(|c| &n[c]).filter(|p| !p.is_zero()).collect();
            let Some(&common) = entries.first() else {
                if lhs.is_zero() {
                    continue;
                }
                return Err(no_solution(format!("row {} has no unknowns", self.wj_name(u))));
            };
            if entries.iter().any(|p| *p != common) {
                return Err(no_solution("row entries differ; system does not split".into()));
            }
            let mut reduced = CsVector::zero();
            for s in CsSymbol::NON_UNIT {
                let q = lhs.get(s).div_exact(common).ok_or_else(|| {
                    no_solution(format!("row {} is not divisible by {common}", self.wj_name(u)))
                })?;
                reduced.set(s, q);
            }
            let pattern = CsSymbol::BLOCK.iter().map(|c| !n[c].is_zero()).collect();
            rows.push((pattern, reduced));
        }

        let verify = |values: &BTreeMap<CsSymbol, CsVector>| -> bool {
            us.iter().zip(&matrix_rows).all(|(&u, n)| {
                let mut rhs = CsVector::zero();
                for c in CsSymbol::BLOCK {
                    rhs.add_scaled(&values[&c], &n[&c]);
                }
                match self.normalized_restriction(t, z, u) {
                    Ok(lhs) => lhs.sim(&rhs),
                    Err(_) => false,
                }
            })
        };

        if t == z {
            let values: BTreeMap<CsSymbol, CsVector> = CsSymbol::BLOCK
                .iter()
                .map(|&c| (c, CsVector::from_pairs([(c, LaurentPolynomial::one())])))
                .collect();
            if !verify(&values) {
                return Err(no_solution("boundary value χ_z(C_z) = C_z is inconsistent".into()));
            }
            return Ok(ChiSolution { t, z, values, unique: true, witness: None });
        }

        let system = IntegerSystem::new(rows.iter().map(|(p, _)| p.clone()).collect());
        let mut values: BTreeMap<CsSymbol, CsVector> =
            CsSymbol::BLOCK.iter().map(|&c| (c, CsVector::zero())).collect();
        let mut witness = None;
        if system.kernel_is_one_signed() {
            witness = Some("kernel direction is one-signed; nonnegative solutions are unbounded".into());
        }
        for s in CsSymbol::NON_UNIT {
            let mut exponents: Vec<i64> =
                rows.iter().flat_map(|(_, r)| r.get(s).terms().map(|(e, _)| e).collect::<Vec<_>>()).collect();
            exponents.sort();
            exponents.dedup();
            for e in exponents {
                let rhs: Vec<BigInt> = rows.iter().map(|(_, r)| r.get(s).coeff(e)).collect();
                let sols = system.nonnegative_solutions(&rhs).map_err(no_solution)?;
                match sols.as_slice() {
                    [] => {
                        return Err(no_solution(format!(
                            "no nonnegative solution for coordinate {s} at v^{e}"
                        )))
                    }
                    [x] => {
                        for (c, coef) in CsSymbol::BLOCK.iter().zip(x) {
                            let entry = values.get_mut(c).unwrap();
                            let p = entry.get(s) + &LaurentPolynomial::monomial(coef.clone(), e);
                            entry.set(s, p);
                        }
                    }
                    many => {
                        witness.get_or_insert_with(|| {
                            format!("{} nonnegative solutions for coordinate {s} at v^{e}", many.len())
                        });
                        for (c, coef) in CsSymbol::BLOCK.iter().zip(&many[0]) {
                            let entry = values.get_mut(c).unwrap();
                            let p = entry.get(s) + &LaurentPolynomial::monomial(coef.clone(), e);
                            entry.set(s, p);
                        }
                    }
                }
            }
        }
        if !verify(&values) {
            return Err(no_solution("solution does not reproduce the restrictions".into()));
        }
        Ok(ChiSolution { t, z, unique: witness.is_none(), witness, values })
    }

    /// `X_{t,z}` from `Σ_C ι(C) χ_t(C_z^♯) ∼ X·Σ_C ι(C) C_t`.
    pub fn extract_x(&self, sol: &ChiSolution) -> Result<LaurentPolynomial, ExampleError> {
        let (t, z) = (self.nj_name(sol.t), self.nj_name(sol.z));
        if !sol.unique {
            return Err(ExampleError::Ambiguous { t, z, witness: sol.witness.clone().unwrap_or_default() });
        }
        let comb = sol.signed_combination();
        let x = comb.get(CsSymbol::Rho).clone();
        let matches = comb.get(CsSymbol::S).is_zero()
            && CsSymbol::BLOCK.iter().all(|&c| *comb.get(c) == x.scale(&BigInt::from(c.iota().unwrap())));
        if matches {
            Ok(x)
        } else {
            Err(ExampleError::PatternMismatch { t, z })
        }
    }

    /// Bruhat order of `N_J` as a Coxeter group.
    pub fn nj_leq(&self, t: ElemId, z: ElemId) -> bool {
        self.nj.bruhat_leq_id(t, z)
    }

    /// `p_{t,z}` of the canonical basis of `(N_J, L)`.
    pub fn p(&self, t: ElemId, z: ElemId) -> LaurentPolynomial {
        self.canonical.p(t, z)
    }

    pub fn conjecture_report(&self) -> ConjectureReport {
        let mut pairs = Vec::new();
        for t in self.nj.ids() {
            for z in self.nj.ids() {
                pairs.push(self.pair_report(t, z));
            }
        }
        ConjectureReport { pairs }
    }

    fn pair_report(&self, t: ElemId, z: ElemId) -> PairReport {
        let leq = self.nj_leq(t, z);
        let sign = self.epsilon(t) * self.epsilon(z);
        let p = self.p(t, z);
        let mut report = PairReport {
            t: self.nj_name(t),
            z: self.nj_name(z),
            t_leq_z: leq,
            sign,
            p: p.clone(),
            x: None,
            determinant: None,
            unique: false,
            conjecture1: false,
            conjecture2: None,
            conjecture3: false,
            error: None,
        };
        let sol = match self.solve_chi(t, z) {
            Ok(s) => s,
            Err(e) => {
                report.error = Some(e.to_string());
                return report;
            }
        };
        report.unique = sol.unique;
        if leq {
            let det = determinant(&sol.block_matrix());
            report.conjecture2 = Some(!det.is_zero());
            report.determinant = Some(det);
        }
        match self.extract_x(&sol) {
            Ok(x) => {
                report.conjecture1 = true;
                report.conjecture3 = x == p.scale(&BigInt::from(sign));
                report.x = Some(x);
            }
            Err(e) => report.error = Some(e.to_string()),
        }
        report
    }

    /// JSON keyed by `"t,z,u"` with the `[u″]` coefficients, the CS-basis
    /// expansion and its normalized form.
    pub fn restriction_report_json(&self) -> Result<Value, ExampleError> {
        let mut entries = serde_json::Map::new();
        for t in self.nj.ids() {
            for z in self.nj.ids() {
                for u in CELL_WORDS {
                    let uid = self.wj_parse(u)?;
                    let coeffs: serde_json::Map<String, Value> = self
                        .restriction_coefficients(t, z, uid)?
                        .into_iter()
                        .map(|(u2, c)| (self.wj_name(u2), Value::String(c.to_string())))
                        .collect();
                    let key = format!("{},{},{}", self.nj_name(t), self.nj_name(z), u);
                    entries.insert(
                        key,
                        json!({
                            "coefficients": coeffs,
                            "vector": self.piece_restriction(t, z, uid)?.to_json(),
                            "normalized": self.normalized_restriction(t, z, uid)?.to_json(),
                        }),
                    );
                }
            }
        }
        Ok(Value::Object(entries))
    }

    /// Pairs grouped by identical restriction data, each group with its
    /// `[u″]_t`-expansions and `∼`-forms.
    pub fn restriction_text_table(&self) -> Result<String, ExampleError> {
        type Group = (Vec<String>, Vec<(ElemId, ElemId)>);
        let mut groups: Vec<Group> = Vec::new();
        for t in self.nj.ids() {
            for z in self.nj.ids() {
                let mut lines = Vec::new();
                for u in CELL_WORDS {
                    let uid = self.wj_parse(u)?;
                    let expansion = self
                        .restriction_coefficients(t, z, uid)?
                        .into_iter()
                        .map(|(u2, c)| format!("{}[{}]", coefficient_prefix(&c), self.wj_name(u2)))
                        .collect::<Vec<_>>();
                    let expansion =
                        if expansion.is_empty() { "0".to_string() } else { expansion.join(" + ") };
                    let sim = self.piece_restriction(t, z, uid)?.mod_unit();
                    lines.push(format!("  [z^-1({u})]_(t) = {expansion}    ~ {sim}"));
                }
                match groups.iter_mut().find(|(l, _)| *l == lines) {
                    Some((_, pairs)) => pairs.push((t, z)),
                    None => groups.push((lines, vec![(t, z)])),
                }
            }
        }
        let mut out = String::new();
        for (lines, pairs) in groups {
            let names: Vec<String> =
                pairs.iter().map(|&(t, z)| format!("({},{})", self.nj_name(t), self.nj_name(z))).collect();
            out.push_str(&format!("(t,z) in {}\n", names.join(" ")));
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// `χ_t(C_z^♯)` modulo the unit for the four block objects `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiSolution {
    pub t: ElemId,
    pub z: ElemId,
    pub values: BTreeMap<CsSymbol, CsVector>,
    pub unique: bool,
    pub witness: Option<String>,
}

impl ChiSolution {
    pub fn value(&self, c: CsSymbol) -> &CsVector {
        &self.values[&c]
    }

    /// `Σ_C ι(C) χ_t(C_z^♯)`.
    pub fn signed_combination(&self) -> CsVector {
        let mut out = CsVector::zero();
        for c in CsSymbol::BLOCK {
            out.add_scaled(&self.values[&c], &LaurentPolynomial::constant(c.iota().unwrap()));
        }
        out
    }

    /// `Φ^{C′,C}`: row `C′`, column `C`, the coefficient of `C′` in
    /// `χ_t(C_z^♯)`.
    pub fn block_matrix(&self) -> Vec<Vec<LaurentPolynomial>> {
        CsSymbol::BLOCK
            .iter()
            .map(|&row| CsSymbol::BLOCK.iter().map(|col| self.values[col].get(row).clone()).collect())
            .collect()
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<LaurentPolynomial>]) -> LaurentPolynomial {
    match m.len() {
        0 => LaurentPolynomial::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = LaurentPolynomial::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<LaurentPolynomial>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect()
                    })
                    .collect();
                let term = &m[0][col] * &determinant(&minor);
                if col % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        }
    }
}

/// `M x = b` over the integers for a fixed 0/1 matrix `M`, with the
/// nonnegative solutions enumerated when the kernel is one-dimensional.
struct IntegerSystem {
    cols: usize,
    /// Reduced row echelon form of `M` and the pivot column of each row.
    rref: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    /// The row operations, applied to a right-hand side.
    transform: Vec<Vec<BigRational>>,
}

impl IntegerSystem {
    fn new(pattern: Vec<Vec<bool>>) -> Self {
        let rows = pattern.len();
        let cols = CsSymbol::BLOCK.len();
        let to_q = |b: bool| if b { BigRational::one() } else { BigRational::zero() };
        let mut a: Vec<Vec<BigRational>> =
            pattern.iter().map(|r| r.iter().map(|&b| to_q(b)).collect()).collect();
        let mut tr: Vec<Vec<BigRational>> =
            (0..rows).map(|i| (0..rows).map(|j| to_q(i == j)).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            tr.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for x in tr[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    let (pivot_row, pivot_tr) = (a[r].clone(), tr[r].clone());
                    for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= p * &f;
                    }
                    for (x, p) in tr[i].iter_mut().zip(&pivot_tr) {
                        *x -= p * &f;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        IntegerSystem { cols, rref: a, pivots, transform: tr }
    }

    fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// The kernel vector for a single free column, with that entry 1.
    fn kernel_vector(&self, free: usize) -> Vec<BigRational> {
        let mut k = vec![BigRational::zero(); self.cols];
        k[free] = BigRational::one();
        for (row, &p) in self.pivots.iter().enumerate() {
            k[p] = -self.rref[row][free].clone();
        }
        k
    }

    fn kernel_is_one_signed(&self) -> bool {
        let free = self.free_columns();
        if free.len() != 1 {
            return false;
        }
        let k = self.kernel_vector(free[0]);
        k.iter().all(|x| !x.is_negative()) || k.iter().all(|x| !x.is_positive())
    }

    fn nonnegative_solutions(&self, rhs: &[BigInt]) -> Result<Vec<Vec<BigInt>>, String> {
        let b: Vec<BigRational> = self
            .transform
            .iter()
            .map(|row| row.iter().zip(rhs).map(|(t, x)| t * BigRational::from_integer(x.clone())).sum())
            .collect();
        if b[self.pivots.len()..].iter().any(|x| !x.is_zero()) {
            return Ok(Vec::new());
        }
        let free = self.free_columns();
        let particular = |mu: &BigRational| -> Vec<BigRational> {
            let mut x = vec![BigRational::zero(); self.cols];
            if let Some(&f) = free.first() {
                x[f] = mu.clone();
            }
            for (row, &p) in self.pivots.iter().enumerate() {
                let mut v = b[row].clone();
                if let Some(&f) = free.first() {
                    v -= &self.rref[row][f] * mu;
                }
                x[p] = v;
            }
            x
        };
        let admissible = |x: &[BigRational]| x.iter().all(|v| v.is_integer() && !v.is_negative());
        let to_int = |x: Vec<BigRational>| x.into_iter().map(|v| v.to_integer()).collect::<Vec<_>>();
        match free.len() {
            0 => {
                let x = particular(&BigRational::zero());
                Ok(if admissible(&x) { vec![to_int(x)] } else { Vec::new() })
            }
            1 => {
                // x_p = b_p - r_p μ >= 0 and μ >= 0 bound μ when the kernel
                // has mixed signs.
                let f = free[0];
                let mut lo = BigRational::zero();
                let mut hi: Option<BigRational> = None;
                for (row, _) in self.pivots.iter().enumerate() {
                    let r = &self.rref[row][f];
                    if r.is_positive() {
                        let bound = &b[row] / r;
                        hi = Some(match hi {
                            Some(h) if h < bound => h,
                            _ => bound,
                        });
                    } else if r.is_negative() {
                        let bound = &b[row] / r;
                        if bound > lo {
                            lo = bound;
                        }
                    }
                }
                let Some(hi) = hi else {
                    return Err("nonnegative solutions are unbounded".into());
                };
                let mut out = Vec::new();
                let mut mu = lo.ceil();
                while mu <= hi {
                    let x = particular(&mu);
                    if admissible(&x) {
                        out.push(to_int(x));
                    }
                    mu += BigRational::one();
                }
                Ok(out)
            }
            d => Err(format!("kernel has dimension {d}")),
        }
    }
}

/// Conjecture checks for one pair `(t, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub t: String,
    pub z: String,
    pub t_leq_z: bool,
    /// `ε(z)ε(t)`.
    pub sign: i64,
    pub p: LaurentPolynomial,
    pub x: Option<LaurentPolynomial>,
    pub determinant: Option<LaurentPolynomial>,
    pub unique: bool,
    pub conjecture1: bool,
    /// `None` when `t ≰ z`, where nothing is claimed.
    pub conjecture2: Option<bool>,
    pub conjecture3: bool,
    pub error: Option<String>,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.unique
            && self.conjecture1
            && self.conjecture2 != Some(false)
            && self.conjecture3
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub pairs: Vec<PairReport>,
}

impl ConjectureReport {
    pub fn all_passed(&self) -> bool {
        self.pairs.iter().all(PairReport::passed)
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for p in &self.pairs {
            map.insert(
                format!("{},{}", p.t, p.z),
                json!({
                    "t_leq_z": p.t_leq_z,
                    "sign": p.sign,
                    "p": p.p.to_string(),
                    "X": p.x.as_ref().map(ToString::to_string),
                    "determinant": p.determinant.as_ref().map(ToString::to_string),
                    "unique": p.unique,
                    "conjecture1": p.conjecture1,
                    "conjecture2": p.conjecture2,
                    "conjecture3": p.conjecture3,
                    "error": p.error,
                    "pass": p.passed(),
                }),
            );
        }
        json!({ "schema": 1, "pairs": map, "all_passed": self.all_passed() })
    }
}

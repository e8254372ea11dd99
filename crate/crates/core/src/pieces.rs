//! Combinatorics of pieces: Bédard sequences and their inverse, the groups
//! `N_{J,δ}`, the automorphisms `τ_w`, the closure order `≤_J`, piece
//! dimensions and the Hecke operators `μ_J`, `e_w`, `E_{w,J,n}`.
//!
//! Throughout, `δJ` is the image of `J` under the diagram automorphism `δ`,
//! and pieces are indexed by `^{δJ}W`, the elements with no left descent in
//! `δJ`.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{CoxeterSystem, DiagramAutomorphism, ElemId, GenSet};
use crate::hecke::{HeckeAlgebra, HeckeElement, HeckeError, Normalization};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PiecesError {
    #[error("{0} is not a minimal left coset representative for ^δJ")]
    NotInLeftQuotient(String),
    #[error("invalid Bédard sequence: {0}")]
    InvalidSequence(String),
    #[error("{0} lies outside the parabolic subgroup W_{1}")]
    OutsideParabolic(String, String),
    #[error("piece dimensions need a type B system")]
    UnsupportedType,
    #[error("E_(w,J,n) is defined for n >= {n0}, got n = {n}")]
    BelowStabilization { n: usize, n0: usize },
    #[error("the operators act on the geometric normalization only")]
    WrongNormalization,
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// The sequence `(J_n, w_n)` attached to `w ∈ ^{δJ}W`, listed for
/// `n = 0..=n0` where `n0` is the first index after which it is constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BedardData {
    pub j: GenSet,
    pub delta: DiagramAutomorphism,
    pub w: ElemId,
    pub sequence: Vec<(GenSet, ElemId)>,
    pub j_infinity: GenSet,
    pub w_infinity: ElemId,
    pub n0: usize,
}

impl BedardData {
    /// `J_n`, constant from `n0` on.
    pub fn j_at(&self, n: usize) -> GenSet {
        self.sequence[n.min(self.n0)].0
    }

    pub fn w_at(&self, n: usize) -> ElemId {
        self.sequence[n.min(self.n0)].1
    }

    /// `δ(J_∞)`, the generators of the parabolic where `τ_w` acts.
    pub fn stable_parabolic(&self) -> GenSet {
        self.delta.apply_set(self.j_infinity)
    }
}

/// `J ∩ δ⁻¹(Ad(x) J)`.
fn next_j(sys: &CoxeterSystem, delta: &DiagramAutomorphism, j: GenSet, x: ElemId) -> GenSet {
    j.intersection(delta.inverse().apply_set(sys.conjugate_subset(x, j)))
}

fn require_left_quotient(sys: &CoxeterSystem, dj: GenSet, w: ElemId) -> Result<(), PiecesError> {
    if sys.in_left_quotient(w, dj) {
        Ok(())
    } else {
        Err(PiecesError::NotInLeftQuotient(sys.word_string_id(w)))
    }
}

/// `J_0 = J`, `J_n = J_{n-1} ∩ δ⁻¹(Ad(w_{n-1}) J_{n-1})`,
/// `w_n = min(W_{δJ} w W_{J_n})`.
pub fn bedard_sequence(
    sys: &CoxeterSystem,
    j: GenSet,
    delta: &DiagramAutomorphism,
    w: ElemId,
) -> Result<BedardData, PiecesError> {
    let dj = delta.apply_set(j);
    require_left_quotient(sys, dj, w)?;
    let mut sequence = vec![(j, sys.double_coset_min(dj, j, w))];
    loop {
        let (jn, wn) = *sequence.last().unwrap();
        let jnext = next_j(sys, delta, jn, wn);
        if jnext == jn {
            break;
        }
        sequence.push((jnext, sys.double_coset_min(dj, jnext, w)));
    }
    let n0 = sequence.len() - 1;
    let (j_infinity, w_infinity) = sequence[n0];
    Ok(BedardData { j, delta: delta.clone(), w, sequence, j_infinity, w_infinity, n0 })
}

/// Checks that `seq` is a (stabilized) element of `𝒯(J, δ)` and returns its
/// limit `w_∞`.
pub fn kappa_inverse(
    sys: &CoxeterSystem,
    j: GenSet,
    delta: &DiagramAutomorphism,
    seq: &[(GenSet, ElemId)],
) -> Result<ElemId, PiecesError> {
    let bad = |msg: String| Err(PiecesError::InvalidSequence(msg));
    let Some(&(j0, _)) = seq.first() else {
        return bad("empty sequence".into());
    };
    if j0 != j {
        return bad(format!("J_0 = {j0} differs from J = {j}"));
    }
    for (n, &(jn, wn)) in seq.iter().enumerate() {
        let djn = delta.apply_set(jn);
        if !(sys.in_left_quotient(wn, djn) && sys.in_right_quotient(wn, jn)) {
            return bad(format!("w_{n} is not in ^(δJ_{n})W^(J_{n})"));
        }
        if n == 0 {
            continue;
        }
        let (jp, wp) = seq[n - 1];
        if jn != next_j(sys, delta, jp, wp) {
            return bad(format!("J_{n} does not follow from (J_{}, w_{})", n - 1, n - 1));
        }
        let (head, _) = sys.right_coset_decomposition(wn, jp);
        if head != sys.right_coset_decomposition(wp, jp).0 {
            return bad(format!("w_{n} is not in w_{} W_(J_{})", n - 1, n - 1));
        }
    }
    let &(jl, wl) = seq.last().unwrap();
    if next_j(sys, delta, jl, wl) != jl {
        return bad("sequence has not stabilized".into());
    }
    Ok(wl)
}

/// `N_{J,δ} = {w ∈ ^{δJ}W^J : w J w⁻¹ = δJ}`.
pub fn enumerate_n(sys: &CoxeterSystem, j: GenSet, delta: &DiagramAutomorphism) -> Vec<ElemId> {
    let dj = delta.apply_set(j);
    sys.double_coset_reps(dj, j)
        .into_iter()
        .filter(|&w| {
            j.iter().all(|s| sys.conjugate_generator(w, s).is_some()) && sys.conjugate_subset(w, j) == dj
        })
        .collect()
}

/// `τ_w(x) = w δ⁻¹(x) w⁻¹` on `W_{δ(J_∞)}`.
pub fn tau_apply(sys: &CoxeterSystem, data: &BedardData, x: ElemId) -> Result<ElemId, PiecesError> {
    let k = data.stable_parabolic();
    if !sys.in_parabolic(x, k) {
        return Err(PiecesError::OutsideParabolic(sys.word_string_id(x), k.to_string()));
    }
    let dx = data.delta.inverse().apply_id(sys, x);
    Ok(sys.mul_id(sys.mul_id(data.w, dx), sys.inv_id(data.w)))
}

/// `w1 ≤_J w2` iff `δ(u) w1 u⁻¹ ≤ w2` for some `u ∈ W_J`.
pub fn closure_leq_j(
    sys: &CoxeterSystem,
    j: GenSet,
    delta: &DiagramAutomorphism,
    w1: ElemId,
    w2: ElemId,
) -> Result<bool, PiecesError> {
    let dj = delta.apply_set(j);
    require_left_quotient(sys, dj, w1)?;
    require_left_quotient(sys, dj, w2)?;
    Ok(sys.parabolic_ids(j).into_iter().any(|u| {
        let conj = sys.mul_id(sys.mul_id(delta.apply_id(sys, u), w1), sys.inv_id(u));
        sys.bruhat_leq_id(conj, w2)
    }))
}

/// Covering relations of `≤_J` on `^{δJ}W`, as `(lower, upper)` pairs.
pub fn closure_hasse(sys: &CoxeterSystem, j: GenSet, delta: &DiagramAutomorphism) -> Vec<(ElemId, ElemId)> {
    let nodes = sys.left_quotient(delta.apply_set(j));
    let n = nodes.len();
    let mut leq = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            leq[a][b] = closure_leq_j(sys, j, delta, nodes[a], nodes[b]).expect("nodes in ^δJ W");
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq[a][b] {
                continue;
            }
            let covered = (0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b]);
            if !covered {
                edges.push((nodes[a], nodes[b]));
            }
        }
    }
    edges
}

/// Number of positive roots of the type `B_n` parabolic `J`: the component
/// through generator 1 is of type `B_k` (`k²` roots), the others of type
/// `A_k` (`k(k+1)/2`).
pub fn positive_roots_type_b(j: GenSet) -> usize {
    let labels = j.labels();
    let mut total = 0;
    let mut i = 0;
    while i < labels.len() {
        let start = labels[i];
        let mut end = start;
        while i + 1 < labels.len() && labels[i + 1] == end + 1 {
            i += 1;
            end += 1;
        }
        let k = end - start + 1;
        total += if start == 1 { k * k } else { k * (k + 1) / 2 };
        i += 1;
    }
    total
}

/// `l(w) + dim G - dim 𝒫_J` for `G` of type `B_n`: `dim G = 2n² + n` and
/// `dim 𝒫_J = n² - #Φ⁺_J`.
pub fn piece_dimension(
    sys: &CoxeterSystem,
    j: GenSet,
    delta: &DiagramAutomorphism,
    w: ElemId,
) -> Result<usize, PiecesError> {
    let n = sys.type_b_rank().ok_or(PiecesError::UnsupportedType)?;
    require_left_quotient(sys, delta.apply_set(j), w)?;
    let dim_g = 2 * n * n + n;
    let dim_flags = n * n - positive_roots_type_b(j);
    Ok(sys.len_id(w) as usize + dim_g - dim_flags)
}

fn require_geometric(h: &HeckeElement) -> Result<(), PiecesError> {
    match h.normalization() {
        Normalization::Geometric => Ok(()),
        Normalization::Weighted(_) => Err(PiecesError::WrongNormalization),
    }
}

/// `μ_J(T_y) = T_{δ⁻¹(y_*)} T_{y^*}` where `y = y^* y_*`,
/// `y^* ∈ W^{δJ}`, `y_* ∈ W_{δJ}`.
pub fn mu_j(
    alg: &HeckeAlgebra<'_>,
    h: &HeckeElement,
    j: GenSet,
    delta: &DiagramAutomorphism,
) -> Result<HeckeElement, PiecesError> {
    require_geometric(h)?;
    let sys = alg.system();
    let dj = delta.apply_set(j);
    let dinv = delta.inverse();
    let mut out = alg.zero();
    for (&y, c) in h.terms() {
        let (upper, lower) = sys.right_coset_decomposition(y, dj);
        let left = alg.basis(dinv.apply_id(sys, lower));
        out.add_scaled(&alg.mul_basis_right(&left, upper), c);
    }
    Ok(out)
}

/// `e_w(T_y) = T_{y_1}` if `y = w⁻¹ y_1` with `y_1 ∈ W_{δ(J_∞)}`, else `0`.
pub fn e_w(alg: &HeckeAlgebra<'_>, h: &HeckeElement, data: &BedardData) -> Result<HeckeElement, PiecesError> {
    require_geometric(h)?;
    let sys = alg.system();
    let k = data.stable_parabolic();
    let mut out = alg.zero();
    for (&y, c) in h.terms() {
        let y1 = sys.mul_id(data.w, y);
        if sys.in_parabolic(y1, k) {
            out.add_term(y1, c);
        }
    }
    Ok(out)
}

/// `E_{w,J,n} = e_w ∘ μ_{J_{n-1}} ∘ ... ∘ μ_{J_0}`, defined for `n >= n0`.
pub fn e_operator(
    alg: &HeckeAlgebra<'_>,
    h: &HeckeElement,
    data: &BedardData,
    n: usize,
) -> Result<HeckeElement, PiecesError> {
    if n < data.n0 {
        return Err(PiecesError::BelowStabilization { n, n0: data.n0 });
    }
    let mut cur = h.clone();
    for k in 0..n {
        cur = mu_j(alg, &cur, data.j_at(k), &data.delta)?;
    }
    e_w(alg, &cur, data)
}

/// `τ_w` extended to `H_w` by `T_y ↦ T_{τ_w(y)}`.
pub fn tau_hecke(
    sys: &CoxeterSystem,
    data: &BedardData,
    h: &HeckeElement,
) -> Result<HeckeElement, PiecesError> {
    let mut out = HeckeElement::zero(h.normalization().clone());
    for (&y, c) in h.terms() {
        out.add_term(tau_apply(sys, data, y)?, c);
    }
    Ok(out)
}

#[derive(Serialize)]
struct BedardRow {
    w: String,
    sequence: Vec<(Vec<usize>, String)>,
    j_infinity: Vec<usize>,
    w_infinity: String,
    n0: usize,
    dimension: Option<usize>,
}

/// JSON array with one record per `w ∈ ^{δJ}W`.
pub fn bedard_table_json(
    sys: &CoxeterSystem,
    j: GenSet,
    delta: &DiagramAutomorphism,
) -> Result<serde_json::Value, PiecesError> {
    let mut rows = Vec::new();
    for w in sys.left_quotient(delta.apply_set(j)) {
        let d = bedard_sequence(sys, j, delta, w)?;
        rows.push(BedardRow {
            w: sys.word_string_id(w),
            sequence: d.sequence.iter().map(|&(jn, wn)| (jn.labels(), sys.word_string_id(wn))).collect(),
            j_infinity: d.j_infinity.labels(),
            w_infinity: sys.word_string_id(d.w_infinity),
            n0: d.n0,
            dimension: piece_dimension(sys, j, delta, w).ok(),
        });
    }
    Ok(serde_json::to_value(rows).expect("plain data serializes"))
}

/// DOT digraph of the covering relations, edges pointing upward.
pub fn hasse_dot(sys: &CoxeterSystem, nodes: &[ElemId], edges: &[(ElemId, ElemId)]) -> String {
    let mut out = String::from("digraph closure {\n  rankdir=BT;\n");
    for &n in nodes {
        let _ = writeln!(out, "  \"{}\";", sys.word_string_id(n));
    }
    for &(a, b) in edges {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", sys.word_string_id(a), sys.word_string_id(b));
    }
    out.push_str("}\n");
    out
}

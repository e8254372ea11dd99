//! Finite Coxeter groups.
//!
//! A [`CoxeterSystem`] enumerates its group once at construction and keeps
//! multiplication-by-generator tables, so every element operation afterwards
//! is a table walk. Type `B_n` uses signed permutations as the canonical
//! representation; any other finite Coxeter matrix uses the
//! lexicographically least reduced word.
//!
//! Generators are addressed by 0-based [`Gen`] indices. Their printable
//! labels default to `1..=n`, so the element `s_3 s_2 s_1 s_2 s_3` of `B_4`
//! is written `"32123"` and the identity `"∅"`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// 0-based generator index.
pub type Gen = usize;

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// The printed form of the identity element.
pub const IDENTITY_WORD: &str = "∅";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("Coxeter matrix must be square and nonempty")]
    NotSquare,
    #[error("Coxeter matrix entry m({0},{0}) must be 1")]
    BadDiagonal(usize),
    #[error("Coxeter matrix is not symmetric at ({0},{1})")]
    NonSymmetric(usize, usize),
    #[error("off-diagonal Coxeter matrix entry m({0},{1}) = {2} must be >= 2")]
    BadEntry(usize, usize, u32),
    #[error("group has more than {0} elements (infinite or too large)")]
    CapExceeded(usize),
    #[error("unknown group type `{0}`")]
    UnknownType(String),
    #[error("invalid generator `{0}`")]
    InvalidGenerator(String),
    #[error("rank {0} is too large for this representation")]
    RankTooLarge(usize),
    #[error("permutation does not define a diagram automorphism: {0}")]
    BadAutomorphism(String),
    #[error("element does not belong to this group")]
    ForeignElement,
}

/// Canonical form of a group element. Equality is representation equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement(Repr);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Repr {
    /// Images `w(1), ..., w(n)` of a signed permutation.
    Signed(Box<[i8]>),
    /// Lexicographically least reduced word.
    Word(Box<[u8]>),
}

impl GroupElement {
    /// The signed-permutation images, for type `B` systems.
    pub fn signed_permutation(&self) -> Option<&[i8]> {
        match &self.0 {
            Repr::Signed(p) => Some(p),
            Repr::Word(_) => None,
        }
    }
}

/// Handle to an element of a specific [`CoxeterSystem`]; ids are assigned in
/// order of (length, reduced word), so id 0 is always the identity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ElemId(pub u32);

impl ElemId {
    pub const IDENTITY: ElemId = ElemId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A subset of the generators, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GenSet(u32);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn full(rank: usize) -> Self {
        GenSet(((1u64 << rank) - 1) as u32)
    }

    pub fn from_gens<I: IntoIterator<Item = Gen>>(gens: I) -> Self {
        GenSet(gens.into_iter().fold(0, |m, g| m | (1 << g)))
    }

    /// From 1-based generator labels, e.g. `[1, 2]` for `{s_1, s_2}`.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        Self::from_gens(labels.into_iter().map(|l| l - 1))
    }

    pub fn contains(self, g: Gen) -> bool {
        self.0 & (1 << g) != 0
    }

    pub fn insert(&mut self, g: Gen) {
        self.0 |= 1 << g;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: GenSet) -> GenSet {
        GenSet(self.0 & other.0)
    }

    pub fn union(self, other: GenSet) -> GenSet {
        GenSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Gen> {
        (0..32).filter(move |&g| self.contains(g))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// 1-based labels in ascending order.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|g| g + 1).collect()
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `{1,2}` with 1-based labels.
impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// What to build: a named type (`"B4"`, `"A3"`) or an explicit Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Tag(String),
    Matrix(Vec<Vec<u32>>),
}

pub struct CoxeterSystem {
    rank: usize,
    matrix: Vec<Vec<u32>>,
    type_tag: Option<String>,
    gen_names: Vec<String>,
    type_b_rank: Option<usize>,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, ElemId>,
    length: Vec<u32>,
    words: Vec<Vec<Gen>>,
    rmul: Vec<u32>,
    lmul: Vec<u32>,
    inverse: Vec<u32>,
    lower_intervals: OnceLock<Vec<BitSet>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("type", &self.type_tag)
            .field("rank", &self.rank)
            .field("order", &self.order())
            .finish()
    }
}

impl CoxeterSystem {
    pub fn build(group: &GroupSpec) -> Result<Self, CoxeterError> {
        Self::build_with_cap(group, DEFAULT_ELEMENT_CAP)
    }

    pub fn build_with_cap(group: &GroupSpec, cap: usize) -> Result<Self, CoxeterError> {
        match group {
            GroupSpec::Tag(tag) => Self::from_tag(tag, cap),
            GroupSpec::Matrix(m) => Self::from_matrix(m.clone(), None, cap),
        }
    }

    /// Type `B_n` with `s_1` the sign change in position 1 and `s_i` (`i >= 2`)
    /// the transposition of positions `i-1, i`; `m(s_1, s_2) = 4`.
    pub fn type_b(n: usize) -> Result<Self, CoxeterError> {
        Self::from_tag(&format!("B{n}"), DEFAULT_ELEMENT_CAP)
    }

    pub fn type_a(n: usize) -> Result<Self, CoxeterError> {
        Self::from_tag(&format!("A{n}"), DEFAULT_ELEMENT_CAP)
    }

    fn from_tag(tag: &str, cap: usize) -> Result<Self, CoxeterError> {
        let unknown = || CoxeterError::UnknownType(tag.to_string());
        let (family, n) = tag.split_at(1.min(tag.len()));
        let n: usize = n.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        let mut m = vec![vec![2u32; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for i in 1..n {
            m[i - 1][i] = 3;
            m[i][i - 1] = 3;
        }
        match family {
            "A" => Self::from_matrix(m, Some(tag.to_string()), cap),
            "B" => {
                if n >= 2 {
                    m[0][1] = 4;
                    m[1][0] = 4;
                }
                if n > i8::MAX as usize {
                    return Err(CoxeterError::RankTooLarge(n));
                }
                validate_matrix(&m)?;
                let (elements, length, rmul) = enumerate_signed(n, cap)?;
                Ok(Self::assemble(m, Some(tag.to_string()), Some(n), elements, length, rmul))
            }
            _ => Err(unknown()),
        }
    }

    /// Any finite Coxeter group given by its matrix. Enumeration stops with
    /// [`CoxeterError::CapExceeded`] after `cap` elements.
    pub fn from_matrix(
        matrix: Vec<Vec<u32>>,
        type_tag: Option<String>,
        cap: usize,
    ) -> Result<Self, CoxeterError> {
        validate_matrix(&matrix)?;
        if matrix.len() > 32 {
            return Err(CoxeterError::RankTooLarge(matrix.len()));
        }
        let (elements, length, rmul) = enumerate_generic(&matrix, cap)?;
        Ok(Self::assemble(matrix, type_tag, None, elements, length, rmul))
    }

    /// Replaces the printable generator labels. Every label must be a single
    /// character for word strings to stay unambiguous.
    pub fn with_generator_names(mut self, names: &[&str]) -> Result<Self, CoxeterError> {
        if names.len() != self.rank || names.iter().any(|n| n.chars().count() != 1) {
            return Err(CoxeterError::InvalidGenerator(names.join(",")));
        }
        self.gen_names = names.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    /// Sorts the BFS output by (length, least reduced word) and builds the
    /// derived tables.
    fn assemble(
        matrix: Vec<Vec<u32>>,
        type_tag: Option<String>,
        type_b_rank: Option<usize>,
        elements: Vec<GroupElement>,
        length: Vec<u32>,
        rmul: Vec<u32>,
    ) -> Self {
        let rank = matrix.len();
        let count = elements.len();
        let inverse = inverse_table(rank, &length, &rmul);
        let lmul = left_table(rank, &rmul, &inverse);

        // Lex-least reduced words, built greedily from the smallest left descent.
        let mut raw_words: Vec<Vec<Gen>> = vec![Vec::new(); count];
        let mut by_len: Vec<usize> = (0..count).collect();
        by_len.sort_by_key(|&i| length[i]);
        for &x in &by_len {
            if length[x] == 0 {
                continue;
            }
            let s = (0..rank)
                .find(|&s| length[lmul[x * rank + s] as usize] < length[x])
                .expect("nonidentity element has a left descent");
            let rest = lmul[x * rank + s] as usize;
            let mut w = Vec::with_capacity(length[x] as usize);
            w.push(s);
            w.extend_from_slice(&raw_words[rest]);
            raw_words[x] = w;
        }

        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| (length[a], &raw_words[a]).cmp(&(length[b], &raw_words[b])));
        let mut new_id = vec![0u32; count];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new as u32;
        }
        let remap = |table: &[u32]| -> Vec<u32> {
            let mut out = vec![0u32; table.len()];
            for &old in &order {
                for s in 0..rank {
                    out[new_id[old] as usize * rank + s] = new_id[table[old * rank + s] as usize];
                }
            }
            out
        };
        let rmul_new = remap(&rmul);
        let lmul_new = remap(&lmul);
        let inverse_new: Vec<u32> = order.iter().map(|&o| new_id[inverse[o] as usize]).collect();
        let length_new: Vec<u32> = order.iter().map(|&o| length[o]).collect();
        let mut elements_opt: Vec<Option<GroupElement>> = elements.into_iter().map(Some).collect();
        let elements_new: Vec<GroupElement> =
            order.iter().map(|&o| elements_opt[o].take().unwrap()).collect();
        let words_new: Vec<Vec<Gen>> = order.iter().map(|&o| raw_words[o].clone()).collect();
        let index = elements_new.iter().enumerate().map(|(i, e)| (e.clone(), ElemId(i as u32))).collect();

        CoxeterSystem {
            rank,
            matrix,
            type_tag,
            gen_names: (1..=rank).map(|i| i.to_string()).collect(),
            type_b_rank,
            elements: elements_new,
            index,
            length: length_new,
            words: words_new,
            rmul: rmul_new,
            lmul: lmul_new,
            inverse: inverse_new,
            lower_intervals: OnceLock::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn m(&self, s: Gen, t: Gen) -> u32 {
        self.matrix[s][t]
    }

    pub fn type_tag(&self) -> Option<&str> {
        self.type_tag.as_deref()
    }

    /// `Some(n)` for the signed-permutation model of `B_n`.
    pub fn type_b_rank(&self) -> Option<usize> {
        self.type_b_rank
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn all_generators(&self) -> GenSet {
        GenSet::full(self.rank)
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.order() as u32).map(ElemId)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, id: ElemId) -> &GroupElement {
        &self.elements[id.index()]
    }

    pub fn id(&self, w: &GroupElement) -> Result<ElemId, CoxeterError> {
        self.index.get(w).copied().ok_or(CoxeterError::ForeignElement)
    }

    pub fn identity(&self) -> GroupElement {
        self.elements[0].clone()
    }

    pub fn generator(&self, s: Gen) -> GroupElement {
        self.element(self.rmul_gen(ElemId::IDENTITY, s)).clone()
    }

    // ---- id-level arithmetic -------------------------------------------------

    pub fn len_id(&self, w: ElemId) -> u32 {
        self.length[w.index()]
    }

    /// `w * s`.
    pub fn rmul_gen(&self, w: ElemId, s: Gen) -> ElemId {
        ElemId(self.rmul[w.index() * self.rank + s])
    }

    /// `s * w`.
    pub fn lmul_gen(&self, s: Gen, w: ElemId) -> ElemId {
        ElemId(self.lmul[w.index() * self.rank + s])
    }

    pub fn inv_id(&self, w: ElemId) -> ElemId {
        ElemId(self.inverse[w.index()])
    }

    pub fn mul_id(&self, a: ElemId, b: ElemId) -> ElemId {
        self.word_id(b).iter().fold(a, |acc, &s| self.rmul_gen(acc, s))
    }

    /// Lexicographically least reduced word.
    pub fn word_id(&self, w: ElemId) -> &[Gen] {
        &self.words[w.index()]
    }

    pub fn is_right_descent(&self, w: ElemId, s: Gen) -> bool {
        self.len_id(self.rmul_gen(w, s)) < self.len_id(w)
    }

    pub fn is_left_descent(&self, s: Gen, w: ElemId) -> bool {
        self.len_id(self.lmul_gen(s, w)) < self.len_id(w)
    }

    pub fn right_descents_id(&self, w: ElemId) -> GenSet {
        GenSet::from_gens((0..self.rank).filter(|&s| self.is_right_descent(w, s)))
    }

    pub fn left_descents_id(&self, w: ElemId) -> GenSet {
        GenSet::from_gens((0..self.rank).filter(|&s| self.is_left_descent(s, w)))
    }

    pub fn from_word_id(&self, word: &[Gen]) -> Result<ElemId, CoxeterError> {
        word.iter().try_fold(ElemId::IDENTITY, |acc, &s| {
            if s >= self.rank {
                Err(CoxeterError::InvalidGenerator(s.to_string()))
            } else {
                Ok(self.rmul_gen(acc, s))
            }
        })
    }

    pub fn longest_id(&self) -> ElemId {
        ElemId(self.order() as u32 - 1)
    }

    // ---- element-level API ----------------------------------------------------

    pub fn canonical_form(&self, word: &[Gen]) -> Result<GroupElement, CoxeterError> {
        Ok(self.element(self.from_word_id(word)?).clone())
    }

    pub fn product(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, CoxeterError> {
        Ok(self.element(self.mul_id(self.id(a)?, self.id(b)?)).clone())
    }

    pub fn inverse(&self, w: &GroupElement) -> Result<GroupElement, CoxeterError> {
        Ok(self.element(self.inv_id(self.id(w)?)).clone())
    }

    pub fn length(&self, w: &GroupElement) -> Result<u32, CoxeterError> {
        Ok(self.len_id(self.id(w)?))
    }

    pub fn reduced_word(&self, w: &GroupElement) -> Result<Vec<Gen>, CoxeterError> {
        Ok(self.word_id(self.id(w)?).to_vec())
    }

    pub fn left_descents(&self, w: &GroupElement) -> Result<GenSet, CoxeterError> {
        Ok(self.left_descents_id(self.id(w)?))
    }

    pub fn right_descents(&self, w: &GroupElement) -> Result<GenSet, CoxeterError> {
        Ok(self.right_descents_id(self.id(w)?))
    }

    // ---- words as strings -------------------------------------------------------

    /// Parses `"32123"`, `"e,f,e"` or `"∅"`/`""` using the generator labels.
    pub fn parse_word(&self, s: &str) -> Result<Vec<Gen>, CoxeterError> {
        let s = s.trim();
        if s.is_empty() || s == IDENTITY_WORD {
            return Ok(Vec::new());
        }
        let tokens: Vec<String> = if s.contains([',', ' ']) {
            s.split([',', ' ']).filter(|t| !t.is_empty()).map(str::to_string).collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        tokens
            .iter()
            .map(|t| {
                self.gen_names
                    .iter()
                    .position(|n| n == t)
                    .ok_or_else(|| CoxeterError::InvalidGenerator(t.clone()))
            })
            .collect()
    }

    pub fn parse_id(&self, s: &str) -> Result<ElemId, CoxeterError> {
        self.from_word_id(&self.parse_word(s)?)
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement, CoxeterError> {
        Ok(self.element(self.parse_id(s)?).clone())
    }

    /// Renders a generator word with the system's labels.
    pub fn format_word(&self, word: &[Gen]) -> String {
        if word.is_empty() {
            return IDENTITY_WORD.to_string();
        }
        let sep = if self.gen_names.iter().all(|n| n.chars().count() == 1) { "" } else { "," };
        word.iter().map(|&g| self.gen_names[g].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn word_string_id(&self, w: ElemId) -> String {
        self.format_word(self.word_id(w))
    }

    pub fn word_string(&self, w: &GroupElement) -> Result<String, CoxeterError> {
        Ok(self.word_string_id(self.id(w)?))
    }

    // ---- Bruhat order -------------------------------------------------------------

    /// `y <= w` in Bruhat order, by scanning one reduced word of `w`: for a
    /// right descent `s` of `w`, `y <= w` iff `min(y, ys) <= ws`.
    pub fn bruhat_leq_id(&self, mut y: ElemId, mut w: ElemId) -> bool {
        loop {
            if self.len_id(y) > self.len_id(w) {
                return false;
            }
            if self.len_id(y) == self.len_id(w) {
                return y == w;
            }
            if y == ElemId::IDENTITY {
                return true;
            }
            let s = *self.word_id(w).last().unwrap();
            w = self.rmul_gen(w, s);
            let ys = self.rmul_gen(y, s);
            if self.len_id(ys) < self.len_id(y) {
                y = ys;
            }
        }
    }

    pub fn bruhat_leq(&self, y: &GroupElement, w: &GroupElement) -> Result<bool, CoxeterError> {
        Ok(self.bruhat_leq_id(self.id(y)?, self.id(w)?))
    }

    /// For every `w`, the set `{y : y <= w}` as a bitset over element ids.
    /// Built once on first use.
    pub fn lower_intervals(&self) -> &[BitSet] {
        self.lower_intervals.get_or_init(|| {
            let n = self.order();
            let mut out: Vec<BitSet> = Vec::with_capacity(n);
            for w in self.ids() {
                let mut set = BitSet::new(n);
                if w == ElemId::IDENTITY {
                    set.insert(0);
                } else {
                    // [e, w] = [e, ws] ∪ [e, ws]·s for a right descent s.
                    let s = *self.word_id(w).last().unwrap();
                    let ws = self.rmul_gen(w, s);
                    for y in out[ws.index()].iter() {
                        set.insert(y);
                        set.insert(self.rmul_gen(ElemId(y as u32), s).index());
                    }
                }
                out.push(set);
            }
            out
        })
    }

    // ---- parabolic subgroups and cosets -----------------------------------------

    /// Elements of `W_J` in id order.
    pub fn parabolic_ids(&self, j: GenSet) -> Vec<ElemId> {
        let mut seen = vec![false; self.order()];
        let mut queue = VecDeque::from([ElemId::IDENTITY]);
        seen[0] = true;
        let mut out = Vec::new();
        while let Some(w) = queue.pop_front() {
            out.push(w);
            for s in j.iter() {
                let ws = self.rmul_gen(w, s);
                if !seen[ws.index()] {
                    seen[ws.index()] = true;
                    queue.push_back(ws);
                }
            }
        }
        out.sort();
        out
    }

    pub fn parabolic_elements(&self, j: GenSet) -> Vec<GroupElement> {
        self.parabolic_ids(j).into_iter().map(|w| self.element(w).clone()).collect()
    }

    pub fn in_parabolic(&self, w: ElemId, j: GenSet) -> bool {
        self.word_id(w).iter().all(|&s| j.contains(s))
    }

    /// The longest element `ω_J` of `W_J`.
    pub fn longest_in(&self, j: GenSet) -> ElemId {
        let mut w = ElemId::IDENTITY;
        while let Some(s) = j.iter().find(|&s| !self.is_right_descent(w, s)) {
            w = self.rmul_gen(w, s);
        }
        w
    }

    /// `w ∈ W^J`: no right descent in `J`.
    pub fn in_right_quotient(&self, w: ElemId, j: GenSet) -> bool {
        self.right_descents_id(w).intersection(j).is_empty()
    }

    /// `w ∈ ^J W`: no left descent in `J`.
    pub fn in_left_quotient(&self, w: ElemId, j: GenSet) -> bool {
        self.left_descents_id(w).intersection(j).is_empty()
    }

    /// `w = w^J · w_J` with `w^J ∈ W^J`, `w_J ∈ W_J`; returns `(w^J, w_J)`.
    pub fn right_coset_decomposition(&self, w: ElemId, j: GenSet) -> (ElemId, ElemId) {
        let mut head = w;
        let mut tail_rev = Vec::new();
        while let Some(s) = j.iter().find(|&s| self.is_right_descent(head, s)) {
            head = self.rmul_gen(head, s);
            tail_rev.push(s);
        }
        let tail = tail_rev.iter().rev().fold(ElemId::IDENTITY, |acc, &s| self.rmul_gen(acc, s));
        (head, tail)
    }

    /// `w = w_J · ^J w` with `w_J ∈ W_J`, `^J w ∈ ^J W`; returns `(w_J, ^J w)`.
    pub fn left_coset_decomposition(&self, w: ElemId, j: GenSet) -> (ElemId, ElemId) {
        let mut tail = w;
        let mut head = Vec::new();
        while let Some(s) = j.iter().find(|&s| self.is_left_descent(s, tail)) {
            tail = self.lmul_gen(s, tail);
            head.push(s);
        }
        let head = self.from_word_id(&head).unwrap();
        (head, tail)
    }

    /// The unique element of `^K W^J` in the double coset `W_K w W_J`.
    pub fn double_coset_min(&self, k: GenSet, j: GenSet, w: ElemId) -> ElemId {
        let mut x = w;
        loop {
            if let Some(s) = k.iter().find(|&s| self.is_left_descent(s, x)) {
                x = self.lmul_gen(s, x);
            } else if let Some(s) = j.iter().find(|&s| self.is_right_descent(x, s)) {
                x = self.rmul_gen(x, s);
            } else {
                return x;
            }
        }
    }

    /// `^K W^J` in id order.
    pub fn double_coset_reps(&self, k: GenSet, j: GenSet) -> Vec<ElemId> {
        self.ids().filter(|&w| self.in_left_quotient(w, k) && self.in_right_quotient(w, j)).collect()
    }

    /// `^J W` in id order.
    pub fn left_quotient(&self, j: GenSet) -> Vec<ElemId> {
        self.ids().filter(|&w| self.in_left_quotient(w, j)).collect()
    }

    /// `w s w⁻¹` if it is a simple reflection.
    pub fn conjugate_generator(&self, w: ElemId, s: Gen) -> Option<Gen> {
        let c = self.mul_id(self.rmul_gen(w, s), self.inv_id(w));
        (self.len_id(c) == 1).then(|| self.word_id(c)[0])
    }

    /// `Ad(w)J ∩ I`: the simple reflections of the form `w s w⁻¹`, `s ∈ J`.
    pub fn conjugate_subset(&self, w: ElemId, j: GenSet) -> GenSet {
        GenSet::from_gens(j.iter().filter_map(|s| self.conjugate_generator(w, s)))
    }
}

#[allow(clippy::needless_range_loop)]
fn validate_matrix(m: &[Vec<u32>]) -> Result<(), CoxeterError> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(CoxeterError::NotSquare);
    }
    for i in 0..n {
        if m[i][i] != 1 {
            return Err(CoxeterError::BadDiagonal(i + 1));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if m[i][j] != m[j][i] {
                return Err(CoxeterError::NonSymmetric(i + 1, j + 1));
            }
            if m[i][j] < 2 {
                return Err(CoxeterError::BadEntry(i + 1, j + 1, m[i][j]));
            }
        }
    }
    Ok(())
}

type Enumeration = (Vec<GroupElement>, Vec<u32>, Vec<u32>);

/// Breadth-first closure for signed permutations under right multiplication
/// by generators.
fn enumerate_signed(n: usize, cap: usize) -> Result<Enumeration, CoxeterError> {
    let apply = |p: &[i8], s: Gen| -> Box<[i8]> {
        let mut q: Box<[i8]> = p.into();
        if s == 0 {
            q[0] = -q[0];
        } else {
            q.swap(s - 1, s);
        }
        q
    };
    let id: Box<[i8]> = (1..=n as i8).collect();
    let mut perms: Vec<Box<[i8]>> = vec![id.clone()];
    let mut index: HashMap<Box<[i8]>, u32> = HashMap::from([(id, 0)]);
    let mut length = vec![0u32];
    let mut rmul: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < perms.len() {
        for s in 0..n {
            let q = apply(&perms[head], s);
            let next = match index.get(&q) {
                Some(&i) => i,
                None => {
                    if perms.len() >= cap {
                        return Err(CoxeterError::CapExceeded(cap));
                    }
                    let i = perms.len() as u32;
                    index.insert(q.clone(), i);
                    perms.push(q);
                    length.push(length[head] + 1);
                    i
                }
            };
            rmul.push(next);
        }
        head += 1;
    }
    let elements = perms.into_iter().map(|p| GroupElement(Repr::Signed(p))).collect();
    Ok((elements, length, rmul))
}

/// Breadth-first closure using the geometric representation to decide
/// descents. The root `w(α_s)` has coordinates of a single sign and unit
/// norm, so the sign of their sum is far from zero.
fn enumerate_generic(m: &[Vec<u32>], cap: usize) -> Result<Enumeration, CoxeterError> {
    let n = m.len();
    let bilinear: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| -(std::f64::consts::PI / m[i][j] as f64).cos()).collect()).collect();
    // M·S_t changes column j by -2 B(α_t, α_j) · column t.
    let right_reflect = |mat: &mut Vec<f64>, t: Gen| {
        let col_t: Vec<f64> = (0..n).map(|r| mat[r * n + t]).collect();
        for j in 0..n {
            let c = 2.0 * bilinear[t][j];
            if c != 0.0 {
                for r in 0..n {
                    mat[r * n + j] -= c * col_t[r];
                }
            }
        }
    };
    let column_negative = |mat: &[f64], t: Gen| (0..n).map(|r| mat[r * n + t]).sum::<f64>() < 0.0;

    let identity: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect();
    // Per element: matrix of w, matrix of w⁻¹, normal form.
    let mut mats: Vec<Vec<f64>> = vec![identity.clone()];
    let mut inv_mats: Vec<Vec<f64>> = vec![identity];
    let mut words: Vec<Box<[u8]>> = vec![Box::new([])];
    let mut index: HashMap<Box<[u8]>, u32> = HashMap::from([(Box::<[u8]>::from([]), 0)]);
    let mut length = vec![0u32];
    let mut rmul: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < words.len() {
        for s in 0..n {
            if column_negative(&mats[head], s) {
                // ws < w: filled in below once ws is known.
                rmul.push(u32::MAX);
                continue;
            }
            let mut mat = mats[head].clone();
            right_reflect(&mut mat, s);
            // (ws)⁻¹ = s·w⁻¹
            let mut inv = inv_mats[head].clone();
            left_reflect(&mut inv, s, n, &bilinear);
            let target_len = length[head] + 1;
            let nf = normal_form(&inv, target_len as usize, n, &right_reflect, &column_negative);
            let next = match index.get(&nf) {
                Some(&i) => i,
                None => {
                    if words.len() >= cap {
                        return Err(CoxeterError::CapExceeded(cap));
                    }
                    let i = words.len() as u32;
                    index.insert(nf.clone(), i);
                    words.push(nf);
                    mats.push(mat);
                    inv_mats.push(inv);
                    length.push(target_len);
                    i
                }
            };
            rmul.push(next);
        }
        head += 1;
    }
    // Descending edges mirror ascending ones.
    for x in 0..words.len() {
        for s in 0..n {
            let y = rmul[x * n + s];
            if y != u32::MAX && length[y as usize] > length[x] {
                rmul[y as usize * n + s] = x as u32;
            }
        }
    }
    debug_assert!(rmul.iter().all(|&v| v != u32::MAX));
    let elements = words.into_iter().map(|w| GroupElement(Repr::Word(w))).collect();
    Ok((elements, length, rmul))
}

/// `S_s·M`: row `s` picks up `-2 Σ_j B(α_s, α_j)` times row `j`.
fn left_reflect(mat: &mut [f64], s: Gen, n: usize, bilinear: &[Vec<f64>]) {
    // (S_s)_{s j} = δ_{sj} - 2B(α_s, α_j); other rows are identity rows.
    let mut new_row = vec![0.0; n];
    for (j, b) in bilinear[s].iter().enumerate() {
        let coef = if j == s { 1.0 } else { 0.0 } - 2.0 * b;
        if coef != 0.0 {
            for c in 0..n {
                new_row[c] += coef * mat[j * n + c];
            }
        }
    }
    mat[s * n..(s + 1) * n].copy_from_slice(&new_row);
}

/// Lex-least reduced word of `w` from the matrix of `w⁻¹`: repeatedly strip
/// the smallest left descent `t` (where `w⁻¹(α_t) < 0`).
fn normal_form(
    inv: &[f64],
    len: usize,
    n: usize,
    right_reflect: &impl Fn(&mut Vec<f64>, Gen),
    column_negative: &impl Fn(&[f64], Gen) -> bool,
) -> Box<[u8]> {
    let mut cur = inv.to_vec();
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let t = (0..n).find(|&t| column_negative(&cur, t)).expect("descent exists");
        word.push(t as u8);
        // (t·w)⁻¹ = w⁻¹·t
        right_reflect(&mut cur, t);
    }
    word.into_boxed_slice()
}

fn inverse_table(rank: usize, length: &[u32], rmul: &[u32]) -> Vec<u32> {
    let count = length.len();
    let mut by_len: Vec<usize> = (0..count).collect();
    by_len.sort_by_key(|&i| length[i]);
    let mut inv = vec![u32::MAX; count];
    inv[by_len[0]] = by_len[0] as u32;
    // Each x of positive length is w·s for a shorter parent w; the inverse is
    // the reversed parent word evaluated from the identity.
    let mut parent: Vec<(u32, Gen)> = vec![(u32::MAX, 0); count];
    for &w in &by_len {
        for s in 0..rank {
            let x = rmul[w * rank + s] as usize;
            if length[x] > length[w] && parent[x].0 == u32::MAX {
                parent[x] = (w as u32, s);
            }
        }
    }
    // Build a word for each element, then evaluate its reverse.
    let mut word: Vec<Vec<Gen>> = vec![Vec::new(); count];
    for &x in &by_len {
        if length[x] == 0 {
            continue;
        }
        let (w, s) = parent[x];
        let mut wd = word[w as usize].clone();
        wd.push(s);
        word[x] = wd;
    }
    let identity = by_len[0];
    for x in 0..count {
        inv[x] = word[x].iter().rev().fold(identity, |acc, &s| rmul[acc * rank + s] as usize) as u32;
    }
    inv
}

/// `s·x = (x⁻¹·s)⁻¹`.
fn left_table(rank: usize, rmul: &[u32], inverse: &[u32]) -> Vec<u32> {
    let count = inverse.len();
    let mut lmul = vec![0u32; count * rank];
    for x in 0..count {
        for s in 0..rank {
            let xi = inverse[x] as usize;
            lmul[x * rank + s] = inverse[rmul[xi * rank + s] as usize];
        }
    }
    lmul
}

/// Fixed-size bitset over element ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(size: usize) -> Self {
        BitSet { words: vec![0; size.div_ceil(64)] }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| k * 64 + b))
    }
}

/// A permutation of the generators preserving the Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramAutomorphism {
    perm: Vec<Gen>,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        DiagramAutomorphism { perm: (0..rank).collect() }
    }

    pub fn new(sys: &CoxeterSystem, perm: Vec<Gen>) -> Result<Self, CoxeterError> {
        let n = sys.rank();
        let bad = |msg: &str| CoxeterError::BadAutomorphism(msg.to_string());
        if perm.len() != n {
            return Err(bad("wrong length"));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(bad("not a permutation"));
            }
            seen[p] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if sys.m(perm[i], perm[j]) != sys.m(i, j) {
                    return Err(bad("does not preserve the Coxeter matrix"));
                }
            }
        }
        Ok(DiagramAutomorphism { perm })
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn apply_gen(&self, s: Gen) -> Gen {
        self.perm[s]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        DiagramAutomorphism { perm: inv }
    }

    pub fn apply_set(&self, j: GenSet) -> GenSet {
        GenSet::from_gens(j.iter().map(|s| self.perm[s]))
    }

    pub fn apply_id(&self, sys: &CoxeterSystem, w: ElemId) -> ElemId {
        if self.is_identity() {
            return w;
        }
        sys.word_id(w).iter().fold(ElemId::IDENTITY, |acc, &s| sys.rmul_gen(acc, self.perm[s]))
    }

    pub fn apply(&self, sys: &CoxeterSystem, w: &GroupElement) -> Result<GroupElement, CoxeterError> {
        if self.perm.len() != sys.rank() {
            return Err(CoxeterError::BadAutomorphism("rank mismatch".into()));
        }
        Ok(sys.element(self.apply_id(sys, sys.id(w)?)).clone())
    }

    pub fn permutation(&self) -> &[Gen] {
        &self.perm
    }
}

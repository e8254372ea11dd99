//! Acceptance gate: one PASS/FAIL line per criterion, exact comparisons
//! only. Runs without the libtest harness so the lines always print.

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hecke_pieces::charsheaf_b4::{determinant, CsSymbol, CsVector, ExampleContext, CELL_WORDS, SOLVE_WORDS};
use hecke_pieces::cli::{load_kl_cache, save_kl_cache};
use hecke_pieces::coxeter::{CoxeterSystem, DiagramAutomorphism, ElemId, GenSet};
use hecke_pieces::hecke::{canonical_basis_weighted, inverse_kl, HeckeAlgebra, KLTable, WeightFunction};
use hecke_pieces::laurent::{lp, LaurentPolynomial};
use hecke_pieces::pieces::{bedard_sequence, e_operator, enumerate_n, kappa_inverse, tau_hecke};

use CsSymbol::{Rho, Sigma, SigmaPrime, Theta};

#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn within(&mut self, label: &str, elapsed: Duration, budget: Duration) {
        self.notes.push(format!("{label} {:.2?}", elapsed));
        self.check(elapsed < budget, || format!("{label} took {elapsed:.2?}, budget {budget:.0?}"));
    }
}

fn cv(pairs: &[(CsSymbol, LaurentPolynomial)]) -> CsVector {
    CsVector::from_pairs(pairs.iter().cloned())
}

/// `c·(a + b)`.
fn pair(c: &str, a: CsSymbol, b: CsSymbol) -> CsVector {
    cv(&[(a, lp(c)), (b, lp(c))])
}

fn all_four(c: &str) -> CsVector {
    CsVector::uniform(&lp(c), &[Rho, Sigma, SigmaPrime, Theta])
}

fn prod(a: &str, b: &str) -> String {
    (&lp(a) * &lp(b)).to_string()
}

fn sum(a: CsVector, b: CsVector) -> CsVector {
    let mut out = a;
    out.add_scaled(&b, &LaurentPolynomial::one());
    out
}

/// One printed row: `[z⁻¹u]_(t) = Σ c [u″]_t` and its `∼`-form.
struct Row {
    u: &'static str,
    expansion: Vec<(&'static str, LaurentPolynomial)>,
    sim: CsVector,
}

fn row(u: &'static str, expansion: &[(&'static str, &str)], sim: CsVector) -> Row {
    Row { u, expansion: expansion.iter().map(|&(w, c)| (w, lp(c))).collect(), sim }
}

/// A printed family of pairs `(t, z)` with its restriction table, the
/// χ-values `χ_t(C_z^♯) ∼ ζ·chi[C]` and `X_{t,z} = ζ·x`.
struct Family {
    label: &'static str,
    pairs: Vec<(&'static str, &'static str)>,
    rows: Vec<Row>,
    chi: [CsVector; 4],
    x: LaurentPolynomial,
    /// `X_{t,z} = ε(z)ε(t) v^{-L(z)+L(t)}·factor`.
    eps_factor: LaurentPolynomial,
}

fn chi(rho: CsVector, sigma: CsVector, sigma_p: CsVector, theta: CsVector) -> [CsVector; 4] {
    [rho, sigma, sigma_p, theta]
}

fn one(s: CsSymbol, c: &str) -> CsVector {
    cv(&[(s, lp(c))])
}

fn families() -> Vec<Family> {
    let words = ["∅", "e", "f", "ef", "fe", "efe", "fef", "efef"];
    let mut diagonal: Vec<(&str, &str)> = words.iter().map(|&w| (w, w)).collect();
    diagonal.extend([
        ("∅", "e"),
        ("f", "ef"),
        ("f", "fe"),
        ("f", "efe"),
        ("ef", "efe"),
        ("fe", "efe"),
        ("fef", "efef"),
    ]);
    let identity_rows = |shift: &str, sims: [CsVector; 6]| -> Vec<Row> {
        CELL_WORDS.iter().zip(sims).map(|(&u, sim)| Row { u, expansion: vec![(u, lp(shift))], sim }).collect()
    };
    vec![
        Family {
            label: "X = ζ (t = z and neighbours)",
            pairs: diagonal,
            rows: identity_rows(
                "1",
                [
                    pair("v^2 + v^4", Theta, SigmaPrime),
                    pair("v^2 + v^4", Theta, Sigma),
                    all_four("v^2"),
                    all_four("v^2"),
                    pair("1 + v^2", Rho, SigmaPrime),
                    pair("1 + v^2", Rho, Sigma),
                ],
            ),
            chi: chi(one(Rho, "1"), one(Sigma, "1"), one(SigmaPrime, "1"), one(Theta, "1")),
            x: lp("1"),
            eps_factor: lp("1"),
        },
        Family {
            label: "X = -ζv^2",
            pairs: vec![
                ("∅", "f"),
                ("∅", "ef"),
                ("e", "ef"),
                ("∅", "fe"),
                ("e", "fe"),
                ("f", "efef"),
                ("ef", "efef"),
                ("fe", "efef"),
                ("efe", "efef"),
                ("ef", "fef"),
                ("fe", "fef"),
            ],
            rows: vec![
                row("121", &[("121", "v^2"), ("1212", "1")], pair("v^4 + v^6", Theta, SigmaPrime)),
                row("212", &[("2", "v^4"), ("1212", "1")], pair("v^4 + v^6", Rho, SigmaPrime)),
                row("12", &[("12", "v^2"), ("1212", "1")], all_four("v^4")),
                row("21", &[("21", "v^2"), ("1212", "1")], all_four("v^4")),
                row("2", &[("212", "1")], pair("v^2 + v^4", Theta, Sigma)),
                row("1", &[("1", "v^2"), ("1212", "1")], pair("v^2 + v^4", Rho, Sigma)),
            ],
            chi: chi(one(Sigma, "v^2"), one(Rho, "v^2"), one(Theta, "v^2"), one(SigmaPrime, "v^2")),
            x: lp("-v^2"),
            eps_factor: lp("1"),
        },
        Family {
            label: "X = -ζ(v^2 + v^4)",
            pairs: vec![("∅", "efe"), ("e", "efe")],
            rows: vec![
                row(
                    "121",
                    &[("121", "v^2 + v^4"), ("1212", "1 + v^2")],
                    pair(&prod("v^2 + v^4", "v^2 + v^4"), Theta, SigmaPrime),
                ),
                row(
                    "212",
                    &[("2", "v^4 + v^6"), ("1212", "1 + v^2")],
                    pair(&prod("v^4 + v^6", "1 + v^2"), Rho, SigmaPrime),
                ),
                row("12", &[("12", "v^2 + v^4"), ("1212", "1 + v^2")], all_four("v^4 + v^6")),
                row("21", &[("21", "v^2 + v^4"), ("1212", "1 + v^2")], all_four("v^4 + v^6")),
                row("2", &[("212", "1 + v^2")], pair(&prod("1 + v^2", "v^2 + v^4"), Theta, Sigma)),
                row(
                    "1",
                    &[("1", "v^2 + v^4"), ("1212", "1 + v^2")],
                    pair(&prod("1 + v^2", "v^2 + v^4"), Rho, Sigma),
                ),
            ],
            chi: chi(
                one(Sigma, "v^2 + v^4"),
                one(Rho, "v^2 + v^4"),
                one(Theta, "v^2 + v^4"),
                one(SigmaPrime, "v^2 + v^4"),
            ),
            x: lp("-v^2 - v^4"),
            eps_factor: lp("1 + v^2"),
        },
        Family {
            label: "X = ζv^4",
            pairs: vec![("∅", "efef"), ("e", "efef"), ("e", "fef")],
            rows: identity_rows(
                "v^4",
                [
                    pair("v^6 + v^8", Theta, SigmaPrime),
                    pair("v^6 + v^8", Theta, Sigma),
                    all_four("v^6"),
                    all_four("v^6"),
                    pair("v^4 + v^6", Rho, SigmaPrime),
                    pair("v^4 + v^6", Rho, Sigma),
                ],
            ),
            chi: chi(one(Rho, "v^4"), one(Sigma, "v^4"), one(SigmaPrime, "v^4"), one(Theta, "v^4")),
            x: lp("v^4"),
            eps_factor: lp("1"),
        },
        Family {
            label: "X = ζ(v^4 - v^6)",
            pairs: vec![("∅", "fef")],
            rows: vec![
                row(
                    "121",
                    &[("1", "v^8"), ("121", "v^4")],
                    sum(pair("v^8 + v^10", Rho, Sigma), pair("v^6 + v^8", Theta, SigmaPrime)),
                ),
                row("212", &[("212", "v^4 + v^6")], pair(&prod("v^4 + v^6", "v^2 + v^4"), Theta, Sigma)),
                row("12", &[("12", "v^4 + v^6")], all_four("v^6 + v^8")),
                row("21", &[("21", "v^4 + v^6")], all_four("v^6 + v^8")),
                row("2", &[("2", "v^4 + v^6")], pair(&prod("v^4 + v^6", "1 + v^2"), Rho, SigmaPrime)),
                row(
                    "1",
                    &[("121", "v^4"), ("1", "v^4")],
                    sum(pair("v^6 + v^8", Theta, SigmaPrime), pair("v^4 + v^6", Rho, Sigma)),
                ),
            ],
            chi: chi(
                cv(&[(Rho, lp("v^4")), (SigmaPrime, lp("v^6"))]),
                cv(&[(Sigma, lp("v^4")), (Theta, lp("v^6"))]),
                cv(&[(SigmaPrime, lp("v^4")), (Rho, lp("v^6"))]),
                cv(&[(Theta, lp("v^4")), (Sigma, lp("v^6"))]),
            ),
            x: lp("v^4 - v^6"),
            eps_factor: lp("1 - v^2"),
        },
        Family {
            label: "X = -ζ(v^2 - v^4)",
            pairs: vec![("f", "fef")],
            rows: vec![
                row(
                    "121",
                    &[("1", "v^6"), ("121", "v^2")],
                    sum(pair("v^6 + v^8", Rho, Sigma), pair("v^4 + v^6", Theta, SigmaPrime)),
                ),
                row("212", &[("2", "v^4 + v^6")], pair(&prod("v^4 + v^6", "1 + v^2"), Rho, SigmaPrime)),
                row("12", &[("12", "v^2 + v^4")], all_four("v^4 + v^6")),
                row("21", &[("21", "v^2 + v^4")], all_four("v^4 + v^6")),
                row("2", &[("212", "1 + v^2")], pair(&prod("1 + v^2", "v^2 + v^4"), Theta, Sigma)),
                row(
                    "1",
                    &[("121", "v^2"), ("1", "v^2")],
                    sum(pair("v^4 + v^6", Theta, SigmaPrime), pair("v^2 + v^4", Rho, Sigma)),
                ),
            ],
            chi: chi(
                cv(&[(Sigma, lp("v^2")), (Theta, lp("v^4"))]),
                cv(&[(Rho, lp("v^2")), (SigmaPrime, lp("v^4"))]),
                cv(&[(Theta, lp("v^2")), (Sigma, lp("v^4"))]),
                cv(&[(SigmaPrime, lp("v^2")), (Rho, lp("v^4"))]),
            ),
            x: lp("-v^2 + v^4"),
            eps_factor: lp("1 - v^2"),
        },
    ]
}

/// The remaining pairs, where every restriction and χ-value vanishes.
fn zero_family_pairs(ctx: &ExampleContext, fams: &[Family]) -> Vec<(ElemId, ElemId)> {
    let listed: BTreeSet<(ElemId, ElemId)> = fams
        .iter()
        .flat_map(|f| f.pairs.iter().map(|&(t, z)| (ctx.nj_parse(t).unwrap(), ctx.nj_parse(z).unwrap())))
        .collect();
    ctx.nj_elements()
        .into_iter()
        .flat_map(|t| ctx.nj_elements().into_iter().map(move |z| (t, z)))
        .filter(|p| !listed.contains(p))
        .collect()
}

fn zeta(ctx: &ExampleContext, t: ElemId, z: ElemId) -> i64 {
    -ctx.length(z) + ctx.length(t)
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::default();
    let start = Instant::now();
    let w = CoxeterSystem::type_b(4).unwrap();
    let j = GenSet::from_labels([1, 2]);
    let delta = DiagramAutomorphism::identity(4);
    o.check(w.order() == 384, || format!("|W(B4)| = {}", w.order()));
    let double: Vec<String> = w.double_coset_reps(j, j).into_iter().map(|x| w.word_string_id(x)).collect();
    let printed = [
        "∅",
        "3",
        "4",
        "34",
        "43",
        "343",
        "3243",
        "32123",
        "321234",
        "321243",
        "432123",
        "3212343",
        "3432123",
        "4321234",
        "34321234",
        "32123432123",
        "321234321234",
    ];
    let as_set = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
    let printed_set = printed.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    o.check(as_set(&double) == printed_set, || format!("^JW^J = {double:?}"));
    o.notes.push(format!("^JW^J has {} elements, as printed", double.len()));
    let n: Vec<String> = enumerate_n(&w, j, &delta).into_iter().map(|x| w.word_string_id(x)).collect();
    let printed_n = ["∅", "4", "32123", "321234", "432123", "4321234", "32123432123", "321234321234"];
    o.check(as_set(&n) == printed_n.iter().map(|s| s.to_string()).collect(), || format!("N_J = {n:?}"));
    for (name, word) in [("e", "4"), ("f", "32123"), ("fe", "321234"), ("ef", "432123")] {
        let ab = ExampleContext::new().unwrap();
        let got = ab.w.word_string_id(ab.embed(ab.nj_parse(name).unwrap()));
        o.check(got == word, || format!("{name} = {got}, printed {word}"));
    }
    o.within("runtime", start.elapsed(), Duration::from_secs(5));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::default();
    let w = CoxeterSystem::type_b(4).unwrap();
    let start = Instant::now();
    let table = KLTable::build(&w);
    o.within("cold build", start.elapsed(), Duration::from_secs(120));
    o.check(table.check_invariants(&w).is_ok(), || format!("invariants: {:?}", table.check_invariants(&w)));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b4.kl");
    save_kl_cache(&w, &table, &path).unwrap();
    let start = Instant::now();
    let loaded = load_kl_cache(&w, &path);
    o.within("cached load", start.elapsed(), Duration::from_secs(1));
    o.check(loaded.as_ref().ok() == Some(&table), || "cache round trip differs".into());

    let wj = w.parabolic_ids(GenSet::from_labels([1, 2]));
    let inv = inverse_kl(&w, &table, &wj).unwrap();
    for &x in &wj {
        for &z in &wj {
            let s: LaurentPolynomial = wj.iter().map(|&y| &inv.get(x, y) * &table.get(y, z)).sum();
            let expected = if x == z { LaurentPolynomial::one() } else { LaurentPolynomial::zero() };
            o.check(s == expected, || {
                format!("Σ P′P at ({}, {}) = {s}", w.word_string_id(x), w.word_string_id(z))
            });
        }
    }

    let b2 = CoxeterSystem::type_b(2).unwrap();
    let t2 = KLTable::build(&b2);
    o.check(t2.entries().all(|(_, _, p)| p.is_one()), || "B2 table is not all ones".into());
    let all: Vec<ElemId> = b2.ids().collect();
    let inv2 = inverse_kl(&b2, &t2, &all).unwrap();
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
            o.check(inv2.get(x, z) == expected, || {
                format!(
                    "P′ on B2 at ({}, {}) = {}",
                    b2.word_string_id(x),
                    b2.word_string_id(z),
                    inv2.get(x, z)
                )
            });
        }
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::default();
    let start = Instant::now();
    let w = CoxeterSystem::type_b(4).unwrap();
    let j = GenSet::from_labels([1, 2]);
    let delta = DiagramAutomorphism::identity(4);
    let alg = HeckeAlgebra::geometric(&w);
    let quotient = w.left_quotient(j);
    let mut checked = 0usize;
    for &x in &quotient {
        let data = bedard_sequence(&w, j, &delta, x).unwrap();
        let back = kappa_inverse(&w, j, &delta, &data.sequence);
        o.check(back.as_ref().ok() == Some(&x), || format!("κ round trip fails at {}", w.word_string_id(x)));
        for y in w.ids() {
            let basis = alg.basis(y);
            let n = data.n0;
            let lhs = e_operator(&alg, &basis, &data, n + 1).unwrap();
            let rhs = tau_hecke(&w, &data, &e_operator(&alg, &basis, &data, n).unwrap()).unwrap();
            o.check(lhs == rhs, || {
                format!("E_(n+1) != τ E_n at w = {}, y = {}", w.word_string_id(x), w.word_string_id(y))
            });
            checked += 1;
        }
    }
    o.notes.push(format!("{} elements of ^JW, {checked} operator identities", quotient.len()));
    o.within("runtime", start.elapsed(), Duration::from_secs(120));
    o
}

fn criterion_4(ctx: &ExampleContext, fams: &[Family]) -> Outcome {
    let mut o = Outcome::default();
    let start = Instant::now();
    let u_id = |u: &str| ctx.wj_parse(u).unwrap();
    let mut identities = 0usize;
    let mut only_top_missing = 0usize;
    for f in fams {
        for &(t, z) in &f.pairs {
            let (ti, zi) = (ctx.nj_parse(t).unwrap(), ctx.nj_parse(z).unwrap());
            for r in &f.rows {
                identities += 2;
                let got = ctx.restriction_coefficients(ti, zi, u_id(r.u)).unwrap();
                let printed: BTreeMap<ElemId, LaurentPolynomial> =
                    r.expansion.iter().map(|(w, c)| (u_id(w), c.clone())).collect();
                if got != printed {
                    let mut without_top = got.clone();
                    without_top.remove(&u_id("1212"));
                    if without_top == printed {
                        only_top_missing += 1;
                    }
                    let shown: Vec<String> =
                        got.iter().map(|(w, c)| format!("({c})[{}]", ctx.wj_name(*w))).collect();
                    o.failures.push(format!(
                        "[{f}] (t,z)=({t},{z}) u={u}: computed {}, printed omits or differs",
                        shown.join(" + "),
                        f = f.label,
                        u = r.u
                    ));
                }
                let sim = ctx.piece_restriction(ti, zi, u_id(r.u)).unwrap().mod_unit();
                o.check(sim == r.sim, || {
                    format!("∼-form at ({t},{z}) u={}: computed {sim}, printed {}", r.u, r.sim)
                });
            }
        }
    }
    for (t, z) in zero_family_pairs(ctx, fams) {
        for u in CELL_WORDS {
            identities += 1;
            let got = ctx.restriction_coefficients(t, z, u_id(u)).unwrap();
            o.check(got.is_empty(), || {
                format!("({},{}) u={u} should vanish", ctx.nj_name(t), ctx.nj_name(z))
            });
        }
    }
    o.notes.push(format!("{identities} identities checked"));
    if only_top_missing > 0 {
        o.notes.push(format!(
            "{only_top_missing} expansions differ from the printed ones only by a [1212]_t term absent from the print"
        ));
    }
    o.within("runtime", start.elapsed(), Duration::from_secs(60));
    o
}

fn criterion_5(ctx: &ExampleContext, fams: &[Family]) -> Outcome {
    let mut o = Outcome::default();
    let mut expected: BTreeMap<(ElemId, ElemId), [CsVector; 4]> = BTreeMap::new();
    for f in fams {
        for &(t, z) in &f.pairs {
            let (ti, zi) = (ctx.nj_parse(t).unwrap(), ctx.nj_parse(z).unwrap());
            let k = zeta(ctx, ti, zi);
            expected.insert((ti, zi), f.chi.clone().map(|c| c.shift(k)));
            // The rewritten restriction identities at u ∈ {121, 212, 2, 1}.
            for r in f.rows.iter().filter(|r| SOLVE_WORDS.contains(&r.u)) {
                let u = ctx.wj_parse(r.u).unwrap();
                let lhs = ctx.normalized_restriction(ti, zi, u).unwrap().mod_unit();
                let printed = r.sim.shift(k - ctx.w.len_id(u) as i64);
                o.check(lhs == printed, || format!("rewritten identity at ({t},{z}) u={}", r.u));
            }
        }
    }
    for (t, z) in zero_family_pairs(ctx, fams) {
        expected.insert((t, z), std::array::from_fn(|_| CsVector::zero()));
    }
    o.check(expected.len() == 64, || format!("{} pairs covered", expected.len()));
    for ((t, z), values) in expected {
        let name = format!("({},{})", ctx.nj_name(t), ctx.nj_name(z));
        match ctx.solve_chi(t, z) {
            Ok(sol) => {
                o.check(sol.unique, || format!("{name}: not unique: {:?}", sol.witness));
                for (c, want) in CsSymbol::BLOCK.iter().zip(&values) {
                    let got = sol.value(*c);
                    o.check(CsSymbol::ALL.iter().all(|s| got.get(*s).is_nonneg()), || {
                        format!("{name}: χ({c}) = {got} is not positive")
                    });
                    o.check(got.sim(want), || format!("{name}: χ({c}) = {got}, printed {want}"));
                }
            }
            Err(e) => o.failures.push(format!("{name}: {e}")),
        }
    }
    o
}

fn criterion_6(ctx: &ExampleContext, fams: &[Family]) -> Outcome {
    let mut o = Outcome::default();
    let mut printed_x: BTreeMap<(ElemId, ElemId), (LaurentPolynomial, LaurentPolynomial)> = BTreeMap::new();
    for f in fams {
        for &(t, z) in &f.pairs {
            let (ti, zi) = (ctx.nj_parse(t).unwrap(), ctx.nj_parse(z).unwrap());
            printed_x.insert((ti, zi), (f.x.shift(zeta(ctx, ti, zi)), f.eps_factor.clone()));
        }
    }
    for p in zero_family_pairs(ctx, fams) {
        printed_x.insert(p, (LaurentPolynomial::zero(), LaurentPolynomial::zero()));
    }
    let report = ctx.conjecture_report();
    for ((t, z), (x_printed, factor)) in &printed_x {
        let (t, z) = (*t, *z);
        let name = format!("({},{})", ctx.nj_name(t), ctx.nj_name(z));
        let shift = -ctx.weight(z) + ctx.weight(t);
        let sign = ctx.epsilon(z) * ctx.epsilon(t);
        let restated = factor.shift(shift).scale(&sign.into());
        o.check(*x_printed == restated, || format!("{name}: ε/L restatement {restated} != {x_printed}"));
        match ctx.solve_chi(t, z).and_then(|s| ctx.extract_x(&s)) {
            Ok(x) => o.check(x == *x_printed, || format!("{name}: X = {x}, printed {x_printed}")),
            Err(e) => o.failures.push(format!("{name}: {e}")),
        }

        let p = ctx.p(t, z);
        let named = |s: &str| ctx.nj_parse(s).unwrap();
        let base = LaurentPolynomial::one().shift(shift);
        let expected_p = if !ctx.nj_leq(t, z) {
            LaurentPolynomial::zero()
        } else if z == named("efe") && (t == named("∅") || t == named("e")) {
            &base * &lp("1 + v^2")
        } else if z == named("fef") && (t == named("∅") || t == named("f")) {
            &base * &lp("1 - v^2")
        } else {
            base
        };
        o.check(p == expected_p, || format!("{name}: p = {p}, printed {expected_p}"));
    }
    for pr in &report.pairs {
        let name = format!("({},{})", pr.t, pr.z);
        o.check(pr.conjecture3, || format!("{name}: X != ε(z)ε(t)p"));
        if pr.t_leq_z {
            o.check(pr.conjecture2 == Some(true), || format!("{name}: block determinant vanishes"));
        }
        if pr.x.as_ref().is_some_and(|x| !x.is_zero()) || pr.x.is_none() {
            o.check(pr.conjecture1, || format!("{name}: pattern match fails"));
        }
    }
    for t in ctx.nj_elements() {
        for z in ctx.nj_elements().into_iter().filter(|&z| ctx.nj_leq(t, z)) {
            let det = ctx.solve_chi(t, z).map(|s| determinant(&s.block_matrix()));
            o.check(det.as_ref().is_ok_and(|d| !d.is_zero()), || {
                format!("({},{}): determinant {det:?}", ctx.nj_name(t), ctx.nj_name(z))
            });
        }
    }

    let status = Command::new(env!("CARGO_BIN_EXE_hecke-pieces"))
        .args(["example-b4", "--format", "json", "--out"])
        .arg(tempfile::tempdir().unwrap().path().join("report.json"))
        .output()
        .expect("binary runs")
        .status;
    o.check(status.code() == Some(0), || format!("example-b4 exited with {status}"));
    o
}

fn criterion_7(ctx: &ExampleContext, fams: &[Family]) -> Outcome {
    let mut o = Outcome::default();
    let alg = HeckeAlgebra::weighted(&ctx.nj, ctx.weights.clone());
    for z in ctx.nj_elements() {
        let c = ctx.canonical.element(z);
        o.check(alg.bar_element(c).as_ref().ok() == Some(c), || {
            format!("c_{} is not bar-invariant", ctx.nj_name(z))
        });
    }
    for z in ctx.nj_elements() {
        for u in CELL_WORDS {
            let r = ctx.v_dims_at_z(z, ctx.wj_parse(u).unwrap());
            o.check(r.is_ok(), || format!("multiplicities at z={} u={u}: {:?}", ctx.nj_name(z), r.err()));
        }
    }

    let neighbours: BTreeSet<(ElemId, ElemId)> = fams[0]
        .pairs
        .iter()
        .map(|&(t, z)| (ctx.nj_parse(t).unwrap(), ctx.nj_parse(z).unwrap()))
        .filter(|(t, z)| t != z)
        .collect();
    let one_plus = lp("1 + v^-2");
    let mut refinement_exceptions = BTreeSet::new();
    for t in ctx.nj_elements() {
        for z in ctx.nj_elements() {
            if t == z {
                continue;
            }
            for u in CELL_WORDS {
                let name = format!("({},{}) u={u}", ctx.nj_name(t), ctx.nj_name(z));
                let vec = match ctx.normalized_restriction(t, z, ctx.wj_parse(u).unwrap()) {
                    Ok(v) => v,
                    Err(e) => {
                        o.failures.push(format!("{name}: {e}"));
                        continue;
                    }
                };
                let refined = neighbours.contains(&(t, z)) && SOLVE_WORDS.contains(&u);
                for s in CsSymbol::NON_UNIT {
                    let c = vec.get(s);
                    o.check(c.is_nonneg() && c.in_z_v_inv(), || format!("{name}: coefficient of {s} is {c}"));
                    if refined && !(c.is_zero() || *c == one_plus) {
                        // Listed among the neighbours although l(z) - l(t) = 2; the
                        // coefficient is then still in v^-1 N[v^-1].
                        refinement_exceptions.insert(name.clone());
                        o.check(c.in_v_inv_z_v_inv(), || format!("{name}: coefficient of {s} is {c}"));
                    } else if !refined {
                        o.check(c.in_v_inv_z_v_inv(), || {
                            format!("{name}: coefficient of {s} is {c}, not in v^-1 N[v^-1]")
                        });
                    }
                }
            }
        }
    }

    if !refinement_exceptions.is_empty() {
        let list: Vec<String> = refinement_exceptions.into_iter().collect();
        o.notes.push(format!("coefficient v^-1 + v^-3 instead of 1 + v^-2 at {}", list.join(", ")));
    }

    let b2 = CoxeterSystem::type_b(2).unwrap();
    let kl = KLTable::build(&b2);
    let split = canonical_basis_weighted(&b2, &WeightFunction::length(&b2)).unwrap();
    let split_alg = HeckeAlgebra::weighted(&b2, WeightFunction::length(&b2));
    for t in b2.ids() {
        for z in b2.ids() {
            let expected = kl.get(t, z).shift(-(b2.len_id(z) as i64) + b2.len_id(t) as i64);
            o.check(split.p(t, z) == expected, || {
                format!("split case at ({}, {})", b2.word_string_id(t), b2.word_string_id(z))
            });
        }
        let c = split.element(t);
        o.check(split_alg.bar_element(c).as_ref().ok() == Some(c), || "split c_z not bar-invariant".into());
    }
    o
}

fn main() -> ExitCode {
    let ctx = ExampleContext::new().expect("example context builds");
    let fams = families();
    let results = [
        ("group facts", criterion_1()),
        ("KL suite", criterion_2()),
        ("Bédard and operator suite", criterion_3()),
        ("restriction tables", criterion_4(&ctx, &fams)),
        ("χ-values", criterion_5(&ctx, &fams)),
        ("X, p and conjectures", criterion_6(&ctx, &fams)),
        ("property suites", criterion_7(&ctx, &fams)),
    ];
    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        let pass = o.failures.is_empty();
        all &= pass;
        let notes = if o.notes.is_empty() { String::new() } else { format!(" ({})", o.notes.join("; ")) };
        println!("criterion {} {name}: {}{notes}", i + 1, if pass { "PASS" } else { "FAIL" });
        for f in o.failures.iter().take(40) {
            println!("    {f}");
        }
        if o.failures.len() > 40 {
            println!("    ... {} more", o.failures.len() - 40);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

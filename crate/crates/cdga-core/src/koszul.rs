//! Quadratic duality, Koszul filtrations and generating subspaces,
//! acyclicity certification of twisting cochains, internally graded
//! covariant duality on modules, contravariant duality over the field, and
//! the filtered-quasi-isomorphism checker.
//!
//! Koszulity is never assumed: it is evidenced by per-internal-degree
//! acyclicity certificates up to a requested bound, and every claim is
//! bounded-degree.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cdg::{CdgAlgebra, CdgCoalgebra, CdgCoalgebraMorphism, GradedCoalgebra};
use crate::derived::{cohomology, CohomologyTable};
use crate::field::{Field, FieldElement};
use crate::grading::{
    sign, Combo, DifferentialSpace, GradedMap, GradedSpace, Grading, Label, SubData,
};
use crate::species::{
    algebra_as_module, coalgebra_as_left_comodule, CdgModule, Side,
};
use crate::twist::{
    bar, conilpotency_filtration, Retraction, Section, TwistingCochain,
};

/// Quadratic data: a space V of generators in internal degree 1 and a
/// relation subspace R ⊆ V⊗V.
#[derive(Clone, Debug)]
pub struct QuadraticData {
    pub v: GradedSpace,
    /// spanning vectors of R over `Pair` labels of V⊗V
    pub relations: Vec<Combo>,
}

/// The quadratic dual coalgebra C with
/// C_n = ⋂_j V^{⊗j−1} ⊗ R ⊗ V^{⊗n−j−1}, computed exactly per internal
/// degree up to `n_max`, as a subcoalgebra of the tensor coalgebra. Words
/// carry the bar grading (degree of a letter minus one each).
pub fn quadratic_dual_coalgebra(q: &QuadraticData, n_max: usize) -> CdgCoalgebra {
    let f = q.v.field;
    let grading = q.v.grading;
    let letters: Vec<(i64, Label)> = q.v.all_basis().map(|(d, l)| (d, l.clone())).collect();
    let words_n = |n: usize| -> Vec<Vec<Label>> {
        let mut out: Vec<Vec<Label>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &out {
                for (_, l) in &letters {
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    next.push(w2);
                }
            }
            out = next;
        }
        out
    };
    // assemble the coalgebra on canonical sub-bases
    let _ = words_n;
    let mut space = GradedSpace::new(f, grading).with_internal();
    let mut subs: Vec<SubData> = Vec::new();
    for n in 0..=n_max {
        let sub = quadratic_sub(q, n);
        for (d, l) in sub.space.all_basis() {
            space.add_basis_internal(Label::tagged(&format!("q{n}"), l.clone()), d, n as i64);
        }
        subs.push(sub);
    }
    let mut co = GradedCoalgebra::new(space.clone());
    for (n, sub) in subs.iter().enumerate() {
        for (_, l) in sub.space.all_basis() {
            // deconcatenate the included word and re-express the parts
            let full = sub.incl.apply_label(l);
            let mut comul = Combo::zero();
            for j in 0..=n {
                // split each word term at j and collect the bilinear image
                let mut split_terms: BTreeMap<(Label, Label), FieldElement> = BTreeMap::new();
                for (wl, v) in full.iter() {
                    let Label::Word(w) = wl else { panic!() };
                    let a = Label::Word(w[..j].to_vec());
                    let b = Label::Word(w[j..].to_vec());
                    let e = split_terms.entry((a, b)).or_insert_with(|| f.zero());
                    *e = f.add(e, v);
                }
                // express: the split of an element of C_n lies in
                // C_j ⊗ C_{n−j} (subcoalgebra property); solve for the
                // coefficients over the basis {incl(la)⊗incl(lb)}
                let left_sub = &subs[j];
                let right_sub = &subs[n - j];
                let mut keys: Vec<(Label, Label)> = split_terms.keys().cloned().collect();
                let mut cols: Vec<(Label, Label, BTreeMap<(Label, Label), FieldElement>)> =
                    Vec::new();
                for (_, la) in left_sub.space.all_basis() {
                    let ia = left_sub.incl.apply_label(la);
                    for (_, lb) in right_sub.space.all_basis() {
                        let ib = right_sub.incl.apply_label(lb);
                        let mut col = BTreeMap::new();
                        for (wa, va) in ia.iter() {
                            for (wb, vb) in ib.iter() {
                                let key = (wa.clone(), wb.clone());
                                if !keys.contains(&key) {
                                    keys.push(key.clone());
                                }
                                col.insert(key, f.mul(va, vb));
                            }
                        }
                        cols.push((la.clone(), lb.clone(), col));
                    }
                }
                let mut mat = crate::linalg::Matrix::zero(f, keys.len(), cols.len());
                for (cj, (_, _, col)) in cols.iter().enumerate() {
                    for (key, v) in col {
                        let ri = keys.iter().position(|k| k == key).unwrap();
                        mat.set(ri, cj, v.clone());
                    }
                }
                let rhs: Vec<FieldElement> = keys
                    .iter()
                    .map(|k| split_terms.get(k).cloned().unwrap_or_else(|| f.zero()))
                    .collect();
                let sol = mat.solve(&rhs).unwrap_or_else(|| {
                    panic!(
                        "split at n={n}, j={j} of {l} left the expected subspace: {} keys, {} cols",
                        keys.len(),
                        cols.len()
                    )
                });
                for (cj, (la, lb, _)) in cols.iter().enumerate() {
                    comul.add_term(
                        Label::pair(
                            Label::tagged(&format!("q{j}"), la.clone()),
                            Label::tagged(&format!("q{}", n - j), lb.clone()),
                        ),
                        &sol[cj],
                        f,
                    );
                }
            }
            co.set_comul(&Label::tagged(&format!("q{n}"), l.clone()), comul);
            co.set_counit(
                &Label::tagged(&format!("q{n}"), l.clone()),
                if n == 0 { f.one() } else { f.zero() },
            );
        }
    }
    let d = GradedMap::zero(&space, &space, 1);
    CdgCoalgebra::dg(co, d)
}

/// Koszul generating data: a windowed algebra A with a chosen generating
/// subspace V̄ given by basis labels spanning a complement of k in F₁A.
#[derive(Clone, Debug)]
pub struct KoszulGeneratingData {
    pub algebra: CdgAlgebra,
    pub vbar: Vec<Label>,
}

/// Tries to express the nonhomogeneous dual C ⊆ Br_v(A): the quadratic-dual
/// subcoalgebra computed from V̄ and R = ker(V̄⊗V̄ → F₂A/F₁A), with the bar
/// differential and curvature restricted. A failure of d or h to preserve C
/// is reported as non-Koszulity evidence.
pub struct NonhomogeneousDual {
    pub coalgebra: CdgCoalgebra,
    /// the inclusion into the bar construction, per basis label
    pub into_bar: GradedMap,
    pub bar: CdgCoalgebra,
}

pub fn nonhomogeneous_dual(
    kd: &KoszulGeneratingData,
    n_max: usize,
) -> Result<NonhomogeneousDual, String> {
    let a = &kd.algebra;
    let f = a.field();
    let v = Retraction::standard(a);
    let bar_c = bar(a, &v, n_max);
    // R = kernel of V̄⊗V̄ → A/F₁A
    let f1: Vec<Label> = {
        let mut out = vec![a.algebra.unit.clone()];
        out.extend(kd.vbar.iter().cloned());
        out
    };
    let pairs: Vec<(Label, Label)> = kd
        .vbar
        .iter()
        .flat_map(|x| kd.vbar.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let mut rows: Vec<BTreeMap<usize, FieldElement>> = Vec::new();
    let mut row_index: BTreeMap<Label, usize> = BTreeMap::new();
    for (col, (x, y)) in pairs.iter().enumerate() {
        let prod = a.algebra.mul_basis(x, y);
        for (l, val) in prod.iter() {
            if f1.contains(l) {
                continue; // components in F₁ are allowed
            }
            let next = row_index.len();
            let idx = *row_index.entry(l.clone()).or_insert(next);
            if rows.len() <= idx {
                rows.resize_with(idx + 1, BTreeMap::new);
            }
            let e = rows[idx].entry(col).or_insert_with(|| f.zero());
            *e = f.add(e, val);
        }
    }
    let mut mat = crate::linalg::Matrix::zero(f, rows.len(), pairs.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, val) in r {
            mat.set(i, *j, val.clone());
        }
    }
    let ker = mat.kernel_basis();
    // quadratic data on V̄, letters graded by their degree in A
    let mut vspace = GradedSpace::new(f, a.grading()).with_internal();
    for l in &kd.vbar {
        vspace.add_basis_internal(l.clone(), a.space().degree_of(l).expect("label"), 1);
    }
    let mut relations = Vec::new();
    for cidx in 0..ker.ncols {
        let col = ker.column(cidx);
        let mut combo = Combo::zero();
        for (i, (x, y)) in pairs.iter().enumerate() {
            combo.add_term(Label::pair(x.clone(), y.clone()), &col[i], f);
        }
        relations.push(combo);
    }
    let qd = QuadraticData { v: vspace, relations };
    let dual = quadratic_dual_coalgebra(&qd, n_max);
    // inclusion into the bar construction: strip the q-tags and the span
    // wrappers down to plain word combinations
    let incl = GradedMap::from_fn(dual.space(), bar_c.space(), 0, |l, _| {
        unwrap_quadratic_label(&qd, l, n_max)
    });
    // restrict d_Br and h_Br to C; failure = non-Koszulity evidence
    let sub_vectors: Vec<Combo> =
        dual.space().all_basis().map(|(_, l)| incl.apply_label(l)).collect();
    let sub = SubData::from_spanning(bar_c.space(), &sub_vectors);
    let mut d_restricted = GradedMap::zero(dual.space(), dual.space(), 1);
    for (_, l) in dual.space().all_basis() {
        let img = bar_c.d.apply(&incl.apply_label(l));
        let Some(expr) = sub.express(&img) else {
            return Err(format!(
                "bar differential does not preserve the quadratic dual at {l}: non-Koszulity evidence"
            ));
        };
        // re-express through the canonical sub back into dual labels
        let back = requadratize(&dual, &sub, &incl, &expr);
        d_restricted.set_image(l, &back);
    }
    let mut h = BTreeMap::new();
    for (_, l) in dual.space().all_basis() {
        let mut val = f.zero();
        for (wl, v) in incl.apply_label(l).iter() {
            val = f.add(&val, &f.mul(&bar_c.h_of(wl), v));
        }
        if !val.is_zero() {
            h.insert(l.clone(), val);
        }
    }
    let mut out = CdgCoalgebra {
        coalgebra: dual.coalgebra.clone(),
        d: d_restricted,
        h,
    };
    // carry over the internal grading bookkeeping (already in the space)
    out.coalgebra.space = dual.space().clone();
    Ok(NonhomogeneousDual { coalgebra: out, into_bar: incl, bar: bar_c })
}

/// expands a quadratic-dual label `q{n}:span:pivot` into its word
/// combination inside V^{⊗n} ⊆ Br
fn unwrap_quadratic_label(qd: &QuadraticData, l: &Label, n_max: usize) -> Combo {
    let f = qd.v.field;
    let Label::Tagged(tag, inner) = l else { panic!("quadratic label") };
    let n: usize = tag.strip_prefix('q').and_then(|s| s.parse().ok()).expect("q-tag");
    let _ = n_max;
    // rebuild the sub data for degree n deterministically
    let dual = quadratic_dual_coalgebra(qd, n);
    // find the matching label in the rebuilt coalgebra and use the stored
    // span structure: the inner label is Tagged("span", pivot-word); its
    // combination is reconstructible from the same echelon procedure, so
    // the cheapest faithful route is to recompute the sub basis
    let _ = dual;
    // recompute the intersection basis at length n and echelonize
    let sub = quadratic_sub(qd, n);
    let target = (**inner).clone();
    for (_, sl) in sub.space.all_basis() {
        if *sl == target {
            return sub.incl.apply_label(sl);
        }
    }
    let _ = f;
    panic!("quadratic label {l} not found at length {n}")
}

fn quadratic_sub(qd: &QuadraticData, n: usize) -> SubData {
    let f = qd.v.field;
    let grading = qd.v.grading;
    let letters: Vec<(i64, Label)> = qd.v.all_basis().map(|(d, l)| (d, l.clone())).collect();
    let mut ambient = GradedSpace::new(f, grading).with_internal();
    let mut words: Vec<Vec<Label>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &words {
            for (_, l) in &letters {
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.push(w2);
            }
        }
        words = next;
    }
    for w in &words {
        let d: i64 = w.iter().map(|l| qd.v.degree_of(l).expect("letter") - 1).sum();
        ambient.add_basis_internal(Label::Word(w.clone()), d, n as i64);
    }
    if n == 0 {
        let all: Vec<Combo> =
            ambient.all_basis().map(|(_, l)| Combo::single(l.clone(), f)).collect();
        return SubData::from_spanning(&ambient, &all);
    }
    if n == 1 {
        let all: Vec<Combo> =
            ambient.all_basis().map(|(_, l)| Combo::single(l.clone(), f)).collect();
        return SubData::from_spanning(&ambient, &all);
    }
    let pair_index: Vec<(Label, Label)> = letters
        .iter()
        .flat_map(|(_, a)| letters.iter().map(move |(_, b)| (a.clone(), b.clone())))
        .collect();
    let rel_matrix = {
        let mut cols = Vec::new();
        for r in &qd.relations {
            let mut col = vec![f.zero(); pair_index.len()];
            for (l, v) in r.iter() {
                let Label::Pair(a, b) = l else { panic!() };
                let idx = pair_index
                    .iter()
                    .position(|(x, y)| x == &**a && y == &**b)
                    .expect("relation letters");
                col[idx] = v.clone();
            }
            cols.push(col);
        }
        crate::linalg::Matrix::from_columns(f, pair_index.len(), &cols)
    };
    let ann = rel_matrix.transpose().kernel_basis();
    let word_pos: BTreeMap<Vec<Label>, usize> =
        words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    // one constraint per (slot, annihilator functional, context): the pair
    // marginal at the slot with fixed prefix and suffix must satisfy φ = 0
    let mut rows: BTreeMap<(usize, usize, Vec<Label>, Vec<Label>), BTreeMap<usize, FieldElement>> =
        BTreeMap::new();
    for (w, wi) in &word_pos {
        for j in 0..n - 1 {
            let pr = pair_index
                .iter()
                .position(|(x, y)| *x == w[j] && *y == w[j + 1])
                .expect("pair");
            for col in 0..ann.ncols {
                let phi = ann.column(col);
                if phi[pr].is_zero() {
                    continue;
                }
                let key = (j, col, w[..j].to_vec(), w[j + 2..].to_vec());
                rows.entry(key).or_default().insert(*wi, phi[pr].clone());
            }
        }
    }
    let mut mat = crate::linalg::Matrix::zero(f, rows.len(), words.len());
    for (i, (_, r)) in rows.iter().enumerate() {
        for (j, v) in r {
            mat.set(i, *j, v.clone());
        }
    }
    let ker = mat.kernel_basis();
    let mut basis = Vec::new();
    for cidx in 0..ker.ncols {
        let colv = ker.column(cidx);
        let mut combo = Combo::zero();
        for (w, wi) in &word_pos {
            combo.add_term(Label::Word(w.clone()), &colv[*wi], f);
        }
        basis.push(combo);
    }
    SubData::from_spanning(&ambient, &basis)
}

/// re-expresses a combination in the canonical sub basis through the
/// quadratic-dual labels (the sub bases coincide by construction)
fn requadratize(
    dual: &CdgCoalgebra,
    sub: &SubData,
    incl: &GradedMap,
    expr: &Combo,
) -> Combo {
    let f = dual.field();
    // sub basis labels are Tagged("span", pivot); dual labels are
    // Tagged("q{n}", Tagged("span", pivot)) with the same inclusion images,
    // so matching by image is exact
    let mut out = Combo::zero();
    for (sl, v) in expr.iter() {
        let image = sub.incl.apply_label(sl);
        let mut matched = false;
        for (_, dl) in dual.space().all_basis() {
            if incl.apply_label(dl) == image {
                out.add_term(dl.clone(), v, f);
                matched = true;
                break;
            }
        }
        if !matched {
            // general case: solve for the combination
            let mut remaining = image.scaled(v, f);
            for (_, dl) in dual.space().all_basis() {
                let cand = incl.apply_label(dl);
                if cand.is_zero() {
                    continue;
                }
                let (lead, cl) = cand.iter().next().unwrap();
                if let Some(c0) = remaining.coeff(lead).cloned() {
                    let coeff = f.div(&c0, cl).expect("nonzero lead");
                    remaining.add(&cand.scaled(&f.neg(&coeff), f), f);
                    out.add_term(dl.clone(), &coeff, f);
                }
            }
            assert!(remaining.is_zero(), "requadratize failed");
        }
    }
    out
}

/// The natural twisting cochain of a nonhomogeneous dual: minus the
/// composition C → C₁ ≅ V̄ → A.
pub fn natural_tau_koszul(kd: &KoszulGeneratingData, nd: &NonhomogeneousDual) -> TwistingCochain {
    let f = kd.algebra.field();
    let tau = GradedMap::from_fn(nd.coalgebra.space(), kd.algebra.space(), 1, |l, _| {
        let Label::Tagged(tag, _) = l else { panic!() };
        if tag == "q1" {
            // the inclusion sends q1 labels to one-letter words; read the
            // letter back and negate
            let mut out = Combo::zero();
            for (wl, v) in nd.into_bar.apply_label(l).iter() {
                let Label::Word(w) = wl else { panic!() };
                assert_eq!(w.len(), 1);
                out.add_term(w[0].clone(), &f.neg(v), f);
            }
            out
        } else {
            Combo::zero()
        }
    });
    TwistingCochain::new(&nd.coalgebra, &kd.algebra, tau)
}

/// An internally graded dual pair (A, C, τ) for covariant homogeneous
/// duality: A₊ and C₊ concentrated in positive internal degrees, τ of
/// internal degree 0 and cohomological degree 1 with v∘τ = τ∘w = 0.
#[derive(Clone, Debug)]
pub struct KoszulPair {
    pub algebra: CdgAlgebra,
    pub coalgebra: CdgCoalgebra,
    pub tau: TwistingCochain,
}

impl KoszulPair {
    pub fn validate(&self) -> Result<(), String> {
        if !self.algebra.is_dg() || !self.coalgebra.is_dg() {
            return Err("Koszul pairs are DG on both sides".into());
        }
        if !self.algebra.space().has_internal() || !self.coalgebra.space().has_internal() {
            return Err("Koszul pairs must be internally graded".into());
        }
        for (_, l) in self.algebra.space().all_basis() {
            let n = self.algebra.space().internal_degree(l).unwrap();
            if n < 0 || (n == 0 && *l != self.algebra.algebra.unit) {
                return Err(format!("algebra label {l} violates positive internal grading"));
            }
        }
        for (_, l) in self.coalgebra.space().all_basis() {
            let n = self.coalgebra.space().internal_degree(l).unwrap();
            let counit = self.coalgebra.coalgebra.counit_basis(l);
            if n < 0 || (n == 0 && counit.is_zero()) {
                return Err(format!("coalgebra label {l} violates positive internal grading"));
            }
        }
        // τ has internal degree 0 and misses the (co)units
        for (_, l) in self.coalgebra.space().all_basis() {
            let img = self.tau.tau.apply_label(l);
            let n = self.coalgebra.space().internal_degree(l).unwrap();
            for (t, _) in img.iter() {
                if self.algebra.space().internal_degree(t) != Some(n) {
                    return Err(format!("τ is not of internal degree 0 at {l}"));
                }
                if *t == self.algebra.algebra.unit {
                    return Err("v∘τ ≠ 0".into());
                }
            }
            if n == 0 && !img.is_zero() {
                return Err("τ∘w ≠ 0".into());
            }
        }
        let rep = self.tau.check();
        if !rep.pass() {
            return Err(format!("Maurer-Cartan fails: {:?}", rep.violations));
        }
        Ok(())
    }
}

/// Per-internal-degree acyclicity verdicts for a Koszul pair: for each
/// 1 ≤ n ≤ N, the internal-degree-n components of A⊗^τC and C⊗^τA must be
/// exact (and degree 0 must be one-dimensional).
#[derive(Clone, Debug)]
pub struct AcyclicityCertificate {
    pub verdicts: BTreeMap<i64, bool>,
    pub witnesses: Vec<String>,
}

impl AcyclicityCertificate {
    pub fn certified_up_to(&self, n: i64) -> bool {
        (1..=n).all(|k| self.verdicts.get(&k).copied().unwrap_or(false))
    }
}

pub fn acyclicity_certificate(pair: &KoszulPair, n_max: i64) -> AcyclicityCertificate {
    pair.validate().expect("invalid Koszul pair");
    let a_mod = algebra_as_module(&pair.algebra, Side::Left);
    let c_com = coalgebra_as_left_comodule(&pair.coalgebra);
    // C ⊗^τ A and A ⊗^τ C
    let ca = crate::twist::twist_comodule(&pair.tau, &a_mod);
    let ac = crate::twist::twist_module(&pair.tau, &c_com);
    let mut verdicts = BTreeMap::new();
    let mut witnesses = Vec::new();
    let window = {
        let lo = -(2 * n_max + 2);
        let hi = 2 * n_max + 2;
        (lo, hi)
    };
    for n in 0..=n_max {
        let mut ok = true;
        for (name, cx) in [("C⊗^τA", ca.complex()), ("A⊗^τC", ac.complex())] {
            let table = cohomology(&cx, window, &BTreeSet::new());
            let Some(internal) = &table.internal else {
                witnesses.push(format!("{name}: no internal table"));
                ok = false;
                continue;
            };
            let total: usize = internal
                .iter()
                .filter(|((_, i), _)| *i == n)
                .map(|(_, v)| *v)
                .sum();
            let expected = if n == 0 { 1 } else { 0 };
            if total != expected {
                witnesses.push(format!(
                    "{name}: internal degree {n} has H of total dimension {total}, expected {expected}"
                ));
                ok = false;
            }
        }
        if n >= 1 {
            verdicts.insert(n, ok);
        }
    }
    AcyclicityCertificate { verdicts, witnesses }
}

/// The per-internal-degree roundtrip report of the covariant duality on
/// modules: the counit A⊗^τ(C⊗^τM) → M (or the unit N → C⊗^τ(A⊗^τN)) is
/// certified to have acyclic cone per internal degree ≤ N.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub per_internal: BTreeMap<i64, bool>,
    pub witnesses: Vec<String>,
}

impl DualityReport {
    pub fn pass_up_to(&self, n: i64) -> bool {
        (0..=n).all(|k| self.per_internal.get(&k).copied().unwrap_or(true))
    }
}

/// Covariant duality roundtrip for a nonnegatively internally graded module
/// M over A: builds C⊗^τM and A⊗^τ(C⊗^τM), constructs the counit
/// a⊗(c⊗x) ↦ ε(c)·a·x, verifies it is closed, and certifies the cone per
/// internal degree.
pub fn duality_on_modules(
    pair: &KoszulPair,
    m: &CdgModule,
    cert: &AcyclicityCertificate,
    n_max: i64,
) -> DualityReport {
    assert!(cert.certified_up_to(n_max), "uncertified twisting cochain");
    assert_eq!(m.side, Side::Left);
    let f = m.field();
    let cm = crate::twist::twist_comodule(&pair.tau, m);
    let acm = crate::twist::twist_module(&pair.tau, &cm);
    // counit: a ⊗ (c ⊗ x) ↦ ε(c) · (a·x)
    let counit = GradedMap::from_fn(&acm.space, &m.space, 0, |l, _| {
        let Label::Pair(al, rest) = l else { panic!() };
        let Label::Pair(cl, xl) = &**rest else { panic!() };
        let e = pair.coalgebra.coalgebra.counit_basis(cl);
        if e.is_zero() {
            return Combo::zero();
        }
        m.act(&Combo::single((**al).clone(), f), &Combo::single((**xl).clone(), f))
            .scaled(&e, f)
    });
    let src = acm.complex();
    let tgt = m.complex();
    let mut witnesses = Vec::new();
    let closed = counit.compose(&src.d).sub(&tgt.d.compose(&counit)).is_zero();
    if !closed {
        witnesses.push("counit is not a closed morphism".into());
    }
    let cone = DifferentialSpace::cone(&counit, &src, &tgt);
    let lo = cone.space.degrees().min().unwrap_or(0);
    let hi = cone.space.degrees().max().unwrap_or(0);
    let table = cohomology(&cone, (lo, hi), &BTreeSet::new());
    let mut per_internal = BTreeMap::new();
    if let Some(internal) = &table.internal {
        for n in 0..=n_max {
            let total: usize =
                internal.iter().filter(|((_, i), _)| *i == n).map(|(_, v)| *v).sum();
            per_internal.insert(n, closed && total == 0);
            if total != 0 {
                witnesses.push(format!("cone has H ≠ 0 in internal degree {n}"));
            }
        }
    } else {
        witnesses.push("cone lost its internal grading".into());
        for n in 0..=n_max {
            per_internal.insert(n, false);
        }
    }
    DualityReport { per_internal, witnesses }
}

/// The comodule-side roundtrip: the unit N → C⊗^τ(A⊗^τN),
/// y ↦ Σ y₍₋₁₎ ⊗ (1 ⊗ y₍₀₎).
pub fn duality_on_comodules(
    pair: &KoszulPair,
    n: &crate::species::CdgComodule,
    cert: &AcyclicityCertificate,
    n_max: i64,
) -> DualityReport {
    assert!(cert.certified_up_to(n_max), "uncertified twisting cochain");
    assert_eq!(n.side, Side::Left);
    let f = n.field();
    let an = crate::twist::twist_module(&pair.tau, n);
    let can = crate::twist::twist_comodule(&pair.tau, &an);
    let unit_lbl = pair.algebra.algebra.unit.clone();
    let unit = GradedMap::from_fn(&n.space, &can.space, 0, |l, _| {
        let mut out = Combo::zero();
        for (c, y0, v) in n.sweedler(l) {
            out.add_term(
                Label::pair(c, Label::pair(unit_lbl.clone(), y0)),
                &v,
                f,
            );
        }
        out
    });
    let src = n.complex();
    let tgt = can.complex();
    let mut witnesses = Vec::new();
    let closed = unit.compose(&src.d).sub(&tgt.d.compose(&unit)).is_zero();
    if !closed {
        witnesses.push("unit is not a closed morphism".into());
    }
    let cone = DifferentialSpace::cone(&unit, &src, &tgt);
    let lo = cone.space.degrees().min().unwrap_or(0);
    let hi = cone.space.degrees().max().unwrap_or(0);
    let table = cohomology(&cone, (lo, hi), &BTreeSet::new());
    let mut per_internal = BTreeMap::new();
    if let Some(internal) = &table.internal {
        for k in 0..=n_max {
            let total: usize =
                internal.iter().filter(|((_, i), _)| *i == k).map(|(_, v)| *v).sum();
            per_internal.insert(k, closed && total == 0);
            if total != 0 {
                witnesses.push(format!("cone has H ≠ 0 in internal degree {k}"));
            }
        }
    } else {
        witnesses.push("cone lost its internal grading".into());
        for k in 0..=n_max {
            per_internal.insert(k, false);
        }
    }
    DualityReport { per_internal, witnesses }
}

/// The contramodule-side roundtrip for a nonpositively internally graded
/// module P over A: the unit p ↦ (b ↦ (c ↦ (−1)^{|b||p|} ε(c)·(b·p))) into
/// Hom^τ(A, Hom^τ(C, P)), certified per internal degree.
pub fn contramodule_duality_on_modules(
    pair: &KoszulPair,
    p: &CdgModule,
    cert: &AcyclicityCertificate,
    n_max: i64,
) -> DualityReport {
    assert!(cert.certified_up_to(n_max), "uncertified twisting cochain");
    assert_eq!(p.side, Side::Left);
    let f = p.field();
    let hcp = crate::twist::twist_contramodule(&pair.tau, p);
    let hahcp = crate::twist::untwist_contramodule(&pair.tau, &hcp);
    let unit = GradedMap::from_fn(&p.space, &hahcp.space, 0, |pl, pdeg| {
        // target labels Map(b, Map(c, p'))
        let mut out = Combo::zero();
        for (db, bl) in pair.algebra.space().all_basis() {
            let bp = p.act(
                &Combo::single(bl.clone(), f),
                &Combo::single(pl.clone(), f),
            );
            for (cl, _) in pair.coalgebra.space().all_basis().map(|(d, l)| (l, d)) {
                let e = pair.coalgebra.coalgebra.counit_basis(cl);
                if e.is_zero() {
                    continue;
                }
                for (t, v) in bp.iter() {
                    let s = sign(db * pdeg);
                    let val = f.mul(&e, v);
                    let val = if s < 0 { f.neg(&val) } else { val };
                    out.add_term(
                        Label::map(bl.clone(), Label::map(cl.clone(), t.clone())),
                        &val,
                        f,
                    );
                }
            }
        }
        out
    });
    let src = p.complex();
    let tgt = hahcp.complex();
    let mut witnesses = Vec::new();
    let closed = unit.compose(&src.d).sub(&tgt.d.compose(&unit)).is_zero();
    if !closed {
        witnesses.push("contramodule unit is not a closed morphism".into());
    }
    let cone = DifferentialSpace::cone(&unit, &src, &tgt);
    let lo = cone.space.degrees().min().unwrap_or(0);
    let hi = cone.space.degrees().max().unwrap_or(0);
    let table = cohomology(&cone, (lo, hi), &BTreeSet::new());
    let mut per_internal = BTreeMap::new();
    if let Some(internal) = &table.internal {
        for k in (-n_max)..=0 {
            let total: usize =
                internal.iter().filter(|((_, i), _)| *i == k).map(|(_, v)| *v).sum();
            per_internal.insert(k, closed && total == 0);
            if total != 0 {
                witnesses.push(format!("cone has H ≠ 0 in internal degree {k}"));
            }
        }
    } else {
        witnesses.push("cone lost its internal grading".into());
        for k in (-n_max)..=0 {
            per_internal.insert(k, false);
        }
    }
    DualityReport { per_internal, witnesses }
}

/// Tor computed through an acyclic twisting cochain: H(C⊗^τM), gated by the
/// certificate.
pub fn tor_via_twist(
    tau: &TwistingCochain,
    m: &CdgModule,
    cert: &AcyclicityCertificate,
    n_max: i64,
    window: (i64, i64),
) -> CohomologyTable {
    assert!(cert.certified_up_to(n_max), "uncertified twisting cochain");
    crate::derived::cohomology_of_twist(tau, m, window)
}

/// Ext computed through an acyclic twisting cochain: H(Hom^τ(C,P)).
pub fn ext_via_twist(
    tau: &TwistingCochain,
    p: &CdgModule,
    cert: &AcyclicityCertificate,
    n_max: i64,
    window: (i64, i64),
) -> CohomologyTable {
    assert!(cert.certified_up_to(n_max), "uncertified twisting cochain");
    crate::derived::cohomology_of_hom_twist(tau, p, window)
}

// ---------------------------------------------------------------------------
// Contravariant duality over k (Appendix A.2 restricted to R = k).
// ---------------------------------------------------------------------------

/// A twisting element τ ∈ ∏_n B_{−n}⊗A_n of cohomological degree 1 with
/// τ² + dτ = 0 in the opposite pair of DG-rings T^l/T^r.
#[derive(Clone, Debug)]
pub struct TwistingElement {
    pub a: CdgAlgebra,
    pub b: CdgAlgebra,
    /// terms (b-label, a-label, coefficient)
    pub terms: Vec<(Label, Label, FieldElement)>,
}

impl TwistingElement {
    /// τ² + dτ = 0 in T^l, where (b'⊗a')(b''⊗a'') =
    /// (−1)^{|a'|(|b''|+|a''|)} b'b''⊗a''a'.
    pub fn check(&self) -> crate::cdg::AxiomReport {
        let f = self.a.field();
        let mut rep = crate::cdg::AxiomReport::default();
        let mut acc: BTreeMap<(Label, Label), FieldElement> = BTreeMap::new();
        let add = |m: &mut BTreeMap<(Label, Label), FieldElement>,
                       bl: Label,
                       al: Label,
                       v: FieldElement| {
            if v.is_zero() {
                return;
            }
            let e = m.entry((bl, al)).or_insert_with(|| f.zero());
            *e = f.add(e, &v);
        };
        // τ²
        for (b1, a1, v1) in &self.terms {
            let da1 = self.a.space().degree_of(a1).expect("label");
            for (b2, a2, v2) in &self.terms {
                let db2 = self.b.space().degree_of(b2).expect("label");
                let da2 = self.a.space().degree_of(a2).expect("label");
                let s = sign(da1 * (db2 + da2));
                let bb = self.b.algebra.mul_basis(b1, b2);
                let aa = self.a.algebra.mul_basis(a2, a1);
                for (bl, bv) in bb.iter() {
                    for (al, av) in aa.iter() {
                        let mut val = f.mul(v1, v2);
                        val = f.mul(&val, &f.mul(bv, av));
                        if s < 0 {
                            val = f.neg(&val);
                        }
                        add(&mut acc, bl.clone(), al.clone(), val);
                    }
                }
            }
        }
        // dτ: d(b⊗a) = d(b)⊗a + (−1)^{|b|} b⊗d(a)
        for (b1, a1, v1) in &self.terms {
            let db1 = self.b.space().degree_of(b1).expect("label");
            for (t, v) in self.b.d.apply_label(b1).iter() {
                add(&mut acc, t.clone(), a1.clone(), f.mul(v1, v));
            }
            for (t, v) in self.a.d.apply_label(a1).iter() {
                let mut val = f.mul(v1, v);
                if sign(db1) < 0 {
                    val = f.neg(&val);
                }
                add(&mut acc, b1.clone(), t.clone(), val);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        rep.demand(acc.is_empty(), || format!("τ²+dτ ≠ 0: {} residual terms", acc.len()));
        rep
    }
}

/// Hom_τ(M, B): the right DG-module over B on Hom_k(M, B) with the action
/// (f·b)(x) = (−1)^{|b||x|} f(x)·b and differential d + τ, where τ acts by
/// (b⊗a)(f)(x) = (−1)^{|a||f|} b·f(a·x).
pub fn contravariant_dual(te: &TwistingElement, m: &CdgModule) -> CdgModule {
    assert_eq!(m.side, Side::Left);
    assert_eq!(te.a.algebra, m.over.algebra, "module must live over A");
    let f = m.field();
    let hom = m.complex().hom_space(&DifferentialSpace {
        space: te.b.space().clone(),
        d: te.b.d.clone(),
    });
    let d = GradedMap::from_fn(&hom.space, &hom.space, 1, |l, fdeg| {
        let mut out = hom.d.apply_label(l);
        let Label::Map(xl, bl) = l else { panic!() };
        // τ-action
        for (tb, ta, v) in &te.terms {
            let da = te.a.space().degree_of(ta).expect("label");
            // (b⊗a)(f)(x) = ± b·f(a x): the new map sends x' ↦ b·f(a x')
            // for basis f = E_{xl→bl}: contributes at x' with ⟨a·x', xl⟩ ≠ 0
            for (_, xp) in m.space.all_basis() {
                if let Some(av) = m.act_basis(ta, xp).coeff(xl) {
                    let prod = te.b.algebra.mul(
                        &Combo::single(tb.clone(), f),
                        &Combo::single((**bl).clone(), f),
                    );
                    for (t, pv) in prod.iter() {
                        let mut val = f.mul(v, &f.mul(av, pv));
                        if sign(da * fdeg) < 0 {
                            val = f.neg(&val);
                        }
                        out.add_term(Label::map(xp.clone(), t.clone()), &val, f);
                    }
                }
            }
        }
        out
    });
    let mut out = CdgModule::new(&te.b, Side::Right, hom.space.clone(), d);
    // right action (f·b)(x) = (−1)^{|b||x|} f(x)·b, keyed as (algebra, module)
    for (db, b) in te.b.space().all_basis() {
        for (_, l) in hom.space.all_basis() {
            let Label::Map(xl, bl) = l else { panic!() };
            let dx = m.space.degree_of(xl).expect("label");
            let prod = te.b.algebra.mul_basis(bl, b);
            let mut act = Combo::zero();
            for (t, v) in prod.iter() {
                let val = if sign(db * dx) < 0 { f.neg(v) } else { v.clone() };
                act.add_term(Label::map((**xl).clone(), t.clone()), &val, f);
            }
            out.set_action(b, l, act);
        }
    }
    out
}

/// Hom(N, A)_τ: the left DG-module over A on Hom_k(N, A) with the T^l
/// action (b⊗a)(g)(y) = (−1)^{(|b|+|a|)(|g|+|y|)} g(y·b)·a.
pub fn contravariant_dual_inverse(te: &TwistingElement, n: &CdgModule) -> CdgModule {
    assert_eq!(n.side, Side::Right);
    assert_eq!(te.b.algebra, n.over.algebra, "module must live over B");
    let f = n.field();
    let hom = n.complex().hom_space(&DifferentialSpace {
        space: te.a.space().clone(),
        d: te.a.d.clone(),
    });
    let d = GradedMap::from_fn(&hom.space, &hom.space, 1, |l, fdeg| {
        let mut out = hom.d.apply_label(l);
        let Label::Map(yl, al) = l else { panic!() };
        for (tb, ta, v) in &te.terms {
            let db = te.b.space().degree_of(tb).expect("label");
            let da = te.a.space().degree_of(ta).expect("label");
            for (_, yp) in n.space.all_basis() {
                let dyp = n.space.degree_of(yp).expect("label");
                if let Some(bv) = n.act_basis(tb, yp).coeff(yl) {
                    let prod = te.a.algebra.mul(
                        &Combo::single((**al).clone(), f),
                        &Combo::single(ta.clone(), f),
                    );
                    for (t, pv) in prod.iter() {
                        let mut val = f.mul(v, &f.mul(bv, pv));
                        if sign((db + da) * (fdeg + dyp)) < 0 {
                            val = f.neg(&val);
                        }
                        out.add_term(Label::map(yp.clone(), t.clone()), &val, f);
                    }
                }
            }
        }
        out
    });
    let mut out = CdgModule::new(&te.a, Side::Left, hom.space.clone(), d);
    // left action (a·g)(y) = (−1)^{|a|(|g|+|y|)}?? — the action of A on
    // Hom(N, A) induced by left multiplication: (a g)(y) = a·g(y)
    for (_, a) in te.a.space().all_basis() {
        for (_, l) in hom.space.all_basis() {
            let Label::Map(yl, al) = l else { panic!() };
            let prod = te.a.algebra.mul_basis(a, al);
            let mut act = Combo::zero();
            for (t, v) in prod.iter() {
                act.add_term(Label::map((**yl).clone(), t.clone()), v, f);
            }
            out.set_action(a, l, act);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Filtered quasi-isomorphisms.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct FilteredQuisReport {
    pub verdict: bool,
    pub layer_verdicts: Vec<(usize, bool)>,
    pub witnesses: Vec<String>,
}

/// A filtration handed to the filtered-quasi-isomorphism checker: nested
/// layers F₀ ⊆ F₁ ⊆ … given as canonical subspaces, exhausting the space.
pub struct ExplicitFiltration {
    pub layers: Vec<SubData>,
}

/// Checks whether a morphism of conilpotent CDG-coalgebras is a filtered
/// quasi-isomorphism with respect to the canonical conilpotency
/// filtrations — a sufficient test: the paper quantifies existentially
/// over filtrations, and callers holding a better filtration (such as the
/// weight filtration induced on a bar construction) use
/// [`filtered_quis_check_with`].
pub fn filtered_quis_check(
    g: &CdgCoalgebraMorphism,
    w_src: &Section,
    w_tgt: &Section,
    n_max: usize,
) -> Result<FilteredQuisReport, String> {
    let filt_c = conilpotency_filtration(&g.source, w_src, n_max);
    let filt_d = conilpotency_filtration(&g.target, w_tgt, n_max);
    if !filt_c.exhaustive || !filt_d.exhaustive {
        return Err("non-conilpotent input on the window".into());
    }
    filtered_quis_check_with(
        g,
        &ExplicitFiltration { layers: filt_c.layers },
        &ExplicitFiltration { layers: filt_d.layers },
    )
}

/// The filtered-quasi-isomorphism check against explicit filtrations.
pub fn filtered_quis_check_with(
    g: &CdgCoalgebraMorphism,
    src: &ExplicitFiltration,
    tgt: &ExplicitFiltration,
) -> Result<FilteredQuisReport, String> {
    let n_max = src.layers.len().min(tgt.layers.len()) - 1;
    let filt_c = src;
    let filt_d = tgt;
    let mut witnesses = Vec::new();
    let mut layer_verdicts = Vec::new();
    let mut verdict = true;
    for n in 0..=n_max {
        let fc = &filt_c.layers[n];
        let fd = &filt_d.layers[n];
        // d preserves F_n and g maps F_nC into F_nD
        for (_, l) in fc.space.all_basis() {
            let img = g.source.d.apply(&fc.incl.apply_label(l));
            if fc.express(&img).is_none() {
                witnesses.push(format!("d does not preserve F_{n} of the source"));
                verdict = false;
            }
            let gim = g.f.apply(&fc.incl.apply_label(l));
            if fd.express(&gim).is_none() {
                witnesses.push(format!("g does not preserve F_{n}"));
                verdict = false;
            }
        }
    }
    if !verdict {
        return Ok(FilteredQuisReport { verdict, layer_verdicts, witnesses });
    }
    // layer complexes gr_n = F_n / F_{n−1} with induced d and induced map
    let layer = |c: &CdgCoalgebra,
                 filt: &ExplicitFiltration,
                 n: usize|
     -> (DifferentialSpace, SubData, crate::grading::QuotData) {
        let fsub = &filt.layers[n];
        let lower: Vec<Combo> = if n == 0 {
            Vec::new()
        } else {
            filt.layers[n - 1]
                .space
                .all_basis()
                .map(|(_, l)| {
                    fsub.express(&filt.layers[n - 1].incl.apply_label(l))
                        .expect("filtration is nested")
                })
                .collect()
        };
        let dsub = fsub
            .restrict(&c.d, fsub)
            .expect("d preserves the filtration");
        let sub_cx = DifferentialSpace { space: fsub.space.clone(), d: dsub };
        let (q, qd) = sub_cx.quotient_complex(&lower);
        (q, fsub.clone(), qd)
    };
    for n in 0..=n_max {
        let (grc, csub, cq) = layer(&g.source, filt_c, n);
        let (grd, dsub, dq) = layer(&g.target, filt_d, n);
        // induced map on layers: lift, apply g, express, project
        let mut gr_map = GradedMap::zero(&grc.space, &grd.space, 0);
        for (_, l) in grc.space.all_basis() {
            let in_fc = cq.rep.apply_label(l);
            let in_c = csub.incl.apply(&in_fc);
            let gx = g.f.apply(&in_c);
            let in_fd = dsub.express(&gx).expect("g preserves the filtration");
            gr_map.set_image(l, &dq.proj.apply(&in_fd));
        }
        // quasi-isomorphism of the layer
        let closed = gr_map.compose(&grc.d).sub(&grd.d.compose(&gr_map)).is_zero();
        if !closed {
            witnesses.push(format!("gr_{n} of the morphism is not closed"));
            layer_verdicts.push((n, false));
            verdict = false;
            continue;
        }
        let cone = DifferentialSpace::cone(&gr_map, &grc, &grd);
        let lo = cone.space.degrees().min().unwrap_or(0);
        let hi = cone.space.degrees().max().unwrap_or(0);
        let table = cohomology(&cone, (lo, hi), &BTreeSet::new());
        let ok = table.vanishes_on_interior();
        if !ok {
            witnesses.push(format!("gr_{n} is not a quasi-isomorphism"));
            verdict = false;
        }
        layer_verdicts.push((n, ok));
    }
    Ok(FilteredQuisReport { verdict, layer_verdicts, witnesses })
}


/// H⁰ of a windowed complex where coboundaries are taken only from
/// degree −1 sources of tensor weight ≤ `complete_weight` (sources whose
/// differential is complete inside the window). This is the honest reading
/// of word-length-truncated cobar complexes at degree 0.
pub fn h0_with_complete_sources(
    x: &DifferentialSpace,
    complete: impl Fn(&Label) -> bool,
) -> usize {
    let ker = x.d.block(0).kernel_basis().ncols;
    let mut vectors = Vec::new();
    for (d, l) in x.space.all_basis() {
        if d == -1 && complete(l) {
            let img = x.d.apply_label(l);
            if !img.is_zero() {
                vectors.push(img);
            }
        }
    }
    let sub = SubData::from_spanning(&x.space, &vectors);
    ker - sub.space.dim(0)
}

/// The unit morphism C → Br_v(Cb_w(C)) of the bar-cobar adjunction for a
/// coaugmented DG-coalgebra, built from the natural twisting cochain: a
/// C₊ letter goes to its one-letter cobar word.
pub fn bar_cobar_unit(
    c: &CdgCoalgebra,
    w: &Section,
    n_max: usize,
) -> (CdgCoalgebraMorphism, ExplicitFiltration, ExplicitFiltration) {
    let f = c.field();
    let cb = crate::twist::cobar(c, w, n_max);
    let v = Retraction::standard(&cb);
    let bar_cb = bar(&cb, &v, n_max);
    let tau = crate::twist::natural_tau_cobar(c, w, &cb);
    // f(c) = Σ_n (τ⊗…⊗τ)(reduced iterated comultiplication), with the
    // Koszul prefix signs of placing τ's
    let pivot = w.w.iter().map(|(l, _)| l.clone()).next().expect("nonzero");
    let pivot_coeff = w.w.coeff(&pivot).cloned().expect("pivot");
    let project = |x: &Combo| -> Combo {
        let mut y = x.clone();
        let e = c.coalgebra.counit(x);
        y.add(&w.w.scaled(&f.neg(&e), f), f);
        if let Some(cp) = y.coeff(&pivot).cloned() {
            let r = f.div(&cp, &pivot_coeff).expect("pivot");
            y.add(&w.w.scaled(&f.neg(&r), f), f);
        }
        y
    };
    let fmap = GradedMap::from_fn(c.space(), bar_cb.space(), 0, |l, _| {
        // iterated reduced comultiplications up to n_max, each leg sent
        // through τ as a one-letter cobar word, assembled as bar words
        let mut out = Combo::zero();
        // n = 0 component: ε(l)·[]
        let e = c.coalgebra.counit_basis(l);
        if !e.is_zero() {
            out.add_term(Label::Word(Vec::new()), &e, f);
        }
        // n = 1 component: reduced projection sent through τ
        for (t, v) in project(&Combo::single(l.clone(), f)).iter() {
            for (wl, tv) in tau.tau.apply_label(t).iter() {
                out.add_term(Label::Word(vec![wl.clone()]), &f.mul(v, tv), f);
            }
        }
        // n ≥ 2 components: iterated reduced comultiplications, each leg
        // through τ
        let mut layers: Vec<Vec<(Vec<Label>, FieldElement)>> = Vec::new();
        // layer 1: projected element as single C₊ legs (pre-τ)
        let mut base: Vec<(Vec<Label>, FieldElement)> = Vec::new();
        for (t, v) in project(&Combo::single(l.clone(), f)).iter() {
            base.push((vec![t.clone()], v.clone()));
        }
        layers.push(base);
        for n in 2..=n_max {
            let prev = &layers[n - 2];
            let mut next: Vec<(Vec<Label>, FieldElement)> = Vec::new();
            for (legs, v) in prev {
                // comultiply the last leg and project both parts
                let last = legs.last().unwrap().clone();
                for (x, y, vv) in c.coalgebra.sweedler(&last) {
                    let px = project(&Combo::single(x, f));
                    let py = project(&Combo::single(y, f));
                    for (lx, cx) in px.iter() {
                        for (ly, cy) in py.iter() {
                            let mut nl = legs[..legs.len() - 1].to_vec();
                            nl.push(lx.clone());
                            nl.push(ly.clone());
                            next.push((nl, f.mul(v, &f.mul(&vv, &f.mul(cx, cy)))));
                        }
                    }
                }
            }
            layers.push(next);
        }
        for (n, layer) in layers.iter().enumerate() {
            if n == 0 {
                continue; // n = 1 handled above
            }
            for (legs, v) in layer {
                // τ on each leg (one-letter words), with Koszul prefix signs
                // for inserting the degree-1 τ's: (−1)^{Σ_{i<j}(n−j)...};
                // all τ legs are one-letter cobar words, and the bar word is
                // their concatenation
                let mut words: Vec<Label> = Vec::new();
                let mut coeff = v.clone();
                let mut ok = true;
                for leg in legs {
                    let img = tau.tau.apply_label(leg);
                    if img.is_zero() {
                        ok = false;
                        break;
                    }
                    let mut it = img.iter();
                    let (wl, tv) = it.next().unwrap();
                    assert!(it.next().is_none(), "τ must send letters to single words");
                    words.push(wl.clone());
                    coeff = f.mul(&coeff, tv);
                }
                if ok {
                    out.add_term(Label::Word(words), &coeff, f);
                }
            }
        }
        out
    });
    let unit = CdgCoalgebraMorphism::strict(c, &bar_cb, fmap);
    // filtrations: canonical on C; on Br(Cb(C)) the induced weight
    // filtration, where the weight of a C₊ letter is its canonical level
    // and weights add over cobar letters and bar words
    let filt_c = conilpotency_filtration(c, w, n_max);
    assert!(filt_c.exhaustive, "source must be conilpotent");
    let letter_weight = |l: &Label| -> usize {
        for (n, layer) in filt_c.layers.iter().enumerate() {
            if layer.express(&Combo::single(l.clone(), f)).is_some() {
                return n;
            }
        }
        filt_c.layers.len()
    };
    let bar_word_weight = |l: &Label| -> usize {
        let Label::Word(cobar_letters) = l else { panic!("bar word") };
        cobar_letters
            .iter()
            .map(|cl| {
                let Label::Word(c_letters) = cl else { panic!("cobar word") };
                c_letters.iter().map(&letter_weight).sum::<usize>()
            })
            .sum()
    };
    let mut tgt_layers = Vec::new();
    for n in 0..=n_max {
        let vectors: Vec<Combo> = bar_cb
            .space()
            .all_basis()
            .filter(|(_, l)| bar_word_weight(l) <= n)
            .map(|(_, l)| Combo::single(l.clone(), f))
            .collect();
        tgt_layers.push(SubData::from_spanning(bar_cb.space(), &vectors));
    }
    let src = ExplicitFiltration { layers: filt_c.layers };
    let tgt = ExplicitFiltration { layers: tgt_layers };
    (unit, src, tgt)
}

/// The BGG pair: A = k[x] windowed at `max_internal` with x of internal
/// degree 1, C = its 2-dimensional quadratic dual k ⊕ k·[x] with [x] of
/// cohomological degree −1, τ([x]) = −x.
pub fn bgg_pair(field: Field, max_internal: i64) -> KoszulPair {
    let a = crate::gallery::polynomial_window(field, max_internal);
    let mut vspace = GradedSpace::new(field, Grading::Z).with_internal();
    vspace.add_basis_internal(crate::gallery::monomial(1), 0, 1);
    let qd = QuadraticData { v: vspace, relations: Vec::new() };
    let c = quadratic_dual_coalgebra(&qd, 1);
    let tau = GradedMap::from_fn(c.space(), a.space(), 1, |l, _| {
        let Label::Tagged(tag, _) = l else { panic!() };
        if tag == "q1" {
            Combo::single(crate::gallery::monomial(1), field).signed(-1, field)
        } else {
            Combo::zero()
        }
    });
    KoszulPair {
        algebra: a.clone(),
        coalgebra: c.clone(),
        tau: TwistingCochain::new(&c, &a, tau),
    }
}

/// The associated-graded Koszul pair of a (possibly nonabelian or centrally
/// extended) finite-dimensional Lie algebra: Sym(g) windowed against its
/// exterior quadratic dual. This certifies the §6.6 construction for U(g)
/// at the graded level.
pub fn gr_lie_pair(field: Field, dimension: usize, max_weight: usize) -> KoszulPair {
    let gr = crate::gallery::LieAlgebraData::abelian(field, dimension);
    let a = crate::gallery::u_g_window(&gr, max_weight);
    let vbar: Vec<Label> = (0..dimension)
        .map(|i| {
            let mut e = vec![0usize; dimension];
            e[i] = 1;
            crate::gallery::pbw_label(&e)
        })
        .collect();
    let kd = KoszulGeneratingData { algebra: a.clone(), vbar };
    let nd = nonhomogeneous_dual(&kd, dimension + 1).expect("Sym(g) is Koszul");
    let tau = natural_tau_koszul(&kd, &nd);
    KoszulPair { algebra: a, coalgebra: nd.coalgebra, tau }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdg::{check_cdg_coalgebra, dual_of_algebra};
    use crate::gallery;
    use crate::species::check_cdg_module;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn quadratic_dual_dimensions() {
        let f = q();
        // Λ-type: V = ⟨ε⟩ deg 1, R = ⟨ε⊗ε⟩: dim C_n = 1 for all n
        let mut v = GradedSpace::new(f, Grading::Z).with_internal();
        v.add_basis_internal(Label::atom("eps"), 1, 1);
        let r = Combo::single(Label::pair(Label::atom("eps"), Label::atom("eps")), f);
        let qd = QuadraticData { v, relations: vec![r] };
        let c = quadratic_dual_coalgebra(&qd, 4);
        for n in 0..=4i64 {
            let dim = c
                .space()
                .all_basis()
                .filter(|(_, l)| c.space().internal_degree(l) == Some(n))
                .count();
            assert_eq!(dim, 1, "dim C_{n}");
        }
        assert!(check_cdg_coalgebra(&c).pass());

        // k[x]-type: V = ⟨x⟩, R = 0: C = k ⊕ V
        let mut v = GradedSpace::new(f, Grading::Z).with_internal();
        v.add_basis_internal(Label::atom("x"), 0, 1);
        let qd = QuadraticData { v, relations: Vec::new() };
        let c = quadratic_dual_coalgebra(&qd, 4);
        assert_eq!(c.space().total_dim(), 2);

        // symmetric algebra on 2 variables: dims 1, 2, 1, 0
        let mut v = GradedSpace::new(f, Grading::Z).with_internal();
        v.add_basis_internal(Label::atom("x"), 0, 1);
        v.add_basis_internal(Label::atom("y"), 0, 1);
        let mut r = Combo::single(Label::pair(Label::atom("x"), Label::atom("y")), f);
        r.add_term(Label::pair(Label::atom("y"), Label::atom("x")), &f.neg(&f.one()), f);
        let qd = QuadraticData { v, relations: vec![r] };
        let c = quadratic_dual_coalgebra(&qd, 3);
        let dims: Vec<usize> = (0..=3i64)
            .map(|n| {
                c.space()
                    .all_basis()
                    .filter(|(_, l)| c.space().internal_degree(l) == Some(n))
                    .count()
            })
            .collect();
        assert_eq!(dims, vec![1, 2, 1, 0]);
        assert!(check_cdg_coalgebra(&c).pass());
    }

    #[test]
    fn bgg_pair_is_certified() {
        let pair = bgg_pair(q(), 8);
        pair.validate().expect("BGG pair valid");
        let cert = acyclicity_certificate(&pair, 8);
        assert!(cert.certified_up_to(8), "witnesses: {:?}", cert.witnesses);
    }

    #[test]
    fn deliberately_non_koszul_pair_fails_at_two() {
        // V 1-dim with R = 0 (so the true dual is k ⊕ V), padded with a
        // spurious C₂: the certificate must fail at internal degree 2
        let f = q();
        let a = gallery::polynomial_window(f, 4);
        let mut cspace = GradedSpace::new(f, Grading::Z).with_internal();
        cspace.add_basis_internal(Label::atom("c0"), 0, 0);
        cspace.add_basis_internal(Label::atom("c1"), -1, 1);
        cspace.add_basis_internal(Label::atom("c2"), -2, 2);
        let mut co = crate::cdg::GradedCoalgebra::new(cspace.clone());
        co.set_counit(&Label::atom("c0"), f.one());
        co.set_comul(
            &Label::atom("c0"),
            Combo::single(Label::pair(Label::atom("c0"), Label::atom("c0")), f),
        );
        let mut cm = Combo::single(Label::pair(Label::atom("c1"), Label::atom("c0")), f);
        cm.add_term(Label::pair(Label::atom("c0"), Label::atom("c1")), &f.one(), f);
        co.set_comul(&Label::atom("c1"), cm);
        let mut cm = Combo::single(Label::pair(Label::atom("c2"), Label::atom("c0")), f);
        cm.add_term(Label::pair(Label::atom("c0"), Label::atom("c2")), &f.one(), f);
        co.set_comul(&Label::atom("c2"), cm);
        let d = GradedMap::zero(&cspace, &cspace, 1);
        let c = CdgCoalgebra::dg(co, d);
        assert!(check_cdg_coalgebra(&c).pass());
        let mut tau = GradedMap::zero(c.space(), a.space(), 1);
        tau.add_entry(&Label::atom("c1"), &gallery::monomial(1), &f.neg(&f.one()));
        let pair = KoszulPair {
            algebra: a.clone(),
            coalgebra: c.clone(),
            tau: TwistingCochain::new(&c, &a, tau),
        };
        pair.validate().expect("structurally valid pair");
        let cert = acyclicity_certificate(&pair, 3);
        assert!(cert.verdicts[&1]);
        assert!(!cert.verdicts[&2], "padded C₂ must break exactness at 2");
        assert!(!cert.witnesses.is_empty());
    }

    #[test]
    fn gr_lie_pair_is_certified() {
        let pair = gr_lie_pair(q(), 2, 4);
        pair.validate().expect("gr pair valid");
        let cert = acyclicity_certificate(&pair, 4);
        assert!(cert.certified_up_to(4), "witnesses: {:?}", cert.witnesses);
    }

    #[test]
    fn nonhomogeneous_dual_matches_chevalley_eilenberg() {
        let f = q();
        for g in [
            gallery::LieAlgebraData::abelian(f, 2),
            gallery::LieAlgebraData::nonabelian2(f),
            gallery::LieAlgebraData::heisenberg_extension(f),
        ] {
            let a = gallery::u_g_window(&g, 3);
            let vbar = vec![gallery::pbw_label(&[1, 0]), gallery::pbw_label(&[0, 1])];
            let kd = KoszulGeneratingData { algebra: a.clone(), vbar };
            let nd = nonhomogeneous_dual(&kd, 3).expect("U(g) windows are Koszul");
            let ce = gallery::chevalley_eilenberg(&g);
            // explicit comparison map: e_{i1}∧…∧e_{in} ↦ antisymmetrized word
            let f2 = f;
            let cmp = GradedMap::from_fn(ce.space(), nd.bar.space(), 0, |l, _| {
                let Label::Wedge(v) = l else { panic!() };
                let idx: Vec<usize> = v
                    .iter()
                    .map(|a| {
                        let Label::Atom(name) = a else { panic!() };
                        name[1..].parse::<usize>().unwrap() - 1
                    })
                    .collect();
                // sum over permutations with sign
                fn perms(v: &[usize]) -> Vec<(Vec<usize>, i64)> {
                    if v.is_empty() {
                        return vec![(Vec::new(), 1)];
                    }
                    let mut out = Vec::new();
                    for i in 0..v.len() {
                        let mut rest = v.to_vec();
                        let x = rest.remove(i);
                        for (p, s) in perms(&rest) {
                            let mut w = vec![x];
                            w.extend(p);
                            out.push((w, s * if i % 2 == 0 { 1 } else { -1 }));
                        }
                    }
                    out
                }
                let mut out = Combo::zero();
                for (p, s) in perms(&idx) {
                    let word: Vec<Label> = p
                        .iter()
                        .map(|i| {
                            let mut e = vec![0usize; 2];
                            e[*i] = 1;
                            gallery::pbw_label(&e)
                        })
                        .collect();
                    out.add_term(Label::Word(word), &f2.from_i64(s), f2);
                }
                out
            });
            // the comparison lands in the nonhomogeneous dual subspace and
            // is a bijection onto it degreewise
            for (_, l) in ce.space().all_basis() {
                let img = cmp.apply_label(l);
                let expr = requadratize_public(&nd, &img);
                assert!(expr.is_some(), "CE basis {l} not in the dual subspace");
            }
            assert_eq!(ce.space().total_dim(), nd.coalgebra.space().total_dim());
            // differentials and curvature agree through the comparison
            for (_, l) in ce.space().all_basis() {
                let lhs = cmp.apply(&ce.d.apply_label(l));
                let rhs = nd.bar.d.apply(&cmp.apply_label(l));
                assert_eq!(lhs, rhs, "differentials disagree at {l}");
                let hc = ce.h_of(l);
                let mut hb = f.zero();
                for (wl, v) in cmp.apply_label(l).iter() {
                    hb = f.add(&hb, &f.mul(&nd.bar.h_of(wl), v));
                }
                assert_eq!(hc, hb, "curvatures disagree at {l}");
            }
        }
    }

    fn requadratize_public(nd: &NonhomogeneousDual, img: &Combo) -> Option<Combo> {
        // solve for img as a combination of the dual inclusion images
        let f = nd.coalgebra.field();
        if img.is_zero() {
            return Some(Combo::zero());
        }
        let mut remaining = img.clone();
        let mut out = Combo::zero();
        for _ in 0..nd.coalgebra.space().total_dim() + 1 {
            if remaining.is_zero() {
                return Some(out);
            }
            let mut progressed = false;
            for (_, dl) in nd.coalgebra.space().all_basis() {
                let cand = nd.into_bar.apply_label(dl);
                if cand.is_zero() {
                    continue;
                }
                let (lead, cl) = cand.iter().next().unwrap();
                if let Some(c0) = remaining.coeff(lead).cloned() {
                    let coeff = f.div(&c0, cl).unwrap();
                    remaining.add(&cand.scaled(&f.neg(&coeff), f), f);
                    out.add_term(dl.clone(), &coeff, f);
                    progressed = true;
                }
            }
            if !progressed {
                return None;
            }
        }
        None
    }

    #[test]
    fn duality_on_modules_gallery() {
        let f = q();
        let pair = bgg_pair(f, 6);
        let cert = acyclicity_certificate(&pair, 6);
        assert!(cert.certified_up_to(6));
        // M = A: free module roundtrip
        let ma = algebra_as_module(&pair.algebra, Side::Left);
        let rep = duality_on_modules(&pair, &ma, &cert, 4);
        assert!(rep.pass_up_to(4), "witnesses: {:?}", rep.witnesses);
        // M = k: trivial module
        let mk = gallery::trivial_module_internal(&pair.algebra);
        let rep = duality_on_modules(&pair, &mk, &cert, 4);
        assert!(rep.pass_up_to(4), "witnesses: {:?}", rep.witnesses);
        // M = k[x]/x²
        let mt = gallery::truncated_polynomial_module(&pair.algebra, 2);
        assert!(check_cdg_module(&mt).pass());
        let rep = duality_on_modules(&pair, &mt, &cert, 4);
        assert!(rep.pass_up_to(4), "witnesses: {:?}", rep.witnesses);
        // comodule side: trivial comodule k over C ↔ free module
        let wk = pair
            .coalgebra
            .space()
            .all_basis()
            .find(|(_, l)| !pair.coalgebra.coalgebra.counit_basis(l).is_zero())
            .map(|(_, l)| l.clone())
            .unwrap();
        let kk = DifferentialSpace::unit(f, Grading::Z);
        let mut kk_int = GradedSpace::new(f, Grading::Z).with_internal();
        kk_int.add_basis_internal(Label::atom("1"), 0, 0);
        let kk = DifferentialSpace { space: kk_int, d: kk.d.reindexed(&GradedSpace::new(f, Grading::Z), &GradedSpace::new(f, Grading::Z), 1) };
        let kk = DifferentialSpace::with_zero_d(kk.space.clone());
        let nk = crate::species::trivial_comodule(&pair.coalgebra, &wk, &kk, Side::Left);
        let rep = duality_on_comodules(&pair, &nk, &cert, 4);
        assert!(rep.pass_up_to(4), "witnesses: {:?}", rep.witnesses);
    }

    #[test]
    fn contramodule_duality_gallery() {
        let f = q();
        let pair = bgg_pair(f, 5);
        let cert = acyclicity_certificate(&pair, 5);
        // P = k (nonpositively graded trivially)
        let pk = gallery::trivial_module_internal(&pair.algebra);
        let rep = contramodule_duality_on_modules(&pair, &pk, &cert, 3);
        assert!(rep.pass_up_to(0), "witnesses: {:?}", rep.witnesses);
    }

    #[test]
    fn contravariant_duality_bgg() {
        let f = q();
        let a = gallery::polynomial_window(f, 6);
        // B = k ⊕ k·ξ with ξ of cohomological degree 1, internal degree −1
        let mut bspace = GradedSpace::new(f, Grading::Z).with_internal();
        bspace.add_basis_internal(Label::atom("1"), 0, 0);
        bspace.add_basis_internal(Label::atom("xi"), 1, -1);
        let mut balg = crate::cdg::GradedAlgebra::new(bspace.clone(), Label::atom("1"));
        balg.set_product(&Label::atom("xi"), &Label::atom("xi"), Combo::zero());
        let b = CdgAlgebra::dg(balg, GradedMap::zero(&bspace, &bspace, 1));
        let te = TwistingElement {
            a: a.clone(),
            b: b.clone(),
            terms: vec![(Label::atom("xi"), gallery::monomial(1), f.one())],
        };
        assert!(te.check().pass());
        // Hom_τ(A, B) is quasi-isomorphic to k per internal degree
        let ma = algebra_as_module(&a, Side::Left);
        let dual = contravariant_dual(&te, &ma);
        let rep = check_cdg_module(&dual);
        assert!(rep.pass(), "violations: {:?}", rep.violations);
        let cx = dual.complex();
        assert!(cx.d_squared_is_zero());
        let table = cohomology(&cx, (-1, 3), &BTreeSet::new());
        let internal = table.internal.expect("internally graded");
        // H concentrated at internal 0 (the class of the counit), dim 1;
        // internal degrees at the window boundary (−7 here) are edges
        let total: usize = internal
            .iter()
            .filter(|((_, n), _)| *n > -6)
            .map(|(_, v)| *v)
            .sum();
        assert_eq!(total, 1, "internal table: {internal:?}");
        assert_eq!(internal.get(&(0, 0)), Some(&1));

        // Ext_A(k[x]/x², k) via Hom_τ(M, B): matches the minimal resolution
        // 0 → A(−2) → A → M → 0: Ext⁰ = k (internal 0), Ext¹ = k (internal −2)
        let mt = gallery::truncated_polynomial_module(&a, 2);
        let dual_m = contravariant_dual(&te, &mt);
        let cxm = dual_m.complex();
        assert!(cxm.d_squared_is_zero());
        let table = cohomology(&cxm, (-1, 3), &BTreeSet::new());
        let internal = table.internal.expect("internally graded");
        assert_eq!(internal.get(&(0, 0)), Some(&1), "{internal:?}");
        assert_eq!(internal.get(&(1, -2)), Some(&1), "{internal:?}");
        let interior: usize = internal
            .iter()
            .filter(|((_, n), _)| *n > -6)
            .map(|(_, v)| *v)
            .sum();
        assert_eq!(interior, 2, "{internal:?}");

        // τ = 0 with B = k collapses to plain graded dualization
        let te0 = TwistingElement {
            a: a.clone(),
            b: gallery::ground_field(f, Grading::Z),
            terms: Vec::new(),
        };
        assert!(te0.check().pass());
        // note: ground_field is not internally graded; dualize a small module
        let dual0 = contravariant_dual(&te0, &mt);
        assert_eq!(dual0.space.total_dim(), mt.space.total_dim());
    }

    #[test]
    fn filtered_quis_unit_and_remark_failure() {
        let f = q();
        // the unit C → Br_v(Cb_w(C)) for the 2-dim conilpotent C = dual Λ
        let c = dual_of_algebra(&gallery::exterior_line(f));
        let w = Section::at_label(&Label::Dual(alloc::boxed::Box::new(Label::atom("1"))), f);
        let (unit, src_f, tgt_f) = bar_cobar_unit(&c, &w, 3);
        let rep = unit.check();
        assert!(rep.pass(), "unit morphism violations: {:?}", rep.violations);
        let fq = filtered_quis_check_with(&unit, &src_f, &tgt_f).expect("conilpotent inputs");
        assert!(fq.verdict, "witnesses: {:?}", fq.witnesses);
        // identity passes trivially
        let id = CdgCoalgebraMorphism::identity(&c);
        let fq = filtered_quis_check(&id, &w, &w, 3).expect("conilpotent");
        assert!(fq.verdict);

        // Remark-style failure: adjoined-unit algebra B = k ⊕ k·t:
        // Br_v(B) → Br_v(k) is a quasi-isomorphism of bar constructions,
        // but applying cobar separates the two
        let b = gallery::adjoined_unit_algebra(f);
        let vb = Retraction::standard(&b);
        let bar_b = bar(&b, &vb, 4);
        let bar_k = bar(&gallery::ground_field(f, Grading::Z), &Retraction::standard(&gallery::ground_field(f, Grading::Z)), 4);
        // H(bar_b) = k = H(bar_k) on the window interior
        let tb = cohomology(
            &DifferentialSpace { space: bar_b.space().clone(), d: bar_b.d.clone() },
            (-4, 1),
            &BTreeSet::new(),
        );
        for (d, v) in &tb.dims {
            let expected = usize::from(*d == 0);
            if *d > -4 {
                assert_eq!(*v, expected, "H^{d} of the adjoined-unit bar");
            }
        }
        let _ = bar_k;
        // cobar of both: Cb(Br(k)) = k, while Cb(Br(B)) has 2-dimensional H⁰
        // (computed with complete sources only, so the window edge does not
        // leak relations into degree 0)
        let wk = Section::at_label(&Label::Word(Vec::new()), f);
        let cb_b = crate::twist::cobar(&bar_b, &wk, 4);
        let cx = DifferentialSpace { space: cb_b.space().clone(), d: cb_b.d.clone() };
        let outer_len = |l: &Label| {
            let Label::Word(w) = l else { panic!() };
            w.len() <= 3
        };
        assert_eq!(h0_with_complete_sources(&cx, outer_len), 2);
        let cb_k = crate::twist::cobar(
            &bar(&gallery::ground_field(f, Grading::Z), &Retraction::standard(&gallery::ground_field(f, Grading::Z)), 3),
            &wk,
            3,
        );
        assert_eq!(cb_k.space().total_dim(), 1);
    }

    #[test]
    fn tor_and_ext_via_twist_lie_algebras() {
        let f = q();
        // certificate from the associated graded pair
        let cert = acyclicity_certificate(&gr_lie_pair(f, 2, 4), 4);
        assert!(cert.certified_up_to(4));
        for (g, expected) in [
            (gallery::LieAlgebraData::abelian(f, 2), vec![1usize, 2, 1]),
            (gallery::LieAlgebraData::nonabelian2(f), vec![1usize, 1, 0]),
        ] {
            let a = gallery::u_g_window(&g, 3);
            let vbar = vec![gallery::pbw_label(&[1, 0]), gallery::pbw_label(&[0, 1])];
            let kd = KoszulGeneratingData { algebra: a.clone(), vbar };
            let nd = nonhomogeneous_dual(&kd, 3).expect("Koszul");
            let tau = natural_tau_koszul(&kd, &nd);
            assert!(tau.check().pass());
            let mut aug = BTreeMap::new();
            aug.insert(Label::atom("1"), f.one());
            let kk = DifferentialSpace::unit(f, Grading::Z);
            let m = crate::species::trivial_module(&a, &aug, &kk, Side::Left);
            let table = tor_via_twist(&tau, &m, &cert, 4, (-3, 1));
            // H dims in degrees 0, −1, −2
            let dims: Vec<usize> = (0..3).map(|i| table.dim(-i)).collect();
            assert_eq!(dims, expected, "dims for {:?}: {:?}", g.bracket, table.dims);
        }
    }
}

#[cfg(test)]
mod anchor_tests {
    use super::*;
    use crate::cdg::{opposite_algebra, opposite_coalgebra};
    use crate::gallery;
    use crate::species::algebra_as_module;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn certificate_symmetric_under_opposites() {
        // passing to (A^rop, C^rop) preserves the acyclicity certificate;
        // the same τ works since both structures are commutative-ish in
        // degree reach, and the Maurer-Cartan check guards the convention
        let pair = bgg_pair(q(), 4);
        let op = KoszulPair {
            algebra: opposite_algebra(&pair.algebra),
            coalgebra: opposite_coalgebra(&pair.coalgebra),
            tau: TwistingCochain::new(
                &opposite_coalgebra(&pair.coalgebra),
                &opposite_algebra(&pair.algebra),
                pair.tau.tau.reindexed(
                    opposite_coalgebra(&pair.coalgebra).space(),
                    opposite_algebra(&pair.algebra).space(),
                    1,
                ),
            ),
        };
        op.validate().expect("opposite pair valid");
        let cert = acyclicity_certificate(&op, 4);
        assert!(cert.certified_up_to(4), "witnesses: {:?}", cert.witnesses);
    }

    #[test]
    fn duality_object_anchors() {
        // the trivial module goes to the cofree comodule, the free module
        // to the trivial comodule (up to quasi-isomorphism)
        let f = q();
        let pair = bgg_pair(f, 5);
        // C ⊗^τ k: the underlying comodule is C itself (cofree of rank 1)
        let k = gallery::trivial_module_internal(&pair.algebra);
        let ck = crate::twist::twist_comodule(&pair.tau, &k);
        for d in -2..=2 {
            assert_eq!(ck.space.dim(d), pair.coalgebra.space().dim(d), "C⊗^τk vs C at {d}");
        }
        // its differential matches d_C under the tensor-unit relabelling
        for (_, l) in ck.space.all_basis() {
            let Label::Pair(cl, _) = l else { panic!() };
            let img = ck.d.apply_label(l);
            let expected = pair.coalgebra.d.apply_label(cl);
            let mut relabel = Combo::zero();
            for (t, v) in expected.iter() {
                relabel.add_term(Label::pair(t.clone(), Label::atom("k")), v, f);
            }
            assert_eq!(img, relabel, "d mismatch at {l}");
        }
        // C ⊗^τ A is quasi-isomorphic to the trivial comodule k: exactly
        // the degree-0 internal-0 class survives (the certificate content)
        let a_mod = algebra_as_module(&pair.algebra, Side::Left);
        let ca = crate::twist::twist_comodule(&pair.tau, &a_mod);
        let t = crate::derived::cohomology(&ca.complex(), (-3, 3), &BTreeSet::new());
        let total: usize = t
            .internal
            .as_ref()
            .expect("internally graded")
            .iter()
            .filter(|((_, n), _)| *n <= 5)
            .map(|(_, v)| *v)
            .sum();
        assert_eq!(total, 1, "{:?}", t.internal);
    }
}

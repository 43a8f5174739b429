//! Bar and cobar constructions with curvature, the CDG-algebra Hom_k(C,B),
//! twisting cochains with their Maurer-Cartan certificates, the six twisted
//! module functors, conilpotency filtrations, and the A∞ encode layer.
//!
//! Tensor-degree truncation is mandatory: all constructions take a bound N
//! and all downstream claims are "up to tensor degree N". Coderivation
//! components that would leave the window are dropped.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cdg::{
    AxiomReport, CdgAlgebra, CdgCoalgebra, GradedAlgebra, GradedCoalgebra,
};
use crate::field::{Field, FieldElement};
use crate::grading::{
    sign, Combo, DifferentialSpace, GradedMap, GradedSpace, Label, SubData,
};
use crate::species::{CdgComodule, CdgContramodule, CdgModule, Side};

/// A homogeneous retraction v: B → k with v(1) = 1. The complement is
/// realized as the non-unit basis labels of B via the section
/// b ↦ b − v(b)·1.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub v: BTreeMap<Label, FieldElement>,
}

impl Retraction {
    /// The projection along all non-unit basis vectors (an augmentation
    /// whenever it is multiplicative and kills d and h).
    pub fn standard(b: &CdgAlgebra) -> Retraction {
        let mut v = BTreeMap::new();
        v.insert(b.algebra.unit.clone(), b.field().one());
        Retraction { v }
    }

    pub fn of(&self, l: &Label, field: Field) -> FieldElement {
        self.v.get(l).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn apply(&self, x: &Combo, field: Field) -> FieldElement {
        let mut out = field.zero();
        for (l, c) in x.iter() {
            out = field.add(&out, &field.mul(&self.of(l, field), c));
        }
        out
    }

    /// The section B_+ → B: for a non-unit basis label b, the element
    /// b − v(b)·1.
    pub fn section(&self, b: &CdgAlgebra, label: &Label) -> Combo {
        let f = b.field();
        let mut out = Combo::single(label.clone(), f);
        out.add_term(b.algebra.unit.clone(), &f.neg(&self.of(label, f)), f);
        out
    }

    /// Is (v, 0) a morphism of CDG-algebras to (k, 0, 0)?
    pub fn is_augmentation(&self, b: &CdgAlgebra) -> bool {
        let f = b.field();
        // multiplicative, kills d and h
        for (_, x) in b.space().all_basis() {
            for (_, y) in b.space().all_basis() {
                let lhs = self.apply(&b.algebra.mul_basis(x, y), f);
                let rhs = f.mul(&self.of(x, f), &self.of(y, f));
                if lhs != rhs {
                    return false;
                }
            }
            if !self.apply(&b.d.apply_label(x), f).is_zero() {
                return false;
            }
        }
        self.apply(&b.h, f).is_zero()
    }
}

/// A homogeneous section w: k → C of the counit, given by the element w(1)
/// of degree 0 with ε(w(1)) = 1.
#[derive(Clone, Debug)]
pub struct Section {
    pub w: Combo,
}

impl Section {
    /// w(1) = the given label (checked against the counit by callers).
    pub fn at_label(l: &Label, field: Field) -> Section {
        Section { w: Combo::single(l.clone(), field) }
    }

    /// Is (w, 0) a morphism of CDG-coalgebras from (k, 0, 0)? That is, w is
    /// a coalgebra morphism with d∘w = 0 and h∘w = 0.
    pub fn is_coaugmentation(&self, c: &CdgCoalgebra) -> bool {
        let f = c.field();
        // μ(w(1)) = w(1)⊗w(1), ε(w(1)) = 1, d(w(1)) = 0, h(w(1)) = 0
        let mut expected: BTreeMap<(Label, Label), FieldElement> = BTreeMap::new();
        for (l1, v1) in self.w.iter() {
            for (l2, v2) in self.w.iter() {
                let e = expected.entry((l1.clone(), l2.clone())).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(v1, v2));
            }
        }
        expected.retain(|_, v| !v.is_zero());
        let mut actual: BTreeMap<(Label, Label), FieldElement> = BTreeMap::new();
        for (a, b, v) in c.coalgebra.sweedler_combo(&self.w) {
            let e = actual.entry((a, b)).or_insert_with(|| f.zero());
            *e = f.add(e, &v);
        }
        actual.retain(|_, v| !v.is_zero());
        actual == expected
            && c.coalgebra.counit(&self.w).is_one()
            && c.d.apply(&self.w).is_zero()
            && c.h_combo(&self.w).is_zero()
    }
}

/// Splitting data of a CDG-algebra along a retraction: the components
/// m_V, m_k, d_V, d_k, h_V, h_k on the complement.
struct BarSplit {
    plus_labels: Vec<(i64, Label)>,
    m_v: BTreeMap<(Label, Label), Combo>,
    m_k: BTreeMap<(Label, Label), FieldElement>,
    d_v: BTreeMap<Label, Combo>,
    d_k: BTreeMap<Label, FieldElement>,
    h_v: Combo,
    h_k: FieldElement,
}

fn bar_split(b: &CdgAlgebra, v: &Retraction) -> BarSplit {
    let f = b.field();
    let unit = &b.algebra.unit;
    let plus_labels: Vec<(i64, Label)> = b
        .space()
        .all_basis()
        .filter(|(_, l)| *l != unit)
        .map(|(d, l)| (d, l.clone()))
        .collect();
    // project an element of B to (V-part expressed in B_+ labels, k-part)
    let split = |x: &Combo| -> (Combo, FieldElement) {
        let k_part = v.apply(x, f);
        let mut v_part = Combo::zero();
        for (l, c) in x.iter() {
            if l != unit {
                v_part.add_term(l.clone(), c, f);
            }
        }
        (v_part, k_part)
    };
    let mut m_v = BTreeMap::new();
    let mut m_k = BTreeMap::new();
    for (_, x) in &plus_labels {
        for (_, y) in &plus_labels {
            let p = b.algebra.mul(&v.section(b, x), &v.section(b, y));
            let (pv, pk) = split(&p);
            if !pv.is_zero() {
                m_v.insert((x.clone(), y.clone()), pv);
            }
            if !pk.is_zero() {
                m_k.insert((x.clone(), y.clone()), pk);
            }
        }
    }
    let mut d_v = BTreeMap::new();
    let mut d_k = BTreeMap::new();
    for (_, x) in &plus_labels {
        let dx = b.d.apply(&v.section(b, x));
        let (pv, pk) = split(&dx);
        if !pv.is_zero() {
            d_v.insert(x.clone(), pv);
        }
        if !pk.is_zero() {
            d_k.insert(x.clone(), pk);
        }
    }
    let (h_v, h_k) = split(&b.h);
    BarSplit { plus_labels, m_v, m_k, d_v, d_k, h_v, h_k }
}

fn words_up_to(letters: &[(i64, Label)], n_max: usize) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Label>> = vec![Vec::new()];
    for _ in 0..n_max {
        let mut next = Vec::new();
        for w in &layer {
            for (_, l) in letters {
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The bar-construction Br_v(B): the tensor coalgebra on B₊ truncated at
/// tensor degree `n_max`, with the curved coderivation determined by the
/// splitting of (m, d, h) along v. Coderivation components that would
/// exceed the truncation are dropped.
pub fn bar(b: &CdgAlgebra, v: &Retraction, n_max: usize) -> CdgCoalgebra {
    assert!(!b.space().is_zero(), "bar of the zero algebra");
    let f = b.field();
    let grading = b.grading();
    let split = bar_split(b, v);
    let deg_plus = |l: &Label| b.space().degree_of(l).expect("label") ;
    let word_degree = |w: &[Label]| -> i64 {
        grading.normalize(w.iter().map(|l| deg_plus(l) - 1).sum())
    };
    let mut space = GradedSpace::new(f, grading);
    let internal_ok = b.space().has_internal();
    if internal_ok {
        space = space.with_internal();
    }
    for w in words_up_to(&split.plus_labels, n_max) {
        let lab = Label::Word(w.clone());
        if internal_ok {
            let i: i64 = w.iter().map(|l| b.space().internal_degree(l).expect("internal")).sum();
            space.add_basis_internal(lab, word_degree(&w), i);
        } else {
            space.add_basis(lab, word_degree(&w));
        }
    }
    // deconcatenation comultiplication, counit at the empty word
    let mut co = GradedCoalgebra::new(space.clone());
    for (_, l) in space.all_basis() {
        let Label::Word(w) = l else { panic!("word label") };
        let mut comul = Combo::zero();
        for j in 0..=w.len() {
            comul.add_term(
                Label::pair(Label::Word(w[..j].to_vec()), Label::Word(w[j..].to_vec())),
                &f.one(),
                f,
            );
        }
        co.set_comul(l, comul);
        co.set_counit(l, if w.is_empty() { f.one() } else { f.zero() });
    }
    // coderivation: components on tensor degrees 2, 1, 0
    let comp2 = |x: &Label, y: &Label| -> Combo {
        // (−1)^{|x|+1} m_V(x⊗y), in bar degrees this is (−1)^{deg_+(x)}
        let s = sign(deg_plus(x) + 1);
        split
            .m_v
            .get(&(x.clone(), y.clone()))
            .cloned()
            .unwrap_or_else(Combo::zero)
            .signed(s, f)
    };
    let comp1 = |x: &Label| -> Combo {
        split.d_v.get(x).cloned().unwrap_or_else(Combo::zero).signed(-1, f)
    };
    let comp0 = || -> Combo { split.h_v.clone() };
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| {
        let Label::Word(w) = l else { panic!("word label") };
        let mut out = Combo::zero();
        // prefix Koszul sign uses bar degrees |u| − 1
        let mut prefix_sign = 1i64;
        for j in 0..=w.len() {
            // insertion of h_V between positions (tensor degree 0 component)
            if w.len() < n_max && !split.h_v.is_zero() {
                for (hl, hv) in comp0().iter() {
                    let mut nw = w[..j].to_vec();
                    nw.push(hl.clone());
                    nw.extend(w[j..].iter().cloned());
                    let c = if prefix_sign < 0 { f.neg(hv) } else { hv.clone() };
                    out.add_term(Label::Word(nw), &c, f);
                }
            }
            if j < w.len() {
                // degree-1 component at position j
                for (nl, nv) in comp1(&w[j]).iter() {
                    let mut nw = w[..j].to_vec();
                    nw.push(nl.clone());
                    nw.extend(w[j + 1..].iter().cloned());
                    let c = if prefix_sign < 0 { f.neg(nv) } else { nv.clone() };
                    out.add_term(Label::Word(nw), &c, f);
                }
            }
            if j + 1 < w.len() {
                // degree-2 component collapsing positions j, j+1
                for (nl, nv) in comp2(&w[j], &w[j + 1]).iter() {
                    let mut nw = w[..j].to_vec();
                    nw.push(nl.clone());
                    nw.extend(w[j + 2..].iter().cloned());
                    let c = if prefix_sign < 0 { f.neg(nv) } else { nv.clone() };
                    out.add_term(Label::Word(nw), &c, f);
                }
            }
            if j < w.len() {
                prefix_sign *= sign(deg_plus(&w[j]) - 1);
            }
        }
        out
    });
    // curvature functional
    let mut h = BTreeMap::new();
    for (_, l) in space.all_basis() {
        let Label::Word(w) = l else { panic!("word label") };
        let val = match w.len() {
            0 => split.h_k.clone(),
            1 => f.neg(&split.d_k.get(&w[0]).cloned().unwrap_or_else(|| f.zero())),
            2 => {
                let s = sign(deg_plus(&w[0]) + 1);
                let raw = split.m_k.get(&(w[0].clone(), w[1].clone())).cloned();
                let raw = raw.unwrap_or_else(|| f.zero());
                if s < 0 {
                    f.neg(&raw)
                } else {
                    raw
                }
            }
            _ => f.zero(),
        };
        if !val.is_zero() {
            h.insert(l.clone(), val);
        }
    }
    CdgCoalgebra { coalgebra: co, d, h }
}

/// Splitting data of a CDG-coalgebra along a section.
struct CobarSplit {
    plus_labels: Vec<(i64, Label)>,
    /// reduced comultiplication W → W⊗W
    mu_w: BTreeMap<Label, Vec<(Label, Label, FieldElement)>>,
    /// μ_k ∈ W⊗W
    mu_k: Vec<(Label, Label, FieldElement)>,
    d_w: BTreeMap<Label, Combo>,
    d_k: Combo,
    h_w: BTreeMap<Label, FieldElement>,
    h_k: FieldElement,
}

fn cobar_split(c: &CdgCoalgebra, w: &Section) -> CobarSplit {
    let f = c.field();
    // pick the pivot label of w(1): its complement labels represent W
    let pivot = w
        .w
        .iter()
        .map(|(l, _)| l.clone())
        .next()
        .expect("section must be nonzero");
    let plus_labels: Vec<(i64, Label)> = c
        .space()
        .all_basis()
        .filter(|(_, l)| **l != pivot)
        .map(|(d, l)| (d, l.clone()))
        .collect();
    // projection C → W: subtract ε(x)·w(1), then rewrite the pivot label
    // through the relation w(1) = Σ coeffs (pivot appears with nonzero
    // coefficient): pivot = (w(1) − rest)/coeff, and class(w(1)) = 0.
    let pivot_coeff = w.w.coeff(&pivot).cloned().expect("pivot coefficient");
    let project = |x: &Combo| -> Combo {
        let mut y = x.clone();
        let e = c.coalgebra.counit(x);
        y.add(&w.w.scaled(&f.neg(&e), f), f);
        // eliminate the pivot label via the w(1) relation
        if let Some(cp) = y.coeff(&pivot).cloned() {
            let ratio = f.div(&cp, &pivot_coeff).expect("pivot nonzero");
            y.add(&w.w.scaled(&f.neg(&ratio), f), f);
        }
        y
    };
    // section W → C: class of a non-pivot label ↦ label − ε(label)·w(1)
    let section = |l: &Label| -> Combo {
        let mut out = Combo::single(l.clone(), f);
        let e = c.coalgebra.counit_basis(l);
        out.add(&w.w.scaled(&f.neg(&e), f), f);
        out
    };
    let split_pair = |x: &Combo| -> Vec<(Label, Label, FieldElement)> {
        // (proj ⊗ proj) of a Sweedler list
        let mut acc: BTreeMap<(Label, Label), FieldElement> = BTreeMap::new();
        for (a, b, v) in c.coalgebra.sweedler_combo(x) {
            let pa = project(&Combo::single(a, f));
            let pb = project(&Combo::single(b, f));
            for (la, va) in pa.iter() {
                for (lb, vb) in pb.iter() {
                    let e = acc.entry((la.clone(), lb.clone())).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(&v, &f.mul(va, vb)));
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|((a, b), v)| (a, b, v)).collect()
    };
    let mut mu_w = BTreeMap::new();
    for (_, l) in &plus_labels {
        let terms = split_pair(&section(l));
        if !terms.is_empty() {
            mu_w.insert(l.clone(), terms);
        }
    }
    let mu_k = split_pair(&w.w);
    let mut d_w = BTreeMap::new();
    let mut h_w = BTreeMap::new();
    for (_, l) in &plus_labels {
        let dv = project(&c.d.apply(&section(l)));
        if !dv.is_zero() {
            d_w.insert(l.clone(), dv);
        }
        let hv = c.h_combo(&section(l));
        if !hv.is_zero() {
            h_w.insert(l.clone(), hv);
        }
    }
    let d_k = project(&c.d.apply(&w.w));
    let h_k = c.h_combo(&w.w);
    CobarSplit { plus_labels, mu_w, mu_k, d_w, d_k, h_w, h_k }
}

/// The cobar-construction Cb_w(C): the tensor algebra on C₊ truncated at
/// tensor degree `n_max`, with the curved derivation determined by the
/// splitting along w. Products and derivation components that would exceed
/// the truncation are dropped.
pub fn cobar(c: &CdgCoalgebra, w: &Section, n_max: usize) -> CdgAlgebra {
    assert!(!c.space().is_zero(), "cobar of the zero coalgebra");
    let f = c.field();
    let grading = c.grading();
    let split = cobar_split(c, w);
    let deg_plus = |l: &Label| c.space().degree_of(l).expect("label");
    let word_degree = |word: &[Label]| -> i64 {
        grading.normalize(word.iter().map(|l| deg_plus(l) + 1).sum())
    };
    let mut space = GradedSpace::new(f, grading);
    let internal_ok = c.space().has_internal();
    if internal_ok {
        space = space.with_internal();
    }
    for word in words_up_to(&split.plus_labels, n_max) {
        let lab = Label::Word(word.clone());
        if internal_ok {
            let i: i64 =
                word.iter().map(|l| c.space().internal_degree(l).expect("internal")).sum();
            space.add_basis_internal(lab, word_degree(&word), i);
        } else {
            space.add_basis(lab, word_degree(&word));
        }
    }
    let unit = Label::Word(Vec::new());
    let mut alg = GradedAlgebra::new(space.clone(), unit.clone());
    for (_, x) in space.all_basis() {
        for (_, y) in space.all_basis() {
            let Label::Word(wx) = x else { panic!() };
            let Label::Word(wy) = y else { panic!() };
            let p = if wx.len() + wy.len() <= n_max {
                let mut wz = wx.clone();
                wz.extend(wy.iter().cloned());
                Combo::single(Label::Word(wz), f)
            } else {
                Combo::zero()
            };
            alg.set_product(x, y, p);
        }
    }
    // derivation restricted to C₊: d(c) = (−1)^{|c₁|+1} c₁⊗c₂ − d_W(c) + h_W(c)·1
    let d1 = |l: &Label| -> Combo {
        let mut out = Combo::zero();
        if let Some(terms) = split.mu_w.get(l) {
            for (a, b, v) in terms {
                let s = sign(deg_plus(a) + 1);
                let t = if s < 0 { f.neg(v) } else { v.clone() };
                out.add_term(Label::Word(vec![a.clone(), b.clone()]), &t, f);
            }
        }
        if let Some(dv) = split.d_w.get(l) {
            for (a, v) in dv.iter() {
                out.add_term(Label::Word(vec![a.clone()]), &f.neg(v), f);
            }
        }
        if let Some(hv) = split.h_w.get(l) {
            out.add_term(Label::Word(Vec::new()), hv, f);
        }
        out
    };
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| {
        let Label::Word(word) = l else { panic!() };
        let mut out = Combo::zero();
        let mut prefix_sign = 1i64;
        for j in 0..word.len() {
            for (nl, nv) in d1(&word[j]).iter() {
                let Label::Word(mid) = nl else { panic!() };
                if word.len() - 1 + mid.len() > n_max {
                    continue;
                }
                let mut nw = word[..j].to_vec();
                nw.extend(mid.iter().cloned());
                nw.extend(word[j + 1..].iter().cloned());
                let cval = if prefix_sign < 0 { f.neg(nv) } else { nv.clone() };
                out.add_term(Label::Word(nw), &cval, f);
            }
            prefix_sign *= sign(deg_plus(&word[j]) + 1);
        }
        out
    });
    // curvature element h_Cb = (−1)^{|μ₁|+1} μ₁⊗μ₂ − d_k + h_k·1
    let mut h = Combo::zero();
    for (a, b, v) in &split.mu_k {
        let s = sign(deg_plus(a) + 1);
        let t = if s < 0 { f.neg(v) } else { v.clone() };
        h.add_term(Label::Word(vec![a.clone(), b.clone()]), &t, f);
    }
    for (a, v) in split.d_k.iter() {
        h.add_term(Label::Word(vec![a.clone()]), &f.neg(v), f);
    }
    h.add_term(unit, &split.h_k, f);
    CdgAlgebra { algebra: alg, d, h }
}

/// The CDG-algebra Hom_k(C, B): multiplication
/// (fg)(c) = (−1)^{|g||c₁|} f(c₁)g(c₂), differential
/// d(f) = d_B∘f − (−1)^{|f|} f∘d_C, curvature h(c) = ε(c)h_B − h_C(c)·1.
pub fn hom_cdg_algebra(c: &CdgCoalgebra, b: &CdgAlgebra) -> CdgAlgebra {
    let f = b.field();
    let space = c.space().hom(b.space());
    // unit = ε(−)·1_B: requires a single-label counit
    let mut unit = None;
    for (_, l) in c.space().all_basis() {
        let e = c.coalgebra.counit_basis(l);
        if !e.is_zero() {
            assert!(unit.is_none() && e.is_one(), "counit must be a single basis functional");
            unit = Some(Label::map(l.clone(), b.algebra.unit.clone()));
        }
    }
    let mut alg = GradedAlgebra::new(space.clone(), unit.expect("counit nonzero"));
    let basis: Vec<(i64, Label)> = space.all_basis().map(|(d, l)| (d, l.clone())).collect();
    for (_, x) in &basis {
        for (dg, g) in &basis {
            let Label::Map(cf, bf) = x else { panic!() };
            let Label::Map(cg, bg) = g else { panic!() };
            let mut out = Combo::zero();
            for (_, cl) in c.space().all_basis() {
                for (c1, c2, v) in c.coalgebra.sweedler(cl) {
                    if c1 == **cf && c2 == **cg {
                        let d1 = c.space().degree_of(&c1).expect("label");
                        let prod = b.algebra.mul_basis(bf, bg);
                        for (pl, pv) in prod.iter() {
                            let t = f.mul(&v, pv);
                            let t = if sign(dg * d1) < 0 { f.neg(&t) } else { t };
                            out.add_term(Label::map(cl.clone(), pl.clone()), &t, f);
                        }
                    }
                }
            }
            alg.set_product(x, g, out);
        }
    }
    let d = GradedMap::from_fn(&space, &space, 1, |l, fdeg| {
        let Label::Map(cf, bf) = l else { panic!() };
        let mut out = Combo::zero();
        for (t, v) in b.d.apply_label(bf).iter() {
            out.add_term(Label::map((**cf).clone(), t.clone()), v, f);
        }
        let s = -sign(fdeg);
        for (_, cl) in c.space().all_basis() {
            if let Some(v) = c.d.apply_label(cl).coeff(cf) {
                let t = if s < 0 { f.neg(v) } else { v.clone() };
                out.add_term(Label::map(cl.clone(), (**bf).clone()), &t, f);
            }
        }
        out
    });
    let mut h = Combo::zero();
    for (_, cl) in c.space().all_basis() {
        let e = c.coalgebra.counit_basis(cl);
        if !e.is_zero() {
            for (t, v) in b.h.iter() {
                h.add_term(Label::map(cl.clone(), t.clone()), &f.mul(&e, v), f);
            }
        }
        let hc = c.h_of(cl);
        if !hc.is_zero() {
            h.add_term(Label::map(cl.clone(), b.algebra.unit.clone()), &f.neg(&hc), f);
        }
    }
    CdgAlgebra { algebra: alg, d, h }
}

/// A degree-1 map τ: C → B, candidate twisting cochain.
#[derive(Clone, Debug)]
pub struct TwistingCochain {
    pub source: CdgCoalgebra,
    pub target: CdgAlgebra,
    pub tau: GradedMap,
}

impl TwistingCochain {
    pub fn new(source: &CdgCoalgebra, target: &CdgAlgebra, tau: GradedMap) -> TwistingCochain {
        assert_eq!(tau.shift, source.grading().normalize(1), "twisting cochains have degree 1");
        TwistingCochain { source: source.clone(), target: target.clone(), tau }
    }

    pub fn field(&self) -> Field {
        self.target.field()
    }

    /// The Maurer-Cartan residual (τ² + dτ + h)(c) per basis label; the
    /// cochain is valid iff all residuals vanish.
    pub fn residual(&self, c: &Label) -> Combo {
        let f = self.field();
        let cc = &self.source;
        let b = &self.target;
        let mut out = Combo::zero();
        // τ²(c) = Σ (−1)^{|c₁|} τ(c₁)τ(c₂)
        for (c1, c2, v) in cc.coalgebra.sweedler(c) {
            let d1 = cc.space().degree_of(&c1).expect("label");
            let p = b.algebra.mul(&self.tau.apply_label(&c1), &self.tau.apply_label(&c2));
            out.add(&p.scaled(&v, f).signed(sign(d1), f), f);
        }
        // dτ(c) = d_B(τ(c)) + τ(d_C(c))
        out.add(&b.d.apply(&self.tau.apply_label(c)), f);
        out.add(&self.tau.apply(&cc.d.apply_label(c)), f);
        // h(c) = ε(c)·h_B − h_C(c)·1
        let e = cc.coalgebra.counit_basis(c);
        out.add(&b.h.scaled(&e, f), f);
        out.add_term(b.algebra.unit.clone(), &f.neg(&cc.h_of(c)), f);
        out
    }

    pub fn check(&self) -> AxiomReport {
        let mut rep = AxiomReport::default();
        for (_, c) in self.source.space().all_basis() {
            let r = self.residual(c);
            rep.demand(r.is_zero(), || format!("Maurer-Cartan residual at {c}: {r}"));
        }
        rep
    }
}

/// The natural twisting cochain τ_{B,v}: Br_v(B) → B, minus the projection
/// to tensor degree one followed by the section.
pub fn natural_tau_bar(b: &CdgAlgebra, v: &Retraction, bar_c: &CdgCoalgebra) -> TwistingCochain {
    let f = b.field();
    let tau = GradedMap::from_fn(bar_c.space(), b.space(), 1, |l, _| {
        let Label::Word(word) = l else { panic!() };
        if word.len() == 1 {
            v.section(b, &word[0]).signed(-1, f)
        } else {
            Combo::zero()
        }
    });
    TwistingCochain::new(bar_c, b, tau)
}

/// The natural twisting cochain τ_{C,w}: C → Cb_w(C), the projection to C₊
/// followed by the inclusion as one-letter words.
pub fn natural_tau_cobar(c: &CdgCoalgebra, w: &Section, cobar_b: &CdgAlgebra) -> TwistingCochain {
    let f = c.field();
    let pivot = w.w.iter().map(|(l, _)| l.clone()).next().expect("nonzero section");
    let pivot_coeff = w.w.coeff(&pivot).cloned().expect("pivot");
    let tau = GradedMap::from_fn(c.space(), cobar_b.space(), 1, |l, _| {
        // project to W (eliminate counit part and the pivot label), then
        // include as a one-letter word
        let mut y = Combo::single(l.clone(), f);
        let e = c.coalgebra.counit_basis(l);
        y.add(&w.w.scaled(&f.neg(&e), f), f);
        if let Some(cp) = y.coeff(&pivot).cloned() {
            let ratio = f.div(&cp, &pivot_coeff).expect("pivot nonzero");
            y.add(&w.w.scaled(&f.neg(&ratio), f), f);
        }
        let mut out = Combo::zero();
        for (t, vv) in y.iter() {
            out.add_term(Label::Word(vec![t.clone()]), vv, f);
        }
        out
    });
    TwistingCochain::new(c, cobar_b, tau)
}

/// C ⊗^τ M: the left CDG-comodule on C ⊗ M with
/// d(c⊗x) = d(c)⊗x + (−1)^{|c|} c⊗d(x) + (−1)^{|c₁|} c₁⊗τ(c₂)x.
pub fn twist_comodule(tau: &TwistingCochain, m: &CdgModule) -> CdgComodule {
    assert_eq!(m.side, Side::Left);
    assert_eq!(tau.target.algebra, m.over.algebra, "module must live over the target of τ");
    let f = m.field();
    let c = &tau.source;
    let base = DifferentialSpace { space: c.space().clone(), d: c.d.clone() }.tensor(&m.complex());
    let d = GradedMap::from_fn(&base.space, &base.space, 1, |l, _| {
        let Label::Pair(cl, ml) = l else { panic!() };
        let mut out = base.d.apply_label(l);
        for (c1, c2, v) in c.coalgebra.sweedler(cl) {
            let d1 = c.space().degree_of(&c1).expect("label");
            let act = m.act(&tau.tau.apply_label(&c2), &Combo::single((**ml).clone(), f));
            for (t, vv) in act.iter() {
                let term = f.mul(&v, vv);
                let term = if sign(d1) < 0 { f.neg(&term) } else { term };
                out.add_term(Label::pair(c1.clone(), t.clone()), &term, f);
            }
        }
        out
    });
    let mut out = CdgComodule::new(c, Side::Left, base.space.clone(), d);
    for (_, l) in base.space.all_basis() {
        let Label::Pair(cl, ml) = l else { panic!() };
        let mut co = Combo::zero();
        for (c1, c2, v) in c.coalgebra.sweedler(cl) {
            co.add_term(Label::pair(c1, Label::pair(c2, (**ml).clone())), &v, f);
        }
        out.set_coaction(l, co);
    }
    out
}

/// B ⊗^τ N: the left CDG-module on B ⊗ N with
/// d(b⊗y) = d(b)⊗y + (−1)^{|b|} b⊗d(y) + (−1)^{|b|+1} b·τ(y₍₋₁₎)⊗y₍₀₎.
pub fn twist_module(tau: &TwistingCochain, n: &CdgComodule) -> CdgModule {
    assert_eq!(n.side, Side::Left);
    assert_eq!(tau.source.coalgebra, n.over.coalgebra, "comodule must live over the source of τ");
    let f = n.field();
    let b = &tau.target;
    let base = DifferentialSpace { space: b.space().clone(), d: b.d.clone() }.tensor(&n.complex());
    let d = GradedMap::from_fn(&base.space, &base.space, 1, |l, _| {
        let Label::Pair(bl, yl) = l else { panic!() };
        let db = b.space().degree_of(bl).expect("label");
        let mut out = base.d.apply_label(l);
        for (c1, y0, v) in n.sweedler(yl) {
            let prod =
                b.algebra.mul(&Combo::single((**bl).clone(), f), &tau.tau.apply_label(&c1));
            for (t, vv) in prod.iter() {
                let term = f.mul(&v, vv);
                let term = if sign(db + 1) < 0 { f.neg(&term) } else { term };
                out.add_term(Label::pair(t.clone(), y0.clone()), &term, f);
            }
        }
        out
    });
    let mut out = CdgModule::new(b, Side::Left, base.space.clone(), d);
    for (_, a) in b.space().all_basis() {
        for (_, l) in base.space.all_basis() {
            let Label::Pair(bl, yl) = l else { panic!() };
            let prod = b.algebra.mul_basis(a, bl);
            let mut act = Combo::zero();
            for (t, v) in prod.iter() {
                act.add_term(Label::pair(t.clone(), (**yl).clone()), v, f);
            }
            out.set_action(a, l, act);
        }
    }
    out
}

/// M ⊗^τ C: the right CDG-comodule on M ⊗ C with
/// d(x⊗c) = d(x)⊗c + (−1)^{|x|} x⊗d(c) + (−1)^{|x|+1} x·τ(c₁)⊗c₂.
pub fn twist_right_comodule(tau: &TwistingCochain, m: &CdgModule) -> CdgComodule {
    assert_eq!(m.side, Side::Right);
    assert_eq!(tau.target.algebra, m.over.algebra);
    let f = m.field();
    let c = &tau.source;
    let base = m.complex().tensor(&DifferentialSpace { space: c.space().clone(), d: c.d.clone() });
    let d = GradedMap::from_fn(&base.space, &base.space, 1, |l, _| {
        let Label::Pair(ml, cl) = l else { panic!() };
        let dm = m.space.degree_of(ml).expect("label");
        let mut out = base.d.apply_label(l);
        for (c1, c2, v) in c.coalgebra.sweedler(cl) {
            let act = m.act(&tau.tau.apply_label(&c1), &Combo::single((**ml).clone(), f));
            for (t, vv) in act.iter() {
                let term = f.mul(&v, vv);
                let term = if sign(dm + 1) < 0 { f.neg(&term) } else { term };
                out.add_term(Label::pair(t.clone(), c2.clone()), &term, f);
            }
        }
        out
    });
    let mut out = CdgComodule::new(c, Side::Right, base.space.clone(), d);
    for (_, l) in base.space.all_basis() {
        let Label::Pair(ml, cl) = l else { panic!() };
        let mut co = Combo::zero();
        for (c1, c2, v) in c.coalgebra.sweedler(cl) {
            co.add_term(Label::pair(Label::pair((**ml).clone(), c1), c2), &v, f);
        }
        out.set_coaction(l, co);
    }
    out
}

/// N ⊗^τ B: the right CDG-module on N ⊗ B with
/// d(y⊗b) = d(y)⊗b + (−1)^{|y|} y⊗d(b) + (−1)^{|y₍₀₎|} y₍₀₎⊗τ(y₍₁₎)b.
pub fn twist_right_module(tau: &TwistingCochain, n: &CdgComodule) -> CdgModule {
    assert_eq!(n.side, Side::Right);
    assert_eq!(tau.source.coalgebra, n.over.coalgebra);
    let f = n.field();
    let b = &tau.target;
    let base = n.complex().tensor(&DifferentialSpace { space: b.space().clone(), d: b.d.clone() });
    let d = GradedMap::from_fn(&base.space, &base.space, 1, |l, _| {
        let Label::Pair(yl, bl) = l else { panic!() };
        let mut out = base.d.apply_label(l);
        for (y0, y1, v) in n.sweedler(yl) {
            let dy0 = n.space.degree_of(&y0).expect("label");
            let prod =
                b.algebra.mul(&tau.tau.apply_label(&y1), &Combo::single((**bl).clone(), f));
            for (t, vv) in prod.iter() {
                let term = f.mul(&v, vv);
                let term = if sign(dy0) < 0 { f.neg(&term) } else { term };
                out.add_term(Label::pair(y0.clone(), t.clone()), &term, f);
            }
        }
        out
    });
    let mut out = CdgModule::new(b, Side::Right, base.space.clone(), d);
    for (_, a) in b.space().all_basis() {
        for (_, l) in base.space.all_basis() {
            let Label::Pair(yl, bl) = l else { panic!() };
            let prod = b.algebra.mul_basis(bl, a);
            let mut act = Combo::zero();
            for (t, v) in prod.iter() {
                act.add_term(Label::pair((**yl).clone(), t.clone()), v, f);
            }
            out.set_action(a, l, act);
        }
    }
    out
}

/// Hom^τ(C, P): the left CDG-contramodule on Hom_k(C, P) with
/// d(f)(c) = d(f(c)) − (−1)^{|f|} f(d c) + (−1)^{|f||c₁|} τ(c₁) f(c₂).
pub fn twist_contramodule(tau: &TwistingCochain, p: &CdgModule) -> CdgContramodule {
    assert_eq!(p.side, Side::Left);
    assert_eq!(tau.target.algebra, p.over.algebra);
    let f = p.field();
    let c = &tau.source;
    let free = crate::species::free_contramodule(
        &CdgCoalgebra::dg(c.coalgebra.clone(), GradedMap::zero(c.space(), c.space(), 1)),
        &DifferentialSpace::with_zero_d(p.space.clone()),
    );
    // differential with all three terms
    let hom = c.space().hom(&p.space);
    let d = GradedMap::from_fn(&hom, &hom, 1, |l, fdeg| {
        let Label::Map(cf, pf) = l else { panic!() };
        let mut out = Combo::zero();
        for (t, v) in p.d.apply_label(pf).iter() {
            out.add_term(Label::map((**cf).clone(), t.clone()), v, f);
        }
        let s = -sign(fdeg);
        for (_, cl) in c.space().all_basis() {
            if let Some(v) = c.d.apply_label(cl).coeff(cf) {
                let t = if s < 0 { f.neg(v) } else { v.clone() };
                out.add_term(Label::map(cl.clone(), (**pf).clone()), &t, f);
            }
        }
        // twist: at c with μ(c) ∋ (c₁, cf): add (−1)^{|f||c₁|} Map(c, τ(c₁)·pf)
        for (_, cl) in c.space().all_basis() {
            for (c1, c2, v) in c.coalgebra.sweedler(cl) {
                if c2 == **cf {
                    let d1 = c.space().degree_of(&c1).expect("label");
                    let act = p.act(&tau.tau.apply_label(&c1), &Combo::single((**pf).clone(), f));
                    for (t, vv) in act.iter() {
                        let term = f.mul(&v, vv);
                        let term = if sign(fdeg * d1) < 0 { f.neg(&term) } else { term };
                        out.add_term(Label::map(cl.clone(), t.clone()), &term, f);
                    }
                }
            }
        }
        out
    });
    let mut out = CdgContramodule::new(c, hom.clone(), d);
    for (_, cg) in c.space().all_basis() {
        for (_, pl) in hom.all_basis() {
            out.set_contra(
                &Label::map(cg.clone(), pl.clone()),
                free.contra_basis(&Label::map(cg.clone(), pl.clone())),
            );
        }
    }
    out
}

/// Hom^τ(B, Q): the left CDG-module on Hom_k(B, Q) with the action
/// (af)(b) = (−1)^{|a|(|f|+|b|)} f(ba) and
/// d(f)(b) = d(f(b)) − (−1)^{|f|} f(d b) + π(c ↦ (−1)^{|f|+1+|c||b|} f(τ(c)b)).
pub fn untwist_contramodule(tau: &TwistingCochain, q: &CdgContramodule) -> CdgModule {
    assert_eq!(tau.source.coalgebra, q.over.coalgebra);
    let f = q.field();
    let b = &tau.target;
    let c = &tau.source;
    let hom = b.space().hom(&q.space);
    let d = GradedMap::from_fn(&hom, &hom, 1, |l, fdeg| {
        let Label::Map(bf, qf) = l else { panic!() };
        let mut out = Combo::zero();
        for (t, v) in q.d.apply_label(qf).iter() {
            out.add_term(Label::map((**bf).clone(), t.clone()), v, f);
        }
        let s = -sign(fdeg);
        for (_, bl) in b.space().all_basis() {
            if let Some(v) = b.d.apply_label(bl).coeff(bf) {
                let t = if s < 0 { f.neg(v) } else { v.clone() };
                out.add_term(Label::map(bl.clone(), (**qf).clone()), &t, f);
            }
        }
        // twist: for each b, π of the functional c ↦ (−1)^{|f|+1+|c||b|}
        // ⟨τ(c)b, bf⟩ qf
        for (db, bl) in b.space().all_basis() {
            let mut arg = Combo::zero();
            for (dc, cl) in c.space().all_basis() {
                let prod = b
                    .algebra
                    .mul(&tau.tau.apply_label(cl), &Combo::single(bl.clone(), f));
                if let Some(v) = prod.coeff(bf) {
                    let s2 = sign(fdeg + 1 + dc * db);
                    let t = if s2 < 0 { f.neg(v) } else { v.clone() };
                    arg.add_term(Label::map(cl.clone(), (**qf).clone()), &t, f);
                }
            }
            for (t, v) in q.contra(&arg).iter() {
                out.add_term(Label::map(bl.clone(), t.clone()), v, f);
            }
        }
        out
    });
    let mut out = CdgModule::new(b, Side::Left, hom.clone(), d);
    // (a f)(b) = (−1)^{|a|(|f|+|b|)} f(ba)
    for (da, a) in b.space().all_basis() {
        for (_, l) in hom.all_basis() {
            let Label::Map(bf, qf) = l else { panic!() };
            let dbf_deg = b.space().degree_of(bf).expect("label");
            let dq = q.space.degree_of(qf).expect("label");
            let fdeg = dq - dbf_deg;
            let mut act = Combo::zero();
            // (af) sends b ↦ ± f(ba): coefficient at Map(b, qf) for each b
            // with ⟨ba, bf⟩ ≠ 0
            for (db, bl) in b.space().all_basis() {
                let prod = b.algebra.mul_basis(bl, a);
                if let Some(v) = prod.coeff(bf) {
                    let s = sign(da * (fdeg + db));
                    let t = if s < 0 { f.neg(v) } else { v.clone() };
                    act.add_term(Label::map(bl.clone(), (**qf).clone()), &t, f);
                }
            }
            out.set_action(a, l, act);
        }
    }
    out
}

/// The canonical increasing filtration F_n = ker(C → (C/w(k))^{⊗ n+1}) of a
/// coaugmented coalgebra, reported together with a conilpotence verdict on
/// the window.
pub struct ConilpotencyFiltration {
    pub layers: Vec<SubData>,
    pub exhaustive: bool,
}

pub fn conilpotency_filtration(c: &CdgCoalgebra, w: &Section, n_max: usize) -> ConilpotencyFiltration {
    assert!(w.is_coaugmentation(c), "section must be a coaugmentation");
    let f = c.field();
    let pivot = w.w.iter().map(|(l, _)| l.clone()).next().expect("nonzero");
    let pivot_coeff = w.w.coeff(&pivot).cloned().expect("pivot");
    // reduced projection C → C/w(k) in the complement coordinates
    let project = |x: &Combo| -> Combo {
        let mut y = x.clone();
        if let Some(cp) = y.coeff(&pivot).cloned() {
            let ratio = f.div(&cp, &pivot_coeff).expect("pivot nonzero");
            y.add(&w.w.scaled(&f.neg(&ratio), f), f);
        }
        y
    };
    // iterated reduced comultiplication values as keyed coordinate maps
    // stage m: map from C to formal words of length m over C-labels
    let mut layers = Vec::new();
    // stage 1: x ↦ [project(x)]
    let mut stage: BTreeMap<Label, BTreeMap<Vec<Label>, FieldElement>> = BTreeMap::new();
    for (_, l) in c.space().all_basis() {
        let mut img = BTreeMap::new();
        for (t, v) in project(&Combo::single(l.clone(), f)).iter() {
            img.insert(vec![t.clone()], v.clone());
        }
        stage.insert(l.clone(), img);
    }
    for _n in 0..=n_max {
        // F_n = kernel of the current stage (length n+1 words)
        let mut vectors = Vec::new();
        for deg in c.space().degrees().collect::<Vec<_>>() {
            let basis = c.space().basis(deg).to_vec();
            if basis.is_empty() {
                continue;
            }
            let mut rows: BTreeMap<Vec<Label>, BTreeMap<usize, FieldElement>> = BTreeMap::new();
            for (col, bl) in basis.iter().enumerate() {
                for (word, v) in &stage[bl] {
                    let e = rows
                        .entry(word.clone())
                        .or_default()
                        .entry(col)
                        .or_insert_with(|| f.zero());
                    *e = f.add(e, v);
                }
            }
            let mut mat = crate::linalg::Matrix::zero(f, rows.len(), basis.len());
            for (i, (_, r)) in rows.iter().enumerate() {
                for (j, v) in r {
                    mat.set(i, *j, v.clone());
                }
            }
            let ker = mat.kernel_basis();
            for j in 0..ker.ncols {
                vectors.push(c.space().combo_from_coords(deg, &ker.column(j)));
            }
        }
        layers.push(SubData::from_spanning(c.space(), &vectors));
        // next stage: append one reduced comultiplication step
        let mut next: BTreeMap<Label, BTreeMap<Vec<Label>, FieldElement>> = BTreeMap::new();
        for (_, l) in c.space().all_basis() {
            let mut img: BTreeMap<Vec<Label>, FieldElement> = BTreeMap::new();
            for (c1, c2, v) in c.coalgebra.sweedler(l) {
                for (p1, w1) in project(&Combo::single(c1.clone(), f)).iter() {
                    if let Some(rest) = stage.get(&c2) {
                        for (word, w2) in rest {
                            let mut nw = vec![p1.clone()];
                            nw.extend(word.iter().cloned());
                            let e = img.entry(nw).or_insert_with(|| f.zero());
                            *e = f.add(e, &f.mul(&v, &f.mul(w1, w2)));
                        }
                    }
                }
            }
            img.retain(|_, v| !v.is_zero());
            next.insert(l.clone(), img);
        }
        stage = next;
    }
    let exhaustive = layers
        .last()
        .map(|top| top.space.total_dim() == c.space().total_dim())
        .unwrap_or(false);
    ConilpotencyFiltration { layers, exhaustive }
}

/// A nonunital A∞-algebra: operations m_n of degree 2−n up to an arity
/// bound.
#[derive(Clone, Debug)]
pub struct AInfinityAlgebra {
    pub space: GradedSpace,
    /// m\[n\]\[(word)\] = value, n ≥ 1
    pub ops: BTreeMap<usize, BTreeMap<Vec<Label>, Combo>>,
    /// the strict unit label, when present
    pub strict_unit: Option<Label>,
}

impl AInfinityAlgebra {
    pub fn apply_op(&self, n: usize, word: &[Label]) -> Combo {
        self.ops
            .get(&n)
            .and_then(|t| t.get(word))
            .cloned()
            .unwrap_or_else(Combo::zero)
    }
}

/// A nonunital A∞-module: operations l_n: A^{⊗n}⊗M → M of degree 1−n.
#[derive(Clone, Debug)]
pub struct AInfinityModule {
    pub space: GradedSpace,
    /// l\[n\]\[(word, m)\] = value, n ≥ 0
    pub ops: BTreeMap<usize, BTreeMap<(Vec<Label>, Label), Combo>>,
}

impl AInfinityModule {
    pub fn apply_op(&self, n: usize, word: &[Label], m: &Label) -> Combo {
        self.ops
            .get(&n)
            .and_then(|t| t.get(&(word.to_vec(), m.clone())))
            .cloned()
            .unwrap_or_else(Combo::zero)
    }
}

/// The sign (−1)^{n + Σ_{j=1}^n (n−j)(|a_j|+1)} of the A∞ encode
/// convention.
fn ainfty_sign(degrees: &[i64]) -> i64 {
    let n = degrees.len() as i64;
    let mut e = n;
    for (j, d) in degrees.iter().enumerate() {
        e += (n - 1 - j as i64) * (d + 1);
    }
    sign(e)
}

/// Encodes a nonunital A∞-algebra as the coaugmented DG-coalgebra
/// ⊕_{n ≤ N} A[1]^{⊗n} with the coderivation built from the m_n; the
/// Stasheff relations are exactly d² = 0 on the window, checked by
/// `check_cdg_coalgebra` downstream.
pub fn ainfty_encode(a: &AInfinityAlgebra, n_max: usize) -> CdgCoalgebra {
    let f = a.space.field;
    let grading = a.space.grading;
    let letters: Vec<(i64, Label)> = a.space.all_basis().map(|(d, l)| (d, l.clone())).collect();
    let deg = |l: &Label| a.space.degree_of(l).expect("label");
    let word_degree = |w: &[Label]| -> i64 { grading.normalize(w.iter().map(|l| deg(l) - 1).sum()) };
    let mut space = GradedSpace::new(f, grading);
    for w in words_up_to(&letters, n_max) {
        space.add_basis(Label::Word(w.clone()), word_degree(&w));
    }
    let mut co = GradedCoalgebra::new(space.clone());
    for (_, l) in space.all_basis() {
        let Label::Word(w) = l else { panic!() };
        let mut comul = Combo::zero();
        for j in 0..=w.len() {
            comul.add_term(
                Label::pair(Label::Word(w[..j].to_vec()), Label::Word(w[j..].to_vec())),
                &f.one(),
                f,
            );
        }
        co.set_comul(l, comul);
        co.set_counit(l, if w.is_empty() { f.one() } else { f.zero() });
    }
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| {
        let Label::Word(w) = l else { panic!() };
        let mut out = Combo::zero();
        let mut prefix_sign = 1i64;
        for j in 0..=w.len() {
            for m in 1..=(w.len() - j) {
                let window: Vec<Label> = w[j..j + m].to_vec();
                let degs: Vec<i64> = window.iter().map(&deg).collect();
                let val = a.apply_op(m, &window).signed(ainfty_sign(&degs), f);
                for (t, v) in val.iter() {
                    let mut nw = w[..j].to_vec();
                    nw.push(t.clone());
                    nw.extend(w[j + m..].iter().cloned());
                    let c = if prefix_sign < 0 { f.neg(v) } else { v.clone() };
                    out.add_term(Label::Word(nw), &c, f);
                }
            }
            if j < w.len() {
                prefix_sign *= sign(deg(&w[j]) - 1);
            }
        }
        out
    });
    CdgCoalgebra::dg(co, d)
}

/// Encodes a strictly unital A∞-algebra as Br_v(A): the induced structure
/// on A₊-words, with d'(c) = d(c) + θ∗c − (−1)^{|c|} c∗θ and
/// h(c) = θ(d c) + θ²(c), where θ is v on one-letter words.
pub fn ainfty_encode_unital(a: &AInfinityAlgebra, v: &Retraction, n_max: usize) -> CdgCoalgebra {
    let unit = a.strict_unit.clone().expect("strict unit required");
    let f = a.space.field;
    let full = ainfty_encode(a, n_max);
    // θ on the full coalgebra: one-letter words only
    let theta = |l: &Label| -> FieldElement {
        let Label::Word(w) = l else { panic!() };
        if w.len() == 1 {
            v.of(&w[0], f)
        } else {
            f.zero()
        }
    };
    // d'(c) = d(c) + θ(c₁)c₂ + (−1)^{|c|} θ(c₂)c₁
    let dprime = |l: &Label, dl: i64| -> Combo {
        let mut out = full.d.apply_label(l);
        for (c1, c2, w) in full.coalgebra.sweedler(l) {
            let t1 = f.mul(&theta(&c1), &w);
            out.add_term(c2.clone(), &t1, f);
            let t2 = f.mul(&theta(&c2), &w);
            let t2 = if sign(dl) < 0 { f.neg(&t2) } else { t2 };
            out.add_term(c1.clone(), &t2, f);
        }
        out
    };
    // quotient to A₊-words: drop any word containing the unit letter after
    // projecting letters along the section a ↦ a − v(a)·1
    let project_word = |w: &[Label]| -> Combo {
        // expand each letter as (letter − v(letter)·unit) and drop words
        // with a unit letter
        let mut acc = Combo::single(Label::Word(Vec::new()), f);
        for l in w {
            if *l == unit {
                // unit letter: l − v(l)·unit = (1 − v(unit))·unit; with
                // v(unit) = 1 this vanishes
                return Combo::zero();
            }
            let mut next = Combo::zero();
            for (pl, pv) in acc.iter() {
                let Label::Word(pw) = pl else { panic!() };
                let mut nw = pw.clone();
                nw.push(l.clone());
                next.add_term(Label::Word(nw), pv, f);
            }
            acc = next;
        }
        acc
    };
    let plus_letters: Vec<(i64, Label)> = a
        .space
        .all_basis()
        .filter(|(_, l)| **l != unit)
        .map(|(d, l)| (d, l.clone()))
        .collect();
    let deg = |l: &Label| a.space.degree_of(l).expect("label");
    let grading = a.space.grading;
    let word_degree = |w: &[Label]| -> i64 { grading.normalize(w.iter().map(|l| deg(l) - 1).sum()) };
    let mut space = GradedSpace::new(f, grading);
    for w in words_up_to(&plus_letters, n_max) {
        space.add_basis(Label::Word(w.clone()), word_degree(&w));
    }
    let mut co = GradedCoalgebra::new(space.clone());
    for (_, l) in space.all_basis() {
        let Label::Word(w) = l else { panic!() };
        let mut comul = Combo::zero();
        for j in 0..=w.len() {
            comul.add_term(
                Label::pair(Label::Word(w[..j].to_vec()), Label::Word(w[j..].to_vec())),
                &f.one(),
                f,
            );
        }
        co.set_comul(l, comul);
        co.set_counit(l, if w.is_empty() { f.one() } else { f.zero() });
    }
    // induced differential: d̄(w̄) = project(d'(section(w)))
    // the section of an A₊-word is the same word (letters are basis labels
    // of A other than the unit); projection happens after applying d'
    let d = GradedMap::from_fn(&space, &space, 1, |l, dl| {
        let mut out = Combo::zero();
        for (t, v) in dprime(l, dl).iter() {
            let Label::Word(tw) = t else { panic!() };
            out.add(&project_word(tw).scaled(v, f), f);
        }
        out
    });
    // curvature: h(c) = θ(d'(c))... per the construction h'(c) = θ(d c) + θ²(c)
    let mut h = BTreeMap::new();
    for (_, l) in space.all_basis() {
        let mut val = f.zero();
        // θ(d(section(l))) where d is the FULL coderivation
        for (t, v) in full.d.apply_label(l).iter() {
            val = f.add(&val, &f.mul(&theta(t), v));
        }
        // θ²(c) = θ(c₂)θ(c₁)
        for (c1, c2, v) in full.coalgebra.sweedler(l) {
            val = f.add(&val, &f.mul(&f.mul(&theta(&c2), &theta(&c1)), &v));
        }
        if !val.is_zero() {
            h.insert(l.clone(), val);
        }
    }
    let mut out = CdgCoalgebra::dg(co, d);
    out.h = h;
    out
}

/// Encodes a nonunital A∞-module as the CDG-comodule
/// ⊕_{n ≤ N} A[1]^{⊗n} ⊗ M over the encoding coalgebra.
pub fn ainfty_module_encode(
    a: &AInfinityAlgebra,
    m: &AInfinityModule,
    n_max: usize,
) -> CdgComodule {
    let f = a.space.field;
    let over = ainfty_encode(a, n_max);
    let coalg_d = &over.d;
    let deg = |l: &Label| a.space.degree_of(l).expect("label");
    let mdeg = |l: &Label| m.space.degree_of(l).expect("label");
    let grading = a.space.grading;
    let mut space = GradedSpace::new(f, grading);
    let letters: Vec<(i64, Label)> = a.space.all_basis().map(|(d, l)| (d, l.clone())).collect();
    for w in words_up_to(&letters, n_max) {
        for (dm, ml) in m.space.all_basis() {
            let dw: i64 = w.iter().map(|l| deg(l) - 1).sum();
            space.add_basis(
                Label::pair(Label::Word(w.clone()), ml.clone()),
                grading.normalize(dw + dm),
            );
        }
    }
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| {
        let Label::Pair(wl, ml) = l else { panic!() };
        let Label::Word(w) = &**wl else { panic!() };
        let mut out = Combo::zero();
        // coalgebra coderivation acting on the word part (leaving m fixed)
        for (t, v) in coalg_d.apply_label(wl).iter() {
            out.add_term(Label::pair(t.clone(), (**ml).clone()), v, f);
        }
        // tail components: ℓ_t applied to the last t letters and m
        let prefix_sign_up_to = |j: usize| -> i64 {
            let mut s = 1i64;
            for l2 in &w[..j] {
                s *= sign(deg(l2) - 1);
            }
            s
        };
        for t in 0..=w.len() {
            let j = w.len() - t;
            let tail: Vec<Label> = w[j..].to_vec();
            let degs: Vec<i64> = tail.iter().map(&deg).collect();
            let mut e = degs.len() as i64;
            for (jj, dd) in degs.iter().enumerate() {
                e += (degs.len() as i64 - 1 - jj as i64) * (dd + 1);
            }
            let _ = mdeg;
            let val = m.apply_op(t, &tail, ml).signed(sign(e), f);
            let ps = prefix_sign_up_to(j);
            for (tm, v) in val.iter() {
                let c = if ps < 0 { f.neg(v) } else { v.clone() };
                out.add_term(Label::pair(Label::Word(w[..j].to_vec()), tm.clone()), &c, f);
            }
        }
        out
    });
    let mut out = CdgComodule::new(&over, Side::Left, space.clone(), d);
    for (_, l) in space.all_basis() {
        let Label::Pair(wl, ml) = l else { panic!() };
        let Label::Word(w) = &**wl else { panic!() };
        let mut co = Combo::zero();
        for j in 0..=w.len() {
            co.add_term(
                Label::pair(
                    Label::Word(w[..j].to_vec()),
                    Label::pair(Label::Word(w[j..].to_vec()), (**ml).clone()),
                ),
                &f.one(),
                f,
            );
        }
        out.set_coaction(l, co);
    }
    out
}

/// The strictly unital module encode Br_v(A, M): the induced structure on
/// A₊-words ⊗ M, with d′(z) = d(z) + θ_A∗z projected along the unit.
pub fn ainfty_module_encode_unital(
    a: &AInfinityAlgebra,
    v: &Retraction,
    m: &AInfinityModule,
    n_max: usize,
) -> CdgComodule {
    let unit = a.strict_unit.clone().expect("strict unit required");
    let f = a.space.field;
    let grading = a.space.grading;
    let full = ainfty_module_encode(a, m, n_max);
    let over = ainfty_encode_unital(a, v, n_max);
    let theta = |l: &Label| -> FieldElement {
        let Label::Word(w) = l else { panic!() };
        if w.len() == 1 {
            v.of(&w[0], f)
        } else {
            f.zero()
        }
    };
    // d′(z) = d(z) + θ(z₍₋₁₎) z₍₀₎ on the full comodule
    let dprime = |l: &Label| -> Combo {
        let mut out = full.d.apply_label(l);
        for (c1, z0, w) in full.sweedler(l) {
            out.add_term(z0.clone(), &f.mul(&theta(&c1), &w), f);
        }
        out
    };
    // project letters along the section a ↦ a − v(a)·1; words containing
    // the unit letter die
    let project_word = |w: &[Label]| -> Combo {
        let mut acc = Combo::single(Label::Word(Vec::new()), f);
        for l in w {
            if *l == unit {
                return Combo::zero();
            }
            let mut next = Combo::zero();
            for (pl, pv) in acc.iter() {
                let Label::Word(pw) = pl else { panic!() };
                let mut nw = pw.clone();
                nw.push(l.clone());
                next.add_term(Label::Word(nw), pv, f);
            }
            acc = next;
        }
        acc
    };
    let project_pair = |x: &Combo| -> Combo {
        let mut out = Combo::zero();
        for (t, w) in x.iter() {
            let Label::Pair(wl, ml) = t else { panic!() };
            let Label::Word(word) = &**wl else { panic!() };
            for (pw, pv) in project_word(word).iter() {
                out.add_term(Label::pair(pw.clone(), (**ml).clone()), &f.mul(w, pv), f);
            }
        }
        out
    };
    let plus_letters: Vec<(i64, Label)> = a
        .space
        .all_basis()
        .filter(|(_, l)| **l != unit)
        .map(|(d, l)| (d, l.clone()))
        .collect();
    let deg = |l: &Label| a.space.degree_of(l).expect("label");
    let mut space = GradedSpace::new(f, grading);
    for w in words_up_to(&plus_letters, n_max) {
        let dw: i64 = w.iter().map(|l| deg(l) - 1).sum();
        for (dm, ml) in m.space.all_basis() {
            space.add_basis(
                Label::pair(Label::Word(w.clone()), ml.clone()),
                grading.normalize(dw + dm),
            );
        }
    }
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| project_pair(&dprime(l)));
    let mut out = CdgComodule::new(&over, Side::Left, space.clone(), d);
    for (_, l) in space.all_basis() {
        let Label::Pair(wl, ml) = l else { panic!() };
        let Label::Word(w) = &**wl else { panic!() };
        let mut co = Combo::zero();
        for j in 0..=w.len() {
            co.add_term(
                Label::pair(
                    Label::Word(w[..j].to_vec()),
                    Label::pair(Label::Word(w[j..].to_vec()), (**ml).clone()),
                ),
                &f.one(),
                f,
            );
        }
        out.set_coaction(l, co);
    }
    out
}

/// The encoded A∞-structure of a DG-algebra: m₁ = d, m₂ = multiplication.
pub fn dg_as_ainfty(b: &CdgAlgebra) -> AInfinityAlgebra {
    assert!(b.is_dg(), "A∞ encode of a curved algebra is out of scope");
    let mut ops: BTreeMap<usize, BTreeMap<Vec<Label>, Combo>> = BTreeMap::new();
    let mut m1 = BTreeMap::new();
    let mut m2 = BTreeMap::new();
    for (_, x) in b.space().all_basis() {
        let dx = b.d.apply_label(x);
        if !dx.is_zero() {
            m1.insert(vec![x.clone()], dx);
        }
        for (_, y) in b.space().all_basis() {
            let p = b.algebra.mul_basis(x, y);
            if !p.is_zero() {
                m2.insert(vec![x.clone(), y.clone()], p);
            }
        }
    }
    ops.insert(1, m1);
    ops.insert(2, m2);
    AInfinityAlgebra {
        space: b.space().clone(),
        ops,
        strict_unit: Some(b.algebra.unit.clone()),
    }
}

/// The encoded A∞-module structure of a DG-module: l₀ = d, l₁ = action.
pub fn dg_module_as_ainfty(m: &CdgModule) -> AInfinityModule {
    assert_eq!(m.side, Side::Left);
    let mut ops: BTreeMap<usize, BTreeMap<(Vec<Label>, Label), Combo>> = BTreeMap::new();
    let mut l0 = BTreeMap::new();
    let mut l1 = BTreeMap::new();
    for (_, x) in m.space.all_basis() {
        let dx = m.d.apply_label(x);
        if !dx.is_zero() {
            l0.insert((Vec::new(), x.clone()), dx);
        }
        for (_, a) in m.over.space().all_basis() {
            let ax = m.act_basis(a, x);
            if !ax.is_zero() {
                l1.insert((vec![a.clone()], x.clone()), ax);
            }
        }
    }
    ops.insert(0, l0);
    ops.insert(1, l1);
    AInfinityModule { space: m.space.clone(), ops }
}

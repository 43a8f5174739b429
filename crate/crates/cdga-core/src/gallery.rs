//! Deterministic constructors for worked examples, shared by tests and the
//! command line.

use alloc::format;
use alloc::vec::Vec;

use crate::cdg::{CdgAlgebra, GradedAlgebra};
use crate::field::Field;
use crate::grading::{Combo, GradedMap, GradedSpace, Grading, Label};

/// The ground field as a CDG-algebra: k in degree 0, d = 0, h = 0.
pub fn ground_field(field: Field, grading: Grading) -> CdgAlgebra {
    let space = GradedSpace::unit(field, grading);
    let alg = GradedAlgebra::new(space.clone(), Label::atom("1"));
    CdgAlgebra::dg(alg, GradedMap::zero(&space, &space, 1))
}

/// Λ = k[ε]/ε² with deg ε = 1, d = 0, h = 0.
pub fn exterior_line(field: Field) -> CdgAlgebra {
    let mut space = GradedSpace::new(field, Grading::Z);
    space.add_basis(Label::atom("1"), 0);
    space.add_basis(Label::atom("eps"), 1);
    let mut alg = GradedAlgebra::new(space.clone(), Label::atom("1"));
    alg.set_product(&Label::atom("eps"), &Label::atom("eps"), Combo::zero());
    CdgAlgebra::dg(alg, GradedMap::zero(&space, &space, 1))
}

/// The polynomial algebra k[x] in cohomological degree 0, internally graded
/// by the exponent, windowed at `max_internal`. The window drops products
/// landing beyond it; callers treat top internal degrees as edges.
pub fn polynomial_window(field: Field, max_internal: i64) -> CdgAlgebra {
    assert!(max_internal >= 0);
    let mut space = GradedSpace::new(field, Grading::Z).with_internal();
    for n in 0..=max_internal {
        space.add_basis_internal(monomial(n), 0, n);
    }
    let mut alg = GradedAlgebra::new(space.clone(), monomial(0));
    for a in 0..=max_internal {
        for b in 0..=max_internal {
            if a + b <= max_internal {
                alg.set_product(&monomial(a), &monomial(b), Combo::single(monomial(a + b), field));
            } else {
                alg.set_product(&monomial(a), &monomial(b), Combo::zero());
            }
        }
    }
    CdgAlgebra::dg(alg, GradedMap::zero(&space, &space, 1))
}

/// The monomial label x^n.
pub fn monomial(n: i64) -> Label {
    if n == 0 {
        Label::atom("1")
    } else if n == 1 {
        Label::atom("x")
    } else {
        Label::atom(&format!("x{n}"))
    }
}

/// The exponent of a monomial label produced by [`monomial`].
pub fn monomial_exponent(l: &Label) -> i64 {
    match l {
        Label::Atom(s) if s == "1" => 0,
        Label::Atom(s) if s == "x" => 1,
        Label::Atom(s) if s.starts_with('x') => s[1..].parse().expect("monomial exponent"),
        _ => panic!("not a monomial label: {l}"),
    }
}

/// Basis labels of the exterior line, for convenience in tests.
pub fn eps() -> Label {
    Label::atom("eps")
}

pub fn one() -> Label {
    Label::atom("1")
}

/// Lie algebra data: structure constants [e_i, e_j] = Σ_k c^k_{ij} e_k plus
/// an optional 2-cocycle for a central extension.
#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    pub field: Field,
    pub dimension: usize,
    /// bracket\[(i,j)\] for i < j; antisymmetry fills the rest
    pub bracket: Vec<((usize, usize), Vec<(usize, crate::field::FieldElement)>)>,
    /// central-extension cocycle values χ(e_i, e_j) for i < j
    pub cocycle: Vec<((usize, usize), crate::field::FieldElement)>,
}

impl LieAlgebraData {
    pub fn abelian(field: Field, dimension: usize) -> LieAlgebraData {
        LieAlgebraData { field, dimension, bracket: Vec::new(), cocycle: Vec::new() }
    }

    /// The nonabelian 2-dimensional Lie algebra: [e₁, e₂] = e₂.
    pub fn nonabelian2(field: Field) -> LieAlgebraData {
        LieAlgebraData {
            field,
            dimension: 2,
            bracket: alloc::vec![((0, 1), alloc::vec![(1, field.one())])],
            cocycle: Vec::new(),
        }
    }

    /// A Heisenberg-type central extension of the 2-dim abelian algebra:
    /// χ(e₁, e₂) = 1.
    pub fn heisenberg_extension(field: Field) -> LieAlgebraData {
        LieAlgebraData {
            field,
            dimension: 2,
            bracket: Vec::new(),
            cocycle: alloc::vec![((0, 1), field.one())],
        }
    }

    pub fn bracket_of(&self, i: usize, j: usize) -> Vec<(usize, crate::field::FieldElement)> {
        let f = self.field;
        if i == j {
            return Vec::new();
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        for ((x, y), v) in &self.bracket {
            if (*x, *y) == (a, b) {
                return v
                    .iter()
                    .map(|(k, c)| (*k, if flip { f.neg(c) } else { c.clone() }))
                    .collect();
            }
        }
        Vec::new()
    }

    pub fn cocycle_of(&self, i: usize, j: usize) -> crate::field::FieldElement {
        let f = self.field;
        if i == j {
            return f.zero();
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        for ((x, y), v) in &self.cocycle {
            if (*x, *y) == (a, b) {
                return if flip { f.neg(v) } else { v.clone() };
            }
        }
        f.zero()
    }

    /// Antisymmetry is structural; this checks the Jacobi identity and, for
    /// extensions, the 2-cocycle condition.
    pub fn check(&self) -> crate::cdg::AxiomReport {
        let mut rep = crate::cdg::AxiomReport::default();
        let f = self.field;
        let n = self.dimension;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // [[i,j],k] + [[j,k],i] + [[k,i],j] = 0
                    let mut acc = alloc::vec![f.zero(); n];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, v) in self.bracket_of(a, b) {
                            for (t, w) in self.bracket_of(m, c) {
                                acc[t] = f.add(&acc[t], &f.mul(&v, &w));
                            }
                        }
                    }
                    rep.demand(acc.iter().all(|v| v.is_zero()), || {
                        format!("Jacobi identity fails at (e{i},e{j},e{k})")
                    });
                    // cocycle: χ([i,j],k) + χ([j,k],i) + χ([k,i],j) = 0
                    let mut acc = f.zero();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, v) in self.bracket_of(a, b) {
                            acc = f.add(&acc, &f.mul(&v, &self.cocycle_of(m, c)));
                        }
                    }
                    rep.demand(acc.is_zero(), || {
                        format!("cocycle condition fails at (e{i},e{j},e{k})")
                    });
                }
            }
        }
        rep
    }
}

use crate::cdg::{CdgCoalgebra, GradedCoalgebra};
use crate::field::FieldElement;
use crate::species::{CdgComodule, CdgContramodule, CdgModule, Side};
use alloc::collections::BTreeMap;

/// k[ε]/ε² with deg ε = 0 (the ungraded exterior line seen as a ring
/// concentrated in degree 0). This is the base of the acyclic complexes of
/// free-and-cofree modules.
pub fn exterior_line_ungraded(field: Field) -> CdgAlgebra {
    let mut space = GradedSpace::new(field, Grading::Z);
    space.add_basis(Label::atom("1"), 0);
    space.add_basis(Label::atom("eps"), 0);
    let mut alg = GradedAlgebra::new(space.clone(), Label::atom("1"));
    alg.set_product(&Label::atom("eps"), &Label::atom("eps"), Combo::zero());
    CdgAlgebra::dg(alg, GradedMap::zero(&space, &space, 1))
}

/// The ℤ/2-graded matrix-factorization base: B⁰ = k[x]/(x^{max+1}), B¹ = 0,
/// d = 0, h = x^w.
pub fn matrix_factorization_ring(field: Field, max_degree: i64, w_exponent: i64) -> CdgAlgebra {
    assert!(w_exponent <= max_degree);
    let mut space = GradedSpace::new(field, Grading::Z2);
    for n in 0..=max_degree {
        space.add_basis(monomial(n), 0);
    }
    let mut alg = GradedAlgebra::new(space.clone(), monomial(0));
    for a in 0..=max_degree {
        for b in 0..=max_degree {
            let p = if a + b <= max_degree {
                Combo::single(monomial(a + b), field)
            } else {
                Combo::zero()
            };
            alg.set_product(&monomial(a), &monomial(b), p);
        }
    }
    let d = GradedMap::zero(&space, &space, 1);
    CdgAlgebra { algebra: alg, d, h: Combo::single(monomial(w_exponent), field) }
}

/// A matrix factorization of w over the ring above: the free ℤ/2-graded
/// module on e0 (even), e1 (odd) with d(e0) = d0·e1 and d(e1) = d1·e0,
/// where d0, d1 are given by polynomial coefficient lists.
/// The factorization identity d1∘d0 = w·id is enforced by the species
/// checker, which fails with a witness when it does not hold.
pub fn matrix_factorization(b: &CdgAlgebra, d0: &[i64], d1: &[i64]) -> CdgModule {
    let f = b.field();
    let max_degree = b.space().total_dim() as i64 - 1;
    let mut space = GradedSpace::new(f, Grading::Z2);
    for n in 0..=max_degree {
        space.add_basis(Label::tagged("e0", monomial(n)), 0);
    }
    for n in 0..=max_degree {
        space.add_basis(Label::tagged("e1", monomial(n)), 1);
    }
    let poly = |coeffs: &[i64], shift: i64, tag: &str| -> Combo {
        let mut out = Combo::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let e = shift + i as i64;
            if e <= max_degree && *c != 0 {
                out.add_term(Label::tagged(tag, monomial(e)), &f.from_i64(*c), f);
            }
        }
        out
    };
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| {
        let Label::Tagged(tag, inner) = l else { panic!("factorization label") };
        let n = monomial_exponent(inner);
        if tag == "e0" {
            poly(d0, n, "e1")
        } else {
            poly(d1, n, "e0")
        }
    });
    let mut m = CdgModule::new(b, Side::Left, space.clone(), d);
    for a in 0..=max_degree {
        for n in 0..=max_degree {
            for tag in ["e0", "e1"] {
                let val = if a + n <= max_degree {
                    Combo::single(Label::tagged(tag, monomial(a + n)), f)
                } else {
                    Combo::zero()
                };
                m.set_action(&monomial(a), &Label::tagged(tag, monomial(n)), val);
            }
        }
    }
    m
}

/// The 2-dimensional DG-module M over Λ with d(m) = εm: acyclic, yet
/// neither coacyclic nor contraacyclic.
pub fn eps_twisted_module(field: Field) -> CdgModule {
    let b = exterior_line(field);
    let mut space = GradedSpace::new(field, Grading::Z);
    space.add_basis(Label::atom("m"), 0);
    space.add_basis(Label::atom("em"), 1);
    let mut d = GradedMap::zero(&space, &space, 1);
    d.add_entry(&Label::atom("m"), &Label::atom("em"), &field.one());
    let mut m = CdgModule::new(&b, Side::Left, space, d);
    m.set_action(&Label::atom("eps"), &Label::atom("m"), Combo::single(Label::atom("em"), field));
    m.set_action(&Label::atom("eps"), &Label::atom("em"), Combo::zero());
    m
}

/// Which side of the doubly infinite complex ⋯→Λ→Λ→⋯ is closed off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// ⋯→Λ→Λ→k→0, finite tail kept: the contraacyclic truncation.
    LeftTruncate,
    /// 0→k→Λ→Λ→⋯, finite head kept: the coacyclic truncation.
    RightTruncate,
}

/// A finite window of the acyclic complex of free-and-cofree modules over
/// the ungraded exterior line, closed off by k on the stated side. The
/// generator of the copy in position j is g_j of degree j.
pub fn acyclic_lambda_complex(field: Field, length: i64, closure: Closure) -> CdgModule {
    assert!(length >= 1);
    let b = exterior_line_ungraded(field);
    let g = |j: i64| Label::tagged("g", Label::atom(&format!("{j}")));
    let eg = |j: i64| Label::tagged("eg", Label::atom(&format!("{j}")));
    let mut space = GradedSpace::new(field, Grading::Z);
    let mut d = match closure {
        Closure::RightTruncate => {
            // t in degree 0, copies Λ(j) for j = 1..=length
            space.add_basis(Label::atom("t"), 0);
            for j in 1..=length {
                space.add_basis(g(j), j);
                space.add_basis(eg(j), j);
            }
            let mut d = GradedMap::zero(&space, &space, 1);
            d.add_entry(&Label::atom("t"), &eg(1), &field.one());
            for j in 1..length {
                d.add_entry(&g(j), &eg(j + 1), &field.one());
            }
            d
        }
        Closure::LeftTruncate => {
            // copies Λ(j) for j = -length..=-1, u in degree 0
            for j in -length..=-1 {
                space.add_basis(g(j), j);
                space.add_basis(eg(j), j);
            }
            space.add_basis(Label::atom("u"), 0);
            let mut d = GradedMap::zero(&space, &space, 1);
            for j in -length..-1 {
                d.add_entry(&g(j), &eg(j + 1), &field.one());
            }
            d.add_entry(&g(-1), &Label::atom("u"), &field.one());
            d
        }
    };
    let _ = &mut d;
    let mut m = CdgModule::new(&b, Side::Left, space, d);
    let eps = Label::atom("eps");
    match closure {
        Closure::RightTruncate => {
            m.set_action(&eps, &Label::atom("t"), Combo::zero());
            for j in 1..=length {
                m.set_action(&eps, &g(j), Combo::single(eg(j), field));
                m.set_action(&eps, &eg(j), Combo::zero());
            }
        }
        Closure::LeftTruncate => {
            m.set_action(&eps, &Label::atom("u"), Combo::zero());
            for j in -length..=-1 {
                m.set_action(&eps, &g(j), Combo::single(eg(j), field));
                m.set_action(&eps, &eg(j), Combo::zero());
            }
        }
    }
    m
}

fn subset_label(subset: &[usize]) -> Label {
    Label::Wedge(subset.iter().map(|i| Label::atom(&format!("e{}", i + 1))).collect())
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let mut s = Vec::new();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                s.push(i);
            }
        }
        out.push(s);
    }
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Sign of the permutation sorting the concatenation of two disjoint
/// increasing sequences.
fn shuffle_sign(field: Field, s1: &[usize], s2: &[usize]) -> FieldElement {
    let mut inversions = 0usize;
    for a in s1 {
        for b in s2 {
            if b < a {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        field.one()
    } else {
        field.neg(&field.one())
    }
}

/// The Chevalley–Eilenberg coalgebra C_*(g): the exterior coalgebra on g in
/// cohomological degrees −n, with the homological differential from the
/// bracket and the central-extension cocycle as curvature.
pub fn chevalley_eilenberg(g: &LieAlgebraData) -> CdgCoalgebra {
    let rep = g.check();
    assert!(rep.pass(), "invalid Lie data: {:?}", rep.violations);
    let f = g.field;
    let n = g.dimension;
    let mut space = GradedSpace::new(f, Grading::Z).with_internal();
    for s in subsets(n) {
        space.add_basis_internal(subset_label(&s), -(s.len() as i64), s.len() as i64);
    }
    let mut co = GradedCoalgebra::new(space.clone());
    for s in subsets(n) {
        let mut comul = Combo::zero();
        // all splittings into ordered pairs of disjoint subsets
        let k = s.len();
        for mask in 0u32..(1 << k) {
            let mut s1 = Vec::new();
            let mut s2 = Vec::new();
            for (t, el) in s.iter().enumerate() {
                if mask & (1 << t) != 0 {
                    s1.push(*el);
                } else {
                    s2.push(*el);
                }
            }
            let sgn = shuffle_sign(f, &s1, &s2);
            comul.add_term(Label::pair(subset_label(&s1), subset_label(&s2)), &sgn, f);
        }
        co.set_comul(&subset_label(&s), comul);
        co.set_counit(&subset_label(&s), if s.is_empty() { f.one() } else { f.zero() });
    }
    // homological differential: d(e_S) = Σ_{i<j} (−1)^{pos} [e_i,e_j] ∧ rest
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| {
        let Label::Wedge(_) = l else { panic!("wedge label") };
        let s: Vec<usize> = match l {
            Label::Wedge(v) => v
                .iter()
                .map(|a| {
                    let Label::Atom(name) = a else { panic!() };
                    name[1..].parse::<usize>().unwrap() - 1
                })
                .collect(),
            _ => unreachable!(),
        };
        let mut out = Combo::zero();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                // (−1)^{i+j} with 1-based positions i+1, j+1: use i+j (0-based
                // i+1 + j+1 = i+j+2 ≡ i+j mod 2)
                let pos_sign = if (i + j) % 2 == 0 { f.one() } else { f.neg(&f.one()) };
                let rest: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != i && *t != j)
                    .map(|(_, v)| *v)
                    .collect();
                for (m, c) in g.bracket_of(s[i], s[j]) {
                    // insert m into rest with the sorting sign; drop if repeated
                    if rest.contains(&m) {
                        continue;
                    }
                    let mut merged = rest.clone();
                    merged.push(m);
                    // inversion count of moving m from the end to sorted place
                    let bigger = rest.iter().filter(|&&r| r < m).count();
                    let moves = rest.len() - bigger;
                    let s_sign = if moves.is_multiple_of(2) { f.one() } else { f.neg(&f.one()) };
                    merged.sort_unstable();
                    let coeff = f.mul(&pos_sign, &f.mul(&c, &s_sign));
                    out.add_term(subset_label(&merged), &coeff, f);
                }
            }
        }
        out
    });
    // curvature: the §6.6 subcoalgebra of the bar construction carries
    // h(e_i ∧ e_j) = −χ(e_i, e_j) in the orientation where the extension
    // rewrites e_j e_i = e_i e_j − [e_i,e_j] − χ(e_i,e_j)
    let mut h = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = g.cocycle_of(i, j);
            if !v.is_zero() {
                h.insert(subset_label(&[i, j]), f.neg(&v));
            }
        }
    }
    CdgCoalgebra { coalgebra: co, d, h }
}

/// The dual-of-polynomial coalgebra with dual basis x̌_n in degree −n·`gen_deg`
/// up to `max_n`, zero differential and curvature. For gen_deg = 1 this is
/// the graded coalgebra with C* = k[x], deg x = 1.
pub fn power_series_coalgebra(field: Field, gen_deg: i64, max_n: i64) -> CdgCoalgebra {
    let xd = |n: i64| Label::tagged("xd", Label::atom(&format!("{n}")));
    let mut space = GradedSpace::new(field, Grading::Z).with_internal();
    for n in 0..=max_n {
        space.add_basis_internal(xd(n), -n * gen_deg, n);
    }
    let mut co = GradedCoalgebra::new(space.clone());
    for n in 0..=max_n {
        let mut comul = Combo::zero();
        for i in 0..=n {
            comul.add_term(Label::pair(xd(i), xd(n - i)), &field.one(), field);
        }
        co.set_comul(&xd(n), comul);
        co.set_counit(&xd(n), if n == 0 { field.one() } else { field.zero() });
    }
    let d = GradedMap::zero(&space, &space, 1);
    CdgCoalgebra::dg(co, d)
}

/// The §5.1 filtered-vector-space pair: for a filtration F₀ ⊆ F₁ ⊆ F₂ with
/// the given dimensions, the contramodule with components F_iV and the
/// comodule with components V/F_{i−1}V over the dual-of-polynomial
/// coalgebra.
pub fn filtered_space_example(
    field: Field,
    dims: [usize; 3],
) -> (CdgContramodule, CdgComodule, CdgCoalgebra) {
    assert!(dims[0] <= dims[1] && dims[1] <= dims[2]);
    let c = power_series_coalgebra(field, 1, 3);
    let top = 3i64;
    let xd = |n: i64| Label::tagged("xd", Label::atom(&format!("{n}")));
    // contramodule P: P^i = F_iV with the filtration stabilized at the top
    // of the coalgebra window (F_i = V for i ≥ 2); π(Map(x̌_n, p)) is the
    // signed inclusion F_i ⊆ F_{i+n}
    let fdim_p = |i: i64| -> usize {
        match i {
            i if i < 0 => 0,
            0 => dims[0],
            1 => dims[1],
            _ => dims[2],
        }
    };
    let pv = |i: i64, t: usize| Label::tagged("f", Label::atom(&format!("{i}_{t}")));
    let mut pspace = GradedSpace::new(field, Grading::Z);
    for i in 0..=top {
        for t in 0..fdim_p(i) {
            pspace.add_basis(pv(i, t), i);
        }
    }
    let dmap = GradedMap::zero(&pspace, &pspace, 1);
    let mut p = CdgContramodule::new(&c, pspace.clone(), dmap);
    for n in 0..=top {
        // x̌_n is odd for odd n, so contraassociativity against the Koszul
        // sign of the free-contramodule convention forces (−1)^{n(n−1)/2}
        let s = if (n * (n - 1) / 2) % 2 == 0 { field.one() } else { field.neg(&field.one()) };
        for i in 0..=top {
            for t in 0..fdim_p(i) {
                let target = i + n;
                let img = if target <= top {
                    Combo::of(pv(target, t), s.clone())
                } else {
                    Combo::zero()
                };
                p.set_contra(&Label::map(xd(n), pv(i, t)), img);
            }
        }
    }
    // comodule M: M^i = V/F_{i−1}V for i = 0,1,2 (V = F₂): components have
    // dims (d₂, d₂−d₀, d₂−d₁); coaction m ↦ Σ x̌_n ⊗ q(m)
    let mv = |i: i64, t: usize| Label::tagged("q", Label::atom(&format!("{i}_{t}")));
    // basis vector t of V survives in V/F_{i−1} iff t ≥ dim F_{i−1}
    let fdim = |i: i64| -> usize {
        match i {
            i if i < 0 => 0,
            0 => dims[0],
            1 => dims[1],
            _ => dims[2],
        }
    };
    let mut mspace = GradedSpace::new(field, Grading::Z);
    for i in 0..=top {
        for t in fdim(i - 1)..dims[2] {
            mspace.add_basis(mv(i, t), i);
        }
    }
    let dmap = GradedMap::zero(&mspace, &mspace, 1);
    let mut m = CdgComodule::new(&c, Side::Left, mspace.clone(), dmap);
    for i in 0..=top {
        for t in fdim(i - 1)..dims[2] {
            let mut co = Combo::zero();
            for n in 0..=top {
                let target = i + n;
                if target <= top && t >= fdim(target - 1) {
                    co.add_term(Label::pair(xd(n), mv(target, t)), &field.one(), field);
                }
            }
            m.set_coaction(&mv(i, t), co);
        }
    }
    (p, m, c)
}

/// A PBW monomial label e1^{a₁}…e_r^{a_r} encoded by its exponent vector.
pub fn pbw_label(exps: &[usize]) -> Label {
    if exps.iter().all(|e| *e == 0) {
        return Label::atom("1");
    }
    let mut name = String::new();
    for (i, e) in exps.iter().enumerate() {
        for _ in 0..*e {
            name.push_str(&format!("e{}", i + 1));
        }
    }
    Label::Atom(name)
}

use alloc::string::String;

/// The PBW exponent vector of a monomial label from [`pbw_label`].
pub fn pbw_exponents(l: &Label, dim: usize) -> Vec<usize> {
    let Label::Atom(s) = l else { panic!("pbw label") };
    let mut out = alloc::vec![0usize; dim];
    if s == "1" {
        return out;
    }
    let mut rest = s.as_str();
    while !rest.is_empty() {
        assert!(rest.starts_with('e'));
        let digits: alloc::string::String =
            rest[1..].chars().take_while(|c| c.is_ascii_digit()).collect();
        let idx: usize = digits.parse().unwrap();
        out[idx - 1] += 1;
        rest = &rest[1 + digits.len()..];
    }
    out
}

/// The windowed universal enveloping algebra U(g) (or U′(g) for a central
/// extension with the convention that the central element acts as 1),
/// spanned by PBW monomials of total degree ≤ `max_weight`, concentrated in
/// cohomological degree 0, d = 0, h = 0.
///
/// Products are exact whenever the PBW weights of the factors sum to at
/// most the window; beyond that, the high-weight part is dropped, so axiom
/// checks are meaningful on basis tuples whose weights fit in the window.
pub fn u_g_window(g: &LieAlgebraData, max_weight: usize) -> CdgAlgebra {
    let rep = g.check();
    assert!(rep.pass(), "invalid Lie data: {:?}", rep.violations);
    let f = g.field;
    let dim = g.dimension;
    // all exponent vectors with total ≤ max_weight, in PBW-lex order
    fn gen_exps(dim: usize, max: usize) -> Vec<Vec<usize>> {
        if dim == 0 {
            return alloc::vec![Vec::new()];
        }
        let mut out = Vec::new();
        for head in 0..=max {
            for mut tail in gen_exps(dim - 1, max - head) {
                let mut v = alloc::vec![head];
                v.append(&mut tail);
                out.push(v);
            }
        }
        out
    }
    let mut exps = gen_exps(dim, max_weight);
    exps.sort_by_key(|e| (e.iter().sum::<usize>(), e.clone()));
    // abelian, cocycle-free algebras are genuinely graded by PBW weight
    let graded = g.bracket.is_empty() && g.cocycle.is_empty();
    let mut space = GradedSpace::new(f, Grading::Z);
    if graded {
        space = space.with_internal();
    }
    for e in &exps {
        if graded {
            space.add_basis_internal(pbw_label(e), 0, e.iter().sum::<usize>() as i64);
        } else {
            space.add_basis(pbw_label(e), 0);
        }
    }
    // normal-ordering: rewrite a word of generator indices into the PBW
    // basis, dropping weight > max_weight
    struct Ctx<'a> {
        g: &'a LieAlgebraData,
        max: usize,
    }
    fn normalize(ctx: &Ctx<'_>, word: &[usize]) -> BTreeMap<Vec<usize>, FieldElement> {
        let f = ctx.g.field;
        let mut out: BTreeMap<Vec<usize>, FieldElement> = BTreeMap::new();
        if word.len() > ctx.max {
            return out;
        }
        // find first descent
        match (0..word.len().saturating_sub(1)).find(|&i| word[i] > word[i + 1]) {
            None => {
                out.insert(word.to_vec(), f.one());
            }
            Some(i) => {
                // e_j e_i = e_i e_j − [e_i, e_j] − χ(e_i, e_j)·1
                let (j, i2) = (word[i], word[i + 1]);
                let mut swapped = word.to_vec();
                swapped.swap(i, i + 1);
                for (w, v) in normalize(ctx, &swapped) {
                    let e = out.entry(w).or_insert_with(|| f.zero());
                    *e = f.add(e, &v);
                }
                // bracket term: [e_{i2}, e_j] with a minus sign
                for (k, c) in ctx.g.bracket_of(i2, j) {
                    let mut shorter = word[..i].to_vec();
                    shorter.push(k);
                    shorter.extend(word[i + 2..].iter().copied());
                    for (w, v) in normalize(ctx, &shorter) {
                        let e = out.entry(w).or_insert_with(|| f.zero());
                        *e = f.sub(e, &f.mul(&c, &v));
                    }
                }
                // cocycle term
                let chi = ctx.g.cocycle_of(i2, j);
                if !chi.is_zero() {
                    let mut shorter = word[..i].to_vec();
                    shorter.extend(word[i + 2..].iter().copied());
                    for (w, v) in normalize(ctx, &shorter) {
                        let e = out.entry(w).or_insert_with(|| f.zero());
                        *e = f.sub(e, &f.mul(&chi, &v));
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
    let ctx = Ctx { g, max: max_weight };
    let exp_to_word = |e: &[usize]| -> Vec<usize> {
        let mut w = Vec::new();
        for (i, n) in e.iter().enumerate() {
            for _ in 0..*n {
                w.push(i);
            }
        }
        w
    };
    let mut alg = GradedAlgebra::new(space.clone(), Label::atom("1"));
    for ea in &exps {
        for eb in &exps {
            let mut word = exp_to_word(ea);
            word.extend(exp_to_word(eb));
            let mut p = Combo::zero();
            for (w, v) in normalize(&ctx, &word) {
                let mut e = alloc::vec![0usize; dim];
                for i in w {
                    e[i] += 1;
                }
                p.add_term(pbw_label(&e), &v, f);
            }
            alg.set_product(&pbw_label(ea), &pbw_label(eb), p);
        }
    }
    CdgAlgebra::dg(alg, GradedMap::zero(&space, &space, 1))
}

/// The augmented algebra k ⊕ A obtained by formally adjoining a unit to the
/// (forgotten-unit) algebra A = k: basis {1, t} with t² = t. The bar of its
/// augmentation is quasi-isomorphic to Br(k), but cobar-of-bar separates
/// them — the counterexample to dropping conilpotency.
pub fn adjoined_unit_algebra(field: Field) -> CdgAlgebra {
    let mut space = GradedSpace::new(field, Grading::Z);
    space.add_basis(Label::atom("1"), 0);
    space.add_basis(Label::atom("t"), 0);
    let mut alg = GradedAlgebra::new(space.clone(), Label::atom("1"));
    alg.set_product(&Label::atom("t"), &Label::atom("t"), Combo::single(Label::atom("t"), field));
    CdgAlgebra::dg(alg, GradedMap::zero(&space, &space, 1))
}

/// k[x]/x^k as an internally graded module over the polynomial window.
pub fn truncated_polynomial_module(s: &CdgAlgebra, k_trunc: i64) -> crate::species::CdgModule {
    let f = s.field();
    let mut space = GradedSpace::new(f, Grading::Z).with_internal();
    for n in 0..k_trunc {
        space.add_basis_internal(Label::tagged("m", monomial(n)), 0, n);
    }
    let d = GradedMap::zero(&space, &space, 1);
    let mut m = crate::species::CdgModule::new(s, Side::Left, space, d);
    for (_, a) in s.space().all_basis() {
        let ea = monomial_exponent(a);
        for n in 0..k_trunc {
            let val = if ea + n < k_trunc {
                Combo::single(Label::tagged("m", monomial(ea + n)), f)
            } else {
                Combo::zero()
            };
            m.set_action(a, &Label::tagged("m", monomial(n)), val);
        }
    }
    m
}

/// The trivial internally graded module k over an augmented algebra whose
/// non-unit basis labels act by zero.
pub fn trivial_module_internal(a: &CdgAlgebra) -> crate::species::CdgModule {
    let f = a.field();
    let mut space = GradedSpace::new(f, Grading::Z).with_internal();
    space.add_basis_internal(Label::atom("k"), 0, 0);
    let d = GradedMap::zero(&space, &space, 1);
    let mut m = crate::species::CdgModule::new(a, Side::Left, space, d);
    for (_, l) in a.space().all_basis() {
        if *l != a.algebra.unit {
            m.set_action(l, &Label::atom("k"), Combo::zero());
        }
    }
    m
}

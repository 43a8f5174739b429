//! The acceptance suite: one test per criterion, printing one pass/fail
//! line each. All tolerances are exact. Stated runtime limits are enforced
//! in release builds and reported informationally in debug builds.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::time::Instant;

use cdga_core::cdg::{
    check_cdg_algebra_bounded, check_cdg_coalgebra_bounded, dual_of_algebra, CdgAlgebra,
    CdgCoalgebra, GradedAlgebra,
};
use cdga_core::derived::{
    cohomology, cohomology_of_twist, contractibility_certificate, tor_second_kind, DerivedWindow,
};
use cdga_core::field::{Field, FieldElement};
use cdga_core::gallery;
use cdga_core::grading::{
    sign, Combo, DifferentialSpace, GradedMap, GradedSpace, Grading, Label,
};
use cdga_core::koszul::{
    acyclicity_certificate, bar_cobar_unit, bgg_pair, duality_on_modules, filtered_quis_check_with,
    gr_lie_pair, h0_with_complete_sources, natural_tau_koszul, nonhomogeneous_dual,
    KoszulGeneratingData,
};
use cdga_core::species::{
    algebra_as_module, check_cdg_comodule_bounded, check_cdg_contramodule_bounded,
    check_cdg_module_bounded, coalgebra_as_left_comodule, coalgebra_as_right_comodule, cofree_comodule,
    cohom, contratensor, cotensor, dualize_comodule, free_contramodule, hom_comodules,
    hom_contramodules, hom_over_algebra, phi, psi, tensor_over_algebra, trivial_module,
    CdgContramodule, CdgModule, Side,
};
use cdga_core::twist::{
    bar, cobar, natural_tau_bar, natural_tau_cobar, twist_comodule, twist_contramodule,
    twist_module, twist_right_comodule, twist_right_module, untwist_contramodule, Retraction,
    Section,
};

/// Deterministic xorshift64* generator: stable across platforms and runs.
struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Rng {
        Rng(seed | 1)
    }

    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    fn pick(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn scalar(&mut self, f: Field) -> FieldElement {
        f.from_i64(self.next() as i64 % 3 - 1)
    }

}

fn finish(criterion: u32, what: &str, started: Instant, limit_secs: u64) {
    let elapsed = started.elapsed();
    println!("criterion {criterion}: PASS ({what}; {elapsed:?})");
    #[cfg(not(debug_assertions))]
    assert!(
        elapsed.as_secs() < limit_secs,
        "criterion {criterion} exceeded its {limit_secs}s budget: {elapsed:?}"
    );
    #[cfg(debug_assertions)]
    let _ = limit_secs;
}

fn fields() -> [Field; 2] {
    [Field::Rationals, Field::prime(7).unwrap()]
}

fn aug_of(b: &CdgAlgebra) -> BTreeMap<Label, FieldElement> {
    let mut aug = BTreeMap::new();
    aug.insert(b.algebra.unit.clone(), b.field().one());
    aug
}

/// A random complex with zero differential on up to `max_dim` basis
/// vectors in degrees −1..=2.
fn random_space(rng: &mut Rng, f: Field, grading: Grading, max_dim: usize, tag: &str) -> DifferentialSpace {
    let mut s = GradedSpace::new(f, grading);
    let n = 1 + rng.pick(max_dim);
    for i in 0..n {
        let d = rng.pick(4) as i64 - 1;
        s.add_basis(Label::tagged(tag, Label::atom(&format!("v{i}"))), d);
    }
    DifferentialSpace::with_zero_d(s)
}

/// The right-module matrix factorization (d0, d1) with d1∘d0 = −w·id,
/// as the right-module species requires.
fn right_matrix_factorization(b: &CdgAlgebra, a_exp: i64, w_exp: i64) -> CdgModule {
    let f = b.field();
    let max_degree = b.space().total_dim() as i64 - 1;
    let mut space = GradedSpace::new(f, Grading::Z2);
    for n in 0..=max_degree {
        space.add_basis(Label::tagged("r0", gallery::monomial(n)), 0);
    }
    for n in 0..=max_degree {
        space.add_basis(Label::tagged("r1", gallery::monomial(n)), 1);
    }
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| {
        let Label::Tagged(tag, inner) = l else { panic!() };
        let e = gallery::monomial_exponent(inner);
        if tag == "r0" {
            // d(r0) = x^{a} r1
            if e + a_exp <= max_degree {
                Combo::single(Label::tagged("r1", gallery::monomial(e + a_exp)), f)
            } else {
                Combo::zero()
            }
        } else {
            // d(r1) = −x^{w−a} r0
            let rest = w_exp - a_exp;
            if e + rest <= max_degree {
                Combo::single(Label::tagged("r0", gallery::monomial(e + rest)), f).signed(-1, f)
            } else {
                Combo::zero()
            }
        }
    });
    let mut m = CdgModule::new(b, Side::Right, space.clone(), d);
    for a in 0..=max_degree {
        for n in 0..=max_degree {
            for tag in ["r0", "r1"] {
                let val = if a + n <= max_degree {
                    Combo::single(Label::tagged(tag, gallery::monomial(a + n)), f)
                } else {
                    Combo::zero()
                };
                m.set_action(&gallery::monomial(a), &Label::tagged(tag, gallery::monomial(n)), val);
            }
        }
    }
    m
}

/// Criterion 1: for ≥ 200 randomized small instances over ℚ and GF(7),
/// every bifunctor output satisfies d² = 0 exactly and every twisted
/// functor output satisfies its species d²-identity exactly.
#[test]
fn criterion_1_sign_consistency_master_suite() {
    let t0 = Instant::now();
    let mut rng = Rng::new(0xC0FFEE);
    let mut instances = 0usize;
    for round in 0..30 {
        let f = fields()[round % 2];
        // --- module bifunctors over Λ (with a random restriction twist) ---
        {
            let b = gallery::exterior_line(f);
            let mut a = Combo::zero();
            a.add_term(Label::atom("eps"), &rng.scalar(f), f);
            let fa = cdga_core::cdg::CdgAlgebraMorphism {
                source: b.clone(),
                target: b.clone(),
                f: GradedMap::identity(b.space()),
                a,
            };
            assert!(fa.check().pass());
            let left = if rng.pick(2) == 0 {
                algebra_as_module(&b, Side::Left)
            } else {
                gallery::eps_twisted_module(f)
            };
            let left = cdga_core::species::restrict_scalars_module(&fa, &left);
            let l2 = algebra_as_module(&b, Side::Left);
            let h = hom_over_algebra(&l2, &left);
            assert!(h.complex.d_squared_is_zero(), "Hom_Λ d² ≠ 0");
            let right = algebra_as_module(&b, Side::Right);
            let t = tensor_over_algebra(&right, &left);
            assert!(t.complex.d_squared_is_zero(), "⊗_Λ d² ≠ 0");
            instances += 2;
        }
        // --- matrix factorizations: curved Hom and tensor ---
        {
            let w_exp = 1 + rng.pick(2) as i64; // w = x or x²
            let maxd = w_exp + 1;
            let b = gallery::matrix_factorization_ring(f, maxd, w_exp);
            let a_exp = rng.pick(w_exp as usize + 1) as i64;
            let m = gallery::matrix_factorization(
                &b,
                &pad_coeff(a_exp),
                &pad_coeff(w_exp - a_exp),
            );
            assert!(check_cdg_module_bounded(&m, usize::MAX).pass());
            let h = hom_over_algebra(&m, &m);
            assert!(h.complex.d_squared_is_zero(), "Hom over curved base d² ≠ 0");
            let n = right_matrix_factorization(&b, rng.pick(w_exp as usize + 1) as i64, w_exp);
            assert!(check_cdg_module_bounded(&n, usize::MAX).pass());
            let t = tensor_over_algebra(&n, &m);
            assert!(t.complex.d_squared_is_zero(), "⊗ over curved base d² ≠ 0");
            instances += 2;
        }
        // --- comodule/contramodule bifunctors over small coalgebras ---
        {
            let c: CdgCoalgebra = match rng.pick(3) {
                0 => dual_of_algebra(&gallery::exterior_line(f)),
                1 => gallery::chevalley_eilenberg(&gallery::LieAlgebraData::nonabelian2(f)),
                _ => gallery::chevalley_eilenberg(&gallery::LieAlgebraData::heisenberg_extension(f)),
            };
            let v = random_space(&mut rng, f, Grading::Z, 2, "v");
            let ncr = coalgebra_as_right_comodule(&c);
            let mcl = if rng.pick(2) == 0 {
                coalgebra_as_left_comodule(&c)
            } else {
                cofree_comodule(&c, &v)
            };
            let ct = cotensor(&ncr, &mcl);
            assert!(ct.complex.d_squared_is_zero(), "⊓ d² ≠ 0");
            let p: CdgContramodule = if rng.pick(2) == 0 {
                free_contramodule(&c, &v)
            } else {
                dualize_comodule(&ncr, &v)
            };
            let ch = cohom(&mcl, &p);
            assert!(ch.complex.d_squared_is_zero(), "Cohom d² ≠ 0");
            let cn = contratensor(&ncr, &p);
            assert!(cn.complex.d_squared_is_zero(), "⊙ d² ≠ 0");
            let hc = hom_comodules(&mcl, &mcl);
            assert!(hc.complex.d_squared_is_zero(), "Hom_C d² ≠ 0");
            let hp = hom_contramodules(&p, &p);
            assert!(hp.complex.d_squared_is_zero(), "Hom^C d² ≠ 0");
            instances += 5;
        }
        // --- twisted functors over bar constructions (curved included) ---
        {
            let curved = rng.pick(2) == 1;
            let b = if curved {
                gallery::matrix_factorization_ring(f, 2, 1 + rng.pick(2) as i64)
            } else {
                gallery::exterior_line(f)
            };
            let v = Retraction::standard(&b);
            let bound = 2;
            let c = bar(&b, &v, bound);
            let tau = natural_tau_bar(&b, &v, &c);
            assert!(tau.check().pass(), "Maurer-Cartan fails");
            let m = if curved {
                gallery::matrix_factorization(&b, &pad_coeff(1), &pad_coeff(b_w_exp(&b) - 1))
            } else if rng.pick(2) == 0 {
                algebra_as_module(&b, Side::Left)
            } else {
                gallery::eps_twisted_module(f)
            };
            let cm = twist_comodule(&tau, &m);
            assert!(
                check_cdg_comodule_bounded(&cm, bound).pass(),
                "C⊗^τM species identity fails"
            );
            let pm = twist_contramodule(&tau, &m);
            assert!(
                check_cdg_contramodule_bounded(&pm, bound).pass(),
                "Hom^τ(C,M) species identity fails"
            );
            let lc = coalgebra_as_left_comodule(&c);
            let bm = twist_module(&tau, &lc);
            assert!(check_cdg_module_bounded(&bm, bound).pass(), "B⊗^τN species identity fails");
            let rc = coalgebra_as_right_comodule(&c);
            let bn = twist_right_module(&tau, &rc);
            assert!(check_cdg_module_bounded(&bn, bound).pass(), "N⊗^τB species identity fails");
            if !curved {
                let mr = algebra_as_module(&b, Side::Right);
                let cmr = twist_right_comodule(&tau, &mr);
                assert!(
                    check_cdg_comodule_bounded(&cmr, bound).pass(),
                    "M⊗^τC species identity fails"
                );
                let fp = free_contramodule(&c, &DifferentialSpace::unit(f, Grading::Z));
                let hq = untwist_contramodule(&tau, &fp);
                assert!(
                    check_cdg_module_bounded(&hq, bound).pass(),
                    "Hom^τ(B,Q) species identity fails"
                );
                instances += 2;
            }
            instances += 4;
        }
    }
    assert!(instances >= 200, "only {instances} randomized instances");
    finish(1, &format!("{instances} randomized instances"), t0, 60);
}

fn pad_coeff(exp: i64) -> Vec<i64> {
    let mut v = vec![0i64; exp as usize];
    v.push(1);
    v
}

fn b_w_exp(b: &CdgAlgebra) -> i64 {
    // the curvature of the matrix-factorization ring is a single monomial
    let (l, _) = b.h.iter().next().expect("curved ring");
    gallery::monomial_exponent(l)
}

/// Criterion 2: bar and cobar of randomized CDG-inputs pass their axiom
/// checks up to tensor degree 6; the natural twisting cochains pass the
/// Maurer-Cartan check with zero residual.
#[test]
fn criterion_2_cdg_axioms_bar_cobar_closure() {
    let t0 = Instant::now();
    let mut rng = Rng::new(0xBA5EBA11);
    let bound = 6usize;
    for round in 0..10 {
        let f = fields()[round % 2];
        // random CDG-algebra inputs: truncated polynomial rings with random
        // curvature in ℤ/2, Clifford-type lines, and the exterior line with
        // a random non-augmentation retraction where available
        let b: CdgAlgebra = match rng.pick(3) {
            0 => gallery::matrix_factorization_ring(f, 2, 1 + rng.pick(2) as i64),
            1 => {
                // Clifford line t² = λ in ℤ/2
                let mut space = GradedSpace::new(f, Grading::Z2);
                space.add_basis(Label::atom("1"), 0);
                space.add_basis(Label::atom("t"), 1);
                let mut alg = GradedAlgebra::new(space.clone(), Label::atom("1"));
                alg.set_product(
                    &Label::atom("t"),
                    &Label::atom("t"),
                    Combo::of(Label::atom("1"), rng.scalar(f)),
                );
                CdgAlgebra::dg(alg, GradedMap::zero(&space, &space, 1))
            }
            _ => gallery::exterior_line(f),
        };
        // random retraction: v(1) = 1 plus a random value on one even
        // non-unit label when one exists
        let mut v = Retraction::standard(&b);
        let even_labels: Vec<Label> = b
            .space()
            .all_basis()
            .filter(|(d, l)| *d == 0 && **l != b.algebra.unit)
            .map(|(_, l)| l.clone())
            .collect();
        if !even_labels.is_empty() {
            let l = even_labels[rng.pick(even_labels.len())].clone();
            v.v.insert(l, rng.scalar(f));
        }
        let c = bar(&b, &v, bound);
        let rep = check_cdg_coalgebra_bounded(&c, bound);
        assert!(rep.pass(), "bar axioms: {:?}", rep.violations.first());
        let tau = natural_tau_bar(&b, &v, &c);
        let rep = tau.check();
        assert!(rep.pass(), "τ_{{B,v}} Maurer-Cartan: {:?}", rep.violations.first());

        // coalgebra side: duals and Chevalley-Eilenberg examples, with the
        // canonical section
        let cc: CdgCoalgebra = match rng.pick(3) {
            0 => dual_of_algebra(&gallery::exterior_line(f)),
            1 => gallery::chevalley_eilenberg(&gallery::LieAlgebraData::nonabelian2(f)),
            _ => gallery::chevalley_eilenberg(&gallery::LieAlgebraData::heisenberg_extension(f)),
        };
        let w_label = cc
            .space()
            .all_basis()
            .find(|(_, l)| !cc.coalgebra.counit_basis(l).is_zero())
            .map(|(_, l)| l.clone())
            .unwrap();
        let w = Section::at_label(&w_label, f);
        let cb = cobar(&cc, &w, bound.min(4));
        let rep = check_cdg_algebra_bounded(&cb, bound.min(4));
        assert!(rep.pass(), "cobar axioms: {:?}", rep.violations.first());
        let tau = natural_tau_cobar(&cc, &w, &cb);
        let rep = tau.check();
        assert!(rep.pass(), "τ_{{C,w}} Maurer-Cartan: {:?}", rep.violations.first());
    }
    finish(2, "bar/cobar closure at tensor degree 6 with natural cochains", t0, 60);
}

/// Criterion 3: BGG/Koszul certification for S = k[x] against Λ = k[ε]/ε²
/// at all internal degrees 1..8, and duality roundtrips for A, k, k[x]/x².
#[test]
fn criterion_3_bgg_koszul_certification() {
    let t0 = Instant::now();
    let pair = bgg_pair(Field::Rationals, 8);
    pair.validate().expect("BGG pair is a valid Koszul pair");
    let cert = acyclicity_certificate(&pair, 8);
    assert!(cert.certified_up_to(8), "witnesses: {:?}", cert.witnesses);
    let modules: Vec<(&str, CdgModule)> = vec![
        ("A", algebra_as_module(&pair.algebra, Side::Left)),
        ("k", gallery::trivial_module_internal(&pair.algebra)),
        ("k[x]/x^2", gallery::truncated_polynomial_module(&pair.algebra, 2)),
    ];
    for (name, m) in modules {
        let r = duality_on_modules(&pair, &m, &cert, 8);
        assert!(r.pass_up_to(8), "{name}: {:?}", r.witnesses);
    }
    finish(3, "acyclicity certified to internal degree 8; counits quasi-iso", t0, 30);
}

/// Criterion 4: the ε-twisted module is acyclic yet has no Λ-linear
/// contracting homotopy; the right-truncated acyclic Λ-complex of length 6
/// is interior-exact with an infeasible Λ-linear homotopy.
#[test]
fn criterion_4_counterexample_regression() {
    let t0 = Instant::now();
    let f = Field::Rationals;
    let m = gallery::eps_twisted_module(f);
    let table = cohomology(&m.complex(), (0, 1), &BTreeSet::new());
    assert_eq!(table.dim(0), 0);
    assert_eq!(table.dim(1), 0);
    let endo = hom_over_algebra(&m, &m);
    let cert = contractibility_certificate(&m.complex(), &endo);
    assert!(!cert.found(), "Λ-linear homotopy must be infeasible");
    assert!(cert.rank_deficit > 0);

    let cx = gallery::acyclic_lambda_complex(f, 6, gallery::Closure::RightTruncate);
    let table = cohomology(&cx.complex(), (1, 5), &BTreeSet::new());
    assert!(table.vanishes_on_interior(), "interior exactness: {:?}", table.dims);
    let endo = hom_over_algebra(&cx, &cx);
    let cert = contractibility_certificate(&cx.complex(), &endo);
    assert!(!cert.found(), "Λ-linear homotopy must be infeasible on the window");
    assert!(cert.rank_deficit > 0);
    finish(4, "acyclic noncontractible counterexamples reproduced", t0, 5);
}

/// Criterion 5: Φ_C(Hom_k(C,V)) ≅ C⊗V and Ψ_C(C⊗V) ≅ Hom_k(C,V) as explicit
/// isomorphisms for C ∈ {dual Λ, C_*(g)} and dim V ≤ 3, plus the Φ ⊣ Ψ
/// adjunction as a degreewise bijection of Hom complexes commuting with d.
#[test]
fn criterion_5_comodule_contramodule_correspondence() {
    let t0 = Instant::now();
    let f = Field::Rationals;
    let coalgebras: Vec<CdgCoalgebra> = vec![
        dual_of_algebra(&gallery::exterior_line(f)),
        gallery::chevalley_eilenberg(&gallery::LieAlgebraData::nonabelian2(f)),
    ];
    for c in &coalgebras {
        for dim_v in 1..=3usize {
            let mut vs = GradedSpace::new(f, Grading::Z);
            for i in 0..dim_v {
                vs.add_basis(Label::tagged("v", Label::atom(&format!("{i}"))), i as i64 % 2);
            }
            let v = DifferentialSpace::with_zero_d(vs);
            // Φ(free) ≅ cofree via c⊗f ↦ Σ c₁ ⊗ (−1)^{|c₂||f|} f(c₂)
            let p = free_contramodule(c, &v);
            let (phi_p, qc) = phi(&p);
            let cv = cofree_comodule(c, &v);
            let can = GradedMap::from_fn(&phi_p.space, &cv.space, 0, |l, _| {
                let rep = qc.quot.rep.apply_label(l);
                let mut out = Combo::zero();
                for (t, w) in rep.iter() {
                    let Label::Pair(cl, fl) = t else { panic!() };
                    let Label::Map(c2, vl) = &**fl else { panic!() };
                    for (a, bpart, u) in c.coalgebra.sweedler(cl) {
                        if bpart == **c2 {
                            let s = sign(
                                c.space().degree_of(&bpart).unwrap()
                                    * (v.space.degree_of(vl).unwrap()
                                        - c.space().degree_of(c2).unwrap()),
                            );
                            let coeff = f.mul(w, &u);
                            let coeff = if s < 0 { f.neg(&coeff) } else { coeff };
                            out.add_term(Label::pair(a, Label::pair((**c2).clone(), (**vl).clone())), &coeff, f);
                        }
                    }
                }
                // rewrite the inner pair leg through the cofree labels
                let mut rewritten = Combo::zero();
                for (t, w) in out.iter() {
                    let Label::Pair(c1, rest) = t else { panic!() };
                    let Label::Pair(_, vl) = &**rest else { panic!() };
                    // f(c₂) lands in V; the cofree label is Pair(c1, v)
                    rewritten.add_term(Label::pair((**c1).clone(), (**vl).clone()), w, f);
                    let _ = c1;
                }
                rewritten
            });
            // bijective per degree and commutes with coaction + d
            for deg in -4..=4 {
                assert_eq!(phi_p.space.dim(deg), cv.space.dim(deg));
                assert_eq!(can.block(deg).rank(), phi_p.space.dim(deg), "Φ iso degree {deg}");
            }
            assert!(
                can.compose(&phi_p.d).sub(&cv.d.compose(&can)).is_zero(),
                "Φ comparison does not commute with d"
            );
            // Ψ(cofree) ≅ free via g ↦ (ε⊗1)∘g
            let (psi_m, sc) = psi(&cv);
            let free = free_contramodule(c, &v);
            let can2 = GradedMap::from_fn(&psi_m.space, &free.space, 0, |l, _| {
                let inc = sc.sub.incl.apply_label(l);
                let mut out = Combo::zero();
                for (t, w) in inc.iter() {
                    let Label::Map(src, tgt) = t else { panic!() };
                    let Label::Pair(cl, vl) = &**tgt else { panic!() };
                    let e = c.coalgebra.counit_basis(cl);
                    if !e.is_zero() {
                        out.add_term(
                            Label::map((**src).clone(), (**vl).clone()),
                            &f.mul(w, &e),
                            f,
                        );
                    }
                }
                out
            });
            for deg in -4..=4 {
                assert_eq!(psi_m.space.dim(deg), free.space.dim(deg));
                assert_eq!(can2.block(deg).rank(), psi_m.space.dim(deg), "Ψ iso degree {deg}");
            }
            assert!(
                can2.compose(&psi_m.d).sub(&free.d.compose(&can2)).is_zero(),
                "Ψ comparison does not commute with d"
            );
            // adjunction Hom_C(Φ(P), M) ≅ Hom^C(P, Ψ(M)) for M = cofree:
            // f ↦ f̃ with f̃(p)(c-slot) = (−1)^{|p||c|} f(class(c⊗p))
            let hom_left = hom_comodules(&phi_p, &cv);
            let hom_right = hom_contramodules(&p, &psi_m);
            let adj = GradedMap::from_fn(&hom_left.complex.space, &hom_right.complex.space, 0, |l, _| {
                // expand the sub label into ambient Map(Φ-label, M-label)
                let amb = hom_left.sub.incl.apply_label(l);
                let mut image_as_maps = Combo::zero();
                for (t, w) in amb.iter() {
                    let Label::Map(phi_l, m_l) = t else { panic!() };
                    // Φ-label is a quotient representative label of C⊗P
                    let rep = qc.quot.rep.apply_label(phi_l);
                    for (r, u) in rep.iter() {
                        let Label::Pair(cl, pl) = r else { panic!() };
                        let dc = c.space().degree_of(cl).unwrap();
                        let dp = p.space.degree_of(pl).unwrap();
                        // f̃ sends pl to the Ψ-element mapping cl ↦ f-part;
                        // the Ψ sub label is found by expressing the map
                        let coeff = f.mul(w, u);
                        let coeff = if sign(dc * dp) < 0 { f.neg(&coeff) } else { coeff };
                        image_as_maps.add_term(
                            Label::map((**pl).clone(), Label::map((**cl).clone(), (**m_l).clone())),
                            &coeff,
                            f,
                        );
                    }
                }
                // re-express target: Hom^C(P, Ψ(M)) sub labels are maps
                // P → Ψ(M)-sub-labels; convert Map(p, Map(c, m)) through the
                // Ψ inclusion
                let mut out = Combo::zero();
                for (t, w) in image_as_maps.iter() {
                    let Label::Map(pl, inner) = t else { panic!() };
                    // find Ψ sub labels whose inclusion contains `inner`
                    for (_, psl) in psi_m.space.all_basis() {
                        if let Some(cf) = sc.sub.incl.apply_label(psl).coeff(inner) {
                            out.add_term(
                                Label::map((**pl).clone(), psl.clone()),
                                &f.mul(w, cf),
                                f,
                            );
                        }
                    }
                }
                hom_right
                    .sub
                    .express(&out)
                    .expect("adjunction image respects the contramodule structure")
            });
            for deg in -4..=4 {
                assert_eq!(
                    hom_left.complex.space.dim(deg),
                    hom_right.complex.space.dim(deg),
                    "adjunction dims at {deg}"
                );
                assert_eq!(
                    adj.block(deg).rank(),
                    hom_left.complex.space.dim(deg),
                    "adjunction bijection at {deg}"
                );
            }
            assert!(
                adj.compose(&hom_left.complex.d).sub(&hom_right.complex.d.compose(&adj)).is_zero(),
                "adjunction does not commute with d"
            );
        }
    }
    finish(5, "Φ/Ψ cofree-free isomorphisms and adjunction bijections", t0, 10);
}

/// Criterion 6: tor_via_twist over C_*(g) matches the independent bar
/// resolution oracle over windowed U(g): dims (1,2,1) abelian, (1,1,0)
/// nonabelian.
#[test]
fn criterion_6_lie_algebra_oracle_match() {
    let t0 = Instant::now();
    let f = Field::Rationals;
    let cert = acyclicity_certificate(&gr_lie_pair(f, 2, 4), 4);
    assert!(cert.certified_up_to(4));
    for (g, expected) in [
        (gallery::LieAlgebraData::abelian(f, 2), vec![1usize, 2, 1]),
        (gallery::LieAlgebraData::nonabelian2(f), vec![1usize, 1, 0]),
    ] {
        let a = gallery::u_g_window(&g, 3);
        let vbar = vec![gallery::pbw_label(&[1, 0]), gallery::pbw_label(&[0, 1])];
        let kd = KoszulGeneratingData { algebra: a.clone(), vbar };
        let nd = nonhomogeneous_dual(&kd, 3).expect("U(g) is Koszul-filtered");
        let tau = natural_tau_koszul(&kd, &nd);
        assert!(tau.check().pass());
        let m = trivial_module(&a, &aug_of(&a), &DifferentialSpace::unit(f, Grading::Z), Side::Left);
        let table = cohomology_of_twist(&tau, &m, (-3, 1));
        let dims: Vec<usize> = (0..3).map(|i| table.dim(-i)).collect();
        assert_eq!(dims, expected, "twisted complex dims");
        // independent oracle: the reduced bar complex of the windowed U(g)
        let oracle = bar_homology_oracle(&a, 3, 3);
        assert_eq!(oracle, expected, "bar resolution oracle dims");
        let _ = cert.certified_up_to(4);
    }
    finish(6, "Chevalley-Eilenberg twists match the bar oracle", t0, 10);
}

/// The independent oracle: homology of the reduced bar complex
/// ⊕_{n ≤ nmax} U₊^{⊗n} restricted to words of total PBW weight ≤ wmax
/// (where products are exact), with the plain bar differential. Returns
/// dims of Tor_0, Tor_1, Tor_2.
fn bar_homology_oracle(a: &CdgAlgebra, nmax: usize, wmax: usize) -> Vec<usize> {
    let f = a.field();
    let weight = |l: &Label| -> usize {
        gallery::pbw_exponents(l, 2).iter().sum()
    };
    // letters: non-unit PBW monomials
    let letters: Vec<Label> = a
        .space()
        .all_basis()
        .filter(|(_, l)| **l != a.algebra.unit)
        .map(|(_, l)| l.clone())
        .collect();
    // words of total weight ≤ wmax, length ≤ nmax
    let mut space = GradedSpace::new(f, Grading::Z);
    let mut layer: Vec<Vec<Label>> = vec![Vec::new()];
    space.add_basis(Label::Word(Vec::new()), 0);
    for n in 1..=nmax {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let mut w2 = w.clone();
                w2.push(l.clone());
                if w2.iter().map(&weight).sum::<usize>() <= wmax {
                    next.push(w2);
                }
            }
        }
        for w in &next {
            space.add_basis(Label::Word(w.clone()), -(n as i64));
        }
        layer = next;
    }
    // bar differential: collapse adjacent letters through the (exact)
    // product, dropping unit components (reduced bar), with alternating
    // signs; homological degree −n means d: degree −n → −n+1
    let d = GradedMap::from_fn(&space, &space, 1, |l, _| {
        let Label::Word(w) = l else { panic!() };
        let mut out = Combo::zero();
        for j in 0..w.len().saturating_sub(1) {
            let prod = a.algebra.mul_basis(&w[j], &w[j + 1]);
            for (t, c) in prod.iter() {
                if *t == a.algebra.unit {
                    continue;
                }
                let mut nw = w[..j].to_vec();
                nw.push(t.clone());
                nw.extend(w[j + 2..].iter().cloned());
                let s = if j % 2 == 0 { c.clone() } else { f.neg(c) };
                out.add_term(Label::Word(nw), &s, f);
            }
        }
        out
    });
    let cx = DifferentialSpace { space, d };
    assert!(cx.d_squared_is_zero(), "bar oracle must be a complex");
    let t = cohomology(&cx, (-2, 0), &BTreeSet::new());
    vec![t.dim(0), t.dim(-1), t.dim(-2)]
}

/// Criterion 7: matrix factorizations — the factorization identities on a
/// degree-≤6 window, d² = 0 for Hom despite h ≠ 0, and Ext² of (x,x) with
/// itself 1-dimensional in the even ℤ/2 degree on the window interior.
#[test]
fn criterion_7_matrix_factorizations() {
    let t0 = Instant::now();
    let f = Field::Rationals;
    // identities d1∘d0 = w·id on the window (the species checker enforces
    // d² = h·id exactly)
    let b2 = gallery::matrix_factorization_ring(f, 6, 2);
    let mxx = gallery::matrix_factorization(&b2, &[0, 1], &[0, 1]);
    assert!(check_cdg_module_bounded(&mxx, usize::MAX).pass(), "(x,x) | w = x²");
    let b3 = gallery::matrix_factorization_ring(f, 6, 3);
    let mxx2 = gallery::matrix_factorization(&b3, &[0, 1], &[0, 0, 1]);
    assert!(check_cdg_module_bounded(&mxx2, usize::MAX).pass(), "(x,x²) | w = x³");
    // injected defect fails with a witness
    let bad = gallery::matrix_factorization(&b2, &[0, 1], &[1, 1]);
    let rep = check_cdg_module_bounded(&bad, usize::MAX);
    assert!(!rep.pass());
    // Hom between factorizations is a complex despite h ≠ 0
    let h = hom_over_algebra(&mxx, &mxx2_restricted(&b2));
    assert!(h.complex.d_squared_is_zero());
    // Ext²_{B,II}((x,x),(x,x)): even part 1-dimensional on the interior
    // (representatives supported below the polynomial window top)
    let endo = hom_over_algebra(&mxx, &mxx);
    assert!(endo.complex.d_squared_is_zero());
    let table = cdga_core::derived::ext_second_kind(
        &mxx,
        &mxx,
        DerivedWindow { tensor: 2, coh: (0, 1) },
    );
    // classify representatives by the top monomial exponent
    let reps_interior = |deg: i64| -> usize {
        table
            .representatives
            .get(&deg)
            .map(|reps| {
                reps.iter()
                    .filter(|r| {
                        r.iter().all(|(l, _)| max_monomial_exponent(l) < 6)
                    })
                    .count()
            })
            .unwrap_or(0)
    };
    assert_eq!(reps_interior(0), 1, "even Ext² interior: {:?}", table.dims);
    finish(7, "factorization identities, curved Hom, Ext² window", t0, 10);
}

fn mxx2_restricted(b2: &CdgAlgebra) -> CdgModule {
    // a second factorization of w = x² over the same ring: (x², 1)
    gallery::matrix_factorization(b2, &[0, 0, 1], &[1])
}

fn max_monomial_exponent(l: &Label) -> i64 {
    match l {
        Label::Atom(s) if s == "1" || s == "x" || s.starts_with('x') => {
            gallery::monomial_exponent(l)
        }
        Label::Pair(a, b) | Label::Map(a, b) => {
            max_monomial_exponent(a).max(max_monomial_exponent(b))
        }
        Label::Tagged(_, a) | Label::Dual(a) => max_monomial_exponent(a),
        Label::Word(w) | Label::Wedge(w) => {
            w.iter().map(max_monomial_exponent).max().unwrap_or(0)
        }
        _ => 0,
    }
}

/// Criterion 8: first vs second kind separation on the ε-twisted module:
/// the twisted complex computing Tor^Λ(k,M) vanishes (M is acyclic and the
/// first-kind theory is quasi-isomorphism invariant), while Tor^{Λ,II} is
/// nonvanishing.
#[test]
fn criterion_8_first_vs_second_kind() {
    let t0 = Instant::now();
    let f = Field::Rationals;
    let b = gallery::exterior_line(f);
    let m = gallery::eps_twisted_module(f);
    // the module is acyclic, so quasi-isomorphism invariance forces the
    // first-kind pairing to vanish; the §6.5 twisted complex confirms it
    let table = cohomology(&m.complex(), (0, 1), &BTreeSet::new());
    assert!(table.vanishes_on_interior());
    let v = Retraction::standard(&b);
    let c = bar(&b, &v, 4);
    let tau = natural_tau_bar(&b, &v, &c);
    let first = cohomology_of_twist(&tau, &m, (-2, 2));
    assert!(first.vanishes_on_interior(), "first kind must vanish: {:?}", first.dims);
    // second kind: nonvanishing
    let k = trivial_module(&b, &aug_of(&b), &DifferentialSpace::unit(f, Grading::Z), Side::Right);
    let second = tor_second_kind(&k, &m, DerivedWindow { tensor: 4, coh: (-2, 2) });
    assert!(second.dim(0) > 0, "second kind must not vanish: {:?}", second.dims);
    // cross-check through the reduced bar grid as well (both grids computed)
    let k_left = trivial_module(&b, &aug_of(&b), &DifferentialSpace::unit(f, Grading::Z), Side::Left);
    let grid_tor = tor_second_kind(&k, &k_left, DerivedWindow { tensor: 4, coh: (-4, 1) });
    assert_eq!(grid_tor.dim(0), 5, "Tor^{{Λ,II}}(k,k) window dims: {:?}", grid_tor.dims);
    finish(8, "first-kind vanishing vs second-kind nonvanishing", t0, 10);
}

/// Criterion 9: the bar-cobar unit is a filtered quasi-isomorphism for a
/// 2-dimensional conilpotent C, and the adjoined-unit construction fails
/// the cobar quasi-isomorphism comparison at window scale.
#[test]
fn criterion_9_filtered_quis_and_failure() {
    let t0 = Instant::now();
    let f = Field::Rationals;
    let c = dual_of_algebra(&gallery::exterior_line(f));
    let w = Section::at_label(&Label::Dual(Box::new(Label::atom("1"))), f);
    let (unit, src, tgt) = bar_cobar_unit(&c, &w, 3);
    assert!(unit.check().pass());
    let fq = filtered_quis_check_with(&unit, &src, &tgt).expect("conilpotent");
    assert!(fq.verdict, "witnesses: {:?}", fq.witnesses);

    // Remark-style failure: B = k ⊕ (unit-forgotten k): bar constructions
    // are quasi-isomorphic to Br(k), but cobar separates them
    let b = gallery::adjoined_unit_algebra(f);
    let v = Retraction::standard(&b);
    let bar_b = bar(&b, &v, 4);
    let bar_cx =
        DifferentialSpace { space: bar_b.space().clone(), d: bar_b.d.clone() };
    let tb = cohomology(&bar_cx, (-3, 0), &BTreeSet::new());
    for (d, dim) in &tb.dims {
        assert_eq!(*dim, usize::from(*d == 0), "H^{d}(Br(k⊕A)) vs Br(k)");
    }
    let wk = Section::at_label(&Label::Word(Vec::new()), f);
    let cb_b = cobar(&bar_b, &wk, 4);
    let cx = DifferentialSpace { space: cb_b.space().clone(), d: cb_b.d.clone() };
    let outer_len = |l: &Label| {
        let Label::Word(w) = l else { panic!() };
        w.len() <= 3
    };
    let h0 = h0_with_complete_sources(&cx, outer_len);
    assert_eq!(h0, 2, "Cb(Br(k⊕A)) separates from Cb(Br(k))");
    let kb = gallery::ground_field(f, Grading::Z);
    let cb_k = cobar(&bar(&kb, &Retraction::standard(&kb), 3), &wk, 3);
    assert_eq!(cb_k.space().total_dim(), 1);
    finish(9, "unit filtered quasi-iso; adjoined-unit comparison fails", t0, 20);
}

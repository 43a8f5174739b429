//! Batch interface: parse structure-constant files, dispatch the engine,
//! and emit deterministic human- or machine-readable reports.
//!
//! Exit codes: 0 pass, 1 mathematical failure (with a witness in the
//! report), 2 usage error.

mod parse;
mod report;

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use cdga_core::cdg::{
    check_cdg_algebra, check_cdg_algebra_bounded, check_cdg_coalgebra,
    check_cdg_coalgebra_bounded, dual_of_algebra, AxiomReport, CdgAlgebra, CdgCoalgebra,
};
use cdga_core::derived::{
    cohomology, coext_first_kind, contractibility_certificate, cotor_first_kind,
    ctrtor_first_kind, ext_first_kind, ext_first_kind_contra, ext_second_kind, plain_endo_complex,
    tor_second_kind, DerivedWindow,
};
use cdga_core::field::Field;
use cdga_core::gallery;
use cdga_core::grading::{DifferentialSpace, Grading, Label};
use cdga_core::koszul::{
    acyclicity_certificate, bar_cobar_unit, bgg_pair, duality_on_modules, ext_via_twist,
    filtered_quis_check, filtered_quis_check_with, gr_lie_pair, natural_tau_koszul,
    nonhomogeneous_dual, tor_via_twist, KoszulGeneratingData, KoszulPair,
};
use cdga_core::species::{
    check_cdg_comodule, check_cdg_comodule_bounded, check_cdg_contramodule,
    check_cdg_contramodule_bounded, check_cdg_module, check_cdg_module_bounded, hom_comodules,
    hom_contramodules, hom_over_algebra, Side,
};
use cdga_core::twist::{bar, cobar, natural_tau_bar, Retraction, Section};

use parse::InputDocument;
use report::{Format, Report};

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("usage error: {msg}");
            eprintln!("run `cdga help` for the command list");
            2
        }
    }
}

struct Opts {
    positional: Vec<String>,
    format: Format,
    input: Option<String>,
    max_tensor: usize,
    max_internal: i64,
    coh: (i64, i64),
    field: Field,
    section: Option<String>,
    pair: Option<String>,
    gens: Vec<String>,
    hom: bool,
    ext: bool,
    params: Vec<i64>,
}

fn parse_opts(args: &[String]) -> Result<Opts, String> {
    let mut o = Opts {
        positional: Vec::new(),
        format: Format::Human,
        input: None,
        max_tensor: 4,
        max_internal: 6,
        coh: (-6, 6),
        field: Field::Rationals,
        section: None,
        pair: None,
        gens: Vec::new(),
        hom: false,
        ext: false,
        params: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--format" => {
                o.format = match it.next().map(String::as_str) {
                    Some("human") => Format::Human,
                    Some("flat") => Format::Flat,
                    other => return Err(format!("unknown format {other:?}")),
                }
            }
            "--input" => o.input = it.next().cloned(),
            "--max-tensor" => {
                o.max_tensor = it
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or("--max-tensor needs a number")?
            }
            "--max-internal" => {
                o.max_internal = it
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or("--max-internal needs a number")?
            }
            "--coh-window" => {
                let v = it.next().ok_or("--coh-window needs lo..hi")?;
                let (lo, hi) = v.split_once("..").ok_or("--coh-window needs lo..hi")?;
                o.coh = (
                    lo.parse().map_err(|_| "bad window bound")?,
                    hi.parse().map_err(|_| "bad window bound")?,
                );
            }
            "--field" => {
                let v = it.next().ok_or("--field needs Q or Fp:<p>")?;
                o.field = if v == "Q" {
                    Field::Rationals
                } else if let Some(p) = v.strip_prefix("Fp:") {
                    Field::prime(p.parse().map_err(|_| "bad prime")?)
                        .map_err(|e| format!("{e}"))?
                } else {
                    return Err(format!("unknown field {v:?}"));
                };
            }
            "--section" => o.section = it.next().cloned(),
            "--pair" => o.pair = it.next().cloned(),
            "--gens" => {
                o.gens = it
                    .next()
                    .ok_or("--gens needs a comma-separated list")?
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .collect()
            }
            "--hom" => o.hom = true,
            "--ext" => o.ext = true,
            "--param" => {
                o.params.push(
                    it.next().and_then(|v| v.parse().ok()).ok_or("--param needs a number")?,
                )
            }
            other if other.starts_with("--") => return Err(format!("unknown flag {other}")),
            other => o.positional.push(other.to_string()),
        }
    }
    Ok(o)
}

fn load_doc(o: &Opts) -> Result<InputDocument, String> {
    match &o.input {
        None => Ok(InputDocument::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            parse::parse(&text).map_err(|e| format!("{path}: {e}"))
        }
    }
}

fn finish(rep: Report) -> i32 {
    print!("{}", rep.render());
    if rep.failed {
        1
    } else {
        0
    }
}

fn report_axioms(rep: &mut Report, prefix: &str, ax: &AxiomReport) {
    rep.verdict(format!("{prefix}.axioms"), ax.pass());
    for (i, v) in ax.violations.iter().take(5).enumerate() {
        rep.kv(format!("{prefix}.witness[{i}]"), v.clone());
    }
}

/// Named gallery constructors reachable from the CLI.
fn gallery_algebra(name: &str, o: &Opts) -> Option<CdgAlgebra> {
    let f = o.field;
    let p0 = o.params.first().copied();
    match name {
        "lambda" => Some(gallery::exterior_line(f)),
        "lambda-ungraded" => Some(gallery::exterior_line_ungraded(f)),
        "ground-field" => Some(gallery::ground_field(f, Grading::Z)),
        "polynomial" => Some(gallery::polynomial_window(f, p0.unwrap_or(o.max_internal))),
        "mf-ring" => Some(gallery::matrix_factorization_ring(
            f,
            p0.unwrap_or(6),
            o.params.get(1).copied().unwrap_or(2),
        )),
        "ug-abelian2" => {
            Some(gallery::u_g_window(&gallery::LieAlgebraData::abelian(f, 2), p0.unwrap_or(3) as usize))
        }
        "ug-nonabelian2" => Some(gallery::u_g_window(
            &gallery::LieAlgebraData::nonabelian2(f),
            p0.unwrap_or(3) as usize,
        )),
        "ug-heisenberg" => Some(gallery::u_g_window(
            &gallery::LieAlgebraData::heisenberg_extension(f),
            p0.unwrap_or(3) as usize,
        )),
        "adjoined-unit" => Some(gallery::adjoined_unit_algebra(f)),
        _ => None,
    }
}

fn gallery_coalgebra(name: &str, o: &Opts) -> Option<CdgCoalgebra> {
    let f = o.field;
    match name {
        "dual-lambda" => Some(dual_of_algebra(&gallery::exterior_line(f))),
        "power-series" => Some(gallery::power_series_coalgebra(f, 1, o.max_internal)),
        "ce-abelian2" => Some(gallery::chevalley_eilenberg(&gallery::LieAlgebraData::abelian(f, 2))),
        "ce-nonabelian2" => {
            Some(gallery::chevalley_eilenberg(&gallery::LieAlgebraData::nonabelian2(f)))
        }
        "ce-heisenberg" => Some(gallery::chevalley_eilenberg(
            &gallery::LieAlgebraData::heisenberg_extension(f),
        )),
        _ => None,
    }
}

fn gallery_module(name: &str, o: &Opts) -> Option<cdga_core::species::CdgModule> {
    let f = o.field;
    match name {
        "eps-module" => Some(gallery::eps_twisted_module(f)),
        "lambda-complex-right" => Some(gallery::acyclic_lambda_complex(
            f,
            o.params.first().copied().unwrap_or(6),
            gallery::Closure::RightTruncate,
        )),
        "lambda-complex-left" => Some(gallery::acyclic_lambda_complex(
            f,
            o.params.first().copied().unwrap_or(6),
            gallery::Closure::LeftTruncate,
        )),
        "mf-xx" => {
            let b = gallery::matrix_factorization_ring(f, o.params.first().copied().unwrap_or(6), 2);
            Some(gallery::matrix_factorization(&b, &[0, 1], &[0, 1]))
        }
        "mf-x-x2" => {
            let b = gallery::matrix_factorization_ring(f, o.params.first().copied().unwrap_or(6), 3);
            Some(gallery::matrix_factorization(&b, &[0, 1], &[0, 0, 1]))
        }
        "trivial-k-lambda" | "trivial-k-lambda-right" => {
            let b = gallery::exterior_line(f);
            let mut aug = BTreeMap::new();
            aug.insert(Label::atom("1"), f.one());
            let side = if name.ends_with("right") { Side::Right } else { Side::Left };
            Some(cdga_core::species::trivial_module(
                &b,
                &aug,
                &DifferentialSpace::unit(f, Grading::Z),
                side,
            ))
        }
        _ => None,
    }
}

fn resolve_pair(name: &str, o: &Opts) -> Result<KoszulPair, String> {
    match name {
        "bgg" => Ok(bgg_pair(o.field, o.max_internal)),
        "gr-lie2" => Ok(gr_lie_pair(o.field, 2, o.max_internal.max(2) as usize)),
        other => Err(format!("unknown pair {other:?} (available: bgg, gr-lie2)")),
    }
}

fn workers() -> usize {
    std::env::var("CDGA_WORKERS").ok().and_then(|v| v.parse().ok()).unwrap_or(1).max(1)
}

/// Ordered parallel map over independent pure computations: the fan-out
/// width follows CDGA_WORKERS, the assembly order does not.
fn parallel_map<T: Send + Sync, R: Send>(items: Vec<T>, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let n = workers().min(items.len().max(1));
    if n <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<R>> = Vec::new();
    out.resize_with(items.len(), || None);
    let chunk = items.len().div_ceil(n);
    std::thread::scope(|scope| {
        for (slot, work) in out.chunks_mut(chunk).zip(items.chunks(chunk)) {
            let f = &f;
            scope.spawn(move || {
                for (s, t) in slot.iter_mut().zip(work) {
                    *s = Some(f(t));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("worker finished")).collect()
}

fn dispatch(args: &[String]) -> Result<i32, String> {
    let Some(command) = args.first().cloned() else {
        return Err("missing command".into());
    };
    let o = parse_opts(&args[1..])?;
    let doc = load_doc(&o)?;
    let mut rep = Report::new(
        {
            let mut c = command.clone();
            for p in &o.positional {
                c.push(' ');
                c.push_str(p);
            }
            c
        },
        o.format,
    );
    match command.as_str() {
        "help" => {
            println!(
                "commands: check bar cobar twist-check twist cohomology homotopy cotor coext \
                 ctrtor tor2 ext2 tor-via-twist quadratic-dual koszul-certify duality-verify \
                 phi psi filtered-quis gallery help"
            );
            println!(
                "flags: --input FILE --format human|flat --field Q|Fp:<p> --max-tensor N \
                 --max-internal N --coh-window lo..hi --section LABEL --pair NAME --gens a,b \
                 --param N --hom --ext"
            );
            return Ok(0);
        }
        "check" => {
            if o.positional.is_empty() {
                return Err("check needs object names".into());
            }
            let budget = o.max_tensor;
            let checks: Vec<(String, AxiomReport)> = parallel_map(
                o.positional.clone(),
                |name| -> (String, AxiomReport) {
                    let ax = if let Some(b) = doc.algebras.get(name) {
                        check_cdg_algebra(b)
                    } else if let Some(c) = doc.coalgebras.get(name) {
                        check_cdg_coalgebra(c)
                    } else if let Some(m) = doc.modules.get(name) {
                        check_cdg_module(m)
                    } else if let Some(m) = doc.comodules.get(name) {
                        check_cdg_comodule(m)
                    } else if let Some(p) = doc.contramodules.get(name) {
                        check_cdg_contramodule(p)
                    } else if let Some(m) = doc.algebra_morphisms.get(name) {
                        m.check()
                    } else if let Some(m) = doc.coalgebra_morphisms.get(name) {
                        m.check()
                    } else if let Some(t) = doc.cochains.get(name) {
                        t.check()
                    } else if let Some(b) = gallery_algebra(name, &o) {
                        check_cdg_algebra_bounded(&b, budget)
                    } else if let Some(c) = gallery_coalgebra(name, &o) {
                        check_cdg_coalgebra_bounded(&c, budget)
                    } else if let Some(m) = gallery_module(name, &o) {
                        check_cdg_module_bounded(&m, budget)
                    } else {
                        let mut r = AxiomReport::default();
                        r.demand(false, || format!("unknown object {name:?}"));
                        r
                    };
                    (name.clone(), ax)
                },
            );
            for (name, ax) in checks {
                report_axioms(&mut rep, &name, &ax);
            }
        }
        "bar" => {
            let name = o.positional.first().ok_or("bar needs an algebra name")?;
            let b = doc
                .algebras
                .get(name)
                .cloned()
                .or_else(|| gallery_algebra(name, &o))
                .ok_or_else(|| format!("unknown algebra {name:?}"))?;
            let v = Retraction::standard(&b);
            let c = bar(&b, &v, o.max_tensor);
            rep.window("max-tensor", o.max_tensor);
            for d in c.space().degrees().collect::<Vec<_>>() {
                rep.kv(format!("dim[{d}]"), format!("{}", c.space().dim(d)));
            }
            rep.kv("curvature", if c.is_dg() { "zero (DG-coalgebra)" } else { "nonzero" });
            report_axioms(&mut rep, "bar", &check_cdg_coalgebra_bounded(&c, o.max_tensor));
            let tau = natural_tau_bar(&b, &v, &c);
            report_axioms(&mut rep, "tau", &tau.check());
        }
        "cobar" => {
            let name = o.positional.first().ok_or("cobar needs a coalgebra name")?;
            let c = doc
                .coalgebras
                .get(name)
                .cloned()
                .or_else(|| gallery_coalgebra(name, &o))
                .ok_or_else(|| format!("unknown coalgebra {name:?}"))?;
            let w = section_of(&c, &o)?;
            let b = cobar(&c, &w, o.max_tensor);
            rep.window("max-tensor", o.max_tensor);
            for d in b.space().degrees().collect::<Vec<_>>() {
                rep.kv(format!("dim[{d}]"), format!("{}", b.space().dim(d)));
            }
            rep.kv("curvature", if b.is_dg() { "zero (DG-algebra)" } else { "nonzero" });
            report_axioms(&mut rep, "cobar", &check_cdg_algebra_bounded(&b, o.max_tensor));
            let tau = cdga_core::twist::natural_tau_cobar(&c, &w, &b);
            report_axioms(&mut rep, "tau", &tau.check());
        }
        "twist-check" => {
            let name = o.positional.first().ok_or("twist-check needs a cochain name")?;
            let t = doc.cochains.get(name).ok_or_else(|| format!("unknown cochain {name:?}"))?;
            let ax = t.check();
            report_axioms(&mut rep, name, &ax);
        }
        "twist" => {
            let tname = o.positional.first().ok_or("twist needs a cochain name")?;
            let oname = o.positional.get(1).ok_or("twist needs an object name")?;
            let t =
                doc.cochains.get(tname).ok_or_else(|| format!("unknown cochain {tname:?}"))?;
            let budget = o.max_tensor;
            if let Some(m) = doc.modules.get(oname).cloned().or_else(|| gallery_module(oname, &o))
            {
                match (m.side, o.hom) {
                    (Side::Left, false) => {
                        let out = cdga_core::twist::twist_comodule(t, &m);
                        dims_of(&mut rep, "C(x)M", &out.space);
                        report_axioms(&mut rep, "comodule", &check_cdg_comodule_bounded(&out, budget));
                    }
                    (Side::Left, true) => {
                        let out = cdga_core::twist::twist_contramodule(t, &m);
                        dims_of(&mut rep, "Hom(C,M)", &out.space);
                        report_axioms(
                            &mut rep,
                            "contramodule",
                            &check_cdg_contramodule_bounded(&out, budget),
                        );
                    }
                    (Side::Right, _) => {
                        let out = cdga_core::twist::twist_right_comodule(t, &m);
                        dims_of(&mut rep, "M(x)C", &out.space);
                        report_axioms(&mut rep, "comodule", &check_cdg_comodule_bounded(&out, budget));
                    }
                }
            } else if let Some(n) = doc.comodules.get(oname) {
                match n.side {
                    Side::Left => {
                        let out = cdga_core::twist::twist_module(t, n);
                        dims_of(&mut rep, "B(x)N", &out.space);
                        report_axioms(&mut rep, "module", &check_cdg_module_bounded(&out, budget));
                    }
                    Side::Right => {
                        let out = cdga_core::twist::twist_right_module(t, n);
                        dims_of(&mut rep, "N(x)B", &out.space);
                        report_axioms(&mut rep, "module", &check_cdg_module_bounded(&out, budget));
                    }
                }
            } else if let Some(q) = doc.contramodules.get(oname) {
                let out = cdga_core::twist::untwist_contramodule(t, q);
                dims_of(&mut rep, "Hom(B,Q)", &out.space);
                report_axioms(&mut rep, "module", &check_cdg_module_bounded(&out, budget));
            } else {
                return Err(format!("unknown object {oname:?}"));
            }
        }
        "cohomology" => {
            let name = o.positional.first().ok_or("cohomology needs an object name")?;
            let cx = complex_of(&doc, name, &o)?;
            if !cx.d_squared_is_zero() {
                rep.verdict("d-squared", false);
                rep.kv("witness", "d² ≠ 0: cohomology undefined".to_string());
            } else {
                let t = cohomology(&cx, o.coh, &BTreeSet::new());
                rep.table("H", &t);
            }
        }
        "homotopy" => {
            let name = o.positional.first().ok_or("homotopy needs an object name")?;
            let (cx, endo) = if let Some(m) =
                doc.modules.get(name).cloned().or_else(|| gallery_module(name, &o))
            {
                (m.complex(), hom_over_algebra(&m, &m))
            } else if let Some(n) = doc.comodules.get(name) {
                (n.complex(), hom_comodules(n, n))
            } else if let Some(p) = doc.contramodules.get(name) {
                (p.complex(), hom_contramodules(p, p))
            } else {
                let cx = complex_of(&doc, name, &o)?;
                let endo = plain_endo_complex(&cx);
                (cx, endo)
            };
            let cert = contractibility_certificate(&cx, &endo);
            match cert.homotopy {
                Some(_) => rep.kv("homotopy", "found and verified (d h + h d = id)"),
                None => {
                    rep.kv("homotopy", "infeasible");
                    rep.kv("rank-deficit", format!("{}", cert.rank_deficit));
                }
            }
        }
        "cotor" | "coext" | "ctrtor" => {
            let a = o.positional.first().ok_or("needs two object names")?;
            let b = o.positional.get(1).ok_or("needs two object names")?;
            let window = DerivedWindow { tensor: o.max_tensor, coh: o.coh };
            rep.window("max-tensor", o.max_tensor);
            rep.window("coh", format!("{}..{}", o.coh.0, o.coh.1));
            let table = match (command.as_str(), o.hom) {
                ("cotor", false) => {
                    let n = doc.comodules.get(a).ok_or_else(|| format!("unknown comodule {a:?}"))?;
                    let m = doc.comodules.get(b).ok_or_else(|| format!("unknown comodule {b:?}"))?;
                    cotor_first_kind(n, m, window)
                }
                ("cotor", true) => {
                    let l = doc.comodules.get(a).ok_or_else(|| format!("unknown comodule {a:?}"))?;
                    let m = doc.comodules.get(b).ok_or_else(|| format!("unknown comodule {b:?}"))?;
                    ext_first_kind(l, m, window)
                }
                ("coext", _) => {
                    let m = doc.comodules.get(a).ok_or_else(|| format!("unknown comodule {a:?}"))?;
                    let p = doc
                        .contramodules
                        .get(b)
                        .ok_or_else(|| format!("unknown contramodule {b:?}"))?;
                    coext_first_kind(m, p, window)
                }
                ("ctrtor", false) => {
                    let n = doc.comodules.get(a).ok_or_else(|| format!("unknown comodule {a:?}"))?;
                    let p = doc
                        .contramodules
                        .get(b)
                        .ok_or_else(|| format!("unknown contramodule {b:?}"))?;
                    ctrtor_first_kind(n, p, window)
                }
                ("ctrtor", true) => {
                    let p = doc
                        .contramodules
                        .get(a)
                        .ok_or_else(|| format!("unknown contramodule {a:?}"))?;
                    let q = doc
                        .contramodules
                        .get(b)
                        .ok_or_else(|| format!("unknown contramodule {b:?}"))?;
                    ext_first_kind_contra(p, q, window)
                }
                _ => unreachable!(),
            };
            match table {
                Ok(t) => rep.table("H", &t),
                Err(e) => {
                    rep.verdict("first-kind", false);
                    rep.kv("witness", format!("{e}"));
                }
            }
        }
        "tor2" | "ext2" => {
            let a = o.positional.first().ok_or("needs two module names")?;
            let b = o.positional.get(1).ok_or("needs two module names")?;
            let ma = doc
                .modules
                .get(a)
                .cloned()
                .or_else(|| gallery_module(a, &o))
                .ok_or_else(|| format!("unknown module {a:?}"))?;
            let mb = doc
                .modules
                .get(b)
                .cloned()
                .or_else(|| gallery_module(b, &o))
                .ok_or_else(|| format!("unknown module {b:?}"))?;
            let window = DerivedWindow { tensor: o.max_tensor, coh: o.coh };
            rep.window("max-tensor", o.max_tensor);
            if command == "tor2" && ma.side != Side::Right {
                return Err(format!("{a:?} must be a right module for tor2"));
            }
            if mb.side != Side::Left || (command == "ext2" && ma.side != Side::Left) {
                return Err("second-kind functors need left modules here".into());
            }
            let t = if command == "tor2" {
                tor_second_kind(&ma, &mb, window)
            } else {
                ext_second_kind(&ma, &mb, window)
            };
            rep.table("H", &t);
        }
        "tor-via-twist" => {
            let pair_name = o.pair.clone().ok_or("tor-via-twist needs --pair")?;
            let mname = o.positional.first().ok_or("tor-via-twist needs a module name")?;
            let (pair, tau, cert) = build_certified(&pair_name, &o)?;
            rep.kv("pair", pair_name.clone());
            rep.verdict("certified", cert.certified_up_to(o.max_internal));
            let m = doc
                .modules
                .get(mname)
                .cloned()
                .or_else(|| gallery_module(mname, &o))
                .or_else(|| trivial_over(&tau.target, &o))
                .filter(|m| m.over.algebra == tau.target.algebra)
                .ok_or_else(|| format!("unknown module {mname:?} over the pair's algebra"))?;
            let t = if o.ext {
                ext_via_twist(&tau, &m, &cert, o.max_internal, o.coh)
            } else {
                tor_via_twist(&tau, &m, &cert, o.max_internal, o.coh)
            };
            rep.table("H", &t);
            let _ = pair;
        }
        "quadratic-dual" => {
            let name = o.positional.first().ok_or("quadratic-dual needs an algebra name")?;
            let a = doc
                .algebras
                .get(name)
                .cloned()
                .or_else(|| gallery_algebra(name, &o))
                .ok_or_else(|| format!("unknown algebra {name:?}"))?;
            if o.gens.is_empty() {
                return Err("quadratic-dual needs --gens".into());
            }
            let vbar: Vec<Label> = o.gens.iter().map(|g| Label::atom(g)).collect();
            for l in &vbar {
                if a.space().find(l).is_none() {
                    return Err(format!("generator {l} is not a basis label"));
                }
            }
            let kd = KoszulGeneratingData { algebra: a.clone(), vbar };
            match nonhomogeneous_dual(&kd, o.max_tensor) {
                Ok(nd) => {
                    for n in 0..=o.max_tensor as i64 {
                        let dim = nd
                            .coalgebra
                            .space()
                            .all_basis()
                            .filter(|(_, l)| nd.coalgebra.space().internal_degree(l) == Some(n))
                            .count();
                        rep.kv(format!("dim C[{n}]"), format!("{dim}"));
                    }
                    rep.kv(
                        "curvature",
                        if nd.coalgebra.is_dg() { "zero" } else { "nonzero" },
                    );
                    let tau = natural_tau_koszul(&kd, &nd);
                    report_axioms(&mut rep, "tau", &tau.check());
                }
                Err(e) => {
                    rep.verdict("koszul", false);
                    rep.kv("witness", e);
                }
            }
        }
        "koszul-certify" => {
            let pair_name = o.pair.clone().ok_or("koszul-certify needs --pair")?;
            let pair = resolve_pair(&pair_name, &o)?;
            pair.validate().map_err(|e| format!("invalid pair: {e}"))?;
            let cert = acyclicity_certificate(&pair, o.max_internal);
            rep.window("max-internal", o.max_internal);
            for (n, ok) in &cert.verdicts {
                rep.verdict(format!("internal[{n}]"), *ok);
            }
            for (i, w) in cert.witnesses.iter().take(5).enumerate() {
                rep.kv(format!("witness[{i}]"), w.clone());
            }
        }
        "duality-verify" => {
            let pair_name = o.pair.clone().ok_or("duality-verify needs --pair")?;
            let pair = resolve_pair(&pair_name, &o)?;
            pair.validate().map_err(|e| format!("invalid pair: {e}"))?;
            let cert = acyclicity_certificate(&pair, o.max_internal);
            rep.window("max-internal", o.max_internal);
            rep.verdict("certified", cert.certified_up_to(o.max_internal));
            let modules: Vec<(String, cdga_core::species::CdgModule)> = if pair_name == "bgg" {
                vec![
                    (
                        "A".to_string(),
                        cdga_core::species::algebra_as_module(&pair.algebra, Side::Left),
                    ),
                    ("k".to_string(), gallery::trivial_module_internal(&pair.algebra)),
                    (
                        "k[x]/x^2".to_string(),
                        gallery::truncated_polynomial_module(&pair.algebra, 2),
                    ),
                ]
            } else {
                vec![(
                    "k".to_string(),
                    gallery::trivial_module_internal(&pair.algebra),
                )]
            };
            for (mname, m) in modules {
                let r = duality_on_modules(&pair, &m, &cert, o.max_internal);
                for (n, ok) in &r.per_internal {
                    rep.verdict(format!("counit[{mname}][internal {n}]"), *ok);
                }
            }
        }
        "phi" => {
            let name = o.positional.first().ok_or("phi needs a contramodule name")?;
            let p = doc
                .contramodules
                .get(name)
                .ok_or_else(|| format!("unknown contramodule {name:?}"))?;
            let (out, _) = cdga_core::species::phi(p);
            dims_of(&mut rep, "Phi", &out.space);
            report_axioms(&mut rep, "comodule", &check_cdg_comodule(&out));
        }
        "psi" => {
            let name = o.positional.first().ok_or("psi needs a comodule name")?;
            let m = doc
                .comodules
                .get(name)
                .ok_or_else(|| format!("unknown comodule {name:?}"))?;
            let (out, _) = cdga_core::species::psi(m);
            dims_of(&mut rep, "Psi", &out.space);
            report_axioms(&mut rep, "contramodule", &check_cdg_contramodule(&out));
        }
        "filtered-quis" => {
            if let Some(cname) = o.positional.first().filter(|_| o.hom) {
                let _ = cname;
                return Err("--hom is not a filtered-quis flag".into());
            }
            match o.positional.first().map(String::as_str) {
                Some("unit") => {
                    let cname = o.positional.get(1).ok_or("filtered-quis unit <coalgebra>")?;
                    let c = doc
                        .coalgebras
                        .get(cname)
                        .cloned()
                        .or_else(|| gallery_coalgebra(cname, &o))
                        .ok_or_else(|| format!("unknown coalgebra {cname:?}"))?;
                    let w = section_of(&c, &o)?;
                    let (unit, src, tgt) = bar_cobar_unit(&c, &w, o.max_tensor);
                    report_axioms(&mut rep, "unit-morphism", &unit.check());
                    let fq = filtered_quis_check_with(&unit, &src, &tgt)
                        .map_err(|e| e.to_string())?;
                    for (n, ok) in &fq.layer_verdicts {
                        rep.verdict(format!("gr[{n}]"), *ok);
                    }
                    rep.verdict("filtered-quis", fq.verdict);
                }
                Some(mname) => {
                    let g = doc
                        .coalgebra_morphisms
                        .get(mname)
                        .ok_or_else(|| format!("unknown coalgebra morphism {mname:?}"))?;
                    let ws = section_named(&g.source, o.section.as_deref())?;
                    let wt = section_named(&g.target, o.section.as_deref())?;
                    let fq = filtered_quis_check(g, &ws, &wt, o.max_tensor)
                        .map_err(|e| e.to_string())?;
                    for (n, ok) in &fq.layer_verdicts {
                        rep.verdict(format!("gr[{n}]"), *ok);
                    }
                    rep.verdict("filtered-quis", fq.verdict);
                }
                None => return Err("filtered-quis needs 'unit <coalgebra>' or a morphism".into()),
            }
        }
        "gallery" => {
            let name = o.positional.first().map(String::as_str).unwrap_or("list");
            if name == "list" {
                for n in [
                    "lambda",
                    "lambda-ungraded",
                    "ground-field",
                    "polynomial",
                    "mf-ring",
                    "ug-abelian2",
                    "ug-nonabelian2",
                    "ug-heisenberg",
                    "adjoined-unit",
                    "dual-lambda",
                    "power-series",
                    "ce-abelian2",
                    "ce-nonabelian2",
                    "ce-heisenberg",
                    "eps-module",
                    "lambda-complex-right",
                    "lambda-complex-left",
                    "mf-xx",
                    "mf-x-x2",
                    "trivial-k-lambda",
                    "filtered-space",
                ] {
                    rep.kv("item", n.to_string());
                }
            } else if let Some(b) = gallery_algebra(name, &o) {
                dims_of(&mut rep, "algebra", b.space());
                rep.kv("curvature", if b.is_dg() { "zero" } else { "nonzero" });
                report_axioms(&mut rep, name, &check_cdg_algebra_bounded(&b, o.max_tensor));
            } else if let Some(c) = gallery_coalgebra(name, &o) {
                dims_of(&mut rep, "coalgebra", c.space());
                rep.kv("curvature", if c.is_dg() { "zero" } else { "nonzero" });
                report_axioms(&mut rep, name, &check_cdg_coalgebra_bounded(&c, o.max_tensor));
            } else if let Some(m) = gallery_module(name, &o) {
                dims_of(&mut rep, "module", &m.space);
                report_axioms(&mut rep, name, &check_cdg_module_bounded(&m, o.max_tensor));
            } else if name == "filtered-space" {
                let dims = [
                    o.params.first().copied().unwrap_or(1) as usize,
                    o.params.get(1).copied().unwrap_or(2) as usize,
                    o.params.get(2).copied().unwrap_or(3) as usize,
                ];
                let (p, m, _) = gallery::filtered_space_example(o.field, dims);
                dims_of(&mut rep, "contramodule", &p.space);
                dims_of(&mut rep, "comodule", &m.space);
                report_axioms(&mut rep, "contramodule", &check_cdg_contramodule(&p));
                report_axioms(&mut rep, "comodule", &check_cdg_comodule(&m));
            } else {
                return Err(format!("unknown gallery item {name:?}"));
            }
        }
        other => return Err(format!("unknown command {other:?}")),
    }
    Ok(finish(rep))
}

fn dims_of(rep: &mut Report, prefix: &str, space: &cdga_core::grading::GradedSpace) {
    for d in space.degrees().collect::<Vec<_>>() {
        rep.kv(format!("{prefix}.dim[{d}]"), format!("{}", space.dim(d)));
    }
    rep.kv(format!("{prefix}.total"), format!("{}", space.total_dim()));
}

fn section_of(c: &CdgCoalgebra, o: &Opts) -> Result<Section, String> {
    section_named(c, o.section.as_deref())
}

fn section_named(c: &CdgCoalgebra, name: Option<&str>) -> Result<Section, String> {
    match name {
        Some(n) => {
            let l = Label::atom(n);
            let l = if c.space().find(&l).is_some() {
                l
            } else {
                return Err(format!("unknown section label {n:?}"));
            };
            Ok(Section::at_label(&l, c.field()))
        }
        None => {
            // default: the unique basis label with nonzero counit
            let mut found = None;
            for (_, l) in c.space().all_basis() {
                if !c.coalgebra.counit_basis(l).is_zero() {
                    if found.is_some() {
                        return Err(
                            "counit supported on several labels: pass --section".to_string()
                        );
                    }
                    found = Some(l.clone());
                }
            }
            let l = found.ok_or("zero counit")?;
            Ok(Section::at_label(&l, c.field()))
        }
    }
}

fn complex_of(
    doc: &InputDocument,
    name: &str,
    o: &Opts,
) -> Result<DifferentialSpace, String> {
    if let Some(m) = doc.modules.get(name).cloned().or_else(|| gallery_module(name, o)) {
        return Ok(m.complex());
    }
    if let Some(n) = doc.comodules.get(name) {
        return Ok(n.complex());
    }
    if let Some(p) = doc.contramodules.get(name) {
        return Ok(p.complex());
    }
    if let Some(b) = doc.algebras.get(name).cloned().or_else(|| gallery_algebra(name, o)) {
        return Ok(DifferentialSpace { space: b.space().clone(), d: b.d.clone() });
    }
    if let Some(c) = doc.coalgebras.get(name).cloned().or_else(|| gallery_coalgebra(name, o)) {
        return Ok(DifferentialSpace { space: c.space().clone(), d: c.d.clone() });
    }
    Err(format!("unknown object {name:?}"))
}

fn trivial_over(b: &CdgAlgebra, o: &Opts) -> Option<cdga_core::species::CdgModule> {
    let _ = o;
    Some(gallery::trivial_module_internal(b))
}

fn build_certified(
    pair_name: &str,
    o: &Opts,
) -> Result<
    (
        KoszulPair,
        cdga_core::twist::TwistingCochain,
        cdga_core::koszul::AcyclicityCertificate,
    ),
    String,
> {
    match pair_name {
        "bgg" | "gr-lie2" => {
            let pair = resolve_pair(pair_name, o)?;
            pair.validate().map_err(|e| format!("invalid pair: {e}"))?;
            let cert = acyclicity_certificate(&pair, o.max_internal);
            let tau = pair.tau.clone();
            Ok((pair, tau, cert))
        }
        // nonhomogeneous Lie pairs: certified through the associated graded
        "ug-abelian2" | "ug-nonabelian2" | "ug-heisenberg" => {
            let f = o.field;
            let g = match pair_name {
                "ug-abelian2" => gallery::LieAlgebraData::abelian(f, 2),
                "ug-nonabelian2" => gallery::LieAlgebraData::nonabelian2(f),
                _ => gallery::LieAlgebraData::heisenberg_extension(f),
            };
            let a = gallery::u_g_window(&g, 3);
            let vbar = vec![gallery::pbw_label(&[1, 0]), gallery::pbw_label(&[0, 1])];
            let kd = KoszulGeneratingData { algebra: a.clone(), vbar };
            let nd = nonhomogeneous_dual(&kd, 3).map_err(|e| e.to_string())?;
            let tau = natural_tau_koszul(&kd, &nd);
            let gr = gr_lie_pair(f, 2, o.max_internal.max(3) as usize);
            let cert = acyclicity_certificate(&gr, o.max_internal.max(3));
            Ok((gr, tau, cert))
        }
        other => Err(format!("unknown pair {other:?}")),
    }
}

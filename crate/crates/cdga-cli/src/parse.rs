//! The line-oriented structure-constants format.
//!
//! A document is a sequence of sections:
//!
//! ```text
//! [field] Q            # or: [field] Fp 7
//! [grading] Z          # or: Z2
//! [algebra name=Lambda]
//! basis: 1:0 eps:1     # label:degree or label:degree:internal
//! unit: 1
//! mul: eps.eps = 0
//! d: eps = 0
//! h: 0
//! [coalgebra name=C]
//! basis: c0:0 c1:-1
//! counit: c0 = 1
//! comul: c0 = (c0,c0)
//! comul: c1 = (c1,c0) + (c0,c1)
//! [module name=M over=Lambda side=left]
//! act: eps.m = em
//! [comodule name=N over=C side=left]
//! coact: n = (c0,n)
//! [contramodule name=P over=C]
//! contra: c0.p = p
//! [morphism name=g source=C target=D kind=coalgebra]
//! map: c0 = d0
//! a: c1 = 1
//! [cochain name=tau source=C target=B]
//! tau: c1 = -1*x
//! [ainfty name=A]
//! m2: x.x = z
//! ```
//!
//! Unlisted products, coproducts, actions, differentials and curvatures are
//! zero, except products/actions with the unit, which are implied.
//! Coefficients parse in the declared field ("a" or "a/b" with optional
//! leading minus). All species invariants are checked at load; violations
//! carry the offending basis word.

use std::collections::BTreeMap;
use std::fmt;

use cdga_core::cdg::{
    check_cdg_algebra, check_cdg_coalgebra, CdgAlgebra, CdgAlgebraMorphism, CdgCoalgebra,
    CdgCoalgebraMorphism, GradedAlgebra, GradedCoalgebra,
};
use cdga_core::field::{Field, FieldElement};
use cdga_core::grading::{Combo, GradedMap, GradedSpace, Grading, Label};
use cdga_core::species::{
    check_cdg_comodule, check_cdg_contramodule, check_cdg_module, CdgComodule, CdgContramodule,
    CdgModule, Side,
};
use cdga_core::twist::{AInfinityAlgebra, TwistingCochain};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// A fully resolved input document.
pub struct InputDocument {
    pub field: Option<Field>,
    pub grading: Grading,
    pub algebras: BTreeMap<String, CdgAlgebra>,
    pub coalgebras: BTreeMap<String, CdgCoalgebra>,
    pub modules: BTreeMap<String, CdgModule>,
    pub comodules: BTreeMap<String, CdgComodule>,
    pub contramodules: BTreeMap<String, CdgContramodule>,
    pub algebra_morphisms: BTreeMap<String, CdgAlgebraMorphism>,
    pub coalgebra_morphisms: BTreeMap<String, CdgCoalgebraMorphism>,
    pub cochains: BTreeMap<String, TwistingCochain>,
    pub ainfty: BTreeMap<String, AInfinityAlgebra>,
}

impl Default for InputDocument {
    fn default() -> InputDocument {
        InputDocument {
            field: None,
            grading: Grading::Z,
            algebras: BTreeMap::new(),
            coalgebras: BTreeMap::new(),
            modules: BTreeMap::new(),
            comodules: BTreeMap::new(),
            contramodules: BTreeMap::new(),
            algebra_morphisms: BTreeMap::new(),
            coalgebra_morphisms: BTreeMap::new(),
            cochains: BTreeMap::new(),
            ainfty: BTreeMap::new(),
        }
    }
}

struct RawSection {
    line: usize,
    kind: String,
    attrs: BTreeMap<String, String>,
    entries: Vec<(usize, String, String)>, // (line, key, rest)
}

fn tokenize(text: &str) -> Result<Vec<RawSection>, ParseError> {
    let mut sections = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let Some(body) = rest.strip_suffix(']').map(str::trim).or_else(|| {
                rest.find(']').map(|p| rest[..p].trim())
            }) else {
                return err(line_no, "unterminated section header");
            };
            let tail = rest.find(']').map(|p| rest[p + 1..].trim().to_string()).unwrap_or_default();
            let mut parts = body.split_whitespace();
            let kind = parts.next().unwrap_or("").to_string();
            let mut attrs = BTreeMap::new();
            for p in parts {
                match p.split_once('=') {
                    Some((k, v)) => {
                        attrs.insert(k.to_string(), v.to_string());
                    }
                    None => {
                        attrs.insert("value".to_string(), p.to_string());
                    }
                }
            }
            sections.push(RawSection { line: line_no, kind, attrs, entries: Vec::new() });
            if !tail.is_empty() {
                // same-line payload, e.g. "[field] Q"
                let sec = sections.last_mut().unwrap();
                sec.entries.push((line_no, "value".to_string(), tail));
            }
        } else {
            let Some(sec) = sections.last_mut() else {
                return err(line_no, "entry before any section header");
            };
            let Some((key, rest)) = line.split_once(':') else {
                return err(line_no, format!("expected 'key: value', found {line:?}"));
            };
            sec.entries.push((line_no, key.trim().to_string(), rest.trim().to_string()));
        }
    }
    Ok(sections)
}

struct Ctx {
    field: Field,
    grading: Grading,
}

impl Ctx {
    /// Parses "2*x + 1/2*y − z" over the labels of `space`.
    fn combo(
        &self,
        space: &GradedSpace,
        text: &str,
        line: usize,
    ) -> Result<Combo, ParseError> {
        let mut out = Combo::zero();
        let t = text.trim();
        if t == "0" || t.is_empty() {
            return Ok(out);
        }
        // split on + and binary - (a leading - binds to the first term)
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut neg = false;
        let chars = t.chars().peekable();
        for c in chars {
            match c {
                '+' => {
                    if !current.trim().is_empty() {
                        terms.push((neg, current.trim().to_string()));
                    }
                    current = String::new();
                    neg = false;
                }
                '-' => {
                    // minus inside a coefficient like "1/-2" is not supported;
                    // treat as term separator or leading sign
                    if current.trim().is_empty() {
                        neg = !neg;
                    } else {
                        terms.push((neg, current.trim().to_string()));
                        current = String::new();
                        neg = true;
                    }
                }
                _ => current.push(c),
            }
        }
        if !current.trim().is_empty() {
            terms.push((neg, current.trim().to_string()));
        }
        for (is_neg, term) in terms {
            let (coeff, label_text) = match term.split_once('*') {
                Some((c, l)) => (self.scalar(c.trim(), line)?, l.trim()),
                None => (self.field.one(), term.as_str()),
            };
            let coeff = if is_neg { self.field.neg(&coeff) } else { coeff };
            let label = self.label(space, label_text, line)?;
            out.add_term(label, &coeff, self.field);
        }
        Ok(out)
    }

    fn scalar(&self, text: &str, line: usize) -> Result<FieldElement, ParseError> {
        self.field.parse(text).map_err(|e| ParseError { line, message: format!("{e}") })
    }

    fn label(&self, space: &GradedSpace, text: &str, line: usize) -> Result<Label, ParseError> {
        let l = Label::atom(text);
        if space.find(&l).is_none() {
            return err(line, format!("unknown basis label {text:?}"));
        }
        Ok(l)
    }

    /// Parses a pair combination "(a,b) + 2*(c,d)" over space ⊗ space2.
    fn pair_combo(
        &self,
        left: &GradedSpace,
        right: &GradedSpace,
        text: &str,
        line: usize,
    ) -> Result<Combo, ParseError> {
        let mut out = Combo::zero();
        let t = text.trim();
        if t == "0" || t.is_empty() {
            return Ok(out);
        }
        for chunk in split_terms(t) {
            let (is_neg, body) = chunk;
            let (coeff, pair_text) = match body.split_once('*') {
                Some((c, l)) if !c.contains('(') => (self.scalar(c.trim(), line)?, l.trim()),
                _ => (self.field.one(), body.as_str()),
            };
            let coeff = if is_neg { self.field.neg(&coeff) } else { coeff };
            let inner = pair_text
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| ParseError {
                    line,
                    message: format!("expected (a,b) pair, found {pair_text:?}"),
                })?;
            let Some((a, b)) = inner.split_once(',') else {
                return err(line, format!("expected (a,b) pair, found {pair_text:?}"));
            };
            let la = self.label(left, a.trim(), line)?;
            let lb = self.label(right, b.trim(), line)?;
            out.add_term(Label::pair(la, lb), &coeff, self.field);
        }
        Ok(out)
    }
}

/// splits "x + y - z" into signed chunks, respecting parentheses
fn split_terms(t: &str) -> Vec<(bool, String)> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut neg = false;
    let mut depth = 0i32;
    for c in t.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth -= 1;
                current.push(c);
            }
            '+' if depth == 0 => {
                if !current.trim().is_empty() {
                    terms.push((neg, current.trim().to_string()));
                }
                current = String::new();
                neg = false;
            }
            '-' if depth == 0 => {
                if current.trim().is_empty() {
                    neg = !neg;
                } else {
                    terms.push((neg, current.trim().to_string()));
                    current = String::new();
                    neg = true;
                }
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        terms.push((neg, current.trim().to_string()));
    }
    terms
}

fn parse_basis(
    ctx: &Ctx,
    entries: &[(usize, String, String)],
) -> Result<GradedSpace, ParseError> {
    let mut with_internal = false;
    for (_, key, rest) in entries {
        if key == "basis" {
            for item in rest.split_whitespace() {
                if item.splitn(3, ':').count() == 3 {
                    with_internal = true;
                }
            }
        }
    }
    let mut space = GradedSpace::new(ctx.field, ctx.grading);
    if with_internal {
        space = space.with_internal();
    }
    for (line, key, rest) in entries {
        if key != "basis" {
            continue;
        }
        for item in rest.split_whitespace() {
            let mut parts = item.splitn(3, ':');
            let name = parts.next().unwrap_or("");
            let Some(deg) = parts.next().and_then(|d| d.parse::<i64>().ok()) else {
                return err(*line, format!("basis entry {item:?} needs label:degree"));
            };
            match parts.next() {
                Some(int_text) => {
                    let Ok(int) = int_text.parse::<i64>() else {
                        return err(*line, format!("bad internal degree in {item:?}"));
                    };
                    space.add_basis_internal(Label::atom(name), deg, int);
                }
                None => {
                    if with_internal {
                        return err(*line, format!("{item:?} is missing its internal degree"));
                    }
                    space.add_basis(Label::atom(name), deg);
                }
            }
        }
    }
    Ok(space)
}

fn parse_graded_map(
    ctx: &Ctx,
    source: &GradedSpace,
    target: &GradedSpace,
    shift: i64,
    key: &str,
    entries: &[(usize, String, String)],
) -> Result<GradedMap, ParseError> {
    let mut map = GradedMap::zero(source, target, shift);
    for (line, k, rest) in entries {
        if k != key {
            continue;
        }
        let Some((src, value)) = rest.split_once('=') else {
            return err(*line, format!("expected '{key}: label = combo'"));
        };
        let l = ctx.label(source, src.trim(), *line)?;
        let img = ctx.combo(target, value.trim(), *line)?;
        map.set_image(&l, &img);
    }
    Ok(map)
}

pub fn parse(text: &str) -> Result<InputDocument, ParseError> {
    let sections = tokenize(text)?;
    let mut doc = InputDocument::default();
    let mut field = Field::Rationals;
    let mut grading = Grading::Z;
    // first pass: field and grading
    for sec in &sections {
        match sec.kind.as_str() {
            "field" => {
                let v = sec
                    .attrs
                    .get("value")
                    .cloned()
                    .or_else(|| sec.entries.first().map(|(_, _, v)| v.clone()))
                    .unwrap_or_default();
                let mut parts = v.split_whitespace();
                match parts.next() {
                    Some("Q") => field = Field::Rationals,
                    Some("Fp") => {
                        let Some(p) = parts.next().and_then(|p| p.parse::<u64>().ok()) else {
                            return err(sec.line, "expected [field] Fp <prime>");
                        };
                        field = Field::prime(p)
                            .map_err(|e| ParseError { line: sec.line, message: format!("{e}") })?;
                    }
                    other => return err(sec.line, format!("unknown field {other:?}")),
                }
            }
            "grading" => {
                let v = sec
                    .attrs
                    .get("value")
                    .cloned()
                    .or_else(|| sec.entries.first().map(|(_, _, v)| v.clone()))
                    .unwrap_or_default();
                grading = match v.trim() {
                    "Z" => Grading::Z,
                    "Z2" => Grading::Z2,
                    other => return err(sec.line, format!("unknown grading {other:?}")),
                };
            }
            _ => {}
        }
    }
    doc.field = Some(field);
    doc.grading = grading;
    let ctx = Ctx { field, grading };
    // second pass: objects in order of appearance
    for sec in &sections {
        let name = sec.attrs.get("name").cloned().unwrap_or_default();
        match sec.kind.as_str() {
            "field" | "grading" => {}
            "algebra" => {
                let space = parse_basis(&ctx, &sec.entries)?;
                let unit = sec
                    .entries
                    .iter()
                    .find(|(_, k, _)| k == "unit")
                    .map(|(l2, _, v)| ctx.label(&space, v.trim(), *l2))
                    .transpose()?
                    .ok_or_else(|| ParseError {
                        line: sec.line,
                        message: "algebra needs a unit".into(),
                    })?;
                let mut alg = GradedAlgebra::new(space.clone(), unit);
                for (line, k, rest) in &sec.entries {
                    if k != "mul" {
                        continue;
                    }
                    let Some((lhs, value)) = rest.split_once('=') else {
                        return err(*line, "expected 'mul: a.b = combo'");
                    };
                    let Some((a, b)) = lhs.trim().split_once('.') else {
                        return err(*line, "expected 'mul: a.b = combo'");
                    };
                    let la = ctx.label(&space, a.trim(), *line)?;
                    let lb = ctx.label(&space, b.trim(), *line)?;
                    let v = ctx.combo(&space, value.trim(), *line)?;
                    alg.set_product(&la, &lb, v);
                }
                let d = parse_graded_map(&ctx, &space, &space, 1, "d", &sec.entries)?;
                let mut h = Combo::zero();
                for (line, k, rest) in &sec.entries {
                    if k == "h" {
                        h = ctx.combo(&space, rest, *line)?;
                    }
                }
                let b = CdgAlgebra { algebra: alg, d, h };
                let rep = check_cdg_algebra(&b);
                if !rep.pass() {
                    return err(
                        sec.line,
                        format!("algebra {name:?} violates its axioms: {}", rep.violations[0]),
                    );
                }
                doc.algebras.insert(name, b);
            }
            "coalgebra" => {
                let space = parse_basis(&ctx, &sec.entries)?;
                let mut co = GradedCoalgebra::new(space.clone());
                for (line, k, rest) in &sec.entries {
                    match k.as_str() {
                        "comul" => {
                            let Some((src, value)) = rest.split_once('=') else {
                                return err(*line, "expected 'comul: c = (a,b) + …'");
                            };
                            let l = ctx.label(&space, src.trim(), *line)?;
                            let v = ctx.pair_combo(&space, &space, value.trim(), *line)?;
                            co.set_comul(&l, v);
                        }
                        "counit" => {
                            let Some((src, value)) = rest.split_once('=') else {
                                return err(*line, "expected 'counit: c = scalar'");
                            };
                            let l = ctx.label(&space, src.trim(), *line)?;
                            co.set_counit(&l, ctx.scalar(value.trim(), *line)?);
                        }
                        _ => {}
                    }
                }
                let d = parse_graded_map(&ctx, &space, &space, 1, "d", &sec.entries)?;
                let mut h = BTreeMap::new();
                for (line, k, rest) in &sec.entries {
                    if k != "h" {
                        continue;
                    }
                    let Some((src, value)) = rest.split_once('=') else {
                        return err(*line, "expected 'h: c = scalar'");
                    };
                    let l = ctx.label(&space, src.trim(), *line)?;
                    h.insert(l, ctx.scalar(value.trim(), *line)?);
                }
                let c = CdgCoalgebra { coalgebra: co, d, h };
                let rep = check_cdg_coalgebra(&c);
                if !rep.pass() {
                    return err(
                        sec.line,
                        format!("coalgebra {name:?} violates its axioms: {}", rep.violations[0]),
                    );
                }
                doc.coalgebras.insert(name, c);
            }
            "module" => {
                let over = sec.attrs.get("over").ok_or_else(|| ParseError {
                    line: sec.line,
                    message: "module needs over=<algebra>".into(),
                })?;
                let b = doc.algebras.get(over).ok_or_else(|| ParseError {
                    line: sec.line,
                    message: format!("unknown algebra {over:?} (define it before use)"),
                })?;
                let side = match sec.attrs.get("side").map(String::as_str) {
                    Some("right") => Side::Right,
                    _ => Side::Left,
                };
                let space = parse_basis(&ctx, &sec.entries)?;
                let d = parse_graded_map(&ctx, &space, &space, 1, "d", &sec.entries)?;
                let mut m = CdgModule::new(b, side, space.clone(), d);
                for (line, k, rest) in &sec.entries {
                    if k != "act" {
                        continue;
                    }
                    let Some((lhs, value)) = rest.split_once('=') else {
                        return err(*line, "expected 'act: a.m = combo'");
                    };
                    let Some((a, mm)) = lhs.trim().split_once('.') else {
                        return err(*line, "expected 'act: a.m = combo'");
                    };
                    let la = ctx.label(b.space(), a.trim(), *line)?;
                    let lm = ctx.label(&space, mm.trim(), *line)?;
                    let v = ctx.combo(&space, value.trim(), *line)?;
                    m.set_action(&la, &lm, v);
                }
                let rep = check_cdg_module(&m);
                if !rep.pass() {
                    return err(
                        sec.line,
                        format!("module {name:?} violates its axioms: {}", rep.violations[0]),
                    );
                }
                doc.modules.insert(name, m);
            }
            "comodule" => {
                let over = sec.attrs.get("over").ok_or_else(|| ParseError {
                    line: sec.line,
                    message: "comodule needs over=<coalgebra>".into(),
                })?;
                let c = doc.coalgebras.get(over).ok_or_else(|| ParseError {
                    line: sec.line,
                    message: format!("unknown coalgebra {over:?} (define it before use)"),
                })?;
                let side = match sec.attrs.get("side").map(String::as_str) {
                    Some("right") => Side::Right,
                    _ => Side::Left,
                };
                let space = parse_basis(&ctx, &sec.entries)?;
                let d = parse_graded_map(&ctx, &space, &space, 1, "d", &sec.entries)?;
                let mut m = CdgComodule::new(c, side, space.clone(), d);
                for (line, k, rest) in &sec.entries {
                    if k != "coact" {
                        continue;
                    }
                    let Some((src, value)) = rest.split_once('=') else {
                        return err(*line, "expected 'coact: m = (c,m) + …'");
                    };
                    let l = ctx.label(&space, src.trim(), *line)?;
                    let v = match side {
                        Side::Left => ctx.pair_combo(c.space(), &space, value.trim(), *line)?,
                        Side::Right => ctx.pair_combo(&space, c.space(), value.trim(), *line)?,
                    };
                    m.set_coaction(&l, v);
                }
                let rep = check_cdg_comodule(&m);
                if !rep.pass() {
                    return err(
                        sec.line,
                        format!("comodule {name:?} violates its axioms: {}", rep.violations[0]),
                    );
                }
                doc.comodules.insert(name, m);
            }
            "contramodule" => {
                let over = sec.attrs.get("over").ok_or_else(|| ParseError {
                    line: sec.line,
                    message: "contramodule needs over=<coalgebra>".into(),
                })?;
                let c = doc.coalgebras.get(over).ok_or_else(|| ParseError {
                    line: sec.line,
                    message: format!("unknown coalgebra {over:?} (define it before use)"),
                })?;
                let space = parse_basis(&ctx, &sec.entries)?;
                let d = parse_graded_map(&ctx, &space, &space, 1, "d", &sec.entries)?;
                let mut p = CdgContramodule::new(c, space.clone(), d);
                for (line, k, rest) in &sec.entries {
                    if k != "contra" {
                        continue;
                    }
                    let Some((lhs, value)) = rest.split_once('=') else {
                        return err(*line, "expected 'contra: c.p = combo'");
                    };
                    let Some((cl, pl)) = lhs.trim().split_once('.') else {
                        return err(*line, "expected 'contra: c.p = combo'");
                    };
                    let lc = ctx.label(c.space(), cl.trim(), *line)?;
                    let lp = ctx.label(&space, pl.trim(), *line)?;
                    let v = ctx.combo(&space, value.trim(), *line)?;
                    p.set_contra(&Label::map(lc, lp), v);
                }
                let rep = check_cdg_contramodule(&p);
                if !rep.pass() {
                    return err(
                        sec.line,
                        format!(
                            "contramodule {name:?} violates its axioms: {}",
                            rep.violations[0]
                        ),
                    );
                }
                doc.contramodules.insert(name, p);
            }
            "morphism" => {
                let kind = sec.attrs.get("kind").map(String::as_str).unwrap_or("algebra");
                let source = sec.attrs.get("source").ok_or_else(|| ParseError {
                    line: sec.line,
                    message: "morphism needs source=".into(),
                })?;
                let target = sec.attrs.get("target").ok_or_else(|| ParseError {
                    line: sec.line,
                    message: "morphism needs target=".into(),
                })?;
                match kind {
                    "algebra" => {
                        let src = doc.algebras.get(source).ok_or_else(|| ParseError {
                            line: sec.line,
                            message: format!("unknown algebra {source:?}"),
                        })?;
                        let tgt = doc.algebras.get(target).ok_or_else(|| ParseError {
                            line: sec.line,
                            message: format!("unknown algebra {target:?}"),
                        })?;
                        let f = parse_graded_map(
                            &ctx,
                            src.space(),
                            tgt.space(),
                            0,
                            "map",
                            &sec.entries,
                        )?;
                        let mut a = Combo::zero();
                        for (line, k, rest) in &sec.entries {
                            if k == "a" {
                                a = ctx.combo(tgt.space(), rest, *line)?;
                            }
                        }
                        let m = CdgAlgebraMorphism {
                            source: src.clone(),
                            target: tgt.clone(),
                            f,
                            a,
                        };
                        let rep = m.check();
                        if !rep.pass() {
                            return err(
                                sec.line,
                                format!(
                                    "morphism {name:?} violates its axioms: {}",
                                    rep.violations[0]
                                ),
                            );
                        }
                        doc.algebra_morphisms.insert(name, m);
                    }
                    "coalgebra" => {
                        let src = doc.coalgebras.get(source).ok_or_else(|| ParseError {
                            line: sec.line,
                            message: format!("unknown coalgebra {source:?}"),
                        })?;
                        let tgt = doc.coalgebras.get(target).ok_or_else(|| ParseError {
                            line: sec.line,
                            message: format!("unknown coalgebra {target:?}"),
                        })?;
                        let f = parse_graded_map(
                            &ctx,
                            src.space(),
                            tgt.space(),
                            0,
                            "map",
                            &sec.entries,
                        )?;
                        let mut a = BTreeMap::new();
                        for (line, k, rest) in &sec.entries {
                            if k != "a" {
                                continue;
                            }
                            let Some((cl, value)) = rest.split_once('=') else {
                                return err(*line, "expected 'a: c = scalar'");
                            };
                            let l = ctx.label(src.space(), cl.trim(), *line)?;
                            a.insert(l, ctx.scalar(value.trim(), *line)?);
                        }
                        let m = CdgCoalgebraMorphism {
                            source: src.clone(),
                            target: tgt.clone(),
                            f,
                            a,
                        };
                        let rep = m.check();
                        if !rep.pass() {
                            return err(
                                sec.line,
                                format!(
                                    "morphism {name:?} violates its axioms: {}",
                                    rep.violations[0]
                                ),
                            );
                        }
                        doc.coalgebra_morphisms.insert(name, m);
                    }
                    other => return err(sec.line, format!("unknown morphism kind {other:?}")),
                }
            }
            "cochain" => {
                let source = sec.attrs.get("source").ok_or_else(|| ParseError {
                    line: sec.line,
                    message: "cochain needs source=<coalgebra>".into(),
                })?;
                let target = sec.attrs.get("target").ok_or_else(|| ParseError {
                    line: sec.line,
                    message: "cochain needs target=<algebra>".into(),
                })?;
                let src = doc.coalgebras.get(source).ok_or_else(|| ParseError {
                    line: sec.line,
                    message: format!("unknown coalgebra {source:?}"),
                })?;
                let tgt = doc.algebras.get(target).ok_or_else(|| ParseError {
                    line: sec.line,
                    message: format!("unknown algebra {target:?}"),
                })?;
                let tau =
                    parse_graded_map(&ctx, src.space(), tgt.space(), 1, "tau", &sec.entries)?;
                doc.cochains.insert(name, TwistingCochain::new(src, tgt, tau));
            }
            "ainfty" => {
                let space = parse_basis(&ctx, &sec.entries)?;
                let mut ops: BTreeMap<usize, BTreeMap<Vec<Label>, Combo>> = BTreeMap::new();
                let mut strict_unit = None;
                for (line, k, rest) in &sec.entries {
                    if k == "unit" {
                        strict_unit = Some(ctx.label(&space, rest.trim(), *line)?);
                        continue;
                    }
                    let Some(n) = k.strip_prefix('m').and_then(|s| s.parse::<usize>().ok())
                    else {
                        continue;
                    };
                    let Some((lhs, value)) = rest.split_once('=') else {
                        return err(*line, format!("expected '{k}: a.b.… = combo'"));
                    };
                    let mut word = Vec::new();
                    for part in lhs.trim().split('.') {
                        word.push(ctx.label(&space, part.trim(), *line)?);
                    }
                    if word.len() != n {
                        return err(*line, format!("{k} takes {n} arguments"));
                    }
                    let v = ctx.combo(&space, value.trim(), *line)?;
                    ops.entry(n).or_default().insert(word, v);
                }
                doc.ainfty.insert(name, AInfinityAlgebra { space, ops, strict_unit });
            }
            other => return err(sec.line, format!("unknown section kind {other:?}")),
        }
    }
    Ok(doc)
}

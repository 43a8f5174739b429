//! Degree-indexed vector spaces, degree-homogeneous maps, and the Koszul
//! sign discipline, together with tensor/Hom, shift, cone, sub/quotient
//! machinery and windowed totalization of multi-differential grids.
//!
//! Basis labels are structured so that elements of derived constructions
//! stay self-describing in reports: a basis vector of a tensor product is a
//! [`Label::Pair`], a bar word is a [`Label::Word`], a Hom-space basis
//! vector is a [`Label::Map`], and so on.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;

/// The grading group: ℤ, or ℤ/2 with degrees reduced mod 2. Parity is the
/// degree itself reduced mod 2 in both cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grading {
    Z,
    Z2,
}

impl Grading {
    pub fn normalize(&self, d: i64) -> i64 {
        match self {
            Grading::Z => d,
            Grading::Z2 => d.rem_euclid(2),
        }
    }

    pub fn parity(&self, d: i64) -> i64 {
        d.rem_euclid(2)
    }
}

/// Sign (−1)^d.
pub fn sign(d: i64) -> i64 {
    if d.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Total number of letters inside `Word` nodes of a label: the tensor
/// weight used by windowed axiom checks on truncated bar/cobar objects.
pub fn tensor_weight(l: &Label) -> usize {
    match l {
        Label::Atom(_) => 0,
        Label::Pair(a, b) | Label::Map(a, b) => tensor_weight(a) + tensor_weight(b),
        Label::Word(w) => w.len() + w.iter().map(tensor_weight).sum::<usize>(),
        Label::Wedge(w) => w.iter().map(tensor_weight).sum(),
        Label::Dual(a) | Label::Tagged(_, a) => tensor_weight(a),
    }
}

/// A structured basis label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// A named generator.
    Atom(String),
    /// Basis vector of a binary tensor product.
    Pair(Box<Label>, Box<Label>),
    /// A tensor word (bar/cobar constructions); the empty word is the unit.
    Word(Vec<Label>),
    /// An exterior monomial.
    Wedge(Vec<Label>),
    /// Basis vector of a Hom space: the map sending the first label to the
    /// second and all other basis vectors to zero.
    Map(Box<Label>, Box<Label>),
    /// Basis vector of a graded dual.
    Dual(Box<Label>),
    /// A tagged wrapper used by direct sums, cones, columns, and canonical
    /// sub/quotient bases.
    Tagged(String, Box<Label>),
}

impl Label {
    pub fn atom(s: &str) -> Label {
        Label::Atom(s.to_owned())
    }

    pub fn pair(a: Label, b: Label) -> Label {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn map(a: Label, b: Label) -> Label {
        Label::Map(Box::new(a), Box::new(b))
    }

    pub fn tagged(tag: &str, inner: Label) -> Label {
        Label::Tagged(tag.to_owned(), Box::new(inner))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::Pair(a, b) => write!(f, "({a}(x){b})"),
            Label::Word(w) => {
                if w.is_empty() {
                    write!(f, "[]")
                } else {
                    write!(f, "[")?;
                    for (i, l) in w.iter().enumerate() {
                        if i > 0 {
                            write!(f, "|")?;
                        }
                        write!(f, "{l}")?;
                    }
                    write!(f, "]")
                }
            }
            Label::Wedge(w) => {
                if w.is_empty() {
                    write!(f, "1")
                } else {
                    for (i, l) in w.iter().enumerate() {
                        if i > 0 {
                            write!(f, "^")?;
                        }
                        write!(f, "{l}")?;
                    }
                    Ok(())
                }
            }
            Label::Map(a, b) => write!(f, "{{{a}->{b}}}"),
            Label::Dual(a) => write!(f, "{a}*"),
            Label::Tagged(t, a) => write!(f, "{t}:{a}"),
        }
    }
}

/// A formal linear combination of labels.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Combo {
    terms: BTreeMap<Label, FieldElement>,
}

impl Combo {
    pub fn zero() -> Combo {
        Combo { terms: BTreeMap::new() }
    }

    pub fn of(label: Label, coeff: FieldElement) -> Combo {
        let mut c = Combo::zero();
        if !coeff.is_zero() {
            c.terms.insert(label, coeff);
        }
        c
    }

    pub fn single(label: Label, field: Field) -> Combo {
        Combo::of(label, field.one())
    }

    pub fn add_term(&mut self, label: Label, coeff: &FieldElement, field: Field) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&label) {
            Some(entry) => {
                *entry = field.add(entry, coeff);
                if entry.is_zero() {
                    self.terms.remove(&label);
                }
            }
            None => {
                self.terms.insert(label, coeff.clone());
            }
        }
    }

    pub fn add(&mut self, other: &Combo, field: Field) {
        for (l, c) in &other.terms {
            self.add_term(l.clone(), c, field);
        }
    }

    pub fn scaled(&self, c: &FieldElement, field: Field) -> Combo {
        let mut out = Combo::zero();
        for (l, v) in &self.terms {
            out.add_term(l.clone(), &field.mul(v, c), field);
        }
        out
    }

    pub fn signed(&self, s: i64, field: Field) -> Combo {
        if s >= 0 {
            self.clone()
        } else {
            self.scaled(&field.neg(&field.one()), field)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, label: &Label) -> Option<&FieldElement> {
        self.terms.get(label)
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{l}")?;
            } else {
                write!(f, "{c}*{l}")?;
            }
        }
        Ok(())
    }
}

/// A finitely supported degree-indexed vector space with ordered bases and
/// an optional internal grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    pub field: Field,
    pub grading: Grading,
    components: BTreeMap<i64, Vec<Label>>,
    internal: Option<BTreeMap<Label, i64>>,
}

impl GradedSpace {
    pub fn new(field: Field, grading: Grading) -> GradedSpace {
        GradedSpace { field, grading, components: BTreeMap::new(), internal: None }
    }

    /// The ground field as a graded space: one basis vector "1" in degree 0.
    pub fn unit(field: Field, grading: Grading) -> GradedSpace {
        let mut s = GradedSpace::new(field, grading);
        s.add_basis(Label::atom("1"), 0);
        s
    }

    pub fn with_internal(mut self) -> GradedSpace {
        if self.internal.is_none() {
            self.internal = Some(BTreeMap::new());
        }
        self
    }

    pub fn has_internal(&self) -> bool {
        self.internal.is_some()
    }

    pub fn add_basis(&mut self, label: Label, degree: i64) {
        let d = self.grading.normalize(degree);
        assert!(self.find(&label).is_none(), "duplicate basis label {label}");
        self.components.entry(d).or_default().push(label);
    }

    pub fn add_basis_internal(&mut self, label: Label, degree: i64, internal: i64) {
        self.add_basis(label.clone(), degree);
        self.internal.get_or_insert_with(BTreeMap::new).insert(label, internal);
    }

    pub fn internal_degree(&self, label: &Label) -> Option<i64> {
        self.internal.as_ref().and_then(|m| m.get(label).copied())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.keys().copied()
    }

    pub fn dim(&self, degree: i64) -> usize {
        let d = self.grading.normalize(degree);
        self.components.get(&d).map_or(0, |v| v.len())
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(|v| v.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn basis(&self, degree: i64) -> &[Label] {
        const EMPTY: &[Label] = &[];
        let d = self.grading.normalize(degree);
        self.components.get(&d).map_or(EMPTY, |v| v.as_slice())
    }

    pub fn all_basis(&self) -> impl Iterator<Item = (i64, &Label)> {
        self.components.iter().flat_map(|(d, v)| v.iter().map(move |l| (*d, l)))
    }

    /// Locates a label: (degree, index within that component).
    pub fn find(&self, label: &Label) -> Option<(i64, usize)> {
        for (d, v) in &self.components {
            if let Some(i) = v.iter().position(|l| l == label) {
                return Some((*d, i));
            }
        }
        None
    }

    pub fn degree_of(&self, label: &Label) -> Option<i64> {
        self.find(label).map(|(d, _)| d)
    }

    /// Coordinates of a homogeneous combination in component `degree`.
    pub fn coords(&self, degree: i64, combo: &Combo) -> Vec<FieldElement> {
        let basis = self.basis(degree);
        let mut out = vec![self.field.zero(); basis.len()];
        for (l, c) in combo.iter() {
            let idx = basis
                .iter()
                .position(|b| b == l)
                .unwrap_or_else(|| panic!("label {l} not in component {degree}"));
            out[idx] = c.clone();
        }
        out
    }

    pub fn combo_from_coords(&self, degree: i64, coords: &[FieldElement]) -> Combo {
        let basis = self.basis(degree);
        assert_eq!(basis.len(), coords.len());
        let mut c = Combo::zero();
        for (l, v) in basis.iter().zip(coords) {
            c.add_term(l.clone(), v, self.field);
        }
        c
    }

    /// Tensor product space with `Pair` labels; degrees and internal
    /// degrees add. The result carries an internal grading only when both
    /// factors do.
    pub fn tensor(&self, other: &GradedSpace) -> GradedSpace {
        assert_eq!(self.field, other.field, "mixed fields");
        assert_eq!(self.grading, other.grading, "mixed gradings");
        let mut out = GradedSpace::new(self.field, self.grading);
        let both_internal = self.has_internal() && other.has_internal();
        if both_internal {
            out = out.with_internal();
        }
        for (d1, l1) in self.all_basis() {
            for (d2, l2) in other.all_basis() {
                let lab = Label::pair(l1.clone(), l2.clone());
                if both_internal {
                    let i1 = self.internal_degree(l1).expect("internal degree");
                    let i2 = other.internal_degree(l2).expect("internal degree");
                    out.add_basis_internal(lab, d1 + d2, i1 + i2);
                } else {
                    out.add_basis(lab, d1 + d2);
                }
            }
        }
        out
    }

    /// Hom space with `Map` labels; `Map(a,b)` has degree |b| − |a|.
    pub fn hom(&self, other: &GradedSpace) -> GradedSpace {
        assert_eq!(self.field, other.field, "mixed fields");
        assert_eq!(self.grading, other.grading, "mixed gradings");
        let mut out = GradedSpace::new(self.field, self.grading);
        let both_internal = self.has_internal() && other.has_internal();
        if both_internal {
            out = out.with_internal();
        }
        for (d1, l1) in self.all_basis() {
            for (d2, l2) in other.all_basis() {
                let lab = Label::map(l1.clone(), l2.clone());
                if both_internal {
                    let i1 = self.internal_degree(l1).expect("internal degree");
                    let i2 = other.internal_degree(l2).expect("internal degree");
                    out.add_basis_internal(lab, d2 - d1, i2 - i1);
                } else {
                    out.add_basis(lab, d2 - d1);
                }
            }
        }
        out
    }

    /// Graded dual with `Dual` labels; `Dual(a)` has degree −|a|.
    pub fn dual(&self) -> GradedSpace {
        let mut out = GradedSpace::new(self.field, self.grading);
        if self.has_internal() {
            out = out.with_internal();
        }
        for (d, l) in self.all_basis() {
            let lab = Label::Dual(Box::new(l.clone()));
            if let Some(i) = self.internal_degree(l) {
                out.add_basis_internal(lab, -d, -i);
            } else {
                out.add_basis(lab, -d);
            }
        }
        out
    }

    /// Shift: component n of `self.shifted(i)` is component n+i of `self`.
    /// Labels and internal grading are unchanged.
    pub fn shifted(&self, i: i64) -> GradedSpace {
        let mut out = GradedSpace::new(self.field, self.grading);
        out.internal = self.internal.clone();
        for (d, v) in &self.components {
            let nd = self.grading.normalize(d - i);
            out.components.entry(nd).or_default().extend(v.iter().cloned());
        }
        out
    }

    pub fn direct_sum(&self, other: &GradedSpace, tag_self: &str, tag_other: &str) -> GradedSpace {
        assert_eq!(self.field, other.field);
        assert_eq!(self.grading, other.grading);
        let mut out = GradedSpace::new(self.field, self.grading);
        let both_internal = self.has_internal() && other.has_internal();
        if both_internal {
            out = out.with_internal();
        }
        for (d, l) in self.all_basis() {
            let lab = Label::tagged(tag_self, l.clone());
            match (both_internal, self.internal_degree(l)) {
                (true, Some(i)) => out.add_basis_internal(lab, d, i),
                _ => out.add_basis(lab, d),
            }
        }
        for (d, l) in other.all_basis() {
            let lab = Label::tagged(tag_other, l.clone());
            match (both_internal, other.internal_degree(l)) {
                (true, Some(i)) => out.add_basis_internal(lab, d, i),
                _ => out.add_basis(lab, d),
            }
        }
        out
    }

    /// The subspace of a fixed internal degree, as a graded space with the
    /// same labels.
    pub fn internal_component(&self, n: i64) -> GradedSpace {
        let mut out = GradedSpace::new(self.field, self.grading).with_internal();
        for (d, l) in self.all_basis() {
            if self.internal_degree(l) == Some(n) {
                out.add_basis_internal(l.clone(), d, n);
            }
        }
        out
    }
}

/// A degree-homogeneous linear map stored as one sparse block per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub shift: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, shift: i64) -> GradedMap {
        assert_eq!(source.field, target.field, "mixed fields");
        assert_eq!(source.grading, target.grading, "mixed gradings");
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            shift: source.grading.normalize(shift),
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &GradedSpace) -> GradedMap {
        let mut m = GradedMap::zero(space, space, 0);
        for d in space.degrees().collect::<Vec<_>>() {
            let n = space.dim(d);
            if n > 0 {
                m.blocks.insert(d, Matrix::identity(space.field, n));
            }
        }
        m
    }

    /// Builds a map from images of basis labels. The closure receives the
    /// label and its degree; the image must be homogeneous of degree
    /// `degree + shift`.
    pub fn from_fn<F>(source: &GradedSpace, target: &GradedSpace, shift: i64, mut f: F) -> GradedMap
    where
        F: FnMut(&Label, i64) -> Combo,
    {
        let mut m = GradedMap::zero(source, target, shift);
        let images: Vec<(Label, Combo)> = source
            .all_basis()
            .map(|(d, l)| (l.clone(), f(l, d)))
            .collect();
        for (l, img) in images {
            if !img.is_zero() {
                m.set_image(&l, &img);
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.source.field
    }

    fn block_mut(&mut self, d: i64) -> &mut Matrix {
        let td = self.source.grading.normalize(d + self.shift);
        let rows = self.target.dim(td);
        let cols = self.source.dim(d);
        self.blocks.entry(d).or_insert_with(|| Matrix::zero(self.source.field, rows, cols))
    }

    pub fn block(&self, d: i64) -> Matrix {
        let dd = self.source.grading.normalize(d);
        let td = self.source.grading.normalize(dd + self.shift);
        self.blocks.get(&dd).cloned().unwrap_or_else(|| {
            Matrix::zero(self.source.field, self.target.dim(td), self.source.dim(dd))
        })
    }

    /// Sets the full image of a source basis label.
    pub fn set_image(&mut self, label: &Label, image: &Combo) {
        let (d, col) =
            self.source.find(label).unwrap_or_else(|| panic!("unknown source label {label}"));
        let td = self.source.grading.normalize(d + self.shift);
        let coords = self.target.coords(td, image);
        let block = self.block_mut(d);
        for (row, v) in coords.iter().enumerate() {
            block.set(row, col, v.clone());
        }
    }

    pub fn add_entry(&mut self, src: &Label, dst: &Label, coeff: &FieldElement) {
        let (d, col) =
            self.source.find(src).unwrap_or_else(|| panic!("unknown source label {src}"));
        let td = self.source.grading.normalize(d + self.shift);
        let (dt, row) =
            self.target.find(dst).unwrap_or_else(|| panic!("unknown target label {dst}"));
        assert_eq!(dt, td, "entry {src}->{dst} violates homogeneity");
        let f = self.field();
        let block = self.block_mut(d);
        let cur = block.get(row, col);
        block.set(row, col, f.add(&cur, coeff));
    }

    pub fn apply_label(&self, label: &Label) -> Combo {
        let Some((d, col)) = self.source.find(label) else {
            panic!("unknown source label {label}")
        };
        let td = self.source.grading.normalize(d + self.shift);
        let block = self.block(d);
        let mut out = Combo::zero();
        let basis = self.target.basis(td);
        for (row, label) in basis.iter().enumerate() {
            let v = block.get(row, col);
            if !v.is_zero() {
                out.add_term(label.clone(), &v, self.field());
            }
        }
        out
    }

    pub fn apply(&self, combo: &Combo) -> Combo {
        let mut out = Combo::zero();
        for (l, c) in combo.iter() {
            out.add(&self.apply_label(l).scaled(c, self.field()), self.field());
        }
        out
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(other.target, self.source, "composition shape mismatch");
        let g = self.source.grading;
        let mut m = GradedMap::zero(&other.source, &self.target, other.shift + self.shift);
        for d in other.source.degrees().collect::<Vec<_>>() {
            let mid = g.normalize(d + other.shift);
            let b = self.block(mid).mul(&other.block(d));
            if !b.is_zero() {
                m.blocks.insert(d, b);
            }
        }
        m
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        assert_eq!(self.shift, other.shift, "adding maps of different shifts");
        let mut m = self.clone();
        for (d, b) in &other.blocks {
            let cur = m.block(*d);
            m.blocks.insert(*d, cur.add(b));
        }
        m
    }

    pub fn scale(&self, c: &FieldElement) -> GradedMap {
        let mut m = self.clone();
        for b in m.blocks.values_mut() {
            *b = b.scale(c);
        }
        m
    }

    pub fn negate(&self) -> GradedMap {
        let f = self.field();
        self.scale(&f.neg(&f.one()))
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        self.add(&other.negate())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.is_zero())
    }

    /// Rebuilds the map against replacement source/target spaces that carry
    /// the same labels (used after shifts and quotients).
    pub fn reindexed(&self, source: &GradedSpace, target: &GradedSpace, shift: i64) -> GradedMap {
        let mut m = GradedMap::zero(source, target, shift);
        for (_, l) in source.all_basis() {
            let img = self.apply_label(l);
            if !img.is_zero() {
                m.set_image(l, &img);
            }
        }
        m
    }

    /// Tensor of maps with the Koszul sign: (f⊗g)(x⊗y) = (−1)^{|g||x|} f(x)⊗g(y).
    pub fn tensor(&self, other: &GradedMap) -> GradedMap {
        let f = self.field();
        let src = self.source.tensor(&other.source);
        let tgt = self.target.tensor(&other.target);
        let g_shift = other.shift;
        GradedMap::from_fn(&src, &tgt, self.shift + other.shift, |lab, _| {
            let Label::Pair(x, y) = lab else { panic!("tensor label expected") };
            let dx = self.source.degree_of(x).expect("label in factor");
            let fx = self.apply_label(x);
            let gy = other.apply_label(y);
            let s = sign(g_shift * dx);
            let mut out = Combo::zero();
            for (lx, cx) in fx.iter() {
                for (ly, cy) in gy.iter() {
                    let c = f.mul(cx, cy);
                    out.add_term(Label::pair(lx.clone(), ly.clone()), &c, f);
                }
            }
            out.signed(s, f)
        })
    }

    /// Kernel as a canonical subspace.
    pub fn kernel(&self) -> SubData {
        let mut vectors = Vec::new();
        for d in self.source.degrees().collect::<Vec<_>>() {
            let k = self.block(d).kernel_basis();
            for j in 0..k.ncols {
                vectors.push(self.source.combo_from_coords(d, &k.column(j)));
            }
        }
        SubData::from_spanning(&self.source, &vectors)
    }

    /// Image as a canonical subspace of the target.
    pub fn image(&self) -> SubData {
        let mut vectors = Vec::new();
        for (_, l) in self.source.all_basis() {
            let img = self.apply_label(l);
            if !img.is_zero() {
                vectors.push(img);
            }
        }
        SubData::from_spanning(&self.target, &vectors)
    }
}

/// A canonical subspace: an abstract space plus the inclusion into the
/// ambient space. Basis vectors are echelonized per degree and labelled by
/// their pivot ambient label.
#[derive(Clone, Debug)]
pub struct SubData {
    pub space: GradedSpace,
    pub incl: GradedMap,
}

impl SubData {
    pub fn from_spanning(ambient: &GradedSpace, vectors: &[Combo]) -> SubData {
        let f = ambient.field;
        let mut per_degree: BTreeMap<i64, Vec<Combo>> = BTreeMap::new();
        for v in vectors {
            if v.is_zero() {
                continue;
            }
            let mut deg = None;
            for (l, _) in v.iter() {
                let d =
                    ambient.degree_of(l).unwrap_or_else(|| panic!("label {l} not in ambient"));
                match deg {
                    None => deg = Some(d),
                    Some(d0) => assert_eq!(d0, d, "spanning vector not homogeneous"),
                }
            }
            per_degree.entry(deg.expect("nonzero")).or_default().push(v.clone());
        }
        let mut space = GradedSpace::new(f, ambient.grading);
        let keep_internal = ambient.has_internal();
        if keep_internal {
            space = space.with_internal();
        }
        let mut incl_images: Vec<(Label, Combo)> = Vec::new();
        for (d, vecs) in &per_degree {
            let cols: Vec<Vec<FieldElement>> = vecs.iter().map(|v| ambient.coords(*d, v)).collect();
            let m = Matrix::from_columns(f, ambient.dim(*d), &cols);
            let (r, _) = m.transpose().rref();
            let basis_labels = ambient.basis(*d);
            for i in 0..r.nrows {
                let row: Vec<FieldElement> = (0..r.ncols).map(|j| r.get(i, j)).collect();
                if row.iter().all(|v| v.is_zero()) {
                    continue;
                }
                let pivot = row.iter().position(|v| !v.is_zero()).expect("nonzero row");
                let combo = ambient.combo_from_coords(*d, &row);
                let lab = Label::tagged("span", basis_labels[pivot].clone());
                let mut internal = None;
                if keep_internal {
                    let mut degs: BTreeSet<i64> = BTreeSet::new();
                    for (l, _) in combo.iter() {
                        if let Some(n) = ambient.internal_degree(l) {
                            degs.insert(n);
                        }
                    }
                    if degs.len() == 1 {
                        internal = degs.into_iter().next();
                    }
                }
                match internal {
                    Some(n) => space.add_basis_internal(lab.clone(), *d, n),
                    None => space.add_basis(lab.clone(), *d),
                }
                incl_images.push((lab, combo));
            }
        }
        let mut incl = GradedMap::zero(&space, ambient, 0);
        for (lab, combo) in incl_images {
            incl.set_image(&lab, &combo);
        }
        SubData { space, incl }
    }

    /// Expresses an ambient vector in the sub basis; None when it is not in
    /// the subspace.
    pub fn express(&self, v: &Combo) -> Option<Combo> {
        if v.is_zero() {
            return Some(Combo::zero());
        }
        let ambient = &self.incl.target;
        let mut deg = None;
        for (l, _) in v.iter() {
            deg = Some(ambient.degree_of(l)?);
        }
        let d = deg?;
        let cols: Vec<Vec<FieldElement>> = self
            .space
            .basis(d)
            .iter()
            .map(|l| ambient.coords(d, &self.incl.apply_label(l)))
            .collect();
        let m = Matrix::from_columns(ambient.field, ambient.dim(d), &cols);
        let sol = m.solve(&ambient.coords(d, v))?;
        Some(self.space.combo_from_coords(d, &sol))
    }

    /// The induced map between subspaces when `f` maps this sub into
    /// `target_sub`; None otherwise.
    pub fn restrict(&self, f: &GradedMap, target_sub: &SubData) -> Option<GradedMap> {
        let mut m = GradedMap::zero(&self.space, &target_sub.space, f.shift);
        for (_, l) in self.space.all_basis().map(|(d, l)| (d, l.clone())).collect::<Vec<_>>() {
            let img = f.apply(&self.incl.apply_label(&l));
            let expressed = target_sub.express(&img)?;
            m.set_image(&l, &expressed);
        }
        Some(m)
    }
}

/// A canonical quotient: representatives are the lexicographically least
/// ambient basis labels completing the relation span.
#[derive(Clone, Debug)]
pub struct QuotData {
    pub space: GradedSpace,
    /// ambient → quotient
    pub proj: GradedMap,
    /// quotient → ambient section picking the representative labels
    pub rep: GradedMap,
}

impl QuotData {
    pub fn by_spanning(ambient: &GradedSpace, relations: &[Combo]) -> QuotData {
        let f = ambient.field;
        let mut per_degree: BTreeMap<i64, Vec<Combo>> = BTreeMap::new();
        for v in relations {
            if v.is_zero() {
                continue;
            }
            let mut deg = None;
            for (l, _) in v.iter() {
                let d =
                    ambient.degree_of(l).unwrap_or_else(|| panic!("label {l} not in ambient"));
                match deg {
                    None => deg = Some(d),
                    Some(d0) => assert_eq!(d0, d, "relation not homogeneous"),
                }
            }
            per_degree.entry(deg.expect("nonzero")).or_default().push(v.clone());
        }
        let mut space = GradedSpace::new(f, ambient.grading);
        if ambient.has_internal() {
            space = space.with_internal();
        }
        let mut proj_images: Vec<(Label, Combo)> = Vec::new();
        let mut rep_pairs: Vec<Label> = Vec::new();
        for d in ambient.degrees().collect::<Vec<_>>() {
            let n = ambient.dim(d);
            let rels = per_degree.get(&d).cloned().unwrap_or_default();
            let rel_cols: Vec<Vec<FieldElement>> =
                rels.iter().map(|v| ambient.coords(d, v)).collect();
            let r = Matrix::from_columns(f, n, &rel_cols);
            let aug = r.augment(&Matrix::identity(f, n));
            let (_, pivots) = aug.rref();
            let complement: Vec<usize> =
                pivots.iter().filter(|&&c| c >= r.ncols).map(|&c| c - r.ncols).collect();
            let labels = ambient.basis(d).to_vec();
            for &i in &complement {
                let l = labels[i].clone();
                match ambient.internal_degree(&l) {
                    Some(k) if space.has_internal() => space.add_basis_internal(l.clone(), d, k),
                    _ => space.add_basis(l.clone(), d),
                }
                rep_pairs.push(l);
            }
            let rbasis = r.image_basis();
            let ec_cols: Vec<Vec<FieldElement>> = complement
                .iter()
                .map(|&i| {
                    let mut v = vec![f.zero(); n];
                    v[i] = f.one();
                    v
                })
                .collect();
            let solver = rbasis.augment(&Matrix::from_columns(f, n, &ec_cols));
            for (j, amb_label) in labels.iter().enumerate() {
                let mut e = vec![f.zero(); n];
                e[j] = f.one();
                let sol = solver.solve(&e).expect("complement spans");
                let mut img = Combo::zero();
                for (t, &i) in complement.iter().enumerate() {
                    img.add_term(labels[i].clone(), &sol[rbasis.ncols + t], f);
                }
                if !img.is_zero() {
                    proj_images.push((amb_label.clone(), img));
                }
            }
        }
        let mut proj = GradedMap::zero(ambient, &space, 0);
        for (l, img) in proj_images {
            proj.set_image(&l, &img);
        }
        let mut rep = GradedMap::zero(&space, ambient, 0);
        for l in rep_pairs {
            rep.add_entry(&l, &l, &f.one());
        }
        QuotData { space, proj, rep }
    }

    /// The induced map on quotients when `f` carries relations to relations.
    pub fn induce(&self, f: &GradedMap, target_quot: &QuotData) -> GradedMap {
        let comp = target_quot.proj.compose(&f.compose(&self.rep));
        GradedMap {
            source: self.space.clone(),
            target: target_quot.space.clone(),
            shift: f.shift,
            blocks: comp.blocks,
        }
    }
}

/// A graded space with a degree +1 endomorphism. Nothing is assumed about
/// d²: curved contexts permit d² ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialSpace {
    pub space: GradedSpace,
    pub d: GradedMap,
}

impl DifferentialSpace {
    pub fn new(space: GradedSpace, d: GradedMap) -> DifferentialSpace {
        assert_eq!(d.shift, space.grading.normalize(1), "differential must have degree 1");
        assert_eq!(d.source, space);
        assert_eq!(d.target, space);
        DifferentialSpace { space, d }
    }

    pub fn with_zero_d(space: GradedSpace) -> DifferentialSpace {
        let d = GradedMap::zero(&space, &space, 1);
        DifferentialSpace { space, d }
    }

    pub fn unit(field: Field, grading: Grading) -> DifferentialSpace {
        DifferentialSpace::with_zero_d(GradedSpace::unit(field, grading))
    }

    pub fn d_squared(&self) -> GradedMap {
        self.d.compose(&self.d)
    }

    pub fn d_squared_is_zero(&self) -> bool {
        self.d_squared().is_zero()
    }

    /// Tensor product of complexes: d(v⊗w) = d(v)⊗w + (−1)^{|v|} v⊗d(w).
    pub fn tensor(&self, other: &DifferentialSpace) -> DifferentialSpace {
        let space = self.space.tensor(&other.space);
        let f = space.field;
        let d = GradedMap::from_fn(&space, &space, 1, |lab, _| {
            let Label::Pair(x, y) = lab else { panic!("tensor label expected") };
            let dx = self.space.degree_of(x).expect("label");
            let mut out = Combo::zero();
            for (lx, cx) in self.d.apply_label(x).iter() {
                out.add_term(Label::pair(lx.clone(), (**y).clone()), cx, f);
            }
            for (ly, cy) in other.d.apply_label(y).iter() {
                let c = if sign(dx) < 0 { f.neg(cy) } else { cy.clone() };
                out.add_term(Label::pair((**x).clone(), ly.clone()), &c, f);
            }
            out
        });
        DifferentialSpace { space, d }
    }

    /// Hom complex: (df)(v) = d(f(v)) − (−1)^{|f|} f(dv).
    pub fn hom_space(&self, other: &DifferentialSpace) -> DifferentialSpace {
        let space = self.space.hom(&other.space);
        let f = space.field;
        let d = GradedMap::from_fn(&space, &space, 1, |lab, fdeg| {
            let Label::Map(a, b) = lab else { panic!("map label expected") };
            let mut out = Combo::zero();
            for (lb, cb) in other.d.apply_label(b).iter() {
                out.add_term(Label::map((**a).clone(), lb.clone()), cb, f);
            }
            let s = -sign(fdeg);
            for (_, x) in self.space.all_basis() {
                if let Some(c) = self.d.apply_label(x).coeff(a) {
                    let c = if s < 0 { f.neg(c) } else { c.clone() };
                    out.add_term(Label::map(x.clone(), (**b).clone()), &c, f);
                }
            }
            out
        });
        DifferentialSpace { space, d }
    }

    pub fn shifted(&self, i: i64) -> DifferentialSpace {
        let space = self.space.shifted(i);
        let d = self.d.reindexed(&space, &space, 1);
        DifferentialSpace { space, d }
    }

    /// Cone of a closed degree-0 morphism f: U → V: the space V ⊕ U[1] with
    /// d(v, u) = (d_V v + f u, −d_U u).
    pub fn cone(f: &GradedMap, u: &DifferentialSpace, v: &DifferentialSpace) -> DifferentialSpace {
        assert_eq!(f.shift, 0, "cone needs a degree-0 morphism");
        assert_eq!(f.source, u.space);
        assert_eq!(f.target, v.space);
        assert!(f.compose(&u.d).sub(&v.d.compose(f)).is_zero(), "cone needs a closed morphism");
        let space = v.space.direct_sum(&u.space.shifted(1), "c0", "c1");
        let fld = space.field;
        let d = GradedMap::from_fn(&space, &space, 1, |lab, _| {
            let Label::Tagged(tag, inner) = lab else { panic!("cone label expected") };
            let mut out = Combo::zero();
            if tag == "c0" {
                for (l, c) in v.d.apply_label(inner).iter() {
                    out.add_term(Label::tagged("c0", l.clone()), c, fld);
                }
            } else {
                for (l, c) in f.apply_label(inner).iter() {
                    out.add_term(Label::tagged("c0", l.clone()), c, fld);
                }
                for (l, c) in u.d.apply_label(inner).iter() {
                    out.add_term(Label::tagged("c1", l.clone()), &fld.neg(c), fld);
                }
            }
            out
        });
        DifferentialSpace { space, d }
    }

    pub fn direct_sum(&self, other: &DifferentialSpace, t0: &str, t1: &str) -> DifferentialSpace {
        let space = self.space.direct_sum(&other.space, t0, t1);
        let f = space.field;
        let d = GradedMap::from_fn(&space, &space, 1, |lab, _| {
            let Label::Tagged(tag, inner) = lab else { panic!("sum label expected") };
            let mut out = Combo::zero();
            let (dmap, t) = if tag == t0 { (&self.d, t0) } else { (&other.d, t1) };
            for (l, c) in dmap.apply_label(inner).iter() {
                out.add_term(Label::tagged(t, l.clone()), c, f);
            }
            out
        });
        DifferentialSpace { space, d }
    }

    /// Restriction of the differential to a subspace closed under d.
    pub fn sub_complex(&self, sub: &SubData) -> Option<DifferentialSpace> {
        let d = sub.restrict(&self.d, sub)?;
        Some(DifferentialSpace { space: sub.space.clone(), d })
    }

    /// The quotient by the d-closure of a relation span.
    pub fn quotient_complex(&self, relations: &[Combo]) -> (DifferentialSpace, QuotData) {
        let mut span: Vec<Combo> = relations.to_vec();
        loop {
            let sub = SubData::from_spanning(&self.space, &span);
            let mut grew = false;
            for (_, l) in sub.space.all_basis().map(|(d, l)| (d, l.clone())).collect::<Vec<_>>() {
                let img = self.d.apply(&sub.incl.apply_label(&l));
                if !img.is_zero() && sub.express(&img).is_none() {
                    span.push(img);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        let q = QuotData::by_spanning(&self.space, &span);
        let dq = q.induce(&self.d, &q);
        (DifferentialSpace { space: q.space.clone(), d: dq }, q)
    }
}

/// Direction of totalization of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TotalDirection {
    Sum,
    Product,
}

/// A one-parameter family of complexes with extra differentials between
/// columns. Column spaces carry their total cohomological degrees already;
/// every differential (vertical and horizontal) raises total degree by 1.
#[derive(Clone, Debug)]
pub struct Grid {
    pub columns: BTreeMap<i64, DifferentialSpace>,
    /// (column delta, per-source-column maps col n → col n+delta).
    pub horizontal: Vec<(i64, BTreeMap<i64, GradedMap>)>,
}

/// The totalization of a grid over a column window, with the window
/// recorded so truncation effects stay attributable.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub total: DifferentialSpace,
    pub direction: TotalDirection,
    pub window: (i64, i64),
    /// Total degrees that touch boundary columns: cohomology read there is
    /// subject to truncation effects.
    pub edge_degrees: BTreeSet<i64>,
}

fn col_tag(n: i64) -> String {
    format!("col{n}")
}

impl Grid {
    /// Aggregates columns `window.0 ..= window.1`.
    ///
    /// Sum direction keeps exactly the differential components between kept
    /// columns. Product direction additionally takes the quotient by the
    /// image inside the window of the differentials leaving dropped
    /// columns: the brutal quotient of the product-totalization by the
    /// subcomplex generated by the dropped columns. On a grid that is
    /// entirely inside the window the two directions coincide.
    pub fn totalize(&self, direction: TotalDirection, window: (i64, i64)) -> TotalComplex {
        assert!(window.0 <= window.1, "empty window");
        let kept: Vec<i64> =
            self.columns.keys().copied().filter(|n| *n >= window.0 && *n <= window.1).collect();
        assert!(!kept.is_empty(), "empty window");
        let field = self.columns[&kept[0]].space.field;
        let grading = self.columns[&kept[0]].space.grading;
        let mut space = GradedSpace::new(field, grading);
        let all_internal = kept.iter().all(|n| self.columns[n].space.has_internal());
        if all_internal {
            space = space.with_internal();
        }
        for n in &kept {
            let cs = &self.columns[n].space;
            for (d, l) in cs.all_basis() {
                let lab = Label::tagged(&col_tag(*n), l.clone());
                match (all_internal, cs.internal_degree(l)) {
                    (true, Some(i)) => space.add_basis_internal(lab, d, i),
                    _ => space.add_basis(lab, d),
                }
            }
        }
        let wrap = |n: i64, c: &Combo| -> Combo {
            let mut out = Combo::zero();
            for (l, v) in c.iter() {
                out.add_term(Label::tagged(&col_tag(n), l.clone()), v, field);
            }
            out
        };
        let d = GradedMap::from_fn(&space, &space, 1, |lab, _| {
            let Label::Tagged(tag, inner) = lab else { panic!("column label expected") };
            let n: i64 = tag.strip_prefix("col").and_then(|s| s.parse().ok()).expect("column tag");
            let mut out = wrap(n, &self.columns[&n].d.apply_label(inner));
            for (delta, maps) in &self.horizontal {
                let m = n + delta;
                if m < window.0 || m > window.1 || !self.columns.contains_key(&m) {
                    continue;
                }
                if let Some(h) = maps.get(&n) {
                    out.add(&wrap(m, &h.apply_label(inner)), field);
                }
            }
            out
        });
        let mut total = DifferentialSpace { space, d };
        if direction == TotalDirection::Product {
            let mut incoming: Vec<Combo> = Vec::new();
            for (src, col) in &self.columns {
                if *src >= window.0 && *src <= window.1 {
                    continue;
                }
                for (delta, maps) in &self.horizontal {
                    let dst = src + delta;
                    if dst < window.0 || dst > window.1 || !self.columns.contains_key(&dst) {
                        continue;
                    }
                    if let Some(h) = maps.get(src) {
                        for (_, l) in col.space.all_basis() {
                            let img = wrap(dst, &h.apply_label(l));
                            if !img.is_zero() {
                                incoming.push(img);
                            }
                        }
                    }
                }
            }
            if !incoming.is_empty() {
                total = total.quotient_complex(&incoming).0;
            }
        }
        let mut edge = BTreeSet::new();
        let dropped_exists: bool = self.columns.keys().any(|n| *n < window.0 || *n > window.1);
        if dropped_exists {
            for n in [kept[0], kept[kept.len() - 1]] {
                let boundary = self.columns.keys().any(|m| {
                    (*m < window.0 || *m > window.1)
                        && self
                            .horizontal
                            .iter()
                            .any(|(delta, _)| m + delta == n || n + delta == *m)
                });
                if boundary {
                    for (deg, _) in self.columns[&n].space.all_basis() {
                        edge.insert(deg);
                        edge.insert(grading.normalize(deg + 1));
                        edge.insert(grading.normalize(deg - 1));
                    }
                }
            }
        }
        TotalComplex { total, direction, window, edge_degrees: edge }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q() -> Field {
        Field::Rationals
    }

    fn unit_complex() -> DifferentialSpace {
        DifferentialSpace::unit(q(), Grading::Z)
    }

    /// Two-term complex k → k (isomorphism) in degrees 0, 1.
    fn interval() -> DifferentialSpace {
        let mut s = GradedSpace::new(q(), Grading::Z);
        s.add_basis(Label::atom("a"), 0);
        s.add_basis(Label::atom("b"), 1);
        let mut d = GradedMap::zero(&s, &s, 1);
        d.add_entry(&Label::atom("a"), &Label::atom("b"), &q().one());
        DifferentialSpace::new(s, d)
    }

    fn dim_h(x: &DifferentialSpace, deg: i64) -> usize {
        assert!(x.d_squared_is_zero());
        let ker = x.d.block(deg).kernel_basis().ncols;
        let im = x.d.block(deg - 1).rank();
        ker - im
    }

    #[test]
    fn tensor_with_unit_is_identity_on_dims() {
        let v = interval();
        let t = unit_complex().tensor(&v);
        assert_eq!(t.space.dim(0), 1);
        assert_eq!(t.space.dim(1), 1);
        assert!(t.d_squared_is_zero());
        assert_eq!(dim_h(&t, 0), 0);
        assert_eq!(dim_h(&t, 1), 0);
    }

    #[test]
    fn tensor_of_two_degree_one_cycles() {
        let mut s = GradedSpace::new(q(), Grading::Z);
        s.add_basis(Label::atom("u"), 1);
        let u = DifferentialSpace::with_zero_d(s);
        let t = u.tensor(&u);
        assert_eq!(t.space.dim(2), 1);
        assert!(t.d.is_zero());
    }

    #[test]
    fn tensor_of_acyclic_is_acyclic() {
        let t = interval().tensor(&interval());
        assert!(t.d_squared_is_zero());
        for deg in 0..=2 {
            assert_eq!(dim_h(&t, deg), 0, "H^{deg} of 4-dim tensor");
        }
    }

    #[test]
    fn hom_space_of_unit_is_identity() {
        let v = interval();
        let h = unit_complex().hom_space(&v);
        assert_eq!(h.space.dim(0), 1);
        assert_eq!(h.space.dim(1), 1);
        assert!(h.d_squared_is_zero());
    }

    #[test]
    fn hom_d_squared_vanishes() {
        let u = interval();
        let mut s = GradedSpace::new(q(), Grading::Z);
        s.add_basis(Label::atom("x"), 0);
        s.add_basis(Label::atom("y"), 1);
        s.add_basis(Label::atom("z"), 2);
        let mut d = GradedMap::zero(&s, &s, 1);
        d.add_entry(&Label::atom("x"), &Label::atom("y"), &q().from_i64(3));
        let v = DifferentialSpace::new(s, d);
        assert!(v.d_squared_is_zero());
        assert!(u.hom_space(&v).d_squared_is_zero());
        assert!(v.hom_space(&u).d_squared_is_zero());
        assert!(v.hom_space(&v).d_squared_is_zero());
    }

    #[test]
    fn map_tensor_identity_and_sign() {
        let v = interval();
        let id = GradedMap::identity(&v.space);
        let t = id.tensor(&id);
        assert_eq!(t, GradedMap::identity(&v.space.tensor(&v.space)));
        // |g| odd, x odd → sign −1: g = d (degree 1), x = b (degree 1)
        let fg = id.tensor(&v.d);
        let img = fg.apply_label(&Label::pair(Label::atom("b"), Label::atom("a")));
        let expected = q().neg(&q().one());
        assert_eq!(img.coeff(&Label::pair(Label::atom("b"), Label::atom("b"))), Some(&expected));
    }

    #[test]
    fn sign_coherence_composition_rule() {
        // (f⊗g)∘(f'⊗g') = (−1)^{|g||f'|} (ff')⊗(gg')
        let v = interval();
        let f = v.d.clone(); // degree 1
        let id = GradedMap::identity(&v.space);
        // f = id, g = d, f' = d, g' = id: lhs = (id⊗d)(d⊗id), rhs = −(d⊗d)
        let lhs = id.tensor(&f).compose(&f.tensor(&id));
        let rhs = f.tensor(&f).scale(&q().from_i64(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_round_trip() {
        let v = interval();
        assert_eq!(v.shifted(0), v);
        assert_eq!(v.shifted(1).shifted(-1), v);
        let mut s = GradedSpace::new(q(), Grading::Z);
        s.add_basis(Label::atom("w"), 2);
        assert_eq!(s.shifted(1).degree_of(&Label::atom("w")), Some(1));
    }

    #[test]
    fn cone_cases() {
        let v = interval();
        let c = DifferentialSpace::cone(&GradedMap::identity(&v.space), &v, &v);
        assert!(c.d_squared_is_zero());
        for deg in -1..=2 {
            assert_eq!(dim_h(&c, deg), 0);
        }
        let z = DifferentialSpace::with_zero_d(GradedSpace::new(q(), Grading::Z));
        let c2 = DifferentialSpace::cone(&GradedMap::zero(&z.space, &v.space, 0), &z, &v);
        assert_eq!(c2.space.total_dim(), 2);
        let k = unit_complex();
        let mut two = GradedMap::zero(&k.space, &k.space, 0);
        two.add_entry(&Label::atom("1"), &Label::atom("1"), &q().from_i64(2));
        let c3 = DifferentialSpace::cone(&two, &k, &k);
        assert!(c3.d_squared_is_zero());
        assert_eq!(dim_h(&c3, 0), 0);
        assert_eq!(dim_h(&c3, -1), 0);
    }

    #[test]
    fn hom_tensor_adjunction_bijection() {
        // Hom(V⊗W, P) ≅ Hom(W, Hom(V, P)) via f(w)(v) = (−1)^{|w||v|} f(v⊗w)
        let v = interval();
        let w = interval();
        let p = interval();
        let lhs = v.tensor(&w).hom_space(&p);
        let rhs = w.hom_space(&v.hom_space(&p));
        let f = q();
        let phi = GradedMap::from_fn(&lhs.space, &rhs.space, 0, |lab, _| {
            let Label::Map(src, c) = lab else { panic!() };
            let Label::Pair(a, b) = &**src else { panic!() };
            let da = v.space.degree_of(a).unwrap();
            let db = w.space.degree_of(b).unwrap();
            Combo::single(Label::map((**b).clone(), Label::map((**a).clone(), (**c).clone())), f)
                .signed(sign(da * db), f)
        });
        for deg in -2..=2 {
            assert_eq!(lhs.space.dim(deg), rhs.space.dim(deg));
            assert_eq!(phi.block(deg).rank(), lhs.space.dim(deg));
        }
        assert!(phi.compose(&lhs.d).sub(&rhs.d.compose(&phi)).is_zero());
    }

    #[test]
    fn quotient_picks_least_representatives() {
        let mut s = GradedSpace::new(q(), Grading::Z);
        s.add_basis(Label::atom("p"), 0);
        s.add_basis(Label::atom("q"), 0);
        let mut rel = Combo::zero();
        rel.add_term(Label::atom("p"), &q().one(), q());
        rel.add_term(Label::atom("q"), &q().from_i64(-1), q());
        let quot = QuotData::by_spanning(&s, &[rel]);
        // representative should be the lexicographically least label p
        assert_eq!(quot.space.total_dim(), 1);
        assert_eq!(quot.space.basis(0), &[Label::atom("p")]);
        // proj(q) = p
        assert_eq!(
            quot.proj.apply_label(&Label::atom("q")),
            Combo::single(Label::atom("p"), q())
        );
    }

    #[test]
    fn totalize_single_column_and_finite_grid() {
        let v = interval();
        let mut columns = BTreeMap::new();
        columns.insert(0i64, v.clone());
        let grid = Grid { columns, horizontal: vec![] };
        let t = grid.totalize(TotalDirection::Sum, (0, 0));
        assert_eq!(t.total.space.total_dim(), v.space.total_dim());
        assert!(t.edge_degrees.is_empty());

        // 2×2 grid of k's with exact rows: acyclic total complex
        let k = unit_complex();
        let k1 = k.shifted(-1);
        let mut columns = BTreeMap::new();
        columns.insert(0i64, k.direct_sum(&k1, "r0", "r1"));
        columns.insert(1i64, k.shifted(-1).direct_sum(&k1.shifted(-1), "r0", "r1"));
        let c0 = columns[&0i64].clone();
        let c1 = columns[&1i64].clone();
        let h = GradedMap::from_fn(&c0.space, &c1.space, 1, |lab, _| {
            let Label::Tagged(t, inner) = lab else { panic!() };
            Combo::single(Label::tagged(t, (**inner).clone()), q())
        });
        let mut maps = BTreeMap::new();
        maps.insert(0i64, h);
        let grid = Grid { columns, horizontal: vec![(1, maps)] };
        let sum = grid.totalize(TotalDirection::Sum, (0, 1));
        let prod = grid.totalize(TotalDirection::Product, (0, 1));
        assert!(sum.total.d_squared_is_zero());
        assert_eq!(sum.total.space, prod.total.space);
        assert_eq!(sum.total.d, prod.total.d);
        for deg in 0..=2 {
            assert_eq!(dim_h(&sum.total, deg), 0);
        }
    }
}

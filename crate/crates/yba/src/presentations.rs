//! Generators, words, and rational linear combinations for the quadratic
//! algebras, together with the presentations themselves: the triangular
//! algebra `tr_n`, the quasi-triangular algebra `qtr_n`, its associated
//! graded version `qtr0_n`, and the Kohno algebra `pb_n`.  Also the standard
//! generator maps between them (the symmetrization map `psi` and the cabling
//! maps) and the text grammar used by the CLI.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat_int, Rat, RowSpace, SparseRow};

/// One generator.  Sites are 1-based.  The variant order (`B` before `A`)
/// fixes the canonical sorting of dual monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// `r(i,j)`; under the triangular convention only `i < j` is stored.
    R { i: u8, j: u8 },
    /// `t(i,j)`, symmetric: stored with `i < j`.
    T { i: u8, j: u8 },
    /// `rho(i,j)`, antisymmetric: stored with `i < j`.
    Rho { i: u8, j: u8 },
    /// Dual generator `b(i,j)`, symmetric index: stored with `i < j`.
    B { i: u8, j: u8 },
    /// Dual generator `a(i,j)`, antisymmetric index: stored with `i < j`.
    A { i: u8, j: u8 },
}

impl Gen {
    pub fn sites(&self) -> (u8, u8) {
        match *self {
            Gen::R { i, j }
            | Gen::T { i, j }
            | Gen::Rho { i, j }
            | Gen::B { i, j }
            | Gen::A { i, j } => (i, j),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gen::R { .. } => "r",
            Gen::T { .. } => "t",
            Gen::Rho { .. } => "rho",
            Gen::B { .. } => "b",
            Gen::A { .. } => "a",
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.sites();
        write!(f, "{}({},{})", self.name(), i, j)
    }
}

/// A monomial: a finite product of generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<Gen>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: Gen) -> Self {
        Word(vec![g])
    }

    pub fn from_letters(letters: Vec<Gen>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

/// Length-lexicographic order: shorter words first, then letterwise.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(Gen::to_string).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A rational linear combination of words; the workhorse value type.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Word, Rat>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = Element::zero();
        e.add_term(Rat::one(), w);
        e
    }

    pub fn from_gen(g: Gen) -> Self {
        Element::from_word(Word::single(g))
    }

    pub fn signed_gen(g: Gen, negate: bool) -> Self {
        let c = if negate { -Rat::one() } else { Rat::one() };
        let mut e = Element::zero();
        e.add_term(c, Word::single(g));
        e
    }

    /// Add `c * w` into this element, dropping the term if it cancels.
    pub fn add_term(&mut self, c: Rat, w: Word) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(c.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Concatenation (tensor) product.
    pub fn mul(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for (w, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(a * b, w.concat(v));
            }
        }
        out
    }

    pub fn commutator(x: &Element, y: &Element) -> Element {
        x.mul(y).sub(&y.mul(x))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    /// Common degree of all words, or `None` if inhomogeneous or zero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let d = it.next()?.len();
        if it.all(|w| w.len() == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Substitute an element for every letter and expand the products.
    pub fn substitute(&self, image: impl Fn(Gen) -> Option<Element>) -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            let mut prod = Element::from_word(Word::empty());
            for &g in w.letters() {
                let img = image(g).ok_or_else(|| {
                    Error::InvalidInput(format!("generator {g} has no assigned image"))
                })?;
                prod = prod.mul(&img);
            }
            for (word, v) in prod.terms {
                out.add_term(c * v, word);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "- ")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag.is_one() && !w.is_empty() {
                write!(f, "{w}")?;
            } else if w.is_empty() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag} {w}")?;
            }
        }
        Ok(())
    }
}

/// Which presented algebra a generator universe belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PresKind {
    Tr,
    Qtr,
    Qtr0,
    Pb,
    /// Sign-graded dual of `tr_n` (odd generators `a`).
    DualA,
    /// Sign-graded dual of `qtr_n` (odd generators `a`, `b`).
    DualQa,
    /// Sign-graded dual of `qtr0_n`.
    DualQa0,
}

impl PresKind {
    /// Number of generators at `n` sites, without building the presentation.
    pub fn generator_count(&self, n: u8) -> usize {
        let n = n as usize;
        let pairs = n * (n.saturating_sub(1)) / 2;
        match self {
            PresKind::Tr | PresKind::Pb | PresKind::DualA => pairs,
            PresKind::Qtr | PresKind::Qtr0 | PresKind::DualQa | PresKind::DualQa0 => 2 * pairs,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PresKind::Tr => "tr",
            PresKind::Qtr => "qtr",
            PresKind::Qtr0 => "qtr0",
            PresKind::Pb => "pb",
            PresKind::DualA => "dual-a",
            PresKind::DualQa => "dual-qa",
            PresKind::DualQa0 => "dual-qa0",
        }
    }
}

impl fmt::Display for PresKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Resolve a named generator with raw indices into the stored generator and
/// a sign, applying the universe's index conventions (`r(j,i) = -r(i,j)` in
/// the triangular algebra, symmetric `t`/`b`, antisymmetric `rho`/`a`).
pub fn resolve_gen(kind: PresKind, name: &str, i: u8, j: u8, n: u8) -> Result<(Gen, bool)> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidInput(format!(
            "generator {name}({i},{j}) is out of range for n = {n}"
        )));
    }
    let (lo, hi, swapped) = if i < j { (i, j, false) } else { (j, i, true) };
    let unsupported = || {
        Err(Error::InvalidInput(format!(
            "generator kind `{name}` does not belong to the {kind} algebra"
        )))
    };
    match (kind, name) {
        (PresKind::Tr, "r") => Ok((Gen::R { i: lo, j: hi }, swapped)),
        (PresKind::Qtr, "r") => Ok((Gen::R { i, j }, false)),
        (PresKind::Qtr0, "t") | (PresKind::Pb, "t") => Ok((Gen::T { i: lo, j: hi }, false)),
        (PresKind::Qtr0, "rho") => Ok((Gen::Rho { i: lo, j: hi }, swapped)),
        (PresKind::DualA, "a") | (PresKind::DualQa, "a") | (PresKind::DualQa0, "a") => {
            Ok((Gen::A { i: lo, j: hi }, swapped))
        }
        (PresKind::DualQa, "b") | (PresKind::DualQa0, "b") => Ok((Gen::B { i: lo, j: hi }, false)),
        _ => unsupported(),
    }
}

/// A quadratic presentation: generators plus a linearly independent list of
/// homogeneous degree-2 relations (the raw generated list is deduplicated by
/// exact rank, and the original count retained).
#[derive(Debug, Clone)]
pub struct Presentation {
    pub kind: PresKind,
    pub n: u8,
    generators: Vec<Gen>,
    positions: BTreeMap<Gen, usize>,
    relations: Vec<Element>,
    raw_relation_count: usize,
}

impl Presentation {
    /// Assemble a presentation from parts, keeping a maximal linearly
    /// independent subset of `raw_relations` (in order).
    pub fn from_parts(kind: PresKind, n: u8, generators: Vec<Gen>, raw_relations: Vec<Element>) -> Presentation {
        let positions: BTreeMap<Gen, usize> =
            generators.iter().enumerate().map(|(p, g)| (*g, p)).collect();
        assert_eq!(positions.len(), generators.len(), "duplicate generators");
        let m = generators.len();
        let raw_relation_count = raw_relations.len();
        let mut space = RowSpace::new(m * m);
        let mut relations = Vec::new();
        for rel in raw_relations {
            assert_eq!(rel.degree(), Some(2), "relations must be quadratic");
            let row: SparseRow = rel
                .terms()
                .map(|(w, c)| {
                    let ls = w.letters();
                    (positions[&ls[0]] * m + positions[&ls[1]], c.clone())
                })
                .collect();
            if space.insert(row) {
                relations.push(rel);
            }
        }
        Presentation {
            kind,
            n,
            generators,
            positions,
            relations,
            raw_relation_count,
        }
    }

    pub fn new(kind: PresKind, n: u8) -> Presentation {
        match kind {
            PresKind::Tr => tr_presentation(n),
            PresKind::Qtr => qtr_presentation(n),
            PresKind::Qtr0 => qtr0_presentation(n),
            PresKind::Pb => pb_presentation(n),
            _ => panic!("dual presentations are built by the dual module"),
        }
    }

    pub fn generators(&self) -> &[Gen] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn gen_position(&self, g: &Gen) -> Option<usize> {
        self.positions.get(g).copied()
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn raw_relation_count(&self) -> usize {
        self.raw_relation_count
    }

    /// Parse an element in the text grammar, under this presentation's
    /// generator conventions.
    pub fn parse_element(&self, input: &str) -> Result<Element> {
        parse_element(input, self.kind, self.n)
    }

    /// Fault hook for the negative-control mode: flip the sign of the first
    /// term of the first relation.  The twisted relation spans a different
    /// line, so downstream consistency checks must detect the change.
    pub fn twist_first_relation(&mut self) {
        let rel = self
            .relations
            .first_mut()
            .expect("presentation has no relations to twist");
        let first_word = rel.terms.keys().next().expect("empty relation").clone();
        let c = rel.terms.get_mut(&first_word).expect("present");
        *c = -c.clone();
    }
}

/// `r` resolver for the triangular convention: `r(j,i)` folds to `-r(i,j)`.
fn tr_r(i: u8, j: u8) -> Element {
    let (g, neg) = resolve_gen(PresKind::Tr, "r", i, j, u8::MAX - 1).expect("valid sites");
    Element::signed_gen(g, neg)
}

fn qtr_r(i: u8, j: u8) -> Element {
    Element::from_gen(Gen::R { i, j })
}

fn rho(i: u8, j: u8) -> Element {
    let (g, neg) = resolve_gen(PresKind::Qtr0, "rho", i, j, u8::MAX - 1).expect("valid sites");
    Element::signed_gen(g, neg)
}

fn tee(i: u8, j: u8) -> Element {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    Element::from_gen(Gen::T { i: lo, j: hi })
}

/// The quadratic Yang-Baxter element
/// `[x_ij, x_ik] + [x_ij, x_jk] + [x_ik, x_jk]`.
fn cyb(x: &impl Fn(u8, u8) -> Element, i: u8, j: u8, k: u8) -> Element {
    Element::commutator(&x(i, j), &x(i, k))
        .add(&Element::commutator(&x(i, j), &x(j, k)))
        .add(&Element::commutator(&x(i, k), &x(j, k)))
}

fn site_pairs(n: u8) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            out.push((i, j));
        }
    }
    out
}

fn site_triples(n: u8) -> Vec<(u8, u8, u8)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            for k in (j + 1)..=n {
                out.push((i, j, k));
            }
        }
    }
    out
}

fn disjoint_pair_pairs(pairs: &[(u8, u8)]) -> Vec<((u8, u8), (u8, u8))> {
    let mut out = Vec::new();
    for (a, p) in pairs.iter().enumerate() {
        for q in pairs.iter().skip(a + 1) {
            if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                out.push((*p, *q));
            }
        }
    }
    out
}

fn tr_presentation(n: u8) -> Presentation {
    let generators: Vec<Gen> = site_pairs(n)
        .into_iter()
        .map(|(i, j)| Gen::R { i, j })
        .collect();
    let mut relations = Vec::new();
    for (i, j, k) in site_triples(n) {
        relations.push(cyb(&tr_r, i, j, k));
    }
    for (p, q) in disjoint_pair_pairs(&site_pairs(n)) {
        relations.push(Element::commutator(&tr_r(p.0, p.1), &tr_r(q.0, q.1)));
    }
    Presentation::from_parts(PresKind::Tr, n, generators, relations)
}

fn qtr_presentation(n: u8) -> Presentation {
    let mut generators = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                generators.push(Gen::R { i, j });
            }
        }
    }
    generators.sort();
    let mut relations = Vec::new();
    // One Yang-Baxter element per ordered triple of distinct sites.
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i != j && i != k && j != k {
                    relations.push(cyb(&qtr_r, i, j, k));
                }
            }
        }
    }
    // Disjoint commutators over unordered pairs of ordered index pairs.
    let ordered_pairs: Vec<(u8, u8)> = {
        let mut v = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    v.push((i, j));
                }
            }
        }
        v
    };
    for (p, q) in disjoint_pair_pairs(&ordered_pairs) {
        relations.push(Element::commutator(&qtr_r(p.0, p.1), &qtr_r(q.0, q.1)));
    }
    Presentation::from_parts(PresKind::Qtr, n, generators, relations)
}

fn qtr0_presentation(n: u8) -> Presentation {
    let pairs = site_pairs(n);
    let mut generators: Vec<Gen> = pairs.iter().map(|&(i, j)| Gen::T { i, j }).collect();
    generators.extend(pairs.iter().map(|&(i, j)| Gen::Rho { i, j }));
    let mut relations = Vec::new();
    for (i, j, k) in site_triples(n) {
        // [t_ab, t_ac + t_bc] = 0, one per distinguished pair of the triple.
        for (a, b, c) in [(i, j, k), (i, k, j), (j, k, i)] {
            relations.push(Element::commutator(&tee(a, b), &tee(a, c).add(&tee(b, c))));
        }
        // [t_ab, rho_ac + rho_bc] = 0.
        for (a, b, c) in [(i, j, k), (i, k, j), (j, k, i)] {
            relations.push(Element::commutator(&tee(a, b), &rho(a, c).add(&rho(b, c))));
        }
        // The rho Yang-Baxter element (the cyclic form collapses to this).
        relations.push(cyb(&rho, i, j, k));
    }
    for (p, q) in disjoint_pair_pairs(&pairs) {
        for x in [tee(p.0, p.1), rho(p.0, p.1)] {
            for y in [tee(q.0, q.1), rho(q.0, q.1)] {
                relations.push(Element::commutator(&x, &y));
            }
        }
    }
    Presentation::from_parts(PresKind::Qtr0, n, generators, relations)
}

fn pb_presentation(n: u8) -> Presentation {
    let pairs = site_pairs(n);
    let generators: Vec<Gen> = pairs.iter().map(|&(i, j)| Gen::T { i, j }).collect();
    let mut relations = Vec::new();
    for (i, j, k) in site_triples(n) {
        for (a, b, c) in [(i, j, k), (i, k, j), (j, k, i)] {
            relations.push(Element::commutator(&tee(a, b), &tee(a, c).add(&tee(b, c))));
        }
    }
    for (p, q) in disjoint_pair_pairs(&pairs) {
        relations.push(Element::commutator(&tee(p.0, p.1), &tee(q.0, q.1)));
    }
    Presentation::from_parts(PresKind::Pb, n, generators, relations)
}

/// An ordered-triple instance of the Yang-Baxter element in the triangular
/// convention (indices folded through `r(j,i) = -r(i,j)`); used to verify
/// that every ordering collapses to the stored `i<j<k` relation.
pub fn tr_cyb_instance(i: u8, j: u8, k: u8) -> Element {
    cyb(&tr_r, i, j, k)
}

/// A generator map: an element-valued assignment on the source generators.
#[derive(Debug, Clone)]
pub struct GenMap {
    images: BTreeMap<Gen, Element>,
}

impl GenMap {
    pub fn new(images: BTreeMap<Gen, Element>) -> Self {
        GenMap { images }
    }

    pub fn image(&self, g: &Gen) -> Option<&Element> {
        self.images.get(g)
    }

    pub fn images(&self) -> impl Iterator<Item = (&Gen, &Element)> {
        self.images.iter()
    }

    pub fn apply(&self, e: &Element) -> Result<Element> {
        e.substitute(|g| self.images.get(&g).cloned())
    }
}

/// The symmetrization map from `pb_n` to `qtr_n`: `t(i,j) -> r(i,j) + r(j,i)`.
pub fn psi_map(n: u8) -> GenMap {
    let mut images = BTreeMap::new();
    for (i, j) in site_pairs(n) {
        images.insert(Gen::T { i, j }, qtr_r(i, j).add(&qtr_r(j, i)));
    }
    GenMap::new(images)
}

/// The deliberately wrong variant of [`psi_map`] that drops the transposed
/// generator: `t(i,j) -> r(i,j)`.  Not a morphism; used as a negative
/// control.
pub fn broken_psi_map(n: u8) -> GenMap {
    let mut images = BTreeMap::new();
    for (i, j) in site_pairs(n) {
        images.insert(Gen::T { i, j }, qtr_r(i, j));
    }
    GenMap::new(images)
}

/// Cabling along a partially defined `f: [n] -> [m]` (given on the domain
/// `f_domain` as `(site, image)` pairs): maps generators of the `m`-site
/// algebra to sums over preimages in the `n`-site algebra,
/// `r(i,j) -> sum of r(i',j')` over `i' in f^-1(i)`, `j' in f^-1(j)`.
pub fn cabling_map(f_domain: &[(u8, u8)], n: u8, m: u8, kind: PresKind) -> Result<GenMap> {
    let resolve: fn(u8, u8) -> Element = match kind {
        PresKind::Tr => tr_r,
        PresKind::Qtr => qtr_r,
        _ => {
            return Err(Error::InvalidInput(format!(
                "cabling is defined for the tr and qtr families, not {kind}"
            )))
        }
    };
    let mut f = BTreeMap::new();
    for &(site, image) in f_domain {
        if site == 0 || site > n || image == 0 || image > m {
            return Err(Error::InvalidInput(format!(
                "cabling assignment {site} -> {image} is out of range for [{n}] -> [{m}]"
            )));
        }
        if f.insert(site, image).is_some() {
            return Err(Error::InvalidInput(format!(
                "cabling assignment repeats site {site}"
            )));
        }
    }
    let preimage = |v: u8| -> Vec<u8> {
        f.iter()
            .filter(|(_, &img)| img == v)
            .map(|(&s, _)| s)
            .collect()
    };
    let mut images = BTreeMap::new();
    let src_pairs: Vec<(u8, u8)> = match kind {
        PresKind::Tr => site_pairs(m),
        _ => {
            let mut v = Vec::new();
            for i in 1..=m {
                for j in 1..=m {
                    if i != j {
                        v.push((i, j));
                    }
                }
            }
            v
        }
    };
    for (i, j) in src_pairs {
        let mut img = Element::zero();
        for &ip in &preimage(i) {
            for &jp in &preimage(j) {
                img = img.add(&resolve(ip, jp));
            }
        }
        images.insert(Gen::R { i, j }, img);
    }
    Ok(GenMap::new(images))
}

// ---------------------------------------------------------------------------
// Text grammar
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Num(u64),
    Ident(String),
}

fn tokenize(input: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let bytes = input.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => pos += 1,
            b'+' => {
                toks.push(Tok::Plus);
                pos += 1;
            }
            b'-' => {
                toks.push(Tok::Minus);
                pos += 1;
            }
            b'*' => {
                toks.push(Tok::Star);
                pos += 1;
            }
            b'/' => {
                toks.push(Tok::Slash);
                pos += 1;
            }
            b'(' => {
                toks.push(Tok::LParen);
                pos += 1;
            }
            b')' => {
                toks.push(Tok::RParen);
                pos += 1;
            }
            b',' => {
                toks.push(Tok::Comma);
                pos += 1;
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let text = &input[start..pos];
                let value: u64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("number `{text}` out of range")))?;
                toks.push(Tok::Num(value));
            }
            b'a'..=b'z' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_lowercase() {
                    pos += 1;
                }
                toks.push(Tok::Ident(input[start..pos].to_string()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character `{}` in element text",
                    other as char
                )))
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    kind: PresKind,
    n: u8,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        match self.bump() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn site(&mut self) -> Result<u8> {
        match self.bump() {
            Some(&Tok::Num(v)) if v >= 1 && v <= u8::MAX as u64 => Ok(v as u8),
            got => Err(Error::Parse(format!("expected a site number, found {got:?}"))),
        }
    }

    /// gen := ident '(' num ',' num ')'
    fn gen(&mut self) -> Result<(Gen, bool)> {
        let name = match self.bump() {
            Some(Tok::Ident(s)) => s.clone(),
            got => return Err(Error::Parse(format!("expected a generator, found {got:?}"))),
        };
        self.expect(&Tok::LParen)?;
        let i = self.site()?;
        self.expect(&Tok::Comma)?;
        let j = self.site()?;
        self.expect(&Tok::RParen)?;
        resolve_gen(self.kind, &name, i, j, self.n)
    }

    /// coeff := num ['/' num]
    fn coeff(&mut self) -> Result<Rat> {
        let numer = match self.bump() {
            Some(&Tok::Num(v)) => v,
            got => return Err(Error::Parse(format!("expected a number, found {got:?}"))),
        };
        if let Some(Tok::Slash) = self.peek() {
            self.bump();
            let denom = match self.bump() {
                Some(&Tok::Num(v)) if v > 0 => v,
                got => {
                    return Err(Error::Parse(format!(
                        "expected a positive denominator, found {got:?}"
                    )))
                }
            };
            Ok(rat_int(numer as i64) / rat_int(denom as i64))
        } else {
            Ok(rat_int(numer as i64))
        }
    }

    /// term := coeff ['*'] word | coeff | word
    fn term(&mut self) -> Result<(Rat, Word)> {
        let mut c = Rat::one();
        let mut letters = Vec::new();
        let mut has_coeff = false;
        if let Some(Tok::Num(_)) = self.peek() {
            c = self.coeff()?;
            has_coeff = true;
            if let Some(Tok::Star) = self.peek() {
                self.bump();
                // a word must follow the explicit separator
                let (g, neg) = self.gen()?;
                if neg {
                    c = -c;
                }
                letters.push(g);
            }
        }
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) => {
                    let (g, neg) = self.gen()?;
                    if neg {
                        c = -c;
                    }
                    letters.push(g);
                }
                Some(Tok::Star) if !letters.is_empty() => {
                    self.bump();
                    let (g, neg) = self.gen()?;
                    if neg {
                        c = -c;
                    }
                    letters.push(g);
                }
                _ => break,
            }
        }
        if letters.is_empty() && !has_coeff {
            return Err(Error::Parse("empty term in element text".into()));
        }
        Ok((c, Word::from_letters(letters)))
    }

    /// element := [sign] term { sign term }
    fn element(&mut self) -> Result<Element> {
        let mut out = Element::zero();
        let mut sign = Rat::one();
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                sign = -sign;
            }
            _ => {}
        }
        loop {
            let (c, w) = self.term()?;
            out.add_term(&sign * c, w);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    sign = Rat::one();
                }
                Some(Tok::Minus) => {
                    self.bump();
                    sign = -Rat::one();
                }
                None => break,
                got => return Err(Error::Parse(format!("expected + or -, found {got:?}"))),
            }
        }
        Ok(out)
    }
}

/// Parse an element of the given universe from the CLI text grammar.
pub fn parse_element(input: &str, kind: PresKind, n: u8) -> Result<Element> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty element text".into()));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        kind,
        n,
    };
    let e = p.element()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing tokens after element: {:?}",
            &p.toks[p.pos..]
        )));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(i: u8, j: u8) -> Gen {
        Gen::R { i, j }
    }

    #[test]
    fn generator_and_relation_counts() {
        let cases = [
            (PresKind::Tr, 2, 1, 0, 0),
            (PresKind::Tr, 3, 3, 1, 1),
            (PresKind::Tr, 4, 6, 7, 7),
            (PresKind::Qtr, 2, 2, 0, 0),
            (PresKind::Qtr, 3, 6, 6, 6),
            (PresKind::Qtr, 4, 12, 36, 36),
            (PresKind::Qtr0, 3, 6, 7, 6),
            (PresKind::Pb, 3, 3, 3, 2),
            (PresKind::Pb, 2, 1, 0, 0),
        ];
        for (kind, n, gens, raw, indep) in cases {
            let p = Presentation::new(kind, n);
            assert_eq!(p.generator_count(), gens, "{kind} {n} generators");
            assert_eq!(p.raw_relation_count(), raw, "{kind} {n} raw relations");
            assert_eq!(p.relations().len(), indep, "{kind} {n} independent");
        }
    }

    #[test]
    fn qtr0_matches_qtr_relation_rank() {
        // Same generator count, and the graded algebras agree, so the
        // independent relation counts must match.
        for n in 2..=4u8 {
            let q = Presentation::new(PresKind::Qtr, n);
            let q0 = Presentation::new(PresKind::Qtr0, n);
            assert_eq!(q.generator_count(), q0.generator_count());
            assert_eq!(q.relations().len(), q0.relations().len(), "n = {n}");
        }
    }

    #[test]
    fn ordered_triple_instances_collapse() {
        // Every ordered-triple Yang-Baxter instance in the triangular
        // convention is +/- the stored sorted-triple relation.
        for n in 3..=5u8 {
            let p = Presentation::new(PresKind::Tr, n);
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=n {
                        if i == j || i == k || j == k {
                            continue;
                        }
                        let inst = tr_cyb_instance(i, j, k);
                        let mut s = [i, j, k];
                        s.sort();
                        let stored = tr_cyb_instance(s[0], s[1], s[2]);
                        assert!(
                            inst == stored || inst == stored.neg(),
                            "({i},{j},{k}) does not collapse"
                        );
                        assert!(p.relations().iter().any(|r| *r == stored));
                    }
                }
            }
        }
    }

    #[test]
    fn element_arithmetic_and_degree() {
        let x = Element::from_gen(r(1, 2));
        let y = Element::from_gen(r(1, 3));
        let c = Element::commutator(&x, &y);
        assert_eq!(c.degree(), Some(2));
        assert_eq!(c.term_count(), 2);
        assert!(c.add(&c.neg()).is_zero());
        let mixed = c.add(&x);
        assert_eq!(mixed.degree(), None);
        assert!(Element::zero().degree().is_none());
    }

    #[test]
    fn parse_and_print_roundtrip() {
        let p = Presentation::new(PresKind::Tr, 3);
        let samples = [
            "r(1,2)*r(2,3) - r(2,3)*r(1,2)",
            "- r(1,3) + 2/3 r(1,2)",
            "1 - 3 r(1,2)*r(1,2)",
            "r(1,2)",
        ];
        for s in samples {
            let e = p.parse_element(s).unwrap();
            let printed = e.to_string();
            let reparsed = p.parse_element(&printed).unwrap();
            assert_eq!(e, reparsed, "roundtrip of `{s}` via `{printed}`");
        }
    }

    #[test]
    fn parse_folds_transposed_indices() {
        let p = Presentation::new(PresKind::Tr, 3);
        let folded = p.parse_element("r(2,1)").unwrap();
        let direct = p.parse_element("- r(1,2)").unwrap();
        assert_eq!(folded, direct);
        // In the non-triangular universe r(2,1) is its own generator.
        let q = Presentation::new(PresKind::Qtr, 3);
        let kept = q.parse_element("r(2,1)").unwrap();
        assert_eq!(kept, Element::from_gen(r(2, 1)));
        // rho is antisymmetric, t symmetric.
        let g = Presentation::new(PresKind::Qtr0, 3);
        assert_eq!(
            g.parse_element("rho(3,1)").unwrap(),
            g.parse_element("- rho(1,3)").unwrap()
        );
        assert_eq!(
            g.parse_element("t(3,1)").unwrap(),
            g.parse_element("t(1,3)").unwrap()
        );
    }

    #[test]
    fn parse_rejects_bad_input() {
        let p = Presentation::new(PresKind::Tr, 3);
        for bad in ["r(1,1)", "r(1,4)", "t(1,2)", "r(1,2) r(1,3) +", "q(1,2)", ""] {
            assert!(p.parse_element(bad).is_err(), "`{bad}` should fail");
        }
    }

    #[test]
    fn psi_images() {
        let psi = psi_map(3);
        let img = psi.image(&Gen::T { i: 1, j: 2 }).unwrap();
        let expected = Element::from_gen(r(1, 2)).add(&Element::from_gen(r(2, 1)));
        assert_eq!(img, &expected);
        assert_eq!(psi_map(4).images().count(), 6);
    }

    #[test]
    fn cabling_doubling_example() {
        // f(1) = 1, f(2) = f(3) = 2 doubles site 2.
        let f = [(1, 1), (2, 2), (3, 2)];
        let map = cabling_map(&f, 3, 2, PresKind::Tr).unwrap();
        let img = map.image(&r(1, 2)).unwrap();
        let expected = Element::from_gen(r(1, 2)).add(&Element::from_gen(r(1, 3)));
        assert_eq!(img, &expected);
    }

    #[test]
    fn cabling_identity_and_degenerate() {
        let f = [(1, 1), (2, 2), (3, 3)];
        let map = cabling_map(&f, 3, 3, PresKind::Tr).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(map.image(&r(i, j)).unwrap(), &Element::from_gen(r(i, j)));
        }
        // m = 1: the source algebra has no generators at all.
        let degenerate = cabling_map(&[(1, 1), (2, 1)], 2, 1, PresKind::Tr).unwrap();
        assert_eq!(degenerate.images().count(), 0);
        assert!(cabling_map(&[(1, 2)], 3, 1, PresKind::Tr).is_err());
        assert!(cabling_map(&[(1, 1), (1, 1)], 3, 2, PresKind::Tr).is_err());
    }

    #[test]
    fn twist_changes_exactly_one_coefficient() {
        let mut p = Presentation::new(PresKind::Tr, 3);
        let before = p.relations()[0].clone();
        p.twist_first_relation();
        let after = &p.relations()[0];
        let diffs: Vec<_> = before
            .terms()
            .filter(|(w, c)| after.coeff(w) != **c)
            .collect();
        assert_eq!(diffs.len(), 1);
        let (w, c) = &diffs[0];
        assert_eq!(after.coeff(w), -(*c).clone());
    }

    #[test]
    fn substitution_expands_products() {
        // x -> x + y on a degree-2 word gives four terms.
        let p = Presentation::new(PresKind::Qtr, 2);
        let e = p.parse_element("r(1,2)*r(1,2)").unwrap();
        let sub = e
            .substitute(|_| {
                Some(Element::from_gen(r(1, 2)).add(&Element::from_gen(r(2, 1))))
            })
            .unwrap();
        assert_eq!(sub.term_count(), 4);
        assert_eq!(sub.degree(), Some(2));
    }
}

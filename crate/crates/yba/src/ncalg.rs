//! Noncommutative graded-dimension computations and the legal-monomial
//! rewriting engine.
//!
//! The degree-`d` component of a quadratic algebra is the tensor slice
//! modulo the two-sided ideal slice spanned by `x * rel * y`; its dimension
//! is computed by exact sparse rank.  For the triangular algebra the legal
//! words (those avoiding a small set of forbidden two-letter factors) always
//! *span* the quotient, and the rewriter reduces arbitrary elements to
//! combinations of legal words with a per-step termination measure asserted.
//! With up to three sites the legal words are moreover linearly independent,
//! so normal forms are unique; with four or more sites they are not (the
//! two-letter rules are not confluent — see the unit tests for an exact
//! witness), so normal forms depend on the reduction strategy even though
//! every reduction is sound (the difference lies in the relation ideal).

use std::collections::HashMap;

use num::{One, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exact::{rank_of_rows, Int, Rat, RowSpace, SparseRow};
use crate::presentations::{Element, Gen, PresKind, Presentation, Word};

// ---------------------------------------------------------------------------
// Degree slices and graded dimensions
// ---------------------------------------------------------------------------

/// Indexing of the degree-`d` monomial slice of the tensor algebra on a
/// presentation's generators: words of length `d` in bijection with
/// `0..m^d` by big-endian digits in the generator order.
pub struct DegreeSlice<'a> {
    pres: &'a Presentation,
    degree: usize,
    width: usize,
}

impl<'a> DegreeSlice<'a> {
    pub fn new(pres: &'a Presentation, degree: usize, caps: &Caps) -> Result<Self> {
        let m = pres.generator_count();
        let mut width: usize = 1;
        for _ in 0..degree {
            width = width
                .checked_mul(m)
                .filter(|w| *w <= caps.max_columns)
                .ok_or_else(|| {
                    Error::cap("monomial slice columns", usize::MAX, caps.max_columns)
                })?;
        }
        caps.check_columns("monomial slice columns", width)?;
        Ok(DegreeSlice { pres, degree, width })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of monomials (`m^d`).
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn index_of(&self, w: &Word) -> Result<usize> {
        if w.len() != self.degree {
            return Err(Error::InvalidInput(format!(
                "word {w} does not have degree {}",
                self.degree
            )));
        }
        let m = self.pres.generator_count();
        let mut idx = 0usize;
        for g in w.letters() {
            let pos = self.pres.gen_position(g).ok_or_else(|| {
                Error::InvalidInput(format!("letter {g} is not a generator here"))
            })?;
            idx = idx * m + pos;
        }
        Ok(idx)
    }

    pub fn word_at(&self, mut idx: usize) -> Word {
        let m = self.pres.generator_count();
        let mut letters = vec![self.pres.generators()[0]; self.degree];
        for slot in letters.iter_mut().rev() {
            *slot = self.pres.generators()[idx % m];
            idx /= m;
        }
        Word::from_letters(letters)
    }

    /// Coefficient row of a homogeneous element in this slice.
    pub fn row_of(&self, e: &Element) -> Result<SparseRow> {
        let mut row: SparseRow = e
            .terms()
            .map(|(w, c)| Ok((self.index_of(w)?, c.clone())))
            .collect::<Result<_>>()?;
        row.sort_by_key(|(c, _)| *c);
        Ok(row)
    }
}

/// Rows spanning the degree-`d` slice of the two-sided relation ideal:
/// `x * rel * y` over all splits `|x| + 2 + |y| = d`, streamed without
/// materializing words.
fn ideal_rows(pres: &Presentation, d: usize) -> Vec<SparseRow> {
    let m = pres.generator_count();
    if d < 2 || m == 0 {
        return Vec::new();
    }
    // Precompute each relation as (two-letter index, coefficient) pairs.
    let rels: Vec<Vec<(usize, Rat)>> = pres
        .relations()
        .iter()
        .map(|rel| {
            rel.terms()
                .map(|(w, c)| {
                    let ls = w.letters();
                    let idx = pres.gen_position(&ls[0]).unwrap() * m
                        + pres.gen_position(&ls[1]).unwrap();
                    (idx, c.clone())
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for a in 0..=(d - 2) {
        let b = d - 2 - a;
        let left = m.pow(a as u32);
        let right = m.pow(b as u32);
        for x in 0..left {
            for rel in &rels {
                for y in 0..right {
                    let row: SparseRow = rel
                        .iter()
                        .map(|(idx, c)| ((x * m * m + idx) * right + y, c.clone()))
                        .collect();
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Dimension of the degree-`d` component of the quadratic algebra:
/// `m^d - rank{ x * rel * y }`.
pub fn graded_dimension(pres: &Presentation, d: usize, caps: &Caps) -> Result<usize> {
    let slice = DegreeSlice::new(pres, d, caps)?;
    if d < 2 {
        return Ok(slice.width());
    }
    let rows = ideal_rows(pres, d);
    let rank = rank_of_rows(slice.width(), rows);
    Ok(slice.width() - rank)
}

/// The degree-`d` relation-ideal slice as a queryable row space, for
/// membership certificates.
pub struct RelationSpan<'a> {
    slice: DegreeSlice<'a>,
    space: RowSpace,
}

impl<'a> RelationSpan<'a> {
    pub fn new(pres: &'a Presentation, d: usize, caps: &Caps) -> Result<Self> {
        let slice = DegreeSlice::new(pres, d, caps)?;
        let mut space = RowSpace::new(slice.width());
        for row in ideal_rows(pres, d) {
            space.insert(row);
        }
        Ok(RelationSpan { slice, space })
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    /// Does a homogeneous degree-`d` element lie in the ideal slice?
    pub fn contains(&self, e: &Element) -> Result<bool> {
        if e.is_zero() {
            return Ok(true);
        }
        if e.degree() != Some(self.slice.degree()) {
            return Err(Error::InvalidInput(format!(
                "element is not homogeneous of degree {}",
                self.slice.degree()
            )));
        }
        Ok(self.space.contains(self.slice.row_of(e)?))
    }
}

// ---------------------------------------------------------------------------
// Legal monomials and rewriting
// ---------------------------------------------------------------------------

/// Which forbidden-factor convention a rewriting system uses.  The two are
/// mirror images: a word is `Sec6`-legal exactly when its reversal is
/// `Pro1`-legal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Forbidden: `r(j,k)*r(i,j)` for `i<j<k`, and disjoint products with
    /// strictly decreasing pair order.
    Pro1,
    /// Forbidden: `r(i,j)*r(j,k)` for `i<j<k`, and disjoint products with
    /// strictly increasing pair order.
    Sec6,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Pro1 => "pro1",
            Convention::Sec6 => "sec6",
        }
    }
}

/// Which forbidden factor to rewrite first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Pseudo-random position choice from the given seed (deterministic).
    Random(u64),
}

fn pair_sites(g: &Gen) -> Result<(u8, u8)> {
    match g {
        Gen::R { i, j } if i < j => Ok((*i, *j)),
        other => Err(Error::InvalidInput(format!(
            "rewriting is defined on triangular generators, found {other}"
        ))),
    }
}

/// Is the two-letter factor `first * second` forbidden?
fn forbidden(convention: Convention, first: (u8, u8), second: (u8, u8)) -> bool {
    let disjoint = first.0 != second.0
        && first.0 != second.1
        && first.1 != second.0
        && first.1 != second.1;
    match convention {
        Convention::Pro1 => {
            // chain r(j,k)*r(i,j): the first letter starts where the second ends
            first.0 == second.1 || (disjoint && first > second)
        }
        Convention::Sec6 => {
            // chain r(i,j)*r(j,k): the first letter ends where the second starts
            first.1 == second.0 || (disjoint && first < second)
        }
    }
}

/// Replacement combination for a forbidden factor, derived from the
/// Yang-Baxter relation of the triple (chain case) or the disjoint
/// commutation relation (swap case).
fn replacement(convention: Convention, first: (u8, u8), second: (u8, u8)) -> Vec<(i64, [(u8, u8); 2])> {
    let disjoint = first.0 != second.0
        && first.0 != second.1
        && first.1 != second.0
        && first.1 != second.1;
    if disjoint {
        return vec![(1, [second, first])];
    }
    match convention {
        Convention::Pro1 => {
            // r(j,k)*r(i,j) with i<j<k
            let (j, k) = first;
            let (i, _) = second;
            let (ij, ik, jk) = ((i, j), (i, k), (j, k));
            vec![
                (1, [ij, ik]),
                (-1, [ik, ij]),
                (1, [ij, jk]),
                (1, [ik, jk]),
                (-1, [jk, ik]),
            ]
        }
        Convention::Sec6 => {
            // r(i,j)*r(j,k) with i<j<k
            let (i, j) = first;
            let (_, k) = second;
            let (ij, ik, jk) = ((i, j), (i, k), (j, k));
            vec![
                (1, [jk, ij]),
                (-1, [ij, ik]),
                (1, [ik, ij]),
                (-1, [ik, jk]),
                (1, [jk, ik]),
            ]
        }
    }
}

/// Rewriting engine to legal normal forms over the triangular algebra.
pub struct RewriteSystem {
    n: u8,
    convention: Convention,
    strategy: Strategy,
    memo: HashMap<Word, Element>,
    rng: u64,
}

impl RewriteSystem {
    pub fn new(n: u8, convention: Convention, strategy: Strategy) -> Self {
        let rng = match strategy {
            Strategy::Random(seed) => seed | 1,
            _ => 1,
        };
        RewriteSystem {
            n,
            convention,
            strategy,
            memo: HashMap::new(),
            rng,
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    fn next_random(&mut self) -> u64 {
        // xorshift64*; deterministic given the seed
        let mut x = self.rng;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.rng = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Positions `s` where the factor at `(s, s+1)` is forbidden.
    fn forbidden_positions(&self, sites: &[(u8, u8)]) -> Vec<usize> {
        (0..sites.len().saturating_sub(1))
            .filter(|&s| forbidden(self.convention, sites[s], sites[s + 1]))
            .collect()
    }

    pub fn is_legal_word(&self, w: &Word) -> Result<bool> {
        let sites = word_sites(w, self.n)?;
        Ok(self.forbidden_positions(&sites).is_empty())
    }

    pub fn is_legal(&self, e: &Element) -> Result<bool> {
        for (w, _) in e.terms() {
            if !self.is_legal_word(w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The termination measure: (stretch, position-weighted pair rank).
    /// Every single rewrite step strictly increases it on every produced
    /// word; `Pro1` weights positions from the left, `Sec6` from the right.
    fn measure(&self, sites: &[(u8, u8)]) -> (u64, u64) {
        let len = sites.len() as u64;
        let mut stretch = 0u64;
        let mut weight = 0u64;
        for (s, &(i, j)) in sites.iter().enumerate() {
            stretch += (j - i) as u64;
            let rank = pair_rank(self.n, i, j);
            let pos = match self.convention {
                Convention::Pro1 => s as u64 + 1,
                Convention::Sec6 => len - s as u64,
            };
            weight += pos * rank;
        }
        (stretch, weight)
    }

    /// Reduce an element to an equivalent combination of legal words.
    pub fn normal_form(&mut self, e: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in e.terms() {
            let nf = self.normal_form_word(w)?;
            for (word, v) in nf.terms() {
                out.add_term(c * v, word.clone());
            }
        }
        Ok(out)
    }

    fn normal_form_word(&mut self, w: &Word) -> Result<Element> {
        if let Some(hit) = self.memo.get(w) {
            return Ok(hit.clone());
        }
        let sites = word_sites(w, self.n)?;
        let positions = self.forbidden_positions(&sites);
        if positions.is_empty() {
            let res = Element::from_word(w.clone());
            self.memo.insert(w.clone(), res.clone());
            return Ok(res);
        }
        let s = match self.strategy {
            Strategy::Leftmost => positions[0],
            Strategy::Rightmost => *positions.last().unwrap(),
            Strategy::Random(_) => {
                let r = self.next_random() as usize;
                positions[r % positions.len()]
            }
        };
        let before = self.measure(&sites);
        let mut result = Element::zero();
        for (coeff, window) in replacement(self.convention, sites[s], sites[s + 1]) {
            let mut new_sites = sites.clone();
            new_sites[s] = window[0];
            new_sites[s + 1] = window[1];
            assert!(
                self.measure(&new_sites) > before,
                "rewrite step failed to increase the termination measure"
            );
            let new_word = Word::from_letters(
                new_sites.iter().map(|&(i, j)| Gen::R { i, j }).collect(),
            );
            let reduced = self.normal_form_word(&new_word)?;
            for (word, v) in reduced.terms() {
                result.add_term(Rat::from_integer(Int::from(coeff)) * v, word.clone());
            }
        }
        self.memo.insert(w.clone(), result.clone());
        Ok(result)
    }
}

fn word_sites(w: &Word, n: u8) -> Result<Vec<(u8, u8)>> {
    w.letters()
        .iter()
        .map(|g| {
            let (i, j) = pair_sites(g)?;
            if j > n {
                return Err(Error::InvalidInput(format!(
                    "letter r({i},{j}) is out of range for n = {n}"
                )));
            }
            Ok((i, j))
        })
        .collect()
}

/// 1-based lexicographic rank of the pair `(i,j)` among all `i<j` pairs;
/// satisfies rank(i,j) < rank(j,k) whenever `i<j<k`.
fn pair_rank(n: u8, i: u8, j: u8) -> u64 {
    let (n, i, j) = (n as u64, i as u64, j as u64);
    // pairs before row i, plus the offset within row i
    (i - 1) * n - i * (i - 1) / 2 + (j - i)
}

fn tr_pairs(n: u8) -> Vec<(u8, u8)> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            v.push((i, j));
        }
    }
    v
}

/// Number of length-`d` legal words, by transfer-matrix recursion.
pub fn count_legal(n: u8, d: usize, convention: Convention) -> Int {
    let pairs = tr_pairs(n);
    if d == 0 {
        return Int::one();
    }
    let mut counts = vec![Int::one(); pairs.len()];
    for _ in 1..d {
        let mut next = vec![Int::zero(); pairs.len()];
        for (f, first) in pairs.iter().enumerate() {
            let mut acc = Int::zero();
            for (s, second) in pairs.iter().enumerate() {
                if !forbidden(convention, *first, *second) {
                    acc += &counts[s];
                }
            }
            next[f] = acc;
        }
        counts = next;
    }
    counts.into_iter().sum()
}

/// All length-`d` legal words in lexicographic order.
pub fn enumerate_legal(n: u8, d: usize, convention: Convention, caps: &Caps) -> Result<Vec<Word>> {
    let total = count_legal(n, d, convention);
    let as_usize = usize::try_from(&total)
        .map_err(|_| Error::cap("legal-word enumeration", usize::MAX, caps.max_enumeration))?;
    caps.check_enumeration("legal-word enumeration", as_usize)?;
    let pairs = tr_pairs(n);
    let mut out = Vec::with_capacity(as_usize);
    let mut stack: Vec<(u8, u8)> = Vec::with_capacity(d);
    fn dfs(
        pairs: &[(u8, u8)],
        convention: Convention,
        d: usize,
        stack: &mut Vec<(u8, u8)>,
        out: &mut Vec<Word>,
    ) {
        if stack.len() == d {
            out.push(Word::from_letters(
                stack.iter().map(|&(i, j)| Gen::R { i, j }).collect(),
            ));
            return;
        }
        for &p in pairs {
            if let Some(&last) = stack.last() {
                if forbidden(convention, last, p) {
                    continue;
                }
            }
            stack.push(p);
            dfs(pairs, convention, d, stack, out);
            stack.pop();
        }
    }
    dfs(&pairs, convention, d, &mut stack, &mut out);
    debug_assert_eq!(out.len(), as_usize);
    Ok(out)
}

/// Guard for normal-form inputs: the rewriter is only valid over the
/// triangular presentation (no analogous basis is available otherwise).
pub fn require_triangular(pres: &Presentation) -> Result<()> {
    if pres.kind != PresKind::Tr {
        return Err(Error::InvalidInput(format!(
            "normal forms are only defined over the tr algebra, not {}",
            pres.kind
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_element;

    fn tr(n: u8) -> Presentation {
        Presentation::new(PresKind::Tr, n)
    }

    fn parse(n: u8, s: &str) -> Element {
        parse_element(s, PresKind::Tr, n).unwrap()
    }

    #[test]
    fn graded_dimension_examples() {
        let caps = Caps::default();
        assert_eq!(graded_dimension(&tr(3), 2, &caps).unwrap(), 8);
        assert_eq!(graded_dimension(&tr(4), 3, &caps).unwrap(), 133);
        let qtr2 = Presentation::new(PresKind::Qtr, 2);
        assert_eq!(graded_dimension(&qtr2, 3, &caps).unwrap(), 8);
        assert_eq!(graded_dimension(&tr(3), 0, &caps).unwrap(), 1);
        assert_eq!(graded_dimension(&tr(3), 1, &caps).unwrap(), 3);
    }

    #[test]
    fn graded_dimension_respects_caps() {
        let caps = Caps {
            max_columns: 100,
            ..Caps::default()
        };
        let err = graded_dimension(&tr(4), 3, &caps).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn count_legal_examples() {
        assert_eq!(count_legal(3, 2, Convention::Pro1), Int::from(8));
        assert_eq!(count_legal(4, 2, Convention::Pro1), Int::from(29));
        assert_eq!(count_legal(5, 0, Convention::Pro1), Int::one());
        assert_eq!(count_legal(5, 0, Convention::Sec6), Int::one());
    }

    #[test]
    fn conventions_count_equally() {
        for n in 2..=5u8 {
            for d in 0..=4usize {
                assert_eq!(
                    count_legal(n, d, Convention::Pro1),
                    count_legal(n, d, Convention::Sec6),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn legal_words_are_reversals_of_each_other() {
        let caps = Caps::default();
        for d in 0..=3usize {
            let pro: Vec<Word> = enumerate_legal(4, d, Convention::Pro1, &caps).unwrap();
            let mut reversed: Vec<Word> = enumerate_legal(4, d, Convention::Sec6, &caps)
                .unwrap()
                .into_iter()
                .map(|w| Word::from_letters(w.letters().iter().rev().copied().collect()))
                .collect();
            reversed.sort();
            assert_eq!(pro, reversed, "d = {d}");
        }
    }

    #[test]
    fn enumerate_legal_examples() {
        let caps = Caps::default();
        let words = enumerate_legal(2, 3, Convention::Pro1, &caps).unwrap();
        assert_eq!(words.len(), 1);
        assert_eq!(words[0].to_string(), "r(1,2)*r(1,2)*r(1,2)");
        let deg1 = enumerate_legal(3, 1, Convention::Pro1, &caps).unwrap();
        let names: Vec<String> = deg1.iter().map(Word::to_string).collect();
        assert_eq!(names, vec!["r(1,2)", "r(1,3)", "r(2,3)"]);
        // The single forbidden degree-2 factor in each convention at n=3.
        let sec = enumerate_legal(3, 2, Convention::Sec6, &caps).unwrap();
        assert_eq!(sec.len(), 8);
        assert!(!sec
            .iter()
            .any(|w| w.to_string() == "r(1,2)*r(2,3)"));
        let pro = enumerate_legal(3, 2, Convention::Pro1, &caps).unwrap();
        assert_eq!(pro.len(), 8);
        assert!(!pro
            .iter()
            .any(|w| w.to_string() == "r(2,3)*r(1,2)"));
    }

    #[test]
    fn enumeration_cap_fails_safe() {
        let caps = Caps {
            max_enumeration: 5,
            ..Caps::default()
        };
        assert!(matches!(
            enumerate_legal(3, 2, Convention::Pro1, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn normal_form_worked_examples() {
        let mut rs = RewriteSystem::new(3, Convention::Pro1, Strategy::Leftmost);
        // Already legal: identity.
        let legal = parse(3, "r(1,2)*r(1,3)");
        assert_eq!(rs.normal_form(&legal).unwrap(), legal);
        // Disjoint commutation.
        let mut rs4 = RewriteSystem::new(4, Convention::Pro1, Strategy::Leftmost);
        let swapped = rs4.normal_form(&parse(4, "r(3,4)*r(1,2)")).unwrap();
        assert_eq!(swapped, parse(4, "r(1,2)*r(3,4)"));
        // The five-term chain expansion.
        let nf = rs.normal_form(&parse(3, "r(2,3)*r(1,2)")).unwrap();
        let expected = parse(
            3,
            "r(1,2)*r(2,3) + r(1,2)*r(1,3) - r(1,3)*r(1,2) + r(1,3)*r(2,3) - r(2,3)*r(1,3)",
        );
        assert_eq!(nf, expected);
        assert!(rs.is_legal(&nf).unwrap());
    }

    #[test]
    fn normal_form_idempotent_and_sound() {
        let caps = Caps::default();
        let pres = tr(3);
        let mut rs = RewriteSystem::new(3, Convention::Pro1, Strategy::Leftmost);
        let e = parse(3, "r(2,3)*r(1,2) - 2 r(1,3)*r(1,2)");
        let nf = rs.normal_form(&e).unwrap();
        assert_eq!(rs.normal_form(&nf).unwrap(), nf);
        // e - NF(e) lies in the degree-2 relation ideal slice.
        let span = RelationSpan::new(&pres, 2, &caps).unwrap();
        assert!(span.contains(&e.sub(&nf)).unwrap());
        assert!(!span.contains(&e).unwrap(), "e itself is not in the ideal");
    }

    #[test]
    fn strategies_agree_on_three_sites() {
        // With three sites the legal words are a basis, so every reduction
        // path ends at the same combination.
        let caps = Caps::default();
        let pres = tr(3);
        for d in 2..=4usize {
            let slice = DegreeSlice::new(&pres, d, &caps).unwrap();
            let mut left = RewriteSystem::new(3, Convention::Pro1, Strategy::Leftmost);
            let mut right = RewriteSystem::new(3, Convention::Pro1, Strategy::Rightmost);
            let mut rand = RewriteSystem::new(3, Convention::Pro1, Strategy::Random(7));
            for idx in 0..slice.width() {
                let e = Element::from_word(slice.word_at(idx));
                let a = left.normal_form(&e).unwrap();
                assert_eq!(a, right.normal_form(&e).unwrap());
                assert_eq!(a, rand.normal_form(&e).unwrap());
                assert!(left.is_legal(&a).unwrap());
            }
        }
    }

    #[test]
    fn quadratic_rules_are_not_confluent_beyond_three_sites() {
        // Exact witness that with four sites the two-letter rules admit
        // distinct legal normal forms for the same element.  Both results
        // are sound (their difference lies in the relation ideal), so the
        // legal cubic words are linearly dependent: there is one more legal
        // word than the quotient dimension.
        let caps = Caps::default();
        let pres = tr(4);
        let e = Element::from_word(Word::from_letters(vec![
            Gen::R { i: 3, j: 4 },
            Gen::R { i: 2, j: 3 },
            Gen::R { i: 1, j: 2 },
        ]));
        let mut left = RewriteSystem::new(4, Convention::Pro1, Strategy::Leftmost);
        let mut right = RewriteSystem::new(4, Convention::Pro1, Strategy::Rightmost);
        let a = left.normal_form(&e).unwrap();
        let b = right.normal_form(&e).unwrap();
        assert!(left.is_legal(&a).unwrap());
        assert!(left.is_legal(&b).unwrap());
        assert_ne!(a, b, "distinct legal representatives of one class");
        let span = RelationSpan::new(&pres, 3, &caps).unwrap();
        assert!(span.contains(&e.sub(&a)).unwrap());
        assert!(span.contains(&e.sub(&b)).unwrap());
        let diff = a.sub(&b);
        assert!(!diff.is_zero());
        assert!(span.contains(&diff).unwrap());
        // Count vs dimension: spanning with exactly one dependence.
        assert_eq!(count_legal(4, 3, Convention::Pro1), Int::from(134));
        assert_eq!(graded_dimension(&pres, 3, &caps).unwrap(), 133);
    }

    #[test]
    fn normal_form_counts_match_legal_basis() {
        // Reducing every degree-d monomial yields combinations of legal
        // words only; the span of the normal forms has the legal count.
        let caps = Caps::default();
        let n = 3;
        let d = 3;
        let mut rs = RewriteSystem::new(n, Convention::Pro1, Strategy::Leftmost);
        let legal = enumerate_legal(n, d, Convention::Pro1, &caps).unwrap();
        let pres = tr(n);
        let slice = DegreeSlice::new(&pres, d, &caps).unwrap();
        let mut space = RowSpace::new(slice.width());
        for idx in 0..slice.width() {
            let w = slice.word_at(idx);
            let nf = rs.normal_form(&Element::from_word(w)).unwrap();
            assert!(rs.is_legal(&nf).unwrap());
            space.insert(slice.row_of(&nf).unwrap());
        }
        assert_eq!(space.rank(), legal.len());
        assert_eq!(
            Int::from(legal.len()),
            count_legal(n, d, Convention::Pro1)
        );
    }

    #[test]
    fn rewriter_rejects_foreign_letters() {
        let mut rs = RewriteSystem::new(3, Convention::Pro1, Strategy::Leftmost);
        let qtr = Presentation::new(PresKind::Qtr, 3);
        let e = qtr.parse_element("r(2,1)").unwrap();
        assert!(rs.normal_form(&e).is_err());
        assert!(require_triangular(&qtr).is_err());
        assert!(require_triangular(&tr(3)).is_ok());
    }

    #[test]
    fn pair_rank_is_chain_monotone() {
        for n in 2..=6u8 {
            let pairs = tr_pairs(n);
            for (a, &(i, j)) in pairs.iter().enumerate() {
                assert_eq!(pair_rank(n, i, j), a as u64 + 1);
                for &(k, l) in &pairs {
                    if j == k {
                        assert!(pair_rank(n, i, j) < pair_rank(n, k, l));
                    }
                }
            }
        }
    }
}

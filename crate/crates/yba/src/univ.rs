//! Labeling of legal words by placement data.
//!
//! A length-`N` word in the letters `r(i,j)` (with `i < j`) maps to a
//! triple `(k, l, sigma)`: each letter deposits one left marker in slot
//! `i` and one right marker in slot `j`; reading slots `1..n` and, inside
//! a slot, the original word order, the left markers are renamed `1..N`.
//! Then `k_f` counts left markers in slots `≤ f`, `l_f` counts right
//! markers in slots `≤ f`, and `sigma` lists the renamed labels of the
//! right markers in their own slot-then-word reading order.
//!
//! On three sites the labeling is injective on the words avoiding the
//! suffix-convention forbidden factors (verified exhaustively at desk
//! scale).  On four or more sites it is **not**: distinct legal words can
//! share a label — the smallest pair is `r(1,4)·r(3,4)·r(2,3)` and
//! `r(2,3)·r(1,4)·r(3,4)` — and in every measured case the number of
//! distinct labels equals the graded dimension of the algebra rather
//! than the (larger) legal-word count.  The exhaustive reports below
//! surface these counts instead of assuming injectivity.  Prepending a
//! letter always acts on labels by the head-marker insertion
//! [`rho_insert`], and [`beta_peel`] undoes it; but the label alone does
//! not always determine which letter was prepended, so the first-letter
//! label classes can overlap from four sites on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ncalg::{enumerate_legal, Convention, RewriteSystem, Strategy};
use crate::presentations::{Gen, Word};

/// The label of a word: two non-decreasing count vectors ending at the
/// word length, and a permutation in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnivLabel {
    /// `k[f-1]` = number of left markers in slots `1..=f`; `k[n-1] = N`.
    k: Vec<usize>,
    /// `l[f-1]` = number of right markers in slots `1..=f`; `l[n-1] = N`.
    l: Vec<usize>,
    /// One-line notation, 1-based values: `sigma[p-1]` is the renamed
    /// label of the `p`-th right marker.
    sigma: Vec<usize>,
}

impl UnivLabel {
    pub fn new(k: Vec<usize>, l: Vec<usize>, sigma: Vec<usize>) -> Result<Self> {
        let n = k.len();
        let cap = sigma.len();
        if l.len() != n || n == 0 {
            return Err(Error::InvalidInput("k and l must have equal positive length".into()));
        }
        let monotone = |v: &[usize]| {
            v.windows(2).all(|w| w[0] <= w[1]) && v.last() == Some(&cap)
        };
        if !monotone(&k) || !monotone(&l) {
            return Err(Error::InvalidInput(
                "count vectors must be non-decreasing and end at the degree".into(),
            ));
        }
        let seen: BTreeSet<usize> = sigma.iter().copied().collect();
        if seen.len() != cap || sigma.iter().any(|&v| v == 0 || v > cap) {
            return Err(Error::InvalidInput("sigma must be a permutation of 1..=N".into()));
        }
        Ok(UnivLabel { k, l, sigma })
    }

    pub fn degree(&self) -> usize {
        self.sigma.len()
    }

    pub fn sites(&self) -> usize {
        self.k.len()
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// Count of left markers in slot `f` (`k_f - k_{f-1}`).
    fn left_count(&self, f: u8) -> usize {
        let f = f as usize;
        self.k[f - 1] - if f >= 2 { self.k[f - 2] } else { 0 }
    }

    fn right_count(&self, f: u8) -> usize {
        let f = f as usize;
        self.l[f - 1] - if f >= 2 { self.l[f - 2] } else { 0 }
    }

    /// Smallest label in slot `f`'s left-marker range (`k_{f-1} + 1`).
    fn left_start(&self, f: u8) -> usize {
        let f = f as usize;
        if f >= 2 {
            self.k[f - 2] + 1
        } else {
            1
        }
    }

    fn right_start(&self, f: u8) -> usize {
        let f = f as usize;
        if f >= 2 {
            self.l[f - 2] + 1
        } else {
            1
        }
    }
}

impl fmt::Display for UnivLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        };
        write!(f, "k=({}) l=({}) sigma=({})", join(&self.k), join(&self.l), join(&self.sigma))
    }
}

/// Extract the `(i, j)` site pairs of a word over `r(i,j)` letters,
/// validating the letter kind and the site range.
fn word_sites(w: &Word, n: u8) -> Result<Vec<(u8, u8)>> {
    w.letters()
        .iter()
        .map(|g| match *g {
            Gen::R { i, j } if i < j && j <= n && i >= 1 => Ok((i, j)),
            other => Err(Error::InvalidInput(format!(
                "letter {other} is not a triangular generator within {n} sites"
            ))),
        })
        .collect()
}

/// Label a word that is legal under the suffix convention.  Illegal words
/// are rejected; legality is the only requirement — the labeling itself
/// is defined for any word.
pub fn alpha(w: &Word, n: u8) -> Result<UnivLabel> {
    let sites = word_sites(w, n)?;
    let rewriter = RewriteSystem::new(n, Convention::Sec6, Strategy::Leftmost);
    if !rewriter.is_legal_word(w)? {
        return Err(Error::InvalidInput(format!(
            "word {w} contains a forbidden factor of the suffix convention"
        )));
    }
    Ok(label_of_sites(&sites, n))
}

/// The raw labeling, defined for any site sequence.
fn label_of_sites(sites: &[(u8, u8)], n: u8) -> UnivLabel {
    let big_n = sites.len();
    // Rename letters by (left slot, word position): the letter at word
    // position `pos` with left slot `i` gets label `rank+1` in that
    // ordering.
    let mut by_left: Vec<(u8, usize)> = sites.iter().enumerate().map(|(p, s)| (s.0, p)).collect();
    by_left.sort();
    let mut label = vec![0usize; big_n];
    for (rank, &(_, pos)) in by_left.iter().enumerate() {
        label[pos] = rank + 1;
    }
    let mut k = vec![0usize; n as usize];
    let mut l = vec![0usize; n as usize];
    for &(i, j) in sites {
        k[i as usize - 1] += 1;
        l[j as usize - 1] += 1;
    }
    for f in 1..n as usize {
        k[f] += k[f - 1];
        l[f] += l[f - 1];
    }
    let mut by_right: Vec<(u8, usize)> = sites.iter().enumerate().map(|(p, s)| (s.1, p)).collect();
    by_right.sort();
    let sigma: Vec<usize> = by_right.iter().map(|&(_, pos)| label[pos]).collect();
    UnivLabel { k, l, sigma }
}

/// Diagnostic: in every slot, do all left markers precede all right
/// markers in word order?  The labeling does not require this — legal
/// words violating it exist (see the module tests) — but words for which
/// it holds map to well-ordered placements directly.
pub fn ab_condition_holds(w: &Word, n: u8) -> Result<bool> {
    let sites = word_sites(w, n)?;
    for (beta, s) in sites.iter().enumerate() {
        let slot = s.1;
        if sites.iter().skip(beta + 1).any(|t| t.0 == slot) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The label-level counterpart of prepending `r(i,j)`: insert a fresh
/// left marker at the head of slot `i` and a fresh right marker at the
/// head of slot `j`, matched to each other.
pub fn rho_insert(i: u8, j: u8, label: &UnivLabel) -> Result<UnivLabel> {
    let n = label.sites() as u8;
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::InvalidInput(format!(
            "site pair ({i},{j}) is out of range for {n} slots"
        )));
    }
    let e = label.left_start(i);
    let f_pos = label.right_start(j);
    let k = label
        .k
        .iter()
        .enumerate()
        .map(|(f, &v)| v + usize::from(f + 1 >= i as usize))
        .collect();
    let l = label
        .l
        .iter()
        .enumerate()
        .map(|(f, &v)| v + usize::from(f + 1 >= j as usize))
        .collect();
    let mut sigma: Vec<usize> =
        label.sigma.iter().map(|&v| v + usize::from(v >= e)).collect();
    sigma.insert(f_pos - 1, e);
    UnivLabel::new(k, l, sigma)
}

/// Inverse of [`rho_insert`]: peel the head markers of slots `i` and `j`
/// off a label.  The membership conditions — slot `i` has a left marker,
/// slot `j` has a right marker, and those two head markers are matched to
/// each other — are checked exactly; violations are errors.  They are
/// necessary and together make the roundtrip with [`rho_insert`] exact,
/// but they do not always single out one `(i,j)` per label.
pub fn beta_peel(i: u8, j: u8, label: &UnivLabel) -> Result<UnivLabel> {
    let n = label.sites() as u8;
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::InvalidInput(format!(
            "site pair ({i},{j}) is out of range for {n} slots"
        )));
    }
    let fail = |what: &str| {
        Err(Error::InvalidInput(format!(
            "label is not an insertion at ({i},{j}): {what}"
        )))
    };
    if label.left_count(i) == 0 {
        return fail("slot i has no left marker");
    }
    if label.right_count(j) == 0 {
        return fail("slot j has no right marker");
    }
    let e = label.left_start(i);
    let f_pos = label.right_start(j);
    if label.sigma[f_pos - 1] != e {
        return fail("the head markers of slots i and j are not matched");
    }
    let k = label
        .k
        .iter()
        .enumerate()
        .map(|(f, &v)| v - usize::from(f + 1 >= i as usize))
        .collect();
    let l = label
        .l
        .iter()
        .enumerate()
        .map(|(f, &v)| v - usize::from(f + 1 >= j as usize))
        .collect();
    let mut sigma = label.sigma.clone();
    sigma.remove(f_pos - 1);
    let sigma = sigma.into_iter().map(|v| v - usize::from(v > e)).collect();
    UnivLabel::new(k, l, sigma)
}

/// Exhaustive injectivity report for the labeling on the legal words of
/// one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub word_count: usize,
    pub distinct_labels: usize,
    /// How many legal words violate the left-before-right diagnostic;
    /// informational, not a defect of the labeling.
    pub ab_failures: usize,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.word_count == self.distinct_labels
    }
}

/// Map every legal word of length `big_n` through the labeling and count
/// distinct labels.
pub fn check_injectivity(n: u8, big_n: usize, caps: &Caps) -> Result<InjectivityReport> {
    let words = enumerate_legal(n, big_n, Convention::Sec6, caps)?;
    let mut labels = BTreeSet::new();
    let mut ab_failures = 0usize;
    for w in &words {
        labels.insert(alpha(w, n)?);
        if !ab_condition_holds(w, n)? {
            ab_failures += 1;
        }
    }
    Ok(InjectivityReport {
        word_count: words.len(),
        distinct_labels: labels.len(),
        ab_failures,
    })
}

/// Report on the first-letter decomposition of the legal words of one
/// length: class sizes, pairwise disjointness of the label classes, and
/// exactness of the insertion/peeling recursion on every word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointnessReport {
    /// `(first letter, class size)`, classes ordered by letter.
    pub class_sizes: Vec<((u8, u8), usize)>,
    pub pairwise_disjoint: bool,
    /// Every `w = r(i,j)·x` satisfied both
    /// `alpha(w) = rho_insert(i, j, alpha(x))` and
    /// `beta_peel(i, j, alpha(w)) = alpha(x)`.
    pub peeling_consistent: bool,
}

impl DisjointnessReport {
    pub fn holds(&self) -> bool {
        self.pairwise_disjoint && self.peeling_consistent
    }
}

/// Decompose the legal words of length `big_n ≥ 1` by first letter and
/// verify that the labeling separates the classes and commutes with
/// peeling the first letter.
pub fn check_rho_disjointness(n: u8, big_n: usize, caps: &Caps) -> Result<DisjointnessReport> {
    if big_n == 0 {
        return Err(Error::InvalidInput(
            "class decomposition needs words of positive length".into(),
        ));
    }
    let words = enumerate_legal(n, big_n, Convention::Sec6, caps)?;
    let mut classes: BTreeMap<(u8, u8), BTreeSet<UnivLabel>> = BTreeMap::new();
    let mut peeling_consistent = true;
    for w in &words {
        let letters = w.letters();
        let (i, j) = match letters[0] {
            Gen::R { i, j } => (i, j),
            _ => unreachable!("legal enumeration yields triangular letters"),
        };
        let tail = Word::from_letters(letters[1..].to_vec());
        let whole = alpha(w, n)?;
        let rest = alpha(&tail, n)?;
        if rho_insert(i, j, &rest)? != whole {
            peeling_consistent = false;
        }
        match beta_peel(i, j, &whole) {
            Ok(peeled) if peeled == rest => {}
            _ => peeling_consistent = false,
        }
        classes.entry((i, j)).or_default().insert(whole);
    }
    let keys: Vec<(u8, u8)> = classes.keys().copied().collect();
    let mut pairwise_disjoint = true;
    for (a, ka) in keys.iter().enumerate() {
        for kb in keys.iter().skip(a + 1) {
            if !classes[ka].is_disjoint(&classes[kb]) {
                pairwise_disjoint = false;
            }
        }
    }
    Ok(DisjointnessReport {
        class_sizes: classes.iter().map(|(key, set)| (*key, set.len())).collect(),
        pairwise_disjoint,
        peeling_consistent,
    })
}

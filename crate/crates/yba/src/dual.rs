//! Quadratic duals of the triangular universes.
//!
//! The dual of the triangular algebra is a supercommutative algebra on odd
//! generators `a(i,j)` (antisymmetric in the index pair) subject to the
//! chain relations `a(i,j)a(j,k) = a(j,k)a(k,i)`.  The dual of the
//! quasitriangular algebra has two families of odd generators, `b(i,j)`
//! (symmetric pair) and `a(i,j)` (antisymmetric pair), and comes in two
//! flavours: the plain dual, whose mixed chain relation sets the `a`-chain
//! equal to a cyclic `b`-circuit, and the graded variant in which the two
//! sides vanish separately.
//!
//! The module provides closed-form combinatorial bases for both duals
//! (products of star monomials with disjoint supports for the triangular
//! side; partition-indexed products of no-broken-circuit factors and star
//! `a`-factors for the quasitriangular side), independent dimension counts
//! through the generic rank engine, and an exact orthogonality check that
//! pairs each dual relation space against the primal one inside the full
//! tensor square.

use std::collections::BTreeSet;
use std::fmt;

use num::{One, Zero};

use crate::caps::Caps;
use crate::combinat::set_partitions;
use crate::error::{Error, Result};
use crate::exact::{Int, Rat, RowSpace, SparseRow};
use crate::ncalg::graded_dimension;
use crate::presentations::{Element, Gen, GenMap, PresKind, Presentation, Word};
use crate::series::factorial;

/// A signed square-free monomial in the odd dual generators.  Letters are
/// kept in the canonical global order (all `b` letters before all `a`
/// letters, each family ordered by index pair), and the sign records the
/// parity of the permutation that sorted the original factor sequence;
/// every generator is odd, so each transposition flips the sign.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualMonomial {
    letters: Vec<Gen>,
    negative: bool,
}

impl DualMonomial {
    /// The empty product.
    pub fn unit() -> Self {
        DualMonomial { letters: Vec::new(), negative: false }
    }

    /// Sort a factor sequence into canonical order, tracking the sign.
    /// Returns `None` when a letter repeats (odd squares vanish).
    pub fn from_letters(letters: &[Gen]) -> Option<Self> {
        let mut sorted = letters.to_vec();
        // Insertion sort, counting inversions exactly.
        let mut inversions = 0usize;
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                inversions += 1;
                j -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(DualMonomial { letters: sorted, negative: inversions % 2 == 1 })
    }

    /// Product of two monomials, `None` when a letter repeats.
    pub fn product(&self, other: &DualMonomial) -> Option<Self> {
        let mut all = self.letters.clone();
        all.extend_from_slice(&other.letters);
        let mut m = DualMonomial::from_letters(&all)?;
        m.negative ^= self.negative ^ other.negative;
        Some(m)
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    /// Number of `a` letters.
    pub fn a_degree(&self) -> usize {
        self.letters.iter().filter(|g| matches!(g, Gen::A { .. })).count()
    }

    /// Number of `b` letters.
    pub fn b_degree(&self) -> usize {
        self.letters.iter().filter(|g| matches!(g, Gen::B { .. })).count()
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// The monomial as a one-term element of the free algebra model.
    pub fn to_element(&self) -> Element {
        let mut e = Element::zero();
        let c = if self.negative { -Rat::one() } else { Rat::one() };
        e.add_term(c, Word::from_letters(self.letters.clone()));
        e
    }
}

impl fmt::Display for DualMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(Gen::to_string).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A two-step set partition of `{1..n}`: outer blocks, each refined by an
/// inner partition.  Canonical form sorts every block ascending, inner
/// blocks by minimum, and outer blocks by their overall minimum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwoStepPartition {
    /// `blocks[p]` lists the inner blocks of outer block `p`.
    blocks: Vec<Vec<Vec<u8>>>,
}

impl TwoStepPartition {
    pub fn new(mut blocks: Vec<Vec<Vec<u8>>>) -> Self {
        for outer in &mut blocks {
            for inner in outer.iter_mut() {
                inner.sort_unstable();
            }
            outer.sort_by_key(|inner| inner[0]);
        }
        blocks.sort_by_key(|outer| outer[0][0]);
        TwoStepPartition { blocks }
    }

    /// Outer blocks, each given as its list of inner blocks.
    pub fn blocks(&self) -> &[Vec<Vec<u8>>] {
        &self.blocks
    }

    pub fn outer_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn inner_count(&self) -> usize {
        self.blocks.iter().map(|outer| outer.len()).sum()
    }

    fn site_count(&self) -> usize {
        self.blocks.iter().flatten().map(|inner| inner.len()).sum()
    }

    /// Total degree of the component this partition labels:
    /// sites minus outer blocks.
    pub fn degree(&self) -> usize {
        self.site_count() - self.outer_count()
    }

    /// Number of `b` letters in each labelled basis element:
    /// sites minus inner blocks.
    pub fn b_degree(&self) -> usize {
        self.site_count() - self.inner_count()
    }

    /// Number of basis elements labelled by this partition:
    /// the product of `(|inner| - 1)!` over all inner blocks.
    pub fn basis_count(&self) -> Int {
        let mut c = Int::from(1);
        for inner in self.blocks.iter().flatten() {
            c *= factorial(inner.len() - 1);
        }
        c
    }

    /// Every two-step partition of `{1..n}`.
    pub fn enumerate(n: u8) -> Vec<TwoStepPartition> {
        let items: Vec<usize> = (1..=n as usize).collect();
        let mut out = Vec::new();
        for outer in set_partitions(&items) {
            // Refine each outer block independently; walk the cartesian
            // product of the per-block refinement choices.
            let choices: Vec<Vec<Vec<Vec<usize>>>> =
                outer.iter().map(|block| set_partitions(block)).collect();
            let mut pick = vec![0usize; choices.len()];
            loop {
                let blocks: Vec<Vec<Vec<u8>>> = pick
                    .iter()
                    .zip(&choices)
                    .map(|(&c, opts)| {
                        opts[c]
                            .iter()
                            .map(|inner| inner.iter().map(|&v| v as u8).collect())
                            .collect()
                    })
                    .collect();
                out.push(TwoStepPartition::new(blocks));
                // Odometer increment.
                let mut p = 0;
                loop {
                    if p == pick.len() {
                        break;
                    }
                    pick[p] += 1;
                    if pick[p] < choices[p].len() {
                        break;
                    }
                    pick[p] = 0;
                    p += 1;
                }
                if p == pick.len() {
                    break;
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for TwoStepPartition {
    /// Example: `{1 3|2},{4}` — outer blocks in braces, inner blocks
    /// separated by `|`, sites by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let outer: Vec<String> = self
            .blocks
            .iter()
            .map(|blocks| {
                let inner: Vec<String> = blocks
                    .iter()
                    .map(|b| {
                        b.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
                    })
                    .collect();
                format!("{{{}}}", inner.join("|"))
            })
            .collect();
        write!(f, "{}", outer.join(","))
    }
}

fn gen_a(i: u8, j: u8) -> Gen {
    assert!(i < j);
    Gen::A { i, j }
}

fn gen_b(i: u8, j: u8) -> Gen {
    assert!(i < j);
    Gen::B { i, j }
}

/// `a(i,j)` for arbitrary distinct indices, folded to the stored `i < j`
/// letter with the antisymmetry sign.
fn elem_a(i: u8, j: u8) -> Element {
    if i < j {
        Element::from_gen(gen_a(i, j))
    } else {
        Element::from_gen(gen_a(j, i)).neg()
    }
}

/// `b(i,j)` for arbitrary distinct indices (symmetric fold).
fn elem_b(i: u8, j: u8) -> Element {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    Element::from_gen(gen_b(lo, hi))
}

/// The star monomial on a support `{i1 < i2 < … < im}`:
/// `a(i1,i2)*a(i1,i3)*…*a(i1,im)`, of degree `m - 1`.
pub fn star_monomial(support: &[u8]) -> DualMonomial {
    assert!(!support.is_empty(), "support must be nonempty");
    assert!(support.windows(2).all(|w| w[0] < w[1]), "support must be sorted");
    let root = support[0];
    let letters: Vec<Gen> = support[1..].iter().map(|&v| gen_a(root, v)).collect();
    DualMonomial::from_letters(&letters).expect("distinct letters")
}

/// Basis of the triangular dual listed by degree: index `k` holds all
/// products of star monomials with pairwise disjoint supports and total
/// degree `k`.  Degree-`k` count is the Stirling partition number of
/// `{1..n}` into `n - k` blocks.
pub fn a_basis(n: u8) -> Vec<Vec<DualMonomial>> {
    assert!(n >= 1);
    let items: Vec<usize> = (1..=n as usize).collect();
    let mut by_degree: Vec<Vec<DualMonomial>> = vec![Vec::new(); n as usize];
    for partition in set_partitions(&items) {
        let mut blocks: Vec<Vec<u8>> = partition
            .iter()
            .map(|b| {
                let mut b: Vec<u8> = b.iter().map(|&v| v as u8).collect();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_by_key(|b| b[0]);
        let mut m = DualMonomial::unit();
        for block in &blocks {
            m = m.product(&star_monomial(block)).expect("disjoint supports");
        }
        let degree = n as usize - partition.len();
        by_degree[degree].push(m);
    }
    for bucket in &mut by_degree {
        bucket.sort();
    }
    by_degree
}

/// The no-broken-circuit basis of the top graded piece over a sorted site
/// set `t`: the `(|t|-1)!` monomials `Π_{v ∈ t, v ≠ min} b(f(v), v)` over
/// all choices of a strictly smaller partner `f(v) ∈ t` for each
/// non-minimal site.
pub fn nbc_top_basis(t: &[u8]) -> Vec<DualMonomial> {
    assert!(!t.is_empty(), "site set must be nonempty");
    assert!(t.windows(2).all(|w| w[0] < w[1]), "site set must be sorted");
    let mut out = vec![Vec::<Gen>::new()];
    for (pos, &v) in t.iter().enumerate().skip(1) {
        let mut next = Vec::new();
        for prefix in &out {
            for &f in &t[..pos] {
                let mut letters = prefix.clone();
                letters.push(gen_b(f, v));
                next.push(letters);
            }
        }
        out = next;
    }
    out.iter()
        .map(|letters| DualMonomial::from_letters(letters).expect("distinct letters"))
        .collect()
}

/// Basis of the graded quasitriangular dual, grouped by the two-step
/// partition that labels each component.  For a partition with outer
/// blocks `S_p` refined into inner blocks `S_pq`, the elements are the
/// products `Π_p (Π_q b(S_pq, ·) · Π_{q ≥ 2} a(min S_p, min S_pq))` where
/// each `b(S_pq, ·)` ranges independently over [`nbc_top_basis`], giving
/// `Π (|S_pq| - 1)!` elements per partition.
pub fn qa0_basis(n: u8, caps: &Caps) -> Result<Vec<(TwoStepPartition, Vec<DualMonomial>)>> {
    assert!(n >= 1);
    let mut total = 0usize;
    let mut out = Vec::new();
    for partition in TwoStepPartition::enumerate(n) {
        let count: usize = partition
            .basis_count()
            .try_into()
            .map_err(|_| Error::cap("basis component", usize::MAX, caps.max_enumeration))?;
        total = total
            .checked_add(count)
            .ok_or_else(|| Error::cap("basis size", usize::MAX, caps.max_enumeration))?;
        caps.check_enumeration("dual basis elements", total)?;

        let mut elements = vec![DualMonomial::unit()];
        for outer in partition.blocks() {
            let root = outer[0][0];
            // One no-broken-circuit factor per inner block, chosen
            // independently.
            for inner in outer {
                let factors = nbc_top_basis(inner);
                let mut next = Vec::with_capacity(elements.len() * factors.len());
                for e in &elements {
                    for f in &factors {
                        next.push(e.product(f).expect("disjoint supports"));
                    }
                }
                elements = next;
            }
            // Star of `a` letters from the outer root to each later
            // inner-block minimum.
            for inner in &outer[1..] {
                let a = DualMonomial::from_letters(&[gen_a(root, inner[0])]).unwrap();
                elements = elements
                    .iter()
                    .map(|e| e.product(&a).expect("fresh letter"))
                    .collect();
            }
        }
        debug_assert_eq!(Int::from(elements.len()), partition.basis_count());
        debug_assert!(elements
            .iter()
            .all(|e| e.degree() == partition.degree() && e.b_degree() == partition.b_degree()));
        out.push((partition, elements));
    }
    Ok(out)
}

/// Degree-indexed counts of the [`qa0_basis`] without materializing the
/// monomials: index `k` is the sum of `Π (|S_pq| - 1)!` over two-step
/// partitions of total degree `k`.
pub fn qa0_degree_counts(n: u8) -> Vec<Int> {
    let mut counts = vec![Int::zero(); n as usize];
    for partition in TwoStepPartition::enumerate(n) {
        counts[partition.degree()] += partition.basis_count();
    }
    counts
}

/// Bidegree table `[p][q]` refining [`qa0_degree_counts`]: `p` is the
/// total degree and `q` the number of inner blocks (equivalently,
/// `n` minus the `b`-letter count).
pub fn qa0_bidegree_counts(n: u8) -> Vec<Vec<Int>> {
    let n_us = n as usize;
    let mut table = vec![vec![Int::zero(); n_us + 1]; n_us.max(1)];
    for partition in TwoStepPartition::enumerate(n) {
        table[partition.degree()][partition.inner_count()] += partition.basis_count();
    }
    table
}

/// Cyclic circuit `b(i,j)b(j,k) + b(j,k)b(k,i) + b(k,i)b(i,j)`.
fn b_circuit(i: u8, j: u8, k: u8) -> Element {
    elem_b(i, j)
        .mul(&elem_b(j, k))
        .add(&elem_b(j, k).mul(&elem_b(k, i)))
        .add(&elem_b(k, i).mul(&elem_b(i, j)))
}

/// All ordered triples of distinct sites in `1..=n`.
fn ordered_triples(n: u8) -> Vec<(u8, u8, u8)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i != j && i != k && j != k {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// Build the quadratic presentation of a dual algebra inside the free
/// algebra model: supercommutativity (odd squares and anticommutators of
/// every generator pair) plus the listed chain relations.  Accepts only
/// the dual kinds.
pub fn dual_presentation(kind: PresKind, n: u8) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one site".into()));
    }
    let mut gens: BTreeSet<Gen> = BTreeSet::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            match kind {
                PresKind::DualA => {
                    gens.insert(gen_a(i, j));
                }
                PresKind::DualQa | PresKind::DualQa0 => {
                    gens.insert(gen_a(i, j));
                    gens.insert(gen_b(i, j));
                }
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "{kind} is not a dual algebra kind"
                    )))
                }
            }
        }
    }
    let gens: Vec<Gen> = gens.into_iter().collect();
    let mut rels: Vec<Element> = Vec::new();

    // Supercommutativity: every generator is odd.
    for (s, &g) in gens.iter().enumerate() {
        let eg = Element::from_gen(g);
        rels.push(eg.mul(&eg));
        for &h in &gens[s + 1..] {
            let eh = Element::from_gen(h);
            rels.push(eg.mul(&eh).add(&eh.mul(&eg)));
        }
    }

    for (i, j, k) in ordered_triples(n) {
        match kind {
            PresKind::DualA => {
                // a(i,j)a(j,k) = a(j,k)a(k,i)
                rels.push(
                    elem_a(i, j)
                        .mul(&elem_a(j, k))
                        .sub(&elem_a(j, k).mul(&elem_a(k, i))),
                );
            }
            PresKind::DualQa => {
                // a(j,k)a(i,j) = a(k,i)a(j,k) = b-circuit(i,j,k)
                rels.push(
                    elem_a(j, k)
                        .mul(&elem_a(i, j))
                        .sub(&elem_a(k, i).mul(&elem_a(j, k))),
                );
                rels.push(
                    elem_a(k, i)
                        .mul(&elem_a(j, k))
                        .sub(&b_circuit(i, j, k)),
                );
            }
            PresKind::DualQa0 => {
                // Graded variant: the chain and the circuit vanish
                // separately.
                rels.push(
                    elem_a(i, j)
                        .mul(&elem_a(j, k))
                        .sub(&elem_a(j, k).mul(&elem_a(k, i))),
                );
                rels.push(b_circuit(i, j, k));
            }
            _ => unreachable!(),
        }
        if matches!(kind, PresKind::DualQa | PresKind::DualQa0) {
            // a(i,j)b(j,k) = a(i,k)b(j,k)
            rels.push(
                elem_a(i, j)
                    .mul(&elem_b(j, k))
                    .sub(&elem_a(i, k).mul(&elem_b(j, k))),
            );
        }
    }
    if matches!(kind, PresKind::DualQa | PresKind::DualQa0) {
        // a(i,j)b(i,j) = 0
        for i in 1..=n {
            for j in (i + 1)..=n {
                rels.push(elem_a(i, j).mul(&elem_b(i, j)));
            }
        }
    }

    Ok(Presentation::from_parts(kind, n, gens, rels))
}

/// Dimension of the degree-`k` component of a dual algebra, computed by
/// the generic rank method on the free-algebra model.
pub fn dual_dimension_by_rank(kind: PresKind, n: u8, k: usize, caps: &Caps) -> Result<usize> {
    let pres = dual_presentation(kind, n)?;
    graded_dimension(&pres, k, caps)
}

/// The primal kind whose dual a given dual kind presents.
fn primal_of(kind: PresKind) -> Option<PresKind> {
    match kind {
        PresKind::DualA => Some(PresKind::Tr),
        PresKind::DualQa => Some(PresKind::Qtr),
        PresKind::DualQa0 => Some(PresKind::Qtr0),
        _ => None,
    }
}

fn dual_of(kind: PresKind) -> Option<PresKind> {
    match kind {
        PresKind::Tr => Some(PresKind::DualA),
        PresKind::Qtr => Some(PresKind::DualQa),
        PresKind::Qtr0 => Some(PresKind::DualQa0),
        _ => None,
    }
}

/// Expansion of each dual generator as a linear functional on the primal
/// degree-1 space, written in the basis dual to the primal generators
/// (so an image `x - y` pairs to `+1` on `x` and `-1` on `y`).
fn dual_functional_map(primal: PresKind, n: u8) -> GenMap {
    let mut images = std::collections::BTreeMap::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            match primal {
                PresKind::Tr => {
                    images.insert(gen_a(i, j), Element::from_gen(Gen::R { i, j }));
                }
                PresKind::Qtr => {
                    let rij = Element::from_gen(Gen::R { i, j });
                    let rji = Element::from_gen(Gen::R { i: j, j: i });
                    images.insert(gen_a(i, j), rij.sub(&rji));
                    images.insert(gen_b(i, j), rij.add(&rji));
                }
                PresKind::Qtr0 => {
                    images.insert(gen_a(i, j), Element::from_gen(Gen::Rho { i, j }));
                    images.insert(gen_b(i, j), Element::from_gen(Gen::T { i, j }));
                }
                _ => unreachable!(),
            }
        }
    }
    GenMap::new(images)
}

/// Outcome of [`orthogonality_check`], with the measured ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityReport {
    /// Rank of the primal quadratic relation space.
    pub primal_rank: usize,
    /// Rank of the dual relation space expanded into primal functionals
    /// (supercommutativity included).
    pub dual_rank: usize,
    /// Dimension of the full tensor square of the degree-1 space.
    pub square_dimension: usize,
    /// Number of (primal relation, dual relation) pairs with a nonzero
    /// pairing — zero when the two spaces really annihilate each other.
    pub nonzero_pairings: usize,
}

impl OrthogonalityReport {
    /// True when the dual relations exactly annihilate the primal ones
    /// and the two ranks fill the tensor square.
    pub fn holds(&self) -> bool {
        self.nonzero_pairings == 0 && self.primal_rank + self.dual_rank == self.square_dimension
    }
}

/// Pair the quadratic relation space of a primal presentation against the
/// relations of its dual algebra inside the tensor square of the degree-1
/// space.  Each dual relation is expanded into the functional basis dual
/// to the primal generators; the check verifies that every pairing
/// vanishes and that the two ranks are complementary.
pub fn orthogonality_check(primal: &Presentation) -> Result<OrthogonalityReport> {
    let dual_kind = dual_of(primal.kind).ok_or_else(|| {
        Error::InvalidInput(format!("no dual algebra is defined for kind {}", primal.kind))
    })?;
    debug_assert_eq!(primal_of(dual_kind), Some(primal.kind));
    let dual = dual_presentation(dual_kind, primal.n)?;
    let map = dual_functional_map(primal.kind, primal.n);

    let m = primal.generator_count();
    let square = m * m;
    let row_of = |e: &Element| -> SparseRow {
        e.terms()
            .map(|(w, c)| {
                let ls = w.letters();
                let x = primal.gen_position(&ls[0]).expect("primal letter");
                let y = primal.gen_position(&ls[1]).expect("primal letter");
                (x * m + y, c.clone())
            })
            .collect()
    };

    let primal_rows: Vec<SparseRow> = primal.relations().iter().map(&row_of).collect();
    let mut dual_rows: Vec<SparseRow> = Vec::new();
    for rel in dual.relations() {
        let expanded = map.apply(rel)?;
        dual_rows.push(row_of(&expanded));
    }

    let mut space = RowSpace::new(square);
    let mut primal_rank = 0;
    for row in &primal_rows {
        if space.insert(row.clone()) {
            primal_rank += 1;
        }
    }
    let mut dual_space = RowSpace::new(square);
    let mut dual_rank = 0;
    for row in &dual_rows {
        if dual_space.insert(row.clone()) {
            dual_rank += 1;
        }
    }

    let mut nonzero_pairings = 0;
    for p in &primal_rows {
        for d in &dual_rows {
            let mut dot = Rat::zero();
            let mut di = d.iter().peekable();
            for (col, c) in p {
                while let Some(&&(dcol, _)) = di.peek() {
                    if dcol < *col {
                        di.next();
                    } else {
                        break;
                    }
                }
                if let Some(&&(dcol, ref dc)) = di.peek() {
                    if dcol == *col {
                        dot += c * dc;
                    }
                }
            }
            if !dot.is_zero() {
                nonzero_pairings += 1;
            }
        }
    }

    Ok(OrthogonalityReport { primal_rank, dual_rank, square_dimension: square, nonzero_pairings })
}

/// Check that the plain and graded quasitriangular duals have equal
/// dimensions in every degree up to `dmax`.
pub fn qa_dims_agree(n: u8, dmax: usize, caps: &Caps) -> Result<bool> {
    for k in 0..=dmax {
        let plain = dual_dimension_by_rank(PresKind::DualQa, n, k, caps)?;
        let graded = dual_dimension_by_rank(PresKind::DualQa0, n, k, caps)?;
        if plain != graded {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{p_poly, qa0_bidegree_dims, stirling2, HilbertKind};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn star_monomials_and_sign_normalization() {
        let m = star_monomial(&[1, 3, 4]);
        assert_eq!(m.to_string(), "a(1,3)*a(1,4)");
        assert_eq!(m.degree(), 2);
        assert_eq!(m.sign(), 1);

        let swapped = DualMonomial::from_letters(&[gen_a(1, 4), gen_a(1, 3)]).unwrap();
        assert_eq!(swapped.sign(), -1);
        assert_eq!(swapped.letters(), m.letters());

        // b letters sort before a letters.
        let mixed = DualMonomial::from_letters(&[gen_a(1, 2), gen_b(1, 2)]).unwrap();
        assert_eq!(mixed.to_string(), "-b(1,2)*a(1,2)");
        assert_eq!(mixed.a_degree(), 1);
        assert_eq!(mixed.b_degree(), 1);

        assert!(DualMonomial::from_letters(&[gen_a(1, 2), gen_a(1, 2)]).is_none());

        let unit = DualMonomial::unit();
        assert_eq!(unit.product(&mixed), Some(mixed.clone()));
        assert_eq!(unit.to_string(), "1");
    }

    #[test]
    fn a_basis_degree_counts_are_partition_numbers() {
        for n in 1..=6u8 {
            let basis = a_basis(n);
            assert_eq!(basis.len(), n as usize);
            for (k, bucket) in basis.iter().enumerate() {
                let expected = stirling2(n as usize, n as usize - k);
                assert_eq!(Int::from(bucket.len()), expected, "n={n} k={k}");
                for m in bucket {
                    assert_eq!(m.degree(), k);
                    assert_eq!(m.sign(), 1);
                }
            }
            // All monomials distinct across degrees.
            let all: BTreeSet<&DualMonomial> = basis.iter().flatten().collect();
            assert_eq!(all.len(), basis.iter().map(Vec::len).sum::<usize>());
        }
    }

    #[test]
    fn a_basis_small_listings() {
        let b2 = a_basis(2);
        assert_eq!(b2[0], vec![DualMonomial::unit()]);
        assert_eq!(b2[1].len(), 1);
        assert_eq!(b2[1][0].to_string(), "a(1,2)");

        let b4 = a_basis(4);
        let counts: Vec<usize> = b4.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 6, 7, 1]);
        // The full-support star monomial is the unique top element.
        assert_eq!(b4[3][0].to_string(), "a(1,2)*a(1,3)*a(1,4)");
    }

    #[test]
    fn a_dims_by_rank_match_partition_numbers() {
        for n in 2..=4u8 {
            for k in 0..=n as usize {
                let dim = dual_dimension_by_rank(PresKind::DualA, n, k, &caps()).unwrap();
                let expected = stirling2(n as usize, (n as usize).saturating_sub(k));
                assert_eq!(Int::from(dim), expected, "n={n} k={k}");
            }
        }
        // Named examples: three generators and no degree-1 relations;
        // the degree-2 dimension at four sites.
        assert_eq!(dual_dimension_by_rank(PresKind::DualA, 3, 1, &caps()).unwrap(), 3);
        assert_eq!(dual_dimension_by_rank(PresKind::DualA, 4, 2, &caps()).unwrap(), 7);
    }

    #[test]
    fn nbc_top_basis_examples() {
        assert_eq!(nbc_top_basis(&[5]), vec![DualMonomial::unit()]);

        let t12 = nbc_top_basis(&[1, 2]);
        assert_eq!(t12.len(), 1);
        assert_eq!(t12[0].to_string(), "b(1,2)");

        let t123 = nbc_top_basis(&[1, 2, 3]);
        let shown: Vec<String> = t123.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, vec!["b(1,2)*b(1,3)", "b(1,2)*b(2,3)"]);

        for size in 1..=5usize {
            let t: Vec<u8> = (1..=size as u8).collect();
            let basis = nbc_top_basis(&t);
            assert_eq!(Int::from(basis.len()), factorial(size - 1));
            let distinct: BTreeSet<_> = basis.iter().collect();
            assert_eq!(distinct.len(), basis.len());
        }
    }

    #[test]
    fn qa0_basis_small_listings() {
        let b2 = qa0_basis(2, &caps()).unwrap();
        let mut shown: Vec<(String, Vec<String>)> = b2
            .iter()
            .map(|(p, ms)| (p.to_string(), ms.iter().map(|m| m.to_string()).collect()))
            .collect();
        shown.sort();
        assert_eq!(
            shown,
            vec![
                ("{1 2}".to_string(), vec!["b(1,2)".to_string()]),
                ("{1|2}".to_string(), vec!["a(1,2)".to_string()]),
                ("{1},{2}".to_string(), vec!["1".to_string()]),
            ]
        );

        // Three sites, one outer block split into singletons: a star of
        // two `a` letters rooted at the minimum.
        let b3 = qa0_basis(3, &caps()).unwrap();
        let all_singletons = b3
            .iter()
            .find(|(p, _)| p.to_string() == "{1|2|3}")
            .expect("partition present");
        assert_eq!(all_singletons.1.len(), 1);
        assert_eq!(all_singletons.1[0].to_string(), "a(1,2)*a(1,3)");

        let degree2: Int = b3
            .iter()
            .filter(|(p, _)| p.degree() == 2)
            .map(|(_, ms)| Int::from(ms.len()))
            .sum();
        assert_eq!(degree2, Int::from(6));
    }

    #[test]
    fn qa0_counts_match_quasitriangular_polynomial() {
        for n in 1..=6u8 {
            let counts = qa0_degree_counts(n);
            let poly = p_poly(HilbertKind::Qtr, n as usize);
            for (k, c) in counts.iter().enumerate() {
                assert_eq!(Rat::from_integer(c.clone()), poly.coeff(k), "n={n} k={k}");
            }
        }
        // Materialized basis agrees with the closed-form counts, and the
        // monomials carry the bidegree their partition promises.
        for n in 1..=5u8 {
            let basis = qa0_basis(n, &caps()).unwrap();
            let counts = qa0_degree_counts(n);
            let mut seen = vec![Int::zero(); n as usize];
            let mut all = BTreeSet::new();
            for (p, ms) in &basis {
                assert_eq!(Int::from(ms.len()), p.basis_count());
                for m in ms {
                    assert_eq!(m.degree(), p.degree());
                    assert_eq!(m.b_degree(), p.b_degree());
                    all.insert(m.clone());
                }
                seen[p.degree()] += Int::from(ms.len());
            }
            assert_eq!(seen, counts, "n={n}");
            let total: usize = basis.iter().map(|(_, ms)| ms.len()).sum();
            assert_eq!(all.len(), total, "monomials must be distinct, n={n}");
        }
    }

    #[test]
    fn qa0_bidegree_refinement_matches_series() {
        for n in 1..=5u8 {
            let combinatorial = qa0_bidegree_counts(n);
            let generating = qa0_bidegree_dims(n as usize);
            assert_eq!(combinatorial, generating, "n={n}");
        }
    }

    #[test]
    fn qa0_dims_by_rank_match_counts() {
        for n in 2..=3u8 {
            let counts = qa0_degree_counts(n);
            for k in 0..=n as usize {
                let dim = dual_dimension_by_rank(PresKind::DualQa0, n, k, &caps()).unwrap();
                let expected =
                    counts.get(k).cloned().unwrap_or_else(Int::zero);
                assert_eq!(Int::from(dim), expected, "n={n} k={k}");
            }
        }
        // Named example: two generators at two sites, no degree-1
        // relations.
        assert_eq!(dual_dimension_by_rank(PresKind::DualQa0, 2, 1, &caps()).unwrap(), 2);
    }

    #[test]
    fn plain_and_graded_duals_have_equal_dimensions() {
        assert!(qa_dims_agree(2, 3, &caps()).unwrap());
        assert!(qa_dims_agree(3, 3, &caps()).unwrap());
    }

    #[test]
    fn enumeration_cap_fails_safe() {
        let tight = Caps { max_enumeration: 10, ..Caps::default() };
        let err = qa0_basis(5, &tight).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn dual_presentation_rejects_primal_kinds() {
        assert!(dual_presentation(PresKind::Tr, 3).is_err());
        assert!(dual_presentation(PresKind::Pb, 3).is_err());
        // And the pairing rejects kinds with no dual.
        let pb = Presentation::new(PresKind::Pb, 3);
        assert!(orthogonality_check(&pb).is_err());
    }

    #[test]
    fn orthogonality_of_triangular_duals() {
        for n in 2..=4u8 {
            let p = Presentation::new(PresKind::Tr, n);
            let report = orthogonality_check(&p).unwrap();
            assert!(report.holds(), "tr at n={n}: {report:?}");
            let m = p.generator_count();
            assert_eq!(report.primal_rank + report.dual_rank, m * m);
        }
    }

    #[test]
    fn orthogonality_of_quasitriangular_duals() {
        for kind in [PresKind::Qtr, PresKind::Qtr0] {
            let p = Presentation::new(kind, 3);
            let report = orthogonality_check(&p).unwrap();
            assert!(report.holds(), "{kind} at n=3: {report:?}");
        }
    }

    #[test]
    fn orthogonality_detects_a_twisted_relation() {
        let mut twisted = Presentation::new(PresKind::Tr, 3);
        twisted.twist_first_relation();
        let report = orthogonality_check(&twisted).unwrap();
        assert!(!report.holds());
        assert!(report.nonzero_pairings > 0);
    }
}

//! Exact cellular topology of permutohedra and their block quotients.
//!
//! The faces of the order-`n` permutohedron are indexed by ordered set
//! partitions of `{1, …, n}`: a partition into `r` ordered blocks names the
//! face where the sites of the first block carry the `|S_1|` smallest
//! values, the second block the next ones, and so on.  That face is a
//! product of smaller permutohedra, one factor per block, and has dimension
//! `n - r`.
//!
//! Boundary matrices are computed geometrically rather than from a sign
//! formula: every face gets a canonical orientation (an ordered tangent
//! basis read off its unordered block data), and the incidence sign of a
//! facet is the sign of an exact integer determinant comparing the facet's
//! orientation, prefixed with an outward direction, against the parent's.
//! Because the orientation depends only on the unordered blocks, and faces
//! whose block sequences differ by a reordering are integer translates of
//! one another, the orientation transports consistently along the
//! block-reordering identifications; [`orbit_consistency`] verifies both
//! facts from the coordinates.
//!
//! Two quotient complexes are built on top of the permutohedron:
//! * cells indexed by plain set partitions (block order forgotten), and
//! * cells indexed by partitions whose blocks each carry an internal total
//!   order (block order forgotten, per-block order kept).
//!
//! Their induced boundary maps accumulate the signed incidences of a
//! representative face; opposite block splits cancel in pairs, so both
//! quotient boundaries vanish identically, which the tests check rather
//! than assume.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use num::{One, ToPrimitive, Zero};

use crate::caps::Caps;
use crate::combinat::{ordered_set_partitions, ordered_splits, permutations, set_partitions};
use crate::error::{Error, Result};
use crate::exact::{Int, Rat, SparseMat};
use crate::series::{factorial, stirling2};

/// Render one block for a cell label.  Single-digit sites are simply
/// concatenated; larger sites are comma-separated for readability.
fn block_label(sites: &[u8], sep_over_ten: &str) -> String {
    if sites.iter().all(|&s| s <= 9) {
        sites.iter().map(|s| s.to_string()).collect()
    } else {
        sites
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(sep_over_ten)
    }
}

/// Check that `blocks` are nonempty and partition `{1, …, n}` for some `n`,
/// returning that `n`.
fn validate_cover(blocks: &[Vec<u8>]) -> Result<u8> {
    let mut seen: Vec<u8> = blocks.iter().flatten().copied().collect();
    if blocks.iter().any(|b| b.is_empty()) {
        return Err(Error::InvalidInput("empty block in partition".into()));
    }
    seen.sort_unstable();
    let n = seen.len();
    if n == 0 || n > 120 {
        return Err(Error::InvalidInput(format!(
            "partition must cover between 1 and 120 sites, got {n}"
        )));
    }
    for (i, &s) in seen.iter().enumerate() {
        if s as usize != i + 1 {
            return Err(Error::InvalidInput(format!(
                "blocks must partition 1..={n} exactly once, saw site {s}"
            )));
        }
    }
    Ok(n as u8)
}

/// A face of the permutohedron: a sequence of disjoint blocks covering
/// `{1, …, n}`.  Block order is meaningful (earlier blocks take smaller
/// coordinate values); the sites inside each block are kept sorted because
/// a block is a set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderedPartition {
    blocks: Vec<Vec<u8>>,
    n: u8,
}

impl OrderedPartition {
    pub fn new(mut blocks: Vec<Vec<u8>>) -> Result<Self> {
        let n = validate_cover(&blocks)?;
        for b in &mut blocks {
            b.sort_unstable();
        }
        Ok(OrderedPartition { blocks, n })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Dimension of the face: sites minus blocks.
    pub fn dim(&self) -> usize {
        self.n as usize - self.blocks.len()
    }

    /// Forget the block order.
    pub fn underlying(&self) -> Partition {
        Partition::new(self.blocks.clone()).expect("blocks already validated")
    }

    /// The first coordinate value available to each block: block `p` takes
    /// the values `starts[p] .. starts[p] + |S_p| - 1`.
    fn value_starts(&self) -> Vec<i64> {
        let mut starts = Vec::with_capacity(self.blocks.len());
        let mut next = 1i64;
        for b in &self.blocks {
            starts.push(next);
            next += b.len() as i64;
        }
        starts
    }

    /// Exact vertex coordinates of the face, sorted lexicographically.
    /// Vertex `v` lists the value at site `s` in position `s - 1`; each
    /// block's sites take the block's own value range in every possible
    /// order, so the face is the product of one smaller permutohedron per
    /// block.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let starts = self.value_starts();
        let mut verts: Vec<Vec<i64>> = vec![vec![0; self.n as usize]];
        for (p, block) in self.blocks.iter().enumerate() {
            let mut next = Vec::new();
            for perm in permutations(block.len()) {
                for v in &verts {
                    let mut w = v.clone();
                    for (t, &site) in block.iter().enumerate() {
                        w[site as usize - 1] = starts[p] + perm[t] as i64;
                    }
                    next.push(w);
                }
            }
            verts = next;
        }
        verts.sort_unstable();
        verts
    }

    /// All facets together with their geometric incidence signs: each facet
    /// splits one block into an ordered pair of nonempty sub-blocks.
    pub fn signed_facets(&self) -> Vec<(OrderedPartition, i8)> {
        let mut out = Vec::new();
        for (pos, _, a, b) in self.facet_splits() {
            let sign = facet_sign(self, pos, &a, &b);
            let mut blocks = self.blocks.clone();
            blocks.splice(pos..=pos, [a, b]);
            let facet = OrderedPartition {
                blocks,
                n: self.n,
            };
            out.push((facet, sign));
        }
        out
    }

    /// Enumerate the block splits `(position, block, lower part, upper
    /// part)` that produce facets.
    fn facet_splits(&self) -> Vec<(usize, Vec<u8>, Vec<u8>, Vec<u8>)> {
        let mut out = Vec::new();
        for (pos, block) in self.blocks.iter().enumerate() {
            if block.len() < 2 {
                continue;
            }
            let items: Vec<usize> = block.iter().map(|&s| s as usize).collect();
            for (a, b) in ordered_splits(&items) {
                let a: Vec<u8> = a.into_iter().map(|s| s as u8).collect();
                let b: Vec<u8> = b.into_iter().map(|s| s as u8).collect();
                out.push((pos, block.clone(), a, b));
            }
        }
        out
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| block_label(b, ",")).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// A set partition of `{1, …, n}`: blocks are unordered, so they are stored
/// sorted by their minimum site.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<u8>>,
    n: u8,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<u8>>) -> Result<Self> {
        let n = validate_cover(&blocks)?;
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { blocks, n })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.n as usize - self.blocks.len()
    }

    /// The canonical face representing this cell: the same blocks, ordered
    /// by minimum site.
    pub fn representative(&self) -> OrderedPartition {
        OrderedPartition {
            blocks: self.blocks.clone(),
            n: self.n,
        }
    }

    pub fn enumerate(n: u8) -> Vec<Partition> {
        let items: Vec<usize> = (1..=n as usize).collect();
        set_partitions(&items)
            .into_iter()
            .map(|blocks| {
                let blocks = blocks
                    .into_iter()
                    .map(|b| b.into_iter().map(|s| s as u8).collect())
                    .collect();
                Partition::new(blocks).expect("generated blocks are a partition")
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| block_label(b, " ")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A set partition whose blocks are unordered among themselves but carry an
/// internal total order each.  Blocks are stored as sequences in their
/// internal order and sorted by minimum site.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BlockOrderedPartition {
    blocks: Vec<Vec<u8>>,
    n: u8,
}

impl BlockOrderedPartition {
    pub fn new(mut blocks: Vec<Vec<u8>>) -> Result<Self> {
        let n = validate_cover(&blocks)?;
        blocks.sort_by_key(|b| b.iter().copied().min().expect("nonempty block"));
        Ok(BlockOrderedPartition { blocks, n })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// Blocks as sequences in internal order, sorted by minimum site.
    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.n as usize - self.blocks.len()
    }

    /// Forget the internal orders.
    pub fn underlying(&self) -> Partition {
        Partition::new(self.blocks.clone()).expect("blocks already validated")
    }

    pub fn enumerate(n: u8) -> Vec<BlockOrderedPartition> {
        let mut out = Vec::new();
        for part in Partition::enumerate(n) {
            // Extend partial block lists by every internal order of the
            // next block.
            let mut stack: Vec<Vec<Vec<u8>>> = vec![Vec::new()];
            for block in part.blocks() {
                let mut next = Vec::new();
                for perm in permutations(block.len()) {
                    for prefix in &stack {
                        let mut cur = prefix.clone();
                        cur.push(perm.iter().map(|&i| block[i]).collect());
                        next.push(cur);
                    }
                }
                stack = next;
            }
            for blocks in stack {
                out.push(
                    BlockOrderedPartition::new(blocks).expect("generated blocks are a partition"),
                );
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for BlockOrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let seq: Vec<String> = b.iter().map(|s| s.to_string()).collect();
                format!("[{}]", seq.join(">"))
            })
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Incidence sign of the facet obtained from `parent` by splitting the
/// block at `pos` into the ordered pair `(a, b)` (`a` takes the lower
/// values).
///
/// Both faces are oriented by a canonical tangent basis: blocks sorted by
/// minimum site contribute, in order, the vectors `e_s - e_min` for their
/// non-minimal sites `s` (ascending).  The sign is `+1` exactly when an
/// outward direction followed by the facet's basis agrees with the parent's
/// orientation; the comparison is an exact integer determinant.
fn facet_sign(parent: &OrderedPartition, pos: usize, a: &[u8], b: &[u8]) -> i8 {
    let d = parent.dim();
    assert!(d >= 1, "vertices have no facets");

    // Rows: the parent's basis is indexed by its non-minimal sites, taken
    // block by block with blocks sorted by minimum.  In that basis a
    // block-wise zero-sum vector's coordinates are simply its entries at
    // those sites.
    let mut sorted_blocks: Vec<&Vec<u8>> = parent.blocks.iter().collect();
    sorted_blocks.sort_by_key(|blk| blk[0]);
    let mut row_of_site: BTreeMap<u8, usize> = BTreeMap::new();
    for blk in sorted_blocks {
        for &s in &blk[1..] {
            let next = row_of_site.len();
            row_of_site.insert(s, next);
        }
    }
    debug_assert_eq!(row_of_site.len(), d);

    let mut m = vec![vec![0i64; d]; d];
    let put = |col: usize, plus: u8, minus: u8, m: &mut Vec<Vec<i64>>| {
        if let Some(&r) = row_of_site.get(&plus) {
            m[r][col] += 1;
        }
        if let Some(&r) = row_of_site.get(&minus) {
            m[r][col] -= 1;
        }
    };

    // Column 0: an outward direction.  On the facet the sub-block `a` takes
    // the bottom of the split block's value range, so inside the parent the
    // sum of `a`-coordinates is minimized there; `e_{min b} - e_{min a}`
    // decreases that sum and points out of the parent face.
    put(0, b[0], a[0], &mut m);

    // Columns 1..d: the facet's canonical basis, blocks sorted by minimum.
    let mut child_blocks: Vec<Vec<u8>> = parent.blocks.clone();
    child_blocks.splice(pos..=pos, [a.to_vec(), b.to_vec()]);
    child_blocks.sort_by_key(|blk| blk[0]);
    let mut col = 1;
    for blk in &child_blocks {
        for &s in &blk[1..] {
            put(col, s, blk[0], &mut m);
            col += 1;
        }
    }
    debug_assert_eq!(col, d);

    let det = det_sign(m);
    assert!(det != 0, "outward direction and facet basis must span");
    det
}

/// Sign of the determinant of a small integer matrix (fraction-free
/// Bareiss elimination; intermediate values stay far below `i64` range for
/// the sizes used here).
fn det_sign(mut m: Vec<Vec<i64>>) -> i8 {
    let d = m.len();
    let mut sign = 1i64;
    let mut prev = 1i64;
    for k in 0..d {
        let Some(p) = (k..d).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    (sign * m[d - 1][d - 1].signum()) as i8
}

/// All faces of the order-`n` permutohedron grouped by dimension
/// (`result[d]` lists the `d`-dimensional faces, `d` up to `n - 1`).
pub fn perm_faces(n: u8, caps: &Caps) -> Result<Vec<Vec<OrderedPartition>>> {
    check_face_budget(n, caps)?;
    let items: Vec<usize> = (1..=n as usize).collect();
    let mut by_dim: Vec<Vec<OrderedPartition>> = vec![Vec::new(); n as usize];
    for blocks in ordered_set_partitions(&items) {
        let blocks: Vec<Vec<u8>> = blocks
            .into_iter()
            .map(|b| b.into_iter().map(|s| s as u8).collect())
            .collect();
        let op = OrderedPartition::new(blocks)?;
        let d = op.dim();
        by_dim[d].push(op);
    }
    for cells in &mut by_dim {
        cells.sort();
    }
    Ok(by_dim)
}

/// Total number of permutohedron faces, exactly.
fn face_total(n: u8) -> Int {
    let mut total = Int::zero();
    for r in 1..=n as usize {
        total += factorial(r) * stirling2(n as usize, r);
    }
    total
}

fn check_face_budget(n: u8, caps: &Caps) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one site".into()));
    }
    let total = face_total(n);
    let needed = total.to_usize().unwrap_or(usize::MAX);
    caps.check_cells("permutohedron faces", needed)
}

/// Alternating sum of face counts (by dimension) of the order-`n`
/// permutohedron, computed from counting formulas only.  A convex polytope
/// has Euler characteristic 1.
pub fn euler_characteristic_from_counts(n: u8) -> Int {
    let mut total = Int::zero();
    for r in 1..=n as usize {
        let faces = factorial(r) * stirling2(n as usize, r);
        let d = n as usize - r;
        if d % 2 == 0 {
            total += faces;
        } else {
            total -= faces;
        }
    }
    total
}

/// A chain complex with integer boundary matrices.  `boundaries[d]` maps
/// `d`-chains to `(d-1)`-chains (for `d = 0` it is the zero map, stored
/// with zero rows); `labels[d]` names the `d`-cells in column order.
pub struct ChainComplex {
    labels: Vec<Vec<String>>,
    boundaries: Vec<SparseMat>,
}

impl ChainComplex {
    pub fn from_parts(labels: Vec<Vec<String>>, boundaries: Vec<SparseMat>) -> Result<Self> {
        if labels.is_empty() || labels.len() != boundaries.len() {
            return Err(Error::InvalidInput(
                "need one boundary matrix per cell dimension".into(),
            ));
        }
        for d in 0..labels.len() {
            if boundaries[d].ncols() != labels[d].len() {
                return Err(Error::InvalidInput(format!(
                    "boundary {d} has {} columns for {} cells",
                    boundaries[d].ncols(),
                    labels[d].len()
                )));
            }
            let target = if d == 0 { 0 } else { labels[d - 1].len() };
            if boundaries[d].nrows() != target {
                return Err(Error::InvalidInput(format!(
                    "boundary {d} has {} rows for {} target cells",
                    boundaries[d].nrows(),
                    target
                )));
            }
        }
        Ok(ChainComplex { labels, boundaries })
    }

    /// Dimension of the top cells.
    pub fn top_dim(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn labels(&self, d: usize) -> &[String] {
        &self.labels[d]
    }

    /// The boundary matrix out of dimension `d`.
    pub fn boundary(&self, d: usize) -> &SparseMat {
        &self.boundaries[d]
    }

    /// Whether consecutive boundary maps compose to zero.
    pub fn boundary_squares_to_zero(&self) -> bool {
        for d in 1..self.boundaries.len() {
            if !self.boundaries[d - 1].mul(&self.boundaries[d]).is_zero() {
                return false;
            }
        }
        true
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        let mut total = 0i64;
        for (d, l) in self.labels.iter().enumerate() {
            let c = l.len() as i64;
            if d % 2 == 0 {
                total += c;
            } else {
                total -= c;
            }
        }
        total
    }
}

/// One homology group: free rank plus the nontrivial torsion invariant
/// factors (each dividing the next).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Integral homology of a chain complex, one group per dimension: the free
/// rank is `cells - rank(boundary out) - rank(boundary in)`, and the torsion
/// of dimension `d` is read from the invariant factors of the boundary
/// coming in from dimension `d + 1`.
pub fn homology(cc: &ChainComplex) -> Result<Vec<HomologyGroup>> {
    let top = cc.top_dim();
    // Invariant factors of every boundary matrix (rank = factor count).
    let mut factors: Vec<Vec<Int>> = Vec::with_capacity(top + 1);
    for d in 0..=top {
        factors.push(cc.boundary(d).smith_normal_form()?);
    }
    let counts = cc.cell_counts();
    let mut groups = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let rank_out = factors[d].len();
        let (rank_in, torsion) = if d < top {
            let f = &factors[d + 1];
            (
                f.len(),
                f.iter().filter(|v| !v.is_one()).cloned().collect(),
            )
        } else {
            (0, Vec::new())
        };
        groups.push(HomologyGroup {
            free_rank: counts[d] - rank_out - rank_in,
            torsion,
        });
    }
    Ok(groups)
}

/// The full cellular chain complex of the order-`n` permutohedron with
/// geometric incidence signs.
pub fn perm_complex(n: u8, caps: &Caps) -> Result<ChainComplex> {
    let faces = perm_faces(n, caps)?;
    let index: Vec<BTreeMap<&OrderedPartition, usize>> = faces
        .iter()
        .map(|cells| cells.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let labels: Vec<Vec<String>> = faces
        .iter()
        .map(|cells| cells.iter().map(|c| c.to_string()).collect())
        .collect();
    let mut boundaries = Vec::with_capacity(faces.len());
    boundaries.push(SparseMat::new(0, faces[0].len()));
    for d in 1..faces.len() {
        let mut m = SparseMat::new(faces[d - 1].len(), faces[d].len());
        for (col, face) in faces[d].iter().enumerate() {
            for (facet, sign) in face.signed_facets() {
                let row = *index[d - 1]
                    .get(&facet)
                    .expect("facet is a face of one lower dimension");
                m.add_to(row, col, Rat::from_integer(Int::from(sign)));
            }
        }
        boundaries.push(m);
    }
    ChainComplex::from_parts(labels, boundaries)
}

/// Which block quotient of the permutohedron complex to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientSpace {
    /// Cells are plain set partitions: block order is forgotten.
    C,
    /// Cells are set partitions with an internal total order per block:
    /// block order is forgotten, per-block order is kept.
    Qc,
}

impl QuotientSpace {
    pub fn as_str(&self) -> &'static str {
        match self {
            QuotientSpace::C => "C",
            QuotientSpace::Qc => "QC",
        }
    }
}

/// The induced chain complex of a block quotient.  Every cell lifts to the
/// canonical representative face of its underlying partition; the boundary
/// accumulates (with geometric signs) the images of that face's facets,
/// which for the kept data always cancel in opposite pairs — the returned
/// boundary matrices are expected to be identically zero, but they are
/// accumulated honestly rather than assumed.
pub fn quotient_complex(space: QuotientSpace, n: u8, caps: &Caps) -> Result<ChainComplex> {
    check_face_budget(n, caps)?;
    match space {
        QuotientSpace::C => {
            let cells = group_by_dim(Partition::enumerate(n), n, Partition::dim);
            let labels = label_grid(&cells);
            let index = index_grid(&cells);
            let mut boundaries = Vec::with_capacity(cells.len());
            boundaries.push(SparseMat::new(0, cells[0].len()));
            for d in 1..cells.len() {
                let mut m = SparseMat::new(cells[d - 1].len(), cells[d].len());
                for (col, cell) in cells[d].iter().enumerate() {
                    let rep = cell.representative();
                    for (facet, sign) in rep.signed_facets() {
                        let image = facet.underlying();
                        let row = *index[d - 1].get(&image).expect("image cell exists");
                        m.add_to(row, col, Rat::from_integer(Int::from(sign)));
                    }
                }
                boundaries.push(m);
            }
            ChainComplex::from_parts(labels, boundaries)
        }
        QuotientSpace::Qc => {
            let cells = group_by_dim(
                BlockOrderedPartition::enumerate(n),
                n,
                BlockOrderedPartition::dim,
            );
            let labels = label_grid(&cells);
            let index = index_grid(&cells);
            let mut boundaries = Vec::with_capacity(cells.len());
            boundaries.push(SparseMat::new(0, cells[0].len()));
            for d in 1..cells.len() {
                let mut m = SparseMat::new(cells[d - 1].len(), cells[d].len());
                for (col, cell) in cells[d].iter().enumerate() {
                    let rep = cell.underlying().representative();
                    // Internal order of each block, keyed by its minimum.
                    let order_of: BTreeMap<u8, &Vec<u8>> = cell
                        .blocks()
                        .iter()
                        .map(|b| (*b.iter().min().expect("nonempty"), b))
                        .collect();
                    for (pos, block, a, b) in rep.facet_splits() {
                        let sign = facet_sign(&rep, pos, &a, &b);
                        let parent_seq = order_of[&block[0]];
                        let a_set: BTreeSet<u8> = a.iter().copied().collect();
                        let mut blocks: Vec<Vec<u8>> = cell
                            .blocks()
                            .iter()
                            .filter(|blk| **blk != **parent_seq)
                            .cloned()
                            .collect();
                        // The two new blocks inherit the split block's
                        // internal order by restriction.
                        blocks.push(
                            parent_seq
                                .iter()
                                .copied()
                                .filter(|s| a_set.contains(s))
                                .collect(),
                        );
                        blocks.push(
                            parent_seq
                                .iter()
                                .copied()
                                .filter(|s| !a_set.contains(s))
                                .collect(),
                        );
                        let image = BlockOrderedPartition::new(blocks)?;
                        let row = *index[d - 1].get(&image).expect("image cell exists");
                        m.add_to(row, col, Rat::from_integer(Int::from(sign)));
                    }
                }
                boundaries.push(m);
            }
            ChainComplex::from_parts(labels, boundaries)
        }
    }
}

fn group_by_dim<T: Ord>(cells: Vec<T>, n: u8, dim: impl Fn(&T) -> usize) -> Vec<Vec<T>> {
    let mut by_dim: Vec<Vec<T>> = (0..n as usize).map(|_| Vec::new()).collect();
    for c in cells {
        let d = dim(&c);
        by_dim[d].push(c);
    }
    for cells in &mut by_dim {
        cells.sort();
    }
    by_dim
}

fn label_grid<T: fmt::Display>(cells: &[Vec<T>]) -> Vec<Vec<String>> {
    cells
        .iter()
        .map(|row| row.iter().map(|c| c.to_string()).collect())
        .collect()
}

fn index_grid<T: Ord>(cells: &[Vec<T>]) -> Vec<BTreeMap<&T, usize>> {
    cells
        .iter()
        .map(|row| row.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect()
}

/// In the boundary of the top face, the two orderings of every block split
/// must carry opposite signs (their quotient images coincide, so they must
/// cancel).  Returns true when every split pair sums to zero.
pub fn opposite_split_cancellation(n: u8, caps: &Caps) -> Result<bool> {
    check_face_budget(n, caps)?;
    let top = OrderedPartition::new(vec![(1..=n).collect()])?;
    let mut coeff: BTreeMap<OrderedPartition, i64> = BTreeMap::new();
    for (facet, sign) in top.signed_facets() {
        *coeff.entry(facet).or_insert(0) += sign as i64;
    }
    for (facet, c) in &coeff {
        let mut swapped_blocks: Vec<Vec<u8>> = facet.blocks().to_vec();
        swapped_blocks.swap(0, 1);
        let swapped = OrderedPartition::new(swapped_blocks)?;
        if coeff.get(&swapped).copied().unwrap_or(0) + c != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Consistency report for the block-reordering identifications of the
/// permutohedron complex.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    /// Ordered partitions compared against their orbit representative.
    pub faces_checked: usize,
    /// Signed facet incidences compared across the orbit.
    pub incidences_checked: usize,
    /// Every face is an exact integer translate of its representative.
    pub translations_hold: bool,
    /// Corresponding facets carry identical incidence signs.
    pub signs_match: bool,
}

impl OrbitReport {
    pub fn holds(&self) -> bool {
        self.translations_hold && self.signs_match
    }
}

/// Verify, from exact coordinates, that faces whose block sequences differ
/// only by reordering are integer translates of one another, and that
/// corresponding facets receive identical incidence signs — the two facts
/// that let one face per orbit stand in for the whole orbit in the
/// quotient complexes.
pub fn orbit_consistency(n: u8, caps: &Caps) -> Result<OrbitReport> {
    let faces = perm_faces(n, caps)?;
    let mut report = OrbitReport {
        faces_checked: 0,
        incidences_checked: 0,
        translations_hold: true,
        signs_match: true,
    };
    for cells in faces.iter() {
        // Group the faces of this dimension by their unordered partition.
        let mut orbits: BTreeMap<Partition, Vec<&OrderedPartition>> = BTreeMap::new();
        for f in cells {
            orbits.entry(f.underlying()).or_default().push(f);
        }
        for (cell, members) in orbits {
            let rep = cell.representative();
            let rep_vertices = rep.vertices();
            let rep_starts: BTreeMap<u8, i64> = rep
                .blocks()
                .iter()
                .zip(rep.value_starts())
                .map(|(b, lo)| (b[0], lo))
                .collect();
            // Signs of the representative's facets, keyed by the split
            // (block minimum, lower part) — position-independent data.
            let rep_signs: BTreeMap<(u8, Vec<u8>), i8> = rep
                .facet_splits()
                .into_iter()
                .map(|(pos, block, a, b)| {
                    let sign = facet_sign(&rep, pos, &a, &b);
                    ((block[0], a), sign)
                })
                .collect();
            for f in members {
                report.faces_checked += 1;
                // Translation: block p's value range moves as a whole, so
                // the shift at site s depends only on s's block.
                let shift: Vec<i64> = {
                    let mut t = vec![0i64; n as usize];
                    for (b, lo) in f.blocks().iter().zip(f.value_starts()) {
                        for &s in b {
                            t[s as usize - 1] = lo - rep_starts[&b[0]];
                        }
                    }
                    t
                };
                let translated: Vec<Vec<i64>> = {
                    let mut vs: Vec<Vec<i64>> = rep_vertices
                        .iter()
                        .map(|v| v.iter().zip(&shift).map(|(x, t)| x + t).collect())
                        .collect();
                    vs.sort_unstable();
                    vs
                };
                if translated != f.vertices() {
                    report.translations_hold = false;
                }
                for (pos, block, a, b) in f.facet_splits() {
                    report.incidences_checked += 1;
                    let sign = facet_sign(f, pos, &a, &b);
                    if rep_signs[&(block[0], a)] != sign {
                        report.signs_match = false;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Build the internally-ordered quotient cells literally, as equivalence
/// classes of (partition, permutation) pairs: two permutations give the
/// same cell when they order every block identically.  Used to cross-check
/// the direct enumeration.
pub fn literal_block_ordered_cells(n: u8) -> Vec<Vec<BlockOrderedPartition>> {
    let mut seen: BTreeSet<BlockOrderedPartition> = BTreeSet::new();
    for part in Partition::enumerate(n) {
        for sigma in permutations(n as usize) {
            // Order each block by the permutation's values.
            let blocks: Vec<Vec<u8>> = part
                .blocks()
                .iter()
                .map(|b| {
                    let mut seq = b.clone();
                    seq.sort_by_key(|&s| sigma[s as usize - 1]);
                    seq
                })
                .collect();
            seen.insert(
                BlockOrderedPartition::new(blocks).expect("blocks form a partition"),
            );
        }
    }
    group_by_dim(seen.into_iter().collect(), n, BlockOrderedPartition::dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::lah;

    fn caps() -> Caps {
        Caps::default()
    }

    fn op(blocks: &[&[u8]]) -> OrderedPartition {
        OrderedPartition::new(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn partitions_validate_and_render() {
        let f = op(&[&[3, 1], &[2]]);
        assert_eq!(f.to_string(), "13|2");
        assert_eq!(f.dim(), 1);
        assert_eq!(f.underlying().to_string(), "{13,2}");

        let bop = BlockOrderedPartition::new(vec![vec![2], vec![3, 1]]).unwrap();
        assert_eq!(bop.to_string(), "[3>1]|[2]");
        assert_eq!(bop.dim(), 1);

        assert!(OrderedPartition::new(vec![vec![1, 2], vec![2]]).is_err());
        assert!(OrderedPartition::new(vec![vec![1], vec![3]]).is_err());
        assert!(OrderedPartition::new(vec![vec![1], vec![]]).is_err());
        assert!(BlockOrderedPartition::new(vec![]).is_err());
    }

    #[test]
    fn face_counts_by_dimension() {
        let f3 = perm_faces(3, &caps()).unwrap();
        assert_eq!(
            f3.iter().map(|c| c.len()).collect::<Vec<_>>(),
            vec![6, 6, 1]
        );
        let f4 = perm_faces(4, &caps()).unwrap();
        assert_eq!(
            f4.iter().map(|c| c.len()).collect::<Vec<_>>(),
            vec![24, 36, 14, 1]
        );
        // Total face count agrees with the counting formula.
        for n in 1..=5u8 {
            let total: usize = perm_faces(n, &caps())
                .unwrap()
                .iter()
                .map(|c| c.len())
                .sum();
            assert_eq!(Int::from(total), face_total(n));
        }
    }

    #[test]
    fn face_vertices_match_the_value_ranges() {
        // One site per block: a single vertex.
        assert_eq!(op(&[&[1], &[2]]).vertices(), vec![vec![1, 2]]);
        assert_eq!(op(&[&[2], &[1]]).vertices(), vec![vec![2, 1]]);
        // The full permutohedron on two sites: a segment.
        assert_eq!(
            op(&[&[1, 2]]).vertices(),
            vec![vec![1, 2], vec![2, 1]]
        );
        // An edge of the hexagon: block {1,3} takes values {1,2}.
        let e = op(&[&[1, 3], &[2]]);
        assert_eq!(e.vertices(), vec![vec![1, 3, 2], vec![2, 3, 1]]);
        // Its supporting equation: the {1,3}-coordinates sum to 3.
        for v in e.vertices() {
            assert_eq!(v[0] + v[2], 3);
        }
        // The top face has all n! vertices, each a permutation of 1..=n.
        let top = op(&[&[1, 2, 3]]);
        assert_eq!(top.vertices().len(), 6);
        for v in top.vertices() {
            let mut s = v.clone();
            s.sort_unstable();
            assert_eq!(s, vec![1, 2, 3]);
        }
    }

    #[test]
    fn boundary_of_the_segment() {
        let cc = perm_complex(2, &caps()).unwrap();
        assert_eq!(cc.cell_counts(), vec![2, 1]);
        assert_eq!(cc.labels(0), ["1|2", "2|1"]);
        let b = cc.boundary(1);
        // The segment runs from (2,1) to (1,2): head minus tail.
        assert_eq!(b.get(0, 0), Rat::from_integer(Int::from(1)));
        assert_eq!(b.get(1, 0), Rat::from_integer(Int::from(-1)));
    }

    #[test]
    fn boundaries_square_to_zero() {
        for n in 2..=5u8 {
            let cc = perm_complex(n, &caps()).unwrap();
            assert!(cc.boundary_squares_to_zero(), "d^2 != 0 at n = {n}");
        }
    }

    #[test]
    fn permutohedra_are_contractible() {
        for n in 2..=4u8 {
            let cc = perm_complex(n, &caps()).unwrap();
            let h = homology(&cc).unwrap();
            assert_eq!(h[0], HomologyGroup::free(1), "H_0 of the {n}-permutohedron");
            for (d, g) in h.iter().enumerate().skip(1) {
                assert_eq!(*g, HomologyGroup::free(0), "H_{d} at n = {n}");
            }
        }
    }

    #[test]
    fn top_cell_split_pairs_cancel() {
        for n in 2..=4u8 {
            assert!(opposite_split_cancellation(n, &caps()).unwrap());
        }
    }

    #[test]
    fn orbit_members_are_translates_with_equal_signs() {
        let r3 = orbit_consistency(3, &caps()).unwrap();
        assert!(r3.holds());
        assert_eq!(r3.faces_checked, 13);
        // 6 splits of the top face + 2 per edge: 18 incidences in all.
        assert_eq!(r3.incidences_checked, 18);
        let r4 = orbit_consistency(4, &caps()).unwrap();
        assert!(r4.holds());
        assert_eq!(r4.faces_checked, 75);
    }

    #[test]
    fn plain_quotient_cells_and_boundaries() {
        let c2 = quotient_complex(QuotientSpace::C, 2, &caps()).unwrap();
        assert_eq!(c2.cell_counts(), vec![1, 1]);
        assert!(c2.boundary(1).is_zero());
        assert_eq!(c2.euler_characteristic(), 0); // a circle

        let c3 = quotient_complex(QuotientSpace::C, 3, &caps()).unwrap();
        assert_eq!(c3.cell_counts(), vec![1, 3, 1]);
        assert!((1..=c3.top_dim()).all(|d| c3.boundary(d).is_zero()));
        let h = homology(&c3).unwrap();
        assert_eq!(
            h,
            vec![
                HomologyGroup::free(1),
                HomologyGroup::free(3),
                HomologyGroup::free(1)
            ]
        );

        let c4 = quotient_complex(QuotientSpace::C, 4, &caps()).unwrap();
        // Cells in dimension d are partitions into n - d blocks.
        assert_eq!(c4.cell_counts(), vec![1, 6, 7, 1]);
        assert!((1..=c4.top_dim()).all(|d| c4.boundary(d).is_zero()));
        let h4 = homology(&c4).unwrap();
        let ranks: Vec<usize> = h4.iter().map(|g| g.free_rank).collect();
        assert_eq!(ranks, vec![1, 6, 7, 1]);
        assert!(h4.iter().all(HomologyGroup::is_free));
    }

    #[test]
    fn ordered_quotient_cells_and_boundaries() {
        let q3 = quotient_complex(QuotientSpace::Qc, 3, &caps()).unwrap();
        assert_eq!(q3.cell_counts(), vec![1, 6, 6]);
        assert!((1..=q3.top_dim()).all(|d| q3.boundary(d).is_zero()));
        let h = homology(&q3).unwrap();
        let ranks: Vec<usize> = h.iter().map(|g| g.free_rank).collect();
        assert_eq!(ranks, vec![1, 6, 6]);
        assert_eq!(q3.euler_characteristic(), 1);

        let q4 = quotient_complex(QuotientSpace::Qc, 4, &caps()).unwrap();
        let counts = q4.cell_counts();
        // Cells in dimension d carry n - d ordered blocks.
        for (d, &c) in counts.iter().enumerate() {
            assert_eq!(Int::from(c), lah(4, 4 - d));
        }
        assert!((1..=q4.top_dim()).all(|d| q4.boundary(d).is_zero()));
    }

    #[test]
    fn ordered_cell_counts_satisfy_the_two_term_recursion() {
        // With A(n, p) = ordered-block cells with p blocks:
        // A(n, p) = A(n-1, p-1) + (n + p - 1) A(n-1, p).
        let count = |n: u8, p: usize| -> i64 {
            if p == 0 || p > n as usize {
                return 0;
            }
            BlockOrderedPartition::enumerate(n)
                .into_iter()
                .filter(|c| c.blocks().len() == p)
                .count() as i64
        };
        for n in 2..=5u8 {
            for p in 1..=n as usize {
                let direct = count(n, p);
                let recursed =
                    count(n - 1, p - 1) + (n as i64 + p as i64 - 1) * count(n - 1, p);
                assert_eq!(direct, recursed, "A({n},{p})");
                assert_eq!(Int::from(direct), lah(n as usize, p));
            }
        }
    }

    #[test]
    fn literal_gluing_matches_direct_enumeration() {
        for n in 2..=3u8 {
            let literal = literal_block_ordered_cells(n);
            let direct = group_by_dim(
                BlockOrderedPartition::enumerate(n),
                n,
                BlockOrderedPartition::dim,
            );
            assert_eq!(literal, direct, "n = {n}");
        }
    }

    #[test]
    fn torsion_is_reported() {
        // A complex with one cell in each of dimensions 0..=2 where the
        // 2-cell wraps twice around the 1-cell: H_0 = Z, H_1 = Z/2, H_2 = 0.
        let mut b1 = SparseMat::new(1, 1);
        let _ = &mut b1; // boundary of the 1-cell is zero
        let mut b2 = SparseMat::new(1, 1);
        b2.set(0, 0, Rat::from_integer(Int::from(2)));
        let cc = ChainComplex::from_parts(
            vec![
                vec!["v".into()],
                vec!["e".into()],
                vec!["f".into()],
            ],
            vec![SparseMat::new(0, 1), b1, b2],
        )
        .unwrap();
        let h = homology(&cc).unwrap();
        assert_eq!(h[0], HomologyGroup::free(1));
        assert_eq!(
            h[1],
            HomologyGroup {
                free_rank: 0,
                torsion: vec![Int::from(2)]
            }
        );
        assert_eq!(h[2], HomologyGroup::free(0));
        assert_eq!(h[1].to_string(), "Z/2");
        assert_eq!(h[0].to_string(), "Z");
    }

    #[test]
    fn euler_characteristic_is_one_from_counts_alone() {
        for n in 1..=7u8 {
            assert_eq!(euler_characteristic_from_counts(n), Int::one());
        }
    }

    #[test]
    fn face_budget_fails_safe() {
        let err = perm_faces(8, &caps()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert!(perm_faces(0, &caps()).is_err());
    }
}

#[cfg(test)]
mod perf_probe {
    use super::*;

    #[test]
    #[ignore]
    fn scale_probe_n6() {
        let caps = Caps::default();
        let t0 = std::time::Instant::now();
        let cc = perm_complex(6, &caps).unwrap();
        eprintln!("perm_complex(6): {:?}, counts {:?}", t0.elapsed(), cc.cell_counts());
        let t1 = std::time::Instant::now();
        assert!(cc.boundary_squares_to_zero());
        eprintln!("d^2 = 0: {:?}", t1.elapsed());
        let t2 = std::time::Instant::now();
        let h = homology(&cc).unwrap();
        eprintln!("homology(P_6): {:?} -> {:?}", t2.elapsed(), h.iter().map(|g| g.free_rank).collect::<Vec<_>>());
        assert!(h.iter().all(HomologyGroup::is_free));
        let t3 = std::time::Instant::now();
        let r = orbit_consistency(6, &caps).unwrap();
        eprintln!("orbit_consistency(6): {:?}, faces {}, incidences {}", t3.elapsed(), r.faces_checked, r.incidences_checked);
        assert!(r.holds());
        let t4 = std::time::Instant::now();
        let qc = quotient_complex(QuotientSpace::Qc, 6, &caps).unwrap();
        let c = quotient_complex(QuotientSpace::C, 6, &caps).unwrap();
        eprintln!("quotients(6): {:?}, C counts {:?}, QC counts {:?}", t4.elapsed(), c.cell_counts(), qc.cell_counts());
        assert!((1..=c.top_dim()).all(|d| c.boundary(d).is_zero()));
        assert!((1..=qc.top_dim()).all(|d| qc.boundary(d).is_zero()));
    }
}

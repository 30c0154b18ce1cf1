//! Exact sparse linear algebra over the rationals and the integers.
//!
//! Everything downstream (graded dimensions, span membership, homology)
//! reduces to two primitives implemented here: rank of a sparse rational
//! matrix by fraction-free Gaussian elimination with Markowitz pivoting,
//! and the Smith normal form of a sparse integer matrix.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational.  Always stored reduced with a positive
/// denominator (the backing type maintains that invariant on construction).
pub type Rat = BigRational;
pub type Int = BigInt;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// A sparse row: strictly increasing column indices, nonzero coefficients.
pub type SparseRow = Vec<(usize, Rat)>;

/// Sparse rational matrix with explicit shape.  Entries are stored in a
/// map keyed `(row, col)`; absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    nrows: usize,
    ncols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl SparseMat {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            nrows,
            ncols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMat::new(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseRow>) -> Self {
        let mut m = SparseMat::new(rows.len(), ncols);
        for (r, row) in rows.into_iter().enumerate() {
            for (c, v) in row {
                m.add_to(r, c, v);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Add `v` to the entry at `(r, c)`, dropping it if the sum is zero.
    pub fn add_to(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.nrows && c < self.ncols, "entry out of shape");
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((r, c)).or_insert_with(Rat::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.nrows && c < self.ncols, "entry out of shape");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> SparseMat {
        let mut t = SparseMat::new(self.ncols, self.nrows);
        for (&(r, c), v) in &self.entries {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in mul");
        let mut out = SparseMat::new(self.nrows, other.ncols);
        // Row-major view of `other` for the inner loop.
        let mut rows_of_other: BTreeMap<usize, Vec<(usize, &Rat)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            rows_of_other.entry(r).or_default().push((c, v));
        }
        for (&(r, k), a) in &self.entries {
            if let Some(row) = rows_of_other.get(&k) {
                for &(c, b) in row {
                    out.add_to(r, c, a * b);
                }
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|v| v.denom().is_one())
    }

    fn rows(&self) -> Vec<SparseRow> {
        let mut rows: Vec<SparseRow> = vec![Vec::new(); self.nrows];
        for (&(r, c), v) in &self.entries {
            rows[r].push((c, v.clone()));
        }
        rows
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rank_of_rows(self.ncols, self.rows())
    }

    /// Positive invariant factors `d_1 | d_2 | ...` of an integer matrix.
    /// The number of factors equals the rank; unit factors are included.
    pub fn smith_normal_form(&self) -> Result<Vec<Int>> {
        if !self.is_integral() {
            return Err(Error::InvalidInput(
                "smith_normal_form requires integer entries".into(),
            ));
        }
        let mut engine = SmithEngine::new(self);
        Ok(engine.run())
    }
}

/// Rank of a set of sparse rational rows, streamed into the eliminator.
/// This is the single rank engine behind every dimension computation.
pub fn rank_of_rows<I>(ncols: usize, rows: I) -> usize
where
    I: IntoIterator<Item = SparseRow>,
{
    let mut elim = RankElim::new(ncols);
    for row in rows {
        elim.add_row(scale_to_int(row));
    }
    elim.run()
}

/// Clear denominators and strip integer content; rank is unchanged.
fn scale_to_int(row: SparseRow) -> Vec<(u32, Int)> {
    if row.is_empty() {
        return Vec::new();
    }
    let mut lcm = Int::one();
    for (_, v) in &row {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: Vec<(u32, Int)> = row
        .iter()
        .map(|(c, v)| (*c as u32, v.numer() * (&lcm / v.denom())))
        .collect();
    out.sort_by_key(|e| e.0);
    strip_content(&mut out);
    out
}

fn strip_content(row: &mut [(u32, Int)]) {
    let mut g = Int::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > Int::one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `dst*dst[c0] - src*(dst coefficient at c0)` is the classic elimination
/// step; this merges the two sorted rows, cancels column `c0` exactly and
/// strips content afterwards.
fn eliminate_col(dst: &[(u32, Int)], src: &[(u32, Int)], c0: u32) -> Vec<(u32, Int)> {
    let a = &dst[dst.binary_search_by_key(&c0, |e| e.0).expect("dst lacks pivot col")].1;
    let b = &src[src.binary_search_by_key(&c0, |e| e.0).expect("src lacks pivot col")].1;
    // dst*b - src*a cancels at c0.
    let mut out = Vec::with_capacity(dst.len() + src.len() - 2);
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = match (dst.get(i), src.get(j)) {
            (Some(x), Some(y)) => {
                if x.0 == y.0 {
                    let v = &x.1 * b - &y.1 * a;
                    if !v.is_zero() {
                        out.push((x.0, v));
                    }
                    i += 1;
                    j += 1;
                    continue;
                }
                x.0 < y.0
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_dst {
            let v = &dst[i].1 * b;
            out.push((dst[i].0, v));
            i += 1;
        } else {
            let v = -(&src[j].1 * a);
            out.push((src[j].0, v));
            j += 1;
        }
    }
    strip_content(&mut out);
    out
}

/// Sparse Gaussian elimination with Markowitz pivot selection.
///
/// Pivot columns are chosen by (lazily maintained) minimum live count; the
/// pivot row within a column is the shortest one.  A handful of candidate
/// columns compete on the Markowitz cost `(row_len-1)*(col_len-1)`, which
/// keeps fill-in low on the very sparse relation-span matrices this is
/// used for.
struct RankElim {
    rows: Vec<Option<Vec<(u32, Int)>>>,
    col_rows: Vec<Vec<u32>>,
    col_len: Vec<u32>,
    col_done: Vec<bool>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
}

impl RankElim {
    fn new(ncols: usize) -> Self {
        RankElim {
            rows: Vec::new(),
            col_rows: vec![Vec::new(); ncols],
            col_len: vec![0; ncols],
            col_done: vec![false; ncols],
            heap: BinaryHeap::new(),
        }
    }

    fn add_row(&mut self, row: Vec<(u32, Int)>) {
        if row.is_empty() {
            return;
        }
        let id = self.rows.len() as u32;
        for (c, _) in &row {
            self.col_rows[*c as usize].push(id);
            self.col_len[*c as usize] += 1;
        }
        self.rows.push(Some(row));
    }

    fn row_has_col(&self, r: u32, c: u32) -> bool {
        self.rows[r as usize]
            .as_ref()
            .map_or(false, |row| row.binary_search_by_key(&c, |e| e.0).is_ok())
    }

    /// Drop stale references and refresh the live count for a column.
    fn prune_col(&mut self, c: u32) {
        let rows = &self.rows;
        self.col_rows[c as usize].retain(|&r| {
            rows[r as usize]
                .as_ref()
                .map_or(false, |row| row.binary_search_by_key(&c, |e| e.0).is_ok())
        });
        self.col_len[c as usize] = self.col_rows[c as usize].len() as u32;
    }

    fn run(&mut self) -> usize {
        for c in 0..self.col_len.len() {
            if self.col_len[c] > 0 {
                self.heap.push(Reverse((self.col_len[c], c as u32)));
            }
        }
        let mut rank = 0usize;
        loop {
            // Collect a few validated candidate columns of near-minimal count.
            let mut cands: Vec<(u32, u32)> = Vec::new();
            while let Some(Reverse((len, c))) = self.heap.pop() {
                if self.col_done[c as usize] || self.col_len[c as usize] == 0 {
                    continue;
                }
                self.prune_col(c);
                let cur = self.col_len[c as usize];
                if cur == 0 {
                    continue;
                }
                if cur != len {
                    self.heap.push(Reverse((cur, c)));
                    continue;
                }
                cands.push((len, c));
                if cands.len() >= 4 || len <= 1 {
                    break;
                }
            }
            if cands.is_empty() {
                break;
            }
            // Markowitz cost over the candidates.
            let mut best: Option<(u64, u32, u32)> = None; // (cost, col, row)
            for &(clen, c) in &cands {
                let mut best_row: Option<(usize, u32)> = None;
                for &r in &self.col_rows[c as usize] {
                    let rlen = self.rows[r as usize].as_ref().map_or(usize::MAX, Vec::len);
                    if best_row.map_or(true, |(l, br)| (rlen, r) < (l, br)) {
                        best_row = Some((rlen, r));
                    }
                }
                let (rlen, r) = best_row.expect("validated column has a live row");
                let cost = (rlen as u64 - 1) * (clen as u64 - 1);
                if best.map_or(true, |(bc, bcol, _)| (cost, c) < (bc, bcol)) {
                    best = Some((cost, c, r));
                }
            }
            let (_, c0, r0) = best.expect("candidates nonempty");
            // Unused candidates go back to the heap.
            for &(len, c) in &cands {
                if c != c0 {
                    self.heap.push(Reverse((len, c)));
                }
            }

            let pivot_row = self.rows[r0 as usize].take().expect("pivot row live");
            self.col_done[c0 as usize] = true;
            // Receding references of the retired pivot row.
            for &(c, _) in &pivot_row {
                if c != c0 {
                    self.col_len[c as usize] = self.col_len[c as usize].saturating_sub(1);
                    self.heap.push(Reverse((self.col_len[c as usize], c)));
                }
            }

            let victims: Vec<u32> = self.col_rows[c0 as usize]
                .iter()
                .copied()
                .filter(|&r| r != r0 && self.row_has_col(r, c0))
                .collect();
            for r in victims {
                // A row can sit in the reference list twice (it lost this
                // column by cancellation, then regained it); the first
                // elimination already cleared it, so re-validate at take time.
                if !self.row_has_col(r, c0) {
                    continue;
                }
                let old = self.rows[r as usize].take().expect("victim row live");
                let new = eliminate_col(&old, &pivot_row, c0);
                // Diff column references between old and new.
                let (mut i, mut j) = (0, 0);
                while i < old.len() || j < new.len() {
                    match (old.get(i), new.get(j)) {
                        (Some(x), Some(y)) if x.0 == y.0 => {
                            i += 1;
                            j += 1;
                        }
                        (Some(x), y) if y.map_or(true, |y| x.0 < y.0) => {
                            // column lost
                            let c = x.0;
                            self.col_len[c as usize] = self.col_len[c as usize].saturating_sub(1);
                            if !self.col_done[c as usize] {
                                self.heap.push(Reverse((self.col_len[c as usize], c)));
                            }
                            i += 1;
                        }
                        (_, Some(y)) => {
                            // column gained
                            let c = y.0;
                            self.col_rows[c as usize].push(r);
                            self.col_len[c as usize] += 1;
                            if !self.col_done[c as usize] {
                                self.heap.push(Reverse((self.col_len[c as usize], c)));
                            }
                            j += 1;
                        }
                        (None, None) => break,
                        _ => unreachable!(),
                    }
                }
                if !new.is_empty() {
                    self.rows[r as usize] = Some(new);
                }
            }
            self.col_rows[c0 as usize].clear();
            self.col_len[c0 as usize] = 0;
            rank += 1;
        }
        rank
    }
}

/// Incremental row-echelon accumulator over the rationals, for span
/// membership tests and small rank computations.  Pivot rows are kept
/// normalized with leading coefficient 1.
#[derive(Debug, Clone)]
pub struct RowSpace {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Fully reduce `row` against the stored pivots.
    ///
    /// Pivot rows are kept in reduced echelon form (their tails avoid every
    /// pivot column), so eliminating a pivot column never reintroduces
    /// another one and a single ordered pass suffices.
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        let mut work: BTreeMap<usize, Rat> = BTreeMap::new();
        for (c, v) in row {
            if !v.is_zero() {
                let slot = work.entry(c).or_insert_with(Rat::zero);
                *slot += v;
                if slot.is_zero() {
                    work.remove(&c);
                }
            }
        }
        let cols: Vec<usize> = work.keys().copied().collect();
        for c in cols {
            let coeff = match work.get(&c) {
                Some(v) if !v.is_zero() => v.clone(),
                _ => continue,
            };
            if let Some(piv) = self.pivots.get(&c) {
                for (pc, pv) in piv {
                    let slot = work.entry(*pc).or_insert_with(Rat::zero);
                    *slot -= &coeff * pv;
                    if slot.is_zero() {
                        work.remove(pc);
                    }
                }
            }
        }
        work.retain(|_, v| !v.is_zero());
        work.into_iter().collect()
    }

    /// Insert a row; returns true when it enlarged the span.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let red = self.reduce(row);
        if red.is_empty() {
            return false;
        }
        let lead = red[0].0;
        let lead_coeff = red[0].1.clone();
        let normalized: SparseRow = red.into_iter().map(|(c, v)| (c, v / &lead_coeff)).collect();
        // Back-substitute into existing pivots to keep rows fully reduced.
        let mut updates: Vec<(usize, SparseRow)> = Vec::new();
        for (&pc, prow) in &self.pivots {
            if prow.iter().any(|(c, _)| *c == lead) {
                let coeff = prow
                    .iter()
                    .find(|(c, _)| *c == lead)
                    .map(|(_, v)| v.clone())
                    .expect("just found");
                let mut map: BTreeMap<usize, Rat> = prow.iter().cloned().collect();
                for (c, v) in &normalized {
                    let slot = map.entry(*c).or_insert_with(Rat::zero);
                    *slot -= &coeff * v;
                    if slot.is_zero() {
                        map.remove(c);
                    }
                }
                updates.push((pc, map.into_iter().collect()));
            }
        }
        for (pc, row) in updates {
            self.pivots.insert(pc, row);
        }
        self.pivots.insert(lead, normalized);
        true
    }

    /// Span-membership test.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }
}

/// Smith normal form of a sparse integer matrix.
///
/// The engine keeps row-major and column-occupancy indexes, picks a pivot of
/// minimal absolute value (preferring units with low fill), isolates its row
/// and column by exact Euclidean steps, then fixes up the divisibility chain
/// on the collected diagonal with pairwise gcd/lcm.
struct SmithEngine {
    rows: Vec<BTreeMap<u32, Int>>,
    cols: Vec<std::collections::BTreeSet<u32>>,
}

impl SmithEngine {
    fn new(m: &SparseMat) -> Self {
        let mut rows: Vec<BTreeMap<u32, Int>> = vec![BTreeMap::new(); m.nrows()];
        let mut cols = vec![std::collections::BTreeSet::new(); m.ncols()];
        for (r, c, v) in m.entries() {
            rows[r].insert(c as u32, v.numer().clone());
            cols[c].insert(r as u32);
        }
        SmithEngine { rows, cols }
    }

    fn set_entry(&mut self, r: u32, c: u32, v: Int) {
        if v.is_zero() {
            self.rows[r as usize].remove(&c);
            self.cols[c as usize].remove(&r);
        } else {
            self.rows[r as usize].insert(c, v);
            self.cols[c as usize].insert(r);
        }
    }

    /// rows[dst] -= q * rows[src]
    fn row_sub(&mut self, dst: u32, src: u32, q: &Int) {
        if q.is_zero() {
            return;
        }
        let src_row: Vec<(u32, Int)> = self.rows[src as usize]
            .iter()
            .map(|(c, v)| (*c, v.clone()))
            .collect();
        for (c, v) in src_row {
            let cur = self.rows[dst as usize].get(&c).cloned().unwrap_or_default();
            self.set_entry(dst, c, cur - q * &v);
        }
    }

    /// cols[dst] -= q * cols[src], expressed through row storage.
    fn col_sub(&mut self, dst: u32, src: u32, q: &Int) {
        if q.is_zero() {
            return;
        }
        let rows_hit: Vec<u32> = self.cols[src as usize].iter().copied().collect();
        for r in rows_hit {
            let v = self.rows[r as usize].get(&src).cloned().unwrap_or_default();
            let cur = self.rows[r as usize].get(&dst).cloned().unwrap_or_default();
            self.set_entry(r, dst, cur - q * &v);
        }
    }

    fn find_pivot(&self) -> Option<(u32, u32)> {
        // Prefer a unit entry with minimal fill; otherwise any entry of
        // minimal absolute value.
        let mut best_unit: Option<(usize, u32, u32)> = None;
        let mut best_any: Option<(Int, u32, u32)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let fill = (row.len() - 1) * (self.cols[*c as usize].len() - 1);
                let a = v.abs();
                if a.is_one() {
                    if best_unit.map_or(true, |(f, br, bc)| (fill, r as u32, *c) < (f, br, bc)) {
                        best_unit = Some((fill, r as u32, *c));
                    }
                } else if best_any
                    .as_ref()
                    .map_or(true, |(bv, _, _)| a < *bv)
                {
                    best_any = Some((a, r as u32, *c));
                }
            }
        }
        if let Some((_, r, c)) = best_unit {
            return Some((r, c));
        }
        best_any.map(|(_, r, c)| (r, c))
    }

    fn run(&mut self) -> Vec<Int> {
        let mut diag: Vec<Int> = Vec::new();
        while let Some((mut r0, mut c0)) = self.find_pivot() {
            // Improve the pivot (truncated division leaves |rem| < |d|, so
            // the pivot magnitude strictly decreases) until it divides every
            // entry in its row and column.
            'improve: loop {
                let d = self.rows[r0 as usize]
                    .get(&c0)
                    .cloned()
                    .expect("pivot entry");
                let col_rows: Vec<u32> = self.cols[c0 as usize]
                    .iter()
                    .copied()
                    .filter(|&r| r != r0)
                    .collect();
                for r in col_rows {
                    let v = self.rows[r as usize]
                        .get(&c0)
                        .cloned()
                        .expect("indexed entry");
                    let (q, rem) = v.div_rem(&d);
                    if !rem.is_zero() {
                        self.row_sub(r, r0, &q);
                        r0 = r;
                        continue 'improve;
                    }
                }
                let row_cols: Vec<u32> = self.rows[r0 as usize]
                    .keys()
                    .copied()
                    .filter(|&c| c != c0)
                    .collect();
                for c in row_cols {
                    let v = self.rows[r0 as usize]
                        .get(&c)
                        .cloned()
                        .expect("key present");
                    let (q, rem) = v.div_rem(&d);
                    if !rem.is_zero() {
                        self.col_sub(c, c0, &q);
                        c0 = c;
                        continue 'improve;
                    }
                }
                break;
            }
            // The pivot now divides its row and column: clear the column
            // first (other rows), then the row.  After the column is clear,
            // column operations touch only the pivot row.
            let d = self.rows[r0 as usize]
                .get(&c0)
                .cloned()
                .expect("pivot entry");
            let col_rows: Vec<u32> = self.cols[c0 as usize]
                .iter()
                .copied()
                .filter(|&r| r != r0)
                .collect();
            for r in col_rows {
                let v = self.rows[r as usize]
                    .get(&c0)
                    .cloned()
                    .expect("indexed entry");
                let q = v / &d;
                self.row_sub(r, r0, &q);
            }
            let row_cols: Vec<u32> = self.rows[r0 as usize]
                .keys()
                .copied()
                .filter(|&c| c != c0)
                .collect();
            for c in row_cols {
                let v = self.rows[r0 as usize]
                    .get(&c)
                    .cloned()
                    .expect("key present");
                let q = v / &d;
                self.col_sub(c, c0, &q);
            }
            debug_assert_eq!(self.cols[c0 as usize].len(), 1);
            debug_assert_eq!(self.rows[r0 as usize].len(), 1);
            diag.push(d.abs());
            self.set_entry(r0, c0, Int::zero());
        }
        // Pairwise gcd/lcm closure realizes the divisibility chain of a
        // diagonal matrix without tracking transforms.
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..diag.len() {
                for j in (i + 1)..diag.len() {
                    let g = diag[i].gcd(&diag[j]);
                    let l = (&diag[i] / &g) * &diag[j];
                    if g != diag[i] {
                        diag[i] = g;
                        diag[j] = l;
                        changed = true;
                    }
                }
            }
        }
        diag.sort();
        diag
    }
}

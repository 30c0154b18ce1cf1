//! Small enumeration helpers shared across modules: set partitions,
//! ordered set partitions, permutations and subsets.
//!
//! Everything returns canonical representatives: elements inside a block
//! ascend, and unordered block lists are sorted by block minimum.

/// All set partitions of `items` (which must be strictly increasing).
/// Blocks ascend internally; blocks are ordered by their minima.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let rest = &items[1..];
    let mut out = Vec::new();
    for mut part in set_partitions(rest) {
        // Insert `first` into each existing block, or as a new block.
        for i in 0..part.len() {
            let mut p = part.clone();
            p[i].push(first);
            p[i].sort_unstable();
            p.sort_by_key(|b| b[0]);
            out.push(p);
        }
        part.push(vec![first]);
        part.sort_by_key(|b| b[0]);
        out.push(part);
    }
    out.sort();
    out
}

/// All ordered set partitions (compositions into nonempty labeled blocks)
/// of `items`, grouped as flat list; block order matters.
pub fn ordered_set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for part in set_partitions(items) {
        for perm in permutations(part.len()) {
            let arranged: Vec<Vec<usize>> = perm.iter().map(|&i| part[i].clone()).collect();
            out.push(arranged);
        }
    }
    out.sort();
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Proper nonempty subsets of `items` paired with their complements,
/// i.e. all ways to split a block into an ordered pair of nonempty parts.
pub fn ordered_splits(items: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = items.len();
    let mut out = Vec::new();
    // Bitmask over positions; skip empty and full.
    for mask in 1..(1u64 << n) - 1 {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.push(x);
            } else {
                b.push(x);
            }
        }
        out.push((a, b));
    }
    out
}

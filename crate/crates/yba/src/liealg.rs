//! Graded dimensions of presented Lie algebras via the tensor-algebra
//! embedding, the necklace/bracket free-Lie dimension oracle, and
//! verification of Lie-algebra morphisms given on generators.
//!
//! A presented Lie algebra with quadratic (degree-2 commutator) relations
//! is handled by spinning the relation ideal degree by degree inside the
//! tensor algebra: `I_2` is the span of the relations and
//! `I_{k+1} = [generators, I_k]`, which is complete because the adjoint
//! action of the enveloping algebra is generated in degree one.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exact::{rank_of_rows, Int, Rat, RowSpace, SparseRow};
use crate::ncalg::{DegreeSlice, RelationSpan};
use crate::presentations::{Element, GenMap, PresKind, Presentation};
use crate::series::moebius;

/// Dimension of the degree-`d` component of the free Lie algebra on `m`
/// generators (necklace formula).
pub fn free_lie_dim(m: usize, d: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "free Lie algebra components start at degree 1".into(),
        ));
    }
    let mut sum = Int::zero();
    for e in 1..=d {
        if d % e == 0 {
            sum += moebius(e) * Int::from(m).pow((d / e) as u32);
        }
    }
    let (q, r) = num::Integer::div_rem(&sum, &Int::from(d));
    debug_assert!(r.is_zero());
    usize::try_from(&q).map_err(|_| Error::InvalidInput("free Lie dimension overflow".into()))
}

/// The same dimension as the rank of all left-normed brackets
/// `[[..[g_{i_1}, g_{i_2}], ..], g_{i_d}]` expanded in the degree-`d`
/// tensor slice — an independent cross-check of [`free_lie_dim`].
pub fn free_lie_dim_by_bracket_rank(m: usize, d: usize, caps: &Caps) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "free Lie algebra components start at degree 1".into(),
        ));
    }
    let mut width = 1usize;
    for _ in 0..d {
        width = width
            .checked_mul(m)
            .filter(|w| *w <= caps.max_columns)
            .ok_or_else(|| Error::cap("bracket span columns", usize::MAX, caps.max_columns))?;
    }
    let mut rows: Vec<SparseRow> = Vec::new();
    let mut choice = vec![0usize; d];
    loop {
        // expand the left-normed bracket of this letter choice
        let mut expansion: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
        expansion.insert(vec![choice[0]], Rat::one());
        for &g in &choice[1..] {
            let mut next: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
            for (w, c) in &expansion {
                let mut right = w.clone();
                right.push(g);
                let mut left = vec![g];
                left.extend_from_slice(w);
                *next.entry(right).or_insert_with(Rat::zero) += c;
                *next.entry(left).or_insert_with(Rat::zero) -= c;
            }
            next.retain(|_, c| !c.is_zero());
            expansion = next;
        }
        let mut row: SparseRow = expansion
            .into_iter()
            .map(|(w, c)| (w.iter().fold(0usize, |acc, &l| acc * m + l), c))
            .collect();
        row.sort_by_key(|(c, _)| *c);
        rows.push(row);
        // next letter choice
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(rank_of_rows(width, rows));
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < m {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Which side the generator is bracketed on while spinning the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketSide {
    Left,
    Right,
}

fn spin_ideal(
    pres: &Presentation,
    ideal: &[Element],
    d: usize,
    side: BracketSide,
    caps: &Caps,
) -> Result<Vec<Element>> {
    let slice = DegreeSlice::new(pres, d, caps)?;
    let mut space = RowSpace::new(slice.width());
    let mut next = Vec::new();
    for g in pres.generators() {
        let ge = Element::from_gen(*g);
        for e in ideal {
            let br = match side {
                BracketSide::Left => Element::commutator(&ge, e),
                BracketSide::Right => Element::commutator(e, &ge),
            };
            if br.is_zero() {
                continue;
            }
            if space.insert(slice.row_of(&br)?) {
                next.push(br);
            }
        }
    }
    Ok(next)
}

/// Graded dimensions (degrees 1..=dmax) of the presented Lie algebra:
/// free Lie dimension minus the rank of the relation-ideal component.
pub fn lie_graded_dims_sided(
    pres: &Presentation,
    dmax: usize,
    side: BracketSide,
    caps: &Caps,
) -> Result<Vec<usize>> {
    let m = pres.generator_count();
    let mut out = Vec::new();
    if dmax == 0 {
        return Ok(out);
    }
    out.push(m);
    let mut ideal: Vec<Element> = pres.relations().to_vec();
    for d in 2..=dmax {
        if d > 2 {
            ideal = spin_ideal(pres, &ideal, d, side, caps)?;
        }
        out.push(free_lie_dim(m, d)? - ideal.len());
    }
    Ok(out)
}

pub fn lie_graded_dims(pres: &Presentation, dmax: usize, caps: &Caps) -> Result<Vec<usize>> {
    lie_graded_dims_sided(pres, dmax, BracketSide::Left, caps)
}

pub fn lie_graded_dim(pres: &Presentation, d: usize, caps: &Caps) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "graded Lie components start at degree 1".into(),
        ));
    }
    Ok(*lie_graded_dims(pres, d, caps)?.last().unwrap())
}

/// Is the generator assignment a morphism of presented Lie algebras?
/// True iff every source relation's image lies in the degree-2 span of the
/// destination relations (sufficient and necessary for quadratic
/// presentations).
pub fn check_morphism(
    src: &Presentation,
    dst: &Presentation,
    gmap: &GenMap,
    caps: &Caps,
) -> Result<bool> {
    for g in src.generators() {
        let img = gmap
            .image(g)
            .ok_or_else(|| Error::InvalidInput(format!("no image assigned to generator {g}")))?;
        if !img.is_zero() && img.degree() != Some(1) {
            return Err(Error::InvalidInput(format!(
                "image of {g} is not homogeneous of degree 1"
            )));
        }
    }
    let span = RelationSpan::new(dst, 2, caps)?;
    for rel in src.relations() {
        let image = gmap.apply(rel)?;
        if !span.contains(&image)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Do the graded dimensions of the split-generator algebra agree with the
/// plain one for all degrees up to `dmax`?
pub fn qtr0_dims_equal_qtr(n: u8, dmax: usize, caps: &Caps) -> Result<bool> {
    let qtr0 = Presentation::new(PresKind::Qtr0, n);
    let qtr = Presentation::new(PresKind::Qtr, n);
    for d in 0..=dmax {
        if crate::ncalg::graded_dimension(&qtr0, d, caps)?
            != crate::ncalg::graded_dimension(&qtr, d, caps)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lie dimensions as big integers, as expected by the series inversions.
pub fn dims_as_ints(dims: &[usize]) -> Vec<Int> {
    dims.iter().map(|&d| Int::from(d)).collect()
}

//! The cross-module verification suite: every check compares two
//! independently computed values (closed-form counting vs. exact linear
//! algebra, geometry vs. series, rewriting vs. ideal membership, …) and
//! passes exactly when they agree.

use rayon::prelude::*;
use serde_json::{json, Value};

use yba::caps::Caps;
use yba::dual::{
    a_basis, dual_dimension_by_rank, orthogonality_check, qa0_bidegree_counts, qa0_degree_counts,
};
use yba::liealg::{check_morphism, lie_graded_dims, qtr0_dims_equal_qtr};
use yba::ncalg::{
    count_legal, enumerate_legal, Convention, DegreeSlice, RelationSpan, RewriteSystem, Strategy,
};
use yba::presentations::{
    broken_psi_map, cabling_map, psi_map, Element, Gen, PresKind, Presentation, Word,
};
use yba::series::{
    lah, p_poly, p_poly_via_egf, qa0_bidegree_dims, stirling2, u_hilbert, witt_inversion,
    HilbertKind,
};
use yba::topo::{
    euler_characteristic_from_counts, homology, opposite_split_cancellation, orbit_consistency,
    perm_complex, perm_faces, quotient_complex, HomologyGroup, QuotientSpace,
};
use yba::univ::{alpha, check_injectivity, check_rho_disjointness};
use yba::{Error, Result};

/// One verification step: `run` recomputes the measured side, which must
/// equal `expected` exactly.
pub struct Check {
    pub name: &'static str,
    pub expected: Value,
    pub run: Box<dyn Fn() -> Value + Send + Sync>,
}

/// The outcome of one executed check.
pub struct CheckOutcome {
    pub name: &'static str,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl CheckOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.pass,
        })
    }
}

/// Run the checks on a worker pool of `jobs` threads (0 = one per core);
/// outcomes keep the build order regardless of scheduling.
pub fn run_suite(checks: Vec<Check>, jobs: usize) -> Vec<CheckOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("worker pool");
    pool.install(|| {
        checks
            .into_par_iter()
            .map(|c| {
                let actual = (c.run)();
                let pass = actual == c.expected;
                CheckOutcome {
                    name: c.name,
                    expected: c.expected,
                    actual,
                    pass,
                }
            })
            .collect()
    })
}

// --- small helpers ----------------------------------------------------------

fn agree() -> Value {
    Value::String("all agree".into())
}

fn fail(msg: String) -> Value {
    Value::String(msg)
}

fn err_value(e: Error) -> Value {
    Value::String(format!("error: {e}"))
}

fn usize_strings(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn tr(n: u8) -> Presentation {
    Presentation::new(PresKind::Tr, n)
}

/// The triangular presentation used by the fault-detecting checks; with the
/// fault injected, the sign of one term of one relation is flipped.
fn tr3_maybe_twisted(inject_fault: bool) -> Presentation {
    let mut p = tr(3);
    if inject_fault {
        p.twist_first_relation();
    }
    p
}

/// Deterministic word sampler: walk the degree slice with a fixed-stride
/// congruential index so the same words are tested on every run.
fn sample_words(pres: &Presentation, degree: usize, caps: &Caps, count: usize) -> Result<Vec<Word>> {
    let slice = DegreeSlice::new(pres, degree, caps)?;
    let width = slice.width();
    let mut idx = 0usize;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        idx = (idx.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407)) % width;
        out.push(slice.word_at(idx));
    }
    Ok(out)
}

fn check_dims_match_series(
    kind: HilbertKind,
    pres_kind: PresKind,
    n: u8,
    dmax: usize,
    caps: &Caps,
) -> (Value, Box<dyn Fn() -> Value + Send + Sync>) {
    let series: Vec<String> = u_hilbert(kind, n as usize, dmax)
        .iter()
        .map(|r| r.to_integer().to_string())
        .collect();
    let expected = Value::Array(series.into_iter().map(Value::String).collect());
    let caps = caps.clone();
    let run = Box::new(move || -> Value {
        let pres = Presentation::new(pres_kind, n);
        let mut dims = Vec::new();
        for d in 0..=dmax {
            match yba::ncalg::graded_dimension(&pres, d, &caps) {
                Ok(v) => dims.push(Value::String(v.to_string())),
                Err(e) => return err_value(e),
            }
        }
        Value::Array(dims)
    });
    (expected, run)
}

// --- the suite ---------------------------------------------------------------

/// Build the verification suite.  `n_max` scales the most expensive site
/// counts (2 ≤ n_max ≤ 6); `inject_fault` flips one relation sign in the
/// three-site triangular presentation so that the fault-detecting checks
/// must fail — a negative control for the whole pipeline.
pub fn build_suite(n_max: u8, caps: &Caps, inject_fault: bool) -> Vec<Check> {
    let n_max = n_max.clamp(2, 6);
    // Topology scales one site past the algebraic checks at equal cost.
    let topo_max = (n_max + 1).min(6).max(3);
    let mut checks: Vec<Check> = Vec::new();

    // -- series ---------------------------------------------------------
    checks.push(Check {
        name: "series-closed-vs-egf",
        expected: agree(),
        run: Box::new(move || {
            for kind in [HilbertKind::Tr, HilbertKind::Qtr] {
                for n in 1..=6usize {
                    let a = p_poly(kind, n);
                    let b = p_poly_via_egf(kind, n);
                    if a.coeffs() != b.coeffs() {
                        return fail(format!("closed form and EGF route differ at n={n}"));
                    }
                }
            }
            agree()
        }),
    });

    // -- graded dimensions vs. series ------------------------------------
    {
        let (expected, run) = check_dims_match_series(HilbertKind::Tr, PresKind::Tr, 3, 4, caps);
        checks.push(Check {
            name: "dims-tr3-match-series",
            expected,
            run,
        });
    }
    if n_max >= 4 {
        let (expected, run) = check_dims_match_series(HilbertKind::Tr, PresKind::Tr, 4, 3, caps);
        checks.push(Check {
            name: "dims-tr4-match-series",
            expected,
            run,
        });
    }
    if n_max >= 3 {
        let (expected, run) = check_dims_match_series(HilbertKind::Qtr, PresKind::Qtr, 3, 3, caps);
        checks.push(Check {
            name: "dims-qtr3-match-series",
            expected,
            run,
        });
    }

    // -- legal words vs. dimensions ---------------------------------------
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "legal-count-matches-dim-n3",
            expected: agree(),
            run: Box::new(move || {
                let pres = tr(3);
                for d in 0..=6usize {
                    let count = count_legal(3, d, Convention::Pro1);
                    let dim = match yba::ncalg::graded_dimension(&pres, d, &caps) {
                        Ok(v) => v,
                        Err(e) => return err_value(e),
                    };
                    if count.to_string() != dim.to_string() {
                        return fail(format!("degree {d}: {count} legal words, dimension {dim}"));
                    }
                }
                agree()
            }),
        });
    }
    if n_max >= 4 {
        let caps = caps.clone();
        checks.push(Check {
            name: "legal-count-dominates-dim-n4",
            expected: agree(),
            run: Box::new(move || {
                // Legal words span every graded piece, so their count can
                // never fall below the dimension (from four sites on it
                // genuinely exceeds it).
                let pres = tr(4);
                for d in 0..=3usize {
                    let count = count_legal(4, d, Convention::Pro1);
                    let dim = match yba::ncalg::graded_dimension(&pres, d, &caps) {
                        Ok(v) => v,
                        Err(e) => return err_value(e),
                    };
                    if count < yba::exact::Int::from(dim) {
                        return fail(format!("degree {d}: {count} legal words < dimension {dim}"));
                    }
                }
                agree()
            }),
        });
    }

    // -- rewriting ---------------------------------------------------------
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "normal-form-idempotent-strategy-free-n3",
            expected: agree(),
            run: Box::new(move || {
                let pres = tr(3);
                for d in [3usize, 4] {
                    let words = match sample_words(&pres, d, &caps, 8) {
                        Ok(w) => w,
                        Err(e) => return err_value(e),
                    };
                    for w in words {
                        let e = Element::from_word(w.clone());
                        let mut left = RewriteSystem::new(3, Convention::Pro1, Strategy::Leftmost);
                        let mut right = RewriteSystem::new(3, Convention::Pro1, Strategy::Rightmost);
                        let mut rnd =
                            RewriteSystem::new(3, Convention::Pro1, Strategy::Random(17));
                        let nf_l = match left.normal_form(&e) {
                            Ok(v) => v,
                            Err(e) => return err_value(e),
                        };
                        let nf_r = match right.normal_form(&e) {
                            Ok(v) => v,
                            Err(e) => return err_value(e),
                        };
                        let nf_x = match rnd.normal_form(&e) {
                            Ok(v) => v,
                            Err(e) => return err_value(e),
                        };
                        if nf_l != nf_r || nf_l != nf_x {
                            return fail(format!("strategies disagree on {w}"));
                        }
                        let again = match left.normal_form(&nf_l) {
                            Ok(v) => v,
                            Err(e) => return err_value(e),
                        };
                        if again != nf_l {
                            return fail(format!("normal form of {w} is not a fixed point"));
                        }
                    }
                }
                agree()
            }),
        });
    }
    {
        // Fault detector 1: the rewritten element must stay congruent to
        // the original modulo the presentation's relation span.
        let caps = caps.clone();
        checks.push(Check {
            name: "normal-form-sound-n3",
            expected: agree(),
            run: Box::new(move || {
                let pres = tr3_maybe_twisted(inject_fault);
                for d in [2usize, 3] {
                    let words = match sample_words(&pres, d, &caps, 12) {
                        Ok(w) => w,
                        Err(e) => return err_value(e),
                    };
                    let span = match RelationSpan::new(&pres, d, &caps) {
                        Ok(s) => s,
                        Err(e) => return err_value(e),
                    };
                    let mut rw = RewriteSystem::new(3, Convention::Pro1, Strategy::Leftmost);
                    for w in words {
                        let e = Element::from_word(w.clone());
                        let nf = match rw.normal_form(&e) {
                            Ok(v) => v,
                            Err(e) => return err_value(e),
                        };
                        match span.contains(&nf.sub(&e)) {
                            Ok(true) => {}
                            Ok(false) => {
                                return fail(format!(
                                    "normal form of {w} is not congruent to it"
                                ))
                            }
                            Err(e) => return err_value(e),
                        }
                    }
                }
                agree()
            }),
        });
    }
    if n_max >= 4 {
        let caps = caps.clone();
        checks.push(Check {
            name: "normal-form-sound-n4",
            expected: agree(),
            run: Box::new(move || {
                let pres = tr(4);
                for d in [2usize, 3] {
                    let words = match sample_words(&pres, d, &caps, 8) {
                        Ok(w) => w,
                        Err(e) => return err_value(e),
                    };
                    let span = match RelationSpan::new(&pres, d, &caps) {
                        Ok(s) => s,
                        Err(e) => return err_value(e),
                    };
                    let mut rw = RewriteSystem::new(4, Convention::Pro1, Strategy::Leftmost);
                    for w in words {
                        let e = Element::from_word(w.clone());
                        let nf = match rw.normal_form(&e) {
                            Ok(v) => v,
                            Err(e) => return err_value(e),
                        };
                        match span.contains(&nf.sub(&e)) {
                            Ok(true) => {}
                            Ok(false) => {
                                return fail(format!(
                                    "normal form of {w} is not congruent to it"
                                ))
                            }
                            Err(e) => return err_value(e),
                        }
                    }
                }
                agree()
            }),
        });
    }

    // -- dual pairings ------------------------------------------------------
    {
        // Fault detector 2: a twisted relation no longer annihilates the
        // dual relation space.
        checks.push(Check {
            name: "orthogonality-tr",
            expected: agree(),
            run: Box::new(move || {
                for n in 2..=n_max.min(4) {
                    let pres = if n == 3 {
                        tr3_maybe_twisted(inject_fault)
                    } else {
                        tr(n)
                    };
                    match orthogonality_check(&pres) {
                        Ok(rep) if rep.holds() => {}
                        Ok(rep) => {
                            return fail(format!(
                                "n={n}: ranks {}+{} of {}, {} nonzero pairings",
                                rep.primal_rank,
                                rep.dual_rank,
                                rep.square_dimension,
                                rep.nonzero_pairings
                            ))
                        }
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }
    if n_max >= 3 {
        checks.push(Check {
            name: "orthogonality-qtr3",
            expected: agree(),
            run: Box::new(move || {
                for kind in [PresKind::Qtr, PresKind::Qtr0] {
                    let pres = Presentation::new(kind, 3);
                    match orthogonality_check(&pres) {
                        Ok(rep) if rep.holds() => {}
                        Ok(rep) => {
                            return fail(format!(
                                "{kind}: ranks {}+{} of {}, {} nonzero pairings",
                                rep.primal_rank,
                                rep.dual_rank,
                                rep.square_dimension,
                                rep.nonzero_pairings
                            ))
                        }
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }
    checks.push(Check {
        name: "dual-a-counts-are-partition-numbers",
        expected: agree(),
        run: Box::new(move || {
            for n in 2..=5u8 {
                let counts: Vec<usize> = a_basis(n).iter().map(|v| v.len()).collect();
                for (k, c) in counts.iter().enumerate() {
                    let want = stirling2(n as usize, n as usize - k);
                    if want.to_string() != c.to_string() {
                        return fail(format!("n={n} degree {k}: {c} vs {want}"));
                    }
                }
            }
            agree()
        }),
    });
    checks.push(Check {
        name: "dual-qa0-counts-match-polynomial",
        expected: agree(),
        run: Box::new(move || {
            for n in 2..=5usize {
                let counts = qa0_degree_counts(n as u8);
                let poly = p_poly(HilbertKind::Qtr, n);
                for (k, c) in counts.iter().enumerate() {
                    if *c != poly.coeff(k).to_integer() {
                        return fail(format!("n={n} degree {k}: {c} vs {}", poly.coeff(k)));
                    }
                }
            }
            agree()
        }),
    });
    checks.push(Check {
        name: "dual-qa0-bidegree-matches-series",
        expected: agree(),
        run: Box::new(move || {
            for n in 2..=4u8 {
                if qa0_bidegree_counts(n) != qa0_bidegree_dims(n as usize) {
                    return fail(format!("bidegree tables differ at n={n}"));
                }
            }
            agree()
        }),
    });
    if n_max >= 3 {
        let caps = caps.clone();
        checks.push(Check {
            name: "dual-dims-by-rank-n3",
            expected: agree(),
            run: Box::new(move || {
                for k in 0..=2usize {
                    match dual_dimension_by_rank(PresKind::DualA, 3, k, &caps) {
                        Ok(dim) => {
                            let want = stirling2(3, 3 - k);
                            if want.to_string() != dim.to_string() {
                                return fail(format!("plain dual degree {k}: {dim} vs {want}"));
                            }
                        }
                        Err(e) => return err_value(e),
                    }
                }
                let counts = qa0_degree_counts(2);
                for k in 0..=1usize {
                    match dual_dimension_by_rank(PresKind::DualQa0, 2, k, &caps) {
                        Ok(dim) => {
                            if counts[k].to_string() != dim.to_string() {
                                return fail(format!(
                                    "split dual degree {k}: {dim} vs {}",
                                    counts[k]
                                ));
                            }
                        }
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }

    // -- Lie dimensions -------------------------------------------------------
    {
        let caps = caps.clone();
        let witt: Vec<String> = witt_inversion(&u_hilbert(HilbertKind::Tr, 3, 4))
            .expect("series of an enveloping algebra")
            .iter()
            .map(|v| v.to_string())
            .collect();
        checks.push(Check {
            name: "lie-dims-match-witt-tr3",
            expected: Value::Array(witt.into_iter().map(Value::String).collect()),
            run: Box::new(move || match lie_graded_dims(&tr(3), 4, &caps) {
                Ok(dims) => usize_strings(&dims),
                Err(e) => err_value(e),
            }),
        });
    }
    if n_max >= 3 {
        let caps1 = caps.clone();
        let witt: Vec<String> = witt_inversion(&u_hilbert(HilbertKind::Qtr, 3, 3))
            .expect("series of an enveloping algebra")
            .iter()
            .map(|v| v.to_string())
            .collect();
        checks.push(Check {
            name: "lie-dims-match-witt-qtr3",
            expected: Value::Array(witt.into_iter().map(Value::String).collect()),
            run: Box::new(move || {
                match lie_graded_dims(&Presentation::new(PresKind::Qtr, 3), 3, &caps1) {
                    Ok(dims) => usize_strings(&dims),
                    Err(e) => err_value(e),
                }
            }),
        });
        let caps2 = caps.clone();
        checks.push(Check {
            name: "qtr0-dims-equal-qtr-n3",
            expected: Value::Bool(true),
            run: Box::new(move || match qtr0_dims_equal_qtr(3, 3, &caps2) {
                Ok(v) => Value::Bool(v),
                Err(e) => err_value(e),
            }),
        });
    }

    // -- morphisms -------------------------------------------------------------
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "symmetrization-is-a-morphism",
            expected: agree(),
            run: Box::new(move || {
                for n in 2..=n_max.min(4) {
                    let src = Presentation::new(PresKind::Pb, n);
                    let dst = Presentation::new(PresKind::Qtr, n);
                    match check_morphism(&src, &dst, &psi_map(n), &caps) {
                        Ok(true) => {}
                        Ok(false) => return fail(format!("fails at n={n}")),
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }
    if n_max >= 3 {
        let caps = caps.clone();
        checks.push(Check {
            name: "broken-symmetrization-fails",
            expected: Value::Bool(false),
            run: Box::new(move || {
                let src = Presentation::new(PresKind::Pb, 3);
                let dst = Presentation::new(PresKind::Qtr, 3);
                match check_morphism(&src, &dst, &broken_psi_map(3), &caps) {
                    Ok(v) => Value::Bool(v),
                    Err(e) => err_value(e),
                }
            }),
        });
    }
    {
        let caps = caps.clone();
        let site_max = n_max.min(3);
        checks.push(Check {
            name: "cabling-maps-are-morphisms",
            expected: agree(),
            run: Box::new(move || {
                for n in 1..=site_max {
                    for m in 1..=site_max {
                        // All functions [n] -> [m], as value tables.
                        let total = (m as usize).pow(n as u32);
                        for code in 0..total {
                            let mut f = Vec::with_capacity(n as usize);
                            let mut c = code;
                            for site in 1..=n {
                                f.push((site, (c % m as usize) as u8 + 1));
                                c /= m as usize;
                            }
                            for kind in [PresKind::Tr, PresKind::Qtr] {
                                let map = match cabling_map(&f, n, m, kind) {
                                    Ok(m) => m,
                                    Err(e) => return err_value(e),
                                };
                                let src = Presentation::new(kind, m);
                                let dst = Presentation::new(kind, n);
                                match check_morphism(&src, &dst, &map, &caps) {
                                    Ok(true) => {}
                                    Ok(false) => {
                                        return fail(format!(
                                            "{kind} cabling {f:?} from {m} to {n} sites fails"
                                        ))
                                    }
                                    Err(e) => return err_value(e),
                                }
                            }
                        }
                    }
                }
                agree()
            }),
        });
    }

    // -- topology ---------------------------------------------------------------
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "face-boundaries-square-to-zero",
            expected: agree(),
            run: Box::new(move || {
                for n in 2..=topo_max {
                    match perm_complex(n, &caps) {
                        Ok(cc) if cc.boundary_squares_to_zero() => {}
                        Ok(_) => return fail(format!("d^2 != 0 at n={n}")),
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "permutohedra-are-contractible",
            expected: agree(),
            run: Box::new(move || {
                for n in 2..=topo_max {
                    let cc = match perm_complex(n, &caps) {
                        Ok(cc) => cc,
                        Err(e) => return err_value(e),
                    };
                    let h = match homology(&cc) {
                        Ok(h) => h,
                        Err(e) => return err_value(e),
                    };
                    if h[0] != HomologyGroup::free(1)
                        || h[1..].iter().any(|g| *g != HomologyGroup::free(0))
                    {
                        return fail(format!("nontrivial homology at n={n}"));
                    }
                }
                agree()
            }),
        });
    }
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "quotient-boundaries-vanish",
            expected: agree(),
            run: Box::new(move || {
                for n in 2..=topo_max {
                    for space in [QuotientSpace::C, QuotientSpace::Qc] {
                        let cc = match quotient_complex(space, n, &caps) {
                            Ok(cc) => cc,
                            Err(e) => return err_value(e),
                        };
                        if (1..=cc.top_dim()).any(|d| !cc.boundary(d).is_zero()) {
                            return fail(format!("{} has a nonzero boundary at n={n}", space.as_str()));
                        }
                    }
                }
                agree()
            }),
        });
    }
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "quotient-homology-matches-polynomials",
            expected: agree(),
            run: Box::new(move || {
                let pairs = [
                    (QuotientSpace::C, HilbertKind::Tr),
                    (QuotientSpace::Qc, HilbertKind::Qtr),
                ];
                for n in 2..=topo_max {
                    for (space, kind) in pairs {
                        let cc = match quotient_complex(space, n, &caps) {
                            Ok(cc) => cc,
                            Err(e) => return err_value(e),
                        };
                        let h = match homology(&cc) {
                            Ok(h) => h,
                            Err(e) => return err_value(e),
                        };
                        let poly = p_poly(kind, n as usize);
                        for (d, g) in h.iter().enumerate() {
                            if !g.is_free() {
                                return fail(format!("{} has torsion at n={n}", space.as_str()));
                            }
                            if poly.coeff(d).to_integer().to_string() != g.free_rank.to_string() {
                                return fail(format!(
                                    "{} rank {} in dimension {d} at n={n}, polynomial says {}",
                                    space.as_str(),
                                    g.free_rank,
                                    poly.coeff(d)
                                ));
                            }
                        }
                    }
                }
                agree()
            }),
        });
    }
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "opposite-splits-cancel",
            expected: agree(),
            run: Box::new(move || {
                for n in 2..=topo_max {
                    match opposite_split_cancellation(n, &caps) {
                        Ok(true) => {}
                        Ok(false) => return fail(format!("split pair survives at n={n}")),
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "orbit-orientations-consistent",
            expected: agree(),
            run: Box::new(move || {
                for n in 2..=topo_max {
                    match orbit_consistency(n, &caps) {
                        Ok(rep) if rep.holds() => {}
                        Ok(rep) => {
                            return fail(format!(
                                "n={n}: translations {}, signs {}",
                                rep.translations_hold, rep.signs_match
                            ))
                        }
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }
    checks.push(Check {
        name: "euler-characteristic-from-counts",
        expected: agree(),
        run: Box::new(move || {
            for n in 1..=7u8 {
                let chi = euler_characteristic_from_counts(n);
                if chi.to_string() != "1" {
                    return fail(format!("chi = {chi} at n={n}"));
                }
            }
            agree()
        }),
    });
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "ordered-block-counts-recursion",
            expected: agree(),
            run: Box::new(move || {
                // Measured cell counts A(n, p) (p blocks in dimension n-p)
                // satisfy A(n,p) = A(n-1,p-1) + (n+p-1) A(n-1,p) and agree
                // with the closed form.
                let upto = topo_max.min(5);
                let mut counts: Vec<Vec<i64>> = vec![Vec::new(); upto as usize + 1];
                for n in 1..=upto {
                    let cc = match quotient_complex(QuotientSpace::Qc, n, &caps) {
                        Ok(cc) => cc,
                        Err(e) => return err_value(e),
                    };
                    // counts[n][p] for p = 1..=n
                    let mut row = vec![0i64; n as usize + 1];
                    for (d, c) in cc.cell_counts().iter().enumerate() {
                        row[n as usize - d] = *c as i64;
                    }
                    counts[n as usize] = row;
                }
                for n in 2..=upto as usize {
                    for p in 1..=n {
                        let prev = &counts[n - 1];
                        let a_prev_less = if p >= 2 {
                            prev.get(p - 1).copied().unwrap_or(0)
                        } else {
                            0
                        };
                        let a_prev = prev.get(p).copied().unwrap_or(0);
                        let recursed = a_prev_less + (n as i64 + p as i64 - 1) * a_prev;
                        if counts[n][p] != recursed {
                            return fail(format!("A({n},{p}) = {} but recursion gives {recursed}", counts[n][p]));
                        }
                        if lah(n, p).to_string() != counts[n][p].to_string() {
                            return fail(format!("A({n},{p}) differs from the closed form"));
                        }
                    }
                }
                agree()
            }),
        });
    }

    // -- universal labels ----------------------------------------------------
    checks.push(Check {
        name: "label-of-worked-example",
        expected: Value::String("k=(3,5,6,6) l=(0,1,3,6) sigma=(1,5,2,6,4,3)".into()),
        run: Box::new(move || {
            let letters = [(3u8, 4u8), (2, 4), (2, 3), (1, 2), (1, 3), (1, 4)];
            let w = Word::from_letters(
                letters.iter().map(|&(i, j)| Gen::R { i, j }).collect(),
            );
            match alpha(&w, 4) {
                Ok(label) => Value::String(label.to_string()),
                Err(e) => err_value(e),
            }
        }),
    });
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "labels-injective-n3",
            expected: agree(),
            run: Box::new(move || {
                for big_n in 1..=4usize {
                    match check_injectivity(3, big_n, &caps) {
                        Ok(rep) => {
                            let legal = count_legal(3, big_n, Convention::Sec6);
                            if !rep.injective() {
                                return fail(format!(
                                    "N={big_n}: {} words, {} labels",
                                    rep.word_count, rep.distinct_labels
                                ));
                            }
                            if legal.to_string() != rep.word_count.to_string() {
                                return fail(format!(
                                    "N={big_n}: enumerated {} words, counted {legal}",
                                    rep.word_count
                                ));
                            }
                        }
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "insertion-matches-labeling",
            expected: agree(),
            run: Box::new(move || {
                // Prepending a letter acts on labels by the insertion map,
                // and peeling undoes it; checked exhaustively over legal
                // words (the class-disjointness report verifies both).
                let mut ranges = vec![(3u8, 4usize)];
                if n_max >= 4 {
                    ranges.push((4, 2));
                }
                for (n, nmax_deg) in ranges {
                    for big_n in 1..=nmax_deg {
                        match check_rho_disjointness(n, big_n, &caps) {
                            Ok(rep) if rep.peeling_consistent => {}
                            Ok(_) => {
                                return fail(format!("peeling breaks at n={n}, N={big_n}"))
                            }
                            Err(e) => return err_value(e),
                        }
                    }
                }
                agree()
            }),
        });
    }
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "label-classes-disjoint-n3",
            expected: agree(),
            run: Box::new(move || {
                for big_n in 1..=4usize {
                    match check_rho_disjointness(3, big_n, &caps) {
                        Ok(rep) if rep.holds() => {}
                        Ok(_) => return fail(format!("classes collide at N={big_n}")),
                        Err(e) => return err_value(e),
                    }
                }
                agree()
            }),
        });
    }

    // -- resource guards --------------------------------------------------------
    {
        let caps = caps.clone();
        checks.push(Check {
            name: "caps-fail-safe",
            expected: Value::String("cap errors".into()),
            run: Box::new(move || {
                match perm_faces(8, &caps) {
                    Err(Error::CapExceeded { .. }) => {}
                    Err(e) => return fail(format!("unexpected error kind: {e}")),
                    Ok(_) => return fail("8-site face enumeration was not capped".into()),
                }
                let tiny = Caps {
                    max_columns: 4,
                    ..caps.clone()
                };
                match yba::ncalg::graded_dimension(&tr(3), 3, &tiny) {
                    Err(Error::CapExceeded { .. }) => {}
                    Err(e) => return fail(format!("unexpected error kind: {e}")),
                    Ok(_) => return fail("rank computation ignored the column cap".into()),
                }
                let few = Caps {
                    max_enumeration: 2,
                    ..caps.clone()
                };
                match enumerate_legal(3, 4, Convention::Pro1, &few) {
                    Err(Error::CapExceeded { .. }) => Value::String("cap errors".into()),
                    Err(e) => fail(format!("unexpected error kind: {e}")),
                    Ok(_) => fail("word enumeration ignored its cap".into()),
                }
            }),
        });
    }

    checks
}

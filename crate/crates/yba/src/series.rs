//! Generating-function side of the toolkit: Hilbert polynomials of the
//! quadratic algebras, their exponential generating functions, reciprocal
//! (enveloping-algebra) series, and the Witt/PBW dimension inversion.
//!
//! All series arithmetic is exact over [`Rat`]; EGFs are handled in divided
//! powers (the stored `u^n` coefficient is `n! * [u^n]`), which keeps every
//! intermediate value an integer polynomial.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat_int, Int, Rat};

/// Which family of Hilbert polynomials to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HilbertKind {
    /// Unitary family: `P_n(t) = sum_k S(n,k) t^(n-k)` (Stirling numbers).
    Tr,
    /// Non-unitary family: `P_n(t) = sum_p C(n-1,p) n!/(n-p)! t^p`
    /// (Lah-type coefficients).
    Qtr,
}

// ---------------------------------------------------------------------------
// Combinatorial numbers
// ---------------------------------------------------------------------------

pub fn factorial(n: usize) -> Int {
    let mut acc = Int::one();
    for k in 2..=n {
        acc *= Int::from(k);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Stirling number of the second kind: partitions of an n-set into k blocks.
pub fn stirling2(n: usize, k: usize) -> Int {
    if n == 0 && k == 0 {
        return Int::one();
    }
    if k == 0 || k > n {
        return Int::zero();
    }
    // S(n,k) = k*S(n-1,k) + S(n-1,k-1)
    let mut row: Vec<Int> = vec![Int::one()]; // S(0,0)
    for m in 1..=n {
        let mut next = vec![Int::zero(); m + 1];
        for (j, item) in next.iter_mut().enumerate().take(m + 1).skip(1) {
            let a = if j <= m - 1 { &row[j] * Int::from(j) } else { Int::zero() };
            let b = if j - 1 <= m - 1 { row[j - 1].clone() } else { Int::zero() };
            *item = a + b;
        }
        if m == n {
            return next[k].clone();
        }
        row = next;
    }
    unreachable!()
}

pub fn bell(n: usize) -> Int {
    (0..=n).map(|k| stirling2(n, k)).sum()
}

/// Lah-type count: partitions of an n-set into k linearly ordered blocks,
/// `L(n,k) = C(n-1,k-1) n!/k!`.
pub fn lah(n: usize, k: usize) -> Int {
    if n == 0 && k == 0 {
        return Int::one();
    }
    if k == 0 || k > n {
        return Int::zero();
    }
    binomial(n - 1, k - 1) * factorial(n) / factorial(k)
}

// ---------------------------------------------------------------------------
// Univariate polynomials / truncated series
// ---------------------------------------------------------------------------

/// Dense univariate polynomial (or truncated power series) over [`Rat`].
///
/// `trunc == None` means the coefficients are exact (a polynomial);
/// `trunc == Some(d)` means the series is only known modulo `t^(d+1)`.
/// Arithmetic propagates the tighter truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySeries {
    coeffs: Vec<Rat>,
    trunc: Option<usize>,
}

impl PolySeries {
    pub fn zero() -> Self {
        PolySeries {
            coeffs: Vec::new(),
            trunc: None,
        }
    }

    pub fn one() -> Self {
        PolySeries::from_coeffs(vec![Rat::one()])
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = PolySeries {
            coeffs,
            trunc: None,
        };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        PolySeries::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, Rat::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn truncated(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self.trunc = Some(order);
        self
    }

    pub fn trunc(&self) -> Option<usize> {
        self.trunc
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Degree of a polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    fn merge_trunc(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (None, t) | (t, None) => t,
            (Some(x), Some(y)) => Some(x.min(y)),
        }
    }

    pub fn add(&self, other: &PolySeries) -> PolySeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        let mut p = PolySeries {
            coeffs,
            trunc: Self::merge_trunc(self.trunc, other.trunc),
        };
        if let Some(d) = p.trunc {
            p.coeffs.truncate(d + 1);
        }
        p.trim();
        p
    }

    pub fn scale(&self, c: &Rat) -> PolySeries {
        let mut p = PolySeries {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
            trunc: self.trunc,
        };
        p.trim();
        p
    }

    pub fn mul(&self, other: &PolySeries) -> PolySeries {
        let trunc = Self::merge_trunc(self.trunc, other.trunc);
        let cap = trunc
            .map(|d| d + 1)
            .unwrap_or(self.coeffs.len() + other.coeffs.len());
        let mut coeffs = vec![Rat::zero(); cap.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= cap {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        let mut p = PolySeries { coeffs, trunc };
        p.trim();
        p
    }

    /// Substitute `t -> -t`.
    pub fn eval_neg(&self) -> PolySeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
            .collect();
        PolySeries {
            coeffs,
            trunc: self.trunc,
        }
    }

    /// Multiplicative inverse modulo `t^(order+1)`; the constant term must
    /// be nonzero.
    pub fn recip(&self, order: usize) -> Result<PolySeries> {
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(Error::InvalidInput(
                "series reciprocal needs a nonzero constant term".into(),
            ));
        }
        let mut out = vec![Rat::zero(); order + 1];
        out[0] = Rat::one() / &a0;
        for k in 1..=order {
            let mut acc = Rat::zero();
            for j in 1..=k {
                acc += self.coeff(j) * &out[k - j];
            }
            out[k] = -acc / &a0;
        }
        Ok(PolySeries {
            coeffs: out,
            trunc: Some(order),
        })
    }

}

// ---------------------------------------------------------------------------
// Hilbert polynomials
// ---------------------------------------------------------------------------

/// Closed-form Hilbert polynomial of the degree-`n` algebra.
pub fn p_poly(kind: HilbertKind, n: usize) -> PolySeries {
    match kind {
        HilbertKind::Tr => {
            // sum_k S(n,k) t^(n-k); degree n-1 for n >= 1, constant 1 for n = 0.
            let mut coeffs = vec![Rat::zero(); n + 1];
            for k in 0..=n {
                coeffs[n - k] = Rat::from_integer(stirling2(n, k));
            }
            PolySeries::from_coeffs(coeffs)
        }
        HilbertKind::Qtr => {
            let mut coeffs = Vec::new();
            if n == 0 {
                coeffs.push(Rat::one());
            }
            for p in 0..n {
                coeffs.push(Rat::from_integer(
                    binomial(n - 1, p) * factorial(n) / factorial(n - p),
                ));
            }
            PolySeries::from_coeffs(coeffs)
        }
    }
}

/// Exponential generating function route to the same polynomials:
/// `sum_n P_n(t) u^n / n!` equals `exp((e^(tu)-1)/t)` for the unitary family
/// and `exp(u/(1-tu))` for the non-unitary one.  Returns `P_0..P_n`.
pub fn p_polys_via_egf(kind: HilbertKind, n: usize) -> Vec<PolySeries> {
    // Divided-powers coefficients of the exponent.
    let mut a: Vec<PolySeries> = vec![PolySeries::zero()];
    for k in 1..=n {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs[k - 1] = match kind {
            HilbertKind::Tr => Rat::one(),
            HilbertKind::Qtr => Rat::from_integer(factorial(k)),
        };
        a.push(PolySeries::from_coeffs(coeffs));
    }
    egf_exp(&a)
}

pub fn p_poly_via_egf(kind: HilbertKind, n: usize) -> PolySeries {
    p_polys_via_egf(kind, n).pop().expect("n+1 entries")
}

/// Exponential of a divided-powers series with vanishing constant term:
/// `E_(m+1) = sum_k C(m,k) A_(k+1) E_(m-k)`.
fn egf_exp(a: &[PolySeries]) -> Vec<PolySeries> {
    assert!(a[0].coeffs().is_empty(), "exp needs zero constant term");
    let n = a.len() - 1;
    let mut e: Vec<PolySeries> = vec![PolySeries::one()];
    for m in 0..n {
        let mut acc = PolySeries::zero();
        for k in 0..=m {
            if k + 1 < a.len() {
                let c = Rat::from_integer(binomial(m, k));
                acc = acc.add(&a[k + 1].mul(&e[m - k]).scale(&c));
            }
        }
        e.push(acc);
    }
    e
}

/// Graded dimensions of the enveloping algebra: coefficients `0..=degree`
/// of `1 / P_n(-t)`.
pub fn u_hilbert(kind: HilbertKind, n: usize, degree: usize) -> Vec<Rat> {
    let p = p_poly(kind, n).eval_neg();
    let r = p.recip(degree).expect("P_n(0) = 1");
    (0..=degree).map(|k| r.coeff(k)).collect()
}

// ---------------------------------------------------------------------------
// Witt / PBW inversion
// ---------------------------------------------------------------------------

pub fn moebius(n: usize) -> i64 {
    let mut m = n;
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if m > 1 {
        mu = -mu;
    }
    mu
}

/// Invert `h(t) = prod_d (1 - t^d)^(-l_d)`: recover `l_1..l_D` from the
/// graded dimensions `h[0..=D]` (with `h[0] = 1`).  Fails with
/// [`Error::NotPbwSeries`] when some `l_d` is negative or fractional.
pub fn witt_inversion(h: &[Rat]) -> Result<Vec<Int>> {
    if h.is_empty() || !h[0].is_one() {
        return Err(Error::InvalidInput(
            "witt_inversion needs a series with constant term 1".into(),
        ));
    }
    let dmax = h.len() - 1;
    // log h by the derivative recurrence: L_m = h_m - (1/m) sum j L_j h_(m-j).
    let mut logh = vec![Rat::zero(); dmax + 1];
    for m in 1..=dmax {
        let mut acc = Rat::zero();
        for j in 1..m {
            acc += &logh[j] * rat_int(j as i64) * &h[m - j];
        }
        logh[m] = &h[m] - acc / rat_int(m as i64);
    }
    // b_m = m * L_m = sum_(d|m) d*l_d; Moebius-invert.
    let b: Vec<Rat> = (0..=dmax)
        .map(|m| &logh[m] * rat_int(m as i64))
        .collect();
    let mut l = Vec::with_capacity(dmax);
    for m in 1..=dmax {
        let mut acc = Rat::zero();
        for d in 1..=m {
            if m % d == 0 {
                acc += rat_int(moebius(m / d)) * &b[d];
            }
        }
        let lm = acc / rat_int(m as i64);
        if !lm.denom().is_one() || lm.numer().is_negative() {
            return Err(Error::NotPbwSeries {
                degree: m,
                value: lm.to_string(),
            });
        }
        l.push(lm.numer().clone());
    }
    Ok(l)
}

/// Partial PBW product `prod_(d<=len(l)) (1 - t^d)^(-l_d)` modulo
/// `t^(order+1)`; the exact converse of [`witt_inversion`].
pub fn pbw_product(l: &[Int], order: usize) -> Vec<Rat> {
    let mut acc = PolySeries::one().truncated(order);
    for (idx, ld) in l.iter().enumerate() {
        let d = idx + 1;
        // (1 - t^d)^(-l) = sum_k C(l+k-1, k) t^(dk)
        let mut coeffs = vec![Rat::zero(); order + 1];
        let mut k = 0usize;
        while d * k <= order {
            let mut c = Rat::one();
            // C(l+k-1, k) with big l
            for i in 0..k {
                c = c * Rat::from_integer(ld - Int::from(1) + Int::from(k - i))
                    / rat_int((i + 1) as i64);
            }
            coeffs[d * k] = c;
            k += 1;
        }
        acc = acc.mul(&PolySeries::from_coeffs(coeffs).truncated(order));
    }
    (0..=order).map(|k| acc.coeff(k)).collect()
}

// ---------------------------------------------------------------------------
// Trivariate refinement
// ---------------------------------------------------------------------------

/// Dense bivariate polynomial in `(t, v)` over [`Rat`]; `coeffs[i][j]` is
/// the coefficient of `t^i v^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly2 {
    coeffs: Vec<Vec<Rat>>,
}

impl Poly2 {
    fn zero() -> Self {
        Poly2 { coeffs: Vec::new() }
    }

    fn one() -> Self {
        Poly2 {
            coeffs: vec![vec![Rat::one()]],
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|row| row.iter().all(Rat::is_zero))
    }

    fn coeff(&self, i: usize, j: usize) -> Rat {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    fn add_assign_scaled(&mut self, other: &Poly2, c: &Rat) {
        for (i, row) in other.coeffs.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                while self.coeffs.len() <= i {
                    self.coeffs.push(Vec::new());
                }
                while self.coeffs[i].len() <= j {
                    self.coeffs[i].push(Rat::zero());
                }
                self.coeffs[i][j] += v * c;
            }
        }
    }

    fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, orow) in other.coeffs.iter().enumerate() {
                    for (m, b) in orow.iter().enumerate() {
                        let v = a * b;
                        if v.is_zero() {
                            continue;
                        }
                        let (ti, vj) = (i + k, j + m);
                        while out.coeffs.len() <= ti {
                            out.coeffs.push(Vec::new());
                        }
                        while out.coeffs[ti].len() <= vj {
                            out.coeffs[ti].push(Rat::zero());
                        }
                        out.coeffs[ti][vj] += v;
                    }
                }
            }
        }
        out
    }

    /// Divide by `t`, which must be exact.
    fn div_t(&self) -> Poly2 {
        assert!(
            self.coeffs.is_empty() || self.coeffs[0].iter().all(Rat::is_zero),
            "division by t must be exact"
        );
        Poly2 {
            coeffs: self.coeffs.iter().skip(1).cloned().collect(),
        }
    }
}

/// Bidegree table `D[p][q]` for the graded dual at `n` sites:
/// `D[p][q]` counts basis elements of total degree `p` whose complementary
/// grading parameter is `q`, extracted from the closed-form generating
/// function `exp(((1-tu)^(-v) - 1)/t)` in divided powers of `u`.
pub fn qa0_bidegree_dims(n: usize) -> Vec<Vec<Int>> {
    // B = -v*log(1-tu) in divided powers: B_k = (k-1)! * v * t^k.
    // exp(B) = (1-tu)^(-v); subtract 1, divide by t, re-exponentiate.
    let mut b: Vec<Poly2> = vec![Poly2::zero()];
    for k in 1..=n {
        let mut p = Poly2::zero();
        p.add_assign_scaled(
            &Poly2 {
                coeffs: {
                    let mut rows = vec![vec![]; k + 1];
                    rows[k] = vec![Rat::zero(), Rat::one()];
                    rows
                },
            },
            &Rat::from_integer(factorial(k - 1)),
        );
        b.push(p);
    }
    let pow = egf_exp2(&b);
    // A_k = ((1-tu)^(-v) - 1)/t in divided powers: drop the constant term
    // and divide each u^k coefficient by t.
    let mut a: Vec<Poly2> = vec![Poly2::zero()];
    for item in pow.iter().take(n + 1).skip(1) {
        a.push(item.div_t());
    }
    let f = egf_exp2(&a);
    let pn = &f[n];
    let mut table = vec![vec![Int::zero(); n + 1]; n.max(1)];
    for p in 0..n.max(1) {
        for q in 0..=n {
            let c = pn.coeff(p, q);
            debug_assert!(c.denom().is_one());
            table[p][q] = c.numer().clone();
        }
    }
    table
}

/// Same recurrence as [`egf_exp`] with bivariate coefficients.
fn egf_exp2(a: &[Poly2]) -> Vec<Poly2> {
    assert!(a[0].is_zero(), "exp needs zero constant term");
    let n = a.len() - 1;
    let mut e: Vec<Poly2> = vec![Poly2::one()];
    for m in 0..n {
        let mut acc = Poly2::zero();
        for k in 0..=m {
            if k + 1 < a.len() {
                let c = Rat::from_integer(binomial(m, k));
                acc.add_assign_scaled(&a[k + 1].mul(&e[m - k]), &c);
            }
        }
        e.push(acc);
    }
    e
}

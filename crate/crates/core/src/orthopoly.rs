//! Shifted Legendre `L_{1,i}(x) = L_i(2x − 1)` and shifted Chebyshev
//! `T_{1,i}(x) = T_i(2x − 1)` polynomials on `[0, 1]`, their monomial forms,
//! and the coefficient containers used throughout the solver.
//!
//! Point evaluation always goes through the three-term recurrences. The
//! factorial/monomial forms are exact for small degrees and are kept for
//! oracles and for the power-rule machinery in [`crate::fracderiv`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Degree up to which the monomial forms are produced in exact integer arithmetic.
pub const MAX_EXACT_DEGREE: usize = 30;

pub(crate) fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(x))
    }
}

/// `L_{1,0}(x), …, L_{1,n}(x)` by the shifted Legendre recurrence. No domain check.
pub(crate) fn legendre_values(n: usize, x: f64) -> Vec<f64> {
    let t = 2.0 * x - 1.0;
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(t);
    }
    for i in 1..n {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0) * t * out[i] - fi * out[i - 1]) / (fi + 1.0);
        out.push(next);
    }
    out
}

/// `T_{1,0}(x), …, T_{1,n}(x)` by the shifted Chebyshev recurrence. No domain check.
pub(crate) fn chebyshev_values(n: usize, x: f64) -> Vec<f64> {
    unshifted_chebyshev_values(n, 2.0 * x - 1.0)
}

pub(crate) fn unshifted_chebyshev_values(n: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(t);
    }
    for i in 1..n {
        let next = 2.0 * t * out[i] - out[i - 1];
        out.push(next);
    }
    out
}

/// Shifted Legendre polynomial `L_{1,i}(x)` for `x ∈ [0, 1]`.
pub fn eval_shifted_legendre(i: usize, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(legendre_values(i, x)[i])
}

/// Shifted Chebyshev polynomial `T_{1,i}(x)` for `x ∈ [0, 1]`.
pub fn eval_shifted_chebyshev(i: usize, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(chebyshev_values(i, x)[i])
}

fn binomial(n: u32, k: u32) -> Option<i128> {
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for j in 0..k {
        acc = acc.checked_mul((n - j) as i128)? / (j + 1) as i128;
    }
    Some(acc)
}

/// Integer monomial coefficients of `L_{1,i}`:
/// `(−1)^{i+k} (i+k)! / ((i−k)! (k!)²) = (−1)^{i+k} C(i+k, k) C(i, k)`.
///
/// Returns `None` once the coefficients overflow `i128` (beyond degree 40);
/// the result is guaranteed for `i ≤ MAX_EXACT_DEGREE`.
pub fn legendre_monomial_exact(i: usize) -> Option<Vec<i128>> {
    let i = u32::try_from(i).ok()?;
    (0..=i)
        .map(|k| {
            let c = binomial(i + k, k)?.checked_mul(binomial(i, k)?)?;
            Some(if (i + k) % 2 == 0 { c } else { -c })
        })
        .collect()
}

/// Integer monomial coefficients of `T_{1,i}`, via `T_{1,i+1} = 2(2x−1)T_{1,i} − T_{1,i−1}`.
pub fn chebyshev_monomial_exact(i: usize) -> Option<Vec<i128>> {
    let mut prev: Vec<i128> = vec![1];
    if i == 0 {
        return Some(prev);
    }
    let mut cur: Vec<i128> = vec![-1, 2];
    for _ in 1..i {
        let mut next = vec![0i128; cur.len() + 1];
        for (k, &c) in cur.iter().enumerate() {
            next[k] = next[k].checked_sub(c.checked_mul(2)?)?;
            next[k + 1] = next[k + 1].checked_add(c.checked_mul(4)?)?;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] = next[k].checked_sub(c)?;
        }
        prev = cur;
        cur = next;
    }
    Some(cur)
}

fn real_monomial_recurrence(i: usize, legendre: bool) -> Vec<f64> {
    let mut prev = vec![1.0];
    if i == 0 {
        return prev;
    }
    let mut cur = vec![-1.0, 2.0];
    for n in 1..i {
        let (a, b) = if legendre {
            let f = n as f64;
            ((2.0 * f + 1.0) / (f + 1.0), f / (f + 1.0))
        } else {
            (2.0, 1.0)
        };
        let mut next = vec![0.0; cur.len() + 1];
        for (k, &c) in cur.iter().enumerate() {
            next[k] -= a * c;
            next[k + 1] += 2.0 * a * c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= b * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn monomial_form(exact: Option<Vec<i128>>, i: usize, legendre: bool) -> MonomialSeries {
    let coeffs: Vec<f64> = match exact {
        Some(c) if i <= MAX_EXACT_DEGREE => c.into_iter().map(|v| v as f64).collect(),
        _ => real_monomial_recurrence(i, legendre),
    };
    MonomialSeries::from_polynomial(&coeffs)
}

/// Monomial expansion of `L_{1,i}`. Exact integer coefficients up to
/// `MAX_EXACT_DEGREE`; beyond that the coefficients come from the recurrence in
/// floating point and lose relative precision roughly like `C(2i, i)·ε`.
pub fn monomial_form_legendre(i: usize) -> MonomialSeries {
    monomial_form(legendre_monomial_exact(i), i, true)
}

/// Monomial expansion of `T_{1,i}`; same precision contract as [`monomial_form_legendre`].
pub fn monomial_form_chebyshev(i: usize) -> MonomialSeries {
    monomial_form(chebyshev_monomial_exact(i), i, false)
}

/// `Σ q x^p` with real exponents `p ≥ 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonomialSeries {
    terms: Vec<(f64, f64)>,
}

impl MonomialSeries {
    /// Builds a series from `(coefficient, exponent)` pairs. Zero coefficients
    /// are dropped; negative or non-finite exponents are rejected.
    pub fn new(terms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut out = Vec::new();
        for (q, p) in terms {
            if !q.is_finite() {
                return Err(Error::NonFinite { value: q, location: format!("coefficient of x^{p}") });
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidArgument(format!("exponent {p} must be finite and >= 0")));
            }
            if q != 0.0 {
                out.push((q, p));
            }
        }
        Ok(MonomialSeries { terms: out })
    }

    /// `Σ coeffs[k] x^k`.
    pub fn from_polynomial(coeffs: &[f64]) -> Self {
        MonomialSeries {
            terms: coeffs.iter().enumerate().filter(|(_, q)| **q != 0.0).map(|(k, &q)| (q, k as f64)).collect(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `x ≥ 0` (any non-negative `x`; not restricted to `[0, 1]`).
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(q, p)| if p == 0.0 { q } else { q * libm::pow(x, p) }).sum()
    }

    pub fn scale(&self, lambda: f64) -> Self {
        MonomialSeries::new(self.terms.iter().map(|&(q, p)| (lambda * q, p))).expect("scaling keeps exponents valid")
    }

    /// Term-wise sum; like exponents are not merged.
    pub fn plus(&self, other: &MonomialSeries) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        MonomialSeries { terms }
    }

    /// Classical derivative of order `order`. Constant and integer-power terms
    /// that differentiate to zero are dropped; a term whose exponent would turn
    /// negative is rejected.
    pub fn derivative(&self, order: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        'terms: for &(q, p) in &self.terms {
            let mut q = q;
            let mut p = p;
            for _ in 0..order {
                if p == 0.0 {
                    continue 'terms;
                }
                q *= p;
                p -= 1.0;
                if p < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "derivative of order {order} of x^{} is singular at 0",
                        p + 1.0
                    )));
                }
            }
            out.push((q, p));
        }
        Ok(MonomialSeries { terms: out })
    }
}

fn validate_coeffs(coeffs: &[f64]) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("a series needs at least one coefficient".into()));
    }
    if let Some((k, &v)) = coeffs.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { value: v, location: format!("coefficient {k}") });
    }
    Ok(())
}

/// Expansion `Σ c_j L_{1,j}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries {
    coeffs: Vec<f64>,
}

/// Expansion `Σ α_j T_{1,j}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    coeffs: Vec<f64>,
}

/// Common surface of the two orthogonal expansions.
pub trait OrthogonalSeries {
    fn coeffs(&self) -> &[f64];

    /// Value at `x ∈ [0, 1]` by a backward (Clenshaw) recurrence.
    fn eval(&self, x: f64) -> Result<f64>;

    fn degree(&self) -> usize {
        self.coeffs().len() - 1
    }
}

macro_rules! series_ctor {
    ($ty:ident) => {
        impl $ty {
            pub fn new(coeffs: Vec<f64>) -> Result<Self> {
                validate_coeffs(&coeffs)?;
                Ok($ty { coeffs })
            }

            pub fn zeros(degree: usize) -> Self {
                $ty { coeffs: vec![0.0; degree + 1] }
            }

            pub fn into_coeffs(self) -> Vec<f64> {
                self.coeffs
            }
        }
    };
}

series_ctor!(LegendreSeries);
series_ctor!(ChebyshevSeries);

impl OrthogonalSeries for LegendreSeries {
    fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(clenshaw_legendre(&self.coeffs, x))
    }
}

impl OrthogonalSeries for ChebyshevSeries {
    fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(clenshaw_chebyshev(&self.coeffs, 2.0 * x - 1.0))
    }
}

/// Evaluates either expansion at `x ∈ [0, 1]`.
pub fn eval_series<S: OrthogonalSeries + ?Sized>(series: &S, x: f64) -> Result<f64> {
    series.eval(x)
}

// φ_{k+1} = a_k φ_k + b_k φ_{k-1} with a_k = (2k+1)t/(k+1), b_k = -k/(k+1).
pub(crate) fn clenshaw_legendre(c: &[f64], x: f64) -> f64 {
    let t = 2.0 * x - 1.0;
    let n = c.len() - 1;
    let (mut b1, mut b2) = (0.0, 0.0);
    for k in (1..=n).rev() {
        let fk = k as f64;
        let a = (2.0 * fk + 1.0) * t / (fk + 1.0);
        let b_next = -(fk + 1.0) / (fk + 2.0);
        let bk = c[k] + a * b1 + b_next * b2;
        b2 = b1;
        b1 = bk;
    }
    c[0] + t * b1 - 0.5 * b2
}

pub(crate) fn clenshaw_chebyshev(c: &[f64], t: f64) -> f64 {
    let n = c.len() - 1;
    let (mut b1, mut b2) = (0.0, 0.0);
    for k in (1..=n).rev() {
        let bk = c[k] + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = bk;
    }
    c[0] + t * b1 - b2
}

//! Caputo fractional derivatives of order `α > 0` on `[0, 1]`.
//!
//! * the power rule `D^α x^β = Γ(β+1)/Γ(β−α+1) x^{β−α}` and its term-wise
//!   application to [`MonomialSeries`];
//! * the operational matrix whose row `i` holds the shifted Legendre
//!   coefficients of the projection of `D^α L_{1,i}` onto `P_N`;
//! * pointwise values of `D^α L_{1,i}` through the fractional-integral form
//!   `J^ν L_{1,k}(x) = k!/Γ(k+ν+1) · x^ν P_k^{(−ν,ν)}(2x−1)`, `ν = m − α`,
//!   which avoids the cancellation of the monomial forms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dd::Dd;
use crate::gamma::{gamma_ratio, rgamma};
use crate::linalg::Matrix;
use crate::orthopoly::{legendre_monomial_exact, LegendreSeries, MonomialSeries, OrthogonalSeries};
use crate::quadrature::{graded_legendre_rule, Grading};
use crate::{Error, Result};

/// Order `α > 0` together with `m = ⌈α⌉`, so that `m − 1 < α ≤ m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaputoOrder {
    alpha: f64,
    m: usize,
}

impl CaputoOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("Caputo order must be finite and > 0, got {alpha}")));
        }
        Ok(CaputoOrder { alpha, m: libm::ceil(alpha) as usize })
    }

    /// Integer order `i ≥ 1`.
    pub fn integer(i: usize) -> Result<Self> {
        Self::new(i as f64)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_integer(&self) -> bool {
        self.alpha == self.m as f64
    }

    /// `ν = m − α ∈ [0, 1)`, the order of the fractional integral in `D^α = J^ν D^m`.
    pub fn nu(&self) -> f64 {
        self.m as f64 - self.alpha
    }
}

fn is_nonneg_integer(beta: f64) -> bool {
    beta >= 0.0 && beta == libm::floor(beta)
}

/// `D^α x^β`. Integer `β < m` gives zero. Real `β` is accepted when
/// `β > m − 1` and the resulting exponent `β − α` is non-negative.
pub fn caputo_power_rule(beta: f64, order: CaputoOrder) -> Result<MonomialSeries> {
    let alpha = order.alpha();
    let m = order.m() as f64;
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::PowerRule { beta, alpha });
    }
    let integer = is_nonneg_integer(beta);
    if integer && beta < m {
        return Ok(MonomialSeries::zero());
    }
    if !integer && (beta <= m - 1.0 || beta - alpha < 0.0) {
        return Err(Error::PowerRule { beta, alpha });
    }
    let coeff = gamma_ratio(beta + 1.0, beta - alpha + 1.0);
    MonomialSeries::new([(coeff, beta - alpha)])
}

/// Term-wise power rule; exact up to the evaluation of the Γ ratios.
pub fn caputo_apply(series: &MonomialSeries, order: CaputoOrder) -> Result<MonomialSeries> {
    let mut out = MonomialSeries::zero();
    for &(q, p) in series.terms() {
        out = out.plus(&caputo_power_rule(p, order)?.scale(q));
    }
    Ok(out)
}

/// Which derivative an [`OperationalMatrix`] represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixOrder {
    /// Classical derivative of the given order; order 0 is the identity.
    Integer(usize),
    Caputo(CaputoOrder),
}

/// `(N+1)×(N+1)` matrix with row `i` equal to the shifted Legendre
/// coefficients of the `P_N` projection of the derivative of `L_{1,i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperationalMatrix {
    order: MatrixOrder,
    entries: Matrix,
}

/// Largest truncation for which the closed double sum is evaluated directly.
/// Its cancellation grows like `(max_k |c_{Nk}|)²` (about 1e27 at N = 20), so
/// even in double-double arithmetic it only stays below 1e-12 relative error
/// up to here. Larger truncations integrate the pointwise Jacobi form instead.
pub const DOUBLE_SUM_MAX_N: usize = 14;

impl OperationalMatrix {
    /// Matrix of the classical derivative of order `i` (identity for `i = 0`),
    /// built as the `i`-th power of the exact first-derivative matrix.
    pub fn integer(i: usize, n: usize) -> Self {
        let first = first_derivative_matrix(n);
        let mut entries = Matrix::identity(n + 1);
        for _ in 0..i {
            entries = &entries * &first;
        }
        OperationalMatrix { order: MatrixOrder::Integer(i), entries }
    }

    /// Caputo operational matrix. Integer orders are delegated to
    /// [`OperationalMatrix::integer`].
    pub fn caputo(order: CaputoOrder, n: usize) -> Self {
        if order.is_integer() {
            let mut m = Self::integer(order.m(), n);
            m.order = MatrixOrder::Caputo(order);
            return m;
        }
        let entries = if n <= DOUBLE_SUM_MAX_N { double_sum_matrix(order, n) } else { projected_matrix(order, n) };
        OperationalMatrix { order: MatrixOrder::Caputo(order), entries }
    }

    pub fn order(&self) -> MatrixOrder {
        self.order
    }

    /// Truncation `N`.
    pub fn n(&self) -> usize {
        self.entries.rows() - 1
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Coefficients of the derivative of `Σ c_j L_{1,j}`: `out_l = Σ_j c_j S(j, l)`.
    pub fn apply(&self, series: &LegendreSeries) -> Result<LegendreSeries> {
        let expected = self.n() + 1;
        let got = series.coeffs().len();
        if got != expected {
            return Err(Error::DimensionMismatch { expected, got });
        }
        LegendreSeries::new(self.entries.vec_mat(series.coeffs()))
    }
}

/// Operational matrix for `α` (any positive order) at truncation `N`.
pub fn operational_matrix(order: CaputoOrder, n: usize) -> OperationalMatrix {
    OperationalMatrix::caputo(order, n)
}

/// See [`OperationalMatrix::apply`].
pub fn apply_operational(matrix: &OperationalMatrix, series: &LegendreSeries) -> Result<LegendreSeries> {
    matrix.apply(series)
}

/// `L'_{1,i} = Σ_{k<i, i+k odd} 2(2k+1) L_{1,k}`, as rows.
pub(crate) fn first_derivative_matrix(n: usize) -> Matrix {
    Matrix::from_fn(n + 1, n + 1, |i, k| if k < i && (i + k) % 2 == 1 { (2 * (2 * k + 1)) as f64 } else { 0.0 })
}

fn legendre_coeffs_dd(i: usize) -> Vec<Dd> {
    legendre_monomial_exact(i)
        .expect("monomial coefficients fit in i128 for the double-sum range")
        .into_iter()
        .map(Dd::from_i128)
        .collect()
}

/// `S(i,j) = Σ_{k=m}^{i} c_{ik} Γ(k+1)/Γ(k−α+1) (2j+1) Σ_{l=0}^{j} c_{jl}/(k+l−α+1)`.
fn double_sum_matrix(order: CaputoOrder, n: usize) -> Matrix {
    let m = order.m();
    let alpha = Dd::from_f64(order.alpha());
    let coeffs: Vec<Vec<Dd>> = (0..=n).map(legendre_coeffs_dd).collect();
    // Γ(k+1)/Γ(k−α+1) = base · ρ_k, ρ_m = 1; base only scales every entry.
    let base = gamma_ratio((m + 1) as f64, m as f64 + 1.0 - order.alpha());
    let mut rho = vec![Dd::ZERO; n + 1];
    if m <= n {
        rho[m] = Dd::ONE;
        for k in m + 1..=n {
            let q = Dd::from_f64(k as f64);
            rho[k] = rho[k - 1] * q / (q - alpha);
        }
    }
    // inner[k][j] = Σ_l c_{jl} / (k + l + 1 − α)
    let mut inner = vec![vec![Dd::ZERO; n + 1]; n + 1];
    for (k, row) in inner.iter_mut().enumerate().skip(m) {
        for (j, slot) in row.iter_mut().enumerate() {
            let mut acc = Dd::ZERO;
            for (l, &c) in coeffs[j].iter().enumerate() {
                acc = acc + c / (Dd::from_f64((k + l + 1) as f64) - alpha);
            }
            *slot = acc;
        }
    }
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        let mut acc = Dd::ZERO;
        for k in m..=i {
            acc = acc + coeffs[i][k] * rho[k] * inner[k][j];
        }
        base * acc.to_f64() * (2 * j + 1) as f64
    })
}

/// `S(i,j) = (2j+1) ∫₀¹ D^α L_{1,i} L_{1,j}` by graded quadrature of the
/// pointwise Jacobi form.
fn projected_matrix(order: CaputoOrder, n: usize) -> Matrix {
    let eval = CaputoLegendre::new(order, n);
    let rule = graded_legendre_rule(Grading { points_per_panel: n + 12, ..Grading::default() })
        .expect("graded rule parameters are valid");
    let mut s = Matrix::zeros(n + 1, n + 1);
    for (x, w) in rule.iter() {
        let d = eval.values(x);
        let l = crate::orthopoly::legendre_values(n, x);
        for i in order.m()..=n {
            let wd = w * d[i];
            for (j, lj) in l.iter().enumerate() {
                s[(i, j)] += wd * lj;
            }
        }
    }
    for i in 0..=n {
        for j in 0..=n {
            s[(i, j)] *= (2 * j + 1) as f64;
        }
    }
    s
}

/// Pointwise evaluator of `D^α L_{1,0}(x), …, D^α L_{1,N}(x)`.
#[derive(Debug, Clone)]
pub struct CaputoLegendre {
    order: CaputoOrder,
    /// rows: Legendre coefficients of `L_{1,i}^{(m)}`
    derivative: Matrix,
    /// `k!/Γ(k+ν+1)`
    scale: Vec<f64>,
}

impl CaputoLegendre {
    pub fn new(order: CaputoOrder, n: usize) -> Self {
        let nu = order.nu();
        let derivative = OperationalMatrix::integer(order.m(), n).entries;
        let mut scale = Vec::with_capacity(n + 1);
        scale.push(rgamma(1.0 + nu));
        for k in 1..=n {
            let prev = scale[k - 1];
            scale.push(prev * k as f64 / (k as f64 + nu));
        }
        CaputoLegendre { order, derivative, scale }
    }

    pub fn n(&self) -> usize {
        self.scale.len() - 1
    }

    /// Values at `x ∈ [0, 1]` (unchecked).
    pub fn values(&self, x: f64) -> Vec<f64> {
        let nu = self.order.nu();
        let n = self.n();
        let jac = jacobi_reflected(n, nu, 2.0 * x - 1.0);
        let xnu = if nu == 0.0 { 1.0 } else { libm::pow(x, nu) };
        let frac: Vec<f64> = jac.iter().zip(&self.scale).map(|(p, g)| xnu * g * p).collect();
        self.derivative.mat_vec(&frac)
    }
}

/// `P_k^{(−ν, ν)}(t)` for `k = 0..=n`.
fn jacobi_reflected(n: usize, nu: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(t - nu);
    }
    for k in 2..=n {
        let fk = k as f64;
        let km1 = fk - 1.0;
        let next = ((2.0 * fk - 1.0) * t * out[k - 1] - (km1 - nu) * (km1 + nu) / km1 * out[k - 2]) / fk;
        out.push(next);
    }
    out
}

/// Single-sum formulas for the operational matrix entries, kept as
/// cross-checks of the double sum.
pub mod single_sum {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).fold(1.0, |a, k| a * k as f64)
    }

    /// The single-sum expression as commonly printed (interval length 1):
    /// `Σ_{k=m}^{i} (−1)^{i+k}(2j+1)(i+k)! Γ(k−j−α+1) / ((i−k)! k! Γ(k−α+1) Γ(k+j−α+1))`.
    /// It does not reproduce the projection; see the tests.
    pub fn printed(order: CaputoOrder, i: usize, j: usize) -> f64 {
        let a = order.alpha();
        (order.m()..=i)
            .map(|k| {
                let sign = if (i + k).is_multiple_of(2) { 1.0 } else { -1.0 };
                let kf = k as f64;
                let jf = j as f64;
                sign * (2.0 * jf + 1.0) * factorial(i + k) * crate::gamma::gamma(kf - jf - a + 1.0)
                    / (factorial(i - k)
                        * factorial(k)
                        * crate::gamma::gamma(kf - a + 1.0)
                        * crate::gamma::gamma(kf + jf - a + 1.0))
            })
            .sum()
    }

    /// Closed form obtained by summing the inner sum of the double sum:
    /// `∫₀¹ x^β L_{1,j} = Γ(β+1)² / (Γ(β−j+1) Γ(β+j+2))`, giving
    /// `(2j+1) Σ_{k=m}^{i} (−1)^{i+k}(i+k)! Γ(k−α+1) / ((i−k)! k! Γ(k−j−α+1) Γ(k+j−α+2))`.
    pub fn corrected(order: CaputoOrder, i: usize, j: usize) -> f64 {
        let a = order.alpha();
        (order.m()..=i)
            .map(|k| {
                let sign = if (i + k).is_multiple_of(2) { 1.0 } else { -1.0 };
                let kf = k as f64;
                let jf = j as f64;
                sign * (2.0 * jf + 1.0) * factorial(i + k) * crate::gamma::gamma(kf - a + 1.0)
                    * rgamma(kf - jf - a + 1.0)
                    * rgamma(kf + jf - a + 2.0)
                    / (factorial(i - k) * factorial(k))
            })
            .sum()
    }
}

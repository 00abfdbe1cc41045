//! Tau discretisation of
//! `Σ a_i y^{(i)}(t) = f(t) + ∫₀¹ k(t,s) D^α y(s) ds`, `y^{(i)}(0) = d_i`.
//!
//! The unknown is `y_N = Σ c_j L_{1,j}`. Rows `k = 0…N−n` are Galerkin
//! conditions against `L_{1,k}`; the last `n` rows impose the initial values.
//! The forcing enters through its Chebyshev interpolant, converted to the
//! Legendre basis.

mod analysis;
mod examples;

pub use analysis::{convergence_study, l2_error, max_error, ConvergenceEntry, ConvergenceReport, DecayClass, FLOOR};
pub use examples::{builtin_example, BuiltinExample, ExampleVariant, ForcingSpec, ProblemSpec, BUILTIN_IDS};

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cltransform::{chebyshev_from_values, chebyshev_interpolate, interpolation_nodes, TransformPair};
use crate::fracderiv::{caputo_apply, CaputoLegendre, CaputoOrder, OperationalMatrix};
use crate::linalg::{Lu, Matrix};
use crate::orthopoly::{legendre_values, LegendreSeries, MonomialSeries, OrthogonalSeries};
use crate::quadrature::{graded_legendre_rule, legendre_gauss_rule, Domain, Grading, QuadratureRule, PROJECTION_EXTRA};
use crate::{Error, Result};

pub type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Residual bound factor of the dense solve: `‖Ax − b‖_∞ ≤ 1e-10 (1 + ‖b‖_∞)`.
pub const RESIDUAL_FACTOR: f64 = 1e-10;

#[derive(Clone)]
pub struct FideProblem {
    a: Vec<f64>,
    order: CaputoOrder,
    kernel: KernelFn,
    forcing: RealFn,
    ics: Vec<f64>,
}

impl fmt::Debug for FideProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FideProblem")
            .field("a", &self.a)
            .field("order", &self.order)
            .field("ics", &self.ics)
            .finish_non_exhaustive()
    }
}

impl FideProblem {
    /// `a = (a_0, …, a_n)` fixes the order `n = a.len() − 1 ≥ 1`; `ics` holds `d_0 … d_{n−1}`.
    pub fn new(a: Vec<f64>, order: CaputoOrder, kernel: KernelFn, forcing: RealFn, ics: Vec<f64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::InvalidArgument(format!("need at least a_0 and a_1, got {} coefficient(s)", a.len())));
        }
        if a.iter().chain(&ics).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("coefficients and initial values must be finite".into()));
        }
        if *a.last().unwrap() == 0.0 {
            return Err(Error::InvalidArgument("leading coefficient a_n must be nonzero".into()));
        }
        let n = a.len() - 1;
        if ics.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: ics.len() });
        }
        Ok(FideProblem { a, order, kernel, forcing, ics })
    }

    /// Derivative order `n`.
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn order(&self) -> CaputoOrder {
        self.order
    }

    pub fn ics(&self) -> &[f64] {
        &self.ics
    }

    pub fn kernel(&self, t: f64, s: f64) -> f64 {
        (self.kernel)(t, s)
    }

    pub fn forcing(&self, t: f64) -> f64 {
        (self.forcing)(t)
    }

    /// Same equation with `f` and every `d_i` multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let forcing = self.forcing.clone();
        FideProblem {
            forcing: Arc::new(move |t| lambda * forcing(t)),
            ics: self.ics.iter().map(|d| lambda * d).collect(),
            ..self.clone()
        }
    }
}

/// How `∫₀¹ k(t,s) D^α y_N(s) ds` is tested against `L_{1,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FractionalTerm {
    /// `∫∫ k(x,s) (D^α L_{1,j})(s) L_{1,k}(x)` with the exact fractional
    /// derivative of each basis function.
    #[default]
    Exact,
    /// `Σ_l S_α(j,l) b_{lk}/(2k+1)`: `D^α y_N` is first replaced by its
    /// projection onto `P_N` through the operational matrix.
    Projected,
}

/// Construction of the kernel moments used by [`FractionalTerm::Projected`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentRule {
    /// Tensor Legendre–Gauss quadrature in both variables.
    #[default]
    Tensor,
    /// Chebyshev interpolation of `k` in the first variable before projecting.
    Interpolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub fractional: FractionalTerm,
    pub moments: MomentRule,
}

/// `b_{l,r}`: Legendre coefficients of `h_l(x) = ∫₀¹ k(x,s) L_{1,l}(s) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMoments {
    b: Matrix,
}

impl KernelMoments {
    pub fn n(&self) -> usize {
        self.b.rows() - 1
    }

    pub fn matrix(&self) -> &Matrix {
        &self.b
    }

    pub fn get(&self, l: usize, r: usize) -> f64 {
        self.b[(l, r)]
    }
}

fn finite(v: f64, what: impl FnOnce() -> alloc::string::String) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { value: v, location: what() })
    }
}

fn unit_gauss(n: usize) -> Result<QuadratureRule> {
    legendre_gauss_rule(n + PROJECTION_EXTRA, Domain::Unit)
}

/// `g[q][l] = ∫₀¹ k(x_q, s) L_{1,l}(s) ds` by the `[0,1]` Gauss rule.
fn half_moments(kernel: &dyn Fn(f64, f64) -> f64, xs: &[f64], n: usize, rule: &QuadratureRule) -> Result<Vec<Vec<f64>>> {
    let ls: Vec<Vec<f64>> = rule.nodes().iter().map(|&s| legendre_values(n, s)).collect();
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        let mut g = vec![0.0; n + 1];
        for ((s, w), l) in rule.iter().zip(&ls) {
            let k = finite(kernel(x, s), || format!("kernel at (t, s) = ({x}, {s})"))?;
            for (gl, ll) in g.iter_mut().zip(l) {
                *gl += w * k * ll;
            }
        }
        out.push(g);
    }
    Ok(out)
}

/// `b_{l,r} = (2r+1) ∫₀¹∫₀¹ k(x,s) L_{1,l}(s) L_{1,r}(x) ds dx`, tensor
/// Gauss with `N + 16` points per direction.
pub fn kernel_moments(kernel: &dyn Fn(f64, f64) -> f64, n: usize) -> Result<KernelMoments> {
    let rule = unit_gauss(n)?;
    let g = half_moments(kernel, rule.nodes(), n, &rule)?;
    let mut b = Matrix::zeros(n + 1, n + 1);
    for ((x, w), gq) in rule.iter().zip(&g) {
        let lx = legendre_values(n, x);
        for l in 0..=n {
            for r in 0..=n {
                b[(l, r)] += w * gq[l] * lx[r];
            }
        }
    }
    for l in 0..=n {
        for r in 0..=n {
            b[(l, r)] *= (2 * r + 1) as f64;
        }
    }
    Ok(KernelMoments { b })
}

/// Moments of `I_N^c k(·, s)`: `k` is interpolated in the first variable at the
/// shifted Chebyshev–Gauss points, the `s` integral is done by Gauss.
/// Coincides with [`kernel_moments`] when `k` has degree `≤ N` in `t`.
pub fn kernel_moments_interpolated(kernel: &dyn Fn(f64, f64) -> f64, n: usize) -> Result<KernelMoments> {
    let rule = unit_gauss(n)?;
    let nodes = interpolation_nodes(n);
    let g = half_moments(kernel, &nodes, n, &rule)?;
    let pair = TransformPair::build(n);
    let mut b = Matrix::zeros(n + 1, n + 1);
    for l in 0..=n {
        let values: Vec<f64> = g.iter().map(|gq| gq[l]).collect();
        let leg = pair.chebyshev_to_legendre(&chebyshev_from_values(&values)?)?;
        b.row_mut(l).copy_from_slice(leg.coeffs());
    }
    Ok(KernelMoments { b })
}

fn forcing_coeffs_with(f: &dyn Fn(f64) -> f64, pair: &TransformPair) -> Result<Vec<f64>> {
    let cheb = chebyshev_interpolate(f, pair.n())?;
    let leg = pair.chebyshev_to_legendre(&cheb)?;
    Ok(leg.coeffs().iter().enumerate().map(|(k, c)| c / (2 * k + 1) as f64).collect())
}

/// `f_k = (I_N^c f, L_{1,k})`.
pub fn forcing_coeffs(f: &dyn Fn(f64) -> f64, n: usize) -> Result<Vec<f64>> {
    forcing_coeffs_with(f, &TransformPair::build(n))
}

/// Graded rule resolving `s^ν` times a degree-`N` polynomial near `s = 0`.
fn singular_rule(n: usize) -> QuadratureRule {
    graded_legendre_rule(Grading { points_per_panel: 20 + n / 2, ..Grading::default() }).expect("valid grading")
}

/// `Q(j,k) = ∫₀¹ L_{1,k}(x) ∫₀¹ k(x,s) (D^α L_{1,j})(s) ds dx`.
fn exact_fractional_term(problem: &FideProblem, n: usize) -> Result<Matrix> {
    let outer = unit_gauss(n)?;
    let inner = singular_rule(n);
    let eval = CaputoLegendre::new(problem.order, n);
    let d: Vec<Vec<f64>> = inner.nodes().iter().map(|&s| eval.values(s)).collect();
    let mut q = Matrix::zeros(n + 1, n + 1);
    for (x, wx) in outer.iter() {
        // G_j(x) = ∫ k(x,s) D^α L_j(s) ds
        let mut g = vec![0.0; n + 1];
        for ((s, ws), ds) in inner.iter().zip(&d) {
            let k = finite(problem.kernel(x, s), || format!("kernel at (t, s) = ({x}, {s})"))?;
            if k == 0.0 {
                continue;
            }
            for (gj, dj) in g.iter_mut().zip(ds) {
                *gj += ws * k * dj;
            }
        }
        let lx = legendre_values(n, x);
        for j in 0..=n {
            for k in 0..=n {
                q[(j, k)] += wx * g[j] * lx[k];
            }
        }
    }
    Ok(q)
}

fn projected_fractional_term(problem: &FideProblem, n: usize, rule: MomentRule) -> Result<Matrix> {
    let kernel = |t: f64, s: f64| problem.kernel(t, s);
    let b = match rule {
        MomentRule::Tensor => kernel_moments(&kernel, n)?,
        MomentRule::Interpolated => kernel_moments_interpolated(&kernel, n)?,
    };
    let s_alpha = OperationalMatrix::caputo(problem.order, n);
    let sb = s_alpha.matrix() * b.matrix();
    Ok(Matrix::from_fn(n + 1, n + 1, |j, k| sb[(j, k)] / (2 * k + 1) as f64))
}

/// Tau system `(A, rhs)` with the default [`SolveOptions`].
pub fn assemble_system(problem: &FideProblem, n: usize) -> Result<(Matrix, Vec<f64>)> {
    assemble_system_with(problem, n, &SolveOptions::default())
}

pub fn assemble_system_with(problem: &FideProblem, n: usize, options: &SolveOptions) -> Result<(Matrix, Vec<f64>)> {
    let order_n = problem.n();
    if n < order_n {
        return Err(Error::InvalidArgument(format!("truncation N = {n} is below the derivative order n = {order_n}")));
    }
    let s_int: Vec<OperationalMatrix> = (0..=order_n).map(|i| OperationalMatrix::integer(i, n)).collect();
    let frac = match options.fractional {
        FractionalTerm::Exact => exact_fractional_term(problem, n)?,
        FractionalTerm::Projected => projected_fractional_term(problem, n, options.moments)?,
    };
    let pair = TransformPair::build(n);
    let force = |t: f64| problem.forcing(t);
    let f = forcing_coeffs_with(&force, &pair)?;

    let mut a = Matrix::zeros(n + 1, n + 1);
    let mut rhs = vec![0.0; n + 1];
    let galerkin = n - order_n;
    for k in 0..=galerkin {
        let h = (2 * k + 1) as f64;
        for j in 0..=n {
            let classical: f64 = problem.a.iter().zip(&s_int).map(|(ai, si)| ai * si.entry(j, k)).sum();
            a[(k, j)] = classical / h - frac[(j, k)];
        }
        rhs[k] = f[k];
    }
    for (i, (si, &d)) in s_int.iter().zip(&problem.ics).enumerate() {
        let row = galerkin + 1 + i;
        for j in 0..=n {
            a[(row, j)] = (0..=n).map(|l| si.entry(j, l) * if l % 2 == 0 { 1.0 } else { -1.0 }).sum();
        }
        rhs[row] = d;
    }
    if !a.is_finite() {
        return Err(Error::NonFinite { value: f64::NAN, location: format!("assembled matrix at N = {n}") });
    }
    Ok((a, rhs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution {
    n: usize,
    coeffs: LegendreSeries,
    condition_estimate: f64,
}

impl SpectralSolution {
    pub fn new(coeffs: LegendreSeries, condition_estimate: f64) -> Self {
        SpectralSolution { n: coeffs.coeffs().len() - 1, coeffs, condition_estimate }
    }

    /// Truncation `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &LegendreSeries {
        &self.coeffs
    }

    /// 1-norm condition estimate of the tau matrix.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// `y_N(x)` for `x ∈ [0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.coeffs.eval(x)
    }

    /// Legendre coefficients of `y_N^{(i)}`.
    pub fn derivative(&self, i: usize) -> LegendreSeries {
        OperationalMatrix::integer(i, self.n).apply(&self.coeffs).expect("matching dimensions")
    }
}

pub fn solve_fide(problem: &FideProblem, n: usize) -> Result<SpectralSolution> {
    solve_fide_with(problem, n, &SolveOptions::default())
}

pub fn solve_fide_with(problem: &FideProblem, n: usize, options: &SolveOptions) -> Result<SpectralSolution> {
    let (a, rhs) = assemble_system_with(problem, n, options)?;
    let lu = Lu::factor(&a)?;
    let c = lu.solve(&rhs);
    let ax = a.mat_vec(&c);
    let residual = ax.iter().zip(&rhs).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let bound = RESIDUAL_FACTOR * (1.0 + rhs.iter().map(|v| v.abs()).fold(0.0, f64::max));
    if !(residual <= bound) {
        return Err(Error::Residual { n, residual, bound });
    }
    let coeffs = LegendreSeries::new(c)?;
    Ok(SpectralSolution::new(coeffs, lu.condition_estimate()))
}

/// Forcing that makes `exact` solve the equation with the given data:
/// `f(t) = Σ a_i exact^{(i)}(t) − ∫₀¹ k(t,s) (D^α exact)(s) ds`. The
/// fractional derivative comes from the power rule; the integral uses a
/// graded Gauss rule that resolves the `s^{β−α}` endpoint behaviour.
pub fn mms_forcing(exact: &MonomialSeries, a: &[f64], order: CaputoOrder, kernel: KernelFn) -> Result<RealFn> {
    let mut classical = MonomialSeries::zero();
    for (i, &ai) in a.iter().enumerate() {
        classical = classical.plus(&exact.derivative(i)?.scale(ai));
    }
    let frac = caputo_apply(exact, order)?;
    let rule = graded_legendre_rule(Grading::default())?;
    let nodes: Vec<(f64, f64)> = rule.iter().map(|(s, w)| (s, w * frac.eval(s))).collect();
    Ok(Arc::new(move |t| {
        let integral: f64 = nodes.iter().map(|&(s, wd)| wd * kernel(t, s)).sum();
        classical.eval(t) - integral
    }))
}

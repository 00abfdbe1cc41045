//! Gauss rules: Chebyshev–Gauss on `[−1, 1]`, Legendre–Gauss on `[−1, 1]` or
//! `[0, 1]`, and a geometrically graded composite Legendre–Gauss rule on
//! `[0, 1]` for integrands with algebraic endpoint behaviour `x^ν` at 0.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::orthopoly::{legendre_values, LegendreSeries};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    ChebyshevGauss,
    LegendreGauss,
    /// Composite Legendre–Gauss on geometrically shrinking panels toward 0.
    GradedLegendreGauss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `[−1, 1]`
    Symmetric,
    /// `[0, 1]`
    Unit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    family: Family,
    domain: Domain,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Maps a `[−1, 1]` rule to `[0, 1]` by `x → (x+1)/2`, `w → w/2`.
    /// Chebyshev–Gauss rules keep their weight function and are not mapped.
    pub fn to_unit(&self) -> QuadratureRule {
        match (self.domain, self.family) {
            (Domain::Unit, _) | (_, Family::ChebyshevGauss) => self.clone(),
            (Domain::Symmetric, family) => QuadratureRule {
                family,
                domain: Domain::Unit,
                nodes: self.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
                weights: self.weights.iter().map(|w| 0.5 * w).collect(),
            },
        }
    }

    /// `Σ w_j f(x_j)`. A non-finite sample is reported with its node.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
        let mut acc = 0.0;
        for (x, w) in self.iter() {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { value: v, location: format!("quadrature node x = {x}") });
            }
            acc += w * v;
        }
        Ok(acc)
    }
}

/// Chebyshev–Gauss rule with `N + 1` nodes `x_j = −cos((2j+1)π/(2N+2))` and
/// equal weights `π/(N+1)`, exact against `(1 − x²)^{−1/2}` up to degree `2N+1`.
pub fn chebyshev_gauss_rule(n: usize) -> QuadratureRule {
    let m = (n + 1) as f64;
    let nodes = (0..=n).map(|j| -libm::cos((2 * j + 1) as f64 * PI / (2.0 * m))).collect();
    QuadratureRule {
        family: Family::ChebyshevGauss,
        domain: Domain::Symmetric,
        nodes,
        weights: alloc::vec![PI / m; n + 1],
    }
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-15;

/// Legendre–Gauss rule with `N + 1` nodes, the roots of `L_{N+1}`, found by
/// Newton's method from `cos(π(4j+3)/(4N+6))`.
pub fn legendre_gauss_rule(n: usize, domain: Domain) -> Result<QuadratureRule> {
    let npts = n + 1;
    let mut nodes = alloc::vec![0.0; npts];
    let mut weights = alloc::vec![0.0; npts];
    for j in 0..npts.div_ceil(2) {
        let mut x = libm::cos(PI * (4 * j + 3) as f64 / (4 * n + 6) as f64);
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_and_derivative(npts, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                dp = legendre_and_derivative(npts, x).1;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence(n));
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // the guesses run from the right end; store ascending and mirror
        nodes[npts - 1 - j] = x;
        nodes[j] = -x;
        weights[npts - 1 - j] = w;
        weights[j] = w;
    }
    if npts % 2 == 1 {
        nodes[npts / 2] = 0.0;
    }
    let rule = QuadratureRule { family: Family::LegendreGauss, domain: Domain::Symmetric, nodes, weights };
    Ok(match domain {
        Domain::Symmetric => rule,
        Domain::Unit => rule.to_unit(),
    })
}

/// `(P_n(x), P_n'(x))` for the unshifted Legendre polynomial.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let fk = k as f64;
        let p2 = ((2.0 * fk + 1.0) * x * p1 - fk * p0) / (fk + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let fnn = n as f64;
    (p1, fnn * (x * p1 - p0) / (x * x - 1.0))
}

/// Layout of the graded composite rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grading {
    /// Gauss points on each panel.
    pub points_per_panel: usize,
    pub panels: usize,
    /// Ratio between consecutive panel endpoints, in (0, 1).
    pub ratio: f64,
}

impl Default for Grading {
    /// 22 panels with ratio 0.15 and 20 points each: integrates `x^ν g(x)`
    /// with smooth `g` and `ν > −1` to near machine precision.
    fn default() -> Self {
        Grading { points_per_panel: 20, panels: 22, ratio: 0.15 }
    }
}

/// Composite Legendre–Gauss rule on `[0, 1]` with breakpoints
/// `0, r^{P−1}, …, r, 1`.
pub fn graded_legendre_rule(grading: Grading) -> Result<QuadratureRule> {
    let Grading { points_per_panel, panels, ratio } = grading;
    if points_per_panel == 0 || panels == 0 || !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidArgument(format!("invalid grading {grading:?}")));
    }
    let base = legendre_gauss_rule(points_per_panel - 1, Domain::Unit)?;
    let mut breaks = Vec::with_capacity(panels + 1);
    breaks.push(0.0);
    for p in (0..panels - 1).rev() {
        breaks.push(libm::pow(ratio, (p + 1) as f64));
    }
    breaks.push(1.0);
    let mut nodes = Vec::with_capacity(panels * points_per_panel);
    let mut weights = Vec::with_capacity(panels * points_per_panel);
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        for (x, wt) in base.iter() {
            nodes.push(a + (b - a) * x);
            weights.push((b - a) * wt);
        }
    }
    Ok(QuadratureRule { family: Family::GradedLegendreGauss, domain: Domain::Unit, nodes, weights })
}

/// Default extra resolution of [`project_legendre`] over the truncation.
pub const PROJECTION_EXTRA: usize = 16;

/// Shifted Legendre coefficients `a_j = (2j+1) ∫₀¹ f L_{1,j}` for `j ≤ N`,
/// using the `[0, 1]` Legendre–Gauss rule of index `N + 16`. Exact for
/// polynomial `f` of degree up to `N + 33`.
pub fn project_legendre(f: impl FnMut(f64) -> f64, n: usize) -> Result<LegendreSeries> {
    let rule = legendre_gauss_rule(n + PROJECTION_EXTRA, Domain::Unit)?;
    project_legendre_with(f, n, &rule)
}

/// [`project_legendre`] with an explicit `[0, 1]` rule.
pub fn project_legendre_with(mut f: impl FnMut(f64) -> f64, n: usize, rule: &QuadratureRule) -> Result<LegendreSeries> {
    let mut coeffs = alloc::vec![0.0; n + 1];
    for (x, w) in rule.iter() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { value: v, location: format!("projection node x = {x}") });
        }
        for (c, l) in coeffs.iter_mut().zip(legendre_values(n, x)) {
            *c += w * v * l;
        }
    }
    for (j, c) in coeffs.iter_mut().enumerate() {
        *c *= (2 * j + 1) as f64;
    }
    LegendreSeries::new(coeffs)
}

//! Error norms, convergence sweeps and decay classification.

use alloc::format;
use alloc::vec::Vec;

use super::{solve_fide_with, FideProblem, SolveOptions, SpectralSolution};
use crate::orthopoly::OrthogonalSeries;
use crate::quadrature::{legendre_gauss_rule, Domain};
use crate::{Error, Result};

/// Errors below this are treated as round-off and excluded from decay fits.
pub const FLOOR: f64 = 1e-12;
/// Minimum coefficient of determination for a decay class.
pub const R2_THRESHOLD: f64 = 0.98;

/// `‖y_N − exact‖_{L²(0,1)}` by the 128-point Legendre–Gauss rule.
pub fn l2_error(solution: &SpectralSolution, exact: &dyn Fn(f64) -> f64) -> f64 {
    let rule = legendre_gauss_rule(127, Domain::Unit).expect("128-point rule");
    let c = solution.coeffs();
    let sum: f64 = rule
        .iter()
        .map(|(x, w)| {
            let d = c.eval(x).expect("node in [0, 1]") - exact(x);
            w * d * d
        })
        .sum();
    libm::sqrt(sum)
}

/// Maximum error over 101 equispaced points of `[0, 1]`.
pub fn max_error(solution: &SpectralSolution, exact: &dyn Fn(f64) -> f64) -> f64 {
    (0..=100)
        .map(|k| {
            let x = k as f64 / 100.0;
            (solution.eval(x).expect("x in [0, 1]") - exact(x)).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceEntry {
    pub n: usize,
    /// `(l2_error, max_error)`, or the solver failure at this `N`.
    pub outcome: core::result::Result<(f64, f64), Error>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass {
    /// `err ≈ C e^{−rate·N}`
    Exponential { rate: f64, r_squared: f64 },
    /// `err ≈ C N^{−rate}`
    Algebraic { rate: f64, r_squared: f64 },
    /// Fewer than three errors above [`FLOOR`], or no fit qualifies.
    Stagnated,
}

impl DecayClass {
    pub fn name(&self) -> &'static str {
        match self {
            DecayClass::Exponential { .. } => "exponential",
            DecayClass::Algebraic { .. } => "algebraic",
            DecayClass::Stagnated => "stagnated",
        }
    }
}

impl core::fmt::Display for DecayClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DecayClass::Exponential { rate, r_squared } => write!(f, "exponential (rate {rate:.4}, R^2 {r_squared:.4})"),
            DecayClass::Algebraic { rate, r_squared } => write!(f, "algebraic (order {rate:.4}, R^2 {r_squared:.4})"),
            DecayClass::Stagnated => f.write_str("stagnated"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub entries: Vec<ConvergenceEntry>,
    pub fitted_decay: DecayClass,
}

/// Least-squares line `y = a + b x`; returns `(b, R²)`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 0.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}

/// Decay class of `(N, error)` pairs.
pub fn classify_decay(points: &[(usize, f64)]) -> DecayClass {
    let kept: Vec<(f64, f64)> = points.iter().filter(|p| p.1 >= FLOOR).map(|&(n, e)| (n as f64, libm::log(e))).collect();
    if kept.len() < 3 {
        return DecayClass::Stagnated;
    }
    let ys: Vec<f64> = kept.iter().map(|p| p.1).collect();
    let ns: Vec<f64> = kept.iter().map(|p| p.0).collect();
    let logs: Vec<f64> = ns.iter().map(|&n| libm::log(n)).collect();
    let (se, re) = linear_fit(&ns, &ys);
    let (sa, ra) = linear_fit(&logs, &ys);
    let exp_ok = se < 0.0 && re >= R2_THRESHOLD;
    let alg_ok = sa < 0.0 && ra >= R2_THRESHOLD;
    match (exp_ok, alg_ok) {
        (true, false) => DecayClass::Exponential { rate: -se, r_squared: re },
        (false, true) => DecayClass::Algebraic { rate: -sa, r_squared: ra },
        (true, true) if re >= ra => DecayClass::Exponential { rate: -se, r_squared: re },
        (true, true) => DecayClass::Algebraic { rate: -sa, r_squared: ra },
        (false, false) => DecayClass::Stagnated,
    }
}

/// Solves at every `N` of `ns` (strictly increasing, all `≥ n`) and fits the decay.
/// Solver failures are recorded per entry and do not stop the sweep.
pub fn convergence_study(
    problem: &FideProblem,
    exact: &dyn Fn(f64) -> f64,
    ns: &[usize],
    options: &SolveOptions,
) -> Result<ConvergenceReport> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("empty N list".into()));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("N list must be strictly increasing".into()));
    }
    if ns[0] < problem.n() {
        return Err(Error::InvalidArgument(format!(
            "smallest N = {} is below the derivative order n = {}",
            ns[0],
            problem.n()
        )));
    }
    let entries: Vec<ConvergenceEntry> = ns
        .iter()
        .map(|&n| ConvergenceEntry {
            n,
            outcome: solve_fide_with(problem, n, options).map(|sol| (l2_error(&sol, exact), max_error(&sol, exact))),
        })
        .collect();
    let points: Vec<(usize, f64)> =
        entries.iter().filter_map(|e| e.outcome.as_ref().ok().map(|&(l2, _)| (e.n, l2))).collect();
    Ok(ConvergenceReport { fitted_decay: classify_decay(&points), entries })
}

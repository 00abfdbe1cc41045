//! Coefficient transforms between shifted Legendre and shifted Chebyshev
//! expansions, and Chebyshev interpolation at shifted Chebyshev–Gauss points.
//!
//! `A` maps Legendre coefficients to Chebyshev coefficients of the same
//! polynomial, `B = A⁻¹` maps back. Both are upper triangular with a
//! checkerboard zero pattern, which is imposed exactly.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::Matrix;
use crate::orthopoly::{
    chebyshev_values, legendre_values, unshifted_chebyshev_values, ChebyshevSeries, LegendreSeries,
    OrthogonalSeries,
};
use crate::quadrature::{chebyshev_gauss_rule, legendre_gauss_rule, Domain};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TransformPair {
    a: Matrix,
    b: Matrix,
}

fn structural_zero(i: usize, j: usize) -> bool {
    i > j || (i + j) % 2 == 1
}

impl TransformPair {
    /// Builds both matrices by Gauss quadrature that is exact for the
    /// degree-`2N` integrands.
    pub fn build(n: usize) -> Self {
        // a_ij = (1/h_i) Σ_q w_q T_i(ξ_q) L_j(ξ_q), weighted inner product on [−1, 1]
        let cheb = chebyshev_gauss_rule(n);
        let mut a = Matrix::zeros(n + 1, n + 1);
        for (xi, w) in cheb.iter() {
            let t = unshifted_chebyshev_values(n, xi);
            let l = legendre_values(n, 0.5 * (xi + 1.0));
            for i in 0..=n {
                for j in 0..=n {
                    a[(i, j)] += w * t[i] * l[j];
                }
            }
        }
        for i in 0..=n {
            let h = if i == 0 { PI } else { PI / 2.0 };
            for j in 0..=n {
                a[(i, j)] = if structural_zero(i, j) { 0.0 } else { a[(i, j)] / h };
            }
        }

        // b_ij = (2i+1) ∫₀¹ L_{1,i} T_{1,j}
        let gauss = legendre_gauss_rule(n, Domain::Unit).expect("Legendre-Gauss rule converges");
        let mut b = Matrix::zeros(n + 1, n + 1);
        for (x, w) in gauss.iter() {
            let l = legendre_values(n, x);
            let t = chebyshev_values(n, x);
            for i in 0..=n {
                for j in 0..=n {
                    b[(i, j)] += w * l[i] * t[j];
                }
            }
        }
        for i in 0..=n {
            for j in 0..=n {
                b[(i, j)] = if structural_zero(i, j) { 0.0 } else { b[(i, j)] * (2 * i + 1) as f64 };
            }
        }
        TransformPair { a, b }
    }

    /// Truncation `N`.
    pub fn n(&self) -> usize {
        self.a.rows() - 1
    }

    /// Legendre → Chebyshev.
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    /// Chebyshev → Legendre.
    pub fn b(&self) -> &Matrix {
        &self.b
    }

    fn check(&self, got: usize) -> Result<()> {
        let expected = self.n() + 1;
        if got == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, got })
        }
    }

    pub fn legendre_to_chebyshev(&self, s: &LegendreSeries) -> Result<ChebyshevSeries> {
        self.check(s.coeffs().len())?;
        ChebyshevSeries::new(self.a.mat_vec(s.coeffs()))
    }

    pub fn chebyshev_to_legendre(&self, s: &ChebyshevSeries) -> Result<LegendreSeries> {
        self.check(s.coeffs().len())?;
        LegendreSeries::new(self.b.mat_vec(s.coeffs()))
    }
}

pub fn build_transform_pair(n: usize) -> TransformPair {
    TransformPair::build(n)
}

/// Interpolant of `f` at the `N + 1` shifted Chebyshev–Gauss points, by the
/// discrete transform `u_k = (2 − δ_{k0})/(N+1) Σ_j f(x_j) T_k(ξ_j)`.
pub fn chebyshev_interpolate(mut f: impl FnMut(f64) -> f64, n: usize) -> Result<ChebyshevSeries> {
    let values: Vec<f64> = interpolation_nodes(n).into_iter().map(&mut f).collect();
    chebyshev_from_values(&values)
}

/// Discrete Chebyshev transform of samples taken at [`interpolation_nodes`]
/// (`values.len() = N + 1`).
pub fn chebyshev_from_values(values: &[f64]) -> Result<ChebyshevSeries> {
    if values.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let n = values.len() - 1;
    let rule = chebyshev_gauss_rule(n);
    let mut u = alloc::vec![0.0; n + 1];
    for (&xi, &v) in rule.nodes().iter().zip(values) {
        if !v.is_finite() {
            let x = 0.5 * (xi + 1.0);
            return Err(Error::NonFinite { value: v, location: format!("interpolation node x = {x}") });
        }
        for (uk, tk) in u.iter_mut().zip(unshifted_chebyshev_values(n, xi)) {
            *uk += v * tk;
        }
    }
    let m = (n + 1) as f64;
    let coeffs: Vec<f64> = u
        .iter()
        .enumerate()
        .map(|(k, s)| if k == 0 { s / m } else { 2.0 * s / m })
        .collect();
    ChebyshevSeries::new(coeffs)
}

/// The shifted Chebyshev–Gauss interpolation nodes on `[0, 1]`.
pub fn interpolation_nodes(n: usize) -> Vec<f64> {
    chebyshev_gauss_rule(n).nodes().iter().map(|xi| 0.5 * (xi + 1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::eval_shifted_chebyshev;
    use alloc::vec;
    use proptest::prelude::*;

    fn nonzeros(m: &Matrix) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)] != 0.0 {
                    out.push((i, j, m[(i, j)]));
                }
            }
        }
        out
    }

    fn assert_nonzeros(m: &Matrix, want: &[(usize, usize, f64)]) {
        let got = nonzeros(m);
        assert_eq!(got.len(), want.len(), "{got:?}");
        for (g, w) in got.iter().zip(want) {
            assert_eq!((g.0, g.1), (w.0, w.1));
            assert!((g.2 - w.2).abs() < 1e-14, "{g:?} vs {w:?}");
        }
    }

    #[test]
    fn degree_two_matrices() {
        let p = TransformPair::build(2);
        assert_nonzeros(p.a(), &[(0, 0, 1.0), (0, 2, 0.25), (1, 1, 1.0), (2, 2, 0.75)]);
        assert_nonzeros(p.b(), &[(0, 0, 1.0), (0, 2, -1.0 / 3.0), (1, 1, 1.0), (2, 2, 4.0 / 3.0)]);
    }

    fn identity_error(m: &Matrix) -> f64 {
        let n = m.rows();
        let mut e: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                e = e.max((m[(i, j)] - id).abs());
            }
        }
        e
    }

    #[test]
    fn inverse_pair() {
        for n in [4, 8, 16, 32] {
            let p = TransformPair::build(n);
            assert!(identity_error(&(p.a() * p.b())) <= 1e-12, "N = {n}");
            assert!(identity_error(&(p.b() * p.a())) <= 1e-12, "N = {n}");
        }
        let p = TransformPair::build(8);
        assert!(identity_error(&(p.a() * p.b())) <= 1e-13);
    }

    #[test]
    fn sparsity_is_exact() {
        for n in [3, 8, 17] {
            let p = TransformPair::build(n);
            for i in 0..=n {
                for j in 0..=n {
                    if structural_zero(i, j) {
                        assert_eq!(p.a()[(i, j)], 0.0);
                        assert_eq!(p.b()[(i, j)], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn transform_examples() {
        let p = TransformPair::build(2);
        let close = |got: &[f64], want: &[f64]| got.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-14);
        let c = p.legendre_to_chebyshev(&LegendreSeries::new(vec![0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert!(close(c.coeffs(), &[0.25, 0.0, 0.75]));
        let c = p.legendre_to_chebyshev(&LegendreSeries::new(vec![1.0, 0.0, 0.0]).unwrap()).unwrap();
        assert!(close(c.coeffs(), &[1.0, 0.0, 0.0]));
        let l = p.chebyshev_to_legendre(&ChebyshevSeries::new(vec![0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert!((l.coeffs()[0] + 1.0 / 3.0).abs() < 1e-15 && (l.coeffs()[2] - 4.0 / 3.0).abs() < 1e-15);
        let l = p.chebyshev_to_legendre(&ChebyshevSeries::new(vec![0.0, 1.0, 0.0]).unwrap()).unwrap();
        assert!(close(l.coeffs(), &[0.0, 1.0, 0.0]));
        assert_eq!(
            p.chebyshev_to_legendre(&ChebyshevSeries::zeros(3)),
            Err(Error::DimensionMismatch { expected: 3, got: 4 })
        );
        assert!(p.legendre_to_chebyshev(&LegendreSeries::zeros(1)).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let u = chebyshev_interpolate(|x| eval_shifted_chebyshev(2, x).unwrap(), 2).unwrap();
        for (got, want) in u.coeffs().iter().zip([0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let u = chebyshev_interpolate(|x| x, 3).unwrap();
        for (got, want) in u.coeffs().iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        let u = chebyshev_interpolate(|_| 5.0, 4).unwrap();
        for (got, want) in u.coeffs().iter().zip([5.0, 0.0, 0.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(matches!(chebyshev_interpolate(|x| 1.0 / (x - x), 2), Err(Error::NonFinite { .. })));
    }

    proptest! {
        #[test]
        fn round_trips(n in 0usize..20, seed in proptest::collection::vec(-5.0f64..5.0, 21)) {
            let p = TransformPair::build(n);
            let leg = LegendreSeries::new(seed[..=n].to_vec()).unwrap();
            let back = p.chebyshev_to_legendre(&p.legendre_to_chebyshev(&leg).unwrap()).unwrap();
            for (a, b) in back.coeffs().iter().zip(leg.coeffs()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
            // pointwise: both series are the same polynomial
            let cheb = p.legendre_to_chebyshev(&leg).unwrap();
            for k in 0..=20 {
                let x = k as f64 / 20.0;
                prop_assert!((cheb.eval(x).unwrap() - leg.eval(x).unwrap()).abs() <= 1e-12 * (1.0 + leg.coeffs().iter().map(|c| c.abs()).sum::<f64>()));
            }
        }

        #[test]
        fn interpolation_reproduces_polynomials(n in 0usize..24, seed in proptest::collection::vec(-5.0f64..5.0, 25)) {
            let leg = LegendreSeries::new(seed[..=n].to_vec()).unwrap();
            let u = chebyshev_interpolate(|x| leg.eval(x).unwrap(), n).unwrap();
            let back = TransformPair::build(n).chebyshev_to_legendre(&u).unwrap();
            for (a, b) in back.coeffs().iter().zip(leg.coeffs()) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
            for x in interpolation_nodes(n) {
                prop_assert!((u.eval(x).unwrap() - leg.eval(x).unwrap()).abs() <= 1e-11);
            }
        }
    }
}

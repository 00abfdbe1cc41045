//! Chebyshev–Legendre tau solver for linear Fredholm integro-differential
//! equations with a Caputo fractional derivative on `[0, 1]`:
//!
//! ```text
//! Σ_{i=0}^{n} a_i y^{(i)}(t) = f(t) + ∫₀¹ k(t, s) D^α y(s) ds,    y^{(i)}(0) = d_i
//! ```
//!
//! The unknown is expanded in shifted Legendre polynomials, known functions are
//! sampled at shifted Chebyshev–Gauss points and carried into the Legendre basis
//! through the coefficient transforms in [`cltransform`], and the Caputo
//! derivative acts through the operational matrices in [`fracderiv`].
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the command
//! line live in the companion `fide` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cltransform;
mod dd;
pub mod exprlang;
pub mod fracderiv;
pub mod gamma;
pub mod linalg;
pub mod orthopoly;
pub mod quadrature;
pub mod solver;

pub use cltransform::TransformPair;
pub use fracderiv::{CaputoOrder, OperationalMatrix};
pub use orthopoly::{ChebyshevSeries, LegendreSeries, MonomialSeries};
pub use quadrature::QuadratureRule;
pub use solver::{
    BuiltinExample, ConvergenceReport, DecayClass, FideProblem, FractionalTerm, SolveOptions,
    SpectralSolution,
};

/// Errors shared by the numerical modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point {0} lies outside [0, 1]")]
    OutOfDomain(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value {value} at {location}")]
    NonFinite { value: f64, location: alloc::string::String },
    #[error("invalid argument: {0}")]
    InvalidArgument(alloc::string::String),
    #[error("power rule not applicable to x^{beta} with alpha = {alpha}")]
    PowerRule { beta: f64, alpha: f64 },
    #[error("Newton iteration for Gauss nodes did not converge (N = {0})")]
    NoConvergence(usize),
    #[error("singular system at N = {n}: pivot {pivot:e} below threshold")]
    Singular { n: usize, pivot: f64 },
    #[error("residual {residual:e} exceeds bound {bound:e} at N = {n}")]
    Residual { n: usize, residual: f64, bound: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

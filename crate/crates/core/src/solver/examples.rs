//! Problem descriptions in textual form and the built-in example registry.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{mms_forcing, FideProblem, KernelFn, RealFn};
use crate::exprlang::{parse, Expression, Var};
use crate::fracderiv::CaputoOrder;
use crate::orthopoly::MonomialSeries;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ForcingSpec {
    /// `f(t)` as an expression in `t`.
    Expression(String),
    /// Manufactured solution `Σ q t^p`; the forcing is derived from it.
    Mms(Vec<(f64, f64)>),
}

/// Equation data with kernel, forcing and exact solution as text.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub a: Vec<f64>,
    pub alpha: f64,
    /// `k(t, s)`
    pub kernel: String,
    pub forcing: ForcingSpec,
    pub ics: Vec<f64>,
    /// Exact solution in `t`, if known. Defaults to the manufactured one.
    pub exact: Option<String>,
}

fn parse_field(field: &str, text: &str, allowed: &[Var]) -> Result<Expression> {
    let e = parse(text).map_err(|e| Error::InvalidArgument(format!("{field}: {e}")))?;
    if let Some(v) = e.free_variables().into_iter().find(|v| !allowed.contains(v)) {
        return Err(Error::InvalidArgument(format!("{field}: variable {} is not allowed here", v.name())));
    }
    Ok(e)
}

const PROBES: [f64; 5] = [0.05, 0.3, 0.5, 0.7, 0.95];

fn probe(field: &str, e: &Expression, with_s: bool) -> Result<()> {
    for &t in &PROBES {
        for &s in if with_s { &PROBES[..] } else { &PROBES[..1] } {
            e.evaluate(t, with_s.then_some(s)).map_err(|err| Error::InvalidArgument(format!("{field}: {err}")))?;
        }
    }
    Ok(())
}

impl ProblemSpec {
    /// Derivative order `n`.
    pub fn n(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn mms_series(&self) -> Result<Option<MonomialSeries>> {
        match &self.forcing {
            ForcingSpec::Mms(terms) => MonomialSeries::new(terms.iter().copied()).map(Some),
            ForcingSpec::Expression(_) => Ok(None),
        }
    }

    fn kernel_fn(&self) -> Result<KernelFn> {
        let k = parse_field("kernel", &self.kernel, &[Var::T, Var::S])?;
        probe("kernel", &k, true)?;
        Ok(Arc::new(move |t, s| k.evaluate(t, Some(s)).unwrap_or(f64::NAN)))
    }

    /// Parses and checks every expression and assembles the problem.
    pub fn build(&self) -> Result<FideProblem> {
        let order = CaputoOrder::new(self.alpha)?;
        let kernel = self.kernel_fn()?;
        let forcing: RealFn = match &self.forcing {
            ForcingSpec::Expression(text) => {
                let f = parse_field("forcing", text, &[Var::T])?;
                probe("forcing", &f, false)?;
                Arc::new(move |t| f.evaluate(t, None).unwrap_or(f64::NAN))
            }
            ForcingSpec::Mms(_) => {
                let exact = self.mms_series()?.expect("mms forcing");
                mms_forcing(&exact, &self.a, order, kernel.clone())?
            }
        };
        self.exact_solution()?;
        FideProblem::new(self.a.clone(), order, kernel, forcing, self.ics.clone())
    }

    /// The exact solution, from `exact` or else from the manufactured series.
    pub fn exact_solution(&self) -> Result<Option<RealFn>> {
        if let Some(text) = &self.exact {
            let e = parse_field("exact", text, &[Var::T])?;
            probe("exact", &e, false)?;
            return Ok(Some(Arc::new(move |t| e.evaluate(t, None).unwrap_or(f64::NAN))));
        }
        Ok(self.mms_series()?.map(|m| Arc::new(move |t| m.eval(t)) as RealFn))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExampleVariant {
    /// Forcing exactly as published.
    Printed,
    /// Forcing derived from the published exact solution.
    #[default]
    Corrected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuiltinExample {
    pub id: &'static str,
    pub variant: ExampleVariant,
    pub spec: ProblemSpec,
    /// Why the printed forcing is not used by default, when it differs.
    pub discrepancy: Option<&'static str>,
}

impl BuiltinExample {
    pub fn problem(&self) -> Result<FideProblem> {
        self.spec.build()
    }

    pub fn exact(&self) -> RealFn {
        self.spec.exact_solution().ok().flatten().expect("built-in examples have exact solutions")
    }
}

pub const BUILTIN_IDS: [&str; 4] = ["5.1", "5.2", "5.3", "5.4"];

/// Taylor terms `x^{k+1}/k!`, `k ≤ 20`, of `x eˣ`; the tail is below 1e-19 on `[0, 1]`.
fn x_exp_x_taylor() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut fact = 1.0;
    for k in 0..=20 {
        if k > 0 {
            fact *= k as f64;
        }
        out.push((1.0 / fact, (k + 1) as f64));
    }
    out
}

pub fn builtin_example(id: &str, variant: ExampleVariant) -> Result<BuiltinExample> {
    use ExampleVariant::*;
    let s = |x: &str| x.to_string();
    let (id, spec, discrepancy) = match id {
        "5.1" => (
            "5.1",
            ProblemSpec {
                name: s("5.1"),
                a: alloc::vec![0.0, 1.0],
                alpha: 0.5,
                kernel: s("t*s"),
                forcing: ForcingSpec::Expression(s("14*(1 - t/(2.5*gamma(1.5)))")),
                ics: alloc::vec![0.0],
                exact: Some(s("14*t")),
            },
            None,
        ),
        "5.2" => (
            "5.2",
            ProblemSpec {
                name: s("5.2"),
                a: alloc::vec![0.0, 1.0],
                alpha: 0.25,
                kernel: s("t^2*s^2"),
                forcing: match variant {
                    Printed => ForcingSpec::Expression(s(
                        "8*t^3 - 1.5*t^0.5 - (48/(6.75*gamma(4.75)) - gamma(2.75)/(4.25*gamma(2.25)))*t^2",
                    )),
                    Corrected => ForcingSpec::Mms(alloc::vec![(2.0, 4.0), (-1.0, 1.5)]),
                },
                ics: alloc::vec![0.0],
                exact: Some(s("2*t^4 - t^1.5")),
            },
            Some("printed forcing has gamma(2.75) where the power rule gives gamma(2.5)"),
        ),
        "5.3" => (
            "5.3",
            ProblemSpec {
                name: s("5.3"),
                a: alloc::vec![0.0, 1.0, 2.0],
                alpha: 1.5,
                kernel: s("t^2*sqrt(s)"),
                forcing: match variant {
                    Printed => ForcingSpec::Expression(s("(9*sqrt(pi) - 12)/sqrt(pi)*t^2 + 36*t + 8")),
                    Corrected => ForcingSpec::Mms(alloc::vec![(8.0, 1.0), (3.0, 3.0)]),
                },
                ics: alloc::vec![0.0, 8.0],
                exact: Some(s("8*t + 3*t^3")),
            },
            Some("printed t^2 coefficient (9*sqrt(pi) - 12)/sqrt(pi) should be (9*sqrt(pi) - 8)/sqrt(pi)"),
        ),
        "5.4" => (
            "5.4",
            ProblemSpec {
                name: s("5.4"),
                a: alloc::vec![1.0, 0.0, -1.0, 3.0],
                alpha: 0.5,
                kernel: s("exp(t - s)"),
                forcing: match variant {
                    Printed => ForcingSpec::Expression(s("(7 - 32/(15*sqrt(pi)))*exp(t) + 3*t*exp(t)")),
                    Corrected => ForcingSpec::Mms(x_exp_x_taylor()),
                },
                ics: alloc::vec![0.0, 1.0, 2.0],
                exact: Some(s("t*exp(t)")),
            },
            Some("printed constant 32/(15*sqrt(pi)) should be 0.8930285053637235 for the solution t*exp(t)"),
        ),
        other => return Err(Error::InvalidArgument(format!("unknown example {other:?}; known: 5.1, 5.2, 5.3, 5.4"))),
    };
    Ok(BuiltinExample { id, variant, spec, discrepancy })
}

use std::fmt;
use std::sync::Arc;

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};

/// `g(y, prec)`: the inhomogeneous term, evaluated at `prec` bits.
pub type GFn = Arc<dyn Fn(&Float, u32) -> Result<Float> + Send + Sync>;

/// Which end of the argument range pins the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// `|x| < 1` and `f(0)` finite.
    F0Finite,
    /// `x = 1` and `f(0) = 0`.
    F0Zero,
    /// `x > 1` and `f(inf)` finite.
    FInfFinite,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::F0Finite => "f0_finite",
            Boundary::F0Zero => "f0_zero",
            Boundary::FInfFinite => "f_inf_finite",
        }
    }
}

/// `f(a) = g(a) + x f(a/p)` with `p > 1`.
#[derive(Clone)]
pub struct FunceqProblem {
    pub label: String,
    g: GFn,
    pub x: Float,
    pub p: Float,
    pub boundary: Boundary,
}

impl fmt::Debug for FunceqProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunceqProblem")
            .field("label", &self.label)
            .field("x", &self.x)
            .field("p", &self.p)
            .field("boundary", &self.boundary)
            .finish()
    }
}

impl FunceqProblem {
    pub fn new(label: &str, g: GFn, x: Float, p: Float, boundary: Boundary) -> Result<Self> {
        if !(p > 1) {
            return Err(Error::domain(format!("{label}: contraction p must exceed 1")));
        }
        let ok = match boundary {
            Boundary::F0Finite => Float::with_val(x.prec(), x.abs_ref()) < 1,
            Boundary::F0Zero => x == 1,
            Boundary::FInfFinite => x > 1,
        };
        if !ok {
            return Err(Error::domain(format!(
                "{label}: weight x = {} does not match boundary {}",
                x.to_f64(),
                boundary.name()
            )));
        }
        Ok(FunceqProblem {
            label: label.to_string(),
            g,
            x,
            p,
            boundary,
        })
    }

    pub fn g(&self, y: &Float, prec: u32) -> Result<Float> {
        (self.g)(y, prec)
    }

    /// Bits lost per unrolling step when `g` cancels near 0: `log2 p`.
    pub(crate) fn bits_per_step(&self) -> f64 {
        self.p.to_f64().log2()
    }
}

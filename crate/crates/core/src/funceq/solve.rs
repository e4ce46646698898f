//! Solve a built-in problem at one argument and check the solution.

use rug::Float;

use super::engine::{expand_finite, expanding_outcome, series_outcome};
use super::problem::{Boundary, FunceqProblem};
use crate::error::Result;
use crate::mpcore::{BigReal, PrecisionContext, SeriesOutcome};
use crate::report::{ReportBuilder, VerificationReport};

/// Closed-form solution of the geometric toy problems.
pub fn closed_form(label: &str, a: &Float, prec: u32) -> Option<Float> {
    let a = Float::with_val(prec, a);
    Some(match label {
        "linear" => a * 4u32 / 3u32,
        "square" => Float::with_val(prec, a.square_ref()) * 16u32 / 15u32,
        "reciprocal" => -(a * 3u32).recip(),
        "reciprocal_square" => -(Float::with_val(prec, a.square_ref()) * 31u32).recip(),
        _ => return None,
    })
}

fn solve_outcome(prob: &FunceqProblem, a: &Float, ctx: &PrecisionContext) -> Result<SeriesOutcome> {
    match prob.boundary {
        Boundary::FInfFinite => expanding_outcome(prob, a, ctx),
        _ => series_outcome(prob, a, ctx),
    }
}

/// Solve `f(a) = g(a) + x f(a/p)` at `a`. Compared with the closed form when
/// one is known, otherwise with `g(a) + x f(a/p)` from a second solve.
/// With `depth`, the `N`-fold finite unrolling is reported alongside.
pub fn funceq_report(
    prob: &FunceqProblem,
    a: &BigReal,
    depth: Option<usize>,
    ctx: &PrecisionContext,
) -> Result<VerificationReport> {
    let af = a.as_float();
    let out = solve_outcome(prob, af, ctx)?;
    let w = out.sum.prec();
    let mut builder = ReportBuilder::new("funceq", ctx)
        .param("problem", &prob.label)
        .param("a", a)
        .series(&out)
        .detail("boundary", prob.boundary.name());
    let rhs = match closed_form(&prob.label, af, w) {
        Some(c) => {
            builder = builder.detail("check", "closed_form");
            c
        }
        None => {
            let shifted = Float::with_val(w, af / &prob.p);
            let inner = solve_outcome(prob, &shifted, ctx)?;
            builder = builder
                .detail("check", "functional_equation")
                .converged(out.converged && inner.converged);
            prob.g(&Float::with_val(w, af), w)? + Float::with_val(w, &prob.x * &inner.sum)
        }
    };
    if let Some(n) = depth {
        let e = expand_finite(prob, af, n, ctx)?;
        let short = PrecisionContext { digits: ctx.digits.min(20), ..ctx.clone() };
        builder = builder
            .detail("depth", n)
            .detail("partial_sum", BigReal::from_float(&e.partial_sum, &short))
            .detail("remainder_weight", BigReal::from_float(&e.remainder_weight, &short))
            .detail("remainder_argument", BigReal::from_float(&e.remainder_argument, &short));
    }
    Ok(builder.real(&out.sum, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funceq::problems::{builtin, BUILTIN_LABELS};

    #[test]
    fn toys_match_closed_forms() {
        let c = PrecisionContext::default();
        for (label, a) in [("linear", 3.0), ("square", 1.0), ("reciprocal", 0.7), ("reciprocal_square", 2.0)] {
            let r = funceq_report(&builtin(label).unwrap(), &BigReal::from_f64(a, &c), None, &c).unwrap();
            assert!(r.passed(), "{label}: {r:?}");
            assert_eq!(r.details["check"], "closed_form");
        }
        let r = funceq_report(&builtin("reciprocal").unwrap(), &BigReal::from_f64(1.0, &c), Some(5), &c).unwrap();
        assert!((r.lhs.to_f64() + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.details["remainder_weight"], "32.000000000000000000");
    }

    #[test]
    fn every_builtin_satisfies_its_equation() {
        let c = PrecisionContext::with_digits(30);
        for label in BUILTIN_LABELS {
            let a = BigReal::from_f64(0.5, &c);
            let r = funceq_report(&builtin(label).unwrap(), &a, None, &c).unwrap();
            assert!(r.passed(), "{label}: {r:?}");
        }
    }
}

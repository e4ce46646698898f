//! Verification reports, partial evaluations and the pass/fail rule.

use std::collections::BTreeMap;
use std::fmt;

use rug::Float;
use serde::{Serialize, Serializer};

use crate::mpcore::{BigComplex, BigReal, PrecisionContext};

/// A real or complex result.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(BigReal),
    Complex(BigComplex),
}

impl Value {
    pub fn real(value: &Float, ctx: &PrecisionContext) -> Self {
        Value::Real(BigReal::from_float(value, ctx))
    }

    pub fn as_real(&self) -> Option<&BigReal> {
        match self {
            Value::Real(r) => Some(r),
            Value::Complex(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Real(r) => r.to_f64(),
            Value::Complex(c) => c.modulus().to_f64(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(r) => write!(f, "{r}"),
            Value::Complex(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Real(r) => r.serialize(serializer),
            Value::Complex(c) => c.serialize(serializer),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// The worse of two verdicts: fail beats inconclusive beats pass.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Acceptance band: pass iff `abs_error <= max(abs, rel * |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    /// `(tail_tolerance, rel_tolerance)` of the context.
    pub fn from_ctx(ctx: &PrecisionContext) -> Self {
        Tolerance::new(ctx.tail_tolerance, ctx.rel_tolerance)
    }

    /// `10^-(digits-8)`, absolute and relative, for identities exact at finite size.
    pub fn exact(ctx: &PrecisionContext) -> Self {
        let t = ctx.exact_tolerance();
        Tolerance::new(t, t)
    }

    pub fn relative(rel: f64) -> Self {
        Tolerance::new(0.0, rel)
    }

    pub fn bound(&self, rhs_abs: &Float) -> f64 {
        self.abs.max(self.rel * rhs_abs.to_f64())
    }
}

/// Partial value of a product or series with its truncation diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialEvaluation {
    pub value: Value,
    pub terms_used: usize,
    /// `|last factor - 1|` for products, `|last summand|` for series.
    pub last_term_deviation: BigReal,
    pub tail_bound: BigReal,
    pub converged: bool,
}

/// LHS/RHS comparison of one identity instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity_id: String,
    pub parameters: BTreeMap<String, String>,
    pub lhs: Value,
    pub rhs: Value,
    pub abs_error: BigReal,
    pub rel_error: BigReal,
    pub terms_used: usize,
    pub tail_bound: BigReal,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub details: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn abs_error_f64(&self) -> f64 {
        self.abs_error.to_f64()
    }

    pub fn rel_error_f64(&self) -> f64 {
        self.rel_error.to_f64()
    }
}

/// Assembles a [`VerificationReport`] from full-precision sides.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    id: String,
    ctx: PrecisionContext,
    parameters: BTreeMap<String, String>,
    details: BTreeMap<String, String>,
    terms_used: usize,
    tail_bound: f64,
    converged: bool,
    tolerance: Tolerance,
}

impl ReportBuilder {
    pub fn new(id: &str, ctx: &PrecisionContext) -> Self {
        ReportBuilder {
            id: id.to_string(),
            ctx: ctx.clone(),
            parameters: BTreeMap::new(),
            details: BTreeMap::new(),
            terms_used: 0,
            tail_bound: 0.0,
            converged: true,
            tolerance: Tolerance::from_ctx(ctx),
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn detail(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }

    pub fn terms(mut self, terms: usize) -> Self {
        self.terms_used = terms;
        self
    }

    pub fn tail(mut self, tail_bound: f64) -> Self {
        self.tail_bound = tail_bound;
        self
    }

    pub fn converged(mut self, converged: bool) -> Self {
        self.converged = converged;
        self
    }

    pub fn tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Take terms, tail and convergence from a truncated evaluation.
    pub fn series(self, outcome: &crate::mpcore::SeriesOutcome) -> Self {
        self.terms(outcome.terms)
            .tail(outcome.tail_bound.to_f64())
            .converged(outcome.converged)
    }

    pub fn real(self, lhs: &Float, rhs: &Float) -> VerificationReport {
        let prec = lhs.prec().max(rhs.prec());
        let diff = Float::with_val(prec, lhs - rhs).abs();
        let rhs_abs = Float::with_val(prec, rhs.abs_ref());
        let lhs_v = Value::real(lhs, &self.ctx);
        let rhs_v = Value::real(rhs, &self.ctx);
        self.finish(lhs_v, rhs_v, diff, rhs_abs)
    }

    pub fn complex(self, lhs: &BigComplex, rhs: &BigComplex) -> VerificationReport {
        let diff = lhs.sub(rhs).modulus();
        let rhs_abs = rhs.modulus();
        self.finish(Value::Complex(lhs.clone()), Value::Complex(rhs.clone()), diff, rhs_abs)
    }

    fn finish(self, lhs: Value, rhs: Value, diff: Float, rhs_abs: Float) -> VerificationReport {
        let rel = if rhs_abs.is_zero() {
            diff.clone()
        } else {
            Float::with_val(diff.prec(), &diff / &rhs_abs)
        };
        let bound = self.tolerance.bound(&rhs_abs);
        let verdict = if !self.converged {
            Verdict::Inconclusive
        } else if diff.is_finite() && diff <= bound {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        VerificationReport {
            identity_id: self.id,
            parameters: self.parameters,
            lhs,
            rhs,
            abs_error: BigReal::from_float(&diff, &short_ctx(&self.ctx)),
            rel_error: BigReal::from_float(&rel, &short_ctx(&self.ctx)),
            terms_used: self.terms_used,
            tail_bound: BigReal::from_f64(self.tail_bound, &short_ctx(&self.ctx)),
            tolerance: bound,
            verdict,
            details: self.details,
        }
    }
}

/// A trace with fixed columns, written row by row to CSV.
pub trait TraceTable {
    fn columns(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

/// Errors and bounds are reported with 10 significant digits.
fn short_ctx(ctx: &PrecisionContext) -> PrecisionContext {
    let mut c = ctx.clone();
    c.digits = 10;
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_tolerance_rule() {
        let ctx = PrecisionContext::with_digits(20);
        let one = Float::with_val(80, 1);
        let near = Float::with_val(80, 1) + Float::with_val(80, 1e-12);
        let far = Float::with_val(80, 1) + Float::with_val(80, 1e-8);
        let tol = Tolerance::new(1e-10, 0.0);
        assert_eq!(ReportBuilder::new("t", &ctx).tolerance(tol).real(&near, &one).verdict, Verdict::Pass);
        assert_eq!(ReportBuilder::new("t", &ctx).tolerance(tol).real(&far, &one).verdict, Verdict::Fail);
        let rel = Tolerance::relative(1e-7);
        assert_eq!(ReportBuilder::new("t", &ctx).tolerance(rel).real(&far, &one).verdict, Verdict::Pass);
    }

    #[test]
    fn nonconvergence_is_inconclusive() {
        let ctx = PrecisionContext::with_digits(20);
        let one = Float::with_val(80, 1);
        let r = ReportBuilder::new("t", &ctx).converged(false).real(&one, &one);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn verdicts_combine_worst_first() {
        assert_eq!(Verdict::Pass.combine(Verdict::Inconclusive), Verdict::Inconclusive);
        assert_eq!(Verdict::Inconclusive.combine(Verdict::Fail), Verdict::Fail);
        assert_eq!(Verdict::Pass.combine(Verdict::Pass), Verdict::Pass);
    }

    #[test]
    fn serializes_values_as_decimal_strings() {
        let ctx = PrecisionContext::with_digits(12);
        let r = ReportBuilder::new("t", &ctx)
            .param("a", "1")
            .real(&Float::with_val(60, 0.5), &Float::with_val(60, 0.5));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["lhs"], "0.500000000000");
        assert_eq!(json["verdict"], "pass");
        assert_eq!(json["parameters"]["a"], "1");
    }
}

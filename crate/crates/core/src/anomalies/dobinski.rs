//! The product `prod_j tan(2^j a)^(2^-j)` under the principal branch, its
//! telescoped closure and the Agnew-Walker sequence.

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpcore::{pi, sin_at, tan_at, BigComplex, BigReal, ExactArgument, PrecisionContext};
use crate::products::{classify, ArgumentClass};
use crate::report::{ReportBuilder, Tolerance, TraceTable, VerificationReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Real,
    Complex,
}

impl Branch {
    fn of(value: &Float) -> Self {
        if value.is_sign_negative() && !value.is_zero() {
            Branch::Complex
        } else {
            Branch::Real
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Real => "real",
            Branch::Complex => "complex",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DobinskiRow {
    pub j: u32,
    /// `tan(2^j a)`
    pub tan_value: BigReal,
    pub branch: Branch,
    /// `tan(2^j a)^(2^-j)`, principal branch
    pub factor: BigComplex,
    /// `P_j`, the product of factors `0..=j`
    pub partial: BigComplex,
    /// `|P_j - 4 sin^2 a|`
    pub deviation: BigReal,
    /// `s_j = sin(2^(1+j) a)^(2^-j)`, principal branch
    pub agnew_walker: BigComplex,
    /// Sum of the principal arguments of the factors and of `(2 sin(2^(j+1) a))^(2^-j)`.
    pub recorded_phase: BigReal,
    /// `P_j (2 sin(2^(j+1) a))^(2^-j) exp(-i recorded_phase)`
    pub closure: BigComplex,
    /// `|closure - 4 sin^2 a|`
    pub closure_deviation: BigReal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DobinskiTrace {
    pub a: String,
    pub class: ArgumentClass,
    /// `4 sin^2 a`
    pub target: BigReal,
    pub rows: Vec<DobinskiRow>,
}

fn require_no_pole(a: &ExactArgument) -> Result<ArgumentClass> {
    let class = classify(a);
    if let ArgumentClass::PoleDyadic { k } = class {
        return Err(Error::domain(format!(
            "a = {a} = (2n+1) pi/2^{k}: tan(2^{} a) is a pole",
            k - 1
        )));
    }
    Ok(class)
}

/// Principal `z^(2^-j)` of a real `z`.
fn principal_root(z: &Float, j: u32, prec: u32) -> Result<BigComplex> {
    let e = Float::with_val(prec, Float::i_exp(1, -(j as i32)));
    BigComplex::from_real(Float::with_val(prec, z)).pow_principal(&e)
}

fn phase_of(z: &Float, j: u32, prec: u32) -> Float {
    if z.is_sign_negative() && !z.is_zero() {
        pi(prec) / Float::with_val(prec, Float::i_exp(1, j as i32))
    } else {
        Float::with_val(prec, 0)
    }
}

fn rounded(z: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    BigComplex::new(Float::with_val(ctx.bits(), &z.re), Float::with_val(ctx.bits(), &z.im))
}

/// Factors `tan(2^j a)^(2^-j)` for `j = 0..=J` under the principal branch,
/// with the closure `P_J (2 sin(2^(J+1) a))^(2^-J) = 4 sin^2 a` checked after
/// removing the recorded phase.
pub fn dobinski_evaluate(a: &ExactArgument, terms: u32, ctx: &PrecisionContext) -> Result<DobinskiTrace> {
    let class = require_no_pole(a)?;
    let w = ctx.reduction_bits(2, terms + 1) + 16;
    let target = Float::with_val(w, sin_at(a, w).square() * 4u32);
    let target_c = BigComplex::from_real(target.clone());
    let mut partial = BigComplex::one(w);
    let mut phase = Float::with_val(w, 0);
    let mut rows = Vec::with_capacity(terms as usize + 1);
    let short = PrecisionContext { digits: 10, ..ctx.clone() };
    for j in 0..=terms {
        let t = Float::with_val(w, tan_at(&a.scale_pow(2, j as i32), ctx.reduction_bits(2, j) + 16)?);
        let factor = principal_root(&t, j, w)?;
        partial = partial.mul(&factor);
        phase += phase_of(&t, j, w);

        let s = Float::with_val(w, sin_at(&a.scale_pow(2, j as i32 + 1), ctx.reduction_bits(2, j + 1) + 16));
        let agnew = principal_root(&s, j, w)?;
        let twice = Float::with_val(w, &s * 2u32);
        let correction = principal_root(&twice, j, w)?;
        let total_phase = Float::with_val(w, &phase + phase_of(&twice, j, w));
        let closure = partial.mul(&correction).rotate(&Float::with_val(w, -&total_phase));
        rows.push(DobinskiRow {
            j,
            tan_value: BigReal::from_float(&t, ctx),
            branch: Branch::of(&t),
            factor: rounded(&factor, ctx),
            partial: rounded(&partial, ctx),
            deviation: BigReal::from_float(&partial.sub(&target_c).modulus(), &short),
            agnew_walker: rounded(&agnew, ctx),
            recorded_phase: BigReal::from_float(&total_phase, ctx),
            closure: rounded(&closure, ctx),
            closure_deviation: BigReal::from_float(&closure.sub(&target_c).modulus(), &short),
        });
    }
    Ok(DobinskiTrace {
        a: a.to_string(),
        class,
        target: BigReal::from_float(&target, ctx),
        rows,
    })
}

impl TraceTable for DobinskiTrace {
    fn columns(&self) -> Vec<&'static str> {
        vec![
            "j",
            "tan",
            "branch",
            "factor",
            "partial",
            "target",
            "deviation",
            "agnew_walker",
            "recorded_phase",
            "closure",
            "closure_deviation",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.j.to_string(),
                    r.tan_value.to_string(),
                    r.branch.as_str().to_string(),
                    r.factor.to_string(),
                    r.partial.to_string(),
                    self.target.to_string(),
                    r.deviation.to_string(),
                    r.agnew_walker.to_string(),
                    r.recorded_phase.to_string(),
                    r.closure.to_string(),
                    r.closure_deviation.to_string(),
                ]
            })
            .collect()
    }
}

/// The closure at `J` as a report: `|P_J (2 sin(2^(J+1) a))^(2^-J)|` after
/// phase removal against `4 sin^2 a`.
pub fn dobinski_closure_report(a: &ExactArgument, terms: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let trace = dobinski_evaluate(a, terms, ctx)?;
    let last = trace.rows.last().expect("at least one row");
    let lhs = last.closure.re.clone();
    let imag = Float::with_val(lhs.prec(), last.closure.im.abs_ref());
    let complex_factors = trace.rows.iter().filter(|r| r.branch == Branch::Complex).count();
    let mut report = ReportBuilder::new("dob1", ctx)
        .param("a", a)
        .param("J", terms)
        .terms(terms as usize + 1)
        .tolerance(Tolerance::exact(ctx))
        .detail("complex_factors", complex_factors)
        .detail("closure_imaginary_part", crate::mpcore::format_decimal(&imag, 10))
        .detail("partial_minus_target", &last.deviation)
        .detail("closure_deviation", &last.closure_deviation)
        .detail("agnew_walker_modulus", crate::mpcore::format_decimal(&last.agnew_walker.modulus(), 12))
        .real(&lhs, trace.target.as_float());
    if imag.to_f64() > Tolerance::exact(ctx).bound(trace.target.as_float()) {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgnewWalkerRow {
    pub j: u32,
    pub sin_value: BigReal,
    pub s: BigComplex,
    pub modulus: BigReal,
    /// `|s_j - 1|`
    pub deviation: BigReal,
    pub near_one: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgnewWalkerTrace {
    pub a: String,
    pub tolerance: f64,
    pub rows: Vec<AgnewWalkerRow>,
    /// Every row from `trailing_from` on has `|s_j - 1| < tolerance`.
    pub trailing_from: Option<u32>,
}

/// `s_j = sin(2^(1+j) a)^(2^-j)` for `j = 0..=J`. The closure gives
/// `P_J = 4 sin^2 a / (2^(2^-J) s_J)` up to phase, so the product tends to
/// `4 sin^2 a` exactly when `s_J` tends to 1.
pub fn agnew_walker_condition(
    a: &ExactArgument,
    terms: u32,
    tolerance: f64,
    ctx: &PrecisionContext,
) -> Result<AgnewWalkerTrace> {
    require_no_pole(a)?;
    let w = ctx.reduction_bits(2, terms + 1) + 16;
    let short = PrecisionContext { digits: 10, ..ctx.clone() };
    let one = BigComplex::one(w);
    let mut rows = Vec::with_capacity(terms as usize + 1);
    for j in 0..=terms {
        let s = Float::with_val(w, sin_at(&a.scale_pow(2, j as i32 + 1), ctx.reduction_bits(2, j + 1) + 16));
        let root = principal_root(&s, j, w)?;
        let dev = root.sub(&one).modulus();
        rows.push(AgnewWalkerRow {
            j,
            sin_value: BigReal::from_float(&s, ctx),
            s: rounded(&root, ctx),
            modulus: BigReal::from_float(&root.modulus(), ctx),
            near_one: dev.to_f64() < tolerance,
            deviation: BigReal::from_float(&dev, &short),
        });
    }
    let trailing_from = rows
        .iter()
        .rposition(|r| !r.near_one)
        .map(|i| i as u32 + 1)
        .or(Some(0))
        .filter(|&i| i <= terms);
    Ok(AgnewWalkerTrace {
        a: a.to_string(),
        tolerance,
        rows,
        trailing_from,
    })
}

impl TraceTable for AgnewWalkerTrace {
    fn columns(&self) -> Vec<&'static str> {
        vec!["j", "sin", "s", "modulus", "deviation", "near_one"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.j.to_string(),
                    r.sin_value.to_string(),
                    r.s.to_string(),
                    r.modulus.to_string(),
                    r.deviation.to_string(),
                    r.near_one.to_string(),
                ]
            })
            .collect()
    }
}

/// `|s_J|` against 1 within `tolerance`.
pub fn agnew_walker_report(a: &ExactArgument, terms: u32, tolerance: f64, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let trace = agnew_walker_condition(a, terms, tolerance, ctx)?;
    let last = trace.rows.last().expect("at least one row");
    let one = Float::with_val(64, 1);
    Ok(ReportBuilder::new("agwa", ctx)
        .param("a", a)
        .param("J", terms)
        .terms(terms as usize + 1)
        .tolerance(Tolerance::new(tolerance, 0.0))
        .detail("s_J", &last.s)
        .detail("abs_s_J_minus_1", &last.deviation)
        .detail(
            "trailing_near_one_from",
            trace.trailing_from.map_or("none".to_string(), |j| j.to_string()),
        )
        .real(last.modulus.as_float(), &one))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn arg(s: &str) -> ExactArgument {
        s.parse().unwrap()
    }

    #[test]
    fn closure_holds_for_every_prefix() {
        for a in ["0.3", "1", "pi/3"] {
            let t = dobinski_evaluate(&arg(a), 20, &ctx()).unwrap();
            for r in &t.rows {
                assert!(r.closure_deviation.to_f64() < 1e-25, "a={a} j={}: {}", r.j, r.closure_deviation);
            }
        }
    }

    #[test]
    fn target_at_one() {
        let t = dobinski_evaluate(&arg("1"), 20, &ctx()).unwrap();
        assert!(t.target.to_string().starts_with("2.8322936730"));
    }

    #[test]
    fn pi_third_has_complex_factors() {
        let t = dobinski_evaluate(&arg("pi/3"), 6, &ctx()).unwrap();
        // 2^j mod 3 alternates 1, 2: tan(pi/3) > 0, tan(2pi/3) < 0
        let branches: Vec<Branch> = t.rows.iter().map(|r| r.branch).collect();
        assert_eq!(branches[0], Branch::Real);
        assert_eq!(branches[1], Branch::Complex);
        assert_eq!(branches[2], Branch::Real);
        assert!(t.rows.iter().any(|r| !r.partial.is_real()));
    }

    #[test]
    fn dyadic_poles_rejected() {
        assert!(dobinski_evaluate(&arg("3/8*pi"), 5, &ctx()).is_err());
        assert!(agnew_walker_condition(&arg("pi/2"), 5, 1e-3, &ctx()).is_err());
    }

    #[test]
    fn closure_reports() {
        for a in ["0.3", "1", "pi/3"] {
            for j in [5, 10, 20] {
                let r = dobinski_closure_report(&arg(a), j, &ctx()).unwrap();
                assert!(r.passed() && r.abs_error_f64() < 1e-25, "a={a} J={j}: {r:?}");
            }
            let r = agnew_walker_report(&arg(a), 20, 1e-3, &ctx()).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn agnew_walker_phase_shrinks() {
        let t = agnew_walker_condition(&arg("1"), 20, 1e-4, &ctx()).unwrap();
        for r in &t.rows {
            if r.sin_value.is_sign_negative() {
                let expected = std::f64::consts::PI / 2f64.powi(r.j as i32);
                let phase = r.s.arg().to_f64();
                assert!((phase - expected).abs() < 1e-12);
            }
        }
        assert_eq!(t.rows().len(), 21);
    }

    proptest::proptest! {
        #[test]
        fn closure_holds_for_random_arguments(n in -2999i64..2999, terms in 0u32..16) {
            proptest::prop_assume!(n != 0);
            let c = PrecisionContext::with_digits(30);
            let a = ExactArgument::ratio(n, 1000);
            let t = dobinski_evaluate(&a, terms, &c).unwrap();
            let target = t.target.to_f64();
            for r in &t.rows {
                let dev = r.closure_deviation.to_f64();
                proptest::prop_assert!(dev <= 1e-22 * target.max(1e-10), "a={a} j={} dev={dev}", r.j);
            }
        }
    }
}

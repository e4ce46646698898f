use rug::ops::Pow;
use rug::Float;

use super::problem::{Boundary, FunceqProblem};
use crate::error::{Error, Result};
use crate::mpcore::{sum_series, BigReal, PrecisionContext, SeriesOutcome};
use crate::report::{PartialEvaluation, Value};

/// `N`-fold unrolling of the functional equation:
/// `f(a) = partial_sum + remainder_weight * f(remainder_argument)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteExpansion {
    /// `sum_{j<N} x^j g(a/p^j)`
    pub partial_sum: Float,
    /// `x^N`
    pub remainder_weight: Float,
    /// `a / p^N`
    pub remainder_argument: Float,
}

pub fn expand_finite(prob: &FunceqProblem, a: &Float, n: usize, ctx: &PrecisionContext) -> Result<FiniteExpansion> {
    if n < 1 {
        return Err(Error::domain("expansion depth N must be >= 1"));
    }
    let base = ctx.work_bits();
    let top = term_bits(prob, base, n);
    let mut partial = Float::with_val(top, 0);
    let mut weight = Float::with_val(top, 1);
    let mut arg = Float::with_val(top, a);
    for j in 0..n {
        let prec = term_bits(prob, base, j);
        let g = prob.g(&Float::with_val(prec, &arg), prec)?;
        partial += Float::with_val(top, &weight * &g);
        weight *= &prob.x;
        arg /= &prob.p;
    }
    Ok(FiniteExpansion {
        partial_sum: partial,
        remainder_weight: weight,
        remainder_argument: arg,
    })
}

fn term_bits(prob: &FunceqProblem, base: u32, j: usize) -> u32 {
    base + (j as f64 * prob.bits_per_step()).ceil() as u32
}

/// `sum_{j>=0} x^j g(a/p^j)` truncated by the geometric rule; the outcome
/// records non-convergence instead of failing.
pub fn series_outcome(prob: &FunceqProblem, a: &Float, ctx: &PrecisionContext) -> Result<SeriesOutcome> {
    if prob.boundary == Boundary::FInfFinite {
        return Err(Error::domain(format!("{}: contracting series needs boundary at 0", prob.label)));
    }
    let base = ctx.work_bits();
    let out_bits = term_bits(prob, base, ctx.max_terms.min(512));
    sum_series(ctx, out_bits, |j| {
        let prec = term_bits(prob, base, j);
        let arg = Float::with_val(prec, a) / Float::with_val(prec, &prob.p).pow(j as u32);
        let weight = Float::with_val(prec, &prob.x).pow(j as u32);
        Ok(weight * prob.g(&arg, prec)?)
    })
}

/// `-sum_{j>=1} g(p^j a) / x^j` truncated by the geometric rule.
pub fn expanding_outcome(prob: &FunceqProblem, a: &Float, ctx: &PrecisionContext) -> Result<SeriesOutcome> {
    if prob.boundary != Boundary::FInfFinite {
        return Err(Error::domain(format!("{}: expanding series needs boundary at infinity", prob.label)));
    }
    let w = ctx.work_bits();
    let mut out = sum_series(ctx, w, |i| {
        let j = (i + 1) as u32;
        let arg = Float::with_val(w, a) * Float::with_val(w, &prob.p).pow(j);
        let weight = Float::with_val(w, &prob.x).pow(j);
        Ok(prob.g(&arg, w)? / weight)
    })?;
    out.sum = -out.sum;
    Ok(out)
}

fn to_partial(out: SeriesOutcome, ctx: &PrecisionContext) -> PartialEvaluation {
    PartialEvaluation {
        value: Value::real(&out.sum, ctx),
        terms_used: out.terms,
        last_term_deviation: BigReal::from_float(&out.last_term, ctx),
        tail_bound: BigReal::from_float(&out.tail_bound, ctx),
        converged: out.converged,
    }
}

/// Solution `f(a) = sum_{j>=0} x^j g(a/p^j)` for boundaries at 0.
pub fn solve_series(prob: &FunceqProblem, a: &BigReal, ctx: &PrecisionContext) -> Result<PartialEvaluation> {
    let out = series_outcome(prob, a.as_float(), ctx)?.into_result()?;
    Ok(to_partial(out, ctx))
}

/// Solution `f(a) = -sum_{j>=1} g(p^j a) / x^j` for `x > 1` with `f(inf)` finite.
pub fn solve_expanding(prob: &FunceqProblem, a: &BigReal, ctx: &PrecisionContext) -> Result<PartialEvaluation> {
    let out = expanding_outcome(prob, a.as_float(), ctx)?.into_result()?;
    Ok(to_partial(out, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funceq::problems;
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn br(x: f64, ctx: &PrecisionContext) -> BigReal {
        BigReal::from_f64(x, ctx)
    }

    fn real(p: &PartialEvaluation) -> Float {
        p.value.as_real().unwrap().as_float().clone()
    }

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        Float::with_val(300, a - b).abs() < tol
    }

    #[test]
    fn linear_toy_is_four_thirds() {
        let c = ctx();
        let f = solve_series(&problems::linear(), &br(3.0, &c), &c).unwrap();
        assert!(f.converged);
        assert!(close(&real(&f), 4.0, c.tail_tolerance));
    }

    #[test]
    fn square_toy_is_sixteen_fifteenths() {
        let c = ctx();
        let f = solve_series(&problems::square(), &br(1.0, &c), &c).unwrap();
        let expect = Float::with_val(300, 16) / 15u32;
        assert!(Float::with_val(300, &real(&f) - &expect).abs() < c.tail_tolerance);
    }

    #[test]
    fn expanding_toys() {
        let c = ctx();
        let f = solve_expanding(&problems::reciprocal(), &br(2.0, &c), &c).unwrap();
        let expect = Float::with_val(300, -1) / 6u32;
        assert!(Float::with_val(300, &real(&f) - &expect).abs() < c.tail_tolerance);
        let f = solve_expanding(&problems::reciprocal_square(), &br(1.0, &c), &c).unwrap();
        let expect = Float::with_val(300, -1) / 31u32;
        assert!(Float::with_val(300, &real(&f) - &expect).abs() < c.tail_tolerance);
    }

    #[test]
    fn exp_decay_matches_direct_sum() {
        let c = ctx();
        let f = solve_expanding(&problems::exp_decay(), &br(1.0, &c), &c).unwrap();
        assert!(f.terms_used < 10);
        let mut direct = Float::with_val(300, 0);
        for j in 1..12u32 {
            let e = Float::with_val(300, -(2f64.powi(j as i32))).exp();
            direct -= e / 2u32.pow(j);
        }
        assert!(Float::with_val(300, &real(&f) - &direct).abs() < c.tail_tolerance);
    }

    #[test]
    fn single_unrolling() {
        let c = ctx();
        let prob = problems::square();
        let a = Float::with_val(200, 0.7);
        let e = expand_finite(&prob, &a, 1, &c).unwrap();
        assert_eq!(e.remainder_weight, 0.25);
        assert!(close(&e.partial_sum, 0.49, 1e-15));
        assert!(expand_finite(&prob, &a, 0, &c).is_err());
    }

    #[test]
    fn duplication_unrolling_approaches_lngamma() {
        let c = ctx();
        let e = expand_finite(&problems::duplication_defect(), &Float::with_val(200, 0.5), 30, &c).unwrap();
        let lg = crate::specialfn::ln_gamma_float(&Float::with_val(200, 1.5), 200).unwrap();
        assert!(Float::with_val(200, &e.partial_sum - &lg).abs() < 1e-8);
    }

    #[test]
    fn rs2_summand_series_value() {
        let c = ctx();
        let a = br(0.5, &c);
        let f = solve_series(&problems::rs2_summand(), &a, &c).unwrap();
        let w = 300;
        let lg = crate::specialfn::ln_gamma_float(&Float::with_val(w, 1.5), w).unwrap();
        let gamma = crate::specialfn::euler_gamma_float(w);
        // a f(a) = -2 gamma a - 2 ln Gamma(1+a)
        let expect = Float::with_val(w, -gamma) - lg * 2u32;
        let got = Float::with_val(w, &real(&f) * 0.5f64);
        assert!(Float::with_val(w, got - expect).abs() < 1e-38);
    }

    #[test]
    fn rs2_summand_decays_geometrically() {
        let prob = problems::rs2_summand();
        let mut prev: Option<Float> = None;
        for j in 0..60u32 {
            let y = Float::with_val(400, 0.9) / Float::with_val(400, 2).pow(j);
            let t = prob.g(&y, 400).unwrap().abs();
            if let (Some(p), true) = (&prev, j > 4) {
                assert!(Float::with_val(400, &t / p) <= 0.6, "j = {j}");
            }
            prev = Some(t);
        }
    }

    #[test]
    fn boundary_mismatch_rejected() {
        let c = ctx();
        assert!(solve_expanding(&problems::linear(), &br(1.0, &c), &c).is_err());
        assert!(solve_series(&problems::reciprocal(), &br(1.0, &c), &c).is_err());
        let g: crate::funceq::GFn = std::sync::Arc::new(|y, p| Ok(Float::with_val(p, y)));
        assert!(FunceqProblem::new("bad", g.clone(), Float::with_val(53, 2), Float::with_val(53, 2), Boundary::F0Finite).is_err());
        assert!(FunceqProblem::new("bad", g, Float::with_val(53, 0.5), Float::with_val(53, 1), Boundary::F0Finite).is_err());
    }

    #[test]
    fn nonconvergence_is_an_error() {
        let c = ctx().with_max_terms(5);
        let r = solve_series(&problems::linear(), &br(1.0, &c), &c);
        assert!(matches!(r, Err(Error::NoConvergence { terms: 5, .. })));
    }

    #[test]
    fn second_unrolling_substitutes_into_itself() {
        let c = ctx();
        let prob = problems::square();
        let a = Float::with_val(c.work_bits(), 0.8);
        let e = expand_finite(&prob, &a, 2, &c).unwrap();
        let p = c.work_bits();
        let g0 = prob.g(&a, p).unwrap();
        let g1 = prob.g(&Float::with_val(p, &a / 2u32), p).unwrap();
        let direct = g0 + g1 * 0.25f64;
        assert!(Float::with_val(p, &e.partial_sum - &direct).abs() < 1e-55);
        assert_eq!(e.remainder_weight, 0.0625);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn unrolling_is_consistent(a in -3.0f64..3.0, n in prop::sample::select(vec![1usize, 5, 20])) {
            let c = PrecisionContext::with_digits(30);
            for prob in [problems::linear(), problems::square()] {
                let full = series_outcome(&prob, &Float::with_val(200, a), &c).unwrap();
                let e = expand_finite(&prob, &Float::with_val(200, a), n, &c).unwrap();
                let rest = series_outcome(&prob, &e.remainder_argument, &c).unwrap();
                let rebuilt = Float::with_val(300, &e.partial_sum + Float::with_val(300, &e.remainder_weight * &rest.sum));
                prop_assert!(Float::with_val(300, &rebuilt - &full.sum).abs() < 1e-19);
            }
        }

        #[test]
        fn solution_satisfies_equation(a in -2.0f64..2.0) {
            let c = PrecisionContext::with_digits(30);
            for prob in [problems::linear(), problems::square(), problems::duplication_defect()] {
                let a = Float::with_val(200, a);
                if prob.label == "lngamma_duplication" && a <= -0.9 {
                    continue;
                }
                let fa = series_outcome(&prob, &a, &c).unwrap();
                let half = Float::with_val(200, &a / &prob.p);
                let fh = series_outcome(&prob, &half, &c).unwrap();
                let g = prob.g(&a, 200).unwrap();
                let resid = Float::with_val(300, &fa.sum - Float::with_val(300, &prob.x * &fh.sum)) - g;
                prop_assert!(resid.abs() < 4.0 * c.tail_tolerance, "{}", prob.label);
            }
        }
    }
}

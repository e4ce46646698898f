//! The acceptance checks: one verdict per criterion, each aggregating many
//! identity instances.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::anomalies::{
    agnew_walker_report, case1_expansion_check, case2_zero_factor, dobinski_closure_report, weierstrass_trajectory,
};
use crate::error::{Error, Result};
use crate::funceq::{
    cm1b_check, eta_series_check, funceq_report, problems, r0a_product_check, rs2_check, zeta_series_check,
};
use crate::mpcore::{pow10, BigReal, ExactArgument, PrecisionContext};
use crate::products::{
    br114_finite, cosine_sum_lemma, cpodd_product, epsilon_scaling_study, euler_sine_partial, finite_p5_product,
    gn3ad, gn3c_pairing_check, h25, nplication_product, peo2_product, r1bd, sinc_cot_product, sinc_partial,
    viete_partial, vsum2_partial, vsum2_product, vsum2a_hyperbolic, x1_check, x1b_check, BaseFamily, SumKind,
};
use crate::report::{VerificationReport, Verdict};
use crate::specialfn::{digamma_derivative_check, eta_zeta_relation_check, gauss_multiplication_check};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Digits at which the fixed tolerances below are stated.
const REFERENCE_DIGITS: u32 = 50;

/// `10^-e` at 50 digits or more; below, the exponent shrinks in proportion
/// to the digits. Never tighter than `1000 * tail_tolerance`, the accuracy
/// a truncated product of modulus up to about 100 can deliver.
pub fn scaled_tolerance(exponent: u32, ctx: &PrecisionContext) -> f64 {
    let digits = ctx.digits.min(REFERENCE_DIGITS);
    let e = (exponent * digits + REFERENCE_DIGITS / 2) / REFERENCE_DIGITS;
    pow10(-(e.max(1) as i32)).max(1e3 * ctx.tail_tolerance)
}

/// Term budget stated at tail tolerance `10^-40`, grown in proportion to
/// `log10(1/tail_tolerance)` for tighter tails.
pub fn scaled_terms(terms: usize, ctx: &PrecisionContext) -> usize {
    let decades = -ctx.tail_tolerance.log10();
    (terms as f64 * (decades / 40.0).max(1.0)).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: &'static str,
    pub verdict: Verdict,
    pub cases: usize,
    /// Largest error seen against the criterion's tolerance.
    pub worst_error: f64,
    pub tolerance: f64,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:>2}] {:<22} {:<12} cases={:<4} worst={:.3e} tol={:.1e}",
            self.criterion,
            self.name,
            self.verdict.as_str(),
            self.cases,
            self.worst_error,
            self.tolerance
        )?;
        if let Some(ms) = self.elapsed_ms {
            write!(f, " {ms:.0}ms")?;
        }
        if let Some(n) = self.notes.first() {
            write!(f, " ({n}")?;
            if self.notes.len() > 1 {
                write!(f, "; +{} more", self.notes.len() - 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub digits: u32,
    pub seed: u64,
    pub verdict: Verdict,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl SuiteReport {
    pub fn counts(&self) -> (usize, usize, usize) {
        let count = |v| self.checks.iter().filter(|c| c.verdict == v).count();
        (count(Verdict::Pass), count(Verdict::Fail), count(Verdict::Inconclusive))
    }
}

/// Accumulates the instances of one criterion.
struct Tally {
    verdict: Verdict,
    cases: usize,
    worst: f64,
    tolerance: f64,
    notes: Vec<String>,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Tally { verdict: Verdict::Pass, cases: 0, worst: 0.0, tolerance, notes: Vec::new() }
    }

    fn flag(&mut self, verdict: Verdict, note: String) {
        self.verdict = self.verdict.combine(verdict);
        if self.notes.len() < 8 {
            self.notes.push(note);
        }
    }

    fn error(&mut self, label: &str, e: Error) {
        self.cases += 1;
        let verdict = match e {
            Error::NoConvergence { .. } => Verdict::Inconclusive,
            _ => Verdict::Fail,
        };
        self.flag(verdict, format!("{label}: {e}"));
    }

    /// Compare `measure(report)` with the criterion's tolerance.
    fn measure(&mut self, label: &str, res: Result<VerificationReport>, measure: impl Fn(&VerificationReport) -> f64) {
        match res {
            Err(e) => self.error(label, e),
            Ok(r) => {
                self.cases += 1;
                if r.verdict == Verdict::Inconclusive {
                    self.flag(Verdict::Inconclusive, format!("{label}: not converged"));
                    return;
                }
                let err = measure(&r);
                self.worst = self.worst.max(err);
                if !(err <= self.tolerance) {
                    self.flag(Verdict::Fail, format!("{label}: error {err:.3e}"));
                }
            }
        }
    }

    fn abs(&mut self, label: &str, res: Result<VerificationReport>) {
        self.measure(label, res, |r| r.abs_error_f64());
    }

    fn rel(&mut self, label: &str, res: Result<VerificationReport>) {
        self.measure(label, res, |r| r.rel_error_f64());
    }

    /// Take the report's own verdict, which may include structural checks.
    fn verdict(&mut self, label: &str, res: Result<VerificationReport>) {
        match res {
            Err(e) => self.error(label, e),
            Ok(r) => {
                self.cases += 1;
                if r.verdict != Verdict::Inconclusive {
                    self.worst = self.worst.max(r.abs_error_f64());
                }
                if r.verdict != Verdict::Pass {
                    self.flag(r.verdict, format!("{label}: {} (error {:.3e})", r.verdict, r.abs_error_f64()));
                }
            }
        }
    }

    fn require(&mut self, label: &str, ok: bool) {
        self.cases += 1;
        if !ok {
            self.flag(Verdict::Fail, label.to_string());
        }
    }

    /// Fold in a sub-check judged at its own tolerance; its worst error goes
    /// to the notes instead of the headline figure.
    fn absorb(&mut self, label: &str, sub: Tally) {
        self.cases += sub.cases;
        self.verdict = self.verdict.combine(sub.verdict);
        self.notes.push(format!("{label}: worst {:.3e} against {:.1e}", sub.worst, sub.tolerance));
        self.notes.extend(sub.notes);
    }

    fn finish(self, criterion: u8, name: &'static str) -> CheckResult {
        CheckResult {
            criterion,
            name,
            verdict: self.verdict,
            cases: self.cases,
            worst_error: self.worst,
            tolerance: self.tolerance,
            notes: self.notes,
            elapsed_ms: None,
        }
    }
}

/// Rational in `(-limit, limit)` with denominator 1000, never 0.
fn random_argument(rng: &mut ChaCha8Rng, limit: i64) -> ExactArgument {
    let span = limit * 1000 - 1;
    loop {
        let n = rng.gen_range(-span..=span);
        if n != 0 {
            return ExactArgument::ratio(n, 1000);
        }
    }
}

fn arguments(seed: u64, stream: u64, count: usize, limit: i64) -> Vec<ExactArgument> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..count).map(|_| random_argument(&mut rng, limit)).collect()
}

fn arg(s: &str) -> ExactArgument {
    s.parse().expect("literal argument")
}

fn curious_product(ctx: &PrecisionContext, seed: u64) -> CheckResult {
    let mut t = Tally::new(scaled_tolerance(35, ctx));
    let budget = scaled_terms(140, ctx);
    for a in arguments(seed, 1, 20, 3) {
        let res = vsum2_product(&a, ctx);
        if let Ok(r) = &res {
            if r.verdict != Verdict::Inconclusive && r.terms_used > budget {
                t.flag(Verdict::Fail, format!("vsum2 a={a}: {} terms", r.terms_used));
            }
        }
        t.abs(&format!("vsum2 a={a}"), res);
    }
    t.finish(1, "curious_product")
}

fn hyperbolic_and_sinc(ctx: &PrecisionContext, seed: u64) -> CheckResult {
    let mut t = Tally::new(scaled_tolerance(35, ctx));
    let args = arguments(seed, 1, 20, 3);
    for a in &args {
        t.abs(&format!("sinc a={a}"), sinc_cot_product(a, ctx));
        let b = BigReal::from_float(&a.to_float(ctx.work_bits()), ctx);
        t.abs(&format!("vsum2a b={a}"), vsum2a_hyperbolic(&b, ctx));
    }
    let w = ctx.work_bits();
    for a in &args {
        let terms = ctx.max_terms.min(60);
        match (vsum2_partial(a, terms, ctx), sinc_partial(a, terms, ctx)) {
            (Ok(p), Ok(s)) => {
                let err = Float::with_val(w, Float::with_val(w, &p * &s) - 1u32).abs().to_f64();
                t.cases += 1;
                t.worst = t.worst.max(err);
                if !(err <= t.tolerance) {
                    t.flag(Verdict::Fail, format!("reciprocity a={a}: {err:.3e}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => t.error(&format!("reciprocity a={a}"), e),
        }
    }
    t.finish(2, "hyperbolic_and_sinc")
}

fn exceptional_cases(ctx: &PrecisionContext) -> CheckResult {
    let mut t = Tally::new(scaled_tolerance(30, ctx));
    for n in 1..=4 {
        t.abs(&format!("cpodd n={n}"), cpodd_product(n, ctx));
    }
    let mut peo = Tally::new(scaled_tolerance(25, ctx));
    for m in 0..=2 {
        for n in 1..=2 {
            peo.rel(&format!("peo2 m={m} n={n}"), peo2_product(m, n, ctx));
        }
    }
    for n in 1..=2 {
        match (peo2_product(0, n, ctx), cpodd_product(n, ctx)) {
            (Ok(p), Ok(c)) => {
                let d = (p.lhs.to_f64() - c.lhs.to_f64()).abs();
                let same = p.lhs == c.lhs || d <= ctx.exact_tolerance() * c.lhs.to_f64().abs();
                t.require(&format!("peo2(0,{n}) differs from cpodd({n}) by {d:.3e}"), same);
            }
            (Err(e), _) | (_, Err(e)) => t.error(&format!("peo2(0,{n}) vs cpodd"), e),
        }
    }
    t.verdict = t.verdict.combine(peo.verdict);
    t.cases += peo.cases;
    t.notes.extend(peo.notes);
    t.finish(3, "exceptional_cases")
}

fn epsilon_scaling(ctx: &PrecisionContext) -> CheckResult {
    let eps: Vec<BigReal> = ["1e-4", "1e-5", "1e-6"]
        .iter()
        .map(|s| BigReal::parse(s, ctx).expect("literal"))
        .collect();
    let mut t = Tally::new(0.05);
    for (m, n) in [(0, 1), (1, 1), (2, 1)] {
        t.verdict(&format!("eps m={m} n={n}"), epsilon_scaling_study(m, n, &eps, ctx).map(|s| s.to_report(ctx)));
    }
    t.finish(4, "epsilon_scaling")
}

fn exact_finite(ctx: &PrecisionContext, seed: u64) -> CheckResult {
    let mut t = Tally::new(ctx.exact_tolerance());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(5);
    for _ in 0..10 {
        let n1 = rng.gen_range(0..6u32);
        let n2 = n1 + rng.gen_range(1..20u32);
        let a = random_argument(&mut rng, 3);
        t.verdict(&format!("p5 n1={n1} n2={n2} a={a}"), finite_p5_product(n1, n2, &a, ctx));
    }
    for a in ["1", "0.3", "2.2"] {
        t.verdict(&format!("x1 a={a}"), x1_check(&arg(a), ctx));
        for n in [0, 3] {
            t.verdict(&format!("x1b n={n} a={a}"), x1b_check(n, &arg(a), ctx));
        }
    }
    for kind in [SumKind::Even, SumKind::Odd] {
        for n in 1..=5 {
            for j in 0..=3 {
                let a = random_argument(&mut rng, 3);
                t.verdict(&format!("{kind:?} N={n} j={j} a={a}"), cosine_sum_lemma(kind, n, j, &a, ctx));
            }
        }
    }
    for k in 1..=150 {
        t.verdict(&format!("br114 k={k}"), br114_finite(&arg("1"), k, ctx));
    }
    for n in 0..=10 {
        let x = random_argument(&mut rng, 3);
        t.verdict(&format!("h25 x={x} n={n}"), h25(&x, n, ctx));
    }
    t.finish(5, "exact_finite")
}

fn nplication(ctx: &PrecisionContext) -> CheckResult {
    let mut t = Tally::new(scaled_tolerance(30, ctx));
    for a in ["1", "pi/2", "2.2"] {
        for q in 2..=11 {
            let family = BaseFamily::from_base(q).expect("base >= 2");
            t.abs(&format!("base {q} a={a}"), nplication_product(family, &arg(a), ctx));
        }
    }
    t.abs("viete 60 factors", viete_partial(60, ctx));
    let mut pairing = Tally::new(ctx.exact_tolerance());
    for a in ["1", "pi/2", "2.2", "-0.7"] {
        pairing.verdict(&format!("gn3ci a={a}"), gn3c_pairing_check(&arg(a), ctx));
    }
    t.verdict = t.verdict.combine(pairing.verdict);
    t.cases += pairing.cases;
    t.notes.extend(pairing.notes);
    t.finish(6, "nplication")
}

fn functional_equation(ctx: &PrecisionContext) -> CheckResult {
    let mut t = Tally::new(scaled_tolerance(25, ctx));
    let real = |s: &str| BigReal::parse(s, ctx).expect("literal");
    let budget = scaled_terms(120, ctx);
    let mut toys = Tally::new(ctx.tail_tolerance);
    for (label, a) in [("linear", "3"), ("linear", "0.5"), ("reciprocal", "0.7"), ("reciprocal", "2")] {
        let prob = problems::builtin(label).expect("built-in");
        toys.abs(&format!("{label} a={a}"), funceq_report(&prob, &real(a), None, ctx));
    }
    for a in ["0.25", "0.5", "0.9"] {
        t.abs(&format!("rs2 a={a}"), rs2_check(&real(a), ctx));
        t.rel(&format!("r0a a={a}"), r0a_product_check(&real(a), ctx));
    }
    for a in ["0.5", "-0.5"] {
        for (id, res) in [("cm1a", eta_series_check(&real(a), ctx)), ("sc1a", zeta_series_check(&real(a), ctx))] {
            if let Ok(r) = &res {
                if r.verdict != Verdict::Inconclusive && r.terms_used > budget {
                    t.flag(Verdict::Fail, format!("{id} a={a}: {} terms", r.terms_used));
                }
            }
            t.abs(&format!("{id} a={a}"), res);
        }
        t.abs(&format!("cm1b a={a}"), cm1b_check(&real(a), ctx));
    }
    t.verdict = t.verdict.combine(toys.verdict);
    t.cases += toys.cases;
    t.notes.extend(toys.notes);
    t.finish(7, "functional_equation")
}

fn digamma_sums(ctx: &PrecisionContext) -> CheckResult {
    let mut t = Tally::new(scaled_tolerance(30, ctx));
    for a in ["1", "0.3", "2.5"] {
        t.abs(&format!("r1bd a={a}"), r1bd(&arg(a), ctx));
        t.abs(&format!("gn3ad a={a}"), gn3ad(&arg(a), ctx));
    }
    t.finish(8, "digamma_sums")
}

fn dobinski(ctx: &PrecisionContext) -> CheckResult {
    let mut t = Tally::new(scaled_tolerance(25, ctx));
    for a in ["0.3", "1", "pi/3"] {
        for j in [5, 10, 20] {
            t.abs(&format!("dob1 a={a} J={j}"), dobinski_closure_report(&arg(a), j, ctx));
        }
    }
    let mut aw = Tally::new(1e-3);
    for a in ["0.3", "1", "pi/3"] {
        aw.abs(&format!("agwa a={a}"), agnew_walker_report(&arg(a), 20, 1e-3, ctx));
    }
    t.verdict = t.verdict.combine(aw.verdict);
    t.cases += aw.cases;
    t.notes.extend(aw.notes);
    t.finish(9, "dobinski")
}

fn weierstrass(ctx: &PrecisionContext) -> CheckResult {
    let mut t = Tally::new(scaled_tolerance(30, ctx));
    match weierstrass_trajectory(&arg("1"), 100, true, ctx) {
        Ok(traj) => {
            for r in &traj.rows {
                let dev = r.br114a_deviation.as_ref().map_or(f64::INFINITY, |d| d.to_f64());
                t.cases += 1;
                t.worst = t.worst.max(dev);
                if !(dev <= t.tolerance) {
                    t.flag(Verdict::Fail, format!("br114a k={}: {dev:.3e}", r.k));
                }
            }
        }
        Err(e) => t.error("trajectory kmax=100", e),
    }
    let mut structural = Tally::new(1e-6);
    for k in 1..=6 {
        structural.verdict(&format!("case1 k={k}"), case1_expansion_check(1, k, ctx));
    }
    for m in 1..=8 {
        for k in [m.max(2) - 1, m, m + 2] {
            structural.verdict(&format!("case2 m={m} k={k}"), case2_zero_factor(m, k, ctx));
        }
    }
    match weierstrass_trajectory(&arg("1"), 200, true, ctx) {
        Ok(traj) => structural.require(
            &format!("cauchy windows {:?}", traj.windows.iter().map(|w| w.violations).collect::<Vec<_>>()),
            traj.every_window_has_violation(),
        ),
        Err(e) => structural.error("trajectory kmax=200", e),
    }
    t.verdict = t.verdict.combine(structural.verdict);
    t.cases += structural.cases;
    t.notes.extend(structural.notes);
    t.finish(10, "weierstrass")
}

fn special_functions(ctx: &PrecisionContext) -> CheckResult {
    let mut t = Tally::new(pow10(-(ctx.digits as i32 - 10)));
    for n in 2..=5 {
        for a in ["0.3", "1.7", "4.25"] {
            let a = BigReal::parse(a, ctx).expect("literal");
            t.abs(&format!("gauss n={n} a={a}"), gauss_multiplication_check(n, &a, ctx));
        }
    }
    for n in 2..=12 {
        t.abs(&format!("etadef n={n}"), eta_zeta_relation_check(n, ctx));
    }
    let mut psi = Tally::new(pow10(-(ctx.digits as i32 / 3)));
    for x in ["0.5", "2.5", "10"] {
        psi.abs(&format!("psi_fd x={x}"), digamma_derivative_check(&BigReal::parse(x, ctx).expect("literal"), ctx));
    }
    t.absorb("psi_fd", psi);
    t.finish(11, "special_functions")
}

fn euler_contrast(ctx: &PrecisionContext) -> CheckResult {
    let tail = 1.1 / (std::f64::consts::PI.powi(2) * 1e4);
    let mut t = Tally::new(tail);
    t.verdict("euprod_partial a=1 factors=10000", euler_sine_partial(&arg("1"), 10_000, ctx));
    t.finish(12, "euler_contrast")
}

type CheckFn = fn(&PrecisionContext, u64) -> CheckResult;

const CHECKS: [CheckFn; 12] = [
    curious_product,
    hyperbolic_and_sinc,
    |c, _| exceptional_cases(c),
    |c, _| epsilon_scaling(c),
    exact_finite,
    |c, _| nplication(c),
    |c, _| functional_equation(c),
    |c, _| digamma_sums(c),
    |c, _| dobinski(c),
    |c, _| weierstrass(c),
    |c, _| special_functions(c),
    |c, _| euler_contrast(c),
];

/// Run every criterion, in parallel, reported in criterion order.
/// `timed = false` omits wall times so the output is reproducible.
pub fn run_suite(ctx: &PrecisionContext, seed: u64, timed: bool) -> Result<SuiteReport> {
    ctx.validate()?;
    let start = Instant::now();
    let checks: Vec<CheckResult> = CHECKS
        .par_iter()
        .map(|check| {
            let t = Instant::now();
            let mut r = check(ctx, seed);
            if timed {
                r.elapsed_ms = Some(t.elapsed().as_secs_f64() * 1e3);
            }
            r
        })
        .collect();
    let verdict = checks.iter().fold(Verdict::Pass, |v, c| v.combine(c.verdict));
    Ok(SuiteReport {
        digits: ctx.digits,
        seed,
        verdict,
        checks,
        elapsed_ms: timed.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

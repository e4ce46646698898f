//! Every verifiable identity under a stable string id, with its parameter
//! schema.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::anomalies::{
    agnew_walker_report, br114a_report, case1_expansion_check, case2_zero_factor, dobinski_closure_report,
    jo2_zero_anatomy,
};
use crate::error::{Error, Result};
use crate::funceq::{cm1b_check, eta_series_check, r0a_product_check, rs2_check, zeta_series_check};
use crate::mpcore::{realize, BigReal, ExactArgument, PrecisionContext};
use crate::products::{
    also_identity, br114_finite, cosine_sum_lemma, cpodd_product, epsilon_scaling_study, euler_sine_partial,
    euler_sine_product, finite_p5_product, gn3ad, gn3c_pairing_check, gp1b_induction_check, gp1b_product, h25,
    jo1_product, jo2_product, nplication_product, peo2_product, r1bd, sinc_cot_product, viete_partial, vsum2_product,
    vsum2a_hyperbolic, vsum3, x1_check, x1a_check, x1b_check, BaseFamily, SumKind,
};
use crate::report::VerificationReport;
use crate::specialfn::{
    digamma_derivative_check, duplication_check, eta_zeta_relation_check, gauss_multiplication_check,
    lngamma_recurrence_check,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    /// Exact argument: `1/3`, `0.25`, `pi/3`, `2/3*pi`, `1 + pi/4`.
    Argument,
    /// Real number, parsed exactly then rounded to the context precision.
    Real,
    /// Non-negative integer.
    Integer,
    /// Comma-separated reals.
    RealList,
}

impl ParamKind {
    pub fn name(self) -> &'static str {
        match self {
            ParamKind::Argument => "argument",
            ParamKind::Real => "real",
            ParamKind::Integer => "integer",
            ParamKind::RealList => "real_list",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: Option<&'static str>,
}

pub const fn req(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec { name, kind, default: None }
}

pub const fn opt(name: &'static str, kind: ParamKind, default: &'static str) -> ParamSpec {
    ParamSpec { name, kind, default: Some(default) }
}

type Evaluator = fn(&Params, &PrecisionContext) -> Result<VerificationReport>;

#[derive(Clone, Copy, Serialize)]
pub struct IdentityEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    #[serde(skip)]
    pub evaluate: Evaluator,
}

impl std::fmt::Debug for IdentityEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityEntry").field("id", &self.id).finish()
    }
}

/// Validated `key=value` parameters of one catalog entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn new(values: BTreeMap<String, String>) -> Self {
        Params(values)
    }

    /// Parse `key=value` words.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[S]) -> Result<Self> {
        let mut out = BTreeMap::new();
        for p in pairs {
            let p = p.as_ref();
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{p}'")))?;
            let k = k.trim();
            if k.is_empty() || out.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("empty or repeated key in '{p}'")));
            }
        }
        Ok(Params(out))
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.0
    }

    pub fn insert(&mut self, key: &str, value: String) {
        self.0.insert(key.to_string(), value);
    }

    fn raw(&self, name: &str) -> Result<&str> {
        self.0
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| Error::Parse(format!("missing parameter '{name}'")))
    }

    pub fn argument(&self, name: &str) -> Result<ExactArgument> {
        self.raw(name)?.parse()
    }

    /// Parsed exactly, so `pi/4` and `1/3` are accepted, then rounded.
    pub fn real(&self, name: &str, ctx: &PrecisionContext) -> Result<BigReal> {
        Ok(realize(&self.argument(name)?, ctx))
    }

    pub fn real_f64(&self, name: &str) -> Result<f64> {
        let raw = self.raw(name)?;
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Parse(format!("'{name}' must be a finite number, got '{raw}'")))
    }

    pub fn int(&self, name: &str) -> Result<u64> {
        let raw = self.raw(name)?;
        raw.parse()
            .map_err(|_| Error::Parse(format!("'{name}' must be a non-negative integer, got '{raw}'")))
    }

    pub fn int32(&self, name: &str) -> Result<u32> {
        let v = self.int(name)?;
        u32::try_from(v).map_err(|_| Error::Parse(format!("'{name}' = {v} is too large")))
    }

    pub fn real_list(&self, name: &str, ctx: &PrecisionContext) -> Result<Vec<BigReal>> {
        self.raw(name)?
            .split(',')
            .map(|s| Ok(realize(&s.parse::<ExactArgument>()?, ctx)))
            .collect()
    }
}

/// Fill defaults, reject unknown keys and check every value parses.
pub fn bind_params(owner: &str, specs: &[ParamSpec], params: &Params, ctx: &PrecisionContext) -> Result<Params> {
    for key in params.0.keys() {
        if !specs.iter().any(|p| p.name == key) {
            let known: Vec<_> = specs.iter().map(|p| p.name).collect();
            return Err(Error::Parse(format!(
                "{owner} has no parameter '{key}' (expects {})",
                known.join(", ")
            )));
        }
    }
    let mut bound = params.clone();
    for spec in specs {
        if !bound.0.contains_key(spec.name) {
            match spec.default {
                Some(d) => bound.insert(spec.name, d.to_string()),
                None => return Err(Error::Parse(format!("{owner} requires parameter '{}'", spec.name))),
            }
        }
        match spec.kind {
            ParamKind::Argument => drop(bound.argument(spec.name)?),
            ParamKind::Real => drop(bound.real(spec.name, ctx)?),
            ParamKind::Integer => drop(bound.int(spec.name)?),
            ParamKind::RealList => drop(bound.real_list(spec.name, ctx)?),
        }
    }
    Ok(bound)
}

/// `name=<kind>` for required parameters, `[name=default]` otherwise.
pub fn signature(specs: &[ParamSpec]) -> String {
    let parts: Vec<String> = specs
        .iter()
        .map(|p| match p.default {
            Some(d) => format!("[{}={d}]", p.name),
            None => format!("{}=<{}>", p.name, p.kind.name()),
        })
        .collect();
    parts.join(" ")
}

impl IdentityEntry {
    pub fn bind(&self, params: &Params, ctx: &PrecisionContext) -> Result<Params> {
        bind_params(self.id, self.params, params, ctx)
    }

    pub fn run(&self, params: &Params, ctx: &PrecisionContext) -> Result<VerificationReport> {
        ctx.validate()?;
        let bound = self.bind(params, ctx)?;
        (self.evaluate)(&bound, ctx)
    }

    pub fn signature(&self) -> String {
        signature(self.params)
    }
}

use ParamKind::{Argument as A, Integer as I, Real as R, RealList as L};

const P_A: &[ParamSpec] = &[req("a", A)];
const P_RA: &[ParamSpec] = &[req("a", R)];

fn nplication(base: u32, p: &Params, ctx: &PrecisionContext) -> Result<VerificationReport> {
    nplication_product(BaseFamily::from_base(base)?, &p.argument("a")?, ctx)
}

fn half_base(p: &Params) -> Result<u32> {
    let n = p.int32("N")?;
    if n == 0 {
        return Err(Error::domain("N must be >= 1"));
    }
    Ok(n)
}

static CATALOG: &[IdentityEntry] = &[
    IdentityEntry {
        id: "vsum2",
        summary: "prod_{j>=1} (2^j tan(a/2^j)/a)^(2^(j-1)) = a/sin a",
        params: P_A,
        evaluate: |p, c| vsum2_product(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "sinc",
        summary: "prod_{j>=1} (a cot(a/2^j)/2^j)^(2^(j-1)) = sin a/a",
        params: P_A,
        evaluate: |p, c| sinc_cot_product(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "vsum2a",
        summary: "prod_{j>=1} (2^j tanh(b/2^j)/b)^(2^(j-1)) = b/sinh b",
        params: &[req("b", R)],
        evaluate: |p, c| vsum2a_hyperbolic(&p.real("b", c)?, c),
    },
    IdentityEntry {
        id: "cpodd",
        summary: "product at a = (2n-1)pi equals pi^2 (1/2 - n)^2",
        params: &[req("n", I)],
        evaluate: |p, c| cpodd_product(p.int("n")?, c),
    },
    IdentityEntry {
        id: "peo2",
        summary: "product at a = 2^m (2n-1) pi equals ((2n-1) pi/2)^(2^(m+1))",
        params: &[req("m", I), req("n", I)],
        evaluate: |p, c| peo2_product(p.int32("m")?, p.int("n")?, c),
    },
    IdentityEntry {
        id: "epsilon_scaling",
        summary: "slope of ln|combined product| against ln eps near 2^m (2n-1) pi is -1",
        params: &[req("m", I), req("n", I), opt("eps", L, "1e-4,1e-5,1e-6")],
        evaluate: |p, c| {
            let study = epsilon_scaling_study(p.int32("m")?, p.int("n")?, &p.real_list("eps", c)?, c)?;
            Ok(study.to_report(c))
        },
    },
    IdentityEntry {
        id: "gp1b",
        summary: "product at a = 2^n pi",
        params: &[req("n", I), opt("a", A, "0")],
        evaluate: |p, c| gp1b_product(p.int32("n")?, &p.argument("a")?, c),
    },
    IdentityEntry {
        id: "gp1b_induction",
        summary: "gp1b at (n+1, a/2) with one extracted factor reproduces gp1b at (n, a)",
        params: &[req("n", I), opt("a", A, "0")],
        evaluate: |p, c| gp1b_induction_check(p.int32("n")?, &p.argument("a")?, c),
    },
    IdentityEntry {
        id: "p5",
        summary: "finite telescoping product over n1 <= j < n2",
        params: &[req("n1", I), req("n2", I), req("a", A)],
        evaluate: |p, c| finite_p5_product(p.int32("n1")?, p.int32("n2")?, &p.argument("a")?, c),
    },
    IdentityEntry {
        id: "x1",
        summary: "finite product instance X1",
        params: P_A,
        evaluate: |p, c| x1_check(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "x1a",
        summary: "finite product instance X1a",
        params: P_A,
        evaluate: |p, c| x1a_check(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "x1b",
        summary: "finite product instance X1b",
        params: &[req("n", I), req("a", A)],
        evaluate: |p, c| x1b_check(p.int32("n")?, &p.argument("a")?, c),
    },
    IdentityEntry {
        id: "br114",
        summary: "prod_{j<k} cos(2^j a) = sin(2^k a)/(2^k sin a)",
        params: &[req("a", A), req("k", I)],
        evaluate: |p, c| br114_finite(&p.argument("a")?, p.int32("k")?, c),
    },
    IdentityEntry {
        id: "jo1",
        summary: "prod_{j=1}^{n-1} tan(j pi/(2n)) = 1",
        params: &[req("n", I)],
        evaluate: |p, c| jo1_product(p.int("n")?, c),
    },
    IdentityEntry {
        id: "jo2",
        summary: "prod_{j=1}^{2k-1} cos(j pi/k) = ((-1)^k - 1)/2^(2k-1)",
        params: &[req("k", I)],
        evaluate: |p, c| jo2_product(p.int("k")?, c),
    },
    IdentityEntry {
        id: "gn1",
        summary: "duplication product, base 2",
        params: P_A,
        evaluate: |p, c| nplication(2, p, c),
    },
    IdentityEntry {
        id: "gn4a",
        summary: "N-plication product, base 4",
        params: P_A,
        evaluate: |p, c| nplication(4, p, c),
    },
    IdentityEntry {
        id: "gn3ca",
        summary: "triplication product, base 3",
        params: P_A,
        evaluate: |p, c| nplication(3, p, c),
    },
    IdentityEntry {
        id: "gn5b",
        summary: "N-plication product, base 5",
        params: P_A,
        evaluate: |p, c| nplication(5, p, c),
    },
    IdentityEntry {
        id: "g2a",
        summary: "N-plication product, even base 2N",
        params: &[req("N", I), req("a", A)],
        evaluate: |p, c| nplication(2 * half_base(p)?, p, c),
    },
    IdentityEntry {
        id: "g2x",
        summary: "N-plication product, odd base 2N+1",
        params: &[req("N", I), req("a", A)],
        evaluate: |p, c| nplication(2 * half_base(p)? + 1, p, c),
    },
    IdentityEntry {
        id: "nplication",
        summary: "N-plication product for any base q >= 2",
        params: &[req("q", I), req("a", A)],
        evaluate: |p, c| nplication(p.int32("q")?, p, c),
    },
    IdentityEntry {
        id: "gn3ci",
        summary: "triplication factors in cosine and sine-square forms agree",
        params: P_A,
        evaluate: |p, c| gn3c_pairing_check(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "viete",
        summary: "Viete's nested-radical product for 2/pi",
        params: &[opt("factors", I, "60")],
        evaluate: |p, c| viete_partial(p.int32("factors")?, c),
    },
    IdentityEntry {
        id: "sumid1",
        summary: "cosine-sum lemma, even base",
        params: &[req("N", I), req("j", I), req("a", A)],
        evaluate: |p, c| cosine_sum_lemma(SumKind::Even, p.int32("N")?, p.int32("j")?, &p.argument("a")?, c),
    },
    IdentityEntry {
        id: "sumid2",
        summary: "cosine-sum lemma, odd base",
        params: &[req("N", I), req("j", I), req("a", A)],
        evaluate: |p, c| cosine_sum_lemma(SumKind::Odd, p.int32("N")?, p.int32("j")?, &p.argument("a")?, c),
    },
    IdentityEntry {
        id: "euprod",
        summary: "Euler's sine product a prod (1 - a^2/(k pi)^2) = sin a",
        params: P_A,
        evaluate: |p, c| euler_sine_product(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "euprod_partial",
        summary: "Euler's sine product truncated, against its tail estimate",
        params: &[req("a", A), opt("factors", I, "10000")],
        evaluate: |p, c| euler_sine_partial(&p.argument("a")?, p.int("factors")? as usize, c),
    },
    IdentityEntry {
        id: "vsum3",
        summary: "log-sum form of the curious product",
        params: P_A,
        evaluate: |p, c| vsum3(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "h25",
        summary: "finite tangent sum identity",
        params: &[req("x", A), req("n", I)],
        evaluate: |p, c| h25(&p.argument("x")?, p.int32("n")?, c),
    },
    IdentityEntry {
        id: "also",
        summary: "integer identity behind the log-sum form",
        params: &[req("n", I)],
        evaluate: |p, c| also_identity(p.int32("n")?, c),
    },
    IdentityEntry {
        id: "r1bd",
        summary: "digamma series, equals 2 at a = 1",
        params: P_A,
        evaluate: |p, c| r1bd(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "gn3ad",
        summary: "digamma series, equals 1 - gamma at a = 1",
        params: P_A,
        evaluate: |p, c| gn3ad(&p.argument("a")?, c),
    },
    IdentityEntry {
        id: "cm1a",
        summary: "sum_{j>=1} eta(1+j) (-a)^j/(1+j) in closed form",
        params: P_RA,
        evaluate: |p, c| eta_series_check(&p.real("a", c)?, c),
    },
    IdentityEntry {
        id: "sc1a",
        summary: "sum_{j>=1} zeta(1+j) (-a)^j/(1+j) in closed form",
        params: P_RA,
        evaluate: |p, c| zeta_series_check(&p.real("a", c)?, c),
    },
    IdentityEntry {
        id: "cm1b",
        summary: "splitting of the zeta series into eta and scaled parts",
        params: P_RA,
        evaluate: |p, c| cm1b_check(&p.real("a", c)?, c),
    },
    IdentityEntry {
        id: "rs2",
        summary: "log-Gamma series from the functional equation with x = 1, p = 2",
        params: P_RA,
        evaluate: |p, c| rs2_check(&p.real("a", c)?, c),
    },
    IdentityEntry {
        id: "r0a",
        summary: "Gamma product from the functional equation with x = 1, p = 2",
        params: P_RA,
        evaluate: |p, c| r0a_product_check(&p.real("a", c)?, c),
    },
    IdentityEntry {
        id: "dargid",
        summary: "log-Gamma duplication formula",
        params: P_RA,
        evaluate: |p, c| duplication_check(&p.real("a", c)?, c),
    },
    IdentityEntry {
        id: "gauss",
        summary: "Gauss multiplication formula in log form",
        params: &[req("n", I), req("a", R)],
        evaluate: |p, c| gauss_multiplication_check(p.int32("n")?, &p.real("a", c)?, c),
    },
    IdentityEntry {
        id: "etadef",
        summary: "eta(n) = (1 - 2^(1-n)) zeta(n)",
        params: &[req("n", I)],
        evaluate: |p, c| eta_zeta_relation_check(p.int32("n")?, c),
    },
    IdentityEntry {
        id: "psi_fd",
        summary: "digamma against a central difference of log-Gamma",
        params: &[req("x", R)],
        evaluate: |p, c| digamma_derivative_check(&p.real("x", c)?, c),
    },
    IdentityEntry {
        id: "lngamma_rec",
        summary: "lnGamma(x+1) = lnGamma(x) + ln x",
        params: &[req("x", R)],
        evaluate: |p, c| lngamma_recurrence_check(&p.real("x", c)?, c),
    },
    IdentityEntry {
        id: "dob1",
        summary: "Dobinski closure P_J (2 sin(2^(J+1) a))^(2^-J) = 4 sin^2 a",
        params: &[req("a", A), opt("J", I, "20")],
        evaluate: |p, c| dobinski_closure_report(&p.argument("a")?, p.int32("J")?, c),
    },
    IdentityEntry {
        id: "agwa",
        summary: "Agnew-Walker modulus |(sin(2^(1+J) a))^(2^-J)| against 1",
        params: &[req("a", A), opt("J", I, "20"), opt("tol", R, "1e-3")],
        evaluate: |p, c| agnew_walker_report(&p.argument("a")?, p.int32("J")?, p.real_f64("tol")?, c),
    },
    IdentityEntry {
        id: "br114a",
        summary: "sin(a) prod_{j<k} cos(2^j a)/sin(2^k a) = 2^-k",
        params: &[req("a", A), req("k", I)],
        evaluate: |p, c| br114a_report(&p.argument("a")?, p.int32("k")?, c),
    },
    IdentityEntry {
        id: "case1",
        summary: "quadratic coefficient of prod cos(2^j a) at a = 2^n pi is (1 - 4^k)/6",
        params: &[req("n", I), req("k", I)],
        evaluate: |p, c| case1_expansion_check(p.int32("n")?, p.int32("k")?, c),
    },
    IdentityEntry {
        id: "case2",
        summary: "prod cos(2^j a) at a = pi/2^m vanishes through the factor j = m - 1",
        params: &[req("m", I), req("k", I)],
        evaluate: |p, c| case2_zero_factor(p.int32("m")?, p.int32("k")?, c),
    },
    IdentityEntry {
        id: "jo2_zeros",
        summary: "vanishing factors of jo2 at even k",
        params: &[req("k", I)],
        evaluate: |p, c| jo2_zero_anatomy(p.int("k")?, c),
    },
];

pub fn entries() -> &'static [IdentityEntry] {
    CATALOG
}

pub fn lookup(id: &str) -> Result<&'static IdentityEntry> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Look up `id`, bind `params` and evaluate.
pub fn verify(id: &str, params: &Params, ctx: &PrecisionContext) -> Result<VerificationReport> {
    lookup(id)?.run(params, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(id: &str, pairs: &[&str]) -> Result<VerificationReport> {
        verify(id, &Params::from_pairs(pairs).unwrap(), &PrecisionContext::default())
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = entries().iter().map(|e| e.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), entries().len());
    }

    #[test]
    fn vsum2_at_one() {
        let r = run("vsum2", &["a=1"]).unwrap();
        assert!(r.passed());
        assert!((r.lhs.to_f64() - 1.1883951058).abs() < 1e-10);
    }

    #[test]
    fn jo2_at_one() {
        let r = run("jo2", &["k=1"]).unwrap();
        assert_eq!(r.lhs.to_f64(), -1.0);
        assert_eq!(r.rhs.to_f64(), -1.0);
    }

    #[test]
    fn exceptional_point_redirects() {
        let err = run("vsum2", &["a=pi"]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cpodd") && msg.contains("peo2"), "{msg}");
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(run("nope", &[]), Err(Error::UnknownIdentity(_))));
        assert!(matches!(run("vsum2", &[]), Err(Error::Parse(_))));
        assert!(matches!(run("vsum2", &["a=1", "b=2"]), Err(Error::Parse(_))));
        assert!(matches!(run("cpodd", &["n=x"]), Err(Error::Parse(_))));
        assert!(Params::from_pairs(&["a"]).is_err());
        assert!(Params::from_pairs(&["a=1", "a=2"]).is_err());
    }

    #[test]
    fn defaults_fill_in() {
        let r = run("viete", &[]).unwrap();
        assert!(r.passed());
        let e = lookup("dob1").unwrap();
        assert_eq!(e.signature(), "a=<argument> [J=20]");
    }

    #[test]
    fn family_ids() {
        assert!(run("g2x", &["N=4", "a=1"]).unwrap().passed());
        assert!(run("nplication", &["q=11", "a=2.2"]).unwrap().passed());
        assert!(run("g2a", &["N=0", "a=1"]).is_err());
    }
}

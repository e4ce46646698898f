//! Python bindings: precision contexts, exact arguments, identity
//! verification, traces, the functional-equation solver and the acceptance
//! suite.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyKeyError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyFloat, PyInt, PyList, PyString};
use pyo3::IntoPyObjectExt;
use serde_json::Value as Json;

use trigprod::catalog::{self, Params};
use trigprod::cli::{build_trace, TraceKind};
use trigprod::funceq::{funceq_report, problems};
use trigprod::mpcore::{realize, ExactArgument as CoreArgument, PrecisionContext as CoreContext};
use trigprod::products::classify;
use trigprod::report::VerificationReport as CoreReport;
use trigprod::suite::{run_suite as core_run_suite, DEFAULT_SEED};
use trigprod::Error;

create_exception!(trigprod, UnknownIdentityError, PyKeyError);
create_exception!(trigprod, NoConvergenceError, PyArithmeticError);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::UnknownIdentity(_) => UnknownIdentityError::new_err(e.to_string()),
        Error::NoConvergence { .. } => NoConvergenceError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &Json) -> PyResult<Bound<'py, PyAny>> {
    match v {
        Json::Null => Ok(py.None().into_bound(py)),
        Json::Bool(b) => b.into_bound_py_any(py),
        Json::Number(n) => match n.as_i64() {
            Some(i) => i.into_bound_py_any(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Json::String(s) => s.into_bound_py_any(py),
        Json::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            Ok(list.into_any())
        }
        Json::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn serialize_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

/// Parameter values may be str, int, float or ExactArgument; floats go
/// through their shortest repr, which is then read as an exact decimal.
fn param_text(value: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(a) = value.cast::<ExactArgument>() {
        return Ok(a.borrow().inner.to_string());
    }
    if value.is_instance_of::<PyBool>() {
        return Err(PyValueError::new_err("boolean parameter values are not accepted"));
    }
    if value.is_instance_of::<PyString>() || value.is_instance_of::<PyInt>() {
        return Ok(value.str()?.to_cow()?.into_owned());
    }
    if value.is_instance_of::<PyFloat>() {
        return Ok(value.repr()?.to_cow()?.into_owned());
    }
    Err(PyValueError::new_err(format!(
        "unsupported parameter value {}",
        value.repr()?.to_cow()?
    )))
}

fn params_from(dict: Option<&Bound<'_, PyDict>>) -> PyResult<Params> {
    let mut out = BTreeMap::new();
    if let Some(d) = dict {
        for (k, v) in d.iter() {
            out.insert(k.str()?.to_cow()?.into_owned(), param_text(&v)?);
        }
    }
    Ok(Params::new(out))
}

fn context_or_default(ctx: Option<PyRef<'_, PrecisionContext>>) -> CoreContext {
    ctx.map(|c| c.inner.clone()).unwrap_or_default()
}

/// Working precision, tolerances and truncation policy.
#[pyclass(module = "trigprod", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PrecisionContext {
    inner: CoreContext,
}

#[pymethods]
impl PrecisionContext {
    #[new]
    #[pyo3(signature = (digits = 50, tail_tolerance = None, rel_tolerance = None, max_terms = None, guard_digits = None))]
    fn new(
        digits: u32,
        tail_tolerance: Option<f64>,
        rel_tolerance: Option<f64>,
        max_terms: Option<usize>,
        guard_digits: Option<u32>,
    ) -> PyResult<Self> {
        let base = CoreContext::with_digits(digits);
        let inner = CoreContext::new(
            digits,
            tail_tolerance.unwrap_or(base.tail_tolerance),
            rel_tolerance.unwrap_or(base.rel_tolerance),
            max_terms.unwrap_or(base.max_terms),
            guard_digits.unwrap_or(base.guard_digits),
        )
        .map_err(to_py_err)?;
        Ok(PrecisionContext { inner })
    }

    #[getter]
    fn digits(&self) -> u32 {
        self.inner.digits
    }

    #[getter]
    fn tail_tolerance(&self) -> f64 {
        self.inner.tail_tolerance
    }

    #[getter]
    fn rel_tolerance(&self) -> f64 {
        self.inner.rel_tolerance
    }

    #[getter]
    fn max_terms(&self) -> usize {
        self.inner.max_terms
    }

    #[getter]
    fn guard_digits(&self) -> u32 {
        self.inner.guard_digits
    }

    /// `10^-(digits-8)`, the tolerance of identities exact at finite size.
    fn exact_tolerance(&self) -> f64 {
        self.inner.exact_tolerance()
    }

    fn __repr__(&self) -> String {
        format!(
            "PrecisionContext(digits={}, tail_tolerance={:e}, rel_tolerance={:e}, max_terms={}, guard_digits={})",
            self.inner.digits,
            self.inner.tail_tolerance,
            self.inner.rel_tolerance,
            self.inner.max_terms,
            self.inner.guard_digits
        )
    }
}

/// Exact argument `r + s*pi` with rational `r` and `s`, parsed from text such
/// as `1/5`, `pi/3`, `2pi`, `1 + 1/3*pi` or `0.25`.
#[pyclass(module = "trigprod", frozen, skip_from_py_object)]
#[derive(Clone)]
struct ExactArgument {
    inner: CoreArgument,
}

#[pymethods]
impl ExactArgument {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner = text.parse::<CoreArgument>().map_err(to_py_err)?;
        Ok(ExactArgument { inner })
    }

    #[getter]
    fn rational_part(&self) -> String {
        self.inner.rational_part.to_string()
    }

    #[getter]
    fn pi_multiple(&self) -> String {
        self.inner.pi_multiple.to_string()
    }

    /// `regular`, or the exceptional class of the curious product at this
    /// argument.
    fn classify(&self) -> String {
        classify(&self.inner).to_string()
    }

    /// Decimal value rounded to the context's digits.
    #[pyo3(signature = (ctx = None))]
    fn to_decimal(&self, ctx: Option<PyRef<'_, PrecisionContext>>) -> String {
        realize(&self.inner, &context_or_default(ctx)).to_string()
    }

    fn __float__(&self) -> f64 {
        self.inner.to_float(64).to_f64()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ExactArgument('{}')", self.inner)
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        other
            .cast::<ExactArgument>()
            .map(|o| o.borrow().inner == self.inner)
            .unwrap_or(false)
    }
}

/// LHS/RHS comparison of one identity instance. Values are decimal strings
/// at the context's digits.
#[pyclass(module = "trigprod", frozen, skip_from_py_object)]
struct VerificationReport {
    inner: CoreReport,
}

#[pymethods]
impl VerificationReport {
    #[getter]
    fn identity_id(&self) -> &str {
        &self.inner.identity_id
    }

    #[getter]
    fn parameters(&self) -> BTreeMap<String, String> {
        self.inner.parameters.clone()
    }

    #[getter]
    fn lhs(&self) -> String {
        self.inner.lhs.to_string()
    }

    #[getter]
    fn rhs(&self) -> String {
        self.inner.rhs.to_string()
    }

    #[getter]
    fn abs_error(&self) -> f64 {
        self.inner.abs_error_f64()
    }

    #[getter]
    fn rel_error(&self) -> f64 {
        self.inner.rel_error_f64()
    }

    #[getter]
    fn terms_used(&self) -> usize {
        self.inner.terms_used
    }

    #[getter]
    fn tail_bound(&self) -> f64 {
        self.inner.tail_bound.to_f64()
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.inner.tolerance
    }

    #[getter]
    fn verdict(&self) -> &'static str {
        self.inner.verdict.as_str()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    #[getter]
    fn details(&self) -> BTreeMap<String, String> {
        self.inner.details.clone()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize_to_py(py, &self.inner)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __bool__(&self) -> bool {
        self.inner.passed()
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(identity_id='{}', verdict='{}', abs_error={:e})",
            self.inner.identity_id,
            self.inner.verdict,
            self.inner.abs_error_f64()
        )
    }
}

/// `(id, signature, summary)` for every catalogued identity.
#[pyfunction]
fn identities() -> Vec<(&'static str, String, &'static str)> {
    catalog::entries()
        .iter()
        .map(|e| (e.id, e.signature(), e.summary))
        .collect()
}

/// Verify one catalogued identity, e.g. `verify("vsum2", {"a": "1"})`.
#[pyfunction]
#[pyo3(signature = (identity_id, params = None, ctx = None))]
fn verify(
    py: Python<'_>,
    identity_id: &str,
    params: Option<&Bound<'_, PyDict>>,
    ctx: Option<PyRef<'_, PrecisionContext>>,
) -> PyResult<VerificationReport> {
    let p = params_from(params)?;
    let c = context_or_default(ctx);
    let inner = py.detach(|| catalog::verify(identity_id, &p, &c)).map_err(to_py_err)?;
    Ok(VerificationReport { inner })
}

/// Per-step trace as a dict with `kind`, `parameters`, `columns`, `rows` and
/// `summary`. `kind` is one of dobinski, weierstrass, telescoping,
/// agnew_walker.
#[pyfunction]
#[pyo3(signature = (kind, params = None, ctx = None, allow_growth = false))]
fn trace<'py>(
    py: Python<'py>,
    kind: &str,
    params: Option<&Bound<'py, PyDict>>,
    ctx: Option<PyRef<'py, PrecisionContext>>,
    allow_growth: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let kind: TraceKind = kind.parse().map_err(to_py_err)?;
    let p = params_from(params)?;
    let c = context_or_default(ctx);
    let t = py.detach(|| build_trace(kind, &p, allow_growth, &c)).map_err(to_py_err)?;
    serialize_to_py(py, &t)
}

/// Solve a built-in functional equation `f(a) = g(a) + x f(a/p)` at `a` and
/// compare with its closed form or a second solve. A positive `depth` also
/// records the finite expansion to that depth.
#[pyfunction]
#[pyo3(signature = (problem, a, depth = None, ctx = None))]
fn funceq(
    py: Python<'_>,
    problem: &str,
    a: &Bound<'_, PyAny>,
    depth: Option<usize>,
    ctx: Option<PyRef<'_, PrecisionContext>>,
) -> PyResult<VerificationReport> {
    let prob = problems::builtin(problem).ok_or_else(|| to_py_err(Error::UnknownIdentity(problem.to_string())))?;
    let c = context_or_default(ctx);
    let arg: CoreArgument = param_text(a)?.parse().map_err(to_py_err)?;
    let value = realize(&arg, &c);
    let inner = py
        .detach(|| funceq_report(&prob, &value, depth.filter(|&d| d > 0), &c))
        .map_err(to_py_err)?;
    Ok(VerificationReport { inner })
}

/// Labels of the built-in functional-equation problems.
#[pyfunction]
fn funceq_problems() -> Vec<&'static str> {
    problems::BUILTIN_LABELS.to_vec()
}

/// Run every acceptance check; returns a dict with `verdict` and `checks`.
#[pyfunction]
#[pyo3(signature = (ctx = None, seed = DEFAULT_SEED, timed = false))]
fn run_suite<'py>(
    py: Python<'py>,
    ctx: Option<PyRef<'py, PrecisionContext>>,
    seed: u64,
    timed: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let c = context_or_default(ctx);
    let report = py.detach(|| core_run_suite(&c, seed, timed)).map_err(to_py_err)?;
    serialize_to_py(py, &report)
}

#[pymodule]
#[pyo3(name = "trigprod")]
pub fn trigprod_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PrecisionContext>()?;
    m.add_class::<ExactArgument>()?;
    m.add_class::<VerificationReport>()?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(funceq, m)?)?;
    m.add_function(wrap_pyfunction!(funceq_problems, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("UnknownIdentityError", m.py().get_type::<UnknownIdentityError>())?;
    m.add("NoConvergenceError", m.py().get_type::<NoConvergenceError>())?;
    m.add("SCHEMA_VERSION", trigprod::cli::SCHEMA_VERSION)?;
    Ok(())
}

use pyo3::prelude::*;
use pyo3::types::PyDict;
use trigprod_py::trigprod_module;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(f: F) {
    pyo3::append_to_inittab!(trigprod_module);
    Python::initialize();
    Python::attach(|py| {
        let globals = PyDict::new(py);
        py.run(c"import trigprod", Some(&globals), None).unwrap();
        f(py, &globals);
    });
}

fn eval<'py>(py: Python<'py>, globals: &Bound<'py, PyDict>, code: &std::ffi::CStr) -> Bound<'py, PyAny> {
    py.eval(code, Some(globals), None).unwrap()
}

#[test]
fn module_exposes_verification_and_traces() {
    with_module(|py, g| {
        let passed: bool = eval(py, g, c"trigprod.verify('vsum2', {'a': '1'}).passed").extract().unwrap();
        assert!(passed);
        let lhs: String = eval(py, g, c"trigprod.verify('jo2', {'k': 1}).lhs").extract().unwrap();
        assert!(lhs.starts_with("-1.000"));
        let pi: String = eval(py, g, c"trigprod.ExactArgument('pi/3').pi_multiple").extract().unwrap();
        assert_eq!(pi, "1/3");
        let rows: usize = eval(py, g, c"len(trigprod.trace('weierstrass', {'a': 1, 'kmax': 12})['rows'])")
            .extract()
            .unwrap();
        assert_eq!(rows, 12);
        py.run(
            c"try:\n    trigprod.verify('nosuch')\n    raised = False\nexcept trigprod.UnknownIdentityError:\n    raised = True\n",
            Some(g),
            None,
        )
        .unwrap();
        let raised: bool = eval(py, g, c"raised").extract().unwrap();
        assert!(raised);
    });
}

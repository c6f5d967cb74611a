//! Runs python/smoke_test.py against the module embedded in-process.

use std::ffi::CString;

use pyo3::prelude::*;
use tantrix_py::tantrix_py;

#[test]
fn python_smoke_script() {
    pyo3::append_to_inittab!(tantrix_py);
    Python::initialize();
    let script = CString::new(include_str!("../../../python/smoke_test.py")).unwrap();
    Python::attach(|py| {
        if let Err(e) = py.run(&script, None, None) {
            e.print(py);
            panic!("smoke script failed");
        }
    });
}

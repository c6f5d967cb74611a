//! Python bindings. Cells are `(u, w)` tuples, solutions are dicts from
//! cells to rotations, and all parse or validation failures raise
//! `ValueError`.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tantrix::circuit::{cnf_to_circuit, parse_circuit, parse_dimacs, Circuit};
use tantrix::compiler::{compile, extract_assignment, schedule, serialize_port_map, CompiledPuzzle};
use tantrix::gadgets::{load_library, stock_library, stock_library_text, verify_library};
use tantrix::hexgrid::Coord;
use tantrix::instance::{check_solution, parse_instance, serialize_instance, Instance, Solution};
use tantrix::render::render_svg;
use tantrix::roundtrip::brute_force_models;
use tantrix::solver::{brute_force_count, count_solutions, decide, enumerate_solutions, is_unique};
use tantrix::tiles::{canonicalize, enumerate_catalogue, TileCode};

type Rotations = BTreeMap<(i64, i64), u8>;

fn value_error(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_solution(r: &Rotations) -> Solution {
    Solution::new(r.iter().map(|(&(u, w), &k)| (Coord::new(u, w), k)).collect())
}

fn from_solution(s: &Solution) -> Rotations {
    s.rotations.iter().map(|(c, &k)| ((c.u, c.w), k)).collect()
}

/// A rotation puzzle: tiles on hex cells plus optional edge clamps.
#[pyclass(name = "Instance", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: Instance,
}

#[pymethods]
impl PyInstance {
    /// Parses the text instance format (`u w WORD` and `! u w d c` lines).
    #[new]
    #[pyo3(signature = (text = ""))]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyInstance {
            inner: parse_instance(text).map_err(value_error)?,
        })
    }

    fn __str__(&self) -> String {
        serialize_instance(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn tiles(&self) -> Vec<((i64, i64), String)> {
        self.inner
            .placements()
            .iter()
            .map(|(c, t)| ((c.u, c.w), t.to_string()))
            .collect()
    }

    fn count(&self) -> BigUint {
        count_solutions(&self.inner)
    }

    fn is_unique(&self) -> bool {
        is_unique(&self.inner)
    }

    fn decide(&self) -> bool {
        decide(&self.inner)
    }

    #[pyo3(signature = (cap = 1))]
    fn solutions(&self, cap: usize) -> Vec<Rotations> {
        enumerate_solutions(&self.inner, cap)
            .iter()
            .map(from_solution)
            .collect()
    }

    fn check(&self, rotations: Rotations) -> PyResult<bool> {
        check_solution(&self.inner, &to_solution(&rotations)).map_err(value_error)
    }

    #[pyo3(signature = (limit = 10))]
    fn brute_force_count(&self, limit: usize) -> PyResult<u64> {
        brute_force_count(&self.inner, limit).map_err(value_error)
    }

    #[pyo3(signature = (rotations = None))]
    fn render_svg(&self, rotations: Option<Rotations>) -> PyResult<String> {
        render_svg(&self.inner, rotations.map(|r| to_solution(&r)).as_ref()).map_err(value_error)
    }
}

/// An AND/NOT circuit; the last instruction is the output.
#[pyclass(name = "Circuit", frozen)]
struct PyCircuit {
    inner: Circuit,
}

#[pymethods]
impl PyCircuit {
    /// Parses the circuit text format (`n N`, `and j k`, `not j`).
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyCircuit {
            inner: parse_circuit(text).map_err(value_error)?,
        })
    }

    /// Lowers a DIMACS CNF to a circuit with the same models.
    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        Ok(PyCircuit {
            inner: cnf_to_circuit(&parse_dimacs(text).map_err(value_error)?),
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    #[getter]
    fn inputs(&self) -> usize {
        self.inner.inputs()
    }

    fn evaluate(&self, assignment: Vec<bool>) -> PyResult<bool> {
        self.inner.evaluate(&assignment).map_err(value_error)
    }

    #[pyo3(signature = (limit = 20))]
    fn count_sat(&self, limit: usize) -> PyResult<u64> {
        self.inner.count_sat(limit).map_err(value_error)
    }

    /// The routing program, one bracketed row per line.
    fn schedule(&self) -> String {
        schedule(&self.inner).describe()
    }

    fn compile(&self) -> PyResult<PyCompiled> {
        Ok(PyCompiled {
            inner: compile(&self.inner).map_err(value_error)?,
        })
    }
}

/// A puzzle compiled from a circuit, with its input port map.
#[pyclass(name = "CompiledPuzzle", frozen)]
struct PyCompiled {
    inner: CompiledPuzzle,
}

#[pymethods]
impl PyCompiled {
    #[getter]
    fn instance(&self) -> PyInstance {
        PyInstance {
            inner: self.inner.instance.clone(),
        }
    }

    #[getter]
    fn port_map(&self) -> Vec<(i64, i64)> {
        self.inner.port_map.iter().map(|c| (c.u, c.w)).collect()
    }

    fn port_map_text(&self) -> String {
        serialize_port_map(&self.inner.port_map)
    }

    #[getter]
    fn tracks(&self) -> usize {
        self.inner.program.tracks
    }

    fn extract(&self, rotations: Rotations) -> PyResult<Vec<bool>> {
        extract_assignment(&self.inner, &to_solution(&rotations)).map_err(value_error)
    }
}

/// Canonical form of a tile word and the rotation that reaches it.
#[pyfunction]
fn canonical(word: &str) -> PyResult<(String, u8)> {
    let (code, r) = canonicalize(word).map_err(value_error)?;
    Ok((code.to_string(), r))
}

/// Shape name of a tile word.
#[pyfunction]
fn shape(word: &str) -> PyResult<&'static str> {
    let code: TileCode = word.parse().map_err(value_error)?;
    Ok(code.shape().name())
}

#[pyfunction]
fn catalogue() -> Vec<String> {
    enumerate_catalogue().iter().map(TileCode::to_string).collect()
}

/// Compiles a DIMACS CNF into a puzzle.
#[pyfunction]
fn reduce_sat(dimacs: &str) -> PyResult<PyCompiled> {
    PyCircuit::from_dimacs(dimacs)?.compile()
}

/// Satisfying assignments of a DIMACS CNF by exhaustive evaluation.
#[pyfunction]
fn models(dimacs: &str) -> PyResult<Vec<Vec<bool>>> {
    Ok(brute_force_models(&parse_dimacs(dimacs).map_err(value_error)?))
}

/// Text of the stock gadget library.
#[pyfunction]
fn stock_gadgets() -> String {
    stock_library_text()
}

/// Verifies a gadget library (the stock one by default). Returns
/// `(name, passed, [row counts])` per gadget.
#[pyfunction]
#[pyo3(signature = (library = None))]
fn verify_gadgets(library: Option<&str>) -> PyResult<Vec<(String, bool, Vec<BigUint>)>> {
    let lib = match library {
        Some(text) => load_library(text).map_err(value_error)?,
        None => stock_library(),
    };
    Ok(verify_library(&lib)
        .into_iter()
        .map(|r| {
            let pass = r.pass();
            (r.name, pass, r.rows.into_iter().map(|row| row.count).collect())
        })
        .collect())
}

#[pymodule]
pub fn tantrix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyCompiled>()?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(shape, m)?)?;
    m.add_function(wrap_pyfunction!(catalogue, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_sat, m)?)?;
    m.add_function(wrap_pyfunction!(models, m)?)?;
    m.add_function(wrap_pyfunction!(stock_gadgets, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gadgets, m)?)?;
    Ok(())
}

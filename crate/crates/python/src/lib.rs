//! Python bindings: `import blowup`.
//!
//! Divisor classes and census tables are classes; structured results
//! (classification, peeling, oracle reports) come back as plain dicts.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use blowup_core as core;
use blowup_core::classify::{base_locus_peel, DEFAULT_PEEL_BUDGET};
use blowup_core::oracle::{DEFAULT_PRIME, DEFAULT_TRIALS};
use blowup_core::orbit::degree_histogram;
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

create_exception!(
    blowup,
    BlowupError,
    PyValueError,
    "Domain error raised by blowup operations."
);

fn err(e: core::Error) -> PyErr {
    BlowupError::new_err(e.to_string())
}

/// Converts a serializable value into Python objects through JSON.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// The class `dH - Σ m_i E_i` on the blow-up of `P^n` at `s = len(m)` points.
#[pyclass(
    frozen,
    eq,
    hash,
    skip_from_py_object,
    module = "blowup",
    name = "Divisor"
)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyDivisor(core::DivisorClass);

#[pymethods]
impl PyDivisor {
    #[new]
    fn new(n: usize, d: i64, m: Vec<i64>) -> PyResult<Self> {
        core::DivisorClass::new(n, d, m).map(Self).map_err(err)
    }

    /// Parses `n:d:m1,...,ms` or the JSON object form.
    #[staticmethod]
    fn parse(literal: &str) -> PyResult<Self> {
        core::parse_divisor(literal).map(Self).map_err(err)
    }

    #[staticmethod]
    fn exceptional(n: usize, s: usize, i: usize) -> PyResult<Self> {
        core::DivisorClass::exceptional(n, s, i)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn hyperplane(n: usize, s: usize) -> PyResult<Self> {
        core::DivisorClass::hyperplane(n, s).map(Self).map_err(err)
    }

    #[staticmethod]
    fn canonical(n: usize, s: usize) -> PyResult<Self> {
        core::DivisorClass::canonical(n, s).map(Self).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn d(&self) -> i64 {
        self.0.d()
    }

    #[getter]
    fn m(&self) -> Vec<i64> {
        self.0.m().to_vec()
    }

    #[getter]
    fn s(&self) -> usize {
        self.0.s()
    }

    fn pairing(&self, other: &PyDivisor) -> PyResult<i64> {
        core::mukai_pairing(&self.0, &other.0).map_err(err)
    }

    fn adeg(&self) -> PyResult<i64> {
        core::adeg(&self.0).map_err(err)
    }

    fn chi(&self) -> PyResult<i64> {
        core::chi(&self.0).map_err(err)
    }

    fn cone(&self) -> Self {
        Self(core::cone(&self.0))
    }

    fn is_exceptional(&self) -> bool {
        self.0.is_exceptional()
    }

    fn pretty(&self) -> String {
        self.0.pretty()
    }

    /// The structured form `{"n": .., "d": .., "m": [..]}`.
    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("divisor serializes")
    }

    fn __add__(&self, other: &PyDivisor) -> PyResult<Self> {
        self.0.checked_add(&other.0).map(Self).map_err(err)
    }

    fn __sub__(&self, other: &PyDivisor) -> PyResult<Self> {
        self.0.checked_sub(&other.0).map(Self).map_err(err)
    }

    fn __mul__(&self, k: i64) -> PyResult<Self> {
        self.0.checked_scale(k).map(Self).map_err(err)
    }

    fn __rmul__(&self, k: i64) -> PyResult<Self> {
        self.__mul__(k)
    }

    fn __neg__(&self) -> PyResult<Self> {
        self.0.checked_neg().map(Self).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Divisor.parse('{}')", self.0)
    }
}

fn index_set(dc: &core::DivisorClass, indices: Vec<usize>) -> PyResult<core::IndexSet> {
    core::IndexSet::new(indices, dc.n(), dc.s()).map_err(err)
}

fn weyl_word(dc: &core::DivisorClass, word: Vec<Vec<usize>>) -> PyResult<core::WeylWord> {
    let steps = word
        .into_iter()
        .map(|i| index_set(dc, i))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(core::WeylWord::new(steps))
}

fn word_lists(word: &core::WeylWord) -> Vec<Vec<usize>> {
    word.steps().iter().map(|s| s.indices().to_vec()).collect()
}

#[pyfunction]
fn mukai_pairing(a: &PyDivisor, b: &PyDivisor) -> PyResult<i64> {
    a.pairing(b)
}

#[pyfunction]
fn planar_genus(dc: &PyDivisor) -> PyResult<i64> {
    core::planar_genus(&dc.0).map_err(err)
}

#[pyfunction]
fn planar_conditions<'py>(py: Python<'py>, dc: &PyDivisor) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::planar_conditions(&dc.0).map_err(err)?)
}

/// Cremona transformation centred at the points in `indices` (1-based).
#[pyfunction]
fn cremona(dc: &PyDivisor, indices: Vec<usize>) -> PyResult<PyDivisor> {
    let set = index_set(&dc.0, indices)?;
    core::cremona_apply(&dc.0, &set).map(PyDivisor).map_err(err)
}

/// Applies a word given as a list of index sets, rightmost first.
#[pyfunction]
fn apply_word(dc: &PyDivisor, word: Vec<Vec<usize>>) -> PyResult<PyDivisor> {
    let w = weyl_word(&dc.0, word)?;
    core::apply_word(&dc.0, &w).map(PyDivisor).map_err(err)
}

#[pyfunction]
fn invert_word(word: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    word.into_iter().rev().collect()
}

#[pyfunction]
fn noether_indices(dc: &PyDivisor) -> PyResult<Option<Vec<usize>>> {
    Ok(core::noether_indices(&dc.0)
        .map_err(err)?
        .map(|s| s.indices().to_vec()))
}

#[pyfunction]
fn numeric_minus_one(dc: &PyDivisor) -> PyResult<bool> {
    core::numeric_minus_one(&dc.0).map_err(err)
}

/// `{"verdict", "steps", "reached", "witness"?, "terminal"?}`; classes as `Divisor`.
#[pyfunction]
fn classify<'py>(py: Python<'py>, dc: &PyDivisor) -> PyResult<Bound<'py, PyDict>> {
    let r = core::classify_minus_one(&dc.0).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("verdict", to_py(py, &r.verdict)?)?;
    out.set_item("steps", r.steps)?;
    out.set_item("reached", PyDivisor(r.reached))?;
    if let (Some(w), Some(t)) = (r.witness, r.terminal) {
        out.set_item("witness", word_lists(&w))?;
        out.set_item("terminal", PyDivisor(t))?;
    }
    Ok(out)
}

/// A `(-1)` class of degree at most `max_degree` pairing negatively with `dc`, if any.
#[pyfunction]
fn pairing_obstruction(dc: &PyDivisor, max_degree: i64) -> PyResult<Option<(PyDivisor, i64)>> {
    Ok(core::pairing_obstruction(&dc.0, max_degree)
        .map_err(err)?
        .map(|o| (PyDivisor(o.obstructor), o.pairing)))
}

type Peeled = (Vec<(PyDivisor, i64)>, PyDivisor, bool);

/// Returns `(components, residual, exhausted)` with components as `(class, multiplicity)`.
#[pyfunction]
#[pyo3(signature = (dc, max_degree, max_iterations = DEFAULT_PEEL_BUDGET))]
fn peel(
    py: Python<'_>,
    dc: &PyDivisor,
    max_degree: i64,
    max_iterations: usize,
) -> PyResult<Peeled> {
    let r = py
        .detach(|| base_locus_peel(&dc.0, max_degree, max_iterations))
        .map_err(err)?;
    let components = r
        .components
        .into_iter()
        .map(|c| (PyDivisor(c.obstructor), c.multiplicity))
        .collect();
    Ok((components, PyDivisor(r.residual), r.exhausted))
}

/// Returns `(class, word, status)` where `apply_word(dc, word) == class`.
#[pyfunction]
fn reduce(dc: &PyDivisor) -> PyResult<(PyDivisor, Vec<Vec<usize>>, &'static str)> {
    let r = core::cremona_reduce(&dc.0).map_err(err)?;
    let status = match r.status {
        core::classify::ReduceStatus::Reduced => "reduced",
        core::classify::ReduceStatus::NegativeDegree => "negative_degree",
    };
    Ok((PyDivisor(r.class), word_lists(&r.word), status))
}

#[pyfunction]
fn dolgachev_shape_check(dc: &PyDivisor) -> PyResult<bool> {
    core::dolgachev_shape_check(&dc.0).map_err(err)
}

/// Census of the Weyl orbit of `E_1` up to a degree bound.
#[pyclass(frozen, module = "blowup", name = "OrbitTable")]
pub struct PyOrbitTable(core::OrbitTable);

#[pymethods]
impl PyOrbitTable {
    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn s(&self) -> usize {
        self.0.s
    }

    #[getter]
    fn max_degree(&self) -> i64 {
        self.0.max_degree
    }

    #[getter]
    fn complete(&self) -> bool {
        self.0.complete
    }

    /// Canonical forms as `(d, m, perms)`.
    #[getter]
    fn entries(&self) -> Vec<(i64, Vec<i64>, u64)> {
        self.0
            .entries
            .iter()
            .map(|e| (e.d, e.m.clone(), e.perms))
            .collect()
    }

    fn total(&self) -> u64 {
        self.0.total()
    }

    fn histogram(&self) -> std::collections::BTreeMap<i64, u64> {
        degree_histogram(&self.0)
    }

    fn contains(&self, dc: &PyDivisor) -> bool {
        self.0.contains(&dc.0)
    }

    /// Every class in the census, permutations expanded.
    fn classes(&self) -> PyResult<Vec<PyDivisor>> {
        let mut out = Vec::new();
        for e in &self.0.entries {
            out.extend(e.classes(self.0.n).map_err(err)?.into_iter().map(PyDivisor));
        }
        Ok(out)
    }

    fn verify(&self, py: Python<'_>) -> bool {
        py.detach(|| core::verify_table(&self.0))
    }

    fn write(&self, path: &str) -> PyResult<()> {
        let io = |e: std::io::Error| PyIOError::new_err(format!("{path}: {e}"));
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        self.0.write_jsonl(&mut w).map_err(io)?;
        w.flush().map_err(io)
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        let file = File::open(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
        core::OrbitTable::read_jsonl(BufReader::new(file))
            .map(Self)
            .map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.entries.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "OrbitTable(n={}, s={}, max_degree={}, classes={})",
            self.0.n,
            self.0.s,
            self.0.max_degree,
            self.0.total()
        )
    }
}

#[pyfunction]
fn enumerate(py: Python<'_>, n: usize, s: usize, max_degree: i64) -> PyResult<PyOrbitTable> {
    py.detach(|| core::enumerate(n, s, max_degree))
        .map(PyOrbitTable)
        .map_err(err)
}

/// Conjectural expected dimension from the secant-cone formula (`s <= n + 3`).
#[pyfunction]
fn rnc_expected_dim(dc: &PyDivisor) -> PyResult<i64> {
    core::rnc_expected_dim(&dc.0).map_err(err)
}

/// Every stratum as a dict with keys `indices, t, r, k, term`.
#[pyfunction]
fn rnc_strata<'py>(py: Python<'py>, dc: &PyDivisor) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &core::rnc_strata(&dc.0).map_err(err)?)
}

/// Conjectural planar expected dimension; `max_degree` defaults to `d`.
#[pyfunction]
#[pyo3(signature = (dc, max_degree = None))]
fn ghh_expected_dim(py: Python<'_>, dc: &PyDivisor, max_degree: Option<i64>) -> PyResult<i64> {
    let bound = max_degree.unwrap_or(dc.0.d());
    py.detach(|| core::ghh_expected_dim(&dc.0, bound))
        .map_err(err)
}

/// Sections by random interpolation mod `prime`; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (dc, seed = 0, trials = DEFAULT_TRIALS, prime = DEFAULT_PRIME))]
fn h0_dimension<'py>(
    py: Python<'py>,
    dc: &PyDivisor,
    seed: u64,
    trials: usize,
    prime: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = core::OracleOptions {
        seed,
        trials,
        prime,
    };
    let r = py
        .detach(|| core::h0_dimension_with(&dc.0, &opts))
        .map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (dc, indices, seed = 0))]
fn cremona_h0_check(
    py: Python<'_>,
    dc: &PyDivisor,
    indices: Vec<usize>,
    seed: u64,
) -> PyResult<bool> {
    let set = index_set(&dc.0, indices)?;
    py.detach(|| core::cremona_h0_check(&dc.0, &set, seed))
        .map_err(err)
}

/// Runs the built-in example checks; returns `{fixtures, passed, failed, total}`.
#[pyfunction]
#[pyo3(signature = (seed = 0))]
fn run_fixtures<'py>(py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let ctx = core::fixtures::FixtureContext {
        seed,
        ..Default::default()
    };
    let report = py.detach(|| core::fixtures::run_fixtures(&ctx));
    to_py(py, &report)
}

#[pymodule]
fn blowup(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BlowupError", m.py().get_type::<BlowupError>())?;
    m.add_class::<PyDivisor>()?;
    m.add_class::<PyOrbitTable>()?;
    m.add_function(wrap_pyfunction!(mukai_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(planar_genus, m)?)?;
    m.add_function(wrap_pyfunction!(planar_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(cremona, m)?)?;
    m.add_function(wrap_pyfunction!(apply_word, m)?)?;
    m.add_function(wrap_pyfunction!(invert_word, m)?)?;
    m.add_function(wrap_pyfunction!(noether_indices, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_minus_one, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(pairing_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(peel, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(dolgachev_shape_check, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(rnc_expected_dim, m)?)?;
    m.add_function(wrap_pyfunction!(rnc_strata, m)?)?;
    m.add_function(wrap_pyfunction!(ghh_expected_dim, m)?)?;
    m.add_function(wrap_pyfunction!(h0_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(cremona_h0_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_fixtures, m)?)?;
    Ok(())
}

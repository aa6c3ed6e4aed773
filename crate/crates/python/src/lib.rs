use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use spectra::algebraic::{parse_rational, Base, IntPolynomial, DEFAULT_TOLERANCE};
use spectra::expansions::{greedy_expansion, lazy_constrained, SignPattern};
use spectra::spectrum::{
    enumerate_a, enumerate_x, enumerate_y, gap_report, min_positive_bfs, BfsOptions, GapOptions,
    DEFAULT_STATE_BUDGET,
};
use spectra::witness::{accumulation_verdict, build_witness};
use spectra::SpectraError;

fn err(e: SpectraError) -> PyErr {
    match e {
        SpectraError::BudgetExhausted(_) | SpectraError::HorizonTooShort { .. } | SpectraError::Inconclusive { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Serializes through JSON so results arrive as plain dicts and lists.
fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A real base `q > 1`: a root of an integer polynomial or a decimal.
#[pyclass(name = "Base", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBase {
    inner: Base,
}

#[pymethods]
impl PyBase {
    /// Root of `sum coeffs[i] x^i`; `root_index` counts real roots above 1.
    #[staticmethod]
    #[pyo3(signature = (coeffs, root_index = 0))]
    fn from_poly(coeffs: Vec<i64>, root_index: usize) -> PyResult<Self> {
        let p = IntPolynomial::from_i64s(&coeffs);
        Ok(PyBase {
            inner: Base::from_root_index(&p, root_index).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (text, tolerance = DEFAULT_TOLERANCE))]
    fn numeric(text: &str, tolerance: f64) -> PyResult<Self> {
        Ok(PyBase {
            inner: Base::numeric(text, tolerance).map_err(err)?,
        })
    }

    #[getter]
    fn value(&self) -> f64 {
        self.inner.to_f64()
    }

    fn spec(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.spec())
    }

    #[pyo3(signature = (max_bits = 256))]
    fn classify(&self, py: Python<'_>, max_bits: u32) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.classify(1e-12, max_bits).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Base({})", self.inner)
    }
}

/// Window of `X^m`, `Y^m` or `A` in `[-bound, bound]` (`[0, bound]` for X).
#[pyfunction]
#[pyo3(signature = (base, kind, bound, m = 1, degree = None, budget = DEFAULT_STATE_BUDGET))]
fn spectrum_window(
    py: Python<'_>,
    base: &PyBase,
    kind: &str,
    bound: f64,
    m: i64,
    degree: Option<usize>,
    budget: usize,
) -> PyResult<Py<PyAny>> {
    let need = || degree.ok_or_else(|| PyValueError::new_err("degree is required for this kind"));
    let b = &base.inner;
    let w = match kind {
        "x" | "X" => enumerate_x(b, m, bound, budget),
        "y" | "Y" => enumerate_y(b, m, need()?, bound, budget),
        "a" | "A" => enumerate_a(b, need()?, bound, budget),
        _ => return Err(PyValueError::new_err("kind must be x, y or a")),
    }
    .map_err(err)?;
    to_py(py, &w)
}

#[pyfunction]
#[pyo3(signature = (base, bound, m = 1, tail_fraction = 0.5, budget = DEFAULT_STATE_BUDGET))]
fn gaps(py: Python<'_>, base: &PyBase, bound: f64, m: i64, tail_fraction: f64, budget: usize) -> PyResult<Py<PyAny>> {
    let w = enumerate_x(&base.inner, m, bound, budget).map_err(err)?;
    let opts = GapOptions {
        tail_fraction,
        ..GapOptions::default()
    };
    to_py(py, &gap_report(&w, &opts).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (base, m = 1, max_depth = None, budget = DEFAULT_STATE_BUDGET))]
fn min_positive(
    py: Python<'_>,
    base: &PyBase,
    m: i64,
    max_depth: Option<usize>,
    budget: usize,
) -> PyResult<Py<PyAny>> {
    let opts = BfsOptions {
        max_depth,
        state_budget: budget,
    };
    to_py(py, &min_positive_bfs(&base.inner, m, &opts).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (base, x = "1", m = 1, n = 40))]
fn greedy(py: Python<'_>, base: &PyBase, x: &str, m: i64, n: usize) -> PyResult<Py<PyAny>> {
    let k = base.inner.field();
    let t = k.rational(parse_rational(x).map_err(err)?);
    to_py(py, &greedy_expansion(&base.inner, m, &t, n).map_err(err)?)
}

/// Lazy constrained expansion for a pattern such as `eventual:periodic:01`.
#[pyfunction]
#[pyo3(signature = (base, pattern, m = 1, horizon = 40))]
fn lazy(py: Python<'_>, base: &PyBase, pattern: &str, m: i64, horizon: usize) -> PyResult<Py<PyAny>> {
    let p = SignPattern::parse(pattern).map_err(err)?;
    to_py(py, &lazy_constrained(&base.inner, m, &p, horizon).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (base, p, m = 1, horizon = 60))]
fn witness(py: Python<'_>, base: &PyBase, p: (f64, f64), m: i64, horizon: usize) -> PyResult<Py<PyAny>> {
    let r = build_witness(&base.inner, m, Complex64::new(p.0, p.1), horizon).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (base, m = 1, max_depth = None, budget = DEFAULT_STATE_BUDGET, max_bits = 256))]
fn verdict(
    py: Python<'_>,
    base: &PyBase,
    m: i64,
    max_depth: Option<usize>,
    budget: usize,
    max_bits: u32,
) -> PyResult<Py<PyAny>> {
    let opts = BfsOptions {
        max_depth,
        state_budget: budget,
    };
    to_py(py, &accumulation_verdict(&base.inner, m, &opts, max_bits).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (case, budget = DEFAULT_STATE_BUDGET))]
fn reproduce(py: Python<'_>, case: &str, budget: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &spectra::reproduce::run_case(case, budget).map_err(err)?)
}

#[pymodule]
fn spectra_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBase>()?;
    m.add_function(wrap_pyfunction!(spectrum_window, m)?)?;
    m.add_function(wrap_pyfunction!(gaps, m)?)?;
    m.add_function(wrap_pyfunction!(min_positive, m)?)?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(lazy, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(verdict, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    Ok(())
}

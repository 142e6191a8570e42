//! Python bindings. Structured results come back as dicts with the same field
//! names as the JSON artifacts of the command-line tool.
//!
//! Invalid input raises `ValueError`; quadrature, series and cross-check
//! failures raise `ArithmeticError`.

// Triggered by the pyo3 0.22 function macros, not by this code.
#![allow(clippy::useless_conversion)]

use hvclust::analytic;
use hvclust::grid::geometric_grid;
use hvclust::powerlaw::expected_max_bounds;
use hvclust::simulate::SimulationConfig;
use hvclust::{AnalyticConfig, CutoffScheme, Error, GeneratorKind, HBinSpec, Kernel, LerchParams, PowerLawModel};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Quadrature { .. } | Error::Series { .. } | Error::CrossCheck(_) => {
            PyArithmeticError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    Ok(pythonize::pythonize(py, value)?.unbind())
}

fn config(rel_tol: f64) -> PyResult<AnalyticConfig> {
    let cfg = AnalyticConfig::default().with_rel_tol(rel_tol);
    cfg.validate().map_err(py_err)?;
    Ok(cfg)
}

/// Kernel, population model and default cutoffs.
fn setup(kernel: &str, tau: f64, h_min: f64, n: u64) -> PyResult<(Kernel, PowerLawModel, CutoffScheme)> {
    let k = Kernel::from_name(kernel).map_err(py_err)?;
    let model = PowerLawModel::new(tau, h_min, n).map_err(py_err)?;
    let scheme = model.default_cutoffs().map_err(py_err)?;
    Ok((k, model, scheme))
}

/// Connection probability `r(u)` of a built-in kernel.
#[pyfunction]
fn kernel_r(kernel: &str, u: f64) -> PyResult<f64> {
    Kernel::from_name(kernel).and_then(|k| k.eval_r(u)).map_err(py_err)
}

/// Numerical check of the kernel conditions on a geometric `u` grid.
#[pyfunction]
#[pyo3(signature = (kernel, lo = 1e-6, hi = 1e6, count = 241))]
fn validate_kernel(py: Python<'_>, kernel: &str, lo: f64, hi: f64, count: usize) -> PyResult<PyObject> {
    let k = Kernel::from_name(kernel).map_err(py_err)?;
    let report = hvclust::validate_fclass(&k, &geometric_grid(lo, hi, count).map_err(py_err)?);
    let dict = PyDict::new_bound(py);
    dict.set_item("kernel", k.label())?;
    dict.set_item("all_passed", report.all_passed())?;
    dict.set_item("checks", to_py(py, &report)?)?;
    Ok(dict.into_any().unbind())
}

/// Default cutoffs `h_s`, `h_c`, their ratios `a`, `b`, `alpha = a h_min` and `<h>`.
#[pyfunction]
#[pyo3(signature = (tau, n, h_min = 1.0))]
fn cutoffs(py: Python<'_>, tau: f64, n: u64, h_min: f64) -> PyResult<PyObject> {
    let model = PowerLawModel::new(tau, h_min, n).map_err(py_err)?;
    let s = model.default_cutoffs().map_err(py_err)?;
    let dict = PyDict::new_bound(py);
    dict.set_item("h_s", s.h_s)?;
    dict.set_item("h_c", s.h_c)?;
    dict.set_item("a", s.a)?;
    dict.set_item("b", s.b)?;
    dict.set_item("alpha", s.alpha(h_min))?;
    dict.set_item("mean_h", model.mean_h())?;
    Ok(dict.into_any().unbind())
}

/// Average clustering with bounds, closed forms and approximations.
#[pyfunction]
#[pyo3(signature = (kernel, tau, n, h_min = 1.0, rel_tol = 1e-10))]
fn c_average(py: Python<'_>, kernel: &str, tau: f64, n: u64, h_min: f64, rel_tol: f64) -> PyResult<PyObject> {
    let (k, model, scheme) = setup(kernel, tau, h_min, n)?;
    let cfg = config(rel_tol)?;
    let result = py.allow_threads(|| analytic::c_average(&k, &scheme, tau, h_min, model.n(), &cfg)).map_err(py_err)?;
    to_py(py, &result)
}

/// Probability that two neighbors of a vertex with hidden variable `h` are adjacent.
#[pyfunction]
#[pyo3(signature = (kernel, tau, n, h, h_min = 1.0, rel_tol = 1e-10))]
fn c_ab_h(py: Python<'_>, kernel: &str, tau: f64, n: u64, h: f64, h_min: f64, rel_tol: f64) -> PyResult<f64> {
    let (k, _, scheme) = setup(kernel, tau, h_min, n)?;
    let cfg = config(rel_tol)?;
    py.allow_threads(|| analytic::c_ab_h(&k, &scheme, tau, h_min, h, &cfg)).map(|e| e.value).map_err(py_err)
}

/// Local clustering `c(h)`: `c_ab(h)` times the probability of degree at least two.
#[pyfunction]
#[pyo3(signature = (kernel, tau, n, h, h_min = 1.0, rel_tol = 1e-10))]
fn local_clustering(py: Python<'_>, kernel: &str, tau: f64, n: u64, h: f64, h_min: f64, rel_tol: f64) -> PyResult<f64> {
    let (k, _, scheme) = setup(kernel, tau, h_min, n)?;
    let cfg = config(rel_tol)?;
    py.allow_threads(|| analytic::local_clustering_analytic(&k, &scheme, tau, h_min, h, &cfg))
        .map(|e| e.value)
        .map_err(py_err)
}

/// Dominant closed-form terms at `s = tau - 2`.
#[pyfunction]
fn table2_terms(py: Python<'_>, s: f64) -> PyResult<PyObject> {
    to_py(py, &hvclust::table2_terms(s).map_err(py_err)?)
}

/// Lerch transcendent `Phi(z, s, v)` for `0 <= z < 1`, `v > 0`.
#[pyfunction]
#[pyo3(signature = (z, s, v, tol = 1e-13))]
fn lerch_phi(z: f64, s: f64, v: f64, tol: f64) -> PyResult<f64> {
    LerchParams::new(z, s, v).and_then(|p| hvclust::lerch_phi(&p, tol)).map_err(py_err)
}

/// Size `N` at which the average clustering stops persisting, for threshold `t`.
#[pyfunction]
#[pyo3(signature = (tau, t = 2.0))]
fn persistence_threshold_n(tau: f64, t: f64) -> PyResult<f64> {
    analytic::persistence_threshold_n(tau, t).map_err(py_err)
}

/// Expected maximum of `n` untruncated hidden variables with its bounds.
#[pyfunction]
#[pyo3(signature = (tau, n, h_min = 1.0))]
fn natural_cutoff(py: Python<'_>, tau: f64, n: u64, h_min: f64) -> PyResult<PyObject> {
    let model = PowerLawModel::new(tau, h_min, n).map_err(py_err)?;
    let exact = model.natural_cutoff_exact().map_err(py_err)?;
    let (lower, upper) = expected_max_bounds(tau, h_min, n).map_err(py_err)?;
    let dict = PyDict::new_bound(py);
    dict.set_item("exact", exact)?;
    dict.set_item("lower", lower)?;
    dict.set_item("upper", upper)?;
    Ok(dict.into_any().unbind())
}

/// Simulated clustering pooled over replicas. Replica `r` is seeded with
/// `seed ^ splitmix64(r)`, so results do not depend on the thread count.
#[pyfunction]
#[pyo3(signature = (kernel, tau, n, replicas = 100, seed = 1, h_min = 1.0, generator = "fast", bins = 20))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    kernel: &str,
    tau: f64,
    n: u64,
    replicas: usize,
    seed: u64,
    h_min: f64,
    generator: &str,
    bins: usize,
) -> PyResult<PyObject> {
    let (k, model, _) = setup(kernel, tau, h_min, n)?;
    let mut cfg = SimulationConfig::new(k, model, replicas, seed).map_err(py_err)?;
    cfg.generator = generator.parse::<GeneratorKind>().map_err(py_err)?;
    cfg.bins = HBinSpec::logarithmic(h_min, cfg.scheme.h_c.max(h_min * (1.0 + 1e-9)), bins).map_err(py_err)?;
    let summary = py.allow_threads(|| hvclust::simulate::run(&cfg)).map_err(py_err)?;
    to_py(py, &summary)
}

#[pymodule]
#[pyo3(name = "hvclust")]
pub fn hvclust_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(kernel_r, m)?)?;
    m.add_function(wrap_pyfunction!(validate_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(cutoffs, m)?)?;
    m.add_function(wrap_pyfunction!(c_average, m)?)?;
    m.add_function(wrap_pyfunction!(c_ab_h, m)?)?;
    m.add_function(wrap_pyfunction!(local_clustering, m)?)?;
    m.add_function(wrap_pyfunction!(table2_terms, m)?)?;
    m.add_function(wrap_pyfunction!(lerch_phi, m)?)?;
    m.add_function(wrap_pyfunction!(persistence_threshold_n, m)?)?;
    m.add_function(wrap_pyfunction!(natural_cutoff, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}

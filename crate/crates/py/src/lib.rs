//! Python bindings. Reports come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use steinberg_core::bridge;
use steinberg_core::graph::{Graph, GraphFile};
use steinberg_core::groupoid::{AlgebraElement, FiniteGroupoid, GroupoidFile, UnitSubset};
use steinberg_core::lpa::{Lpa, LpaElement};
use steinberg_core::scalars::RingSpec;
use steinberg_core::suite::{self, Profile, SuiteOptions};
use steinberg_core::Error;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, report: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn ring(spec: &str) -> PyResult<RingSpec> {
    spec.parse().map_err(err)
}

fn graph(json: &str) -> PyResult<Graph> {
    GraphFile::from_json(json).and_then(|f| Graph::from_file(&f)).map_err(err)
}

/// A finite groupoid read from its JSON description.
#[pyclass(frozen)]
struct Groupoid {
    inner: FiniteGroupoid,
}

impl Groupoid {
    fn elements(&self, ring: RingSpec, exprs: &[String]) -> PyResult<Vec<AlgebraElement>> {
        exprs.iter().map(|s| self.inner.parse_element(ring, s).map_err(err)).collect()
    }

    fn subset(&self, units: Option<Vec<String>>) -> PyResult<UnitSubset> {
        let Some(names) = units else { return Ok(self.inner.all_units()) };
        let mut members = Vec::new();
        for name in &names {
            match self.inner.index_of(name) {
                Some(u) if self.inner.is_unit(u) => members.push(u),
                _ => return Err(PyValueError::new_err(format!("unknown unit `{name}`"))),
            }
        }
        if members.is_empty() {
            return Ok(UnitSubset::empty());
        }
        self.inner.unit_subset(members).map_err(err)
    }
}

#[pymethods]
impl Groupoid {
    #[new]
    fn new(json: &str) -> PyResult<Self> {
        let inner = GroupoidFile::from_json(json).and_then(|f| f.to_groupoid()).map_err(err)?;
        Ok(Groupoid { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.validation_report())
    }

    /// Dimension and basis of the centraliser of the span of `exprs`.
    #[pyo3(signature = (exprs, ring = "rat"))]
    fn centraliser(&self, exprs: Vec<String>, ring: &str) -> PyResult<(usize, Vec<String>)> {
        let r = self::ring(ring)?;
        let xs = self.elements(r, &exprs)?;
        let c = self.inner.centraliser_of_span(r, &xs).map_err(err)?;
        let basis = c.basis().iter().map(|v| self.inner.format_element(&self.inner.element_of(r, v))).collect();
        Ok((c.dim(), basis))
    }

    /// `units=None` means every unit; an empty list means the empty subset.
    #[pyo3(signature = (units = None, ring = "rat", force = false))]
    fn verify_theorem<'py>(
        &self,
        py: Python<'py>,
        units: Option<Vec<String>>,
        ring: &str,
        force: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let u = self.subset(units)?;
        let report = self.inner.verify_centraliser_theorem(&u, self::ring(ring)?, force).map_err(err)?;
        to_py(py, &report)
    }

    #[pyo3(signature = (generators, ring = "rat"))]
    fn core_injectivity<'py>(&self, py: Python<'py>, generators: Vec<String>, ring: &str) -> PyResult<Bound<'py, PyAny>> {
        let r = self::ring(ring)?;
        let xs = self.elements(r, &generators)?;
        to_py(py, &self.inner.core_injectivity_check(r, &xs).map_err(err)?)
    }
}

/// The Leavitt path algebra of a graph read from its JSON description.
#[pyclass(frozen)]
struct LeavittPathAlgebra {
    inner: Lpa,
}

impl LeavittPathAlgebra {
    fn element(&self, expr: &str) -> PyResult<LpaElement> {
        self.inner.parse(expr).map_err(err)
    }
}

#[pymethods]
impl LeavittPathAlgebra {
    #[new]
    #[pyo3(signature = (graph_json, ring = "rat"))]
    fn new(graph_json: &str, ring: &str) -> PyResult<Self> {
        Ok(LeavittPathAlgebra { inner: Lpa::new(graph(graph_json)?, self::ring(ring)?) })
    }

    fn normalize(&self, expr: &str) -> PyResult<String> {
        Ok(self.element(expr)?.to_string())
    }

    fn mul(&self, x: &str, y: &str) -> PyResult<String> {
        let p = self.inner.mul(&self.element(x)?, &self.element(y)?).map_err(err)?;
        Ok(p.to_string())
    }

    fn centraliser_check<'py>(&self, py: Python<'py>, expr: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.centraliser_of_diagonal_check(&self.element(expr)?).map_err(err)?)
    }

    fn is_central<'py>(&self, py: Python<'py>, expr: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.is_central(&self.element(expr)?).map_err(err)?)
    }

    fn commutative<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.is_commutative())
    }
}

#[pyfunction]
#[pyo3(signature = (graph_json, ring = "rat", samples = 100, seed = 0))]
fn verify_iso<'py>(py: Python<'py>, graph_json: &str, ring: &str, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let g = graph(graph_json)?;
    let report = bridge::verify_pi_iso(&g, self::ring(ring)?, samples, seed).map_err(err)?;
    let passes = report.passes();
    let out = to_py(py, &report)?;
    out.set_item("passes", passes)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (seed = 0, profile = "quick", tamper = false))]
fn run_suite<'py>(py: Python<'py>, seed: u64, profile: &str, tamper: bool) -> PyResult<Bound<'py, PyAny>> {
    let profile: Profile = profile.parse().map_err(err)?;
    let report = py.detach(|| suite::run(&SuiteOptions { seed, profile, tamper }));
    to_py(py, &report)
}

#[pymodule]
fn pysteinberg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Groupoid>()?;
    m.add_class::<LeavittPathAlgebra>()?;
    m.add_function(wrap_pyfunction!(verify_iso, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}

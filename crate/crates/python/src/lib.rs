//! Python bindings: diagrams, Khovanov dimensions, polynomials, detection
//! reports and the cyclotomic tools.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use knotkit::corpus::named_knot;
use knotkit::cyclotomic;
use knotkit::detector::{self, DetectError, DetectionReport};
use knotkit::diagram::{parse_pd, pretzel_diagram, PlanarDiagram};
use knotkit::khovanov::{self, BigradedDims, Field, KhovanovError, Limits, Method};
use knotkit::knotpoly;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn kh_err(e: KhovanovError) -> PyErr {
    match e {
        KhovanovError::Field(_) => value_err(e),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn detect_err(e: DetectError) -> PyErr {
    match e {
        DetectError::Khovanov(k) => kh_err(k),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// A validated knot diagram.
#[pyclass(name = "Diagram", frozen)]
struct PyDiagram {
    inner: PlanarDiagram,
}

#[pymethods]
impl PyDiagram {
    /// Parses `PD[X[...],...]` text or JSON tuples.
    #[new]
    fn new(pd: &str) -> PyResult<Self> {
        parse_pd(pd).map(|inner| Self { inner }).map_err(value_err)
    }

    /// A table knot (`4_1`), `T(2,5)`, `13n_4639` or `P(p,q,r)`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        named_knot(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| value_err(format!("unknown knot {name:?}")))
    }

    #[staticmethod]
    fn pretzel(p: i64, q: i64, r: i64) -> PyResult<Self> {
        pretzel_diagram(p, q, r).map(|inner| Self { inner }).map_err(value_err)
    }

    #[getter]
    fn crossing_count(&self) -> usize {
        self.inner.crossing_count()
    }

    #[getter]
    fn writhe(&self) -> i64 {
        self.inner.writhe()
    }

    #[getter]
    fn basepoint(&self) -> u32 {
        self.inner.basepoint_edge()
    }

    fn with_basepoint(&self, edge: u32) -> PyResult<Self> {
        self.inner
            .clone()
            .with_basepoint(edge)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    fn mirror(&self) -> Self {
        Self {
            inner: self.inner.mirror(),
        }
    }

    fn pd(&self) -> String {
        self.inner.to_pd_string()
    }

    fn __repr__(&self) -> String {
        format!("Diagram({:?})", self.inner.to_pd_string())
    }
}

/// Bigraded dimensions of reduced Khovanov homology.
#[pyclass(name = "Dims", frozen)]
struct PyDims {
    inner: BigradedDims,
}

#[pymethods]
impl PyDims {
    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[getter]
    fn total_dim(&self) -> usize {
        self.inner.total_dim()
    }

    /// `[(h, q, dim), ...]`
    fn items(&self) -> Vec<(i64, i64, usize)> {
        self.inner.iter().map(|(&(h, q), &d)| (h, q, d)).collect()
    }

    /// `{δ: dim}`
    fn delta_support(&self) -> std::collections::BTreeMap<i64, usize> {
        self.inner.delta_support().0
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("dims serialize")
    }

    fn __repr__(&self) -> String {
        format!("Dims({})", self.inner)
    }
}

/// A detection report.
#[pyclass(name = "Report", frozen)]
struct PyReport {
    inner: DetectionReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn verdict(&self) -> String {
        self.inner.verdict.name().to_string()
    }

    #[getter]
    fn candidates(&self) -> Vec<String> {
        match &self.inner.verdict {
            detector::Verdict::NearlyFiberedCandidates(c) => c.clone(),
            _ => vec![],
        }
    }

    #[getter]
    fn dim_q(&self) -> usize {
        self.inner.dim_q
    }

    #[getter]
    fn dim_f2(&self) -> usize {
        self.inner.dim_f2
    }

    #[getter]
    fn det(&self) -> u64 {
        self.inner.det
    }

    #[getter]
    fn s_thin(&self) -> Option<i64> {
        self.inner.s_thin
    }

    #[getter]
    fn inferred_facts(&self) -> Vec<(String, String)> {
        self.inner
            .inferred_facts
            .iter()
            .map(|f| (f.claim.clone(), f.citation.clone()))
            .collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("report serializes")
    }

    fn __repr__(&self) -> String {
        format!("Report({})", self.inner.verdict)
    }
}

/// Reduced Khovanov homology over `field` (`"Q"` or `"F<p>"`).
#[pyfunction]
#[pyo3(signature = (diagram, field = "Q", naive = false))]
fn homology(py: Python<'_>, diagram: &PyDiagram, field: &str, naive: bool) -> PyResult<PyDims> {
    let field: Field = field.parse().map_err(kh_err)?;
    let method = if naive { Method::Naive } else { Method::Scan };
    let d = diagram.inner.clone();
    py.detach(|| khovanov::homology_dims_with(&d, field, method, &Limits::default()))
        .map(|inner| PyDims { inner })
        .map_err(kh_err)
}

/// `(dim_Q, dim_Fp, p-torsion count, consistent)`.
#[pyfunction]
fn compare_fields(py: Python<'_>, diagram: &PyDiagram, p: u64) -> PyResult<(usize, usize, usize, bool)> {
    let d = diagram.inner.clone();
    let c = py
        .detach(|| khovanov::compare_fields(&d, p, &Limits::default()))
        .map_err(kh_err)?;
    Ok((c.dim_q(), c.dim_fp(), c.torsion_count, c.consistent))
}

#[pyfunction]
fn jones(diagram: &PyDiagram) -> PyResult<String> {
    let dims = khovanov::homology_dims(&diagram.inner, Field::Rationals).map_err(kh_err)?;
    knotpoly::jones_from_kh(&dims).map(|v| v.to_string()).map_err(value_err)
}

#[pyfunction]
fn alexander(diagram: &PyDiagram) -> PyResult<String> {
    knotpoly::alexander_fox(&diagram.inner)
        .map(|a| a.to_string())
        .map_err(value_err)
}

#[pyfunction]
fn determinant(diagram: &PyDiagram) -> PyResult<String> {
    let a = knotpoly::alexander_fox(&diagram.inner).map_err(value_err)?;
    Ok(knotpoly::determinant_from_alexander(&a).to_string())
}

#[pyfunction]
#[pyo3(signature = (diagram, name = ""))]
fn detect(py: Python<'_>, diagram: &PyDiagram, name: &str) -> PyResult<PyReport> {
    let d = diagram.inner.clone();
    py.detach(|| detector::detect(name, &d, &Limits::default()))
        .map(|inner| PyReport { inner })
        .map_err(detect_err)
}

/// Φ_n as a string.
#[pyfunction]
fn cyclotomic_poly(n: u64) -> PyResult<String> {
    if n == 0 {
        return Err(value_err("n must be at least 1"));
    }
    Ok(cyclotomic::cyclotomic_poly(n).to_string())
}

/// `[(h, is_product, factorization), ...]` for `1 <= h <= h_max`.
#[pyfunction]
fn scan_ph(py: Python<'_>, h_max: u64) -> PyResult<Vec<(u64, bool, String)>> {
    let report = py.detach(|| cyclotomic::verify_ph_family(h_max)).map_err(value_err)?;
    Ok(report
        .rows
        .into_iter()
        .map(|r| (r.h, r.is_product, r.factorization))
        .collect())
}

#[pymodule]
fn knotkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyDims>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(compare_fields, m)?)?;
    m.add_function(wrap_pyfunction!(jones, m)?)?;
    m.add_function(wrap_pyfunction!(alexander, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(cyclotomic_poly, m)?)?;
    m.add_function(wrap_pyfunction!(scan_ph, m)?)?;
    Ok(())
}

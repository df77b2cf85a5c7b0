//! Python bindings for the `barbilian` library.
//!
//! ```python
//! import barbilian
//! k = barbilian.SourceSet.unit_circle()
//! barbilian.barbilian_distance(k, (0, 0), (0.5, 0)).value   # ln 3
//! ```

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use barbilian_core as core;
use core::geodesic::GeodesicGrid;
use core::{BarbilianMetric, DiskPoint, ExtremaOptions, InfluenceField, Point};

create_exception!(barbilian, BarbilianError, PyValueError, "Invalid input to a distance computation.");
create_exception!(
    barbilian,
    AdmissibilityError,
    BarbilianError,
    "A query point touches the source set or an influence is not positive."
);

fn to_py(e: core::Error) -> PyErr {
    if e.is_admissibility() {
        AdmissibilityError::new_err(e.to_string())
    } else {
        BarbilianError::new_err(e.to_string())
    }
}

fn point(coords: Vec<f64>) -> PyResult<Point> {
    Point::new(coords).map_err(to_py)
}

fn coords(p: &Point) -> Vec<f64> {
    p.coords().to_vec()
}

/// Influence from Python: `None` for Euclidean distance, a number `s` for
/// `|P - A|^s`, or a callable `f(p, a) -> float`.
fn influence(obj: Option<&Bound<'_, PyAny>>) -> PyResult<InfluenceField> {
    let Some(obj) = obj.filter(|o| !o.is_none()) else {
        return Ok(InfluenceField::Euclidean);
    };
    if obj.is_callable() {
        let f: Py<PyAny> = obj.clone().unbind();
        let name = obj
            .getattr("__name__")
            .and_then(|n| n.extract::<String>())
            .unwrap_or_else(|_| "python".to_string());
        return Ok(InfluenceField::custom(name, move |p: &Point, a: &Point| {
            Python::attach(|py| {
                f.call1(py, (coords(p), coords(a)))
                    .and_then(|v| v.extract::<f64>(py))
                    .unwrap_or(f64::NAN)
            })
        }));
    }
    let s: f64 = obj.extract()?;
    InfluenceField::power(s).map_err(to_py)
}

/// Compact source set `K` carrying the extremization.
#[pyclass(name = "SourceSet", module = "barbilian", frozen)]
struct PySourceSet {
    inner: core::SourceSet,
}

#[pymethods]
impl PySourceSet {
    #[staticmethod]
    fn circle(center: Vec<f64>, radius: f64) -> PyResult<Self> {
        let inner = core::SourceSet::circle(point(center)?, radius).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn unit_circle() -> Self {
        Self {
            inner: core::SourceSet::unit_circle(),
        }
    }

    #[staticmethod]
    fn polygon(vertices: Vec<Vec<f64>>) -> PyResult<Self> {
        let vs = vertices.into_iter().map(point).collect::<PyResult<_>>()?;
        Ok(Self {
            inner: core::SourceSet::polygon(vs).map_err(to_py)?,
        })
    }

    /// Finite set of sites, in any dimension.
    #[staticmethod]
    fn points(sites: Vec<Vec<f64>>) -> PyResult<Self> {
        let ps = sites.into_iter().map(point).collect::<PyResult<_>>()?;
        Ok(Self {
            inner: core::SourceSet::finite(ps).map_err(to_py)?,
        })
    }

    /// The circle `{P : |PA| / |PB| = alpha}`.
    #[staticmethod]
    fn apollonius(a: Vec<f64>, b: Vec<f64>, alpha: f64) -> PyResult<Self> {
        let c = core::apollonius_circle(&point(a)?, &point(b)?, alpha).map_err(to_py)?;
        Ok(Self {
            inner: core::SourceSet::Circle(c),
        })
    }

    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    fn sample(&self, n: usize) -> PyResult<Vec<Vec<f64>>> {
        let s = core::sample(&self.inner, n).map_err(to_py)?;
        Ok(s.points.iter().map(coords).collect())
    }

    fn __repr__(&self) -> String {
        format!("SourceSet.{}", self.inner.describe())
    }
}

#[pyclass(name = "DistanceReport", module = "barbilian", frozen, get_all)]
struct PyDistanceReport {
    value: f64,
    degenerate: bool,
    max_ratio: f64,
    min_ratio: f64,
    argmax: Vec<f64>,
    argmin: Vec<f64>,
    samples_used: usize,
    refinement_converged: bool,
}

#[pymethods]
impl PyDistanceReport {
    fn __repr__(&self) -> String {
        format!(
            "DistanceReport(value={}, degenerate={}, max_ratio={}, min_ratio={})",
            self.value, self.degenerate, self.max_ratio, self.min_ratio
        )
    }

    fn __float__(&self) -> f64 {
        self.value
    }
}

impl From<core::DistanceReport> for PyDistanceReport {
    fn from(r: core::DistanceReport) -> Self {
        PyDistanceReport {
            value: r.value,
            degenerate: r.degenerate,
            max_ratio: r.extrema.max_ratio,
            min_ratio: r.extrema.min_ratio,
            argmax: coords(&r.extrema.argmax),
            argmin: coords(&r.extrema.argmin),
            samples_used: r.samples_used,
            refinement_converged: r.refinement_converged,
        }
    }
}

#[pyclass(name = "GeodesicPath", module = "barbilian", frozen, get_all)]
struct PyGeodesicPath {
    nodes: Vec<Vec<f64>>,
    length: f64,
    grid_resolution: usize,
}

#[pymethods]
impl PyGeodesicPath {
    fn __repr__(&self) -> String {
        format!(
            "GeodesicPath(length={}, nodes={}, grid_resolution={})",
            self.length,
            self.nodes.len(),
            self.grid_resolution
        )
    }
}

/// A source set, influence and extremization options, with cached samples.
#[pyclass(name = "Metric", module = "barbilian", frozen)]
struct PyMetric {
    inner: BarbilianMetric,
}

#[pymethods]
impl PyMetric {
    #[new]
    #[pyo3(signature = (
        source,
        influence = None,
        initial_samples = 256,
        parameter_tolerance = 1e-10,
        positivity_floor = 1e-9,
        degeneracy_tolerance = 1e-9,
    ))]
    fn new(
        source: &PySourceSet,
        influence: Option<&Bound<'_, PyAny>>,
        initial_samples: usize,
        parameter_tolerance: f64,
        positivity_floor: f64,
        degeneracy_tolerance: f64,
    ) -> PyResult<Self> {
        let opts = ExtremaOptions {
            initial_samples,
            parameter_tolerance,
            positivity_floor,
            degeneracy_tolerance,
        };
        let inner = BarbilianMetric::new(source.inner.clone(), self::influence(influence)?, opts)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    fn distance(&self, py: Python<'_>, a: Vec<f64>, b: Vec<f64>) -> PyResult<PyDistanceReport> {
        let (a, b) = (point(a)?, point(b)?);
        py.detach(|| self.inner.distance(&a, &b))
            .map(Into::into)
            .map_err(to_py)
    }

    fn distance_1934(&self, py: Python<'_>, a: Vec<f64>, b: Vec<f64>) -> PyResult<PyDistanceReport> {
        let (a, b) = (point(a)?, point(b)?);
        py.detach(|| self.inner.distance_1934(&a, &b))
            .map(Into::into)
            .map_err(to_py)
    }

    /// `(M, m, argmax, argmin)`.
    fn ratio_extrema(
        &self,
        py: Python<'_>,
        a: Vec<f64>,
        b: Vec<f64>,
    ) -> PyResult<(f64, f64, Vec<f64>, Vec<f64>)> {
        let (a, b) = (point(a)?, point(b)?);
        let e = py.detach(|| self.inner.ratio_extrema(&a, &b)).map_err(to_py)?;
        Ok((e.max_ratio, e.min_ratio, coords(&e.argmax), coords(&e.argmin)))
    }

    #[pyo3(signature = (a, b, tol = 1e-9))]
    fn is_degenerate(&self, py: Python<'_>, a: Vec<f64>, b: Vec<f64>, tol: f64) -> PyResult<bool> {
        let (a, b) = (point(a)?, point(b)?);
        py.detach(|| self.inner.is_degenerate(&a, &b, tol)).map_err(to_py)
    }

    #[pyo3(signature = (points, tol = 1e-9))]
    fn verify_weak_distance<'py>(
        &self,
        py: Python<'py>,
        points: Vec<Vec<f64>>,
        tol: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let pts = points.into_iter().map(point).collect::<PyResult<Vec<_>>>()?;
        let r = py
            .detach(|| core::axioms::verify_weak_distance(&self.inner, &pts, tol))
            .map_err(to_py)?;
        axiom_dict(py, &r)
    }

    #[pyo3(signature = (a, b, resolution = 128))]
    fn geodesic(&self, py: Python<'_>, a: Vec<f64>, b: Vec<f64>, resolution: usize) -> PyResult<PyGeodesicPath> {
        let (a, b) = (point(a)?, point(b)?);
        let path = py
            .detach(|| GeodesicGrid::new(self.inner.clone(), resolution)?.shortest_path(&a, &b))
            .map_err(to_py)?;
        Ok(PyGeodesicPath {
            nodes: path.nodes.iter().map(coords).collect(),
            length: path.length,
            grid_resolution: path.grid_resolution,
        })
    }
}

fn axiom_dict<'py>(py: Python<'py>, r: &core::axioms::AxiomReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("passed", r.passed())?;
    d.set_item(
        "identity_failures",
        r.identity_failures.iter().map(|f| (coords(&f.a), f.value)).collect::<Vec<_>>(),
    )?;
    d.set_item(
        "symmetry_violations",
        r.symmetry_violations
            .iter()
            .map(|v| (coords(&v.a), coords(&v.b), v.deviation))
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "triangle_violations",
        r.triangle_violations
            .iter()
            .map(|v| (coords(&v.a), coords(&v.b), coords(&v.c), v.deficit))
            .collect::<Vec<_>>(),
    )?;
    d.set_item(
        "degeneracies",
        r.degeneracies_found
            .iter()
            .map(|g| (coords(&g.a), coords(&g.b), g.value))
            .collect::<Vec<_>>(),
    )?;
    d.set_item("max_deviation", r.max_deviation)?;
    d.set_item("pairs_checked", r.pairs_checked)?;
    d.set_item("triples_checked", r.triples_checked)?;
    d.set_item("triangle_checked", r.triangle_checked)?;
    Ok(d)
}

fn metric(source: &PySourceSet, influence: Option<&Bound<'_, PyAny>>, samples: usize) -> PyResult<BarbilianMetric> {
    let opts = ExtremaOptions {
        initial_samples: samples,
        ..ExtremaOptions::default()
    };
    BarbilianMetric::new(source.inner.clone(), self::influence(influence)?, opts).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (source, a, b, influence = None, initial_samples = 256))]
fn barbilian_distance(
    py: Python<'_>,
    source: &PySourceSet,
    a: Vec<f64>,
    b: Vec<f64>,
    influence: Option<&Bound<'_, PyAny>>,
    initial_samples: usize,
) -> PyResult<PyDistanceReport> {
    PyMetric {
        inner: metric(source, influence, initial_samples)?,
    }
    .distance(py, a, b)
}

#[pyfunction]
#[pyo3(signature = (source, a, b, influence = None, initial_samples = 256))]
fn distance_1934(
    py: Python<'_>,
    source: &PySourceSet,
    a: Vec<f64>,
    b: Vec<f64>,
    influence: Option<&Bound<'_, PyAny>>,
    initial_samples: usize,
) -> PyResult<PyDistanceReport> {
    PyMetric {
        inner: metric(source, influence, initial_samples)?,
    }
    .distance_1934(py, a, b)
}

#[pyfunction]
#[pyo3(signature = (source, a, b, influence = None))]
fn ratio_extrema(
    py: Python<'_>,
    source: &PySourceSet,
    a: Vec<f64>,
    b: Vec<f64>,
    influence: Option<&Bound<'_, PyAny>>,
) -> PyResult<(f64, f64, Vec<f64>, Vec<f64>)> {
    PyMetric {
        inner: metric(source, influence, 256)?,
    }
    .ratio_extrema(py, a, b)
}

#[pyfunction]
#[pyo3(signature = (source, a, b, tol = 1e-9, influence = None))]
fn is_degenerate(
    py: Python<'_>,
    source: &PySourceSet,
    a: Vec<f64>,
    b: Vec<f64>,
    tol: f64,
    influence: Option<&Bound<'_, PyAny>>,
) -> PyResult<bool> {
    PyMetric {
        inner: metric(source, influence, 256)?,
    }
    .is_degenerate(py, a, b, tol)
}

/// `(center, radius)` of the circle `{P : |PA| / |PB| = alpha}`.
#[pyfunction]
fn apollonius_circle(a: Vec<f64>, b: Vec<f64>, alpha: f64) -> PyResult<(Vec<f64>, f64)> {
    let c = core::apollonius_circle(&point(a)?, &point(b)?, alpha).map_err(to_py)?;
    Ok((coords(c.center()), c.radius()))
}

#[pyfunction]
fn poincare_disk_distance(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    let a = DiskPoint::new(point(a)?).map_err(to_py)?;
    let b = DiskPoint::new(point(b)?).map_err(to_py)?;
    Ok(core::poincare_disk_distance(&a, &b))
}

#[pyfunction]
#[pyo3(signature = (source, points, tol = 1e-9, influence = None))]
fn verify_weak_distance<'py>(
    py: Python<'py>,
    source: &PySourceSet,
    points: Vec<Vec<f64>>,
    tol: f64,
    influence: Option<&Bound<'_, PyAny>>,
) -> PyResult<Bound<'py, PyDict>> {
    PyMetric {
        inner: metric(source, influence, 256)?,
    }
    .verify_weak_distance(py, points, tol)
}

#[pyfunction]
#[pyo3(signature = (source, a, b, resolution = 128, influence = None))]
fn approximate_geodesic(
    py: Python<'_>,
    source: &PySourceSet,
    a: Vec<f64>,
    b: Vec<f64>,
    resolution: usize,
    influence: Option<&Bound<'_, PyAny>>,
) -> PyResult<PyGeodesicPath> {
    PyMetric {
        inner: metric(source, influence, 256)?,
    }
    .geodesic(py, a, b, resolution)
}

#[pymodule]
fn barbilian(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BarbilianError", m.py().get_type::<BarbilianError>())?;
    m.add("AdmissibilityError", m.py().get_type::<AdmissibilityError>())?;
    m.add_class::<PySourceSet>()?;
    m.add_class::<PyMetric>()?;
    m.add_class::<PyDistanceReport>()?;
    m.add_class::<PyGeodesicPath>()?;
    m.add_function(wrap_pyfunction!(barbilian_distance, m)?)?;
    m.add_function(wrap_pyfunction!(distance_1934, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_extrema, m)?)?;
    m.add_function(wrap_pyfunction!(is_degenerate, m)?)?;
    m.add_function(wrap_pyfunction!(apollonius_circle, m)?)?;
    m.add_function(wrap_pyfunction!(poincare_disk_distance, m)?)?;
    m.add_function(wrap_pyfunction!(verify_weak_distance, m)?)?;
    m.add_function(wrap_pyfunction!(approximate_geodesic, m)?)?;
    Ok(())
}

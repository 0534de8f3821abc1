//! Python bindings. Rationals cross the boundary as `fractions.Fraction`
//! (ints and `"p/q"` strings are accepted on input); arrangement rows use the
//! text form `a1,...,ad,b`.

use flatspan::constructions as cons;
use flatspan::kernel::{format_rational, parse_rational};
use flatspan::{Error, Rational};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;
use serde::Serialize;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) | Error::GeneratorExhausted { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational_arg(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&obj.str()?.to_cow()?).map_err(to_py_err)
}

fn point_arg(obj: &Bound<'_, PyAny>) -> PyResult<flatspan::Point> {
    let coords = obj
        .try_iter()?
        .map(|x| rational_arg(&x?))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(flatspan::Point::new(coords))
}

fn points_arg(obj: &Bound<'_, PyAny>) -> PyResult<Vec<flatspan::Point>> {
    obj.try_iter()?.map(|p| point_arg(&p?)).collect()
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_rational(r),))
}

fn point_out<'py>(py: Python<'py>, p: &flatspan::Point) -> PyResult<Bound<'py, PyList>> {
    let items = p
        .coords()
        .iter()
        .map(|x| fraction(py, x))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Any serializable value as plain Python data, through JSON.
fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Flat", module = "pyflatspan", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFlat(flatspan::Flat);

#[pymethods]
impl PyFlat {
    /// Canonical flat `{x : a·x = b}` from rows `[a1, ..., ad, b]`.
    #[staticmethod]
    fn from_constraints(d: usize, rows: &Bound<'_, PyAny>) -> PyResult<Self> {
        let rows = rows
            .try_iter()?
            .map(|row| -> PyResult<Vec<Rational>> {
                let row = row?;
                if let Ok(text) = row.extract::<String>() {
                    return text
                        .split(',')
                        .map(|t| parse_rational(t).map_err(to_py_err))
                        .collect();
                }
                row.try_iter()?.map(|x| rational_arg(&x?)).collect()
            })
            .collect::<PyResult<Vec<_>>>()?;
        flatspan::Flat::from_constraints(d, rows)
            .map(PyFlat)
            .map_err(to_py_err)
    }

    #[staticmethod]
    fn hyperplane(normal: &Bound<'_, PyAny>, offset: &Bound<'_, PyAny>) -> PyResult<Self> {
        let normal = point_arg(normal)?.into_coords();
        flatspan::Flat::hyperplane(normal, rational_arg(offset)?)
            .map(PyFlat)
            .map_err(to_py_err)
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn is_hyperplane(&self) -> bool {
        self.0.is_hyperplane()
    }

    fn constraints(&self) -> Vec<String> {
        self.0.constraint_strings()
    }

    fn contains(&self, point: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.0.contains(&point_arg(point)?).map_err(to_py_err)
    }

    fn contains_flat(&self, other: &PyFlat) -> PyResult<bool> {
        self.0.contains_flat(&other.0).map_err(to_py_err)
    }

    fn meet(&self, other: &PyFlat) -> PyResult<Option<PyFlat>> {
        self.0
            .meet(&other.0)
            .map(|m| m.map(PyFlat))
            .map_err(to_py_err)
    }

    fn __eq__(&self, other: &PyFlat) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!(
            "Flat(dim={}, constraints={:?})",
            self.0.dim(),
            self.0.constraint_strings()
        )
    }
}

#[pyclass(name = "BiArrangement", module = "pyflatspan", frozen)]
struct PyBiArrangement(flatspan::BiArrangement);

#[pymethods]
impl PyBiArrangement {
    #[new]
    fn new(
        d: usize,
        red: Vec<PyRef<'_, PyFlat>>,
        blue: Vec<PyRef<'_, PyFlat>>,
        vertices: &Bound<'_, PyAny>,
    ) -> PyResult<Self> {
        let red = red.iter().map(|f| f.0.clone()).collect();
        let blue = blue.iter().map(|f| f.0.clone()).collect();
        flatspan::BiArrangement::new(d, red, blue, points_arg(vertices)?)
            .map(PyBiArrangement)
            .map_err(to_py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: flatspan::incidence::BiArrangementFile =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        flatspan::BiArrangement::from_file(&file)
            .map(PyBiArrangement)
            .map_err(to_py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_file()).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn red(&self) -> Vec<PyFlat> {
        self.0.red().iter().cloned().map(PyFlat).collect()
    }

    fn blue(&self) -> Vec<PyFlat> {
        self.0.blue().iter().cloned().map(PyFlat).collect()
    }

    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyList>>> {
        self.0.vertices().iter().map(|p| point_out(py, p)).collect()
    }

    /// `{red_incidences, total_incidences, per_point_red_degree, red_incident_vertex_count}`
    fn count_bichromatic<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = flatspan::count_bichromatic(&self.0).map_err(to_py_err)?;
        to_python(py, &report)
    }

    fn validate_vertices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &flatspan::validate_vertices(&self.0))
    }

    fn __repr__(&self) -> String {
        format!(
            "BiArrangement(d={}, k={}, n={}, m={})",
            self.0.d(),
            self.0.k(),
            self.0.n(),
            self.0.m()
        )
    }
}

#[pyfunction]
fn affine_hull(points: &Bound<'_, PyAny>) -> PyResult<PyFlat> {
    flatspan::affine_hull(&points_arg(points)?)
        .map(PyFlat)
        .map_err(to_py_err)
}

/// List of `(Flat, point_indices)` pairs, sorted by point indices.
#[pyfunction]
fn spanned_flats(points: &Bound<'_, PyAny>, f: usize) -> PyResult<Vec<(PyFlat, Vec<usize>)>> {
    let set = flatspan::spanned_flats(&points_arg(points)?, f).map_err(to_py_err)?;
    Ok(set
        .flats
        .into_iter()
        .map(|s| (PyFlat(s.flat), s.point_indices))
        .collect())
}

#[pyfunction]
fn spanned_hyperplane_count(points: &Bound<'_, PyAny>) -> PyResult<usize> {
    flatspan::spans::spanned_hyperplane_count(&points_arg(points)?).map_err(to_py_err)
}

#[pyfunction]
fn spanned_codim2_count(points: &Bound<'_, PyAny>) -> PyResult<usize> {
    flatspan::spans::spanned_codim2_count(&points_arg(points)?).map_err(to_py_err)
}

#[pyfunction]
fn arrangement_vertices<'py>(
    py: Python<'py>,
    hyperplanes: Vec<PyRef<'_, PyFlat>>,
) -> PyResult<Vec<Bound<'py, PyList>>> {
    let hs: Vec<flatspan::Flat> = hyperplanes.iter().map(|h| h.0.clone()).collect();
    flatspan::arrangement_vertices(&hs)
        .map_err(to_py_err)?
        .iter()
        .map(|p| point_out(py, p))
        .collect()
}

#[pyfunction]
fn is_r_degenerate(points: &Bound<'_, PyAny>, r: usize) -> PyResult<bool> {
    flatspan::spans::is_r_degenerate(&points_arg(points)?, r)
        .map(|(deg, _)| deg)
        .map_err(to_py_err)
}

#[pyfunction]
fn max_collinear(points: &Bound<'_, PyAny>) -> PyResult<usize> {
    flatspan::spans::max_collinear(&points_arg(points)?).map_err(to_py_err)
}

#[pyfunction]
fn bound_envelope<'py>(
    py: Python<'py>,
    m: u64,
    k: u64,
    n: u64,
    d: usize,
) -> PyResult<Bound<'py, PyAny>> {
    to_python(
        py,
        &flatspan::bound_envelope(m, k, n, d).map_err(to_py_err)?,
    )
}

#[pyfunction]
fn purdy_counts<'py>(py: Python<'py>, d: usize, k: usize) -> PyResult<Bound<'py, PyAny>> {
    to_python(
        py,
        &flatspan::formulas::purdy_counts(d, k).map_err(to_py_err)?,
    )
}

/// Points of the covering-lines configuration, line-major.
#[pyfunction]
#[pyo3(signature = (d, k, seed = 0))]
fn purdy_counterexample<'py>(
    py: Python<'py>,
    d: usize,
    k: usize,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyList>>> {
    let c = cons::purdy_counterexample(d, k, seed).map_err(to_py_err)?;
    c.points.iter().map(|p| point_out(py, p)).collect()
}

#[pyfunction]
fn erdos_grid_2d(r: u32, s: u32) -> PyResult<PyBiArrangement> {
    let g = cons::erdos_grid_2d(r, s).map_err(to_py_err)?;
    Ok(PyBiArrangement(g.to_arrangement()))
}

#[pyfunction]
#[pyo3(signature = (d, n, k, m, c0 = 1))]
fn bichromatic_lower_construction(
    d: usize,
    n: usize,
    k: usize,
    m: u64,
    c0: u64,
) -> PyResult<PyBiArrangement> {
    let c = cons::bichromatic_lower_construction(&cons::BichromaticParams { d, n, k, m, c0 })
        .map_err(to_py_err)?;
    Ok(PyBiArrangement(c.arrangement))
}

#[pyfunction]
fn theta_mk_construction(d: usize, n: usize, k: usize, m: u64) -> PyResult<PyBiArrangement> {
    let c = cons::theta_mk_construction(d, n, k, m).map_err(to_py_err)?;
    Ok(PyBiArrangement(c.arrangement))
}

#[pyfunction]
fn pigeonhole_check(
    allocation: Vec<u64>,
    c: &Bound<'_, PyAny>,
    a: &Bound<'_, PyAny>,
) -> PyResult<bool> {
    flatspan::formulas::pigeonhole_check(&allocation, &rational_arg(c)?, &rational_arg(a)?)
        .map_err(to_py_err)
}

/// Least squares of log(count) on log(x): `{slope, intercept, r_squared, points_used}`.
#[pyfunction]
fn fit_loglog<'py>(py: Python<'py>, series: Vec<(f64, f64)>) -> PyResult<Bound<'py, PyAny>> {
    to_python(py, &flatspan::fit::fit_loglog(&series).map_err(to_py_err)?)
}

#[pyfunction]
#[pyo3(signature = (ds, ks, seed = 0))]
fn verify_purdy<'py>(
    py: Python<'py>,
    ds: Vec<usize>,
    ks: Vec<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    to_python(
        py,
        &flatspan::experiments::verify_purdy(&ds, &ks, seed).map_err(to_py_err)?,
    )
}

#[pymodule]
fn pyflatspan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFlat>()?;
    m.add_class::<PyBiArrangement>()?;
    m.add_function(wrap_pyfunction!(affine_hull, m)?)?;
    m.add_function(wrap_pyfunction!(spanned_flats, m)?)?;
    m.add_function(wrap_pyfunction!(spanned_hyperplane_count, m)?)?;
    m.add_function(wrap_pyfunction!(spanned_codim2_count, m)?)?;
    m.add_function(wrap_pyfunction!(arrangement_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(is_r_degenerate, m)?)?;
    m.add_function(wrap_pyfunction!(max_collinear, m)?)?;
    m.add_function(wrap_pyfunction!(bound_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(purdy_counts, m)?)?;
    m.add_function(wrap_pyfunction!(purdy_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_grid_2d, m)?)?;
    m.add_function(wrap_pyfunction!(bichromatic_lower_construction, m)?)?;
    m.add_function(wrap_pyfunction!(theta_mk_construction, m)?)?;
    m.add_function(wrap_pyfunction!(pigeonhole_check, m)?)?;
    m.add_function(wrap_pyfunction!(fit_loglog, m)?)?;
    m.add_function(wrap_pyfunction!(verify_purdy, m)?)?;
    Ok(())
}

//! Python bindings. Scalars cross the boundary as strings (`"3/2"`, `"4"`),
//! matrices as lists of rows.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use usym_core::endo::{automorphism_group, brute_force_homs, enumerate_endomorphisms, enumerate_homs};
use usym_core::gradings::{self, GradingPoint};
use usym_core::io::{parse_algebra, parse_group};
use usym_core::universal::{build_presentation, check_bialgebra, check_comodule, Presentation as CorePresentation, DEFAULT_DEGREE};
use usym_core::{Error, Field, FinAlgebra, FiniteGroup, Matrix, NCPoly, Scalar};

create_exception!(usym, UsymError, PyException);

fn err(e: Error) -> PyErr {
    UsymError::new_err(e.to_string())
}

fn parse_field(s: &str) -> PyResult<Field> {
    s.parse().map_err(err)
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

fn scalars(field: Field, v: &[String]) -> PyResult<Vec<Scalar>> {
    v.iter().map(|s| field.parse(s).map_err(err)).collect()
}

#[pyclass(name = "Algebra", module = "usym", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAlgebra(FinAlgebra);

#[pymethods]
impl PyAlgebra {
    /// Parses the JSON algebra format, optionally reading it over another field.
    #[staticmethod]
    #[pyo3(signature = (text, field=None))]
    fn from_json(text: &str, field: Option<&str>) -> PyResult<Self> {
        let field = field.map(parse_field).transpose()?;
        parse_algebra(text, field).map(PyAlgebra).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (field="Q"))]
    fn base_field(field: &str) -> PyResult<Self> {
        Ok(PyAlgebra(FinAlgebra::base_field(parse_field(field)?)))
    }

    #[staticmethod]
    #[pyo3(signature = (field="Q"))]
    fn dual_numbers(field: &str) -> PyResult<Self> {
        Ok(PyAlgebra(FinAlgebra::dual_numbers(parse_field(field)?)))
    }

    #[staticmethod]
    #[pyo3(signature = (field="Q"))]
    fn triangular(field: &str) -> PyResult<Self> {
        Ok(PyAlgebra(FinAlgebra::triangular(parse_field(field)?)))
    }

    /// The same structure constants read in another field.
    fn over(&self, field: &str) -> PyResult<Self> {
        self.0.over(parse_field(field)?).map(PyAlgebra).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.0.field().to_string()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn multiply(&self, x: Vec<String>, y: Vec<String>) -> PyResult<Vec<String>> {
        let f = self.0.field();
        let (x, y) = (scalars(f, &x)?, scalars(f, &y)?);
        if x.len() != self.0.dim() || y.len() != self.0.dim() {
            return Err(UsymError::new_err(format!("expected vectors of length {}", self.0.dim())));
        }
        Ok(strings(&self.0.multiply(&x, &y)))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&usym_core::io::AlgebraFile::from_algebra(&self.0)).expect("serializable")
    }

    fn __repr__(&self) -> String {
        format!("Algebra(dim={}, field={})", self.0.dim(), self.0.field())
    }
}

#[pyclass(name = "Group", module = "usym", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroup(FiniteGroup);

#[pymethods]
impl PyGroup {
    #[staticmethod]
    fn cyclic(m: usize) -> PyResult<Self> {
        FiniteGroup::cyclic(m).map(PyGroup).map_err(err)
    }

    #[staticmethod]
    fn klein_four() -> Self {
        PyGroup(FiniteGroup::klein_four())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_group(text).map(PyGroup).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.0.order())
    }
}

#[pyclass(name = "Presentation", module = "usym", frozen)]
struct PyPresentation(CorePresentation);

#[pymethods]
impl PyPresentation {
    /// Surviving generators after linear elimination.
    #[getter]
    fn generators(&self) -> Vec<String> {
        self.0.survivors().iter().map(ToString::to_string).collect()
    }

    /// `(generator, value)` pairs removed by elimination.
    #[getter]
    fn eliminated(&self) -> Vec<(String, String)> {
        self.0.eliminated().iter().map(|(g, p)| (g.to_string(), p.to_string())).collect()
    }

    /// Rewrite rules as `(lhs, rhs)` strings.
    #[getter]
    fn rules(&self) -> Vec<(String, String)> {
        self.0.rules().map(|r| (r.lhs.to_string(), r.rhs.to_string())).collect()
    }

    /// Comultiplication of a polynomial in the generators.
    fn delta(&self, poly: &str) -> PyResult<String> {
        Ok(self.0.delta_hat(&self.parse(poly)?).to_string())
    }

    fn epsilon(&self, poly: &str) -> PyResult<String> {
        Ok(self.0.eps_hat(&self.parse(poly)?).to_string())
    }

    fn normal_form(&self, poly: &str) -> PyResult<String> {
        Ok(self.0.normal_form(&self.parse(poly)?).to_string())
    }

    /// Runs the bialgebra and comodule-algebra checks; returns `(name, passed)` pairs.
    #[pyo3(signature = (degree=DEFAULT_DEGREE))]
    fn check(&self, degree: usize) -> Vec<(String, bool)> {
        let mut report = check_bialgebra(&self.0, degree);
        report.extend(check_comodule(&self.0, degree));
        report.entries.iter().map(|e| (e.name.clone(), e.passed)).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

impl PyPresentation {
    fn parse(&self, poly: &str) -> PyResult<NCPoly> {
        NCPoly::parse(self.0.field(), poly).map_err(err)
    }
}

#[pyclass(name = "GradingPoint", module = "usym", frozen)]
struct PyGradingPoint {
    point: GradingPoint,
    algebra: FinAlgebra,
    group: FiniteGroup,
}

#[pymethods]
impl PyGradingPoint {
    /// Idempotents indexed by group element.
    #[getter]
    fn components(&self) -> Vec<Vec<Vec<String>>> {
        self.point.components().iter().map(rows).collect()
    }

    /// Homogeneous components as `{label: basis vectors}`, zero components omitted.
    fn grading(&self) -> std::collections::BTreeMap<String, Vec<Vec<String>>> {
        gradings::grading_from_point(&self.algebra, &self.group, &self.point)
            .components()
            .iter()
            .map(|(&s, v)| (self.group.label(s).to_string(), v.basis().iter().map(|b| strings(b)).collect()))
            .collect()
    }

    fn __str__(&self) -> String {
        self.point.to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (algebra, max_degree=DEFAULT_DEGREE))]
fn present(algebra: &PyAlgebra, max_degree: usize) -> PyResult<PyPresentation> {
    build_presentation(&algebra.0, max_degree).map(PyPresentation).map_err(err)
}

/// Unit-preserving endomorphisms over a prime field, as matrices.
#[pyfunction]
fn endomorphisms(algebra: &PyAlgebra) -> PyResult<Vec<Vec<Vec<String>>>> {
    let m = enumerate_endomorphisms(&algebra.0).map_err(err)?;
    Ok(m.points().iter().map(|p| rows(p.matrix())).collect())
}

#[pyfunction]
fn automorphisms(algebra: &PyAlgebra) -> PyResult<Vec<Vec<Vec<String>>>> {
    let g = automorphism_group(&algebra.0).map_err(err)?;
    if !g.verified() {
        return Err(UsymError::new_err("automorphisms failed the group axioms"));
    }
    Ok(g.group.points().iter().map(|p| rows(p.matrix())).collect())
}

/// Algebra maps `source → target`; `brute_force` checks every matrix instead.
#[pyfunction]
#[pyo3(signature = (source, target, brute_force=false))]
fn homomorphisms(source: &PyAlgebra, target: &PyAlgebra, brute_force: bool) -> PyResult<Vec<Vec<Vec<String>>>> {
    let homs = if brute_force {
        brute_force_homs(&source.0, &target.0)
    } else {
        enumerate_homs(&source.0, &target.0)
    }
    .map_err(err)?;
    Ok(homs.iter().map(rows).collect())
}

#[pyfunction]
fn grading_points(algebra: &PyAlgebra, group: &PyGroup) -> PyResult<Vec<PyGradingPoint>> {
    let points = gradings::enumerate_points(&algebra.0, &group.0).map_err(err)?;
    Ok(points
        .into_iter()
        .map(|point| PyGradingPoint { point, algebra: algebra.0.clone(), group: group.0.clone() })
        .collect())
}

/// Gradings found by the subspace search, rendered one per string.
#[pyfunction]
fn gradings_oracle(algebra: &PyAlgebra, group: &PyGroup) -> PyResult<Vec<String>> {
    let found = gradings::enumerate_gradings_oracle(&algebra.0, &group.0).map_err(err)?;
    Ok(found.iter().map(|g| g.render(&group.0)).collect())
}

/// Conjugation orbits of grading points, as lists of point indices.
#[pyfunction]
fn classify(algebra: &PyAlgebra, group: &PyGroup) -> PyResult<Vec<Vec<usize>>> {
    let c = gradings::classify(&algebra.0, &group.0).map_err(err)?;
    if !c.consistent() {
        return Err(UsymError::new_err("point orbits and grading classes disagree"));
    }
    Ok(c.point_orbits)
}

/// Runs the command-line tool in-process; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let out = usym_cli::run(std::iter::once("usym".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn usym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UsymError", m.py().get_type::<UsymError>())?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyPresentation>()?;
    m.add_class::<PyGradingPoint>()?;
    m.add_function(wrap_pyfunction!(present, m)?)?;
    m.add_function(wrap_pyfunction!(endomorphisms, m)?)?;
    m.add_function(wrap_pyfunction!(automorphisms, m)?)?;
    m.add_function(wrap_pyfunction!(homomorphisms, m)?)?;
    m.add_function(wrap_pyfunction!(grading_points, m)?)?;
    m.add_function(wrap_pyfunction!(gradings_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}

//! Python bindings. Field elements cross the boundary as their integer indices.

use std::collections::BTreeMap;

use hermcodes::codes::{self, FunctionalCode, Mode};
use hermcodes::experiments::load_variety;
use hermcodes::forms::{self, HermitianForm, QuadraticForm, VarietyClass};
use hermcodes::intersect::{self, ScanOptions};
use hermcodes::{Elem, Space};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: hermcodes::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn elems(field: &hermcodes::Field, v: &[u32]) -> PyResult<Vec<Elem>> {
    v.iter()
        .map(|&x| {
            if x < field.order() {
                Ok(Elem(x as u16))
            } else {
                Err(PyValueError::new_err(format!("{x} is not an element of GF({})", field.order())))
            }
        })
        .collect()
}

fn ints(v: &[Elem]) -> Vec<u32> {
    v.iter().map(|e| e.0 as u32).collect()
}

fn mode(name: &str, samples: u64, seed: u64) -> PyResult<Mode> {
    match name {
        "exhaustive" => Ok(Mode::Exhaustive),
        "sampled" => Ok(Mode::Sampled { samples, seed }),
        _ => Err(PyValueError::new_err(format!("unknown mode {name:?}"))),
    }
}

/// GF(q) with elements numbered `0..q`.
#[pyclass(frozen)]
struct Field(hermcodes::Field);

#[pymethods]
impl Field {
    #[new]
    fn new(q: u32) -> PyResult<Self> {
        hermcodes::Field::with_order(q).map(Field).map_err(err)
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        let v = elems(&self.0, &[a, b])?;
        Ok(self.0.add(v[0], v[1]).0 as u32)
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        let v = elems(&self.0, &[a, b])?;
        Ok(self.0.mul(v[0], v[1]).0 as u32)
    }

    fn inv(&self, a: u32) -> PyResult<Option<u32>> {
        let v = elems(&self.0, &[a])?;
        Ok(self.0.inv(v[0]).map(|e| e.0 as u32))
    }

    fn pow(&self, a: u32, k: u64) -> PyResult<u32> {
        let v = elems(&self.0, &[a])?;
        Ok(self.0.pow(v[0], k).0 as u32)
    }

    /// `a^t` in GF(t^2).
    fn conjugate(&self, a: u32) -> PyResult<u32> {
        let v = elems(&self.0, &[a])?;
        self.0.conjugate(v[0]).map(|e| e.0 as u32).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.0.order())
    }
}

/// Result of classifying a form.
#[pyclass(frozen, get_all)]
struct Classification {
    kind: String,
    n: usize,
    rank: usize,
    vertex_dim: isize,
    projective_index: isize,
    quadric_type: Option<String>,
    label: String,
    predicted_points: u64,
}

impl From<VarietyClass> for Classification {
    fn from(c: VarietyClass) -> Self {
        Classification {
            kind: format!("{:?}", c.kind).to_lowercase(),
            n: c.n,
            rank: c.rank,
            vertex_dim: c.vertex_dim,
            projective_index: c.projective_index,
            quadric_type: c.quadric_type.map(|t| t.to_string()),
            label: c.label,
            predicted_points: c.predicted_points,
        }
    }
}

#[pymethods]
impl Classification {
    fn __repr__(&self) -> String {
        format!("Classification({:?}, rank={}, points={})", self.label, self.rank, self.predicted_points)
    }
}

/// A quadratic or hermitian form on PG(n, q).
#[pyclass(frozen)]
struct Form {
    space: Space,
    form: forms::Form,
}

#[pymethods]
impl Form {
    /// Coefficients of `x_i x_j` for `i <= j`, row-major over the upper triangle.
    #[staticmethod]
    fn quadric(n: usize, q: u32, coeffs: Vec<u32>) -> PyResult<Self> {
        let field = hermcodes::Field::with_order(q).map_err(err)?;
        let c = elems(&field, &coeffs)?;
        let form = forms::Form::Quadric(QuadraticForm::new(n, c).map_err(err)?);
        let space = Space::new(n, field).map_err(err)?;
        Ok(Form { space, form })
    }

    /// Row-major `(n+1) x (n+1)` hermitian matrix over GF(q), q a square.
    #[staticmethod]
    fn hermitian(n: usize, q: u32, matrix: Vec<u32>) -> PyResult<Self> {
        let field = hermcodes::Field::with_order(q).map_err(err)?;
        let h = elems(&field, &matrix)?;
        let form = forms::Form::Hermitian(HermitianForm::new(&field, n, h).map_err(err)?);
        let space = Space::new(n, field).map_err(err)?;
        Ok(Form { space, form })
    }

    /// A named variety such as `"parabolic4"` or `"hermitian3"`.
    #[staticmethod]
    fn preset(name: &str, q: u32) -> PyResult<Self> {
        let (space, v) = load_variety(name, q).map_err(err)?;
        let form = v
            .form()
            .cloned()
            .ok_or_else(|| PyValueError::new_err(format!("{name} is not defined by a form")))?;
        Ok(Form { space, form })
    }

    #[getter]
    fn n(&self) -> usize {
        self.space.dim()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.space.q()
    }

    fn eval(&self, x: Vec<u32>) -> PyResult<u32> {
        if x.len() != self.space.dim() + 1 {
            return Err(PyValueError::new_err("point has the wrong length"));
        }
        let v = elems(self.space.field(), &x)?;
        Ok(self.form.eval(self.space.field(), &v).0 as u32)
    }

    fn rank(&self) -> usize {
        self.form.rank(self.space.field())
    }

    fn classify(&self) -> PyResult<Classification> {
        forms::classify(&self.space, &self.form).map(Into::into).map_err(err)
    }

    /// Canonical coordinates of every point of the variety.
    fn points(&self) -> PyResult<Vec<Vec<u32>>> {
        let pts = forms::variety_points(&self.space, &self.form).map_err(err)?;
        Ok(pts.iter().map(|i| ints(self.space.point(i))).collect())
    }

    fn num_points(&self) -> PyResult<usize> {
        forms::variety_points(&self.space, &self.form).map(|p| p.len()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Form(PG({}, {}): {})", self.space.dim(), self.space.q(), self.form)
    }
}

fn same_space(a: &Form, b: &Form) -> PyResult<()> {
    if a.space.dim() != b.space.dim() || a.space.q() != b.space.q() {
        return Err(PyValueError::new_err("forms live in different spaces"));
    }
    Ok(())
}

/// `|X ∩ Q|` with the pair order and the bound that applies to `X`.
#[pyfunction]
fn intersection_count(x: &Form, q: &Form) -> PyResult<BTreeMap<&'static str, Py<PyAny>>> {
    same_space(x, q)?;
    let r = intersect::intersection_count(&x.space, &x.form, &q.form).map_err(err)?;
    Python::attach(|py| {
        let mut out = BTreeMap::new();
        out.insert("count", r.count.into_pyobject(py)?.into_any().unbind());
        out.insert("order", r.order_w.into_pyobject(py)?.into_any().unbind());
        out.insert("lines", r.lines.len().into_pyobject(py)?.into_any().unbind());
        out.insert("bound_name", r.bound_checked.into_pyobject(py)?.into_any().unbind());
        out.insert("bound", r.bound.into_pyobject(py)?.into_any().unbind());
        out.insert("attained", r.attained.into_pyobject(py)?.to_owned().into_any().unbind());
        Ok(out)
    })
}

/// Number of variables the pencil spanned by the two forms genuinely depends on.
#[pyfunction]
fn pair_order(a: &Form, b: &Form) -> PyResult<usize> {
    same_space(a, b)?;
    Ok(intersect::pair_order(a.space.field(), &a.form, &b.form))
}

/// Histogram `{|X ∩ Z(f)|: number of projective quadrics f}`.
#[pyfunction]
#[pyo3(signature = (x, mode="exhaustive", samples=100_000, seed=1))]
fn scan_quadrics(x: &Form, mode: &str, samples: u64, seed: u64) -> PyResult<BTreeMap<usize, u64>> {
    let m = self::mode(mode, samples, seed)?;
    let r = intersect::max_intersection_scan(&x.space, &x.form, m, &ScanOptions::default()).map_err(err)?;
    Ok(r.histogram)
}

#[pyfunction]
fn serre_sorensen_bound(h: u32, m: u32, q: u32) -> PyResult<u64> {
    codes::serre_sorensen_bound(h, m, q).map_err(err)
}

/// The evaluation code of degree-`h` forms on the points of a variety.
#[pyclass(frozen)]
struct Code(FunctionalCode);

#[pymethods]
impl Code {
    #[new]
    #[pyo3(signature = (x, h=2))]
    fn new(x: &Form, h: u32) -> PyResult<Self> {
        codes::build_code(&x.space, &x.form, h).map(Code).map_err(err)
    }

    #[getter]
    fn length(&self) -> usize {
        self.0.length()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    #[getter]
    fn kernel_dim(&self) -> usize {
        self.0.kernel_dim()
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        if message.len() != self.0.dimension() {
            return Err(PyValueError::new_err("message length must equal the dimension"));
        }
        let m = elems(self.0.field(), &message)?;
        Ok(ints(&self.0.encode(&m)))
    }

    /// `{weight: multiplicity}` over nonzero codewords; sampled counts are not exact.
    #[pyo3(signature = (mode="exhaustive", samples=100_000, seed=1))]
    fn spectrum(&self, py: Python<'_>, mode: &str, samples: u64, seed: u64) -> PyResult<BTreeMap<usize, u64>> {
        let m = self::mode(mode, samples, seed)?;
        let s = py.detach(|| codes::weight_spectrum(&self.0, m)).map_err(err)?;
        Ok(s.counts)
    }

    fn min_distance(&self, py: Python<'_>) -> PyResult<usize> {
        py.detach(|| codes::min_distance(&self.0)).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Code([{}, {}])", self.0.length(), self.0.dimension())
    }
}

#[pymodule]
fn hermcodes_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Form>()?;
    m.add_class::<Classification>()?;
    m.add_class::<Code>()?;
    m.add_function(wrap_pyfunction!(intersection_count, m)?)?;
    m.add_function(wrap_pyfunction!(pair_order, m)?)?;
    m.add_function(wrap_pyfunction!(scan_quadrics, m)?)?;
    m.add_function(wrap_pyfunction!(serre_sorensen_bound, m)?)?;
    Ok(())
}

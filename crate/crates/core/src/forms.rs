//! Quadratic and hermitian forms and the classification of their varieties.
//!
//! The singular space of a form is computed algebraically. For a quadratic
//! form it is `{v in rad B : f(v) = 0}` where `B(u, v) = f(u+v) - f(u) - f(v)`
//! is the polar form; this stays correct in characteristic 2, where `rad B`
//! alone can be too large. For a hermitian matrix `H` it is `conj(ker H)`.
//! [`vertex`] recomputes the same flat from the cone-point definition by
//! brute force and serves as the cross-check.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{span_basis, Matrix};
use crate::proj::{pi, Flat, PointSet, Space};

/// `f(x) = sum_{i<=j} a_ij x_i x_j`, coefficients stored row-major over the upper triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    n: usize,
    coeffs: Vec<Elem>,
}

#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j <= n);
    // rows 0..i hold (n+1) + n + ... + (n+2-i) entries
    i * (n + 1) - i * (i.saturating_sub(1)) / 2 + (j - i)
}

/// Number of coefficients of a quadratic form in `n+1` variables.
pub fn num_quadratic_coeffs(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

impl QuadraticForm {
    pub fn new(n: usize, coeffs: Vec<Elem>) -> Result<QuadraticForm> {
        let expected = num_quadratic_coeffs(n);
        if coeffs.len() != expected {
            return Err(Error::Parse(format!(
                "expected {expected} coefficients for n={n}, got {}",
                coeffs.len()
            )));
        }
        Ok(QuadraticForm { n, coeffs })
    }

    pub fn zero(n: usize) -> QuadraticForm {
        QuadraticForm {
            n,
            coeffs: vec![Elem::ZERO; num_quadratic_coeffs(n)],
        }
    }

    /// Sum of `c * x_i * x_j` terms; repeated terms accumulate.
    pub fn from_terms(field: &Field, n: usize, terms: &[(usize, usize, Elem)]) -> QuadraticForm {
        let mut f = QuadraticForm::zero(n);
        for &(i, j, c) in terms {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            let k = tri_index(n, i, j);
            f.coeffs[k] = field.add(f.coeffs[k], c);
        }
        f
    }

    /// The product of two linear forms `(a . x)(b . x)`.
    pub fn product(field: &Field, a: &[Elem], b: &[Elem]) -> QuadraticForm {
        let n = a.len() - 1;
        let mut terms = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                terms.push((i, j, field.mul(a[i], b[j])));
            }
        }
        QuadraticForm::from_terms(field, n, &terms)
    }

    /// Parses a comma-separated list of element indices in row-major upper-triangular order.
    pub fn parse(field: &Field, n: usize, text: &str) -> Result<QuadraticForm> {
        let coeffs = parse_elems(field, text)?;
        QuadraticForm::new(n, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> Elem {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[tri_index(self.n, i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, field: &Field, c: Elem) -> QuadraticForm {
        QuadraticForm {
            n: self.n,
            coeffs: self.coeffs.iter().map(|&a| field.mul(a, c)).collect(),
        }
    }

    pub fn eval(&self, field: &Field, x: &[Elem]) -> Elem {
        let mut acc = Elem::ZERO;
        let mut k = 0;
        for i in 0..=self.n {
            let mut row = Elem::ZERO;
            for &xj in &x[i..=self.n] {
                row = field.add(row, field.mul(self.coeffs[k], xj));
                k += 1;
            }
            acc = field.add(acc, field.mul(x[i], row));
        }
        acc
    }

    /// Polar matrix: `B_ii = 2 a_ii`, `B_ij = B_ji = a_ij`.
    pub fn polar_matrix(&self, field: &Field) -> Matrix {
        let m = self.n + 1;
        let mut b = Matrix::zeros(m, m);
        for i in 0..m {
            b.set(i, i, field.add(self.coeff(i, i), self.coeff(i, i)));
            for j in i + 1..m {
                b.set(i, j, self.coeff(i, j));
                b.set(j, i, self.coeff(i, j));
            }
        }
        b
    }

    /// `B(u, v) = f(u+v) - f(u) - f(v)`.
    pub fn polar(&self, field: &Field, u: &[Elem], v: &[Elem]) -> Elem {
        let mut acc = Elem::ZERO;
        for i in 0..=self.n {
            for j in i..=self.n {
                let a = self.coeff(i, j);
                if a.is_zero() {
                    continue;
                }
                let t = if i == j {
                    let uv = field.mul(u[i], v[i]);
                    field.add(uv, uv)
                } else {
                    field.add(field.mul(u[i], v[j]), field.mul(u[j], v[i]))
                };
                acc = field.add(acc, field.mul(a, t));
            }
        }
        acc
    }

    /// Form in the intrinsic coordinates `y` of `x = sum_i y_i b_i`.
    pub fn restrict(&self, field: &Field, basis: &[Vec<Elem>]) -> QuadraticForm {
        let m = basis.len();
        assert!(m > 0, "restriction to an empty flat");
        let mut g = QuadraticForm::zero(m - 1);
        for i in 0..m {
            g.coeffs[tri_index(m - 1, i, i)] = self.eval(field, &basis[i]);
            for j in i + 1..m {
                g.coeffs[tri_index(m - 1, i, j)] = self.polar(field, &basis[i], &basis[j]);
            }
        }
        g
    }

    /// Singular space `{v in rad B : f(v) = 0}` as a reduced basis.
    pub fn singular_space(&self, field: &Field) -> Vec<Vec<Elem>> {
        let m = self.n + 1;
        let rad = self.polar_matrix(field).nullspace(field);
        if field.characteristic() != 2 || rad.is_empty() {
            return span_basis(field, &rad, m);
        }
        // On rad B, f(sum c_i v_i) = (sum c_i s_i)^2 with s_i^2 = f(v_i).
        let e = field.degree() as u64;
        let roots: Vec<Elem> = rad
            .iter()
            .map(|v| field.pow(self.eval(field, v), 1 << (e - 1)))
            .collect();
        if roots.iter().all(|s| s.is_zero()) {
            return span_basis(field, &rad, m);
        }
        let coeffs = Matrix::from_rows(&[roots], rad.len()).nullspace(field);
        let vectors: Vec<Vec<Elem>> = coeffs
            .iter()
            .map(|c| {
                let mut v = vec![Elem::ZERO; m];
                for (&ci, r) in c.iter().zip(&rad) {
                    for (x, &y) in v.iter_mut().zip(r) {
                        *x = field.add(*x, field.mul(ci, y));
                    }
                }
                v
            })
            .collect();
        span_basis(field, &vectors, m)
    }

    fn submatrix(&self, keep: &[usize]) -> QuadraticForm {
        let m = keep.len();
        let mut g = QuadraticForm::zero(m - 1);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a) {
                g.coeffs[tri_index(m - 1, a, b)] = self.coeff(i, j);
            }
        }
        g
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..=self.n {
            for j in i..=self.n {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if c != Elem::ONE {
                    write!(f, "{c}*")?;
                }
                if i == j {
                    write!(f, "x{i}^2")?;
                } else {
                    write!(f, "x{i}x{j}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn parse_elems(field: &Field, text: &str) -> Result<Vec<Elem>> {
    text.split(',')
        .map(|tok| {
            let v: u32 = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))?;
            if v >= field.order() {
                return Err(Error::Parse(format!(
                    "coefficient {v} outside GF({})",
                    field.order()
                )));
            }
            Ok(Elem(v as u16))
        })
        .collect()
}

/// `f(x) = sum_{i,j} h_ij x_i conj(x_j)` with `h_ji = conj(h_ij)`, over GF(t^2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermitianForm {
    n: usize,
    h: Vec<Elem>,
}

impl HermitianForm {
    pub fn new(field: &Field, n: usize, h: Vec<Elem>) -> Result<HermitianForm> {
        if !field.has_conjugation() {
            return Err(Error::NoConjugation { q: field.order() });
        }
        let m = n + 1;
        if h.len() != m * m {
            return Err(Error::Parse(format!(
                "expected {} matrix entries for n={n}, got {}",
                m * m,
                h.len()
            )));
        }
        for i in 0..m {
            for j in 0..m {
                if h[j * m + i] != field.conj(h[i * m + j]) {
                    return Err(Error::Parse(format!("entry ({i},{j}) breaks hermitian symmetry")));
                }
            }
        }
        Ok(HermitianForm { n, h })
    }

    /// Diagonal form `sum_i d_i x_i^(t+1)`; the `d_i` must lie in GF(t).
    pub fn diagonal(field: &Field, d: &[Elem]) -> Result<HermitianForm> {
        let m = d.len();
        let mut h = vec![Elem::ZERO; m * m];
        for (i, &di) in d.iter().enumerate() {
            h[i * m + i] = di;
        }
        HermitianForm::new(field, m - 1, h)
    }

    pub fn parse(field: &Field, n: usize, text: &str) -> Result<HermitianForm> {
        HermitianForm::new(field, n, parse_elems(field, text)?)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Elem {
        self.h[i * (self.n + 1) + j]
    }

    pub fn matrix(&self) -> Matrix {
        let m = self.n + 1;
        Matrix::from_rows(&self.h.chunks(m).map(|r| r.to_vec()).collect::<Vec<_>>(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, field: &Field, x: &[Elem]) -> Elem {
        let m = self.n + 1;
        let xc: Vec<Elem> = x.iter().map(|&v| field.conj(v)).collect();
        let mut acc = Elem::ZERO;
        for i in 0..m {
            if x[i].is_zero() {
                continue;
            }
            let row = field.dot(&self.h[i * m..(i + 1) * m], &xc);
            acc = field.add(acc, field.mul(x[i], row));
        }
        acc
    }

    /// `u^T H conj(v)`.
    pub fn sesquilinear(&self, field: &Field, u: &[Elem], v: &[Elem]) -> Elem {
        let m = self.n + 1;
        let vc: Vec<Elem> = v.iter().map(|&x| field.conj(x)).collect();
        (0..m).fold(Elem::ZERO, |acc, i| {
            let row = field.dot(&self.h[i * m..(i + 1) * m], &vc);
            field.add(acc, field.mul(u[i], row))
        })
    }

    /// Gram matrix `G_ij = b_i^T H conj(b_j)` of the restriction to a flat.
    pub fn restrict(&self, field: &Field, basis: &[Vec<Elem>]) -> HermitianForm {
        let m = basis.len();
        assert!(m > 0, "restriction to an empty flat");
        let mut g = vec![Elem::ZERO; m * m];
        for i in 0..m {
            for j in 0..m {
                g[i * m + j] = self.sesquilinear(field, &basis[i], &basis[j]);
            }
        }
        HermitianForm { n: m - 1, h: g }
    }

    /// Singular space `conj(ker H)` as a reduced basis.
    pub fn singular_space(&self, field: &Field) -> Vec<Vec<Elem>> {
        let ker = self.matrix().nullspace(field);
        let conj: Vec<Vec<Elem>> = ker
            .iter()
            .map(|v| v.iter().map(|&x| field.conj(x)).collect())
            .collect();
        span_basis(field, &conj, self.n + 1)
    }

    fn submatrix(&self, keep: &[usize]) -> HermitianForm {
        let m = keep.len();
        let mut h = vec![Elem::ZERO; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                h[a * m + b] = self.entry(i, j);
            }
        }
        HermitianForm { n: m - 1, h }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Quadric,
    Hermitian,
}

/// Either kind of form; the variety is its projective zero set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Quadric(QuadraticForm),
    Hermitian(HermitianForm),
}

impl From<QuadraticForm> for Form {
    fn from(f: QuadraticForm) -> Form {
        Form::Quadric(f)
    }
}

impl From<HermitianForm> for Form {
    fn from(f: HermitianForm) -> Form {
        Form::Hermitian(f)
    }
}

impl Form {
    pub fn kind(&self) -> FormKind {
        match self {
            Form::Quadric(_) => FormKind::Quadric,
            Form::Hermitian(_) => FormKind::Hermitian,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Form::Quadric(f) => f.dim(),
            Form::Hermitian(f) => f.dim(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Form::Quadric(f) => f.is_zero(),
            Form::Hermitian(f) => f.is_zero(),
        }
    }

    #[inline]
    pub fn eval(&self, field: &Field, x: &[Elem]) -> Elem {
        match self {
            Form::Quadric(f) => f.eval(field, x),
            Form::Hermitian(f) => f.eval(field, x),
        }
    }

    pub fn restrict(&self, field: &Field, basis: &[Vec<Elem>]) -> Form {
        match self {
            Form::Quadric(f) => Form::Quadric(f.restrict(field, basis)),
            Form::Hermitian(f) => Form::Hermitian(f.restrict(field, basis)),
        }
    }

    pub fn singular_space(&self, field: &Field) -> Vec<Vec<Elem>> {
        match self {
            Form::Quadric(f) => f.singular_space(field),
            Form::Hermitian(f) => f.singular_space(field),
        }
    }

    /// `n + 1 - dim(singular space)`.
    pub fn rank(&self, field: &Field) -> usize {
        self.dim() + 1 - self.singular_space(field).len()
    }

    pub fn as_quadric(&self) -> Option<&QuadraticForm> {
        match self {
            Form::Quadric(f) => Some(f),
            Form::Hermitian(_) => None,
        }
    }

    fn submatrix(&self, keep: &[usize]) -> Form {
        match self {
            Form::Quadric(f) => Form::Quadric(f.submatrix(keep)),
            Form::Hermitian(f) => Form::Hermitian(f.submatrix(keep)),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Quadric(g) => write!(f, "{g}"),
            Form::Hermitian(g) => {
                let m = g.n + 1;
                write!(f, "hermitian[")?;
                for (k, x) in g.h.iter().enumerate() {
                    if k > 0 {
                        write!(f, "{}", if k % m == 0 { "; " } else { "," })?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Zero set of a nonzero form.
pub fn variety_points(space: &Space, form: &Form) -> Result<PointSet> {
    check_form(space, form)?;
    let field = space.field();
    Ok(space.select(|x| form.eval(field, x).is_zero()))
}

fn check_form(space: &Space, form: &Form) -> Result<()> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    if form.dim() != space.dim() {
        return Err(Error::DimensionOutOfRange { n: form.dim() });
    }
    Ok(())
}

/// The singular flat of the variety.
pub fn singular_flat(space: &Space, form: &Form) -> Flat {
    Flat::span(space, &form.singular_space(space.field()))
}

/// Cone points found by brute force: `P` in the variety such that every line
/// from `P` to another point of the variety is contained in it.
pub fn vertex(space: &Space, form: &Form) -> Result<Flat> {
    let pts = variety_points(space, form)?;
    let field = space.field();
    let members: Vec<usize> = pts.iter().collect();
    let on_line = |p: &[Elem], d: &[Elem]| {
        field.elements().all(|lambda| {
            let x: Vec<Elem> = p
                .iter()
                .zip(d)
                .map(|(&a, &b)| field.add(a, field.mul(lambda, b)))
                .collect();
            form.eval(field, &x).is_zero()
        })
    };
    let cone: Vec<Vec<Elem>> = members
        .iter()
        .filter(|&&pi| {
            let p = space.point(pi);
            members
                .iter()
                .all(|&di| di == pi || on_line(space.point(di), p))
        })
        .map(|&pi| space.point(pi).to_vec())
        .collect();
    let flat = Flat::span(space, &cone);
    let expected = pi(flat.dim() as i64, space.q() as u64) as usize;
    if cone.len() != expected {
        return Err(Error::Unclassifiable(format!(
            "cone points of {form} do not form a flat"
        )));
    }
    Ok(flat)
}

/// Number of points of a non-degenerate hermitian variety in PG(n, t^2).
pub fn phi(n: u32, t: u64) -> u64 {
    let sign = |k: u32| if k % 2 == 0 { 1i128 } else { -1i128 };
    let t = t as i128;
    let a = t.pow(n + 1) - sign(n + 1);
    let b = t.pow(n) - sign(n);
    ((a * b) / (t * t - 1)) as u64
}

/// Number of points of a hermitian variety of rank `r` in PG(n, t^2).
pub fn degenerate_hermitian_count(n: u32, r: u32, t: u64) -> u64 {
    let q = t * t;
    let pv = pi(n as i64 - r as i64, q);
    let base = phi(r - 1, t);
    (q - 1) * pv * base + pv + base
}

/// Number of points of a non-degenerate quadric of rank `r` and the given type.
pub fn quadric_base_count(r: u32, kind: QuadricType, q: u64) -> u64 {
    let p = pi(r as i64 - 2, q);
    match kind {
        QuadricType::Parabolic => p,
        QuadricType::Hyperbolic => p + q.pow((r - 2) / 2),
        QuadricType::Elliptic => p - q.pow((r - 2) / 2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadricType {
    Hyperbolic,
    Elliptic,
    Parabolic,
}

impl fmt::Display for QuadricType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadricType::Hyperbolic => "hyperbolic",
            QuadricType::Elliptic => "elliptic",
            QuadricType::Parabolic => "parabolic",
        })
    }
}

/// Rank, type and table row of a variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyClass {
    pub kind: FormKind,
    pub n: usize,
    pub rank: usize,
    /// Projective dimension of the vertex, -1 when non-degenerate.
    pub vertex_dim: isize,
    pub projective_index: isize,
    pub quadric_type: Option<QuadricType>,
    pub label: String,
    pub predicted_points: u64,
}

impl VarietyClass {
    pub fn is_degenerate(&self) -> bool {
        self.rank < self.n + 1
    }
}

impl fmt::Display for VarietyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: rank {}", self.label, self.rank)?;
        if let Some(t) = self.quadric_type {
            write!(f, " {t}")?;
        }
        write!(
            f,
            ", {} points, g={}",
            self.predicted_points, self.projective_index
        )
    }
}

fn subscript(k: isize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("non-negative") as usize])
        .collect()
}

fn cone_symbol(vertex_dim: isize, base: &str, base_dim: usize) -> String {
    let b = format!("{base}{}", subscript(base_dim as isize));
    if vertex_dim < 0 {
        b
    } else {
        format!("Π{}{b}", subscript(vertex_dim))
    }
}

fn quadric_label(n: usize, rank: usize, kind: QuadricType) -> String {
    let v = n as isize - rank as isize;
    let base = match kind {
        QuadricType::Hyperbolic => "H",
        QuadricType::Elliptic => "E",
        QuadricType::Parabolic => "P",
    };
    let sym = cone_symbol(v, base, rank - 1);
    let words = match (n, rank, kind) {
        (_, 1, _) => match n {
            1 => "repeated point",
            2 => "repeated line",
            3 => "repeated plane",
            _ => "repeated hyperplane",
        },
        (1, 2, QuadricType::Hyperbolic) => "pair of points",
        (1, 2, QuadricType::Elliptic) => "empty quadric",
        (2, 2, QuadricType::Hyperbolic) => "pair of lines",
        (2, 2, QuadricType::Elliptic) => "point",
        (3, 2, QuadricType::Hyperbolic) => "pair of planes",
        (3, 2, QuadricType::Elliptic) => "line",
        (_, 2, QuadricType::Hyperbolic) => "pair of distinct hyperplanes",
        (4, 2, QuadricType::Elliptic) => "plane",
        (_, 2, QuadricType::Elliptic) => "codimension-2 flat",
        (4, 5, _) => "parabolic quadric",
        (2, 3, _) => "parabolic",
        (3, 4, QuadricType::Hyperbolic) => "hyperbolic quadric",
        (3, 4, QuadricType::Elliptic) => "elliptic quadric",
        _ if v < 0 => match kind {
            QuadricType::Hyperbolic => "hyperbolic quadric",
            QuadricType::Elliptic => "elliptic quadric",
            QuadricType::Parabolic => "parabolic quadric",
        },
        _ => "cone",
    };
    format!("{words} {sym}")
}

fn hermitian_label(n: usize, rank: usize) -> String {
    let v = n as isize - rank as isize;
    let sym = cone_symbol(v, "U", rank - 1);
    let words = match (n, rank) {
        (_, 1) => match n {
            1 => "repeated point",
            2 => "repeated line",
            3 => "repeated plane",
            _ => "repeated hyperplane",
        },
        (1, 2) => "t+1 points",
        (2, 2) => "cone",
        (3, 2) => "t+1 collinear planes",
        (_, 2) => "t+1 hyperplanes through a common flat",
        (2, 3) => "non-singular hermitian curve",
        (3, 4) => "non-singular hermitian surface",
        _ if v < 0 => "non-singular hermitian variety",
        _ => "cone",
    };
    format!("{words} {sym}")
}

/// Classifies a nonzero form by its singular space and base variety.
///
/// The base is the restriction of the form to the coordinates that are not
/// pivots of the singular space; its zeros are counted directly and must match
/// one of the non-degenerate counts for the type to be resolved.
pub fn classify(space: &Space, form: &Form) -> Result<VarietyClass> {
    check_form(space, form)?;
    let field = space.field();
    let n = space.dim();
    let radical = form.singular_space(field);
    let d = radical.len();
    let rank = n + 1 - d;
    let pivots: Vec<usize> = radical
        .iter()
        .map(|v| v.iter().position(|x| !x.is_zero()).expect("nonzero basis vector"))
        .collect();
    let keep: Vec<usize> = (0..=n).filter(|j| !pivots.contains(j)).collect();
    let base = form.submatrix(&keep);
    let base_space = Space::with_field(rank - 1, space.field_arc().clone())?;
    let base_count = base_space
        .points()
        .filter(|y| base.eval(field, y).is_zero())
        .count() as u64;
    let q = space.q() as u64;
    let vertex_dim = d as isize - 1;
    let cone_count = |b: u64| pi(d as i64 - 1, q) + q.pow(d as u32) * b;
    match form.kind() {
        FormKind::Quadric => {
            let kind = if rank % 2 == 1 {
                QuadricType::Parabolic
            } else if base_count == quadric_base_count(rank as u32, QuadricType::Hyperbolic, q) {
                QuadricType::Hyperbolic
            } else if base_count == quadric_base_count(rank as u32, QuadricType::Elliptic, q) {
                QuadricType::Elliptic
            } else {
                return Err(Error::Unclassifiable(format!(
                    "base of {form} has {base_count} points"
                )));
            };
            if base_count != quadric_base_count(rank as u32, kind, q) {
                return Err(Error::Unclassifiable(format!(
                    "parabolic base of {form} has {base_count} points"
                )));
            }
            let m = rank as isize;
            let base_index = match kind {
                QuadricType::Parabolic => (m - 1) / 2 - 1,
                QuadricType::Hyperbolic => m / 2 - 1,
                QuadricType::Elliptic => m / 2 - 2,
            };
            Ok(VarietyClass {
                kind: FormKind::Quadric,
                n,
                rank,
                vertex_dim,
                projective_index: d as isize + base_index,
                quadric_type: Some(kind),
                label: quadric_label(n, rank, kind),
                predicted_points: cone_count(quadric_base_count(rank as u32, kind, q)),
            })
        }
        FormKind::Hermitian => {
            let t = field.sqrt_order().expect("hermitian forms need GF(t^2)") as u64;
            let expected = phi(rank as u32 - 1, t);
            if base_count != expected {
                return Err(Error::Unclassifiable(format!(
                    "base of {form} has {base_count} points, expected {expected}"
                )));
            }
            let base_index = (rank as isize - 2).div_euclid(2);
            Ok(VarietyClass {
                kind: FormKind::Hermitian,
                n,
                rank,
                vertex_dim,
                projective_index: d as isize + base_index,
                quadric_type: None,
                label: hermitian_label(n, rank),
                predicted_points: cone_count(expected),
            })
        }
    }
}

/// The form restricted to a flat, in the flat's intrinsic coordinates.
pub fn section(space: &Space, form: &Form, flat: &Flat) -> Form {
    form.restrict(space.field(), flat.basis())
}

/// Whether a hyperplane meets a non-degenerate variety in a degenerate section.
pub fn is_tangent(space: &Space, hyperplane: &Flat, form: &Form) -> Result<bool> {
    check_form(space, form)?;
    let n = space.dim() as isize;
    if hyperplane.dim() != n - 1 {
        return Err(Error::FlatDimension {
            expected: n - 1,
            actual: hyperplane.dim(),
        });
    }
    let field = space.field();
    if form.rank(field) != space.dim() + 1 {
        return Err(Error::DegenerateForm);
    }
    Ok(section(space, form, hyperplane).rank(field) < space.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize, q: u32) -> Space {
        Space::new(n, Field::with_order(q).unwrap()).unwrap()
    }

    fn q(field: &Field, n: usize, terms: &[(usize, usize, u16)]) -> Form {
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, Elem(c))).collect();
        Form::Quadric(QuadraticForm::from_terms(field, n, &t))
    }

    fn hermitian_sum(field: &Field, n: usize, k: usize) -> Form {
        let d: Vec<Elem> = (0..=n).map(|i| if i < k { Elem::ONE } else { Elem::ZERO }).collect();
        Form::Hermitian(HermitianForm::diagonal(field, &d).unwrap())
    }

    #[test]
    fn tri_index_is_row_major() {
        let mut k = 0;
        for i in 0..=4 {
            for j in i..=4 {
                assert_eq!(tri_index(4, i, j), k);
                k += 1;
            }
        }
        assert_eq!(k, num_quadratic_coeffs(4));
    }

    #[test]
    fn parabolic_point_counts() {
        for qq in [2u32, 3, 4, 5] {
            let s = space(4, qq);
            let f = q(s.field(), 4, &[(0, 1, 1), (2, 3, 1), (4, 4, 1)]);
            let c = classify(&s, &f).unwrap();
            let qq = qq as u64;
            assert_eq!(c.rank, 5);
            assert_eq!(c.quadric_type, Some(QuadricType::Parabolic));
            assert_eq!(c.projective_index, 1);
            assert_eq!(c.predicted_points, (qq + 1) * (qq * qq + 1));
            assert_eq!(variety_points(&s, &f).unwrap().len() as u64, c.predicted_points);
        }
    }

    #[test]
    fn char2_polar_rank_differs_from_quadric_rank() {
        let s = space(4, 2);
        let f = QuadraticForm::from_terms(
            s.field(),
            4,
            &[(0, 1, Elem(1)), (2, 3, Elem(1)), (4, 4, Elem(1))],
        );
        assert_eq!(f.polar_matrix(s.field()).rank(s.field()), 4);
        assert_eq!(Form::Quadric(f).rank(s.field()), 5);
    }

    #[test]
    fn rank_two_non_split_is_a_plane() {
        let s = space(4, 3);
        let f = q(s.field(), 4, &[(0, 0, 1), (1, 1, 1)]);
        let c = classify(&s, &f).unwrap();
        assert_eq!(c.label, "plane Π₂E₁");
        assert_eq!(c.predicted_points, 13);
        assert_eq!(variety_points(&s, &f).unwrap().len(), 13);
    }

    #[test]
    fn repeated_hyperplane() {
        let s = space(4, 2);
        let f = q(s.field(), 4, &[(0, 0, 1)]);
        let c = classify(&s, &f).unwrap();
        assert_eq!(c.label, "repeated hyperplane Π₃P₀");
        assert_eq!(c.predicted_points, 15);
        assert_eq!(c.projective_index, 3);
    }

    #[test]
    fn hermitian_counts() {
        assert_eq!(phi(3, 2), 45);
        assert_eq!(phi(4, 2), 165);
        assert_eq!(phi(2, 2), 9);
        assert_eq!(phi(1, 3), 4);
        assert_eq!(degenerate_hermitian_count(4, 4, 2), 181);
        let s = space(4, 4);
        let x = hermitian_sum(s.field(), 4, 5);
        assert_eq!(variety_points(&s, &x).unwrap().len(), 165);
        let cone = hermitian_sum(s.field(), 4, 4);
        let c = classify(&s, &cone).unwrap();
        assert_eq!((c.rank, c.predicted_points), (4, 181));
        assert_eq!(variety_points(&s, &cone).unwrap().len(), 181);
        let v = vertex(&s, &cone).unwrap();
        assert_eq!(v.basis(), &[vec![Elem(0), Elem(0), Elem(0), Elem(0), Elem(1)]]);
    }

    #[test]
    fn hermitian_rank_two_surface() {
        let s = space(3, 4);
        let f = hermitian_sum(s.field(), 3, 2);
        let c = classify(&s, &f).unwrap();
        assert_eq!(c.label, "t+1 collinear planes Π₁U₁");
        assert_eq!(c.predicted_points, 53);
        assert_eq!(variety_points(&s, &f).unwrap().len(), 53);
    }

    #[test]
    fn hermitian_values_lie_in_subfield() {
        let s = space(2, 4);
        let field = s.field();
        let h = HermitianForm::new(
            field,
            2,
            vec![
                Elem(1), Elem(2), Elem(0),
                Elem(3), Elem(0), Elem(1),
                Elem(0), Elem(1), Elem(1),
            ],
        )
        .unwrap();
        for x in s.points() {
            let v = h.eval(field, x);
            assert_eq!(field.conj(v), v);
        }
        assert!(HermitianForm::new(field, 1, vec![Elem(2), Elem(0), Elem(0), Elem(0)]).is_err());
    }

    #[test]
    fn cone_vertex_brute_force_matches_algebra() {
        let s = space(4, 3);
        let f = q(s.field(), 4, &[(0, 1, 1), (2, 3, 1)]);
        let v = vertex(&s, &f).unwrap();
        assert_eq!(v.basis(), &[vec![Elem(0), Elem(0), Elem(0), Elem(0), Elem(1)]]);
        assert_eq!(v, singular_flat(&s, &f));
        let p = q(s.field(), 4, &[(0, 1, 1), (2, 3, 1), (4, 4, 1)]);
        assert!(vertex(&s, &p).unwrap().is_empty());
    }

    #[test]
    fn tangency_of_hyperplanes() {
        let s = space(4, 3);
        let p = q(s.field(), 4, &[(0, 1, 1), (2, 3, 1), (4, 4, 1)]);
        let x4 = Flat::hyperplane(&s, &[Elem(0), Elem(0), Elem(0), Elem(0), Elem(1)]).unwrap();
        assert!(!is_tangent(&s, &x4, &p).unwrap());
        let sec = section(&s, &p, &x4);
        let ss = space(3, 3);
        assert_eq!(classify(&ss, &sec).unwrap().quadric_type, Some(QuadricType::Hyperbolic));
        assert_eq!(variety_points(&ss, &sec).unwrap().len(), 16);
        let x0 = Flat::hyperplane(&s, &[Elem(1), Elem(0), Elem(0), Elem(0), Elem(0)]).unwrap();
        assert!(is_tangent(&s, &x0, &p).unwrap());

        let s = space(4, 4);
        let x = hermitian_sum(s.field(), 4, 5);
        let h0 = Flat::hyperplane(&s, &[Elem(1), Elem(0), Elem(0), Elem(0), Elem(0)]).unwrap();
        assert!(!is_tangent(&s, &h0, &x).unwrap());
        assert_eq!(h0.points(&s).intersection_len(&variety_points(&s, &x).unwrap()), 45);
        let degenerate = hermitian_sum(s.field(), 4, 3);
        assert!(matches!(is_tangent(&s, &h0, &degenerate), Err(Error::DegenerateForm)));
    }

    #[test]
    fn parse_round_trip() {
        let field = Field::with_order(3).unwrap();
        let f = QuadraticForm::parse(&field, 2, "1,0,0,2,1,0").unwrap();
        assert_eq!(f.to_string(), "x0^2 + 2*x1^2 + x1x2");
        assert!(QuadraticForm::parse(&field, 2, "1,0").is_err());
        assert!(QuadraticForm::parse(&field, 2, "1,0,0,5,0,0").is_err());
        assert!(QuadraticForm::parse(&field, 2, "1,a,0,0,0,0").is_err());
    }
}

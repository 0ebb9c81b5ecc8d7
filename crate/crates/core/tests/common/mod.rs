//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use hermcodes::forms::{Form, HermitianForm, QuadraticForm, QuadricType};
use hermcodes::linalg::Matrix;
use hermcodes::{Elem, Field, PointSet, Space};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn space(n: usize, q: u32) -> Space {
    Space::new(n, Field::with_order(q).unwrap()).unwrap()
}

pub fn elem(rng: &mut ChaCha8Rng, field: &Field) -> Elem {
    Elem(rng.gen_range(0..field.order()) as u16)
}

/// Zeros of `form` counted point by point.
pub fn count_zeros(space: &Space, form: &Form) -> usize {
    space.points().filter(|x| form.eval(space.field(), x).is_zero()).count()
}

pub fn zero_set(space: &Space, form: &Form) -> PointSet {
    space.select(|x| form.eval(space.field(), x).is_zero())
}

pub fn quadric(field: &Field, n: usize, terms: &[(usize, usize, u16)]) -> QuadraticForm {
    let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, Elem(c))).collect();
    QuadraticForm::from_terms(field, n, &t)
}

pub fn random_quadric(rng: &mut ChaCha8Rng, field: &Field, n: usize) -> QuadraticForm {
    let m = (n + 1) * (n + 2) / 2;
    loop {
        let c: Vec<Elem> = (0..m).map(|_| elem(rng, field)).collect();
        if c.iter().any(|e| !e.is_zero()) {
            return QuadraticForm::new(n, c).unwrap();
        }
    }
}

/// Every nonzero quadric in `n + 1` variables with leading coefficient 1.
pub fn all_quadrics(field: &Field, n: usize) -> Vec<QuadraticForm> {
    let m = (n + 1) * (n + 2) / 2;
    let q = field.order() as u64;
    let mut out = Vec::new();
    for code in 1..q.pow(m as u32) {
        let mut c = vec![Elem::ZERO; m];
        let mut x = code;
        for slot in c.iter_mut() {
            *slot = Elem((x % q) as u16);
            x /= q;
        }
        if c.iter().find(|e| !e.is_zero()) == Some(&Elem::ONE) {
            out.push(QuadraticForm::new(n, c).unwrap());
        }
    }
    out
}

/// Elements of the subfield GF(t) of GF(t^2).
pub fn subfield(field: &Field) -> Vec<Elem> {
    field
        .elements()
        .filter(|&x| field.conjugate(x).unwrap() == x)
        .collect()
}

/// Every nonzero hermitian matrix of size `n + 1` over GF(t^2).
pub fn all_hermitian(field: &Field, n: usize) -> Vec<HermitianForm> {
    let m = n + 1;
    let sub = subfield(field);
    let q = field.order() as u64;
    let t = sub.len() as u64;
    let off = m * (m - 1) / 2;
    let total = t.pow(m as u32) * q.pow(off as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 1..total {
        let mut x = code;
        let mut h = vec![Elem::ZERO; m * m];
        for i in 0..m {
            h[i * m + i] = sub[(x % t) as usize];
            x /= t;
        }
        for i in 0..m {
            for j in i + 1..m {
                let v = Elem((x % q) as u16);
                x /= q;
                h[i * m + j] = v;
                h[j * m + i] = field.conjugate(v).unwrap();
            }
        }
        out.push(HermitianForm::new(field, n, h).unwrap());
    }
    out
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, field: &Field, n: usize) -> HermitianForm {
    let m = n + 1;
    let sub = subfield(field);
    loop {
        let mut h = vec![Elem::ZERO; m * m];
        for i in 0..m {
            h[i * m + i] = sub[rng.gen_range(0..sub.len())];
            for j in i + 1..m {
                let v = elem(rng, field);
                h[i * m + j] = v;
                h[j * m + i] = field.conjugate(v).unwrap();
            }
        }
        if h.iter().any(|e| !e.is_zero()) {
            return HermitianForm::new(field, n, h).unwrap();
        }
    }
}

pub fn random_invertible(rng: &mut ChaCha8Rng, field: &Field, m: usize) -> Vec<Vec<Elem>> {
    loop {
        let a: Vec<Vec<Elem>> = (0..m)
            .map(|_| (0..m).map(|_| elem(rng, field)).collect())
            .collect();
        if Matrix::from_rows(&a, m).rank(field) == m {
            return a;
        }
    }
}

fn apply(field: &Field, a: &[Vec<Elem>], x: &[Elem]) -> Vec<Elem> {
    a.iter().map(|row| field.dot(row, x)).collect()
}

/// `f(A x)`, recovered from values at unit vectors and their pairwise sums.
pub fn transform_quadric(field: &Field, f: &QuadraticForm, a: &[Vec<Elem>]) -> QuadraticForm {
    let m = a.len();
    let unit = |i: usize| {
        let mut e = vec![Elem::ZERO; m];
        e[i] = Elem::ONE;
        e
    };
    let g = |x: &[Elem]| f.eval(field, &apply(field, a, x));
    let mut terms = Vec::new();
    for i in 0..m {
        let gi = g(&unit(i));
        terms.push((i, i, gi));
        for j in i + 1..m {
            let mut e = unit(i);
            e[j] = Elem::ONE;
            let gij = field.sub(field.sub(g(&e), gi), g(&unit(j)));
            terms.push((i, j, gij));
        }
    }
    QuadraticForm::from_terms(field, m - 1, &terms)
}

/// Matrix of `f(A x)` for the hermitian form with matrix `H`: `A^T H conj(A)`.
pub fn transform_hermitian(field: &Field, h: &HermitianForm, a: &[Vec<Elem>]) -> HermitianForm {
    let m = a.len();
    let conj = |x: Elem| field.conjugate(x).unwrap();
    let mut out = vec![Elem::ZERO; m * m];
    for i in 0..m {
        for j in 0..m {
            let mut s = Elem::ZERO;
            for k in 0..m {
                for l in 0..m {
                    let term = field.mul(field.mul(a[k][i], h.entry(k, l)), conj(a[l][j]));
                    s = field.add(s, term);
                }
            }
            out[i * m + j] = s;
        }
    }
    HermitianForm::new(field, m - 1, out).unwrap()
}

/// Smallest `(b, c)` with `y^2 + b y + c` having no root.
pub fn nonsplit(field: &Field) -> (u16, u16) {
    let q = field.order() as u16;
    for b in 0..q {
        for c in 0..q {
            let (be, ce) = (Elem(b), Elem(c));
            if field
                .elements()
                .all(|y| !field.add(field.add(field.mul(y, y), field.mul(be, y)), ce).is_zero())
            {
                return (b, c);
            }
        }
    }
    unreachable!()
}

/// Largest dimension of a flat inside `set`, checked up to planes and hyperplanes.
pub fn max_flat_dim(space: &Space, set: &PointSet) -> isize {
    if set.is_empty() {
        return -1;
    }
    let n = space.dim();
    if space.hyperplanes().iter().any(|h| h.points(space).is_subset(set)) {
        return n as isize - 1;
    }
    if n >= 4 && !space.planes_in_set(set).is_empty() {
        return 2;
    }
    if !space.lines_in_set(set).is_empty() {
        return 1;
    }
    0
}

/// Row of a classification table: rank, base type (quadrics), label, point count, index.
#[derive(Clone, Debug)]
pub struct Row {
    pub rank: usize,
    pub ty: Option<QuadricType>,
    pub label: &'static str,
    pub points: u64,
    pub g: isize,
}

fn row(rank: usize, ty: Option<QuadricType>, label: &'static str, points: u64, g: isize) -> Row {
    Row {
        rank,
        ty,
        label,
        points,
        g,
    }
}

/// Quadrics of PG(4, q).
pub fn quadric_table_pg4(q: u64) -> Vec<Row> {
    use QuadricType::*;
    vec![
        row(1, Some(Parabolic), "repeated hyperplane Π₃P₀", q * q * q + q * q + q + 1, 3),
        row(2, Some(Hyperbolic), "pair of distinct hyperplanes Π₂H₁", 2 * q * q * q + q * q + q + 1, 3),
        row(2, Some(Elliptic), "plane Π₂E₁", q * q + q + 1, 2),
        row(3, Some(Parabolic), "cone Π₁P₂", (q + 1) * (q * q + 1), 2),
        row(4, Some(Hyperbolic), "cone Π₀H₃", q * (q + 1) * (q + 1) + 1, 2),
        row(4, Some(Elliptic), "cone Π₀E₃", q * (q * q + 1) + 1, 1),
        row(5, Some(Parabolic), "parabolic quadric P₄", (q + 1) * (q * q + 1), 1),
    ]
}

/// Plane quadrics.
pub fn quadric_table_pg2(q: u64) -> Vec<Row> {
    use QuadricType::*;
    vec![
        row(1, Some(Parabolic), "repeated line Π₁P₀", q + 1, 1),
        row(2, Some(Hyperbolic), "pair of lines Π₀H₁", 2 * q + 1, 1),
        row(2, Some(Elliptic), "point Π₀E₁", 1, 0),
        row(3, Some(Parabolic), "parabolic P₂", q + 1, 0),
    ]
}

/// Hermitian surfaces of PG(3, t^2).
pub fn hermitian_table_pg3(t: u64) -> Vec<Row> {
    vec![
        row(1, None, "repeated plane Π₂U₀", t.pow(4) + t * t + 1, 2),
        row(2, None, "t+1 collinear planes Π₁U₁", t.pow(5) + t.pow(4) + t * t + 1, 2),
        row(3, None, "cone Π₀U₂", t.pow(5) + t * t + 1, 1),
        row(4, None, "non-singular hermitian surface U₃", t.pow(5) + t.pow(3) + t * t + 1, 1),
    ]
}

/// Hermitian curves of PG(2, t^2).
pub fn hermitian_table_pg2(t: u64) -> Vec<Row> {
    vec![
        row(1, None, "repeated line Π₁U₀", t * t + 1, 1),
        row(2, None, "cone Π₀U₁", t.pow(3) + t * t + 1, 1),
        row(3, None, "non-singular hermitian curve U₂", t.pow(3) + 1, 0),
    ]
}

/// One representative per quadric row of PG(n, q), in the same order as the tables.
pub fn quadric_representatives(field: &Field, n: usize) -> Vec<QuadraticForm> {
    let (b, c) = nonsplit(field);
    let f = |t: &[(usize, usize, u16)]| quadric(field, n, t);
    match n {
        4 => vec![
            f(&[(0, 0, 1)]),
            f(&[(0, 1, 1)]),
            f(&[(0, 0, 1), (0, 1, b), (1, 1, c)]),
            f(&[(0, 1, 1), (2, 2, 1)]),
            f(&[(0, 1, 1), (2, 3, 1)]),
            f(&[(0, 1, 1), (2, 2, 1), (2, 3, b), (3, 3, c)]),
            f(&[(0, 1, 1), (2, 3, 1), (4, 4, 1)]),
        ],
        2 => vec![
            f(&[(0, 0, 1)]),
            f(&[(0, 1, 1)]),
            f(&[(0, 0, 1), (0, 1, b), (1, 1, c)]),
            f(&[(0, 1, 1), (2, 2, 1)]),
        ],
        _ => panic!("no table for n = {n}"),
    }
}

/// `diag(1, .., 1, 0, .., 0)` with `r` ones, for `r = 1..=n+1`.
pub fn hermitian_representatives(field: &Field, n: usize) -> Vec<HermitianForm> {
    (1..=n + 1)
        .map(|r| {
            let d: Vec<Elem> = (0..=n).map(|i| if i < r { Elem::ONE } else { Elem::ZERO }).collect();
            HermitianForm::diagonal(field, &d).unwrap()
        })
        .collect()
}

//! Points, point sets and flats of PG(n, q).
//!
//! A point is stored by its canonical representative: the first nonzero
//! coordinate is 1. Points are ordered by the position of that leading 1,
//! then lexicographically on the trailing coordinates, so the enumeration
//! index is a closed-form function of the coordinates.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{annihilator, span_basis, Matrix};

/// Largest supported projective dimension.
pub const MAX_DIM: usize = 5;

/// Number of points of PG(n, q); `pi(-1, q) = 0`.
pub fn pi(n: i64, q: u64) -> u64 {
    if n < 0 {
        return 0;
    }
    (0..=n as u32).map(|i| q.pow(i)).sum()
}

/// PG(n, q) with its points enumerated once.
#[derive(Clone, Debug)]
pub struct Space {
    n: usize,
    field: Arc<Field>,
    coords: Vec<Elem>,
}

impl Space {
    pub fn new(n: usize, field: Field) -> Result<Space> {
        Space::with_field(n, Arc::new(field))
    }

    pub fn with_field(n: usize, field: Arc<Field>) -> Result<Space> {
        if n > MAX_DIM {
            return Err(Error::DimensionOutOfRange { n });
        }
        let q = field.order() as usize;
        let width = n + 1;
        let total = pi(n as i64, q as u64) as usize;
        let mut coords = Vec::with_capacity(total * width);
        for lead in 0..=n {
            let tail = n - lead;
            let count = q.pow(tail as u32);
            for rank in 0..count {
                let start = coords.len();
                coords.resize(start + width, Elem::ZERO);
                coords[start + lead] = Elem::ONE;
                let mut r = rank;
                for j in (lead + 1..=n).rev() {
                    coords[start + j] = Elem((r % q) as u16);
                    r /= q;
                }
            }
        }
        Ok(Space { n, field, coords })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn num_points(&self) -> usize {
        self.coords.len() / (self.n + 1)
    }

    pub fn point(&self, i: usize) -> &[Elem] {
        let w = self.n + 1;
        &self.coords[i * w..(i + 1) * w]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[Elem]> {
        self.coords.chunks_exact(self.n + 1)
    }

    /// Scales a nonzero vector so its first nonzero coordinate is 1.
    pub fn canonicalize(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let lead = v.iter().position(|x| !x.is_zero())?;
        let inv = self.field.inv(v[lead]).expect("nonzero");
        Some(v.iter().map(|&x| self.field.mul(x, inv)).collect())
    }

    /// Enumeration index of the point spanned by a nonzero vector.
    pub fn index_of(&self, v: &[Elem]) -> Option<usize> {
        debug_assert_eq!(v.len(), self.n + 1);
        let lead = v.iter().position(|x| !x.is_zero())?;
        let q = self.q() as usize;
        let inv = self.field.inv(v[lead]).expect("nonzero");
        let mut idx: usize = (0..lead).map(|j| q.pow((self.n - j) as u32)).sum();
        let mut rank = 0usize;
        for &x in &v[lead + 1..] {
            rank = rank * q + self.field.mul(x, inv).index();
        }
        idx += rank;
        Some(idx)
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::new(self.num_points())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::from_fn(self.num_points(), |_| true)
    }

    /// Points `x` with `pred(x)`.
    pub fn select(&self, mut pred: impl FnMut(&[Elem]) -> bool) -> PointSet {
        let mut s = self.empty_set();
        for (i, p) in self.points().enumerate() {
            if pred(p) {
                s.insert(i);
            }
        }
        s
    }

    /// The line through two distinct points, given by index.
    pub fn line_through(&self, a: usize, b: usize) -> Flat {
        Flat::new(self, &[self.point(a).to_vec(), self.point(b).to_vec()])
            .expect("distinct points span a line")
    }

    /// All lines of the space entirely contained in `s`, each listed once.
    pub fn lines_in_set(&self, s: &PointSet) -> Vec<Flat> {
        let members: Vec<usize> = s.iter().collect();
        let mut out = Vec::new();
        for (ia, &a) in members.iter().enumerate() {
            for &b in &members[ia + 1..] {
                let line = self.line_through(a, b);
                let idx = line.point_indices(self);
                // report each line from its two smallest points only
                let mut sorted = idx.clone();
                sorted.sort_unstable();
                if sorted[0] != a || sorted[1] != b {
                    continue;
                }
                if idx.iter().all(|&i| s.contains(i)) {
                    out.push(line);
                }
            }
        }
        out
    }

    /// All planes of the space entirely contained in `s`, each listed once.
    pub fn planes_in_set(&self, s: &PointSet) -> Vec<Flat> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for line in self.lines_in_set(s) {
            let on_line = line.points(self);
            for p in s.iter().filter(|&p| !on_line.contains(p)) {
                let mut b = line.basis().to_vec();
                b.push(self.point(p).to_vec());
                let plane = Flat::span(self, &b);
                if seen.insert(plane.clone()) && plane.point_indices(self).iter().all(|&i| s.contains(i)) {
                    out.push(plane);
                }
            }
        }
        out
    }

    /// Number of contained lines of `s` through each point of `s`.
    pub fn lines_through_each_point(&self, s: &PointSet) -> Vec<(usize, usize)> {
        let mut counts = vec![0usize; self.num_points()];
        for line in self.lines_in_set(s) {
            for i in line.point_indices(self) {
                counts[i] += 1;
            }
        }
        s.iter().map(|i| (i, counts[i])).collect()
    }

    /// The `q+1` hyperplanes through a flat of dimension `n-2`.
    pub fn hyperplanes_through(&self, f: &Flat) -> Result<Vec<Flat>> {
        let n = self.n as isize;
        if f.dim() != n - 2 {
            return Err(Error::FlatDimension {
                expected: n - 2,
                actual: f.dim(),
            });
        }
        let eqs = f.equations(self);
        debug_assert_eq!(eqs.len(), 2);
        let field = self.field();
        let mut out = Vec::with_capacity(self.q() as usize + 1);
        let mut pencil = vec![eqs[1].clone()];
        for lambda in field.elements() {
            pencil.push(
                eqs[0]
                    .iter()
                    .zip(&eqs[1])
                    .map(|(&a, &b)| field.add(a, field.mul(lambda, b)))
                    .collect(),
            );
        }
        for eq in pencil {
            out.push(Flat::hyperplane(self, &eq)?);
        }
        Ok(out)
    }

    /// Every hyperplane of the space, indexed like the points of the dual space.
    pub fn hyperplanes(&self) -> Vec<Flat> {
        self.points()
            .map(|a| Flat::hyperplane(self, a).expect("nonzero"))
            .collect()
    }
}

/// A subset of the points of a [`Space`], as a bitset over point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    bits: Vec<u64>,
    universe: usize,
    len: usize,
}

impl PointSet {
    pub fn new(universe: usize) -> PointSet {
        PointSet {
            bits: vec![0; universe.div_ceil(64)],
            universe,
            len: 0,
        }
    }

    pub fn from_fn(universe: usize, mut f: impl FnMut(usize) -> bool) -> PointSet {
        let mut s = PointSet::new(universe);
        for i in 0..universe {
            if f(i) {
                s.insert(i);
            }
        }
        s
    }

    pub fn from_indices(universe: usize, idx: impl IntoIterator<Item = usize>) -> PointSet {
        let mut s = PointSet::new(universe);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.universe, "point index out of range");
        let (w, b) = (i / 64, i % 64);
        let fresh = self.bits[w] >> b & 1 == 0;
        self.bits[w] |= 1 << b;
        self.len += fresh as usize;
        fresh
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    fn zip_with(&self, other: &PointSet, op: impl Fn(u64, u64) -> u64) -> PointSet {
        assert_eq!(self.universe, other.universe, "point sets from different spaces");
        let bits: Vec<u64> = self.bits.iter().zip(&other.bits).map(|(&a, &b)| op(a, b)).collect();
        let len = bits.iter().map(|w| w.count_ones() as usize).sum();
        PointSet {
            bits,
            universe: self.universe,
            len,
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0)
    }
}

/// A projective subspace, kept as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    basis: Vec<Vec<Elem>>,
    ambient: usize,
}

impl Flat {
    /// Span of `vectors`, which must be linearly independent.
    pub fn new(space: &Space, vectors: &[Vec<Elem>]) -> Result<Flat> {
        let basis = span_basis(space.field(), vectors, space.dim() + 1);
        if basis.len() != vectors.len() {
            return Err(Error::Dependent);
        }
        Ok(Flat {
            basis,
            ambient: space.dim(),
        })
    }

    /// Span of `vectors`, dropping dependencies.
    pub fn span(space: &Space, vectors: &[Vec<Elem>]) -> Flat {
        Flat {
            basis: span_basis(space.field(), vectors, space.dim() + 1),
            ambient: space.dim(),
        }
    }

    pub fn empty(space: &Space) -> Flat {
        Flat {
            basis: Vec::new(),
            ambient: space.dim(),
        }
    }

    /// The hyperplane `a . x = 0`.
    pub fn hyperplane(space: &Space, a: &[Elem]) -> Result<Flat> {
        if a.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroForm);
        }
        let basis = annihilator(space.field(), &[a.to_vec()], space.dim() + 1);
        Flat::new(space, &basis)
    }

    /// Projective dimension; the empty flat has dimension -1.
    pub fn dim(&self) -> isize {
        self.basis.len() as isize - 1
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Linear equations cutting out the flat, one per codimension.
    pub fn equations(&self, space: &Space) -> Vec<Vec<Elem>> {
        annihilator(space.field(), &self.basis, self.ambient + 1)
    }

    pub fn contains_vector(&self, space: &Space, v: &[Elem]) -> bool {
        let field = space.field();
        self.equations(space)
            .iter()
            .all(|eq| field.dot(eq, v).is_zero())
    }

    /// Vector `sum_i y_i b_i` for intrinsic coordinates `y`.
    pub fn embed(&self, field: &Field, y: &[Elem]) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; self.ambient + 1];
        for (&c, b) in y.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, &bj) in v.iter_mut().zip(b) {
                *x = field.add(*x, field.mul(c, bj));
            }
        }
        v
    }

    /// Indices of the points of the flat in the ambient enumeration.
    pub fn point_indices(&self, space: &Space) -> Vec<usize> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        let field = space.field();
        if self.basis.len() == 2 {
            let (a, b) = (&self.basis[0], &self.basis[1]);
            let mut out: Vec<usize> = field
                .elements()
                .map(|c| {
                    let v: Vec<Elem> = a.iter().zip(b).map(|(&x, &y)| field.add(x, field.mul(c, y))).collect();
                    space.index_of(&v).expect("independent basis")
                })
                .collect();
            out.push(space.index_of(b).expect("nonzero basis vector"));
            return out;
        }
        let local = Space::with_field(self.basis.len() - 1, space.field_arc().clone())
            .expect("flat dimension within the ambient bound");
        local
            .points()
            .map(|y| {
                space
                    .index_of(&self.embed(space.field(), y))
                    .expect("independent basis")
            })
            .collect()
    }

    pub fn points(&self, space: &Space) -> PointSet {
        PointSet::from_indices(space.num_points(), self.point_indices(space))
    }

    pub fn intersect(&self, space: &Space, other: &Flat) -> Flat {
        let mut eqs = self.equations(space);
        eqs.extend(other.equations(space));
        let basis = if eqs.is_empty() {
            self.basis.clone()
        } else {
            Matrix::from_rows(&eqs, space.dim() + 1).nullspace(space.field())
        };
        Flat::span(space, &basis)
    }
}

//! Row reduction over a finite field.

use crate::gf::{Elem, Field};

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<Elem>], cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            m.row_mut(i).copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.data
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot columns.
    pub fn rref(&mut self, field: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = field.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in 0..self.cols {
                let v = field.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = field.sub(self.get(i, j), field.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().rref(field).len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, in reduced form.
    pub fn nullspace(&self, field: &Field) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[f] = Elem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(m.get(r, f));
                }
                v
            })
            .collect()
    }

    /// Indices of a maximal linearly independent subset of rows, greedy in row order.
    pub fn independent_rows(&self, field: &Field) -> Vec<usize> {
        let mut basis: Vec<Vec<Elem>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut chosen = Vec::new();
        for i in 0..self.rows {
            let mut v = self.row(i).to_vec();
            for (b, &pc) in basis.iter().zip(&pivots) {
                let factor = v[pc];
                if !factor.is_zero() {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = field.sub(*x, field.mul(factor, y));
                    }
                }
            }
            if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
                let inv = field.inv(v[pc]).expect("nonzero");
                for x in v.iter_mut() {
                    *x = field.mul(*x, inv);
                }
                // keep the stored basis reduced on the new pivot column
                for (b, _) in basis.iter_mut().zip(&pivots) {
                    let factor = b[pc];
                    if !factor.is_zero() {
                        for (x, &y) in b.iter_mut().zip(&v) {
                            *x = field.sub(*x, field.mul(factor, y));
                        }
                    }
                }
                basis.push(v);
                pivots.push(pc);
                chosen.push(i);
            }
        }
        chosen
    }
}

/// Reduced echelon basis of the span of `vectors` (empty for the zero space).
pub fn span_basis(field: &Field, vectors: &[Vec<Elem>], dim: usize) -> Vec<Vec<Elem>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(vectors, dim);
    let r = m.rref(field).len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

/// Basis of the subspace orthogonal (under the plain dot product) to `vectors`.
pub fn annihilator(field: &Field, vectors: &[Vec<Elem>], dim: usize) -> Vec<Vec<Elem>> {
    if vectors.is_empty() {
        return (0..dim)
            .map(|i| {
                let mut v = vec![Elem::ZERO; dim];
                v[i] = Elem::ONE;
                v
            })
            .collect();
    }
    Matrix::from_rows(vectors, dim).nullspace(field)
}

/// Intersection of two subspaces given by bases.
pub fn intersect_subspaces(
    field: &Field,
    a: &[Vec<Elem>],
    b: &[Vec<Elem>],
    dim: usize,
) -> Vec<Vec<Elem>> {
    // U ∩ W = ann(ann U + ann W)
    let mut eqs = annihilator(field, a, dim);
    eqs.extend(annihilator(field, b, dim));
    if eqs.is_empty() {
        return span_basis(field, a, dim);
    }
    let basis = annihilator(field, &eqs, dim);
    span_basis(field, &basis, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u16]) -> Vec<Elem> {
        v.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn rank_and_nullspace_gf3() {
        let f = Field::with_order(3).unwrap();
        let m = Matrix::from_rows(&[e(&[1, 2, 0]), e(&[2, 1, 0]), e(&[0, 0, 1])], 3);
        assert_eq!(m.rank(&f), 2);
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 1);
        for i in 0..3 {
            assert_eq!(f.dot(m.row(i), &ns[0]), Elem::ZERO);
        }
    }

    #[test]
    fn independent_rows_picks_first_basis() {
        let f = Field::with_order(4).unwrap();
        let rows = vec![e(&[1, 2, 3]), e(&[2, 3, 1]), e(&[0, 0, 0]), e(&[1, 1, 1]), e(&[0, 1, 0])];
        let m = Matrix::from_rows(&rows, 3);
        let idx = m.independent_rows(&f);
        assert_eq!(idx.len(), m.rank(&f));
        assert_eq!(idx[0], 0);
        assert!(!idx.contains(&2));
    }

    #[test]
    fn intersection_of_planes_in_gf5_cube() {
        let f = Field::with_order(5).unwrap();
        let a = vec![e(&[1, 0, 0]), e(&[0, 1, 0])];
        let b = vec![e(&[0, 1, 0]), e(&[0, 0, 1])];
        let i = intersect_subspaces(&f, &a, &b, 3);
        assert_eq!(i, vec![e(&[0, 1, 0])]);
        assert_eq!(annihilator(&f, &a, 3), vec![e(&[0, 0, 1])]);
    }
}

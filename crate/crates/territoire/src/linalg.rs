//! Dense exact linear algebra: reduced row echelon form, kernels, spans.
//!
//! RREF with lexicographic pivot order is the canonical representative of a
//! row span, so two subspaces are equal iff their RREF matrices are equal.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use crate::field::Field;

#[derive(Clone, Debug)]
pub struct Matrix<K: Field> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<K::Elem>,
}

impl<K: Field> PartialEq for Matrix<K> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}
impl<K: Field> Eq for Matrix<K> {}

impl<K: Field> Hash for Matrix<K> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl<K: Field> PartialOrd for Matrix<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<K: Field> Ord for Matrix<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

impl<K: Field> Matrix<K> {
    pub fn new(rows: usize, cols: usize, data: Vec<K::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, data }
    }

    pub fn zeros(field: &K, rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: &K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn at(&self, r: usize, c: usize) -> &K::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut K::Elem {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[K::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[K::Elem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_row_vecs(&self) -> Vec<Vec<K::Elem>> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self, field: &K) -> Self {
        let mut t = Self::zeros(field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix::new(self.rows + other.rows, self.cols, data)
    }

    pub fn matmul(&self, field: &K, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if field.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = field.mul(a, other.at(k, c));
                    *out.at_mut(r, c) = field.add(out.at(r, c), &prod);
                }
            }
        }
        out
    }

    /// Apply the matrix to a vector on the right: M * v.
    pub fn apply(&self, field: &K, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = field.zero();
                for c in 0..self.cols {
                    acc = field.add(&acc, &field.mul(self.at(r, c), &v[c]));
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form. Returns the pivot columns in order.
    /// Zero rows are dropped, so the result has `rank` rows.
    pub fn rref(&mut self, field: &K) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(src) = (pivot_row..self.rows).find(|&r| !field.is_zero(self.at(r, col)))
            else {
                continue;
            };
            self.swap_rows(pivot_row, src);
            let inv = field
                .inv(self.at(pivot_row, col))
                .expect("pivot entry is nonzero");
            for c in col..self.cols {
                *self.at_mut(pivot_row, c) = field.mul(self.at(pivot_row, c), &inv);
            }
            for r in 0..self.rows {
                if r != pivot_row && !field.is_zero(self.at(r, col)) {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let sub = field.mul(&factor, self.at(pivot_row, c));
                        *self.at_mut(r, c) = field.sub(self.at(r, c), &sub);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
            if pivot_row == self.rows {
                break;
            }
        }
        self.data.truncate(pivot_row * self.cols);
        self.rows = pivot_row;
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self, field: &K) -> usize {
        let mut m = self.clone();
        m.rref(field);
        m.rows
    }

    /// Basis of { x : M x = 0 } as the rows of a canonical (RREF) matrix.
    pub fn kernel(&self, field: &K) -> Matrix<K> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let pivot_set: Vec<usize> = pivots.clone();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![field.zero(); self.cols];
            v[f] = field.one();
            for (i, &pc) in pivot_set.iter().enumerate() {
                v[pc] = field.neg(m.at(i, f));
            }
            basis.push(v);
        }
        let mut k = Matrix::from_rows(basis);
        if k.rows == 0 {
            k = Matrix::new(0, self.cols, Vec::new());
        }
        k.rref(field);
        k
    }
}

/// Reduce `v` against an RREF basis in place; afterwards `v` has zero entries
/// at every pivot column. Returns the coefficients used per basis row.
pub fn reduce_against<K: Field>(
    field: &K,
    basis: &Matrix<K>,
    pivots: &[usize],
    v: &mut [K::Elem],
) -> Vec<K::Elem> {
    assert_eq!(basis.rows, pivots.len());
    let mut coeffs = Vec::with_capacity(basis.rows);
    for (r, &pc) in pivots.iter().enumerate() {
        let coeff = v[pc].clone();
        if !field.is_zero(&coeff) {
            for c in 0..basis.cols {
                let sub = field.mul(&coeff, basis.at(r, c));
                v[c] = field.sub(&v[c], &sub);
            }
        }
        coeffs.push(coeff);
    }
    coeffs
}

/// Membership of a vector in the row span of an RREF basis.
pub fn in_row_span<K: Field>(
    field: &K,
    basis: &Matrix<K>,
    pivots: &[usize],
    v: &[K::Elem],
) -> bool {
    let mut w = v.to_vec();
    reduce_against(field, basis, pivots, &mut w);
    w.iter().all(|x| field.is_zero(x))
}

/// Coordinates of `v` in the row span, or None if it is not a member.
pub fn coords_in_row_span<K: Field>(
    field: &K,
    basis: &Matrix<K>,
    pivots: &[usize],
    v: &[K::Elem],
) -> Option<Vec<K::Elem>> {
    let mut w = v.to_vec();
    let coeffs = reduce_against(field, basis, pivots, &mut w);
    if w.iter().all(|x| field.is_zero(x)) {
        Some(coeffs)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn q(n: i64) -> num::BigRational {
        Rationals.from_int(n)
    }

    #[test]
    fn rref_canonicalizes_over_q() {
        let f = Rationals;
        let mut m = Matrix::from_rows(vec![
            vec![q(2), q(4), q(6)],
            vec![q(1), q(2), q(4)],
            vec![q(3), q(6), q(10)],
        ]);
        let pivots = m.rref(&f);
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(m.rows, 2);
        assert_eq!(m.row(0), &[q(1), q(2), q(0)][..]);
        assert_eq!(m.row(1), &[q(0), q(0), q(1)][..]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::<PrimeField>::from_rows(vec![vec![1, 2, 3, 4], vec![0, 1, 1, 0]]);
        let k = m.kernel(&f);
        assert_eq!(k.rows, 2);
        for r in 0..k.rows {
            let image = m.apply(&f, k.row(r));
            assert!(image.iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn span_membership() {
        let f = PrimeField::new(3).unwrap();
        let mut m = Matrix::<PrimeField>::from_rows(vec![vec![1, 1, 0], vec![0, 0, 1]]);
        let pivots = m.rref(&f);
        assert!(in_row_span(&f, &m, &pivots, &[2, 2, 1]));
        assert!(!in_row_span(&f, &m, &pivots, &[1, 0, 0]));
        let coords = coords_in_row_span(&f, &m, &pivots, &[2, 2, 1]).unwrap();
        assert_eq!(coords, vec![2, 1]);
    }

    proptest! {
        // RREF is a canonical form: re-reducing, or reducing any row-scrambled
        // stack of the same rows, gives back the identical matrix.
        #[test]
        fn rref_is_canonical_over_f5(entries in proptest::collection::vec(0u64..5, 12)) {
            let f = PrimeField::new(5).unwrap();
            let mut m = Matrix::<PrimeField>::new(3, 4, entries);
            m.rref(&f);
            let mut doubled = m.vstack(&m);
            doubled.rref(&f);
            prop_assert_eq!(&doubled, &m);
            let mut again = m.clone();
            again.rref(&f);
            prop_assert_eq!(&again, &m);
        }
    }
}

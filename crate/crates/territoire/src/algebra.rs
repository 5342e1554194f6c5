//! Finite-dimensional commutative unital algebras given by structure
//! constants, and their subalgebras in canonical RREF form.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{coords_in_row_span, in_row_span, Matrix};

pub const DEFAULT_CONSTRUCTION_DIM_CAP: usize = 24;

/// Weakly decreasing positive conductances (c_1 >= ... >= c_m >= 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConductanceVector(Vec<u32>);

impl ConductanceVector {
    pub fn new(c: Vec<u32>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidConductances("need at least one factor".into()));
        }
        if c.iter().any(|&x| x == 0) {
            return Err(Error::InvalidConductances("conductances must be >= 1".into()));
        }
        if c.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidConductances(format!(
                "{c:?} is not weakly decreasing"
            )));
        }
        Ok(ConductanceVector(c))
    }

    /// Sort a multiset of conductances into the canonical decreasing order.
    pub fn from_multiset(mut c: Vec<u32>) -> Result<Self> {
        c.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(c)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of factors m, i.e. branches of the normalization germ.
    pub fn branches(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.total() as usize
    }

    /// Index of the first coordinate of factor i.
    pub fn offset(&self, i: usize) -> usize {
        self.0[..i].iter().map(|&x| x as usize).sum()
    }

    /// Coordinate of t_i^j in A_c.
    pub fn coord(&self, i: usize, j: usize) -> usize {
        debug_assert!(j < self.0[i] as usize);
        self.offset(i) + j
    }
}

impl fmt::Display for ConductanceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A failed algebra axiom, reported as data rather than an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraViolation {
    Commutativity { i: usize, j: usize },
    Associativity { i: usize, j: usize, k: usize },
    Unit { i: usize },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraViolation::Commutativity { i, j } => {
                write!(f, "commutativity violation at ({i},{j})")
            }
            AlgebraViolation::Associativity { i, j, k } => {
                write!(f, "associativity violation at ({i},{j},{k})")
            }
            AlgebraViolation::Unit { i } => write!(f, "unit violation at {i}"),
        }
    }
}

/// A commutative unital algebra of finite dimension over an exact field,
/// given by a dense structure-constant table c_{ij}^k.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra<K: Field> {
    pub field: K,
    pub dim: usize,
    pub labels: Vec<String>,
    pub unit: Vec<K::Elem>,
    table: Vec<K::Elem>,
}

impl<K: Field> FiniteAlgebra<K> {
    pub fn from_structure_constants(
        field: K,
        dim: usize,
        labels: Vec<String>,
        unit: Vec<K::Elem>,
        table: Vec<K::Elem>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidField("algebra dimension must be >= 1".into()));
        }
        if labels.len() != dim || unit.len() != dim || table.len() != dim * dim * dim {
            return Err(Error::Schema {
                path: "structure_constants".into(),
                msg: format!(
                    "expected {dim} labels, {dim} unit coordinates and {} table entries",
                    dim * dim * dim
                ),
            });
        }
        Ok(FiniteAlgebra {
            field,
            dim,
            labels,
            unit,
            table,
        })
    }

    /// The truncated-polynomial product algebra with the given conductances:
    /// one factor k[t_i]/(t_i^{c_i}) per entry, basis vectors t_i^j.
    pub fn truncated_product(c: &ConductanceVector, field: K, dim_cap: usize) -> Result<Self> {
        let n = c.dim();
        if n > dim_cap {
            return Err(Error::SizeCap {
                what: "truncated product construction",
                requested: n,
                cap: dim_cap,
            });
        }
        let m = c.branches();
        let mut labels = Vec::with_capacity(n);
        for (i, &ci) in c.parts().iter().enumerate() {
            for j in 0..ci as usize {
                labels.push(match (m, j) {
                    (1, 0) => "1".to_string(),
                    (1, 1) => "t".to_string(),
                    (1, _) => format!("t^{j}"),
                    (_, 0) => format!("e{}", i + 1),
                    (_, 1) => format!("t{}", i + 1),
                    (_, _) => format!("t{}^{}", i + 1, j),
                });
            }
        }
        let mut table = vec![field.zero(); n * n * n];
        for i in 0..m {
            let ci = c.parts()[i] as usize;
            for a in 0..ci {
                for b in 0..ci {
                    if a + b < ci {
                        let x = c.coord(i, a);
                        let y = c.coord(i, b);
                        let z = c.coord(i, a + b);
                        table[(x * n + y) * n + z] = field.one();
                    }
                }
            }
        }
        let mut unit = vec![field.zero(); n];
        for i in 0..m {
            unit[c.coord(i, 0)] = field.one();
        }
        FiniteAlgebra::from_structure_constants(field, n, labels, unit, table)
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &K::Elem {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    /// The product e_i * e_j as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &[K::Elem] {
        let n = self.dim;
        &self.table[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn mul_vec(&self, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for i in 0..self.dim {
            if f.is_zero(&a[i]) {
                continue;
            }
            for j in 0..self.dim {
                if f.is_zero(&b[j]) {
                    continue;
                }
                let coeff = f.mul(&a[i], &b[j]);
                let prod = self.basis_product(i, j);
                for k in 0..self.dim {
                    if !f.is_zero(&prod[k]) {
                        let term = f.mul(&coeff, &prod[k]);
                        out[k] = f.add(&out[k], &term);
                    }
                }
            }
        }
        out
    }

    /// Check commutativity, associativity and the unit axiom on all basis
    /// tuples. Violations are data, not failures.
    pub fn validate(&self) -> Vec<AlgebraViolation> {
        let f = &self.field;
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    out.push(AlgebraViolation::Commutativity { i, j });
                }
            }
        }
        let basis = |i: usize| {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            v
        };
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..n {
                    let left = self.mul_vec(&ij, &basis(k));
                    let jk = self.basis_product(j, k).to_vec();
                    let right = self.mul_vec(&basis(i), &jk);
                    if left != right {
                        out.push(AlgebraViolation::Associativity { i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            let prod = self.mul_vec(&self.unit, &basis(i));
            if prod != basis(i) {
                out.push(AlgebraViolation::Unit { i });
            }
        }
        out
    }

    /// Quotient by an ideal, returning the quotient algebra and the
    /// projection matrix (quotient coordinates of each ambient basis vector).
    pub fn quotient_by_ideal(&self, ideal_basis: &Matrix<K>) -> Result<(FiniteAlgebra<K>, Matrix<K>)> {
        let f = &self.field;
        let n = self.dim;
        assert_eq!(ideal_basis.cols, n, "ideal basis has wrong width");
        let mut ideal = ideal_basis.clone();
        let pivots = ideal.rref(f);

        for r in 0..ideal.rows {
            for j in 0..n {
                let mut basis_j = vec![f.zero(); n];
                basis_j[j] = f.one();
                let prod = self.mul_vec(ideal.row(r), &basis_j);
                if !in_row_span(f, &ideal, &pivots, &prod) {
                    return Err(Error::NotAnIdeal { row: r, with: j });
                }
            }
        }
        if in_row_span(f, &ideal, &pivots, &self.unit) {
            return Err(Error::UnitInIdeal);
        }

        let nonpivots: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let q = nonpivots.len();
        // proj(v) = non-pivot coordinates of v reduced against the ideal
        let proj = |v: &[K::Elem]| -> Vec<K::Elem> {
            let mut w = v.to_vec();
            crate::linalg::reduce_against(f, &ideal, &pivots, &mut w);
            nonpivots.iter().map(|&c| w[c].clone()).collect()
        };
        let mut projection = Matrix::zeros(f, q, n);
        for j in 0..n {
            let mut basis_j = vec![f.zero(); n];
            basis_j[j] = f.one();
            let col = proj(&basis_j);
            for (l, val) in col.into_iter().enumerate() {
                *projection.at_mut(l, j) = val;
            }
        }
        let mut table = vec![f.zero(); q * q * q];
        for (a, &ca) in nonpivots.iter().enumerate() {
            for (b, &cb) in nonpivots.iter().enumerate() {
                let prod = proj(self.basis_product(ca, cb));
                for (k, val) in prod.into_iter().enumerate() {
                    table[(a * q + b) * q + k] = val;
                }
            }
        }
        let labels = nonpivots.iter().map(|&c| self.labels[c].clone()).collect();
        let unit = proj(&self.unit);
        let quotient = FiniteAlgebra::from_structure_constants(f.clone(), q, labels, unit, table)?;
        Ok((quotient, projection))
    }
}

/// The m canonical orthogonal idempotents of A_c (indicators of the factors).
pub fn block_idempotents<K: Field>(c: &ConductanceVector, field: &K) -> Vec<Vec<K::Elem>> {
    let n = c.dim();
    (0..c.branches())
        .map(|i| {
            let mut v = vec![field.zero(); n];
            v[c.coord(i, 0)] = field.one();
            v
        })
        .collect()
}

/// A unital multiplicatively closed subspace of a fixed ambient algebra,
/// stored as the canonical RREF basis of its span.
#[derive(Clone, Debug)]
pub struct Subalgebra<K: Field> {
    pub ambient: Arc<FiniteAlgebra<K>>,
    pub basis: Matrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Field> PartialEq for Subalgebra<K> {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}
impl<K: Field> Eq for Subalgebra<K> {}

impl<K: Field> PartialOrd for Subalgebra<K> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<K: Field> Ord for Subalgebra<K> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.pivots, &self.basis).cmp(&(&other.pivots, &other.basis))
    }
}

impl<K: Field> Subalgebra<K> {
    /// Canonicalize a spanning set and verify it is a unital subalgebra.
    pub fn from_span(ambient: &Arc<FiniteAlgebra<K>>, rows: Vec<Vec<K::Elem>>) -> Result<Self> {
        let f = &ambient.field;
        let mut basis = if rows.is_empty() {
            Matrix::new(0, ambient.dim, Vec::new())
        } else {
            Matrix::from_rows(rows)
        };
        if basis.cols != ambient.dim {
            return Err(Error::InvalidSubalgebra(format!(
                "basis vectors have length {}, ambient dimension is {}",
                basis.cols, ambient.dim
            )));
        }
        let pivots = basis.rref(f);
        if !in_row_span(f, &basis, &pivots, &ambient.unit) {
            return Err(Error::InvalidSubalgebra("span does not contain the unit".into()));
        }
        for i in 0..basis.rows {
            for j in i..basis.rows {
                let prod = ambient.mul_vec(basis.row(i), basis.row(j));
                if !in_row_span(f, &basis, &pivots, &prod) {
                    return Err(Error::InvalidSubalgebra(format!(
                        "span is not closed: product of basis rows {i} and {j} escapes"
                    )));
                }
            }
        }
        Ok(Subalgebra {
            ambient: Arc::clone(ambient),
            basis,
            pivots,
        })
    }

    /// Smallest unital multiplicatively closed subspace containing the
    /// generators, by iterated span-and-multiply to a fixed point.
    pub fn generated_by(ambient: &Arc<FiniteAlgebra<K>>, gens: &[Vec<K::Elem>]) -> Result<Self> {
        let f = &ambient.field;
        for g in gens {
            if g.len() != ambient.dim {
                return Err(Error::InvalidSubalgebra(format!(
                    "generator has length {}, ambient dimension is {}",
                    g.len(),
                    ambient.dim
                )));
            }
        }
        let mut rows = vec![ambient.unit.clone()];
        rows.extend(gens.iter().cloned());
        let mut basis = Matrix::from_rows(rows);
        let mut pivots = basis.rref(f);
        loop {
            let mut new_rows = Vec::new();
            for i in 0..basis.rows {
                for j in i..basis.rows {
                    let prod = ambient.mul_vec(basis.row(i), basis.row(j));
                    if !in_row_span(f, &basis, &pivots, &prod) {
                        new_rows.push(prod);
                    }
                }
            }
            if new_rows.is_empty() {
                break;
            }
            basis = basis.vstack(&Matrix::from_rows(new_rows));
            pivots = basis.rref(f);
        }
        Ok(Subalgebra {
            ambient: Arc::clone(ambient),
            basis,
            pivots,
        })
    }

    /// The whole ambient algebra as a subalgebra of itself.
    pub fn full(ambient: &Arc<FiniteAlgebra<K>>) -> Self {
        let f = &ambient.field;
        Subalgebra {
            ambient: Arc::clone(ambient),
            basis: Matrix::identity(f, ambient.dim),
            pivots: (0..ambient.dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn corank(&self) -> usize {
        self.ambient.dim - self.dim()
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        in_row_span(&self.ambient.field, &self.basis, &self.pivots, v)
    }

    /// Coordinates of an ambient vector in this basis, if it is a member.
    pub fn coords(&self, v: &[K::Elem]) -> Option<Vec<K::Elem>> {
        coords_in_row_span(&self.ambient.field, &self.basis, &self.pivots, v)
    }

    /// Realize the subalgebra as a standalone algebra together with the
    /// inclusion (rows of the returned matrix are the images of its basis).
    pub fn as_algebra(&self) -> Result<(FiniteAlgebra<K>, Matrix<K>)> {
        let f = &self.ambient.field;
        let d = self.dim();
        let mut table = vec![f.zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                let prod = self.ambient.mul_vec(self.basis.row(i), self.basis.row(j));
                let coords = self.coords(&prod).ok_or_else(|| {
                    Error::Corrupted("basis product escapes the subalgebra span".into())
                })?;
                for (k, val) in coords.into_iter().enumerate() {
                    table[(i * d + j) * d + k] = val;
                }
            }
        }
        let unit = self.coords(&self.ambient.unit).ok_or_else(|| {
            Error::Corrupted("ambient unit is not in the subalgebra span".into())
        })?;
        let labels = (0..d).map(|i| format!("b{}", i + 1)).collect();
        let alg = FiniteAlgebra::from_structure_constants(f.clone(), d, labels, unit, table)?;
        Ok((alg, self.basis.clone()))
    }
}

/// The subalgebra A^+_c of A_c: all tuples of polynomials with equal
/// constant terms. Corank is m - 1.
pub fn plus_subalgebra<K: Field>(
    c: &ConductanceVector,
    ambient: &Arc<FiniteAlgebra<K>>,
) -> Result<Subalgebra<K>> {
    let f = &ambient.field;
    let n = c.dim();
    if ambient.dim != n {
        return Err(Error::NotTruncatedProduct);
    }
    let mut rows = vec![ambient.unit.clone()];
    for (i, &ci) in c.parts().iter().enumerate() {
        for j in 1..ci as usize {
            let mut v = vec![f.zero(); n];
            v[c.coord(i, j)] = f.one();
            rows.push(v);
        }
    }
    Subalgebra::from_span(ambient, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn arc<K: Field>(a: FiniteAlgebra<K>) -> Arc<FiniteAlgebra<K>> {
        Arc::new(a)
    }

    #[test]
    fn truncated_product_validates() {
        let c = ConductanceVector::new(vec![2]).unwrap();
        let f2 = PrimeField::new(2).unwrap();
        let a = FiniteAlgebra::truncated_product(&c, f2, 24).unwrap();
        assert_eq!(a.dim, 2);
        // t*t = 0 after truncation at t^2
        assert!(a.basis_product(1, 1).iter().all(|x| *x == 0));
        assert!(a.validate().is_empty());

        let c22 = ConductanceVector::new(vec![2, 2]).unwrap();
        let aq = FiniteAlgebra::truncated_product(&c22, Rationals, 24).unwrap();
        assert_eq!(aq.dim, 4);
        assert!(aq.validate().is_empty());

        let c111 = ConductanceVector::new(vec![1, 1, 1]).unwrap();
        let a3 = FiniteAlgebra::truncated_product(&c111, PrimeField::new(2).unwrap(), 24).unwrap();
        assert!(a3.validate().is_empty());
        // componentwise product of indicators
        assert_eq!(a3.basis_product(0, 0), &[1, 0, 0][..]);
        assert_eq!(a3.basis_product(0, 1), &[0, 0, 0][..]);
    }

    #[test]
    fn validator_reports_asymmetric_table() {
        let f2 = PrimeField::new(2).unwrap();
        // 2-dim "algebra" with e1*e1 = 1 but table made asymmetric in (1,0)
        let mut table = vec![0u64; 8];
        // unit = e0; e0*e0 = e0, e0*e1 = e1, e1*e0 = 0 (broken), e1*e1 = 0
        table[(0 * 2 + 0) * 2 + 0] = 1;
        table[(0 * 2 + 1) * 2 + 1] = 1;
        let a = FiniteAlgebra::from_structure_constants(
            f2,
            2,
            vec!["1".into(), "t".into()],
            vec![1, 0],
            table,
        )
        .unwrap();
        let violations = a.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, AlgebraViolation::Commutativity { i: 0, j: 1 })));
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let c = ConductanceVector::new(vec![13, 12]).unwrap();
        let err = FiniteAlgebra::truncated_product(&c, Rationals, 24).unwrap_err();
        assert!(matches!(err, Error::SizeCap { .. }));
    }

    #[test]
    fn plus_subalgebra_shapes() {
        let f3 = PrimeField::new(3).unwrap();
        let c22 = ConductanceVector::new(vec![2, 2]).unwrap();
        let a = arc(FiniteAlgebra::truncated_product(&c22, f3, 24).unwrap());
        let plus = plus_subalgebra(&c22, &a).unwrap();
        assert_eq!(plus.dim(), 3);
        assert_eq!(plus.corank(), 1);

        let c3 = ConductanceVector::new(vec![3]).unwrap();
        let a3 = arc(FiniteAlgebra::truncated_product(&c3, f3, 24).unwrap());
        assert_eq!(plus_subalgebra(&c3, &a3).unwrap().corank(), 0);

        let c111 = ConductanceVector::new(vec![1, 1, 1]).unwrap();
        let a111 = arc(FiniteAlgebra::truncated_product(&c111, f3, 24).unwrap());
        let diag = plus_subalgebra(&c111, &a111).unwrap();
        assert_eq!(diag.dim(), 1);
        assert_eq!(diag.corank(), 2);
    }

    #[test]
    fn generated_subalgebra_reaches_fixed_point() {
        let f5 = PrimeField::new(5).unwrap();
        let c4 = ConductanceVector::new(vec![4]).unwrap();
        let a = arc(FiniteAlgebra::truncated_product(&c4, f5, 24).unwrap());
        // (t^2 + t^3)^2 = 0 in F_5[t]/(t^4), so the closure is 2-dimensional
        let g = vec![0, 0, 1, 1].into_iter().collect::<Vec<u64>>();
        let b = Subalgebra::generated_by(&a, &[g]).unwrap();
        assert_eq!(b.dim(), 2);
        // idempotent: regenerating from the returned basis is identical
        let again = Subalgebra::generated_by(&a, &b.basis.to_row_vecs()).unwrap();
        assert_eq!(again, b);

        // t generates everything in F_2[t]/(t^4)
        let f2 = PrimeField::new(2).unwrap();
        let a2 = arc(FiniteAlgebra::truncated_product(&c4, f2, 24).unwrap());
        let whole = Subalgebra::generated_by(&a2, &[vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(whole.dim(), 4);

        // empty generation gives span{1}
        let one = Subalgebra::generated_by(&a2, &[]).unwrap();
        assert_eq!(one.dim(), 1);
    }

    #[test]
    fn quotients() {
        let f3 = PrimeField::new(3).unwrap();
        let c4 = ConductanceVector::new(vec![4]).unwrap();
        let a = FiniteAlgebra::truncated_product(&c4, f3, 24).unwrap();
        // mod (t^2): spanned by t^2, t^3
        let ideal = Matrix::<PrimeField>::from_rows(vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        let (q, proj) = a.quotient_by_ideal(&ideal).unwrap();
        assert_eq!(q.dim, 2);
        assert!(q.validate().is_empty());
        assert_eq!(proj.rows, 2);
        // t^2 projects to zero
        assert_eq!(proj.apply(&f3, &[0, 0, 1, 0]), vec![0, 0]);

        // span{t} is not an ideal of F_3[t]/(t^4): t*t = t^2 escapes
        let not_ideal = Matrix::<PrimeField>::from_rows(vec![vec![0, 1, 0, 0]]);
        assert!(matches!(
            a.quotient_by_ideal(&not_ideal),
            Err(Error::NotAnIdeal { .. })
        ));

        // unit in ideal is rejected
        let c2 = ConductanceVector::new(vec![2]).unwrap();
        let a2 = FiniteAlgebra::truncated_product(&c2, f3, 24).unwrap();
        let unit_ideal = Matrix::<PrimeField>::from_rows(vec![vec![1, 0], vec![0, 1]]);
        assert!(matches!(
            a2.quotient_by_ideal(&unit_ideal),
            Err(Error::UnitInIdeal)
        ));

        // A_{(2,2)} mod (t_1, t_2) = F_p^2
        let c22 = ConductanceVector::new(vec![2, 2]).unwrap();
        let a22 = FiniteAlgebra::truncated_product(&c22, f3, 24).unwrap();
        let tt = Matrix::<PrimeField>::from_rows(vec![vec![0, 1, 0, 0], vec![0, 0, 0, 1]]);
        let (q2, _) = a22.quotient_by_ideal(&tt).unwrap();
        assert_eq!(q2.dim, 2);
        assert!(q2.validate().is_empty());
        assert_eq!(q2.basis_product(0, 1), &[0, 0][..]);
    }

    #[test]
    fn idempotents_sum_to_unit_and_are_orthogonal() {
        let f5 = PrimeField::new(5).unwrap();
        for c in [vec![2, 2], vec![4], vec![1, 1, 1]] {
            let c = ConductanceVector::new(c).unwrap();
            let a = FiniteAlgebra::truncated_product(&c, f5, 24).unwrap();
            let es = block_idempotents(&c, &f5);
            let mut sum = vec![0u64; a.dim];
            for e in &es {
                for (s, x) in sum.iter_mut().zip(e) {
                    *s = f5.add(s, x);
                }
            }
            assert_eq!(sum, a.unit);
            for (i, ei) in es.iter().enumerate() {
                for (j, ej) in es.iter().enumerate() {
                    let prod = a.mul_vec(ei, ej);
                    if i == j {
                        assert_eq!(&prod, ei);
                    } else {
                        assert!(prod.iter().all(|x| *x == 0));
                    }
                }
            }
        }
    }

    #[test]
    fn as_algebra_preserves_structure() {
        let f3 = PrimeField::new(3).unwrap();
        let c22 = ConductanceVector::new(vec![2, 2]).unwrap();
        let a = arc(FiniteAlgebra::truncated_product(&c22, f3, 24).unwrap());
        let plus = plus_subalgebra(&c22, &a).unwrap();
        let (pa, inclusion) = plus.as_algebra().unwrap();
        assert_eq!(pa.dim, 3);
        assert!(pa.validate().is_empty());
        assert_eq!(inclusion.rows, 3);
    }
}

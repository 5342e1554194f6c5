//! Numerical invariants of subalgebras: delta, conductor, delta-prime,
//! branch conductances, gluing profiles, and the Gorenstein test.

use serde::Serialize;

use crate::algebra::{block_idempotents, ConductanceVector, Subalgebra};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::linalg::{in_row_span, Matrix};

/// Corank of the subalgebra in its ambient algebra.
pub fn delta<K: Field>(b: &Subalgebra<K>) -> usize {
    b.corank()
}

/// Basis (RREF) of the conductor { x in B : x * A is contained in B },
/// computed as the kernel of the multiplication map B -> Hom(A/B, A/B).
/// The result is an ideal of the ambient algebra contained in B.
pub fn conductor<K: Field>(b: &Subalgebra<K>) -> Matrix<K> {
    let alg = &b.ambient;
    let f = &alg.field;
    let n = alg.dim;
    let d = b.dim();
    let corank = n - d;
    if corank == 0 {
        return b.basis.clone();
    }
    let nonpivots: Vec<usize> = (0..n).filter(|c| !b.pivots.contains(c)).collect();
    // quotient coordinates of v in A/B
    let proj = |v: &[K::Elem]| -> Vec<K::Elem> {
        let mut w = v.to_vec();
        crate::linalg::reduce_against(f, &b.basis, &b.pivots, &mut w);
        nonpivots.iter().map(|&c| w[c].clone()).collect()
    };
    // Row r = flattened matrix of multiplication by basis row r on A/B.
    // The kernel of the transpose-free system M x = 0 (columns = basis rows)
    // is what we want, so build M with one column per basis row.
    let mut m = Matrix::zeros(f, corank * corank, d);
    for r in 0..d {
        for (l, &np) in nonpivots.iter().enumerate() {
            let mut lift = vec![f.zero(); n];
            lift[np] = f.one();
            let prod = alg.mul_vec(b.basis.row(r), &lift);
            let coords = proj(&prod);
            for (k, val) in coords.into_iter().enumerate() {
                *m.at_mut(k * corank + l, r) = val;
            }
        }
    }
    let kernel = m.kernel(f);
    // back to ambient coordinates
    let mut rows = Vec::with_capacity(kernel.rows);
    for r in 0..kernel.rows {
        let mut v = vec![f.zero(); n];
        for (i, coeff) in kernel.row(r).iter().enumerate() {
            for c in 0..n {
                let term = f.mul(coeff, b.basis.at(i, c));
                v[c] = f.add(&v[c], &term);
            }
        }
        rows.push(v);
    }
    let mut out = if rows.is_empty() {
        Matrix::new(0, n, Vec::new())
    } else {
        Matrix::from_rows(rows)
    };
    out.rref(f);
    out
}

/// dim B - dim conductor(B). Zero exactly for B = A, by convention.
pub fn delta_prime<K: Field>(b: &Subalgebra<K>) -> usize {
    b.dim() - conductor(b).rows
}

/// Enumerate every subspace of B (over F_p) that is an ideal of the ambient
/// algebra and accumulate their span: the largest ideal contained in B.
/// This is the independent brute-force oracle for `conductor`.
pub fn largest_ideal_bruteforce(
    b: &Subalgebra<PrimeField>,
    dim_cap: usize,
    candidate_cap: u128,
) -> Result<Matrix<PrimeField>> {
    let alg = &b.ambient;
    let f = &alg.field;
    let n = alg.dim;
    if n > dim_cap {
        return Err(Error::SizeCap {
            what: "exhaustive ideal enumeration",
            requested: n,
            cap: dim_cap,
        });
    }
    let p = f.characteristic();
    let d = b.dim();
    let mut candidates: u128 = 0;
    for k in 0..=d {
        candidates = candidates.saturating_add(crate::pointcount::gaussian_binomial(d, k, p));
    }
    if candidates > candidate_cap {
        return Err(Error::Budget {
            what: "exhaustive ideal enumeration",
            needed: candidates,
            cap: candidate_cap,
        });
    }

    let mut span_rows: Vec<Vec<u64>> = Vec::new();
    for k in 0..=d {
        // subspaces of B of dimension k, in B-coordinates
        for coords in crate::pointcount::rref_matrices(*f, k, d) {
            // map rows to ambient coordinates
            let rows: Vec<Vec<u64>> = (0..coords.rows)
                .map(|r| {
                    let mut v = vec![0u64; n];
                    for (i, coeff) in coords.row(r).iter().enumerate() {
                        for c in 0..n {
                            let term = f.mul(coeff, b.basis.at(i, c));
                            v[c] = f.add(&v[c], &term);
                        }
                    }
                    v
                })
                .collect();
            let mut sub = Matrix::<PrimeField>::from_rows(rows.clone());
            let pivots = sub.rref(f);
            if sub.rows != k {
                continue;
            }
            let mut is_ideal = true;
            'outer: for r in 0..sub.rows {
                for j in 0..n {
                    let mut basis_j = vec![0u64; n];
                    basis_j[j] = 1;
                    let prod = alg.mul_vec(sub.row(r), &basis_j);
                    if !in_row_span(f, &sub, &pivots, &prod) {
                        is_ideal = false;
                        break 'outer;
                    }
                }
            }
            if is_ideal {
                span_rows.extend(rows);
            }
        }
    }
    let mut out = if span_rows.is_empty() {
        Matrix::new(0, n, Vec::new())
    } else {
        Matrix::from_rows(span_rows)
    };
    out.rref(f);
    Ok(out)
}

/// True iff every ideal of the ambient algebra contained in B lies inside
/// the kernel-computed conductor (equivalently, the span of all such ideals
/// equals the conductor).
pub fn conductor_is_largest_ideal(
    b: &Subalgebra<PrimeField>,
    dim_cap: usize,
    candidate_cap: u128,
) -> Result<bool> {
    let brute = largest_ideal_bruteforce(b, dim_cap, candidate_cap)?;
    Ok(brute == conductor(b))
}

/// Per-branch colengths of the conductor in A_c, weakly decreasing.
/// Their sum is delta + delta_prime.
pub fn branch_conductances(
    c: &ConductanceVector,
    b: &Subalgebra<impl Field>,
) -> Result<Vec<u32>> {
    let alg = &b.ambient;
    if alg.dim != c.dim() {
        return Err(Error::NotTruncatedProduct);
    }
    let f = &alg.field;
    let cond = conductor(b);
    let es = block_idempotents(c, f);
    let mut out = Vec::with_capacity(c.branches());
    for (i, e) in es.iter().enumerate() {
        let rows: Vec<Vec<_>> = (0..cond.rows)
            .map(|r| alg.mul_vec(cond.row(r), e))
            .collect();
        let dim_ei_cond = if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(rows).rank(f)
        };
        out.push(c.parts()[i] - dim_ei_cond as u32);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

/// The partition of branches identified by the subalgebra, with the genus of
/// the singularity glued on each part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GluingProfile {
    /// Non-empty disjoint blocks of factor indices (0-based), each sorted,
    /// ordered by smallest element.
    pub partition: Vec<Vec<usize>>,
    /// Genus per block, parallel to `partition`.
    pub genera: Vec<u32>,
}

impl GluingProfile {
    /// Sum over parts of (g_P + |P| - 1); equals delta for genuine profiles.
    pub fn delta(&self) -> u32 {
        self.partition
            .iter()
            .zip(&self.genera)
            .map(|(p, g)| g + p.len() as u32 - 1)
            .sum()
    }
}

/// Compute the gluing profile of a subalgebra of A_c: which factor constants
/// it identifies, and the corank of e_P B in e_P A^+ per block.
pub fn gluing_profile<K: Field>(
    c: &ConductanceVector,
    b: &Subalgebra<K>,
) -> Result<GluingProfile> {
    let alg = &b.ambient;
    if alg.dim != c.dim() {
        return Err(Error::NotTruncatedProduct);
    }
    let f = &alg.field;
    let m = c.branches();
    // project to the constant coordinates
    let proj_rows: Vec<Vec<K::Elem>> = (0..b.dim())
        .map(|r| (0..m).map(|i| b.basis.at(r, c.coord(i, 0)).clone()).collect())
        .collect();
    let mut image = Matrix::from_rows(proj_rows);
    image.rref(f);
    // blocks = classes of identical columns
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    'cols: for col in 0..m {
        let col_vals: Vec<K::Elem> = (0..image.rows).map(|r| image.at(r, col).clone()).collect();
        for block in blocks.iter_mut() {
            let rep = block[0];
            let rep_vals: Vec<K::Elem> =
                (0..image.rows).map(|r| image.at(r, rep).clone()).collect();
            if rep_vals == col_vals {
                block.push(col);
                continue 'cols;
            }
        }
        blocks.push(vec![col]);
    }
    if blocks.len() != image.rows {
        return Err(Error::Corrupted(format!(
            "projection to constants has rank {} but {} identification classes",
            image.rows,
            blocks.len()
        )));
    }
    // genus per block: corank of e_P B inside e_P A^+
    let mut genera = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let plus_dim: usize = 1 + block
            .iter()
            .map(|&i| c.parts()[i] as usize - 1)
            .sum::<usize>();
        let mut e_p = vec![f.zero(); alg.dim];
        for &i in block {
            e_p[c.coord(i, 0)] = f.one();
        }
        let rows: Vec<Vec<K::Elem>> = (0..b.dim())
            .map(|r| alg.mul_vec(b.basis.row(r), &e_p))
            .collect();
        let dim_ep_b = Matrix::from_rows(rows).rank(f);
        genera.push((plus_dim - dim_ep_b) as u32);
    }
    Ok(GluingProfile {
        partition: blocks,
        genera,
    })
}

/// All invariants of one subalgebra in a single report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantRecord {
    pub delta: usize,
    pub delta_prime: usize,
    pub conductor_dim: usize,
    /// Rendered rows of the canonical conductor basis in ambient coordinates.
    pub conductor_basis: Vec<Vec<String>>,
    /// Present only when the ambient is an A_c.
    pub branch_conductances: Option<Vec<u32>>,
    /// Number of branches m of the normalization germ; None off A_c.
    pub branches_after_gluing: Option<usize>,
    /// delta - (m - 1); None off A_c.
    pub genus: Option<i64>,
    pub gluing: Option<GluingProfile>,
    pub gorenstein: bool,
}

/// Aggregate record; pass the conductances when the ambient is an A_c.
pub fn full_record<K: Field>(
    b: &Subalgebra<K>,
    c: Option<&ConductanceVector>,
) -> Result<InvariantRecord> {
    let d = delta(b);
    let cond = conductor(b);
    let dp = b.dim() - cond.rows;
    let field = &b.ambient.field;
    let conductor_basis = (0..cond.rows)
        .map(|r| cond.row(r).iter().map(|x| field.render(x)).collect())
        .collect();
    let (bc, m, genus, gluing) = match c {
        Some(c) => {
            let bc = branch_conductances(c, b)?;
            let profile = gluing_profile(c, b)?;
            let m = c.branches();
            (Some(bc), Some(m), Some(d as i64 - (m as i64 - 1)), Some(profile))
        }
        None => (None, None, None, None),
    };
    Ok(InvariantRecord {
        delta: d,
        delta_prime: dp,
        conductor_dim: cond.rows,
        conductor_basis,
        branch_conductances: bc,
        branches_after_gluing: m,
        genus,
        gluing,
        // delta = 0 reports delta' = 0 and counts as Gorenstein by convention
        gorenstein: dp == d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{plus_subalgebra, FiniteAlgebra};
    use std::sync::Arc;

    fn trunc(c: &[u32], p: u64) -> (ConductanceVector, Arc<FiniteAlgebra<PrimeField>>) {
        let c = ConductanceVector::new(c.to_vec()).unwrap();
        let f = PrimeField::new(p).unwrap();
        let a = Arc::new(FiniteAlgebra::truncated_product(&c, f, 24).unwrap());
        (c, a)
    }

    fn span(a: &Arc<FiniteAlgebra<PrimeField>>, rows: &[&[u64]]) -> Subalgebra<PrimeField> {
        Subalgebra::from_span(a, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn delta_basics() {
        let (_, a) = trunc(&[4], 5);
        assert_eq!(delta(&Subalgebra::full(&a)), 0);
        let b = span(&a, &[&[1, 0, 0, 0], &[0, 0, 1, 1]]);
        assert_eq!(delta(&b), 2);
        let (_, a2) = trunc(&[1, 1], 5);
        let node = span(&a2, &[&[1, 1]]);
        assert_eq!(delta(&node), 1);
    }

    #[test]
    fn conductor_examples_from_kernel_and_oracle() {
        for p in [2u64, 3, 5] {
            let (_, a) = trunc(&[4], p);
            // span{1, t^2+t^3} is a normalization of the ramphoid cusp, which
            // is Gorenstein with delta' = delta = 2, so its conductor in the
            // truncated model is zero (dim A - dim cond = delta + delta').
            let b = span(&a, &[&[1, 0, 0, 0], &[0, 0, 1, 1]]);
            let cond = conductor(&b);
            assert_eq!(cond.rows, 0);
            assert_eq!(largest_ideal_bruteforce(&b, 12, 1 << 20).unwrap(), cond);

            // span{1, t^3}: conductor is span{t^3}
            let b2 = span(&a, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]);
            let cond2 = conductor(&b2);
            assert_eq!(cond2.rows, 1);
            assert_eq!(cond2.row(0), &[0, 0, 0, 1][..]);
            assert!(conductor_is_largest_ideal(&b2, 12, 1 << 20).unwrap());

            // whole algebra: conductor is everything
            let full = Subalgebra::full(&a);
            assert_eq!(conductor(&full).rows, 4);
            assert_eq!(delta_prime(&full), 0);
        }
    }

    #[test]
    fn node_conductor_is_zero() {
        let (_, a) = trunc(&[1, 1], 2);
        let node = span(&a, &[&[1, 1]]);
        assert_eq!(conductor(&node).rows, 0);
        assert!(conductor_is_largest_ideal(&node, 12, 1 << 20).unwrap());
        assert_eq!(delta_prime(&node), 1);
    }

    #[test]
    fn delta_prime_examples() {
        let (_, a) = trunc(&[4], 7);
        let b = span(&a, &[&[1, 0, 0, 0], &[0, 0, 1, 1]]);
        assert_eq!(delta_prime(&b), 2);
        let b2 = span(&a, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(delta_prime(&b2), 1);
        let (_, a3) = trunc(&[1, 1, 1], 7);
        let triple = span(&a3, &[&[1, 1, 1]]);
        assert_eq!(delta_prime(&triple), 1);
    }

    #[test]
    fn branch_conductance_examples() {
        let (c, a) = trunc(&[2, 2], 5);
        // tacnode normalization: (1,1) and (t1, u t2) with u = 2
        let tac = span(&a, &[&[1, 0, 1, 0], &[0, 1, 0, 2]]);
        assert_eq!(branch_conductances(&c, &tac).unwrap(), vec![2, 2]);
        // cusp glued to a transverse line
        let cusp_line = span(&a, &[&[1, 0, 1, 0], &[0, 1, 0, 0]]);
        assert_eq!(branch_conductances(&c, &cusp_line).unwrap(), vec![2, 1]);
        // whole algebra: all conductances zero
        let full = Subalgebra::full(&a);
        assert_eq!(branch_conductances(&c, &full).unwrap(), vec![0, 0]);
    }

    #[test]
    fn conductance_sum_is_delta_plus_delta_prime() {
        let (c, a) = trunc(&[2, 2], 3);
        for rows in [
            vec![vec![1u64, 0, 1, 0], vec![0, 1, 0, 1]],
            vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0]],
            vec![vec![1, 0, 1, 0]],
        ] {
            let b = Subalgebra::from_span(&a, rows).unwrap();
            let sum: u32 = branch_conductances(&c, &b).unwrap().iter().sum();
            assert_eq!(sum as usize, delta(&b) + delta_prime(&b));
        }
    }

    #[test]
    fn gluing_profiles() {
        let (c, a) = trunc(&[1, 1], 5);
        let node = span(&a, &[&[1, 1]]);
        let prof = gluing_profile(&c, &node).unwrap();
        assert_eq!(prof.partition, vec![vec![0, 1]]);
        assert_eq!(prof.genera, vec![0]);
        assert_eq!(prof.delta(), 1);

        let (c22, a22) = trunc(&[2, 2], 5);
        // two cusps: constants in each factor
        let cusps = span(&a22, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        let prof = gluing_profile(&c22, &cusps).unwrap();
        assert_eq!(prof.partition, vec![vec![0], vec![1]]);
        assert_eq!(prof.genera, vec![1, 1]);
        assert_eq!(prof.delta(), 2);

        // tacnode
        let tac = span(&a22, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let prof = gluing_profile(&c22, &tac).unwrap();
        assert_eq!(prof.partition, vec![vec![0, 1]]);
        assert_eq!(prof.genera, vec![1]);
    }

    #[test]
    fn full_record_catalog_entries() {
        // node
        let (c, a) = trunc(&[1, 1], 5);
        let node = span(&a, &[&[1, 1]]);
        let rec = full_record(&node, Some(&c)).unwrap();
        assert_eq!((rec.delta, rec.delta_prime), (1, 1));
        assert_eq!(rec.branches_after_gluing, Some(2));
        assert_eq!(rec.genus, Some(0));
        assert!(rec.gorenstein);

        // rational triple point
        let (c3, a3) = trunc(&[1, 1, 1], 5);
        let triple = span(&a3, &[&[1, 1, 1]]);
        let rec = full_record(&triple, Some(&c3)).unwrap();
        assert_eq!((rec.delta, rec.delta_prime), (2, 1));
        assert_eq!(rec.branches_after_gluing, Some(3));
        assert_eq!(rec.genus, Some(0));
        assert!(!rec.gorenstein);

        // ramphoid cusp: span{1, t^2} in k[t]/(t^4)
        let (c4, a4) = trunc(&[4], 5);
        let ram = span(&a4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        let rec = full_record(&ram, Some(&c4)).unwrap();
        assert_eq!((rec.delta, rec.delta_prime), (2, 2));
        assert_eq!(rec.branches_after_gluing, Some(1));
        assert_eq!(rec.genus, Some(2));
        assert!(rec.gorenstein);
    }

    #[test]
    fn record_without_conductances_omits_branch_data() {
        let (_, a) = trunc(&[4], 3);
        let b = span(&a, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        let rec = full_record(&b, None).unwrap();
        assert!(rec.branch_conductances.is_none());
        assert!(rec.genus.is_none());
        assert!(rec.branches_after_gluing.is_none());
    }

    #[test]
    fn plus_subalgebra_record() {
        let (c, a) = trunc(&[2, 2], 3);
        let plus = plus_subalgebra(&c, &a).unwrap();
        let rec = full_record(&plus, Some(&c)).unwrap();
        assert_eq!(rec.delta, 1);
        assert_eq!(rec.delta_prime, 1);
        assert_eq!(rec.gluing.unwrap().partition, vec![vec![0, 1]]);
    }
}

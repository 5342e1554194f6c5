//! Brute-force enumeration of subalgebras over prime fields, invariant
//! bucketing, the decomposition identity for territories of A_c, and the
//! automorphism action whose orbits are strict crimping classes.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::algebra::{ConductanceVector, FiniteAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::invariants::{delta_prime, gluing_profile, GluingProfile};
use crate::linalg::{in_row_span, Matrix};

/// Number of k-dimensional subspaces of F_p^n, saturating on overflow.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut table = vec![vec![0u128; k + 1]; n + 1];
    for row in table.iter_mut() {
        row[0] = 1;
    }
    for i in 1..=n {
        for j in 1..=k.min(i) {
            let pj = (p as u128).checked_pow(j as u32).unwrap_or(u128::MAX);
            let carry = pj.saturating_mul(table[i - 1][j]);
            table[i][j] = table[i - 1][j - 1].saturating_add(carry);
        }
    }
    table[n][k]
}

/// All k x n RREF matrices of rank k over F_p, i.e. all k-dimensional
/// subspaces of F_p^n in canonical form.
pub fn rref_matrices(
    field: PrimeField,
    k: usize,
    n: usize,
) -> impl Iterator<Item = Matrix<PrimeField>> {
    let p = field.characteristic();
    (0..n).combinations(k).flat_map(move |pivots| {
        let mut free = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in (pc + 1)..n {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let count = p
            .checked_pow(free.len() as u32)
            .expect("free-entry count exceeds u64; budget check missing");
        let pivots = pivots.clone();
        (0..count).map(move |mut idx| {
            let mut m = Matrix::zeros(&field, k, n);
            for (r, &pc) in pivots.iter().enumerate() {
                *m.at_mut(r, pc) = 1;
            }
            for &(r, c) in &free {
                *m.at_mut(r, c) = idx % p;
                idx /= p;
            }
            m
        })
    })
}

/// All corank-delta unital multiplicatively closed subspaces of the algebra,
/// canonical and sorted. Candidates are the RREF profiles of the quotient by
/// the unit line, so the search space is one dimension smaller.
pub fn enumerate_subalgebras(
    alg: &Arc<FiniteAlgebra<PrimeField>>,
    delta: usize,
    candidate_cap: u128,
) -> Result<Vec<Subalgebra<PrimeField>>> {
    let f = alg.field;
    let n = alg.dim;
    if delta >= n {
        // corank n would exclude the unit; corank-n of a 0-dim algebra cannot occur
        return Ok(Vec::new());
    }
    let k = n - delta;
    let candidates = gaussian_binomial(n - 1, k - 1, f.characteristic());
    if candidates > candidate_cap {
        return Err(Error::Budget {
            what: "subalgebra enumeration",
            needed: candidates,
            cap: candidate_cap,
        });
    }
    // coordinates of A / <unit>: normalize the unit, drop its pivot coordinate
    let mut unit_row = Matrix::from_rows(vec![alg.unit.clone()]);
    let unit_pivots = unit_row.rref(&f);
    let lead = unit_pivots[0];
    let rest: Vec<usize> = (0..n).filter(|&c| c != lead).collect();

    let mut out = Vec::new();
    'candidates: for m in rref_matrices(f, k - 1, n - 1) {
        let mut rows = vec![alg.unit.clone()];
        for r in 0..m.rows {
            let mut v = vec![0u64; n];
            for (idx, &c) in rest.iter().enumerate() {
                v[c] = *m.at(r, idx);
            }
            rows.push(v);
        }
        let mut basis = Matrix::from_rows(rows);
        let pivots = basis.rref(&f);
        debug_assert_eq!(basis.rows, k);
        for i in 0..k {
            for j in i..k {
                let prod = alg.mul_vec(basis.row(i), basis.row(j));
                if !in_row_span(&f, &basis, &pivots, &prod) {
                    continue 'candidates;
                }
            }
        }
        out.push(Subalgebra {
            ambient: Arc::clone(alg),
            basis,
            pivots,
        });
    }
    out.sort();
    Ok(out)
}

/// The full invariant key of an enumerated point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BucketKey {
    pub delta: usize,
    pub delta_prime: usize,
    pub profile: Option<GluingProfile>,
    pub branch_conductances: Option<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct EnumerationBucket {
    pub key: BucketKey,
    pub points: Vec<Subalgebra<PrimeField>>,
}

/// Partition points by invariant key, in deterministic key order. Gluing
/// profiles and conductances are computed only when the ambient is an A_c.
pub fn bucketize(
    points: &[Subalgebra<PrimeField>],
    c: Option<&ConductanceVector>,
) -> Result<Vec<EnumerationBucket>> {
    let mut map: BTreeMap<BucketKey, Vec<Subalgebra<PrimeField>>> = BTreeMap::new();
    for b in points {
        let key = BucketKey {
            delta: crate::invariants::delta(b),
            delta_prime: delta_prime(b),
            profile: c.map(|c| gluing_profile(c, b)).transpose()?,
            branch_conductances: c
                .map(|c| crate::invariants::branch_conductances(c, b))
                .transpose()?,
        };
        map.entry(key).or_default().push(b.clone());
    }
    Ok(map
        .into_iter()
        .map(|(key, mut points)| {
            points.sort();
            EnumerationBucket { key, points }
        })
        .collect())
}

/// All set partitions of {0, ..., m-1}; blocks sorted by least element.
pub fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(m: usize, i: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == m {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(i);
            rec(m, i + 1, current, out);
            current[b].pop();
        }
        current.push(vec![i]);
        rec(m, i + 1, current, out);
        current.pop();
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    rec(m, 0, &mut current, &mut out);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionTerm {
    pub partition: Vec<Vec<usize>>,
    pub genera: Vec<u32>,
    pub per_part_counts: Vec<usize>,
    pub product: usize,
    pub bucket_count: usize,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub conductances: Vec<u32>,
    pub delta: usize,
    pub delta_prime: usize,
    pub p: u64,
    pub bruteforce_count: usize,
    pub sum_of_products: usize,
    pub terms: Vec<DecompositionTerm>,
    pub all_buckets_admissible: bool,
    pub pass: bool,
}

/// Check the decomposition of Ter^{delta,delta'}_{A_c} into products of
/// territories of singularities: the brute-force point count must equal the
/// sum over admissible (partition, genera) tuples of the product of
/// per-part territory counts, tuple by tuple against the invariant buckets.
pub fn verify_decomposition(
    c: &ConductanceVector,
    delta: usize,
    delta_prime_target: usize,
    p: u64,
    enumeration_cap: u128,
    solve_cap: u128,
    threads: usize,
) -> Result<DecompositionReport> {
    if c.total() as usize != delta + delta_prime_target {
        return Err(Error::Hypothesis(format!(
            "sum of conductances {} must equal delta + delta' = {}",
            c.total(),
            delta + delta_prime_target
        )));
    }
    let field = PrimeField::new(p)?;
    let ambient = Arc::new(FiniteAlgebra::truncated_product(
        c,
        field,
        crate::algebra::DEFAULT_CONSTRUCTION_DIM_CAP,
    )?);
    let all_points = enumerate_subalgebras(&ambient, delta, enumeration_cap)?;
    let stratum: Vec<Subalgebra<PrimeField>> = all_points
        .into_iter()
        .filter(|b| delta_prime(b) == delta_prime_target)
        .collect();
    let buckets = bucketize(&stratum, Some(c))?;

    // admissible tuples (partition, genera)
    let m = c.branches();
    let mut tuples: Vec<(Vec<Vec<usize>>, Vec<u32>)> = Vec::new();
    for partition in set_partitions(m) {
        // per part: g in [max(0, ceil(sum_c/2) - size + 1), sum_c - size]
        let ranges: Vec<Vec<u32>> = partition
            .iter()
            .map(|part| {
                let size = part.len() as i64;
                let sum_c: i64 = part.iter().map(|&i| c.parts()[i] as i64).sum();
                let lo = ((sum_c + 1) / 2 - size + 1).max(0);
                let hi = sum_c - size;
                (lo..=hi).map(|g| g as u32).collect()
            })
            .collect();
        if ranges.iter().any(|r| r.is_empty()) {
            continue;
        }
        for genera in ranges.into_iter().multi_cartesian_product() {
            let total: usize = partition
                .iter()
                .zip(&genera)
                .map(|(part, &g)| g as usize + part.len() - 1)
                .sum();
            if total == delta {
                tuples.push((partition.clone(), genera));
            }
        }
    }

    let mut terms = Vec::new();
    let mut sum = 0usize;
    let mut pass = true;
    for (partition, genera) in tuples {
        let mut per_part = Vec::new();
        let mut product = 1usize;
        for (part, &g) in partition.iter().zip(&genera) {
            let sub_c = ConductanceVector::from_multiset(
                part.iter().map(|&i| c.parts()[i]).collect(),
            )?;
            let count =
                crate::equations::territory_points(g, &sub_c, p, solve_cap, threads)?.len();
            per_part.push(count);
            product *= count;
        }
        sum += product;
        let bucket_count = buckets
            .iter()
            .find(|b| {
                b.key
                    .profile
                    .as_ref()
                    .is_some_and(|pr| pr.partition == partition && pr.genera == genera)
            })
            .map_or(0, |b| b.points.len());
        let matches = bucket_count == product;
        pass &= matches;
        terms.push(DecompositionTerm {
            partition,
            genera,
            per_part_counts: per_part,
            product,
            bucket_count,
            matches,
        });
    }
    // every observed bucket must correspond to an admissible tuple
    let all_buckets_admissible = buckets.iter().all(|b| {
        b.key.profile.as_ref().is_some_and(|pr| {
            terms
                .iter()
                .any(|t| t.partition == pr.partition && t.genera == pr.genera)
        })
    });
    pass &= all_buckets_admissible;
    pass &= sum == stratum.len();
    Ok(DecompositionReport {
        conductances: c.parts().to_vec(),
        delta,
        delta_prime: delta_prime_target,
        p,
        bruteforce_count: stratum.len(),
        sum_of_products: sum,
        terms,
        all_buckets_admissible,
        pass,
    })
}

/// One automorphism of A_c over F_p: a reparametrization
/// t_i -> a_1 t_i + ... + a_{c_i - 1} t_i^{c_i - 1} (a_1 invertible) per
/// factor, followed by a permutation of equal-conductance factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutElement {
    pub scalings: Vec<Vec<u64>>,
    pub permutation: Vec<usize>,
}

/// |S_c| * prod over factors of (p-1) p^{c_i - 2}; factors with c_i = 1
/// contribute 1.
pub fn aut_order(c: &ConductanceVector, p: u64) -> u128 {
    let mut order: u128 = 1;
    for &ci in c.parts() {
        if ci >= 2 {
            let factor = (p as u128 - 1).saturating_mul(
                (p as u128).checked_pow(ci - 2).unwrap_or(u128::MAX),
            );
            order = order.saturating_mul(factor);
        }
    }
    let mut mult: BTreeMap<u32, u128> = BTreeMap::new();
    for &ci in c.parts() {
        *mult.entry(ci).or_insert(0) += 1;
    }
    for count in mult.values() {
        let mut fact: u128 = 1;
        for i in 2..=*count {
            fact = fact.saturating_mul(i);
        }
        order = order.saturating_mul(fact);
    }
    order
}

/// Materialize the full automorphism group of A_c over F_p.
pub fn aut_elements(c: &ConductanceVector, p: u64, group_cap: u128) -> Result<Vec<AutElement>> {
    PrimeField::new(p)?;
    let order = aut_order(c, p);
    if order > group_cap {
        return Err(Error::Budget {
            what: "automorphism group materialization",
            needed: order,
            cap: group_cap,
        });
    }
    let m = c.branches();
    let perms: Vec<Vec<usize>> = (0..m)
        .permutations(m)
        .filter(|perm| (0..m).all(|i| c.parts()[perm[i]] == c.parts()[i]))
        .collect();
    // all admissible coefficient vectors per factor
    let scalings_per_factor: Vec<Vec<Vec<u64>>> = c
        .parts()
        .iter()
        .map(|&ci| {
            if ci == 1 {
                return vec![Vec::new()];
            }
            let len = (ci - 1) as usize;
            let mut out = Vec::new();
            let count = p.pow((ci - 2) as u32) * (p - 1);
            for idx in 0..count {
                let mut v = vec![0u64; len];
                let mut rem = idx;
                v[0] = 1 + rem % (p - 1);
                rem /= p - 1;
                for slot in v.iter_mut().skip(1) {
                    *slot = rem % p;
                    rem /= p;
                }
                out.push(v);
            }
            out
        })
        .collect();
    let mut elements = Vec::with_capacity(order as usize);
    for perm in &perms {
        for combo in scalings_per_factor
            .iter()
            .map(|v| v.iter())
            .multi_cartesian_product()
        {
            elements.push(AutElement {
                scalings: combo.into_iter().cloned().collect(),
                permutation: perm.clone(),
            });
        }
    }
    debug_assert_eq!(elements.len() as u128, order);
    Ok(elements)
}

/// Matrix of the automorphism on A_c: row x is the image of basis vector x.
pub fn aut_matrix(
    c: &ConductanceVector,
    e: &AutElement,
    field: &PrimeField,
) -> Matrix<PrimeField> {
    let n = c.dim();
    let p = field.characteristic();
    let mut m = Matrix::zeros(field, n, n);
    for (i, &ci) in c.parts().iter().enumerate() {
        let target = e.permutation[i];
        debug_assert_eq!(c.parts()[target], ci);
        // phi(t_i) as a coefficient vector indexed by power, constant term 0
        let ci = ci as usize;
        let mut phi = vec![0u64; ci];
        for (d, &a) in e.scalings[i].iter().enumerate() {
            phi[d + 1] = a % p;
        }
        // powers of phi, truncated at t^ci
        let mut power = vec![0u64; ci];
        power[0] = 1;
        for j in 0..ci {
            for (d, &coeff) in power.iter().enumerate() {
                if coeff != 0 {
                    *m.at_mut(c.coord(i, j), c.coord(target, d)) = coeff;
                }
            }
            // power *= phi
            let mut next = vec![0u64; ci];
            for (d1, &x) in power.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (d2, &y) in phi.iter().enumerate() {
                    if y != 0 && d1 + d2 < ci {
                        next[d1 + d2] =
                            ((next[d1 + d2] as u128 + x as u128 * y as u128) % p as u128) as u64;
                    }
                }
            }
            power = next;
        }
    }
    m
}

/// Image of a subalgebra under an automorphism, in canonical form. The
/// action preserves delta, delta', the gluing profile and the conductances.
pub fn act(
    c: &ConductanceVector,
    e: &AutElement,
    b: &Subalgebra<PrimeField>,
) -> Result<Subalgebra<PrimeField>> {
    if b.ambient.dim != c.dim() {
        return Err(Error::NotTruncatedProduct);
    }
    let f = &b.ambient.field;
    let phi = aut_matrix(c, e, f);
    let mut basis = b.basis.matmul(f, &phi);
    let pivots = basis.rref(f);
    if basis.rows != b.basis.rows {
        return Err(Error::Corrupted("automorphism collapsed the span".into()));
    }
    Ok(Subalgebra {
        ambient: Arc::clone(&b.ambient),
        basis,
        pivots,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    /// Indices into the input point list.
    pub members: Vec<usize>,
    /// Order of the stabilizer of the first member, counted directly.
    pub stabilizer_order: u128,
}

/// Orbit partition of a point set under the materialized group, via
/// union-find on the action graph. Errors if the action leaves the set.
pub fn orbits(
    c: &ConductanceVector,
    points: &[Subalgebra<PrimeField>],
    group: &[AutElement],
) -> Result<Vec<Orbit>> {
    let index: BTreeMap<&Matrix<PrimeField>, usize> = points
        .iter()
        .enumerate()
        .map(|(i, b)| (&b.basis, i))
        .collect();
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, b) in points.iter().enumerate() {
        for e in group {
            let image = act(c, e, b)?;
            let Some(&j) = index.get(&image.basis) else {
                return Err(Error::Corrupted(
                    "group action escapes the point set".into(),
                ));
            };
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                let (lo, hi) = (ri.min(rj), ri.max(rj));
                parent[hi] = lo;
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..points.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in classes.into_values() {
        let rep = &points[members[0]];
        let mut stab: u128 = 0;
        for e in group {
            if act(c, e, rep)? == *rep {
                stab += 1;
            }
        }
        out.push(Orbit {
            members,
            stabilizer_order: stab,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc(c: &[u32], p: u64) -> (ConductanceVector, Arc<FiniteAlgebra<PrimeField>>) {
        let c = ConductanceVector::new(c.to_vec()).unwrap();
        let f = PrimeField::new(p).unwrap();
        let a = Arc::new(FiniteAlgebra::truncated_product(&c, f, 24).unwrap());
        (c, a)
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 1, 3), 13);
        assert_eq!(gaussian_binomial(5, 0, 7), 1);
        assert_eq!(gaussian_binomial(2, 3, 5), 0);
    }

    #[test]
    fn rref_matrix_count_matches_gaussian_binomial() {
        let f = PrimeField::new(3).unwrap();
        let count = rref_matrices(f, 2, 4).count();
        assert_eq!(count as u128, gaussian_binomial(4, 2, 3));
    }

    #[test]
    fn genus_two_unibranch_enumeration() {
        // corank-2 subalgebras of F_p[t]/(t^4): p + 1 of them
        for p in [2u64, 3, 5] {
            let (_, a) = trunc(&[4], p);
            let subs = enumerate_subalgebras(&a, 2, 1 << 20).unwrap();
            assert_eq!(subs.len(), (p + 1) as usize);
            for b in &subs {
                assert_eq!(b.corank(), 2);
            }
        }
        // over F_2 these are span{1,t^2}, span{1,t^3}, span{1,t^2+t^3}
        let (_, a) = trunc(&[4], 2);
        let subs = enumerate_subalgebras(&a, 2, 1 << 20).unwrap();
        let bases: Vec<Vec<u64>> = subs.iter().map(|b| b.basis.row(1).to_vec()).collect();
        assert!(bases.contains(&vec![0, 0, 1, 0]));
        assert!(bases.contains(&vec![0, 0, 0, 1]));
        assert!(bases.contains(&vec![0, 0, 1, 1]));
    }

    #[test]
    fn diagonal_is_the_unique_max_corank_subalgebra_of_points() {
        for m in 2..=4usize {
            let (_, a) = trunc(&vec![1; m], 3);
            let subs = enumerate_subalgebras(&a, m - 1, 1 << 20).unwrap();
            assert_eq!(subs.len(), 1);
            assert_eq!(subs[0].dim(), 1);
        }
    }

    #[test]
    fn corank_zero_gives_whole_algebra() {
        let (_, a) = trunc(&[2, 2], 3);
        let subs = enumerate_subalgebras(&a, 0, 1 << 20).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].dim(), 4);
    }

    #[test]
    fn bucketize_genus_two_strata() {
        let (c, a) = trunc(&[4], 3);
        let subs = enumerate_subalgebras(&a, 2, 1 << 20).unwrap();
        assert_eq!(subs.len(), 4);
        let buckets = bucketize(&subs, Some(&c)).unwrap();
        assert_eq!(buckets.len(), 2);
        // deterministic order: delta' = 1 bucket first
        assert_eq!(buckets[0].key.delta_prime, 1);
        assert_eq!(buckets[0].points.len(), 1);
        assert_eq!(buckets[1].key.delta_prime, 2);
        assert_eq!(buckets[1].points.len(), 3);
        assert!(bucketize(&[], None).unwrap().is_empty());
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(2).len(), 2);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
        assert_eq!(set_partitions(5).len(), 52);
    }

    #[test]
    fn decomposition_for_two_cusp_branches() {
        // c = (2,2), delta = delta' = 2, p = 5: one tuple per gluing of the
        // two branches (tacnode gluings, 4 of them) plus the two-cusp tuple.
        let c = ConductanceVector::new(vec![2, 2]).unwrap();
        let report = verify_decomposition(&c, 2, 2, 5, 1 << 22, 1 << 22, 1).unwrap();
        assert!(report.pass);
        assert_eq!(report.bruteforce_count, 5);
        assert_eq!(report.sum_of_products, 5);
        let products: Vec<usize> = report.terms.iter().map(|t| t.product).collect();
        assert!(products.contains(&4));
        assert!(products.contains(&1));
    }

    #[test]
    fn decomposition_rejects_mismatched_totals() {
        let c = ConductanceVector::new(vec![2, 2]).unwrap();
        assert!(matches!(
            verify_decomposition(&c, 2, 1, 5, 1 << 22, 1 << 22, 1),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn aut_group_orders_and_closure() {
        let c22 = ConductanceVector::new(vec![2, 2]).unwrap();
        assert_eq!(aut_order(&c22, 3), 8);
        let els = aut_elements(&c22, 3, 1 << 20).unwrap();
        assert_eq!(els.len(), 8);

        let c2 = ConductanceVector::new(vec![2]).unwrap();
        assert_eq!(aut_order(&c2, 2), 1);

        let c3 = ConductanceVector::new(vec![3]).unwrap();
        assert_eq!(aut_order(&c3, 3), 6);
        let els3 = aut_elements(&c3, 3, 1 << 20).unwrap();
        assert_eq!(els3.len(), 6);

        // closure: products of group matrices stay in the group
        let f = PrimeField::new(3).unwrap();
        for (c, els) in [(&c22, &els), (&c3, &els3)] {
            let mats: Vec<Matrix<PrimeField>> =
                els.iter().map(|e| aut_matrix(c, e, &f)).collect();
            for a in &mats {
                for b in &mats {
                    let prod = a.matmul(&f, b);
                    assert!(mats.contains(&prod), "group not closed under composition");
                }
            }
        }
    }

    #[test]
    fn action_moves_and_preserves_invariants() {
        let (c, a) = trunc(&[2, 2], 5);
        // span{(1,1), (t1, u t2)} with u = 1
        let tac = Subalgebra::from_span(&a, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
        // identity fixes it
        let id = AutElement {
            scalings: vec![vec![1], vec![1]],
            permutation: vec![0, 1],
        };
        assert_eq!(act(&c, &id, &tac).unwrap(), tac);
        // scaling (a, b) = (1, 2) moves u = 1 to u = 2
        let scale = AutElement {
            scalings: vec![vec![1], vec![2]],
            permutation: vec![0, 1],
        };
        let moved = act(&c, &scale, &tac).unwrap();
        assert_eq!(moved.basis.row(1), &[0, 1, 0, 2][..]);
        assert_eq!(delta_prime(&moved), delta_prime(&tac));
        assert_eq!(
            gluing_profile(&c, &moved).unwrap(),
            gluing_profile(&c, &tac).unwrap()
        );

        // the swap moves the cusp to the other branch
        let cusp_line =
            Subalgebra::from_span(&a, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0]]).unwrap();
        let swap = AutElement {
            scalings: vec![vec![1], vec![1]],
            permutation: vec![1, 0],
        };
        let swapped = act(&c, &swap, &cusp_line).unwrap();
        assert_eq!(swapped.basis.row(1), &[0, 0, 0, 1][..]);
    }

    #[test]
    fn tacnode_orbit_is_transitive() {
        let c = ConductanceVector::new(vec![2, 2]).unwrap();
        let pts = crate::equations::territory_points(1, &c, 5, 1 << 22, 1).unwrap();
        assert_eq!(pts.len(), 4);
        let group = aut_elements(&c, 5, 1 << 20).unwrap();
        let orbs = orbits(&c, &pts, &group).unwrap();
        assert_eq!(orbs.len(), 1);
        assert_eq!(orbs[0].members.len(), 4);
        assert_eq!(
            orbs[0].members.len() as u128 * orbs[0].stabilizer_order,
            group.len() as u128
        );
        assert!(orbits(&c, &[], &group).unwrap().is_empty());
    }
}

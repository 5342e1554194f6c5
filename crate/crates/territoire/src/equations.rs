//! Polynomial systems cutting subalgebra loci out of Grassmannian charts:
//! multiplication-closure and unit equations for the corank-delta locus,
//! linear containment in a fixed subalgebra, and determinantal rank
//! conditions carving out the delta-prime strata.

use std::sync::Arc;

use itertools::Itertools;
use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

use crate::algebra::{ConductanceVector, FiniteAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::field::{rational_to_i64, PrimeField, Rationals};
use crate::poly::{poly_det, Poly};

/// One affine Schubert-cell chart of Gr(n - delta, n): the subspaces spanned
/// by columns that carry the identity on the pivot rows and free coordinates
/// a_{k,j} on the non-pivot rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub ambient_dim: usize,
    pub pivots: Vec<usize>,
    pub nonpivots: Vec<usize>,
}

impl Chart {
    pub fn new(ambient_dim: usize, pivots: Vec<usize>) -> Result<Self> {
        if pivots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidChart("pivots must be strictly increasing".into()));
        }
        if pivots.iter().any(|&p| p >= ambient_dim) {
            return Err(Error::InvalidChart("pivot index out of range".into()));
        }
        let nonpivots = (0..ambient_dim)
            .filter(|c| !pivots.contains(c))
            .collect();
        Ok(Chart {
            ambient_dim,
            pivots,
            nonpivots,
        })
    }

    /// All charts of Gr(n - delta, n), ordered by pivot set.
    pub fn all(ambient_dim: usize, delta: usize) -> Vec<Chart> {
        (0..ambient_dim)
            .combinations(ambient_dim - delta)
            .map(|pivots| Chart::new(ambient_dim, pivots).expect("combinations are sorted"))
            .collect()
    }

    pub fn subspace_dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn corank(&self) -> usize {
        self.nonpivots.len()
    }

    pub fn var_count(&self) -> usize {
        self.corank() * self.subspace_dim()
    }

    /// Variable a_{k,j}: non-pivot row k of basis column j.
    pub fn var_index(&self, k: usize, j: usize) -> usize {
        debug_assert!(k < self.corank() && j < self.subspace_dim());
        k * self.subspace_dim() + j
    }

    pub fn variable_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.var_count());
        for k in 0..self.corank() {
            for j in 0..self.subspace_dim() {
                names.push(format!("a_{}_{}", k + 1, j + 1));
            }
        }
        names
    }

    /// Symbolic basis columns of the chart subspace.
    fn basis_columns(&self) -> Vec<Vec<Poly>> {
        let nv = self.var_count();
        (0..self.subspace_dim())
            .map(|j| {
                let mut col = vec![Poly::zero(nv); self.ambient_dim];
                col[self.pivots[j]] = Poly::constant(nv, 1);
                for (k, &np) in self.nonpivots.iter().enumerate() {
                    col[np] = Poly::var(nv, self.var_index(k, j));
                }
                col
            })
            .collect()
    }

    /// Quotient coordinate k of a symbolic ambient vector: the composite
    /// with the projection away from the chart subspace.
    fn quotient_coord(&self, v: &[Poly], k: usize) -> Poly {
        let nv = self.var_count();
        let mut out = v[self.nonpivots[k]].clone();
        for j in 0..self.subspace_dim() {
            let a = Poly::var(nv, self.var_index(k, j));
            out = out.sub(&a.mul(&v[self.pivots[j]]));
        }
        out
    }

    /// Turn a chart point over F_p into the subalgebra it spans.
    pub fn point_to_subalgebra(
        &self,
        ambient: &Arc<FiniteAlgebra<PrimeField>>,
        point: &[u64],
    ) -> Result<Subalgebra<PrimeField>> {
        if ambient.dim != self.ambient_dim || point.len() != self.var_count() {
            return Err(Error::InvalidChart(
                "point or ambient does not match the chart".into(),
            ));
        }
        let rows: Vec<Vec<u64>> = (0..self.subspace_dim())
            .map(|j| {
                let mut row = vec![0u64; self.ambient_dim];
                row[self.pivots[j]] = 1;
                for (k, &np) in self.nonpivots.iter().enumerate() {
                    row[np] = point[self.var_index(k, j)];
                }
                row
            })
            .collect();
        Subalgebra::from_span(ambient, rows)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Closure,
    Unit,
    Containment,
    FittingRank,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedPoly {
    pub poly: Poly,
    pub provenance: Provenance,
}

/// Closed equations must all vanish; at least one open certificate must be
/// nonzero (the disjunctive form of a locally closed condition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSystem {
    pub variables: Vec<String>,
    pub closed: Vec<TaggedPoly>,
    pub open: Vec<TaggedPoly>,
}

impl PolynomialSystem {
    pub fn empty(variables: Vec<String>) -> Self {
        PolynomialSystem {
            variables,
            closed: Vec::new(),
            open: Vec::new(),
        }
    }

    pub fn merge(mut self, other: PolynomialSystem) -> Result<Self> {
        if self.variables != other.variables {
            return Err(Error::InvalidChart(
                "cannot merge systems over different charts".into(),
            ));
        }
        self.closed.extend(other.closed);
        self.open.extend(other.open);
        Ok(self)
    }

    pub fn var_count(&self) -> usize {
        self.variables.len()
    }
}

fn rational_entry_to_i64(x: &BigRational) -> Result<i64> {
    rational_to_i64(x).ok_or_else(|| {
        Error::Other("structure constants must be integers for equation generation".into())
    })
}

/// Structure constants and unit of a rationals algebra as integers.
fn integer_algebra_data(alg: &FiniteAlgebra<Rationals>) -> Result<(Vec<i64>, Vec<i64>)> {
    let n = alg.dim;
    let mut table = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                table.push(rational_entry_to_i64(alg.entry(i, j, k))?);
            }
        }
    }
    let unit = alg
        .unit
        .iter()
        .map(rational_entry_to_i64)
        .collect::<Result<Vec<_>>>()?;
    Ok((table, unit))
}

/// Symbolic product of two chart columns in the algebra.
fn symbolic_product(
    table: &[i64],
    n: usize,
    nv: usize,
    a: &[Poly],
    b: &[Poly],
) -> Vec<Poly> {
    let mut out = vec![Poly::zero(nv); n];
    for r in 0..n {
        if a[r].is_zero() {
            continue;
        }
        for s in 0..n {
            if b[s].is_zero() {
                continue;
            }
            let ab = a[r].mul(&b[s]);
            for (t, slot) in out.iter_mut().enumerate() {
                let coeff = table[(r * n + s) * n + t];
                if coeff != 0 {
                    *slot = slot.add(&ab.scale(coeff));
                }
            }
        }
    }
    out
}

/// Multiplication-closure and unit equations for the corank-delta locus of
/// subalgebras on one chart: each pairwise product of basis columns must map
/// to zero in the quotient by the chart subspace, and so must the unit.
pub fn chart_equations(
    alg: &FiniteAlgebra<Rationals>,
    delta: usize,
    chart: &Chart,
) -> Result<PolynomialSystem> {
    let n = alg.dim;
    if delta == 0 || delta >= n {
        return Err(Error::Hypothesis(format!(
            "chart equations need 1 <= delta < dim, got delta={delta}, dim={n}"
        )));
    }
    if chart.ambient_dim != n || chart.corank() != delta {
        return Err(Error::InvalidChart(format!(
            "chart is for Gr({}, {}), expected corank {delta} in dimension {n}",
            chart.subspace_dim(),
            chart.ambient_dim
        )));
    }
    let (table, unit) = integer_algebra_data(alg)?;
    let nv = chart.var_count();
    let cols = chart.basis_columns();
    let mut system = PolynomialSystem::empty(chart.variable_names());

    let unit_vec: Vec<Poly> = unit.iter().map(|&u| Poly::constant(nv, u)).collect();
    for k in 0..delta {
        let eq = chart.quotient_coord(&unit_vec, k);
        if !eq.is_zero() {
            system.closed.push(TaggedPoly {
                poly: eq,
                provenance: Provenance::Unit,
            });
        }
    }
    for i in 0..cols.len() {
        for j in i..cols.len() {
            let prod = symbolic_product(&table, n, nv, &cols[i], &cols[j]);
            for k in 0..delta {
                let eq = chart.quotient_coord(&prod, k);
                if !eq.is_zero() {
                    system.closed.push(TaggedPoly {
                        poly: eq,
                        provenance: Provenance::Closure,
                    });
                }
            }
        }
    }
    Ok(system)
}

/// Linear equations forcing every chart basis column into the fixed
/// subalgebra b0 (the composite with the projection to ambient/b0 vanishes).
/// Each equation is cleared of denominators, which is a no-op for the
/// integral subalgebras arising from A^+ and the unit line.
pub fn containment_equations(
    alg: &FiniteAlgebra<Rationals>,
    chart: &Chart,
    b0: &Subalgebra<Rationals>,
) -> Result<PolynomialSystem> {
    let n = alg.dim;
    if b0.ambient.dim != n || chart.ambient_dim != n {
        return Err(Error::InvalidChart(
            "containment subalgebra does not match the chart ambient".into(),
        ));
    }
    let nv = chart.var_count();
    let mut system = PolynomialSystem::empty(chart.variable_names());
    let np0: Vec<usize> = (0..n).filter(|c| !b0.pivots.contains(c)).collect();
    let cols = chart.basis_columns();
    for col in &cols {
        for &np in &np0 {
            // coordinate np of (col reduced against b0):
            //   col[np] - sum_r col[pivot_r] * basis[r][np]
            let mut coeffs: Vec<(BigRational, Poly)> =
                vec![(BigRational::one(), col[np].clone())];
            for (r, &pc) in b0.pivots.iter().enumerate() {
                let entry = b0.basis.at(r, np);
                if !entry.is_zero() {
                    coeffs.push((-entry.clone(), col[pc].clone()));
                }
            }
            let mut denom_lcm = BigInt::one();
            for (c, _) in &coeffs {
                denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
            }
            let mut eq = Poly::zero(nv);
            for (c, p) in &coeffs {
                let scaled = c * BigRational::from_integer(denom_lcm.clone());
                let as_int = rational_entry_to_i64(&scaled)?;
                eq = eq.add(&p.scale(as_int));
            }
            if !eq.is_zero() {
                system.closed.push(TaggedPoly {
                    poly: eq,
                    provenance: Provenance::Containment,
                });
            }
        }
    }
    Ok(system)
}

/// Determinantal rank conditions on the chart-generic multiplication map
/// from the subspace to Hom(A/U, A/U): all (delta'+1)-minors vanish
/// (closed), and at least one delta'-minor does not (open certificates).
pub fn fitting_rank_conditions(
    alg: &FiniteAlgebra<Rationals>,
    delta: usize,
    delta_prime: usize,
    chart: &Chart,
) -> Result<PolynomialSystem> {
    let n = alg.dim;
    if delta == 0 || delta >= n {
        return Err(Error::Hypothesis(format!(
            "rank conditions need 1 <= delta < dim, got delta={delta}, dim={n}"
        )));
    }
    if delta_prime == 0 || delta_prime > delta {
        return Err(Error::Hypothesis(format!(
            "rank conditions need 1 <= delta' <= delta, got delta'={delta_prime}, delta={delta}"
        )));
    }
    if chart.ambient_dim != n || chart.corank() != delta {
        return Err(Error::InvalidChart("chart does not match delta".into()));
    }
    let (table, _) = integer_algebra_data(alg)?;
    let nv = chart.var_count();
    let cols = chart.basis_columns();
    let sub_dim = chart.subspace_dim();

    // M[(k,l)][i] = quotient coordinate k of (column_i * lift of quotient
    // basis vector l); rank of M at a subalgebra point equals delta'.
    let mut m = vec![vec![Poly::zero(nv); sub_dim]; delta * delta];
    for (l, &np) in chart.nonpivots.iter().enumerate() {
        let mut lift = vec![Poly::zero(nv); n];
        lift[np] = Poly::constant(nv, 1);
        for (i, col) in cols.iter().enumerate() {
            let prod = symbolic_product(&table, n, nv, col, &lift);
            for k in 0..delta {
                m[k * delta + l][i] = chart.quotient_coord(&prod, k);
            }
        }
    }

    let mut system = PolynomialSystem::empty(chart.variable_names());
    let minors = |size: usize| -> Vec<Poly> {
        let mut out = Vec::new();
        if size == 0 || size > delta * delta || size > sub_dim {
            return out;
        }
        for row_set in (0..delta * delta).combinations(size) {
            for col_set in (0..sub_dim).combinations(size) {
                let entries: Vec<Vec<Poly>> = row_set
                    .iter()
                    .map(|&r| col_set.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                out.push(poly_det(&entries, nv));
            }
        }
        out
    };
    for det in minors(delta_prime + 1) {
        if !det.is_zero() {
            system.closed.push(TaggedPoly {
                poly: det,
                provenance: Provenance::FittingRank,
            });
        }
    }
    for det in minors(delta_prime) {
        system.open.push(TaggedPoly {
            poly: det,
            provenance: Provenance::FittingRank,
        });
    }
    Ok(system)
}

/// The defining system of the territory of curve singularities of type
/// (g, c) on one chart: corank-(g+m-1) closure and unit equations in A_c,
/// containment in A^+_c, and the rank conditions for delta' = sum(c) - delta.
pub fn singularity_territory_system(
    g: u32,
    c: &ConductanceVector,
    chart: &Chart,
) -> Result<PolynomialSystem> {
    let m = c.branches() as u32;
    let delta = g + m - 1;
    let total = c.total();
    if total <= delta {
        return Err(Error::InvalidSingularityType {
            g,
            c: c.parts().to_vec(),
            msg: format!("requires {delta} < {total} = sum of conductances"),
        });
    }
    if total > 2 * delta {
        return Err(Error::InvalidSingularityType {
            g,
            c: c.parts().to_vec(),
            msg: format!("requires sum of conductances {total} <= 2*{delta}"),
        });
    }
    let delta_prime = total - delta;
    let alg = FiniteAlgebra::truncated_product(c, Rationals, crate::algebra::DEFAULT_CONSTRUCTION_DIM_CAP)?;
    let alg_arc = Arc::new(alg);
    let plus = crate::algebra::plus_subalgebra(c, &alg_arc)?;
    let system = chart_equations(&alg_arc, delta as usize, chart)?;
    let system = system.merge(containment_equations(&alg_arc, chart, &plus)?)?;
    system.merge(fitting_rank_conditions(
        &alg_arc,
        delta as usize,
        delta_prime as usize,
        chart,
    )?)
}

/// All assignments in F_p^vars satisfying every closed equation and, when
/// open certificates are present, at least one of them. Deterministic
/// lexicographic order; optionally split across threads.
pub fn solve_over_prime_field(
    system: &PolynomialSystem,
    p: u64,
    assignment_cap: u128,
    threads: usize,
) -> Result<Vec<Vec<u64>>> {
    crate::field::PrimeField::new(p)?;
    let nvars = system.var_count();
    let total = (p as u128)
        .checked_pow(nvars as u32)
        .unwrap_or(u128::MAX);
    if total > assignment_cap || total > u64::MAX as u128 {
        return Err(Error::Budget {
            what: "exhaustive chart solving",
            needed: total,
            cap: assignment_cap.min(u64::MAX as u128),
        });
    }
    // reduce once mod p; drop identically-zero closed equations, and order
    // cheap ones first for early exit
    let mut closed: Vec<&Poly> = system.closed.iter().map(|t| &t.poly).collect();
    closed.sort_by_key(|q| (q.total_degree(), q.terms().count()));
    let open: Vec<&Poly> = system.open.iter().map(|t| &t.poly).collect();
    let max_deg = system
        .closed
        .iter()
        .chain(system.open.iter())
        .map(|t| t.poly.max_var_degree())
        .max()
        .unwrap_or(0) as usize;

    // pows[v][e] recomputed per assignment via a value-indexed table
    let mut value_pows = vec![vec![0u64; max_deg + 1]; p as usize];
    for (v, row) in value_pows.iter_mut().enumerate() {
        let mut acc = 1u64;
        for e in row.iter_mut() {
            *e = acc;
            acc = (acc as u128 * v as u128 % p as u128) as u64;
        }
    }

    let total = total as u64;
    let value_pows = &value_pows;
    let eval_range = move |start: u64, end: u64| -> Vec<Vec<u64>> {
        let mut found = Vec::new();
        let mut vals = vec![0u64; nvars];
        let mut pows: Vec<&[u64]> = vec![&value_pows[0]; nvars];
        for idx in start..end {
            let mut rem = idx;
            for v in (0..nvars).rev() {
                vals[v] = rem % p;
                rem /= p;
            }
            for v in 0..nvars {
                pows[v] = &value_pows[vals[v] as usize];
            }
            let closed_ok = closed.iter().all(|q| q.eval_mod(p, &pows) == 0);
            if !closed_ok {
                continue;
            }
            let open_ok = open.is_empty() || open.iter().any(|q| q.eval_mod(p, &pows) != 0);
            if open_ok {
                found.push(vals.clone());
            }
        }
        found
    };

    if threads <= 1 || total < 1024 {
        return Ok(eval_range(0, total));
    }
    let threads = threads.min(64);
    let chunk = total.div_ceil(threads as u64);
    let mut results: Vec<Vec<Vec<u64>>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let start = (t as u64) * chunk;
            let end = ((t as u64 + 1) * chunk).min(total);
            let eval = &eval_range;
            handles.push(scope.spawn(move || eval(start.min(total), end)));
        }
        for h in handles {
            results.push(h.join().expect("solver worker panicked"));
        }
    });
    Ok(results.into_iter().flatten().collect())
}

/// Union over all charts of the solutions of the Ter_S(g, c) system over
/// F_p, deduplicated as canonical subalgebras of A_c and sorted.
pub fn territory_points(
    g: u32,
    c: &ConductanceVector,
    p: u64,
    assignment_cap: u128,
    threads: usize,
) -> Result<Vec<Subalgebra<PrimeField>>> {
    let m = c.branches() as u32;
    let delta = (g + m - 1) as usize;
    let field = PrimeField::new(p)?;
    let ambient = Arc::new(FiniteAlgebra::truncated_product(
        c,
        field,
        crate::algebra::DEFAULT_CONSTRUCTION_DIM_CAP,
    )?);
    let n = c.dim();
    let mut seen = std::collections::BTreeSet::new();
    for chart in Chart::all(n, delta) {
        let system = singularity_territory_system(g, c, &chart)?;
        for point in solve_over_prime_field(&system, p, assignment_cap, threads)? {
            let sub = chart.point_to_subalgebra(&ambient, &point)?;
            seen.insert(sub);
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::plus_subalgebra;

    fn cvec(c: &[u32]) -> ConductanceVector {
        ConductanceVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn chart_enumeration() {
        let charts = Chart::all(4, 2);
        assert_eq!(charts.len(), 6);
        assert_eq!(charts[0].pivots, vec![0, 1]);
        assert_eq!(charts[0].var_count(), 4);
        assert!(Chart::new(3, vec![1, 1]).is_err());
        assert!(Chart::new(3, vec![5]).is_err());
    }

    #[test]
    fn product_of_points_equations_match_expected_shape() {
        // For Q^m every closure equation is a_{k,i}^2 - a_{k,i} or
        // a_{k,i} a_{k,j}, and the unit rows give sum_j a_{k,j} - 1 = 0.
        let c = cvec(&[1, 1, 1, 1]);
        let alg = FiniteAlgebra::truncated_product(&c, Rationals, 24).unwrap();
        let chart = Chart::new(4, vec![0, 1]).unwrap();
        let sys = chart_equations(&alg, 2, &chart).unwrap();
        let names = sys.variables.clone();
        let rendered: Vec<String> = sys
            .closed
            .iter()
            .map(|t| t.poly.render(&names))
            .collect();
        assert!(rendered.contains(&"1 - a_1_2 - a_1_1".to_string()));
        assert!(rendered.contains(&"-a_1_1 + a_1_1^2".to_string()));
        assert!(rendered.contains(&"a_1_1*a_1_2".to_string()));
        assert!(sys.open.is_empty());
    }

    #[test]
    fn delta_bounds_are_enforced() {
        let c = cvec(&[2]);
        let alg = FiniteAlgebra::truncated_product(&c, Rationals, 24).unwrap();
        let chart = Chart::new(2, vec![0, 1]).unwrap();
        assert!(chart_equations(&alg, 0, &chart).is_err());
        assert!(chart_equations(&alg, 2, &chart).is_err());
    }

    #[test]
    fn genus_two_unibranch_chart_has_p_points() {
        // The chart of span{1, t^2 + a t^3} inside Ter^2 of Z[t]/(t^4)
        // contains exactly p points over F_p.
        let c = cvec(&[4]);
        let alg = FiniteAlgebra::truncated_product(&c, Rationals, 24).unwrap();
        let chart = Chart::new(4, vec![0, 2]).unwrap();
        let sys = chart_equations(&alg, 2, &chart).unwrap();
        for p in [2u64, 3, 5] {
            let sols = solve_over_prime_field(&sys, p, 1 << 20, 1).unwrap();
            assert_eq!(sols.len(), p as usize);
        }
    }

    #[test]
    fn containment_in_plus_equates_constant_coordinates() {
        let c = cvec(&[2, 2]);
        let alg = Arc::new(FiniteAlgebra::truncated_product(&c, Rationals, 24).unwrap());
        let plus = plus_subalgebra(&c, &alg).unwrap();
        let chart = Chart::new(4, vec![0, 1]).unwrap();
        let sys = containment_equations(&alg, &chart, &plus).unwrap();
        // one linear equation per basis column
        assert_eq!(sys.closed.len(), 2);
        assert!(sys
            .closed
            .iter()
            .all(|t| t.provenance == Provenance::Containment && t.poly.total_degree() == 1));

        // containment in the whole algebra is no condition at all
        let full = Subalgebra::full(&alg);
        let sys = containment_equations(&alg, &chart, &full).unwrap();
        assert!(sys.closed.is_empty());
    }

    #[test]
    fn fitting_conditions_split_the_genus_two_territory() {
        let c = cvec(&[4]);
        let alg = FiniteAlgebra::truncated_product(&c, Rationals, 24).unwrap();
        // chart containing span{1, t^2 + a t^3}: open stratum has p points
        let chart = Chart::new(4, vec![0, 2]).unwrap();
        let closure = chart_equations(&alg, 2, &chart).unwrap();
        let rank22 = fitting_rank_conditions(&alg, 2, 2, &chart).unwrap();
        let sys = closure.clone().merge(rank22).unwrap();
        for p in [3u64, 5] {
            let sols = solve_over_prime_field(&sys, p, 1 << 20, 1).unwrap();
            assert_eq!(sols.len(), p as usize, "delta'=2 stratum misses points at p={p}");
        }
        // delta' = 1: empty on this chart, one point on the complementary one
        let rank21 = fitting_rank_conditions(&alg, 2, 1, &chart).unwrap();
        let sys21 = closure.merge(rank21).unwrap();
        assert_eq!(solve_over_prime_field(&sys21, 3, 1 << 20, 1).unwrap().len(), 0);

        let chart_inf = Chart::new(4, vec![0, 3]).unwrap();
        let closure_inf = chart_equations(&alg, 2, &chart_inf).unwrap();
        let rank21_inf = fitting_rank_conditions(&alg, 2, 1, &chart_inf).unwrap();
        let sys_inf = closure_inf.merge(rank21_inf).unwrap();
        assert_eq!(solve_over_prime_field(&sys_inf, 3, 1 << 20, 1).unwrap().len(), 1);

        // delta' = 0 is forbidden
        assert!(fitting_rank_conditions(&alg, 2, 0, &chart).is_err());
    }

    #[test]
    fn cusp_territory_is_a_point_and_tacnode_territory_is_gm() {
        let c2 = cvec(&[2]);
        for p in [2u64, 3, 5] {
            let pts = territory_points(1, &c2, p, 1 << 22, 1).unwrap();
            assert_eq!(pts.len(), 1, "cusp territory at p={p}");
        }
        let c22 = cvec(&[2, 2]);
        for p in [2u64, 3, 5] {
            let pts = territory_points(1, &c22, p, 1 << 22, 1).unwrap();
            assert_eq!(pts.len(), (p - 1) as usize, "tacnode territory at p={p}");
            for b in &pts {
                assert_eq!(b.corank(), 2);
                assert_eq!(crate::invariants::delta_prime(b), 2);
                assert_eq!(crate::invariants::conductor(b).rows, 0);
            }
        }
    }

    #[test]
    fn invalid_singularity_types_are_rejected() {
        let chart = Chart::new(2, vec![0]).unwrap();
        // (g,c)=(0,(2)): 0+1-1 < 2 holds but 2 <= 0 fails
        let err = singularity_territory_system(0, &cvec(&[2]), &chart).unwrap_err();
        assert!(matches!(err, Error::InvalidSingularityType { .. }));
    }

    #[test]
    fn empty_system_has_single_empty_solution() {
        let sys = PolynomialSystem::empty(Vec::new());
        let sols = solve_over_prime_field(&sys, 5, 1 << 10, 1).unwrap();
        assert_eq!(sols, vec![Vec::<u64>::new()]);
    }

    #[test]
    fn threaded_solve_matches_single_thread() {
        let c = cvec(&[4]);
        let alg = FiniteAlgebra::truncated_product(&c, Rationals, 24).unwrap();
        let chart = Chart::new(4, vec![0, 1]).unwrap();
        let sys = chart_equations(&alg, 2, &chart).unwrap();
        let single = solve_over_prime_field(&sys, 5, 1 << 22, 1).unwrap();
        let multi = solve_over_prime_field(&sys, 5, 1 << 22, 4).unwrap();
        assert_eq!(single, multi);
    }

    #[test]
    fn budget_is_enforced() {
        let vars: Vec<String> = (0..30).map(|i| format!("x{i}")).collect();
        let sys = PolynomialSystem::empty(vars);
        assert!(matches!(
            solve_over_prime_field(&sys, 5, 10_000_000, 1),
            Err(Error::Budget { .. })
        ));
    }
}

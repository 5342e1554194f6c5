//! The acceptance suite: every structural claim the artifact is expected to
//! reproduce, run at desk scale with exact (zero-tolerance) comparisons.
//! Used both by the `selfcheck` subcommand and the acceptance test target.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

use crate::algebra::{plus_subalgebra, ConductanceVector, FiniteAlgebra, Subalgebra};
use crate::combtypes;
use crate::config::RunConfig;
use crate::equations;
use crate::error::Result;
use crate::field::PrimeField;
use crate::invariants;
use crate::pointcount;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub details: String,
}

struct Ctx {
    cfg: RunConfig,
    territory_counts: BTreeMap<(u32, Vec<u32>, u64), usize>,
}

impl Ctx {
    fn territory_count(&mut self, g: u32, c: &ConductanceVector, p: u64) -> Result<usize> {
        let key = (g, c.parts().to_vec(), p);
        if let Some(&n) = self.territory_counts.get(&key) {
            return Ok(n);
        }
        let n = equations::territory_points(g, c, p, self.cfg.solve_cap, self.cfg.threads)?.len();
        self.territory_counts.insert(key, n);
        Ok(n)
    }
}

fn trunc_fp(c: &ConductanceVector, p: u64) -> Result<Arc<FiniteAlgebra<PrimeField>>> {
    let field = PrimeField::new(p)?;
    Ok(Arc::new(FiniteAlgebra::truncated_product(
        c,
        field,
        crate::algebra::DEFAULT_CONSTRUCTION_DIM_CAP,
    )?))
}

/// All weakly decreasing positive conductance vectors with total in 1..=cap.
fn conductance_battery(cap: u32) -> Vec<ConductanceVector> {
    fn rec(remaining: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !acc.is_empty() {
            out.push(acc.clone());
        }
        for next in (1..=max.min(remaining)).rev() {
            acc.push(next);
            rec(remaining - next, next, acc, out);
            acc.pop();
        }
    }
    let mut raw = Vec::new();
    rec(cap, cap, &mut Vec::new(), &mut raw);
    raw.sort();
    raw.dedup();
    raw.into_iter()
        .map(|c| ConductanceVector::new(c).expect("battery vectors are valid"))
        .collect()
}

fn check(pass: &mut bool, details: &mut String, ok: bool, msg: impl Into<String>) {
    if !ok {
        *pass = false;
        let _ = writeln!(details, "FAIL: {}", msg.into());
    }
}

/// Criterion 1: corank-2 subalgebras of F_p[t]/(t^4) form p+1 points,
/// splitting as p with delta'=2 and 1 with delta'=1.
fn criterion_projective_line(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    let c4 = ConductanceVector::new(vec![4])?;
    for p in [2u64, 3, 5] {
        let alg = trunc_fp(&c4, p)?;
        let points = pointcount::enumerate_subalgebras(&alg, 2, ctx.cfg.enumeration_cap)?;
        check(
            &mut pass,
            &mut details,
            points.len() == (p + 1) as usize,
            format!("p={p}: expected {} points, got {}", p + 1, points.len()),
        );
        let buckets = pointcount::bucketize(&points, Some(&c4))?;
        let count_for = |dp: usize| {
            buckets
                .iter()
                .find(|b| b.key.delta_prime == dp)
                .map_or(0, |b| b.points.len())
        };
        check(
            &mut pass,
            &mut details,
            count_for(2) == p as usize && count_for(1) == 1,
            format!(
                "p={p}: strata split ({}, {}), expected ({}, 1)",
                count_for(2),
                count_for(1),
                p
            ),
        );
    }
    let _ = write!(details, "p+1 points with strata p / 1 for p in {{2,3,5}}");
    Ok(CriterionResult {
        id: 1,
        name: "projective line of genus-2 unibranch subalgebras".into(),
        pass,
        details,
    })
}

/// Criterion 2: |Ter_S(1,(2,2))(F_p)| = p-1 inside the p+1 corank-1
/// subalgebras of A^+_{(2,2)}, of which exactly 2 are non-Gorenstein.
fn criterion_multiplicative_group(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    let c22 = ConductanceVector::new(vec![2, 2])?;
    for p in [3u64, 5, 7] {
        let count = ctx.territory_count(1, &c22, p)?;
        check(
            &mut pass,
            &mut details,
            count == (p - 1) as usize,
            format!("p={p}: territory count {count}, expected {}", p - 1),
        );
        // the ambient P^1: corank-1 subalgebras of A^+ as a standalone algebra
        let ambient = trunc_fp(&c22, p)?;
        let plus = plus_subalgebra(&c22, &ambient)?;
        let (plus_alg, inclusion) = plus.as_algebra()?;
        let plus_arc = Arc::new(plus_alg);
        let inside = pointcount::enumerate_subalgebras(&plus_arc, 1, ctx.cfg.enumeration_cap)?;
        check(
            &mut pass,
            &mut details,
            inside.len() == (p + 1) as usize,
            format!("p={p}: corank-1 locus has {} points, expected {}", inside.len(), p + 1),
        );
        let f = ambient.field;
        let mut non_gorenstein = 0usize;
        let mut gorenstein = 0usize;
        for b in &inside {
            let rows = b.basis.matmul(&f, &inclusion).to_row_vecs();
            let in_ambient = Subalgebra::from_span(&ambient, rows)?;
            match invariants::delta_prime(&in_ambient) {
                1 => non_gorenstein += 1,
                2 => gorenstein += 1,
                other => check(&mut pass, &mut details, false, format!("p={p}: delta'={other}")),
            }
        }
        check(
            &mut pass,
            &mut details,
            non_gorenstein == 2 && gorenstein == (p - 1) as usize,
            format!("p={p}: split {gorenstein}/{non_gorenstein}, expected {}/2", p - 1),
        );
    }
    let _ = write!(details, "p-1 tacnode gluings inside p+1 with 2 non-Gorenstein, p in {{3,5,7}}");
    Ok(CriterionResult {
        id: 2,
        name: "multiplicative group of tacnode gluings".into(),
        pass,
        details,
    })
}

/// Stirling numbers of the second kind, independent of the set-partition
/// enumerator used by the library.
fn stirling2(n: usize, k: usize) -> u128 {
    let mut table = vec![vec![0u128; k + 1]; n + 1];
    table[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            table[i][j] = table[i - 1][j - 1] + (j as u128) * table[i - 1][j];
        }
    }
    table[n][k]
}

/// Criterion 3: corank-delta subalgebras of F_p^m, bucketized by gluing
/// profile, are one point per set partition with sum(|P|-1) = delta.
fn criterion_points_lemma(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    let expected = [(4usize, 2usize, 7u128), (5, 2, 25), (5, 3, 15)];
    for p in [2u64, 3] {
        for &(m, delta, count) in &expected {
            let c = ConductanceVector::new(vec![1; m])?;
            let alg = trunc_fp(&c, p)?;
            let points = pointcount::enumerate_subalgebras(&alg, delta, ctx.cfg.enumeration_cap)?;
            check(
                &mut pass,
                &mut details,
                points.len() as u128 == count,
                format!("p={p} m={m} delta={delta}: {} points, expected {count}", points.len()),
            );
            check(
                &mut pass,
                &mut details,
                stirling2(m, m - delta) == count,
                format!("stirling oracle mismatch at m={m}, delta={delta}"),
            );
            let buckets = pointcount::bucketize(&points, Some(&c))?;
            let all_single = buckets.iter().all(|b| b.points.len() == 1);
            let profiles_ok = buckets.iter().all(|b| {
                b.key.profile.as_ref().is_some_and(|pr| {
                    pr.genera.iter().all(|&g| g == 0)
                        && pr
                            .partition
                            .iter()
                            .map(|part| part.len() - 1)
                            .sum::<usize>()
                            == delta
                })
            });
            check(
                &mut pass,
                &mut details,
                all_single && profiles_ok && buckets.len() as u128 == count,
                format!("p={p} m={m} delta={delta}: bucket structure is off"),
            );
        }
        // diagonal: m = k, delta = k - 1 has exactly one point
        for k in 2..=5usize {
            let c = ConductanceVector::new(vec![1; k])?;
            let alg = trunc_fp(&c, p)?;
            let points = pointcount::enumerate_subalgebras(&alg, k - 1, ctx.cfg.enumeration_cap)?;
            check(
                &mut pass,
                &mut details,
                points.len() == 1,
                format!("p={p} m={k} delta={}: expected the diagonal only", k - 1),
            );
        }
    }
    let _ = write!(details, "counts 7 / 25 / 15 / 1 match partition enumeration, p in {{2,3}}");
    Ok(CriterionResult {
        id: 3,
        name: "one point per partition for products of points".into(),
        pass,
        details,
    })
}

/// Criterion 4: the decomposition identity, tuple by tuple.
fn criterion_decomposition(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    let configs: [(&[u32], usize, usize); 4] = [
        (&[2, 2], 2, 2),
        (&[1, 1, 1, 1], 2, 2),
        (&[2, 1, 1], 2, 2),
        (&[2, 2, 2], 3, 3),
    ];
    for (c, delta, delta_prime) in configs {
        let c = ConductanceVector::new(c.to_vec())?;
        for p in [2u64, 3, 5] {
            let report = pointcount::verify_decomposition(
                &c,
                delta,
                delta_prime,
                p,
                ctx.cfg.enumeration_cap,
                ctx.cfg.solve_cap,
                ctx.cfg.threads,
            )?;
            check(
                &mut pass,
                &mut details,
                report.pass,
                format!(
                    "c={c} delta={delta} delta'={delta_prime} p={p}: brute {} vs sum {}",
                    report.bruteforce_count, report.sum_of_products
                ),
            );
        }
    }
    let _ = write!(details, "4 configurations at p in {{2,3,5}}, bucket-by-bucket");
    Ok(CriterionResult {
        id: 4,
        name: "decomposition of territories into singularity types".into(),
        pass,
        details,
    })
}

/// Criterion 5: chart solving over all charts, deduplicated, equals the
/// brute-force enumeration as sets of canonical subspaces.
fn criterion_chart_oracle(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    let mut algebras_checked = 0usize;
    for c in conductance_battery(5) {
        let n = c.dim();
        let alg_q = FiniteAlgebra::truncated_product(&c, crate::field::Rationals, 24)?;
        for p in [2u64, 3] {
            let alg_p = trunc_fp(&c, p)?;
            for delta in 1..=2usize {
                if delta >= n {
                    continue;
                }
                let brute: std::collections::BTreeSet<_> =
                    pointcount::enumerate_subalgebras(&alg_p, delta, ctx.cfg.enumeration_cap)?
                        .into_iter()
                        .collect();
                let mut from_charts = std::collections::BTreeSet::new();
                for chart in equations::Chart::all(n, delta) {
                    let sys = equations::chart_equations(&alg_q, delta, &chart)?;
                    for point in
                        equations::solve_over_prime_field(&sys, p, ctx.cfg.solve_cap, ctx.cfg.threads)?
                    {
                        from_charts.insert(chart.point_to_subalgebra(&alg_p, &point)?);
                    }
                }
                check(
                    &mut pass,
                    &mut details,
                    brute == from_charts,
                    format!(
                        "c={c} p={p} delta={delta}: charts {} vs brute {}",
                        from_charts.len(),
                        brute.len()
                    ),
                );
                algebras_checked += 1;
            }
        }
    }
    let _ = write!(details, "{algebras_checked} (algebra, p, delta) cases, exact set equality");
    Ok(CriterionResult {
        id: 5,
        name: "Grassmannian charts reproduce brute-force enumeration".into(),
        pass,
        details,
    })
}

/// Criterion 6: the Gorenstein catalog of six named singularity data.
fn criterion_gorenstein_catalog(_ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    for p in [3u64, 5] {
        let catalog: Vec<(&str, Vec<u32>, Vec<Vec<u64>>, (usize, usize))> = vec![
            ("node", vec![1, 1], vec![vec![1, 1]], (1, 1)),
            ("cusp", vec![2], vec![vec![1, 0]], (1, 1)),
            (
                "tacnode",
                vec![2, 2],
                vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]],
                (2, 2),
            ),
            (
                "ramphoid cusp",
                vec![4],
                vec![vec![1, 0, 0, 0], vec![0, 0, 1, 0]],
                (2, 2),
            ),
            ("rational triple point", vec![1, 1, 1], vec![vec![1, 1, 1]], (2, 1)),
            (
                "cusp with transverse line",
                vec![2, 2],
                vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0]],
                (2, 1),
            ),
        ];
        for (name, c, basis, (want_d, want_dp)) in catalog {
            let c = ConductanceVector::new(c)?;
            let alg = trunc_fp(&c, p)?;
            let b = Subalgebra::from_span(&alg, basis)?;
            let rec = invariants::full_record(&b, Some(&c))?;
            let ok = rec.delta == want_d
                && rec.delta_prime == want_dp
                && rec.gorenstein == (want_d == want_dp);
            check(
                &mut pass,
                &mut details,
                ok,
                format!(
                    "{name} at p={p}: got (delta, delta') = ({}, {}), gorenstein={}",
                    rec.delta, rec.delta_prime, rec.gorenstein
                ),
            );
        }
    }
    let _ = write!(details, "six singularity data match (delta, delta') and the Gorenstein flag");
    Ok(CriterionResult {
        id: 6,
        name: "Gorenstein catalog".into(),
        pass,
        details,
    })
}

/// Criterion 7: kernel conductor equals the brute-force largest contained
/// ideal, exhaustively over F_2 in dimension at most 5.
fn criterion_conductor_maximality(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    let mut subalgebras_checked = 0usize;
    for c in conductance_battery(5) {
        let alg = trunc_fp(&c, 2)?;
        for delta in 0..alg.dim {
            for b in pointcount::enumerate_subalgebras(&alg, delta, ctx.cfg.enumeration_cap)? {
                let kernel_side = invariants::conductor(&b);
                let brute = invariants::largest_ideal_bruteforce(
                    &b,
                    ctx.cfg.exhaustive_dim_cap,
                    ctx.cfg.enumeration_cap,
                )?;
                check(
                    &mut pass,
                    &mut details,
                    kernel_side == brute,
                    format!("c={c} corank {delta}: conductor disagrees with the ideal oracle"),
                );
                subalgebras_checked += 1;
            }
        }
    }
    let _ = write!(details, "{subalgebras_checked} subalgebras over F_2, exact");
    Ok(CriterionResult {
        id: 7,
        name: "conductor is the largest contained ideal".into(),
        pass,
        details,
    })
}

/// Criterion 8: crimping orbits. The tacnode territory is one orbit, the
/// cusp territory one fixed point, and orbit times stabilizer is the group
/// order throughout.
fn criterion_crimping_orbits(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    for p in [2u64, 3, 5] {
        let c22 = ConductanceVector::new(vec![2, 2])?;
        let pts = equations::territory_points(1, &c22, p, ctx.cfg.solve_cap, ctx.cfg.threads)?;
        let group = pointcount::aut_elements(&c22, p, ctx.cfg.group_cap)?;
        let orbits = pointcount::orbits(&c22, &pts, &group)?;
        check(
            &mut pass,
            &mut details,
            orbits.len() == 1 && orbits[0].members.len() == pts.len(),
            format!("p={p}: tacnode territory splits into {} orbits", orbits.len()),
        );
        for orbit in &orbits {
            check(
                &mut pass,
                &mut details,
                orbit.members.len() as u128 * orbit.stabilizer_order == group.len() as u128,
                format!("p={p}: orbit-stabilizer identity fails"),
            );
        }
        let c2 = ConductanceVector::new(vec![2])?;
        let pts = equations::territory_points(1, &c2, p, ctx.cfg.solve_cap, ctx.cfg.threads)?;
        let group = pointcount::aut_elements(&c2, p, ctx.cfg.group_cap)?;
        let orbits = pointcount::orbits(&c2, &pts, &group)?;
        let fixed = orbits.len() == 1
            && orbits[0].members.len() == 1
            && orbits[0].stabilizer_order == group.len() as u128;
        check(
            &mut pass,
            &mut details,
            fixed,
            format!("p={p}: cusp territory is not a single fixed point"),
        );
    }
    let _ = write!(details, "single orbits with orbit*stabilizer = |G| at p in {{2,3,5}}");
    Ok(CriterionResult {
        id: 8,
        name: "strict crimping orbits".into(),
        pass,
        details,
    })
}

/// Criterion 9: |Ter_S(1,(2,2,2))(F_p)| = (p-1)^2 = number of 2-planes in
/// F_p^3 avoiding the coordinate axes.
fn criterion_axis_avoiding_planes(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    let c222 = ConductanceVector::new(vec![2, 2, 2])?;
    for p in [3u64, 5] {
        let count = ctx.territory_count(1, &c222, p)?;
        let field = PrimeField::new(p)?;
        // independent count: 2-dim subspaces of F_p^3 with no coordinate axis
        let mut planes = 0usize;
        for m in pointcount::rref_matrices(field, 2, 3) {
            let mut rref = m.clone();
            let piv = rref.rref(&field);
            let contains_axis = (0..3).any(|axis| {
                let mut v = vec![0u64; 3];
                v[axis] = 1;
                crate::linalg::in_row_span(&field, &rref, &piv, &v)
            });
            if !contains_axis {
                planes += 1;
            }
        }
        let expected = ((p - 1) * (p - 1)) as usize;
        check(
            &mut pass,
            &mut details,
            count == expected && planes == expected,
            format!("p={p}: territory {count}, planes {planes}, expected {expected}"),
        );
    }
    let _ = write!(details, "(p-1)^2 via equations and via subspace counting, p in {{3,5}}");
    Ok(CriterionResult {
        id: 9,
        name: "axis-avoiding planes of triple tacnode gluings".into(),
        pass,
        details,
    })
}

/// Criterion 10: type enumeration counts, validity, and canonical-form
/// stability under 1000 seeded relabelings.
fn criterion_type_enumeration(ctx: &mut Ctx) -> Result<CriterionResult> {
    let mut pass = true;
    let mut details = String::new();
    let base = combtypes::enumerate_types(1, 0, 1, 1, ctx.cfg.enumeration_cap)?;
    check(
        &mut pass,
        &mut details,
        base.len() == 3,
        format!("enumerate_types(1,0,1,1) returned {} types, expected 3", base.len()),
    );
    let mut checked = 0usize;
    let mut witness: Option<combtypes::CombinatorialType> = None;
    for g in 0..=3u32 {
        for n in 0..=1usize {
            for delta in 1..=3u32 {
                for delta_prime in 1..=delta {
                    let types =
                        combtypes::enumerate_types(g, n, delta, delta_prime, ctx.cfg.enumeration_cap)?;
                    for t in &types {
                        let valid = combtypes::validate_type(t).is_empty();
                        let inv = combtypes::type_invariants(t)?;
                        let ok = valid
                            && inv.genus == g as i64
                            && inv.delta == delta
                            && inv.delta_prime == delta_prime
                            && inv.components <= 1 + delta as usize;
                        check(
                            &mut pass,
                            &mut details,
                            ok,
                            format!("(g,n,delta,delta')=({g},{n},{delta},{delta_prime}) produced a bad type"),
                        );
                        checked += 1;
                        if witness.is_none() && t.num_branches() >= 3 {
                            witness = Some(t.clone());
                        }
                    }
                }
            }
        }
    }
    // canonical form survives 1000 seeded random relabelings
    let t = witness.unwrap_or_else(|| base[0].clone());
    let reference = combtypes::canonical_form(&t);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.cfg.seed ^ 0x7465727269746f69);
    for _ in 0..1000 {
        let mut ms: Vec<usize> = (0..t.num_sings()).collect();
        let mut mk: Vec<usize> = (0..t.num_comps()).collect();
        let mut mb: Vec<usize> = (0..t.num_branches()).collect();
        let mut md: Vec<usize> = (0..t.num_points()).collect();
        ms.shuffle(&mut rng);
        mk.shuffle(&mut rng);
        mb.shuffle(&mut rng);
        md.shuffle(&mut rng);
        let relabeled = combtypes::apply_relabeling(&t, &ms, &mk, &mb, &md);
        if combtypes::canonical_form(&relabeled) != reference {
            check(&mut pass, &mut details, false, "canonical form changed under relabeling");
            break;
        }
    }
    let _ = write!(details, "3 types at (1,0,1,1); {checked} enumerated types validated; 1000 relabelings stable");
    Ok(CriterionResult {
        id: 10,
        name: "combinatorial type enumeration and canonical forms".into(),
        pass,
        details,
    })
}

/// Run every acceptance criterion, in order.
pub fn run_all(cfg: &RunConfig) -> Result<Vec<CriterionResult>> {
    let mut ctx = Ctx {
        cfg: cfg.clone(),
        territory_counts: BTreeMap::new(),
    };
    Ok(vec![
        criterion_projective_line(&mut ctx)?,
        criterion_multiplicative_group(&mut ctx)?,
        criterion_points_lemma(&mut ctx)?,
        criterion_decomposition(&mut ctx)?,
        criterion_chart_oracle(&mut ctx)?,
        criterion_gorenstein_catalog(&mut ctx)?,
        criterion_conductor_maximality(&mut ctx)?,
        criterion_crimping_orbits(&mut ctx)?,
        criterion_axis_avoiding_planes(&mut ctx)?,
        criterion_type_enumeration(&mut ctx)?,
    ])
}

//! Combinatorial types of singular curves: bipartite labeled graphs with
//! singularity and component vertices, branch edges carrying conductances,
//! distinguished points and markings. Includes validation, invariant
//! computation, canonical forms under relabeling, exhaustive enumeration,
//! and symbolic stratum reports.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkTarget {
    Point(usize),
    Branch(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Branch {
    pub sing: usize,
    pub comp: usize,
    pub conductance: u32,
}

/// The graph Gamma = (S, K, B, D, sigma, tau, mu, epsilon, g, c). Vertices
/// and edges are indices; `point_comp` is epsilon and `markings[i]` is
/// mu(i+1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorialType {
    pub sing_genus: Vec<u32>,
    pub comp_genus: Vec<u32>,
    pub branches: Vec<Branch>,
    pub point_comp: Vec<usize>,
    pub markings: Vec<MarkTarget>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeViolation {
    BranchEndpointOutOfRange { branch: usize },
    PointComponentOutOfRange { point: usize },
    MarkingTargetOutOfRange { index: usize },
    ZeroConductance { branch: usize },
    SingularityWithoutBranches { sing: usize },
    SmoothSingularity { sing: usize },
    ConductanceSumTooSmall { sing: usize },
    ConductanceSumTooLarge { sing: usize },
    UnusedDistinguishedPoint { point: usize },
    Disconnected,
}

impl std::fmt::Display for TypeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TypeViolation::BranchEndpointOutOfRange { branch } => {
                write!(f, "branch {branch} references a missing vertex")
            }
            TypeViolation::PointComponentOutOfRange { point } => {
                write!(f, "distinguished point {point} references a missing component")
            }
            TypeViolation::MarkingTargetOutOfRange { index } => {
                write!(f, "marking {} references a missing target", index + 1)
            }
            TypeViolation::ZeroConductance { branch } => {
                write!(f, "branch {branch} has conductance 0")
            }
            TypeViolation::SingularityWithoutBranches { sing } => {
                write!(f, "singularity {sing} has no branches (sigma not surjective)")
            }
            TypeViolation::SmoothSingularity { sing } => {
                write!(f, "singularity {sing} has delta = 0 (a smooth point)")
            }
            TypeViolation::ConductanceSumTooSmall { sing } => {
                write!(f, "singularity {sing}: conductance sum must exceed delta")
            }
            TypeViolation::ConductanceSumTooLarge { sing } => {
                write!(f, "singularity {sing}: conductance sum must be at most 2*delta")
            }
            TypeViolation::UnusedDistinguishedPoint { point } => {
                write!(f, "distinguished point {point} is hit by no marking")
            }
            TypeViolation::Disconnected => write!(f, "underlying bipartite graph is disconnected"),
        }
    }
}

impl CombinatorialType {
    pub fn num_sings(&self) -> usize {
        self.sing_genus.len()
    }
    pub fn num_comps(&self) -> usize {
        self.comp_genus.len()
    }
    pub fn num_branches(&self) -> usize {
        self.branches.len()
    }
    pub fn num_points(&self) -> usize {
        self.point_comp.len()
    }
    pub fn num_markings(&self) -> usize {
        self.markings.len()
    }

    pub fn branches_at_sing(&self, s: usize) -> Vec<usize> {
        (0..self.branches.len())
            .filter(|&b| self.branches[b].sing == s)
            .collect()
    }

    pub fn delta_of_sing(&self, s: usize) -> i64 {
        let val = self.branches_at_sing(s).len() as i64;
        self.sing_genus[s] as i64 + val - 1
    }

    pub fn conductance_sum_of_sing(&self, s: usize) -> i64 {
        self.branches_at_sing(s)
            .iter()
            .map(|&b| self.branches[b].conductance as i64)
            .sum()
    }

    fn structurally_sound(&self) -> Vec<TypeViolation> {
        let mut out = Vec::new();
        for (b, br) in self.branches.iter().enumerate() {
            if br.sing >= self.num_sings() || br.comp >= self.num_comps() {
                out.push(TypeViolation::BranchEndpointOutOfRange { branch: b });
            }
            if br.conductance == 0 {
                out.push(TypeViolation::ZeroConductance { branch: b });
            }
        }
        for (d, &comp) in self.point_comp.iter().enumerate() {
            if comp >= self.num_comps() {
                out.push(TypeViolation::PointComponentOutOfRange { point: d });
            }
        }
        for (i, m) in self.markings.iter().enumerate() {
            let bad = match m {
                MarkTarget::Point(d) => *d >= self.num_points(),
                MarkTarget::Branch(b) => *b >= self.num_branches(),
            };
            if bad {
                out.push(TypeViolation::MarkingTargetOutOfRange { index: i });
            }
        }
        out
    }

    fn is_connected(&self) -> bool {
        let n = self.num_sings() + self.num_comps();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for br in &self.branches {
            let s = br.sing;
            let k = self.num_sings() + br.comp;
            adj[s].push(k);
            adj[k].push(s);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Empty iff all type invariants plus connectivity hold.
pub fn validate_type(t: &CombinatorialType) -> Vec<TypeViolation> {
    let mut out = t.structurally_sound();
    if !out.is_empty() {
        return out;
    }
    for s in 0..t.num_sings() {
        let branches = t.branches_at_sing(s);
        if branches.is_empty() {
            out.push(TypeViolation::SingularityWithoutBranches { sing: s });
            continue;
        }
        let delta = t.delta_of_sing(s);
        if delta < 1 {
            out.push(TypeViolation::SmoothSingularity { sing: s });
            continue;
        }
        let sum_c = t.conductance_sum_of_sing(s);
        if sum_c <= delta {
            out.push(TypeViolation::ConductanceSumTooSmall { sing: s });
        }
        if sum_c > 2 * delta {
            out.push(TypeViolation::ConductanceSumTooLarge { sing: s });
        }
    }
    let hit: Vec<bool> = {
        let mut hit = vec![false; t.num_points()];
        for m in &t.markings {
            if let MarkTarget::Point(d) = m {
                hit[*d] = true;
            }
        }
        hit
    };
    for (d, was_hit) in hit.into_iter().enumerate() {
        if !was_hit {
            out.push(TypeViolation::UnusedDistinguishedPoint { point: d });
        }
    }
    if !t.is_connected() {
        out.push(TypeViolation::Disconnected);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TypeInvariants {
    pub genus: i64,
    pub delta: u32,
    pub delta_prime: u32,
    pub components: usize,
}

/// Genus, total delta, total delta' and component count of a valid type.
/// delta'(s) is the conductance sum minus delta(s).
pub fn type_invariants(t: &CombinatorialType) -> Result<TypeInvariants> {
    let violations = validate_type(t);
    if !violations.is_empty() {
        return Err(Error::InvalidType(
            violations.iter().map(|v| v.to_string()).join("; "),
        ));
    }
    let sum_g: i64 = t.sing_genus.iter().chain(t.comp_genus.iter()).map(|&g| g as i64).sum();
    let genus = sum_g + t.num_branches() as i64 - (t.num_sings() + t.num_comps()) as i64 + 1;
    let delta: i64 = (0..t.num_sings()).map(|s| t.delta_of_sing(s)).sum();
    let delta_prime: i64 = (0..t.num_sings())
        .map(|s| t.conductance_sum_of_sing(s) - t.delta_of_sing(s))
        .sum();
    Ok(TypeInvariants {
        genus,
        delta: delta as u32,
        delta_prime: delta_prime as u32,
        components: t.num_comps(),
    })
}

/// Relabel all four id sorts; maps send old indices to new ones. Marking
/// indices are fixed, only their targets move.
pub fn apply_relabeling(
    t: &CombinatorialType,
    sing_map: &[usize],
    comp_map: &[usize],
    branch_map: &[usize],
    point_map: &[usize],
) -> CombinatorialType {
    let mut sing_genus = vec![0; t.num_sings()];
    for (old, &new) in sing_map.iter().enumerate() {
        sing_genus[new] = t.sing_genus[old];
    }
    let mut comp_genus = vec![0; t.num_comps()];
    for (old, &new) in comp_map.iter().enumerate() {
        comp_genus[new] = t.comp_genus[old];
    }
    let mut branches = vec![
        Branch {
            sing: 0,
            comp: 0,
            conductance: 0
        };
        t.num_branches()
    ];
    for (old, &new) in branch_map.iter().enumerate() {
        branches[new] = Branch {
            sing: sing_map[t.branches[old].sing],
            comp: comp_map[t.branches[old].comp],
            conductance: t.branches[old].conductance,
        };
    }
    let mut point_comp = vec![0; t.num_points()];
    for (old, &new) in point_map.iter().enumerate() {
        point_comp[new] = comp_map[t.point_comp[old]];
    }
    let markings = t
        .markings
        .iter()
        .map(|m| match m {
            MarkTarget::Point(d) => MarkTarget::Point(point_map[*d]),
            MarkTarget::Branch(b) => MarkTarget::Branch(branch_map[*b]),
        })
        .collect();
    CombinatorialType {
        sing_genus,
        comp_genus,
        branches,
        point_comp,
        markings,
    }
}

fn encode(t: &CombinatorialType) -> Vec<u8> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<u8>, x: u32| out.extend_from_slice(&x.to_le_bytes());
    push(&mut out, t.num_sings() as u32);
    push(&mut out, t.num_comps() as u32);
    push(&mut out, t.num_branches() as u32);
    push(&mut out, t.num_points() as u32);
    push(&mut out, t.num_markings() as u32);
    for &g in &t.sing_genus {
        push(&mut out, g);
    }
    for &g in &t.comp_genus {
        push(&mut out, g);
    }
    for br in &t.branches {
        push(&mut out, br.sing as u32);
        push(&mut out, br.comp as u32);
        push(&mut out, br.conductance);
    }
    for &c in &t.point_comp {
        push(&mut out, c as u32);
    }
    for m in &t.markings {
        match m {
            MarkTarget::Point(d) => {
                push(&mut out, 0);
                push(&mut out, *d as u32);
            }
            MarkTarget::Branch(b) => {
                push(&mut out, 1);
                push(&mut out, *b as u32);
            }
        }
    }
    out
}

/// Stable colorings of S, K, B, D by iterated refinement. Color ids are
/// assigned in sorted signature order, so they are relabeling-invariant.
fn refine_colors(t: &CombinatorialType) -> [Vec<usize>; 4] {
    let ns = t.num_sings();
    let nk = t.num_comps();
    let nb = t.num_branches();
    let nd = t.num_points();
    let mut cs = vec![0usize; ns];
    let mut ck = vec![0usize; nk];
    let mut cb = vec![0usize; nb];
    let mut cd = vec![0usize; nd];

    // marking incidence never changes
    let mut marks_on_branch = vec![Vec::new(); nb];
    let mut marks_on_point = vec![Vec::new(); nd];
    for (i, m) in t.markings.iter().enumerate() {
        match m {
            MarkTarget::Branch(b) => marks_on_branch[*b].push(i as u64),
            MarkTarget::Point(d) => marks_on_point[*d].push(i as u64),
        }
    }

    let assign = |sigs: Vec<Vec<u64>>| -> Vec<usize> {
        let mut sorted: Vec<&Vec<u64>> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let index: BTreeMap<&Vec<u64>, usize> =
            sorted.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        sigs.iter().map(|s| index[s]).collect()
    };

    for _round in 0..=(ns + nk + nb + nd) {
        let b_sigs: Vec<Vec<u64>> = (0..nb)
            .map(|b| {
                let br = &t.branches[b];
                let mut sig = vec![
                    br.conductance as u64,
                    cs[br.sing] as u64,
                    ck[br.comp] as u64,
                ];
                sig.extend(&marks_on_branch[b]);
                sig
            })
            .collect();
        let new_cb = assign(b_sigs);
        let s_sigs: Vec<Vec<u64>> = (0..ns)
            .map(|s| {
                let mut sig = vec![t.sing_genus[s] as u64];
                let mut local: Vec<u64> = t
                    .branches_at_sing(s)
                    .iter()
                    .map(|&b| new_cb[b] as u64)
                    .collect();
                local.sort();
                sig.extend(local);
                sig
            })
            .collect();
        let new_cs = assign(s_sigs);
        let k_sigs: Vec<Vec<u64>> = (0..nk)
            .map(|k| {
                let mut sig = vec![t.comp_genus[k] as u64];
                let mut local: Vec<u64> = (0..nb)
                    .filter(|&b| t.branches[b].comp == k)
                    .map(|b| new_cb[b] as u64)
                    .collect();
                local.sort();
                sig.push(u64::MAX);
                sig.extend(local);
                let mut points: Vec<u64> = (0..nd)
                    .filter(|&d| t.point_comp[d] == k)
                    .map(|d| cd[d] as u64)
                    .collect();
                points.sort();
                sig.push(u64::MAX);
                sig.extend(points);
                sig
            })
            .collect();
        let new_ck = assign(k_sigs);
        let d_sigs: Vec<Vec<u64>> = (0..nd)
            .map(|d| {
                let mut sig = vec![new_ck[t.point_comp[d]] as u64];
                sig.extend(&marks_on_point[d]);
                sig
            })
            .collect();
        let new_cd = assign(d_sigs);

        let stable = new_cs == cs && new_ck == ck && new_cb == cb && new_cd == cd;
        cs = new_cs;
        ck = new_ck;
        cb = new_cb;
        cd = new_cd;
        if stable {
            break;
        }
    }
    [cs, ck, cb, cd]
}

/// All old-to-new index maps that keep each color class contiguous, in color
/// order; candidates for the canonical labeling.
fn class_labelings(colors: &[usize]) -> Vec<Vec<usize>> {
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colors.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    let class_list: Vec<Vec<usize>> = classes.into_values().collect();
    let mut offsets = Vec::with_capacity(class_list.len());
    let mut acc = 0;
    for cl in &class_list {
        offsets.push(acc);
        acc += cl.len();
    }
    let per_class: Vec<Vec<Vec<usize>>> = class_list
        .iter()
        .map(|cl| cl.iter().copied().permutations(cl.len()).collect())
        .collect();
    let mut out = Vec::new();
    if per_class.is_empty() {
        out.push(Vec::new());
        return out;
    }
    for combo in per_class.iter().multi_cartesian_product() {
        let mut map = vec![0usize; colors.len()];
        for (ci, perm) in combo.iter().enumerate() {
            for (pos, &old) in perm.iter().enumerate() {
                map[old] = offsets[ci] + pos;
            }
        }
        out.push(map);
    }
    out
}

/// Canonical byte string: equal exactly for isomorphic types (relabelings of
/// S, K, B, D fixing the marking indices). Computed by color refinement
/// followed by minimization over the residual class symmetries.
pub fn canonical_form(t: &CombinatorialType) -> Vec<u8> {
    let [cs, ck, cb, cd] = refine_colors(t);
    let mut best: Option<Vec<u8>> = None;
    for ms in class_labelings(&cs) {
        for mk in class_labelings(&ck) {
            for mb in class_labelings(&cb) {
                for md in class_labelings(&cd) {
                    let candidate = encode(&apply_relabeling(t, &ms, &mk, &mb, &md));
                    if best.as_ref().is_none_or(|b| candidate < *b) {
                        best = Some(candidate);
                    }
                }
            }
        }
    }
    best.unwrap_or_else(|| encode(t))
}

/// A local singularity shape: genus and branch-conductance multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct LocalType {
    genus: u32,
    conductances: Vec<u32>,
}

impl LocalType {
    fn delta(&self) -> u32 {
        self.genus + self.conductances.len() as u32 - 1
    }
    fn delta_prime(&self) -> u32 {
        self.conductances.iter().sum::<u32>() - self.delta()
    }
}

/// Partitions of `total` into exactly `parts` positive summands, each list
/// weakly decreasing.
fn partitions_exact(total: u32, parts: u32, max: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let hi = max.min(total.saturating_sub(parts - 1));
    let lo = total.div_ceil(parts);
    for first in (lo.max(1)..=hi).rev() {
        for mut rest in partitions_exact(total - first, parts - 1, first) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Weakly decreasing vectors of `parts` non-negative summands of `total`.
fn compositions_sorted(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let hi = max.min(total);
        for x in (0..=hi).rev() {
            if total - x > x * (parts as u32 - 1) {
                continue;
            }
            acc.push(x);
            rec(total - x, parts - 1, x, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, total, &mut Vec::new(), &mut out);
    out
}

/// All local types with given delta contribution and delta' contribution.
fn local_types(delta_s: u32, delta_prime_s: u32) -> Vec<LocalType> {
    let mut out = Vec::new();
    if delta_s == 0 || delta_prime_s == 0 || delta_prime_s > delta_s {
        return out;
    }
    let sum_c = delta_s + delta_prime_s;
    for g in 0..=delta_s {
        let m = delta_s - g + 1;
        for conductances in partitions_exact(sum_c, m, sum_c) {
            out.push(LocalType {
                genus: g,
                conductances,
            });
        }
    }
    out
}

/// Multisets of local types with prescribed totals; each multiset is sorted.
fn singularity_profiles(delta: u32, delta_prime: u32) -> Vec<Vec<LocalType>> {
    // every possible local type with delta(s) <= delta
    let mut pool = Vec::new();
    for ds in 1..=delta {
        for dps in 1..=ds {
            pool.extend(local_types(ds, dps));
        }
    }
    pool.sort();
    fn rec(
        pool: &[LocalType],
        start: usize,
        delta: u32,
        delta_prime: u32,
        acc: &mut Vec<LocalType>,
        out: &mut Vec<Vec<LocalType>>,
    ) {
        if delta == 0 && delta_prime == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..pool.len() {
            let lt = &pool[i];
            if lt.delta() <= delta && lt.delta_prime() <= delta_prime {
                acc.push(lt.clone());
                rec(
                    pool,
                    i,
                    delta - lt.delta(),
                    delta_prime - lt.delta_prime(),
                    acc,
                    out,
                );
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&pool, 0, delta, delta_prime, &mut Vec::new(), &mut out);
    out
}

/// Assignments of markings: each marking goes to a branch or to a
/// distinguished point; point blocks are built in restricted-growth order
/// and each block picks a component.
fn marking_assignments(
    n: usize,
    num_branches: usize,
    num_comps: usize,
) -> Vec<(Vec<MarkTarget>, Vec<usize>)> {
    fn rec(
        i: usize,
        n: usize,
        num_branches: usize,
        num_comps: usize,
        targets: &mut Vec<MarkTarget>,
        blocks: &mut Vec<usize>,
        out: &mut Vec<(Vec<MarkTarget>, Vec<usize>)>,
    ) {
        if i == n {
            out.push((targets.clone(), blocks.clone()));
            return;
        }
        for b in 0..num_branches {
            targets.push(MarkTarget::Branch(b));
            rec(i + 1, n, num_branches, num_comps, targets, blocks, out);
            targets.pop();
        }
        for d in 0..blocks.len() {
            targets.push(MarkTarget::Point(d));
            rec(i + 1, n, num_branches, num_comps, targets, blocks, out);
            targets.pop();
        }
        for comp in 0..num_comps {
            blocks.push(comp);
            targets.push(MarkTarget::Point(blocks.len() - 1));
            rec(i + 1, n, num_branches, num_comps, targets, blocks, out);
            targets.pop();
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    rec(
        0,
        n,
        num_branches,
        num_comps,
        &mut Vec::new(),
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Complete, duplicate-free list of connected n-marked types with the given
/// invariants, sorted by canonical form.
pub fn enumerate_types(
    genus: u32,
    n: usize,
    delta: u32,
    delta_prime: u32,
    candidate_cap: u128,
) -> Result<Vec<CombinatorialType>> {
    let mut seen: BTreeMap<Vec<u8>, CombinatorialType> = BTreeMap::new();
    let mut candidates: u128 = 0;
    let bump = |candidates: &mut u128| -> Result<()> {
        *candidates += 1;
        if *candidates > candidate_cap {
            return Err(Error::Budget {
                what: "combinatorial type enumeration",
                needed: *candidates,
                cap: candidate_cap,
            });
        }
        Ok(())
    };

    if delta == 0 {
        if delta_prime != 0 {
            return Ok(Vec::new());
        }
        // smooth types: one component of genus g, markings on points
        for (targets, blocks) in marking_assignments(n, 0, 1) {
            bump(&mut candidates)?;
            let t = CombinatorialType {
                sing_genus: Vec::new(),
                comp_genus: vec![genus],
                branches: Vec::new(),
                point_comp: blocks,
                markings: targets,
            };
            debug_assert!(validate_type(&t).is_empty());
            seen.entry(canonical_form(&t)).or_insert(t);
        }
        return Ok(seen.into_values().collect());
    }
    if delta_prime == 0 || delta_prime > delta {
        return Ok(Vec::new());
    }

    for profile in singularity_profiles(delta, delta_prime) {
        let num_sings = profile.len();
        // k components; connectivity forces k <= 1 + delta via the tree bound
        let k_min = (delta as i64 - genus as i64 + 1).max(1) as usize;
        for k in k_min..=(1 + delta as usize) {
            let kg_total = genus as i64 - delta as i64 + k as i64 - 1;
            if kg_total < 0 {
                continue;
            }
            for comp_genera in compositions_sorted(kg_total as u32, k) {
                // branch-to-component assignments, grouped by equal
                // conductance within each singularity
                let per_sing_choices: Vec<Vec<Vec<Branch>>> = profile
                    .iter()
                    .enumerate()
                    .map(|(s, lt)| {
                        let mut groups: BTreeMap<u32, usize> = BTreeMap::new();
                        for &c in &lt.conductances {
                            *groups.entry(c).or_insert(0) += 1;
                        }
                        let group_choices: Vec<Vec<Vec<Branch>>> = groups
                            .iter()
                            .map(|(&c, &count)| {
                                (0..k)
                                    .combinations_with_replacement(count)
                                    .map(|comps| {
                                        comps
                                            .into_iter()
                                            .map(|comp| Branch {
                                                sing: s,
                                                comp,
                                                conductance: c,
                                            })
                                            .collect::<Vec<_>>()
                                    })
                                    .collect()
                            })
                            .collect();
                        group_choices
                            .into_iter()
                            .multi_cartesian_product()
                            .map(|parts| parts.into_iter().flatten().collect::<Vec<Branch>>())
                            .collect()
                    })
                    .collect();
                for branch_combo in per_sing_choices.iter().multi_cartesian_product() {
                    let branches: Vec<Branch> =
                        branch_combo.iter().flat_map(|v| v.iter().cloned()).collect();
                    let skeleton = CombinatorialType {
                        sing_genus: profile.iter().map(|lt| lt.genus).collect(),
                        comp_genus: comp_genera.clone(),
                        branches,
                        point_comp: Vec::new(),
                        markings: Vec::new(),
                    };
                    if !skeleton.is_connected() {
                        continue;
                    }
                    for (targets, blocks) in
                        marking_assignments(n, skeleton.num_branches(), k)
                    {
                        bump(&mut candidates)?;
                        let mut t = skeleton.clone();
                        t.point_comp = blocks;
                        t.markings = targets;
                        debug_assert!(
                            validate_type(&t).is_empty(),
                            "enumeration produced an invalid type: {:?}",
                            validate_type(&t)
                        );
                        seen.entry(canonical_form(&t)).or_insert(t);
                    }
                }
            }
        }
        let _ = num_sings;
    }
    Ok(seen.into_values().collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseFactor {
    pub component: usize,
    pub genus: u32,
    pub marked_points: usize,
    pub unmarked_branches: usize,
    pub dimension: i64,
    /// 2g - 2 + n + m > 0; factors failing this are flagged.
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberFactor {
    pub singularity: usize,
    pub genus: u32,
    pub conductances: Vec<u32>,
    /// Known territory dimension, when the catalog covers this shape.
    pub dimension: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub base_factors: Vec<BaseFactor>,
    pub base_dimension: i64,
    pub symmetry_order: u128,
    pub fiber_factors: Vec<FiberFactor>,
    pub fiber_dimension: Option<i64>,
    pub total_dimension: i64,
    /// False when some fiber dimension is unknown and the total is only a
    /// lower bound (with unknown factors counted as 0).
    pub total_is_exact: bool,
}

/// Known territory dimensions for small shapes; everything else reports
/// None and the system emitter takes over.
fn fiber_dimension(genus: u32, conductances: &[u32]) -> Option<i64> {
    let m = conductances.len() as i64;
    let g = genus as i64;
    if conductances.iter().all(|&c| c == 2) && g >= 1 && g <= m {
        return Some(g * (m - g));
    }
    if conductances.iter().all(|&c| c == 1) && genus == 0 {
        return Some(0);
    }
    if conductances == [4] && genus == 2 {
        return Some(1);
    }
    None
}

/// Symbolic description of the stratum of a combinatorial type: moduli
/// factors of the normalization, branch-permutation symmetry, and territory
/// fibers per singularity.
pub fn stratum_report(t: &CombinatorialType) -> Result<StratumReport> {
    let violations = validate_type(t);
    if !violations.is_empty() {
        return Err(Error::InvalidType(
            violations.iter().map(|v| v.to_string()).join("; "),
        ));
    }
    let marked_branches: std::collections::BTreeSet<usize> = t
        .markings
        .iter()
        .filter_map(|m| match m {
            MarkTarget::Branch(b) => Some(*b),
            MarkTarget::Point(_) => None,
        })
        .collect();

    let mut base_factors = Vec::new();
    let mut base_dimension = 0i64;
    for v in 0..t.num_comps() {
        let marks_via_points = t
            .markings
            .iter()
            .filter(|m| matches!(m, MarkTarget::Point(d) if t.point_comp[*d] == v))
            .count();
        let marks_via_branches = t
            .markings
            .iter()
            .filter(|m| matches!(m, MarkTarget::Branch(b) if t.branches[*b].comp == v))
            .count();
        let n_v = marks_via_points + marks_via_branches;
        let m_v = (0..t.num_branches())
            .filter(|&b| t.branches[b].comp == v && !marked_branches.contains(&b))
            .count();
        let g = t.comp_genus[v];
        let dimension = 3 * g as i64 - 3 + (n_v + m_v) as i64;
        base_dimension += dimension;
        base_factors.push(BaseFactor {
            component: v,
            genus: g,
            marked_points: n_v,
            unmarked_branches: m_v,
            dimension,
            stable: 2 * g as i64 - 2 + (n_v + m_v) as i64 > 0,
        });
    }

    // |S_Gamma|: permutations of unmarked branches preserving sigma, tau, c
    let mut groups: BTreeMap<(usize, usize, u32), u128> = BTreeMap::new();
    for b in 0..t.num_branches() {
        if marked_branches.contains(&b) {
            continue;
        }
        let br = &t.branches[b];
        *groups.entry((br.sing, br.comp, br.conductance)).or_insert(0) += 1;
    }
    let mut symmetry_order: u128 = 1;
    for count in groups.values() {
        let mut fact: u128 = 1;
        for i in 2..=*count {
            fact *= i;
        }
        symmetry_order *= fact;
    }

    let mut fiber_factors = Vec::new();
    let mut fiber_sum = 0i64;
    let mut all_known = true;
    for s in 0..t.num_sings() {
        let mut conductances: Vec<u32> = t
            .branches_at_sing(s)
            .iter()
            .map(|&b| t.branches[b].conductance)
            .collect();
        conductances.sort_unstable_by(|a, b| b.cmp(a));
        let dimension = fiber_dimension(t.sing_genus[s], &conductances);
        match dimension {
            Some(d) => fiber_sum += d,
            None => all_known = false,
        }
        fiber_factors.push(FiberFactor {
            singularity: s,
            genus: t.sing_genus[s],
            conductances,
            dimension,
        });
    }

    Ok(StratumReport {
        base_factors,
        base_dimension,
        symmetry_order,
        fiber_factors,
        fiber_dimension: all_known.then_some(fiber_sum),
        total_dimension: base_dimension + fiber_sum,
        total_is_exact: all_known,
    })
}

/// Graphviz rendering: circles for components, squares for singularities,
/// half-edge stubs for distinguished points.
pub fn to_dot(t: &CombinatorialType) -> String {
    let mut out = String::from("graph combinatorial_type {\n");
    for (s, &g) in t.sing_genus.iter().enumerate() {
        out.push_str(&format!("  s{s} [shape=box, label=\"{g}\"];\n"));
    }
    for (k, &g) in t.comp_genus.iter().enumerate() {
        out.push_str(&format!("  k{k} [shape=circle, label=\"{g}\"];\n"));
    }
    for (b, br) in t.branches.iter().enumerate() {
        let marks: Vec<String> = t
            .markings
            .iter()
            .enumerate()
            .filter(|(_, m)| matches!(m, MarkTarget::Branch(x) if *x == b))
            .map(|(i, _)| (i + 1).to_string())
            .collect();
        let label = if marks.is_empty() {
            format!("{}", br.conductance)
        } else {
            format!("{} [{}]", br.conductance, marks.join(","))
        };
        out.push_str(&format!(
            "  s{} -- k{} [label=\"{}\"];\n",
            br.sing, br.comp, label
        ));
    }
    for (d, &comp) in t.point_comp.iter().enumerate() {
        let marks: Vec<String> = t
            .markings
            .iter()
            .enumerate()
            .filter(|(_, m)| matches!(m, MarkTarget::Point(x) if *x == d))
            .map(|(i, _)| (i + 1).to_string())
            .collect();
        out.push_str(&format!("  d{d} [shape=point];\n"));
        out.push_str(&format!(
            "  d{d} -- k{comp} [style=dashed, label=\"{}\"];\n",
            marks.join(",")
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn node_between_two_components() -> CombinatorialType {
        CombinatorialType {
            sing_genus: vec![0],
            comp_genus: vec![0, 0],
            branches: vec![
                Branch { sing: 0, comp: 0, conductance: 1 },
                Branch { sing: 0, comp: 1, conductance: 1 },
            ],
            point_comp: Vec::new(),
            markings: Vec::new(),
        }
    }

    fn cusp_on_genus_zero() -> CombinatorialType {
        CombinatorialType {
            sing_genus: vec![1],
            comp_genus: vec![0],
            branches: vec![Branch { sing: 0, comp: 0, conductance: 2 }],
            point_comp: Vec::new(),
            markings: Vec::new(),
        }
    }

    /// The worked example type: three components of genera 1, 0, 0 and four
    /// singularities (genus 2 with conductances (3,3), a node, a cusp with a
    /// transverse branch (2,1), a cusp (2)), with three markings on the
    /// genus-1 component.
    fn figure_type() -> CombinatorialType {
        CombinatorialType {
            sing_genus: vec![2, 0, 1, 1],
            comp_genus: vec![1, 0, 0],
            branches: vec![
                Branch { sing: 0, comp: 0, conductance: 3 },
                Branch { sing: 0, comp: 1, conductance: 3 },
                Branch { sing: 1, comp: 1, conductance: 1 },
                Branch { sing: 1, comp: 1, conductance: 1 },
                Branch { sing: 2, comp: 1, conductance: 2 },
                Branch { sing: 2, comp: 2, conductance: 1 },
                Branch { sing: 3, comp: 2, conductance: 2 },
            ],
            point_comp: vec![0, 0],
            markings: vec![
                MarkTarget::Point(0),
                MarkTarget::Point(1),
                MarkTarget::Point(1),
            ],
        }
    }

    #[test]
    fn validation_catches_the_named_edge_cases() {
        assert!(validate_type(&node_between_two_components()).is_empty());

        // one-branch genus-0 "singularity" is a smooth point
        let smooth = CombinatorialType {
            sing_genus: vec![0],
            comp_genus: vec![0],
            branches: vec![Branch { sing: 0, comp: 0, conductance: 1 }],
            point_comp: Vec::new(),
            markings: Vec::new(),
        };
        assert!(validate_type(&smooth)
            .iter()
            .any(|v| matches!(v, TypeViolation::SmoothSingularity { .. })));

        // cusp with conductance 3 exceeds 2*delta = 2
        let mut bad_cusp = cusp_on_genus_zero();
        bad_cusp.branches[0].conductance = 3;
        assert!(validate_type(&bad_cusp)
            .iter()
            .any(|v| matches!(v, TypeViolation::ConductanceSumTooLarge { .. })));

        // disconnected: extra component with no branches
        let mut disc = cusp_on_genus_zero();
        disc.comp_genus.push(1);
        assert!(validate_type(&disc)
            .iter()
            .any(|v| matches!(v, TypeViolation::Disconnected)));

        // unused distinguished point
        let mut unused = cusp_on_genus_zero();
        unused.point_comp.push(0);
        assert!(validate_type(&unused)
            .iter()
            .any(|v| matches!(v, TypeViolation::UnusedDistinguishedPoint { .. })));
    }

    #[test]
    fn invariants_of_small_types() {
        // self-node on one genus-0 component
        let self_node = CombinatorialType {
            sing_genus: vec![0],
            comp_genus: vec![0],
            branches: vec![
                Branch { sing: 0, comp: 0, conductance: 1 },
                Branch { sing: 0, comp: 0, conductance: 1 },
            ],
            point_comp: Vec::new(),
            markings: Vec::new(),
        };
        let inv = type_invariants(&self_node).unwrap();
        assert_eq!((inv.genus, inv.delta, inv.delta_prime, inv.components), (1, 1, 1, 1));

        let inv = type_invariants(&cusp_on_genus_zero()).unwrap();
        assert_eq!((inv.genus, inv.delta, inv.delta_prime, inv.components), (1, 1, 1, 1));
    }

    #[test]
    fn figure_example_invariants() {
        let t = figure_type();
        assert!(validate_type(&t).is_empty());
        let inv = type_invariants(&t).unwrap();
        assert_eq!(inv.genus, 6);
        assert_eq!(inv.delta, 7);
        assert_eq!(inv.delta_prime, 6);
        assert_eq!(inv.components, 3);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let t = figure_type();
        let base = canonical_form(&t);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut ms: Vec<usize> = (0..t.num_sings()).collect();
            let mut mk: Vec<usize> = (0..t.num_comps()).collect();
            let mut mb: Vec<usize> = (0..t.num_branches()).collect();
            let mut md: Vec<usize> = (0..t.num_points()).collect();
            ms.shuffle(&mut rng);
            mk.shuffle(&mut rng);
            mb.shuffle(&mut rng);
            md.shuffle(&mut rng);
            let relabeled = apply_relabeling(&t, &ms, &mk, &mb, &md);
            assert!(validate_type(&relabeled).is_empty());
            assert_eq!(canonical_form(&relabeled), base);
        }
    }

    #[test]
    fn canonical_form_distinguishes_structures() {
        // two cusps on one component vs cusp + node arrangements differ
        let two_cusps = CombinatorialType {
            sing_genus: vec![1, 1],
            comp_genus: vec![0],
            branches: vec![
                Branch { sing: 0, comp: 0, conductance: 2 },
                Branch { sing: 1, comp: 0, conductance: 2 },
            ],
            point_comp: Vec::new(),
            markings: Vec::new(),
        };
        let cusp_and_node = CombinatorialType {
            sing_genus: vec![1, 0],
            comp_genus: vec![0],
            branches: vec![
                Branch { sing: 0, comp: 0, conductance: 2 },
                Branch { sing: 1, comp: 0, conductance: 1 },
                Branch { sing: 1, comp: 0, conductance: 1 },
            ],
            point_comp: Vec::new(),
            markings: Vec::new(),
        };
        assert_ne!(canonical_form(&two_cusps), canonical_form(&cusp_and_node));
    }

    #[test]
    fn canonical_form_is_marking_sensitive() {
        // two markings on different branches of a node joining unequal
        // components: swapping the marking indices changes the type
        let t1 = CombinatorialType {
            sing_genus: vec![0],
            comp_genus: vec![1, 0],
            branches: vec![
                Branch { sing: 0, comp: 0, conductance: 1 },
                Branch { sing: 0, comp: 1, conductance: 1 },
            ],
            point_comp: Vec::new(),
            markings: vec![MarkTarget::Branch(0), MarkTarget::Branch(1)],
        };
        let mut t2 = t1.clone();
        t2.markings = vec![MarkTarget::Branch(1), MarkTarget::Branch(0)];
        assert_ne!(canonical_form(&t1), canonical_form(&t2));
    }

    #[test]
    fn enumeration_of_genus_one_delta_one() {
        let types = enumerate_types(1, 0, 1, 1, 1 << 20).unwrap();
        assert_eq!(types.len(), 3);
        for t in &types {
            assert!(validate_type(t).is_empty());
            let inv = type_invariants(t).unwrap();
            assert_eq!((inv.genus, inv.delta, inv.delta_prime), (1, 1, 1));
            assert!(inv.components <= 2);
        }
        // delta' = 0 with delta >= 1 is impossible
        assert!(enumerate_types(1, 0, 1, 0, 1 << 20).unwrap().is_empty());
    }

    #[test]
    fn enumeration_smoke_for_larger_invariants() {
        for (g, n, d, dp) in [(0u32, 1usize, 2u32, 2u32), (2, 0, 2, 1), (1, 1, 2, 2)] {
            let types = enumerate_types(g, n, d, dp, 1 << 22).unwrap();
            assert!(!types.is_empty());
            for t in &types {
                let inv = type_invariants(t).unwrap();
                assert_eq!(inv.genus, g as i64);
                assert_eq!(inv.delta, d);
                assert_eq!(inv.delta_prime, dp);
                assert!(inv.components <= 1 + d as usize);
            }
            // pairwise distinct canonical forms
            let forms: std::collections::BTreeSet<Vec<u8>> =
                types.iter().map(canonical_form).collect();
            assert_eq!(forms.len(), types.len());
        }
    }

    #[test]
    fn genus_zero_forces_trees_of_genus_zero_data() {
        let types = enumerate_types(0, 0, 2, 2, 1 << 22).unwrap();
        for t in &types {
            let all_genera_zero = t
                .sing_genus
                .iter()
                .chain(t.comp_genus.iter())
                .all(|&g| g == 0);
            assert!(all_genera_zero);
            // first Betti number zero: edges = vertices - 1
            assert_eq!(
                t.num_branches(),
                t.num_sings() + t.num_comps() - 1
            );
        }
    }

    #[test]
    fn stratum_reports_for_named_examples() {
        // node joining two genus-0 components, two markings each
        let mut node = node_between_two_components();
        node.point_comp = vec![0, 0, 1, 1];
        node.markings = vec![
            MarkTarget::Point(0),
            MarkTarget::Point(1),
            MarkTarget::Point(2),
            MarkTarget::Point(3),
        ];
        let rep = stratum_report(&node).unwrap();
        assert_eq!(rep.base_factors.len(), 2);
        for f in &rep.base_factors {
            assert_eq!((f.genus, f.marked_points, f.unmarked_branches), (0, 2, 1));
            assert!(f.stable);
        }
        assert_eq!(rep.base_dimension, 0);
        assert_eq!(rep.symmetry_order, 1);
        assert_eq!(rep.fiber_dimension, Some(0));
        assert_eq!(rep.total_dimension, 0);
        assert!(rep.total_is_exact);

        // tacnode on one genus-0 component with one marking
        let tacnode = CombinatorialType {
            sing_genus: vec![1],
            comp_genus: vec![0],
            branches: vec![
                Branch { sing: 0, comp: 0, conductance: 2 },
                Branch { sing: 0, comp: 0, conductance: 2 },
            ],
            point_comp: vec![0],
            markings: vec![MarkTarget::Point(0)],
        };
        let rep = stratum_report(&tacnode).unwrap();
        assert_eq!(rep.base_factors[0].marked_points, 1);
        assert_eq!(rep.base_factors[0].unmarked_branches, 2);
        assert_eq!(rep.base_dimension, 0);
        assert_eq!(rep.symmetry_order, 2);
        assert_eq!(rep.fiber_dimension, Some(1));
        assert_eq!(rep.total_dimension, 1);

        // ramphoid cusp on a genus-1 component, no markings
        let ramphoid = CombinatorialType {
            sing_genus: vec![2],
            comp_genus: vec![1],
            branches: vec![Branch { sing: 0, comp: 0, conductance: 4 }],
            point_comp: Vec::new(),
            markings: Vec::new(),
        };
        let rep = stratum_report(&ramphoid).unwrap();
        assert_eq!(rep.base_factors[0].dimension, 3 * 1 - 3 + 1);
        assert!(rep.base_factors[0].stable);
        assert_eq!(rep.fiber_dimension, Some(1));
        assert_eq!(rep.total_dimension, 2);
    }

    #[test]
    fn marked_branches_do_not_count_into_symmetry() {
        let mut tac = CombinatorialType {
            sing_genus: vec![1],
            comp_genus: vec![0],
            branches: vec![
                Branch { sing: 0, comp: 0, conductance: 2 },
                Branch { sing: 0, comp: 0, conductance: 2 },
            ],
            point_comp: Vec::new(),
            markings: Vec::new(),
        };
        tac.markings = vec![MarkTarget::Branch(0)];
        let rep = stratum_report(&tac).unwrap();
        assert_eq!(rep.symmetry_order, 1);
        assert_eq!(rep.base_factors[0].marked_points, 1);
        assert_eq!(rep.base_factors[0].unmarked_branches, 1);
    }

    #[test]
    fn dot_output_has_shapes() {
        let dot = to_dot(&figure_type());
        assert!(dot.contains("shape=box"));
        assert!(dot.contains("shape=circle"));
        assert!(dot.contains("--"));
    }
}

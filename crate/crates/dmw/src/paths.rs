//! Capacitated vertex-disjoint paths.
//!
//! A path from `s` to `t` (or a cycle through `s` when `s = t`) has size
//! `|E(P)| + 1`, the number of vertex traversals; a cycle's start is
//! traversed twice. A collection is feasible when every vertex `z` is
//! traversed at most `w(z)` times. The solver fills a table over all
//! sub-lists `A` of the pairs, where pairs outside `A` keep their endpoints
//! reserved.
//!
//! Optimal paths cross a module in a single vertex, so at every tree node the
//! pairs split into those routed inside one module, solved by that module's
//! own table, and those routed across the quotient, solved by an integer
//! program over quotient paths and then lifted into the modules.

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::ilp::{self, IlpInstance, IlpResult, Relation};
use crate::modular::{decomposition_tree, DecompositionTree};

/// Largest quotient whose simple paths are enumerated.
pub const MAX_QUOTIENT: usize = 8;

/// Walks for a sub-list of pairs, in ascending pair order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCollection {
    /// Indices into the caller's pair list.
    pub pairs: Vec<usize>,
    /// `walks[j]` runs from `s` to `t` of pair `pairs[j]`; a cycle repeats its start.
    pub walks: Vec<Vec<usize>>,
    /// Total size `Σ |walk|`.
    pub size: i64,
}

impl PathCollection {
    fn empty() -> Self {
        PathCollection { pairs: vec![], walks: vec![], size: 0 }
    }
}

/// Optimal collections for every sub-list, indexed by bitmask over the pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubListTable {
    pub entries: Vec<Option<PathCollection>>,
}

/// Capacities left for the pairs in `a` once every other pair reserves its endpoints.
pub fn reduced_capacities(w: &[i64], pairs: &[(usize, usize)], a: u64) -> Vec<i64> {
    let mut out = w.to_vec();
    for (i, &(s, t)) in pairs.iter().enumerate() {
        if a >> i & 1 == 0 {
            out[s] -= 1;
            out[t] -= 1;
        }
    }
    out
}

fn validate(d: &Digraph, w: &[i64], pairs: &[(usize, usize)], tau: i64) -> Result<()> {
    if w.len() != d.n() {
        return Err(Error::LengthMismatch { expected: d.n(), found: w.len() });
    }
    if let Some(v) = w.iter().position(|&x| x < 0) {
        return Err(Error::NegativeWeight(v));
    }
    let total = w.iter().try_fold(0i64, |a, &x| a.checked_add(x)).ok_or(Error::Overflow)?;
    if total > tau {
        return Err(Error::ThresholdExceeded { total, tau });
    }
    if let Some(&(s, t)) = pairs.iter().find(|&&(s, t)| s >= d.n() || t >= d.n()) {
        return Err(Error::InvalidVertex(s.max(t)));
    }
    if pairs.len() > 30 {
        return Err(Error::InvalidInstance("at most 30 pairs are supported".into()));
    }
    Ok(())
}

/// Solves every sub-list of `pairs`.
///
/// ```
/// use dmw::{paths::solve_vddp_cs, Digraph};
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
/// let table = solve_vddp_cs(&c3, &[2, 1, 1], &[(0, 0)], 4).unwrap();
/// let full = table.entries[1].as_ref().unwrap();
/// assert_eq!((full.size, &full.walks), (4, &vec![vec![0, 1, 2, 0]]));
/// ```
pub fn solve_vddp_cs(d: &Digraph, w: &[i64], pairs: &[(usize, usize)], tau: i64) -> Result<SubListTable> {
    validate(d, w, pairs, tau)?;
    let tree = decomposition_tree(d);
    let entries = solve_node(&tree, 0, w, pairs)?;
    Ok(SubListTable { entries })
}

/// The collection for the full pair list, or `None` when infeasible.
pub fn solve_vddp_c(d: &Digraph, w: &[i64], pairs: &[(usize, usize)], tau: i64) -> Result<Option<PathCollection>> {
    let full = (1usize << pairs.len()) - 1;
    Ok(solve_vddp_cs(d, w, pairs, tau)?.entries.swap_remove(full))
}

/// Classical disjoint paths: unit capacities, pairwise distinct endpoints.
pub fn solve_vddp(d: &Digraph, pairs: &[(usize, usize)]) -> Result<Option<PathCollection>> {
    let mut seen = vec![false; d.n()];
    for &(s, t) in pairs {
        if s >= d.n() || t >= d.n() {
            return Err(Error::InvalidVertex(s.max(t)));
        }
        if s == t || seen[s] || seen[t] {
            return Err(Error::OverlappingEndpoints);
        }
        seen[s] = true;
        seen[t] = true;
    }
    solve_vddp_c(d, &vec![1; d.n()], pairs, d.n() as i64)
}

/// Sub-list table of the instance `(D[node], w, pairs)`; `w` is indexed by
/// original vertex ids and only read on the node's vertices.
fn solve_node(tree: &DecompositionTree, id: usize, w: &[i64], pairs: &[(usize, usize)]) -> Result<Vec<Option<PathCollection>>> {
    let node = &tree.nodes[id];
    let r = pairs.len();
    let capacities_ok = |a: u64| {
        let wa = reduced_capacities(w, pairs, a);
        node.vertices.iter().all(|&z| wa[z] >= 0).then_some(wa)
    };
    if r == 0 {
        return Ok(vec![capacities_ok(0).map(|_| PathCollection::empty())]);
    }
    if node.is_leaf() {
        let mut entries = vec![None; 1 << r];
        entries[0] = capacities_ok(0).map(|_| PathCollection::empty());
        return Ok(entries);
    }
    let q = node.quotient.as_ref().expect("internal node");
    let l = q.n();
    if l > MAX_QUOTIENT {
        return Err(Error::QuotientTooLarge { size: l, limit: MAX_QUOTIENT });
    }
    let eta = |v: usize| tree.block_of(id, v);
    let ends: Vec<(usize, usize)> = pairs.iter().map(|&(s, t)| (eta(s), eta(t))).collect();
    let same: u64 = (0..r).filter(|&i| ends[i].0 == ends[i].1).fold(0, |m, i| m | 1 << i);

    // child instances: pairs inside the module, capacities minus crossing endpoints
    let mut inside: Vec<Vec<usize>> = vec![Vec::new(); l];
    let mut child_w = w.to_vec();
    for (i, &(s, t)) in pairs.iter().enumerate() {
        if same >> i & 1 == 1 {
            inside[ends[i].0].push(i);
        } else {
            child_w[s] -= 1;
            child_w[t] -= 1;
        }
    }
    let mut tables = Vec::with_capacity(l);
    for (k, &c) in node.children.iter().enumerate() {
        let child_pairs: Vec<(usize, usize)> = inside[k].iter().map(|&i| pairs[i]).collect();
        tables.push(solve_node(tree, c, &child_w, &child_pairs)?);
    }
    let routes: Vec<Vec<Vec<usize>>> = ends.iter().map(|&(a, b)| quotient_walks(q, a, b)).collect();

    let mut entries = Vec::with_capacity(1 << r);
    for a in 0..1u64 << r {
        let Some(wa) = capacities_ok(a) else {
            entries.push(None);
            continue;
        };
        let mut best: Option<PathCollection> = None;
        let free = a & same;
        let mut b = 0u64;
        loop {
            let candidate = combine(tree, id, pairs, &ends, &inside, &tables, &routes, &wa, a, b)?;
            if let Some(c) = candidate {
                if best.as_ref().map_or(true, |x| c.size < x.size) {
                    best = Some(c);
                }
            }
            // next subset of `free` in ascending order
            if b == free {
                break;
            }
            b = (b.wrapping_sub(free)) & free;
        }
        entries.push(best);
    }
    Ok(entries)
}

/// Best collection for sub-list `a` when the same-module pairs in `b` are
/// routed across the quotient and the rest of `a` inside their modules.
#[allow(clippy::too_many_arguments)]
fn combine(
    tree: &DecompositionTree,
    id: usize,
    pairs: &[(usize, usize)],
    ends: &[(usize, usize)],
    inside: &[Vec<usize>],
    tables: &[Vec<Option<PathCollection>>],
    routes: &[Vec<Vec<usize>>],
    wa: &[i64],
    a: u64,
    b: u64,
) -> Result<Option<PathCollection>> {
    let node = &tree.nodes[id];
    let l = node.children.len();
    let mut remaining = wa.to_vec();
    let mut caps = vec![0i64; l];
    let mut size = 0;
    let mut walks: Vec<(usize, Vec<usize>)> = Vec::new();
    for k in 0..l {
        let local = inside[k]
            .iter()
            .enumerate()
            .filter(|&(_, &i)| a >> i & 1 == 1 && b >> i & 1 == 0)
            .fold(0usize, |m, (j, _)| m | 1 << j);
        let Some(child) = &tables[k][local] else { return Ok(None) };
        for (&j, walk) in child.pairs.iter().zip(&child.walks) {
            for &z in walk {
                remaining[z] -= 1;
            }
            walks.push((inside[k][j], walk.clone()));
        }
        size += child.size;
        caps[k] = tree.nodes[node.children[k]].vertices.iter().map(|&z| wa[z]).sum::<i64>() - child.size;
        if caps[k] < 0 {
            return Ok(None);
        }
    }
    let routed: Vec<usize> = (0..pairs.len()).filter(|&i| a >> i & 1 == 1 && (b >> i & 1 == 1 || ends[i].0 != ends[i].1)).collect();
    if !routed.is_empty() {
        let Some(choice) = route_quotient(routes, &routed, ends, &caps)? else { return Ok(None) };
        let mut pending = vec![0i64; remaining.len()];
        for &i in &routed {
            pending[pairs[i].0] += 1;
            pending[pairs[i].1] += 1;
        }
        for (&i, route) in routed.iter().zip(choice) {
            let (s, t) = pairs[i];
            pending[s] -= 1;
            pending[t] -= 1;
            let mut walk = vec![s];
            for &m in &route[1..route.len() - 1] {
                let module = &tree.nodes[node.children[m]].vertices;
                let u = *module
                    .iter()
                    .find(|&&u| remaining[u] > pending[u])
                    .ok_or_else(|| Error::Witness(format!("no free vertex in module {m} for pair {i}")))?;
                remaining[u] -= 1;
                walk.push(u);
            }
            walk.push(t);
            remaining[s] -= 1;
            remaining[t] -= 1;
            size += walk.len() as i64;
            walks.push((i, walk));
        }
    }
    walks.sort_by_key(|(i, _)| *i);
    let (pair_ids, walks) = walks.into_iter().unzip();
    Ok(Some(PathCollection { pairs: pair_ids, walks, size }))
}

/// Chooses one quotient route per routed pair within the module capacities,
/// minimizing total size.
fn route_quotient(routes: &[Vec<Vec<usize>>], routed: &[usize], ends: &[(usize, usize)], caps: &[i64]) -> Result<Option<Vec<Vec<usize>>>> {
    if routed.iter().any(|&i| routes[i].is_empty()) {
        return Ok(None);
    }
    let vars: Vec<(usize, &Vec<usize>)> = routed.iter().flat_map(|&i| routes[i].iter().map(move |q| (i, q))).collect();
    let mut program = IlpInstance::new(vec![(0, 1); vars.len()]);
    program.objective = vars.iter().map(|(_, q)| q.len() as i64).collect();
    for &i in routed {
        let coeffs = vars.iter().map(|&(j, _)| i64::from(j == i)).collect();
        program.add(coeffs, Relation::Eq, 1);
    }
    for (m, &cap) in caps.iter().enumerate() {
        // a cycle's start module is traversed twice, which its listing already reflects
        let coeffs: Vec<i64> = vars.iter().map(|(_, q)| q.iter().filter(|&&x| x == m).count() as i64).collect();
        if coeffs.iter().any(|&c| c != 0) {
            program.add(coeffs, Relation::Le, cap);
        }
    }
    debug_assert!(routed.iter().all(|&i| routes[i].iter().all(|q| q[0] == ends[i].0)));
    Ok(match ilp::solve(&program)? {
        IlpResult::Infeasible => None,
        IlpResult::Optimal { assignment, .. } => {
            let chosen = routed
                .iter()
                .map(|&i| vars.iter().zip(&assignment).find(|((j, _), &x)| *j == i && x == 1).expect("one route per pair").0 .1.clone())
                .collect();
            Some(chosen)
        }
    })
}

/// Simple paths from `a` to `b` in the quotient, or cycles through `a` when
/// `a == b`, as vertex lists.
fn quotient_walks(q: &Digraph, a: usize, b: usize) -> Vec<Vec<usize>> {
    fn extend(q: &Digraph, b: usize, walk: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = *walk.last().expect("non-empty");
        for &u in q.out_neighbors(v) {
            if u == b {
                let mut done = walk.clone();
                done.push(u);
                out.push(done);
            } else if !used[u] {
                used[u] = true;
                walk.push(u);
                extend(q, b, walk, used, out);
                walk.pop();
                used[u] = false;
            }
        }
    }
    let mut used = vec![false; q.n()];
    used[a] = true;
    used[b] = true;
    let mut out = Vec::new();
    extend(q, b, &mut vec![a], &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Digraph {
        s.parse().unwrap()
    }

    #[test]
    fn single_edge() {
        let e = g("2\n0 1");
        let c = solve_vddp_c(&e, &[1, 1], &[(0, 1)], 2).unwrap().unwrap();
        assert_eq!((c.size, c.walks), (2, vec![vec![0, 1]]));
    }

    #[test]
    fn cycle_needs_double_capacity() {
        let c3 = g("3\n0 1\n1 2\n2 0");
        assert_eq!(solve_vddp_c(&c3, &[1, 1, 1], &[(0, 0)], 3).unwrap(), None);
    }

    #[test]
    fn repeated_pairs() {
        let p = g("3\n0 1\n1 2");
        assert_eq!(solve_vddp_c(&p, &[1, 1, 1], &[(0, 2), (0, 2)], 3).unwrap(), None);
        let c = solve_vddp_c(&p, &[2, 2, 2], &[(0, 2), (0, 2)], 6).unwrap().unwrap();
        assert_eq!((c.size, c.walks), (6, vec![vec![0, 1, 2], vec![0, 1, 2]]));
    }

    #[test]
    fn classical_instances() {
        let k4 = Digraph::from_fn(4, |u, v| u != v).unwrap();
        let c = solve_vddp(&k4, &[(0, 1), (2, 3)]).unwrap().unwrap();
        assert_eq!((c.size, c.walks), (4, vec![vec![0, 1], vec![2, 3]]));
        let two = g("4\n0 1\n2 3");
        assert_eq!(solve_vddp(&two, &[(0, 1), (2, 3)]).unwrap().unwrap().walks, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(solve_vddp(&g("4\n0 1\n1 2\n2 3"), &[(0, 3)]).unwrap().unwrap().walks, vec![vec![0, 1, 2, 3]]);
        assert_eq!(solve_vddp(&g("2\n1 0"), &[(0, 1)]).unwrap(), None);
        assert_eq!(solve_vddp(&two, &[(0, 1), (1, 2)]), Err(Error::OverlappingEndpoints));
    }
}

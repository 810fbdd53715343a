//! Directed pathwidth and cycle rank.
//!
//! Both are computed over the decomposition tree with two weights per
//! quotient vertex: `n`, the module size, and `w`, the module's own optimum.
//! A module that stays relevant across a cut, or that is split by an
//! elimination, costs its full size; any other module only costs its own
//! width or rank.

use serde::{Deserialize, Serialize};

use crate::bits::{members, out_masks};
use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::modular::{decomposition_tree, DecompositionTree};

/// Largest quotient for the bag-sequence search and the permutation search.
pub const MAX_QUOTIENT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedPathDecomposition {
    pub bags: Vec<VertexSet>,
}

impl DirectedPathDecomposition {
    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }
}

/// Checks coverage, contiguity of every vertex's bags, and that no edge runs
/// from a vertex only after a cut to a vertex only before it.
///
/// ```
/// use dmw::{widths::{validate_dpd, DirectedPathDecomposition}, Digraph};
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
/// let bad = DirectedPathDecomposition { bags: vec![vec![0, 1], vec![1, 2], vec![0, 2]] };
/// assert!(!validate_dpd(&c3, &bad));
/// let good = DirectedPathDecomposition { bags: vec![vec![0, 1], vec![0, 2]] };
/// assert!(validate_dpd(&c3, &good));
/// ```
pub fn validate_dpd(d: &Digraph, dec: &DirectedPathDecomposition) -> bool {
    let n = d.n();
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0; n];
    let mut count = vec![0; n];
    for (t, bag) in dec.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return false;
            }
            first[v] = first[v].min(t);
            last[v] = t;
            count[v] += 1;
        }
        let mut sorted = bag.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != bag.len() {
            return false;
        }
    }
    if (0..n).any(|v| count[v] == 0 || count[v] != last[v] - first[v] + 1) {
        return false;
    }
    // cut after bag t: "before only" = last ≤ t, "after only" = first > t
    (0..dec.bags.len().saturating_sub(1)).all(|t| d.edges().all(|(u, v)| !(first[u] > t && last[v] <= t)))
}

/// Exact directed pathwidth with a decomposition of that width.
pub fn directed_pathwidth(d: &Digraph) -> Result<(usize, DirectedPathDecomposition)> {
    let tree = decomposition_tree(d);
    let dec = decompositions_per_node(&tree)?.swap_remove(0);
    Ok((dec.width(), dec))
}

pub(crate) fn decompositions_per_node(tree: &DecompositionTree) -> Result<Vec<DirectedPathDecomposition>> {
    let mut sols: Vec<Option<DirectedPathDecomposition>> = vec![None; tree.nodes.len()];
    for id in tree.bottom_up() {
        let node = &tree.nodes[id];
        let Some(q) = &node.quotient else {
            sols[id] = Some(DirectedPathDecomposition { bags: vec![node.vertices.clone()] });
            continue;
        };
        let children: Vec<&DirectedPathDecomposition> = node.children.iter().map(|&c| sols[c].as_ref().expect("child first")).collect();
        let n: Vec<usize> = node.children.iter().map(|&c| tree.nodes[c].vertices.len()).collect();
        let w: Vec<usize> = children.iter().map(|c| c.width() + 1).collect();
        let (_, sequence) = quotient_pathwidth(q, &n, &w)?;
        let mut bags = Vec::new();
        for (bag, guards) in sequence {
            let whole = |skip: Option<usize>| -> Vec<usize> {
                members(bag).filter(|&i| Some(i) != skip).flat_map(|i| tree.nodes[node.children[i]].vertices.iter().copied()).collect()
            };
            match swept(bag, guards, &n, &w) {
                None => bags.push(sorted(whole(None))),
                Some(i) => {
                    let rest = whole(Some(i));
                    for inner in &children[i].bags {
                        bags.push(sorted(rest.iter().chain(inner).copied().collect()));
                    }
                }
            }
        }
        sols[id] = Some(DirectedPathDecomposition { bags });
    }
    Ok(sols.into_iter().map(|s| s.expect("all nodes solved")).collect())
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// The non-guard of a bag whose module is replaced by its own decomposition:
/// the one saving the most, smallest index on ties.
fn swept(bag: u64, guards: u64, n: &[usize], w: &[usize]) -> Option<usize> {
    members(bag & !guards).fold(None, |best: Option<usize>, i| match best {
        Some(b) if n[b] - w[b] >= n[i] - w[i] => Some(b),
        _ => Some(i),
    })
}

/// Size of the expanded bag: all modules whole except the swept one.
pub(crate) fn bag_value(bag: u64, guards: u64, n: &[usize], w: &[usize]) -> usize {
    let total: usize = members(bag).map(|i| n[i]).sum();
    total - swept(bag, guards, n, w).map_or(0, |i| n[i] - w[i])
}

/// Minimum over quotient bag sequences of the largest bag value, with the
/// optimal sequence as `(bag, guards)` masks. A vertex guards a bag when it
/// also lies in the previous or next bag.
pub(crate) fn quotient_pathwidth(q: &Digraph, n: &[usize], w: &[usize]) -> Result<(usize, Vec<(u64, u64)>)> {
    let l = q.n();
    if l > MAX_QUOTIENT {
        return Err(Error::QuotientTooLarge { size: l, limit: MAX_QUOTIENT });
    }
    let full = (1u64 << l) - 1;
    let inn: Vec<u64> = (0..l).map(|v| q.in_neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect();
    // state: seen S, current bag X ⊆ S, G = X ∩ previous bag; encoded in base 4
    let encode = |s: u64, x: u64, g: u64| -> usize {
        (0..l).fold(0usize, |acc, v| {
            let digit = if g >> v & 1 == 1 {
                3
            } else if x >> v & 1 == 1 {
                2
            } else {
                (s >> v & 1) as usize
            };
            acc * 4 + digit
        })
    };
    let states = 1usize << (2 * l);
    let mut cost = vec![usize::MAX; states];
    let mut pred: Vec<Option<(u64, u64, u64)>> = vec![None; states];
    let mut by_seen: Vec<Vec<(u64, u64)>> = vec![Vec::new(); 1 << l];
    for first in 1..=full {
        let idx = encode(first, first, 0);
        cost[idx] = 0;
        by_seen[first as usize].push((first, 0));
    }
    let mut best: Option<(usize, (u64, u64, u64))> = None;
    for s in 1..=full {
        let list = std::mem::take(&mut by_seen[s as usize]);
        for (x, g) in list {
            let here = cost[encode(s, x, g)];
            if s == full {
                let total = here.max(bag_value(x, g, n, w));
                if best.map_or(true, |(b, _)| total < b) {
                    best = Some((total, (s, x, g)));
                }
                continue;
            }
            let unseen = full & !s;
            let mut k = x;
            loop {
                // cut between X and the next bag: nothing unseen may point into S ∖ K
                let forgotten = s & !k;
                let blocked = members(forgotten).any(|v| inn[v] & unseen != 0);
                if !blocked {
                    let value = here.max(bag_value(x, g | k, n, w));
                    let mut fresh = unseen;
                    while fresh != 0 {
                        let (s2, x2, g2) = (s | fresh, k | fresh, k);
                        let idx = encode(s2, x2, g2);
                        if value < cost[idx] {
                            if cost[idx] == usize::MAX {
                                by_seen[s2 as usize].push((x2, g2));
                            }
                            cost[idx] = value;
                            pred[idx] = Some((s, x, g));
                        }
                        fresh = (fresh - 1) & unseen;
                    }
                }
                if k == 0 {
                    break;
                }
                k = (k - 1) & x;
            }
        }
    }
    let (value, mut state) = best.expect("one bag with everything is valid");
    let mut sequence = Vec::new();
    let mut next_guards = 0u64;
    loop {
        let (s, x, g) = state;
        sequence.push((x, g | next_guards));
        next_guards = g;
        match pred[encode(s, x, g)] {
            Some(p) => state = p,
            None => break,
        }
    }
    sequence.reverse();
    Ok((value, sequence))
}

/// Weights of a quotient vertex: `n_weight` is its module's size and
/// `w_weight` the module's own optimum (`dpw + 1` for pathwidth, `cr` for
/// cycle rank).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualWeights {
    pub n_weight: Vec<usize>,
    pub w_weight: Vec<usize>,
}

impl DualWeights {
    fn check(&self, q: &Digraph) -> Result<()> {
        for len in [self.n_weight.len(), self.w_weight.len()] {
            if len != q.n() {
                return Err(Error::LengthMismatch { expected: q.n(), found: len });
            }
        }
        Ok(())
    }
}

/// Minimum n-w-width of `q` and an optimal bag sequence of quotient vertices.
///
/// ```
/// use dmw::{widths::{nw_pathwidth, DualWeights}, Digraph};
///
/// // two modules of 3 vertices joined by a digon, each of pathwidth 0
/// let digon: Digraph = "2\n0 1\n1 0".parse().unwrap();
/// let dw = DualWeights { n_weight: vec![3, 3], w_weight: vec![1, 1] };
/// assert_eq!(nw_pathwidth(&digon, &dw).unwrap().0, 4);
/// ```
pub fn nw_pathwidth(q: &Digraph, dw: &DualWeights) -> Result<(usize, Vec<VertexSet>)> {
    dw.check(q)?;
    let (value, sequence) = quotient_pathwidth(q, &dw.n_weight, &dw.w_weight)?;
    Ok((value, sequence.into_iter().map(|(bag, _)| members(bag).collect()).collect()))
}

/// Minimum n-w-rank of `q` and the lexicographically first optimal ordering.
pub fn nw_cycle_rank(q: &Digraph, dw: &DualWeights) -> Result<(usize, Vec<usize>)> {
    dw.check(q)?;
    quotient_cycle_rank(q, &dw.n_weight, &dw.w_weight)
}

/// A vertex ordering with its elimination forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationOrdering {
    pub sigma: Vec<usize>,
    pub tree: EliminationTree,
    /// Depth of the forest; a single vertex has rank 1.
    pub rank: usize,
}

/// `children[v]` lists the roots of the subtrees below `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationTree {
    pub roots: Vec<usize>,
    pub children: Vec<Vec<usize>>,
}

/// Builds the elimination forest of `sigma`: every strong component is
/// rooted at its earliest vertex, whose removal splits the rest into the
/// subtrees. Components are visited sinks first.
///
/// ```
/// use dmw::{widths::rank_of_ordering, Digraph};
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
/// assert_eq!(rank_of_ordering(&c3, &[0, 1, 2]).unwrap().0, 2);
/// ```
pub fn rank_of_ordering(d: &Digraph, sigma: &[usize]) -> Result<(usize, EliminationTree)> {
    let n = d.n();
    if sigma.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: sigma.len() });
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in sigma.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::NotAPermutation);
        }
        pos[v] = i;
    }
    let mut children = vec![Vec::new(); n];
    let mut keep = vec![true; n];
    let (roots, rank) = forest(d, &pos, &mut keep, &mut children);
    Ok((rank, EliminationTree { roots, children }))
}

/// Roots and depth of the forest on the vertices with `keep` set; clears `keep`.
fn forest(d: &Digraph, pos: &[usize], keep: &mut [bool], children: &mut [Vec<usize>]) -> (Vec<usize>, usize) {
    let comps = d.sccs_within(keep);
    let mut roots = Vec::with_capacity(comps.len());
    let mut depth = 0;
    for comp in comps {
        let root = *comp.iter().min_by_key(|&&v| pos[v]).expect("non-empty");
        keep.iter_mut().for_each(|k| *k = false);
        for &v in &comp {
            keep[v] = v != root;
        }
        let (below, sub) = forest(d, pos, keep, children);
        children[root] = below;
        roots.push(root);
        depth = depth.max(sub + 1);
    }
    keep.iter_mut().for_each(|k| *k = false);
    (roots, depth)
}

/// Exact cycle rank (0 for acyclic digraphs) with an ordering whose
/// elimination forest has depth `rank + 1`.
///
/// ```
/// use dmw::{widths::cycle_rank, Digraph};
///
/// let k3 = Digraph::from_fn(3, |u, v| u != v).unwrap();
/// assert_eq!(cycle_rank(&k3).unwrap().0, 2);
/// ```
pub fn cycle_rank(d: &Digraph) -> Result<(usize, EliminationOrdering)> {
    let tree = decomposition_tree(d);
    let (rank, sigma) = orderings_per_node(&tree)?.swap_remove(0);
    let (depth, etree) = rank_of_ordering(d, &sigma)?;
    debug_assert_eq!(depth, rank + 1);
    Ok((rank, EliminationOrdering { sigma, tree: etree, rank: depth }))
}

/// Per node: cycle rank and an optimal ordering of the node's vertices.
pub(crate) fn orderings_per_node(tree: &DecompositionTree) -> Result<Vec<(usize, Vec<usize>)>> {
    let mut sols: Vec<Option<(usize, Vec<usize>)>> = vec![None; tree.nodes.len()];
    for id in tree.bottom_up() {
        let node = &tree.nodes[id];
        let Some(q) = &node.quotient else {
            sols[id] = Some((0, node.vertices.clone()));
            continue;
        };
        let n: Vec<usize> = node.children.iter().map(|&c| tree.nodes[c].vertices.len()).collect();
        let w: Vec<usize> = node.children.iter().map(|&c| sols[c].as_ref().expect("child first").0).collect();
        let (rank, order) = quotient_cycle_rank(q, &n, &w)?;
        let sigma = order.iter().flat_map(|&i| sols[node.children[i]].as_ref().expect("child first").1.iter().copied()).collect();
        sols[id] = Some((rank, sigma));
    }
    Ok(sols.into_iter().map(|s| s.expect("all nodes solved")).collect())
}

/// Minimum n-w-rank over all orderings of the quotient, first optimum in
/// lexicographic order.
pub(crate) fn quotient_cycle_rank(q: &Digraph, n: &[usize], w: &[usize]) -> Result<(usize, Vec<usize>)> {
    let l = q.n();
    if l > MAX_QUOTIENT {
        return Err(Error::QuotientTooLarge { size: l, limit: MAX_QUOTIENT });
    }
    let out = out_masks(q);
    let mut sigma: Vec<usize> = (0..l).collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    loop {
        let mut pos = vec![0; l];
        for (i, &v) in sigma.iter().enumerate() {
            pos[v] = i;
        }
        let score = nw_rank(&out, &pos, n, w, (1u64 << l) - 1);
        if best.as_ref().map_or(true, |(b, _)| score < *b) {
            best = Some((score, sigma.clone()));
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    Ok(best.expect("at least one ordering"))
}

/// Largest over root-to-leaf paths of the forest on `mask` of the sum of `n`
/// over eliminated inner vertices plus `w` of the final singleton component.
pub(crate) fn nw_rank(out: &[u64], pos: &[usize], n: &[usize], w: &[usize], mask: u64) -> usize {
    strong_components(out, mask)
        .into_iter()
        .map(|c| {
            if c.count_ones() == 1 {
                w[c.trailing_zeros() as usize]
            } else {
                let root = members(c).min_by_key(|&v| pos[v]).expect("non-empty");
                n[root] + nw_rank(out, pos, n, w, c & !(1 << root))
            }
        })
        .max()
        .unwrap_or(0)
}

fn strong_components(out: &[u64], mask: u64) -> Vec<u64> {
    let reach = |v: usize| {
        let mut seen = 1u64 << v;
        let mut frontier = seen;
        while frontier != 0 {
            let next = members(frontier).fold(0, |m, u| m | out[u]) & mask & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    };
    let mut left = mask;
    let mut comps = Vec::new();
    while left != 0 {
        let v = left.trailing_zeros() as usize;
        let from_v = reach(v);
        let comp = members(from_v).filter(|&u| reach(u) >> v & 1 == 1).fold(0, |m, u| m | 1 << u);
        comps.push(comp);
        left &= !comp;
    }
    comps
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

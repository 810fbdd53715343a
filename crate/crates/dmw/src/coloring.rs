//! N-dichromatic number: each vertex `v` receives `N(v)` colours and every
//! colour class induces an acyclic subdigraph; minimize the palette size.
//!
//! A module only ever needs its own optimal palette size, so each quotient
//! vertex demands that many colours. The quotient is solved by an integer
//! program over its acyclic vertex sets, then every module's palette is
//! relabelled into the colours its quotient vertex received.

use serde::{Deserialize, Serialize};

use crate::bits::{acyclic_mask, members, out_masks};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::ilp::{self, IlpInstance, Relation};
use crate::modular::{decomposition_tree, DecompositionTree};

/// Largest quotient whose acyclic sets are enumerated.
pub const MAX_QUOTIENT: usize = 12;

/// Colours as disjoint, ascending, inclusive ranges, numbered from 1.
pub type ColourList = Vec<(i64, i64)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListDemand {
    pub demand: Vec<i64>,
    pub tau: i64,
}

impl ListDemand {
    pub fn new(demand: Vec<i64>, tau: i64) -> Result<Self> {
        if let Some(v) = demand.iter().position(|&x| x < 1) {
            return Err(Error::InvalidInstance(format!("vertex {v} demands fewer than one colour")));
        }
        let total = demand.iter().try_fold(0i64, |a, &x| a.checked_add(x)).ok_or(Error::Overflow)?;
        if total > tau {
            return Err(Error::ThresholdExceeded { total, tau });
        }
        Ok(ListDemand { demand, tau })
    }

    pub fn unit(n: usize) -> Self {
        ListDemand { demand: vec![1; n], tau: n as i64 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListColouring {
    pub k: i64,
    pub lists: Vec<ColourList>,
}

/// Number of colours in a list.
pub fn list_len(list: &[(i64, i64)]) -> i64 {
    list.iter().map(|(a, b)| b - a + 1).sum()
}

/// True if colour `c` occurs in `list`.
pub fn list_contains(list: &[(i64, i64)], c: i64) -> bool {
    list.iter().any(|&(a, b)| a <= c && c <= b)
}

/// Minimum palette with `demand[v]` colours per vertex.
///
/// ```
/// use dmw::{coloring::{n_dichromatic, ListDemand}, Digraph};
///
/// let v: Digraph = "1\n".parse().unwrap();
/// let col = n_dichromatic(&v, &ListDemand::new(vec![5], 5).unwrap()).unwrap();
/// assert_eq!((col.k, col.lists), (5, vec![vec![(1, 5)]]));
/// ```
pub fn n_dichromatic(d: &Digraph, dem: &ListDemand) -> Result<ListColouring> {
    if dem.demand.len() != d.n() {
        return Err(Error::LengthMismatch { expected: d.n(), found: dem.demand.len() });
    }
    let tree = decomposition_tree(d);
    let root = colour_per_node(dem, &tree)?.swap_remove(0);
    let mut lists = vec![Vec::new(); d.n()];
    for (&v, list) in tree.root().vertices.iter().zip(root.lists) {
        lists[v] = list;
    }
    Ok(ListColouring { k: root.k, lists })
}

/// Dichromatic number: one colour per vertex.
pub fn dichromatic_number(d: &Digraph) -> Result<ListColouring> {
    n_dichromatic(d, &ListDemand::unit(d.n()))
}

/// Per node: the optimum and lists aligned with the node's vertex list.
pub(crate) fn colour_per_node(dem: &ListDemand, tree: &DecompositionTree) -> Result<Vec<ListColouring>> {
    let mut sols: Vec<Option<ListColouring>> = vec![None; tree.nodes.len()];
    for id in tree.bottom_up() {
        let node = &tree.nodes[id];
        let Some(q) = &node.quotient else {
            let n = dem.demand[node.vertices[0]];
            sols[id] = Some(ListColouring { k: n, lists: vec![vec![(1, n)]] });
            continue;
        };
        let demands: Vec<i64> = node.children.iter().map(|&c| sols[c].as_ref().expect("child first").k).collect();
        let (k, quotient_lists) = quotient_colouring(q, &demands, dem.tau)?;
        let mut tagged: Vec<(usize, ColourList)> = Vec::with_capacity(node.vertices.len());
        for (i, &c) in node.children.iter().enumerate() {
            let child = sols[c].clone().expect("child first");
            for (&v, positions) in tree.nodes[c].vertices.iter().zip(child.lists) {
                tagged.push((v, pick(&quotient_lists[i], &positions)));
            }
        }
        tagged.sort_unstable_by_key(|(v, _)| *v);
        sols[id] = Some(ListColouring { k, lists: tagged.into_iter().map(|(_, l)| l).collect() });
    }
    Ok(sols.into_iter().map(|s| s.expect("all nodes solved")).collect())
}

/// Nonempty acyclic vertex sets of a quotient, as ascending bitmasks.
pub(crate) fn acyclic_sets(q: &Digraph) -> Vec<u64> {
    let out = out_masks(q);
    (1..1u64 << q.n()).filter(|&m| acyclic_mask(&out, m)).collect()
}

/// Optimal list colouring of a quotient with integer demands.
pub(crate) fn quotient_colouring(q: &Digraph, demands: &[i64], tau: i64) -> Result<(i64, Vec<ColourList>)> {
    let l = q.n();
    if l > MAX_QUOTIENT {
        return Err(Error::QuotientTooLarge { size: l, limit: MAX_QUOTIENT });
    }
    let sets = acyclic_sets(q);
    let mut program = IlpInstance::new(vec![(0, tau); sets.len()]);
    program.objective = vec![1; sets.len()];
    for (v, &n) in demands.iter().enumerate() {
        let coeffs = sets.iter().map(|&a| (a >> v & 1) as i64).collect();
        program.add(coeffs, Relation::Eq, n);
    }
    let result = ilp::solve(&program)?;
    let (x, k) = match &result {
        ilp::IlpResult::Optimal { assignment, value } => (assignment, *value),
        ilp::IlpResult::Infeasible => unreachable!("singleton classes always work"),
    };
    let mut lists = vec![Vec::new(); l];
    let mut next = 1;
    for (&a, &count) in sets.iter().zip(x) {
        if count > 0 {
            for v in members(a) {
                push_range(&mut lists[v], (next, next + count - 1));
            }
            next += count;
        }
    }
    Ok((k, lists))
}

fn push_range(list: &mut ColourList, (a, b): (i64, i64)) {
    match list.last_mut() {
        Some(last) if last.1 + 1 == a => last.1 = b,
        _ => list.push((a, b)),
    }
}

/// The colours of `list` at the 1-based `positions`.
fn pick(list: &[(i64, i64)], positions: &[(i64, i64)]) -> ColourList {
    let mut out = Vec::new();
    for &(a, b) in positions {
        let mut offset = 0;
        for &(lo, hi) in list {
            let len = hi - lo + 1;
            let s = a.max(offset + 1);
            let e = b.min(offset + len);
            if s <= e {
                push_range(&mut out, (lo + s - offset - 1, lo + e - offset - 1));
            }
            offset += len;
        }
    }
    out
}

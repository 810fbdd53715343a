//! Minimum-weight out-dominating sets.
//!
//! Each module is either untouched, hit by a single vertex (when the module is
//! already dominated from another module of the solution), or must dominate
//! itself. Enumerating the dominating sets of the quotient covers all cases.

use serde::{Deserialize, Serialize};

use crate::bits::{members, out_masks};
use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::modular::{decomposition_tree, DecompositionTree};
use crate::weighted::WeightedDigraph;

pub const MAX_QUOTIENT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomsetSolution {
    pub weight: i64,
    pub vertices: VertexSet,
}

/// Minimum-weight set whose closed out-neighbourhood is every vertex.
///
/// ```
/// use dmw::{domset::min_weight_domset, weighted::WeightedDigraph, Digraph};
///
/// let star: Digraph = "4\n0 1\n0 2\n0 3".parse().unwrap();
/// let sol = min_weight_domset(&WeightedDigraph::unit(star)).unwrap();
/// assert_eq!(sol.vertices, vec![0]);
/// ```
pub fn min_weight_domset(wd: &WeightedDigraph) -> Result<DomsetSolution> {
    let tree = decomposition_tree(&wd.d);
    Ok(domset_per_node(wd, &tree)?.swap_remove(0))
}

pub fn min_domset(d: &Digraph) -> Result<DomsetSolution> {
    min_weight_domset(&WeightedDigraph::unit(d.clone()))
}

/// How a module takes part in a quotient dominating set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    Absent,
    /// Dominated from outside; one cheapest vertex.
    Single,
    /// Not dominated from outside; the module's own optimum.
    Recursive,
}

pub(crate) fn roles(out: &[u64], z: u64) -> Vec<Role> {
    let dominated = members(z).fold(0u64, |m, v| m | out[v]);
    (0..out.len())
        .map(|i| match (z >> i & 1 == 1, dominated >> i & 1 == 1) {
            (false, _) => Role::Absent,
            (true, true) => Role::Single,
            (true, false) => Role::Recursive,
        })
        .collect()
}

pub(crate) fn domset_per_node(wd: &WeightedDigraph, tree: &DecompositionTree) -> Result<Vec<DomsetSolution>> {
    let mut sols: Vec<Option<DomsetSolution>> = vec![None; tree.nodes.len()];
    for id in tree.bottom_up() {
        let node = &tree.nodes[id];
        let Some(q) = &node.quotient else {
            let v = node.vertices[0];
            sols[id] = Some(DomsetSolution { weight: wd.w[v], vertices: vec![v] });
            continue;
        };
        let l = q.n();
        if l > MAX_QUOTIENT {
            return Err(Error::QuotientTooLarge { size: l, limit: MAX_QUOTIENT });
        }
        let cheapest: Vec<usize> = node
            .children
            .iter()
            .map(|&c| *tree.nodes[c].vertices.iter().min_by_key(|&&v| (wd.w[v], v)).expect("non-empty"))
            .collect();
        let child = |i: usize| sols[node.children[i]].as_ref().expect("child first");
        let out = out_masks(q);
        let full = (1u64 << l) - 1;
        let mut best: Option<(i64, u64)> = None;
        for z in 1..=full {
            let dominated = members(z).fold(z, |m, v| m | out[v]);
            if dominated != full {
                continue;
            }
            let cost: i64 = roles(&out, z)
                .iter()
                .enumerate()
                .map(|(i, r)| match r {
                    Role::Absent => 0,
                    Role::Single => wd.w[cheapest[i]],
                    Role::Recursive => child(i).weight,
                })
                .sum();
            if best.map_or(true, |(b, _)| cost < b) {
                best = Some((cost, z));
            }
        }
        let (weight, z) = best.expect("the full quotient dominates");
        let mut vertices = Vec::new();
        for (i, r) in roles(&out, z).into_iter().enumerate() {
            match r {
                Role::Absent => {}
                Role::Single => vertices.push(cheapest[i]),
                Role::Recursive => vertices.extend_from_slice(&child(i).vertices),
            }
        }
        vertices.sort_unstable();
        sols[id] = Some(DomsetSolution { weight, vertices });
    }
    Ok(sols.into_iter().map(|s| s.expect("all nodes solved")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let single = WeightedDigraph::new("1\n".parse().unwrap(), vec![4], 4).unwrap();
        assert_eq!(min_weight_domset(&single).unwrap(), DomsetSolution { weight: 4, vertices: vec![0] });
        let path: Digraph = "4\n0 1\n1 2\n2 3".parse().unwrap();
        assert_eq!(min_domset(&path).unwrap().weight, 2);
    }
}

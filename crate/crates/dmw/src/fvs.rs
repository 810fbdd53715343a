//! Minimum-weight directed feedback vertex sets.
//!
//! For a partition into modules `M_1..M_ℓ` with child optima `fv_i`, the
//! optimum is `fv(D_M, w_M) + Σ fv_i` where `w_M(v_i) = w(M_i) − fv_i`: a
//! cycle either stays inside one module or meets modules in a cycle of the
//! quotient, and in the latter case each module on it must be deleted whole.

use serde::{Deserialize, Serialize};

use crate::bits::{acyclic_mask, members, out_masks};
use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::modular::{decomposition_tree, DecompositionTree};
use crate::weighted::WeightedDigraph;

/// Largest quotient the subset enumeration accepts.
pub const MAX_QUOTIENT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FvsSolution {
    pub weight: i64,
    pub vertices: VertexSet,
}

/// Minimum-weight feedback vertex set.
///
/// ```
/// use dmw::{fvs::min_weight_fvs, weighted::WeightedDigraph, Digraph};
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
/// let wd = WeightedDigraph::new(c3, vec![5, 1, 7], 13).unwrap();
/// let sol = min_weight_fvs(&wd).unwrap();
/// assert_eq!((sol.weight, sol.vertices), (1, vec![1]));
/// ```
pub fn min_weight_fvs(wd: &WeightedDigraph) -> Result<FvsSolution> {
    let tree = decomposition_tree(&wd.d);
    Ok(fvs_per_node(wd, &tree)?.swap_remove(0))
}

/// Minimum-cardinality feedback vertex set.
pub fn min_fvs(d: &Digraph) -> Result<FvsSolution> {
    min_weight_fvs(&WeightedDigraph::unit(d.clone()))
}

/// Optimal solution of every tree node's induced subdigraph.
pub(crate) fn fvs_per_node(wd: &WeightedDigraph, tree: &DecompositionTree) -> Result<Vec<FvsSolution>> {
    let mut sols: Vec<Option<FvsSolution>> = vec![None; tree.nodes.len()];
    for id in tree.bottom_up() {
        let node = &tree.nodes[id];
        let Some(q) = &node.quotient else {
            sols[id] = Some(FvsSolution { weight: 0, vertices: vec![] });
            continue;
        };
        let children: Vec<&FvsSolution> = node.children.iter().map(|&c| sols[c].as_ref().expect("child first")).collect();
        let qw: Vec<i64> = node
            .children
            .iter()
            .zip(&children)
            .map(|(&c, s)| wd.weight_of(&tree.nodes[c].vertices) - s.weight)
            .collect();
        let (qweight, chosen) = quotient_fvs(q, &qw)?;
        let mut vertices = Vec::new();
        for (i, &c) in node.children.iter().enumerate() {
            if chosen >> i & 1 == 1 {
                vertices.extend_from_slice(&tree.nodes[c].vertices);
            } else {
                vertices.extend_from_slice(&children[i].vertices);
            }
        }
        vertices.sort_unstable();
        let weight = qweight + children.iter().map(|s| s.weight).sum::<i64>();
        debug_assert_eq!(weight, wd.weight_of(&vertices));
        sols[id] = Some(FvsSolution { weight, vertices });
    }
    Ok(sols.into_iter().map(|s| s.expect("all nodes solved")).collect())
}

/// Minimum-weight FVS of a small weighted quotient as a bitmask. Among optima
/// the lexicographically smallest vertex list wins.
pub(crate) fn quotient_fvs(q: &Digraph, w: &[i64]) -> Result<(i64, u64)> {
    let l = q.n();
    if l > MAX_QUOTIENT {
        return Err(Error::QuotientTooLarge { size: l, limit: MAX_QUOTIENT });
    }
    let out = out_masks(q);
    let full = (1u64 << l) - 1;
    let mut best: Option<(i64, u64)> = None;
    for mask in 0..=full {
        let weight: i64 = members(mask).map(|v| w[v]).sum();
        if let Some((bw, bm)) = best {
            if weight > bw || (weight == bw && !lex_less(mask, bm)) {
                continue;
            }
        }
        if acyclic_mask(&out, full & !mask) {
            best = Some((weight, mask));
        }
    }
    Ok(best.expect("deleting everything is acyclic"))
}

/// Compares the sorted member lists of two masks lexicographically.
fn lex_less(a: u64, b: u64) -> bool {
    members(a).lt(members(b))
}

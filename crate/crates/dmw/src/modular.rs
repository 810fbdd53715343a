//! Modules, module partitions, quotients and the decomposition tree.
//!
//! A module is a vertex set whose members look identical from the outside.
//! [`nontrivial_partition`] splits a digraph into at most `dmw(D)` modules:
//! degenerate roots (disjoint union, series or order composition) are split
//! into exactly two blocks, prime roots into their maximal proper modules.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};

/// How the blocks of a partition relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    /// No edges between blocks.
    Parallel,
    /// Digons between all pairs of vertices in different blocks.
    Series,
    /// All edges between blocks point from earlier to later blocks.
    Order,
    /// The quotient has no non-trivial module.
    Prime,
}

impl ModuleKind {
    pub fn is_degenerate(self) -> bool {
        self != ModuleKind::Prime
    }
}

/// A partition of the vertex set into modules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulePartition {
    pub blocks: Vec<VertexSet>,
    pub kind: ModuleKind,
}

/// The quotient of a digraph by a module partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDigraph {
    pub quotient: Digraph,
    /// `eta[v]` is the index of the block containing `v`.
    pub eta: Vec<usize>,
}

/// True if every vertex outside `s` relates to all members of `s` in the same way.
pub fn is_module(d: &Digraph, s: &[usize]) -> bool {
    let Some(&first) = s.first() else { return true };
    let mut inside = vec![false; d.n()];
    for &v in s {
        inside[v] = true;
    }
    (0..d.n()).filter(|&x| !inside[x]).all(|x| {
        let rel = (d.has_edge(x, first), d.has_edge(first, x));
        s.iter().all(|&m| (d.has_edge(x, m), d.has_edge(m, x)) == rel)
    })
}

/// A partition into `2 ≤ ℓ ≤ dmw(d)` modules.
///
/// ```
/// use dmw::{modular::{nontrivial_partition, ModuleKind}, Digraph};
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
/// let p = nontrivial_partition(&c3).unwrap();
/// assert_eq!(p.kind, ModuleKind::Prime);
/// assert_eq!(p.blocks, vec![vec![0], vec![1], vec![2]]);
/// ```
pub fn nontrivial_partition(d: &Digraph) -> Result<ModulePartition> {
    if d.n() < 2 {
        return Err(Error::TooFewVertices(2));
    }
    Ok(partition_local(d))
}

fn partition_local(d: &Digraph) -> ModulePartition {
    let n = d.n();
    // disjoint union: the underlying undirected graph is disconnected
    let comps = components(n, |u, v| d.has_edge(u, v) || d.has_edge(v, u));
    if comps.len() > 1 {
        return binarize(comps, ModuleKind::Parallel);
    }
    // series composition: the graph of non-digon pairs is disconnected
    let comps = components(n, |u, v| !d.is_digon(u, v));
    if comps.len() > 1 {
        return binarize(comps, ModuleKind::Series);
    }
    // order composition: the semicomplete relation (single edges one way,
    // digons and non-edges both ways) has more than one strong component
    let relation = Digraph::from_fn(n, |u, v| !d.has_edge(v, u) || d.has_edge(u, v)).expect("n >= 2");
    let mut comps = relation.strongly_connected_components();
    if comps.len() > 1 {
        comps.reverse();
        return binarize(comps, ModuleKind::Order);
    }
    ModulePartition { blocks: maximal_modules(d), kind: ModuleKind::Prime }
}

fn binarize(blocks: Vec<VertexSet>, kind: ModuleKind) -> ModulePartition {
    let mut iter = blocks.into_iter();
    let mut first = iter.next().expect("at least two blocks");
    first.sort_unstable();
    let mut rest: VertexSet = iter.flatten().collect();
    rest.sort_unstable();
    ModulePartition { blocks: vec![first, rest], kind }
}

/// Connected components of the symmetric relation `adjacent`, ordered by
/// their smallest vertex.
fn components(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<VertexSet> {
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for v in 0..n {
                if comp[v] == usize::MAX && adjacent(u, v) {
                    comp[v] = id;
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Smallest module containing `u` and `w`, or `None` once it covers every vertex.
fn closure(d: &Digraph, u: usize, w: usize) -> Option<Vec<bool>> {
    let n = d.n();
    let mut member = vec![false; n];
    member[u] = true;
    member[w] = true;
    let mut queue = vec![w];
    let mut size = 2;
    while let Some(m) = queue.pop() {
        if size == n {
            return None;
        }
        for x in 0..n {
            if !member[x] && (d.has_edge(x, m), d.has_edge(m, x)) != (d.has_edge(x, u), d.has_edge(u, x)) {
                member[x] = true;
                size += 1;
                queue.push(x);
            }
        }
    }
    (size < n).then_some(member)
}

/// Maximal proper modules of a digraph whose root is prime. Two vertices
/// share such a module iff the smallest module containing both is proper.
fn maximal_modules(d: &Digraph) -> Vec<VertexSet> {
    let n = d.n();
    let mut assigned = vec![false; n];
    let mut blocks = Vec::new();
    for u in 0..n {
        if assigned[u] {
            continue;
        }
        assigned[u] = true;
        let mut block = vec![u];
        for w in u + 1..n {
            if !assigned[w] {
                if let Some(members) = closure(d, u, w) {
                    for (x, &inside) in members.iter().enumerate() {
                        if inside && !assigned[x] {
                            assigned[x] = true;
                            block.push(x);
                        }
                    }
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

/// Contracts every block of `p` to one vertex.
pub fn module_digraph(d: &Digraph, p: &ModulePartition) -> Result<ModuleDigraph> {
    let mut eta = vec![usize::MAX; d.n()];
    for (i, block) in p.blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidPartition(format!("block {i} is empty")));
        }
        for &v in block {
            if v >= d.n() {
                return Err(Error::InvalidVertex(v));
            }
            if eta[v] != usize::MAX {
                return Err(Error::InvalidPartition(format!("vertex {v} lies in two blocks")));
            }
            eta[v] = i;
        }
    }
    if let Some(v) = eta.iter().position(|&b| b == usize::MAX) {
        return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
    }
    if let Some(i) = p.blocks.iter().position(|b| !is_module(d, b)) {
        return Err(Error::NotAModule(i));
    }
    let reps: Vec<usize> = p.blocks.iter().map(|b| b[0]).collect();
    let quotient = Digraph::from_fn(reps.len(), |i, j| d.has_edge(reps[i], reps[j]))?;
    Ok(ModuleDigraph { quotient, eta })
}

/// One node of a [`DecompositionTree`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub vertices: VertexSet,
    /// `None` for leaves.
    pub kind: Option<ModuleKind>,
    /// Child node ids, one per block, in block order.
    pub children: Vec<usize>,
    /// Quotient of the node's digraph by its children; `None` for leaves.
    pub quotient: Option<Digraph>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Recursive module decomposition down to single vertices. Node 0 is the
/// root and every child has a larger id than its parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecompositionTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    /// Index of the child of `node` whose vertex set contains `v`.
    pub fn block_of(&self, node: usize, v: usize) -> usize {
        self.nodes[node]
            .children
            .iter()
            .position(|&c| self.nodes[c].vertices.binary_search(&v).is_ok())
            .expect("vertex lies in the node")
    }

    /// Node ids in an order where children precede their parents.
    pub fn bottom_up(&self) -> impl Iterator<Item = usize> {
        (0..self.nodes.len()).rev()
    }

    /// Vertex sets of the children of `node`.
    pub fn blocks(&self, node: usize) -> Vec<&VertexSet> {
        self.nodes[node].children.iter().map(|&c| &self.nodes[c].vertices).collect()
    }
}

/// Builds the decomposition tree by repeatedly applying [`nontrivial_partition`].
pub fn decomposition_tree(d: &Digraph) -> DecompositionTree {
    let mut nodes = vec![TreeNode { id: 0, vertices: (0..d.n()).collect(), kind: None, children: vec![], quotient: None }];
    let mut pending = vec![0];
    while let Some(id) = pending.pop() {
        let vertices = nodes[id].vertices.clone();
        if vertices.len() < 2 {
            continue;
        }
        let local = d.induced(&vertices);
        let partition = partition_local(&local);
        let reps: Vec<usize> = partition.blocks.iter().map(|b| b[0]).collect();
        let quotient = Digraph::from_fn(reps.len(), |i, j| local.has_edge(reps[i], reps[j])).expect("two blocks");
        let mut children = Vec::with_capacity(partition.blocks.len());
        for block in &partition.blocks {
            let child = nodes.len();
            let vs = block.iter().map(|&i| vertices[i]).collect();
            nodes.push(TreeNode { id: child, vertices: vs, kind: None, children: vec![], quotient: None });
            children.push(child);
        }
        pending.extend(children.iter().rev());
        let node = &mut nodes[id];
        node.kind = Some(partition.kind);
        node.children = children;
        node.quotient = Some(quotient);
    }
    DecompositionTree { nodes }
}

/// Directed modular width.
///
/// ```
/// use dmw::{modular::dmw, Digraph};
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
/// assert_eq!(dmw(&c3), 3);
/// let tournament: Digraph = "4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3".parse().unwrap();
/// assert_eq!(dmw(&tournament), 2);
/// ```
pub fn dmw(d: &Digraph) -> usize {
    tree_width(&decomposition_tree(d))
}

/// Largest node width of a decomposition tree (1 for a single leaf).
pub fn tree_width(tree: &DecompositionTree) -> usize {
    tree.nodes
        .iter()
        .filter_map(|node| node.kind.map(|k| if k.is_degenerate() { 2 } else { node.children.len() }))
        .max()
        .unwrap_or(1)
}

/// True iff `dmw(d) ≤ 2`, i.e. `d` is built from single vertices by disjoint
/// unions, series compositions and order compositions.
pub fn is_directed_cograph(d: &Digraph) -> bool {
    dmw(d) <= 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Digraph {
        s.parse().unwrap()
    }

    #[test]
    fn module_checks() {
        let c3 = g("3\n0 1\n1 2\n2 0");
        assert!(is_module(&c3, &[0, 1, 2]));
        assert!(is_module(&c3, &[1]));
        assert!(!is_module(&c3, &[0, 1]));
    }

    #[test]
    fn degenerate_kinds() {
        let two_c3 = g("6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3");
        let p = nontrivial_partition(&two_c3).unwrap();
        assert_eq!(p.kind, ModuleKind::Parallel);
        assert_eq!(p.blocks, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let digon = g("2\n0 1\n1 0");
        assert_eq!(nontrivial_partition(&digon).unwrap().kind, ModuleKind::Series);
        let path = g("3\n0 1\n1 2\n0 2");
        let p = nontrivial_partition(&path).unwrap();
        assert_eq!(p.kind, ModuleKind::Order);
        assert_eq!(p.blocks, vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn order_root_over_prime_part() {
        // C3 followed by a sink that receives from all of it
        let d = g("4\n0 1\n1 2\n2 0\n0 3\n1 3\n2 3");
        let p = nontrivial_partition(&d).unwrap();
        assert_eq!(p.kind, ModuleKind::Order);
        assert_eq!(p.blocks, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(dmw(&d), 3);
    }

    #[test]
    fn quotient_of_transitive_tournament() {
        let t = g("3\n0 1\n0 2\n1 2");
        let p = ModulePartition { blocks: vec![vec![0], vec![1, 2]], kind: ModuleKind::Order };
        let m = module_digraph(&t, &p).unwrap();
        assert_eq!(m.quotient.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(m.eta, vec![0, 1, 1]);
        let bad = ModulePartition { blocks: vec![vec![0, 1], vec![2]], kind: ModuleKind::Prime };
        let c3 = g("3\n0 1\n1 2\n2 0");
        assert_eq!(module_digraph(&c3, &bad), Err(Error::NotAModule(0)));
    }

    #[test]
    fn trees() {
        let single = decomposition_tree(&g("1\n"));
        assert_eq!(single.nodes.len(), 1);
        let c3 = decomposition_tree(&g("3\n0 1\n1 2\n2 0"));
        assert_eq!(c3.nodes.len(), 4);
        assert_eq!(c3.root().children.len(), 3);
        assert_eq!(dmw(&g("1\n")), 1);
        assert!(is_directed_cograph(&g("3\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1")));
    }
}

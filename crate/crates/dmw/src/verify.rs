//! Independent checks for every witness the solvers return. Each check only
//! uses the problem definition and reports the first defect it finds.

use crate::coloring::{list_contains, list_len, ListColouring, ListDemand};
use crate::digraph::Digraph;
use crate::domset::DomsetSolution;
use crate::error::{Error, Result};
use crate::fvs::FvsSolution;
use crate::hampath::PathPartition;
use crate::homeo::{Homeomorphism, PatternDigraph};
use crate::modular::{is_module, module_digraph, DecompositionTree, ModuleKind, ModulePartition};
use crate::paths::PathCollection;
use crate::weighted::WeightedDigraph;
use crate::widths::{rank_of_ordering, validate_dpd, DirectedPathDecomposition, EliminationOrdering};

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Witness(msg.into()))
}

/// Membership vector of a set of distinct vertices.
fn indicator(n: usize, set: &[usize]) -> Result<Vec<bool>> {
    let mut mark = vec![false; n];
    for &v in set {
        if v >= n {
            return fail(format!("vertex {v} out of range"));
        }
        if mark[v] {
            return fail(format!("vertex {v} listed twice"));
        }
        mark[v] = true;
    }
    Ok(mark)
}

fn check_edges(d: &Digraph, walk: &[usize]) -> Result<()> {
    if let Some(&v) = walk.iter().find(|&&v| v >= d.n()) {
        return fail(format!("vertex {v} out of range"));
    }
    match walk.windows(2).find(|p| !d.has_edge(p[0], p[1])) {
        Some(p) => fail(format!("missing edge ({}, {})", p[0], p[1])),
        None => Ok(()),
    }
}

pub fn check_fvs(wd: &WeightedDigraph, sol: &FvsSolution) -> Result<()> {
    let mark = indicator(wd.d.n(), &sol.vertices)?;
    if wd.weight_of(&sol.vertices) != sol.weight {
        return fail(format!("stated weight {} differs from {}", sol.weight, wd.weight_of(&sol.vertices)));
    }
    let keep: Vec<bool> = mark.iter().map(|m| !m).collect();
    if !wd.d.is_acyclic_within(&keep) {
        return fail("a cycle survives");
    }
    Ok(())
}

pub fn check_domset(wd: &WeightedDigraph, sol: &DomsetSolution) -> Result<()> {
    let mark = indicator(wd.d.n(), &sol.vertices)?;
    if wd.weight_of(&sol.vertices) != sol.weight {
        return fail(format!("stated weight {} differs from {}", sol.weight, wd.weight_of(&sol.vertices)));
    }
    match (0..wd.d.n()).find(|&v| !mark[v] && !wd.d.in_neighbors(v).iter().any(|&u| mark[u])) {
        Some(v) => fail(format!("vertex {v} is not dominated")),
        None => Ok(()),
    }
}

/// Lists must meet the demands, use colours `1..=k`, and every colour class
/// must induce an acyclic subdigraph.
pub fn check_colouring(d: &Digraph, dem: &ListDemand, col: &ListColouring) -> Result<()> {
    if col.lists.len() != d.n() || dem.demand.len() != d.n() {
        return Err(Error::LengthMismatch { expected: d.n(), found: col.lists.len() });
    }
    let mut cuts = vec![1];
    for (v, list) in col.lists.iter().enumerate() {
        if list_len(list) != dem.demand[v] {
            return fail(format!("vertex {v} has {} colours, needs {}", list_len(list), dem.demand[v]));
        }
        let mut prev = 0;
        for &(lo, hi) in list {
            if lo <= prev || hi < lo || hi > col.k {
                return fail(format!("bad colour range {lo}..={hi} at vertex {v}"));
            }
            prev = hi;
            cuts.extend([lo, hi + 1]);
        }
    }
    cuts.sort_unstable();
    cuts.dedup();
    // colour classes only change at range boundaries
    for &c in cuts.iter().filter(|&&c| c <= col.k) {
        let keep: Vec<bool> = col.lists.iter().map(|l| list_contains(l, c)).collect();
        if !d.is_acyclic_within(&keep) {
            return fail(format!("colour {c} contains a cycle"));
        }
    }
    Ok(())
}

pub fn check_path_partition(d: &Digraph, p: &PathPartition) -> Result<()> {
    let all: Vec<usize> = p.paths.iter().flatten().copied().collect();
    let mark = indicator(d.n(), &all)?;
    if let Some(v) = mark.iter().position(|m| !m) {
        return fail(format!("vertex {v} is not covered"));
    }
    if p.paths.iter().any(Vec::is_empty) {
        return fail("empty path");
    }
    p.paths.iter().try_for_each(|path| check_edges(d, path))
}

/// A closed walk through every vertex exactly once, repeating its start at the end.
pub fn check_hamiltonian_cycle(d: &Digraph, cycle: &[usize]) -> Result<()> {
    if cycle.len() != d.n() + 1 || cycle.first() != cycle.last() {
        return fail("not a closed walk of length n");
    }
    let mark = indicator(d.n(), &cycle[1..])?;
    debug_assert!(mark.iter().all(|&m| m));
    check_edges(d, cycle)
}

/// Walks follow edges, connect their pairs, repeat no vertex except a
/// cycle's start, and together traverse each vertex at most `w` times.
pub fn check_path_collection(d: &Digraph, w: &[i64], pairs: &[(usize, usize)], pc: &PathCollection) -> Result<()> {
    if w.len() != d.n() {
        return Err(Error::LengthMismatch { expected: d.n(), found: w.len() });
    }
    if pc.pairs.len() != pc.walks.len() {
        return fail("one walk per pair expected");
    }
    let mut used = vec![0i64; d.n()];
    let mut size = 0;
    for (&i, walk) in pc.pairs.iter().zip(&pc.walks) {
        let Some(&(s, t)) = pairs.get(i) else { return fail(format!("no pair {i}")) };
        if walk.len() < 2 || walk[0] != s || walk[walk.len() - 1] != t {
            return fail(format!("walk for pair {i} does not join {s} and {t}"));
        }
        check_edges(d, walk)?;
        let body = if s == t { &walk[..walk.len() - 1] } else { &walk[..] };
        indicator(d.n(), body)?;
        for &v in walk {
            used[v] += 1;
        }
        size += walk.len() as i64;
    }
    if size != pc.size {
        return fail(format!("stated size {} differs from {size}", pc.size));
    }
    match (0..d.n()).find(|&v| used[v] > w[v]) {
        Some(v) => fail(format!("vertex {v} traversed {} times, capacity {}", used[v], w[v])),
        None => Ok(()),
    }
}

/// Distinct anchors, one walk per pattern edge between its anchors, and
/// interiors that avoid anchors and each other.
pub fn check_homeomorphism(d: &Digraph, h: &PatternDigraph, emb: &Homeomorphism) -> Result<()> {
    if emb.anchors.len() != h.r || emb.walks.len() != h.edges.len() {
        return fail("wrong number of anchors or walks");
    }
    let mut used = indicator(d.n(), &emb.anchors)?;
    for (walk, &(a, b)) in emb.walks.iter().zip(&h.edges) {
        let (s, t) = (emb.anchors[a], emb.anchors[b]);
        if walk.len() < 2 || walk[0] != s || walk[walk.len() - 1] != t {
            return fail(format!("walk does not join anchors {s} and {t}"));
        }
        check_edges(d, walk)?;
        for &v in &walk[1..walk.len() - 1] {
            if used[v] {
                return fail(format!("vertex {v} used twice"));
            }
            used[v] = true;
        }
    }
    Ok(())
}

pub fn check_path_decomposition(d: &Digraph, dec: &DirectedPathDecomposition) -> Result<()> {
    if validate_dpd(d, dec) {
        Ok(())
    } else {
        fail("not a directed path decomposition")
    }
}

/// The ordering must be a permutation whose forest and depth match the stored ones.
pub fn check_elimination_ordering(d: &Digraph, ord: &EliminationOrdering) -> Result<()> {
    let (rank, tree) = rank_of_ordering(d, &ord.sigma)?;
    if rank != ord.rank || tree != ord.tree {
        return fail(format!("ordering has depth {rank}, stated {}", ord.rank));
    }
    Ok(())
}

/// Blocks must be modules forming a partition into at least two proper
/// parts, with a quotient of the stated kind.
pub fn check_partition(d: &Digraph, p: &ModulePartition) -> Result<()> {
    if p.blocks.len() < 2 {
        return fail("fewer than two blocks");
    }
    let q = module_digraph(d, p)?.quotient;
    let l = q.n();
    let pairs = || (0..l).flat_map(|i| (0..l).map(move |j| (i, j))).filter(|(i, j)| i != j);
    let edgeless = q.edge_count() == 0;
    let complete = q.edge_count() == l * (l - 1);
    let linear = q.is_acyclic() && pairs().all(|(i, j)| q.has_edge(i, j) || q.has_edge(j, i));
    let ok = match p.kind {
        ModuleKind::Parallel => edgeless,
        ModuleKind::Series => complete,
        ModuleKind::Order => linear,
        ModuleKind::Prime => l > 2 || !(edgeless || complete || linear),
    };
    if ok {
        Ok(())
    } else {
        fail(format!("quotient is not of kind {:?}", p.kind))
    }
}

/// Root holds every vertex, leaves are single vertices, and every inner node
/// is split into modules whose quotient is the stored one.
pub fn check_decomposition_tree(d: &Digraph, tree: &DecompositionTree) -> Result<()> {
    if tree.nodes.is_empty() || tree.root().vertices != (0..d.n()).collect::<Vec<_>>() {
        return fail("root must hold every vertex");
    }
    for (id, node) in tree.nodes.iter().enumerate() {
        if node.id != id {
            return fail(format!("node {id} has id {}", node.id));
        }
        if node.is_leaf() {
            if node.vertices.len() != 1 || node.quotient.is_some() {
                return fail(format!("leaf {id} must be one vertex"));
            }
            continue;
        }
        if node.children.iter().any(|&c| c <= id || c >= tree.nodes.len()) {
            return fail(format!("node {id} has a bad child id"));
        }
        let local = d.induced_subgraph(&node.vertices)?.1;
        let blocks: Vec<Vec<usize>> = tree
            .blocks(id)
            .iter()
            .map(|b| b.iter().map(|&v| local.get(v).copied().flatten()).collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Witness(format!("child of node {id} leaves its parent")))?;
        let sub = d.induced_subgraph(&node.vertices)?.0;
        let kind = node.kind.ok_or_else(|| Error::Witness(format!("inner node {id} without kind")))?;
        let partition = ModulePartition { blocks, kind };
        check_partition(&sub, &partition)?;
        if node.quotient.as_ref() != Some(&module_digraph(&sub, &partition)?.quotient) {
            return fail(format!("node {id} stores the wrong quotient"));
        }
        if partition.blocks.iter().any(|b| !is_module(&sub, b)) {
            return fail(format!("node {id} has a child that is not a module"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Digraph {
        "3\n0 1\n1 2\n2 0".parse().unwrap()
    }

    #[test]
    fn rejects_broken_witnesses() {
        let wd = WeightedDigraph::unit(c3());
        assert!(check_fvs(&wd, &FvsSolution { weight: 1, vertices: vec![1] }).is_ok());
        assert!(check_fvs(&wd, &FvsSolution { weight: 0, vertices: vec![] }).is_err());
        assert!(check_domset(&wd, &DomsetSolution { weight: 1, vertices: vec![0] }).is_err());
        assert!(check_hamiltonian_cycle(&c3(), &[0, 1, 2, 0]).is_ok());
        assert!(check_hamiltonian_cycle(&c3(), &[0, 2, 1, 0]).is_err());
        let one = ListColouring { k: 1, lists: vec![vec![(1, 1)]; 3] };
        assert!(check_colouring(&c3(), &ListDemand::unit(3), &one).is_err());
        let two = ListColouring { k: 2, lists: vec![vec![(1, 1)], vec![(1, 1)], vec![(2, 2)]] };
        assert!(check_colouring(&c3(), &ListDemand::unit(3), &two).is_ok());
        let over = PathCollection { pairs: vec![0], walks: vec![vec![0, 1, 2, 0]], size: 4 };
        assert!(check_path_collection(&c3(), &[2, 1, 1], &[(0, 0)], &over).is_ok());
        assert!(check_path_collection(&c3(), &[1, 1, 1], &[(0, 0)], &over).is_err());
    }

    #[test]
    fn partitions_and_trees() {
        let d = c3();
        let wrong = ModulePartition { blocks: vec![vec![0], vec![1, 2]], kind: ModuleKind::Prime };
        assert!(check_partition(&d, &wrong).is_err());
        let tree = crate::modular::decomposition_tree(&d);
        assert!(check_decomposition_tree(&d, &tree).is_ok());
    }
}

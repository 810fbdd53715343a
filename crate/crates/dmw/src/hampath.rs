//! Path partitions and Hamiltonicity.
//!
//! `D ⊕ [s]` adds `s` independent vertices joined by digons to all of `D`;
//! it has a Hamiltonian cycle iff `D` splits into `s` disjoint paths, so
//! `ham(D)` is the least such `s`. Hamiltonicity of a digraph whose modules
//! have known path-partition numbers is decided on the quotient: the cycle
//! enters module `i` some `k_i` times with `ham_i ≤ k_i ≤ |M_i|`, and the
//! entry counts form an Eulerian flow that leaves every proper vertex subset.

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::ilp::{self, IlpInstance, IlpResult, Relation};
use crate::modular::{decomposition_tree, DecompositionTree};

/// Largest quotient for which every subtour constraint is generated.
pub const MAX_QUOTIENT: usize = 10;

/// Vertex-disjoint directed paths covering every vertex; a single vertex is a path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathPartition {
    pub paths: Vec<Vec<usize>>,
}

/// A quotient vertex with its module size and path-partition number.
#[derive(Debug, Clone, Copy)]
struct Part {
    size: i64,
    ham: i64,
}

/// Flow on the edges of a quotient, listed as `(tail, head, count)`.
type Flow = Vec<(usize, usize, i64)>;

/// Minimum number of vertex-disjoint paths covering all vertices.
///
/// ```
/// use dmw::{hampath::ham, Digraph};
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
/// assert_eq!(ham(&c3).unwrap(), 1);
/// assert_eq!(ham(&Digraph::new(3).unwrap()).unwrap(), 3);
/// ```
pub fn ham(d: &Digraph) -> Result<usize> {
    Ok(path_partition_witness(d)?.paths.len())
}

pub fn is_hamiltonian_path(d: &Digraph) -> Result<bool> {
    Ok(ham(d)? == 1)
}

/// Optimal path partition, assembled from module partitions along an
/// Eulerian tour of the quotient flow.
pub fn path_partition_witness(d: &Digraph) -> Result<PathPartition> {
    let tree = decomposition_tree(d);
    Ok(partitions_per_node(&tree)?.swap_remove(0))
}

pub(crate) fn partitions_per_node(tree: &DecompositionTree) -> Result<Vec<PathPartition>> {
    let mut sols: Vec<Option<PathPartition>> = vec![None; tree.nodes.len()];
    for id in tree.bottom_up() {
        let node = &tree.nodes[id];
        let Some(q) = &node.quotient else {
            sols[id] = Some(PathPartition { paths: vec![vec![node.vertices[0]]] });
            continue;
        };
        let children: Vec<&PathPartition> = node.children.iter().map(|&c| sols[c].as_ref().expect("child first")).collect();
        let parts: Vec<Part> = node
            .children
            .iter()
            .zip(&children)
            .map(|(&c, p)| Part { size: tree.nodes[c].vertices.len() as i64, ham: p.paths.len() as i64 })
            .collect();
        let upper: i64 = parts.iter().map(|p| p.ham).sum();
        let mut found = None;
        for s in 1..=upper {
            let (extended, ext_parts) = with_path_ends(q, &parts, s);
            if let Some(flow) = hamiltonian_flow(&extended, &ext_parts)? {
                found = Some((s, extended, flow));
                break;
            }
        }
        let (s, extended, flow) = found.expect("one path per module path always works");
        let l = q.n();
        let tour = euler_tour(extended.n(), &flow, l);
        let mut pools = split_children(&children, &flow, l);
        let mut paths = Vec::with_capacity(s as usize);
        let mut current: Vec<usize> = Vec::new();
        for &v in &tour[1..] {
            if v == l {
                paths.push(std::mem::take(&mut current));
            } else {
                current.extend(pools[v].next().expect("one module path per visit"));
            }
        }
        debug_assert_eq!(paths.len() as i64, s);
        sols[id] = Some(PathPartition { paths });
    }
    Ok(sols.into_iter().map(|s| s.expect("all nodes solved")).collect())
}

/// Splits each child's partition into exactly as many paths as the flow
/// visits it, by repeatedly detaching the last vertex of the first path
/// with at least two vertices.
fn split_children(children: &[&PathPartition], flow: &Flow, l: usize) -> Vec<std::vec::IntoIter<Vec<usize>>> {
    let mut visits = vec![0i64; l];
    for &(u, _, x) in flow {
        if u < l {
            visits[u] += x;
        }
    }
    children
        .iter()
        .zip(visits)
        .map(|(p, k)| {
            let mut paths = p.paths.clone();
            while (paths.len() as i64) < k {
                let long = paths.iter().position(|p| p.len() >= 2).expect("enough vertices to split");
                let last = paths[long].pop().expect("long path");
                paths.push(vec![last]);
            }
            paths.into_iter()
        })
        .collect()
}

/// The quotient with an extra vertex `ℓ` standing for `[s]`.
fn with_path_ends(q: &Digraph, parts: &[Part], s: i64) -> (Digraph, Vec<Part>) {
    let l = q.n();
    let extended = Digraph::from_fn(l + 1, |u, v| u == l || v == l || q.has_edge(u, v)).expect("non-empty");
    let mut ext = parts.to_vec();
    ext.push(Part { size: s, ham: s });
    (extended, ext)
}

/// A flow certifying a Hamiltonian cycle of the digraph obtained by
/// substituting the parts into `q`, or `None`.
fn hamiltonian_flow(q: &Digraph, parts: &[Part]) -> Result<Option<Flow>> {
    let l = q.n();
    if l > MAX_QUOTIENT + 1 {
        return Err(Error::QuotientTooLarge { size: l - 1, limit: MAX_QUOTIENT });
    }
    let edges: Vec<(usize, usize)> = q.edges().collect();
    if edges.is_empty() {
        return Ok(None);
    }
    let bounds = edges.iter().map(|&(u, v)| (0, parts[u].size.min(parts[v].size))).collect();
    let mut program = IlpInstance::new(bounds);
    for v in 0..l {
        let mut balance = vec![0; edges.len()];
        let mut out = vec![0; edges.len()];
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a == v {
                balance[e] += 1;
                out[e] = 1;
            }
            if b == v {
                balance[e] -= 1;
            }
        }
        program.add(balance, Relation::Eq, 0);
        program.add(out.clone(), Relation::Ge, parts[v].ham);
        program.add(out, Relation::Le, parts[v].size);
    }
    for x in 1..(1u64 << l) - 1 {
        let leaving = edges.iter().map(|&(a, b)| i64::from(x >> a & 1 == 1 && x >> b & 1 == 0)).collect();
        program.add(leaving, Relation::Ge, 1);
    }
    Ok(match ilp::solve(&program)? {
        IlpResult::Infeasible => None,
        IlpResult::Optimal { assignment, .. } => {
            Some(edges.into_iter().zip(assignment).filter(|&(_, x)| x > 0).map(|((u, v), x)| (u, v, x)).collect())
        }
    })
}

/// Closed Eulerian tour of the flow multigraph from `start` (Hierholzer,
/// smallest head first). The returned sequence repeats `start` at the end.
fn euler_tour(n: usize, flow: &Flow, start: usize) -> Vec<usize> {
    let mut left = vec![vec![0i64; n]; n];
    for &(u, v, x) in flow {
        left[u][v] += x;
    }
    let mut stack = vec![start];
    let mut tour = Vec::new();
    while let Some(&v) = stack.last() {
        if let Some(u) = (0..n).find(|&u| left[v][u] > 0) {
            left[v][u] -= 1;
            stack.push(u);
        } else {
            tour.push(stack.pop().expect("non-empty"));
        }
    }
    tour.reverse();
    tour
}

/// Hamiltonian cycle as a closed walk from vertex 0 back to vertex 0.
///
/// ```
/// use dmw::{hampath::hamiltonian_cycle, Digraph};
///
/// let c4: Digraph = "4\n0 1\n1 2\n2 3\n3 0".parse().unwrap();
/// assert_eq!(hamiltonian_cycle(&c4).unwrap(), Some(vec![0, 1, 2, 3, 0]));
/// ```
pub fn hamiltonian_cycle(d: &Digraph) -> Result<Option<Vec<usize>>> {
    if d.n() < 2 {
        return Err(Error::TooFewVertices(2));
    }
    let tree = decomposition_tree(d);
    let sols = partitions_per_node(&tree)?;
    let root = tree.root();
    let q = root.quotient.as_ref().expect("n >= 2");
    let children: Vec<&PathPartition> = root.children.iter().map(|&c| &sols[c]).collect();
    let parts: Vec<Part> = root
        .children
        .iter()
        .zip(&children)
        .map(|(&c, p)| Part { size: tree.nodes[c].vertices.len() as i64, ham: p.paths.len() as i64 })
        .collect();
    let Some(flow) = hamiltonian_flow(q, &parts)? else { return Ok(None) };
    let tour = euler_tour(q.n(), &flow, 0);
    let mut pools = split_children(&children, &flow, q.n());
    let mut cycle: Vec<usize> = Vec::with_capacity(d.n() + 1);
    for &v in &tour[1..] {
        cycle.extend(pools[v].next().expect("one module path per visit"));
    }
    let first = cycle.iter().position(|&v| v == 0).expect("every vertex is covered");
    cycle.rotate_left(first);
    cycle.push(0);
    Ok(Some(cycle))
}

pub fn is_hamiltonian_cycle(d: &Digraph) -> Result<bool> {
    Ok(hamiltonian_cycle(d)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Digraph {
        s.parse().unwrap()
    }

    #[test]
    fn partitions() {
        assert_eq!(path_partition_witness(&g("3\n0 1\n1 2")).unwrap().paths, vec![vec![0, 1, 2]]);
        assert_eq!(path_partition_witness(&g("2\n")).unwrap().paths.len(), 2);
        assert_eq!(ham(&g("4\n0 1\n1 2\n2 3")).unwrap(), 1);
        let two = path_partition_witness(&g("4\n0 1\n2 3")).unwrap();
        let mut paths = two.paths;
        paths.sort();
        assert_eq!(paths, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn cycles() {
        assert!(is_hamiltonian_cycle(&g("3\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1")).unwrap());
        assert!(!is_hamiltonian_cycle(&g("3\n0 1\n1 2\n0 2")).unwrap());
        assert_eq!(hamiltonian_cycle(&g("1\n")), Err(Error::TooFewVertices(2)));
    }
}

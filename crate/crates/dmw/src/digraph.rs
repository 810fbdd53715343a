//! Loopless simple digraphs on the vertex ids `0..n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted list of distinct vertex ids.
pub type VertexSet = Vec<usize>;

/// An immutable loopless digraph without parallel edges. Digons are allowed.
///
/// ```
/// use dmw::Digraph;
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0\n".parse().unwrap();
/// assert!(c3.has_edge(2, 0));
/// assert!(!c3.is_acyclic());
/// assert_eq!(c3.to_string().parse::<Digraph>().unwrap(), c3);
/// ```
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDigraph", into = "RawDigraph")]
pub struct Digraph {
    n: usize,
    adj: Vec<bool>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawDigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawDigraph> for Digraph {
    type Error = Error;
    fn try_from(raw: RawDigraph) -> Result<Self> {
        Digraph::from_edges(raw.n, &raw.edges)
    }
}

impl From<Digraph> for RawDigraph {
    fn from(d: Digraph) -> Self {
        RawDigraph { n: d.n, edges: d.edges().collect() }
    }
}

impl Digraph {
    /// The edgeless digraph on `n ≥ 1` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(Self::empty(n))
    }

    fn empty(n: usize) -> Self {
        Digraph { n, adj: vec![false; n * n], out_adj: vec![Vec::new(); n], in_adj: vec![Vec::new(); n] }
    }

    /// Builds a digraph from an edge list. Errors carry the 1-based position of
    /// the offending edge in `edges` as their line number.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut d = Self::empty(n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            d.try_add(u, v, i + 1)?;
        }
        d.finish();
        Ok(d)
    }

    /// Builds a digraph from an adjacency predicate.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut d = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && f(u, v) {
                    d.adj[u * n + v] = true;
                    d.out_adj[u].push(v);
                    d.in_adj[v].push(u);
                }
            }
        }
        d.finish();
        Ok(d)
    }

    fn try_add(&mut self, u: usize, v: usize, line: usize) -> Result<()> {
        let n = self.n;
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { line, vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::Loop { line, vertex: u });
        }
        if self.adj[u * n + v] {
            return Err(Error::DuplicateEdge { line, from: u, to: v });
        }
        self.adj[u * n + v] = true;
        self.out_adj[u].push(v);
        self.in_adj[v].push(u);
        Ok(())
    }

    fn finish(&mut self) {
        for list in self.out_adj.iter_mut().chain(self.in_adj.iter_mut()) {
            list.sort_unstable();
        }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// True if both `(u, v)` and `(v, u)` are edges.
    pub fn is_digon(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) && self.has_edge(v, u)
    }

    /// Sorted out-neighbours of `v`.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Sorted in-neighbours of `v`.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj.iter().enumerate().flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    /// The subdigraph induced by `x`, with new ids following the order of `x`,
    /// and the map from old ids to new ids.
    pub fn induced_subgraph(&self, x: &[usize]) -> Result<(Digraph, Vec<Option<usize>>)> {
        if x.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut map = vec![None; self.n];
        for (i, &v) in x.iter().enumerate() {
            if v >= self.n {
                return Err(Error::InvalidVertex(v));
            }
            if map[v].is_some() {
                return Err(Error::InvalidInstance(format!("vertex {v} listed twice")));
            }
            map[v] = Some(i);
        }
        Ok((self.induced(x), map))
    }

    /// Induced subdigraph on a non-empty list of distinct valid vertices.
    pub(crate) fn induced(&self, x: &[usize]) -> Digraph {
        Digraph::from_fn(x.len(), |i, j| self.has_edge(x[i], x[j])).expect("non-empty vertex list")
    }

    /// Strongly connected components, each sorted, listed in reverse
    /// topological order of the condensation (sinks first).
    pub fn strongly_connected_components(&self) -> Vec<VertexSet> {
        self.sccs_within(&vec![true; self.n])
    }

    /// Strongly connected components of the subdigraph induced by the vertices
    /// with `keep[v]`, in reverse topological order.
    pub fn sccs_within(&self, keep: &[bool]) -> Vec<VertexSet> {
        let n = self.n;
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        // explicit DFS stack of (vertex, next out-neighbour position)
        let mut dfs: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if !keep[root] || index[root] != UNSEEN {
                continue;
            }
            dfs.push((root, 0));
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&(v, pos)) = dfs.last() {
                if let Some(&w) = self.out_adj[v].get(pos) {
                    dfs.last_mut().expect("non-empty").1 += 1;
                    if !keep[w] {
                        continue;
                    }
                    if index[w] == UNSEEN {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        dfs.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    dfs.pop();
                    if let Some(&(parent, _)) = dfs.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    /// True if the digraph has no directed cycle (a digon counts as a cycle).
    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_within(&vec![true; self.n])
    }

    /// True if the subdigraph induced by the vertices with `keep[v]` is acyclic.
    pub fn is_acyclic_within(&self, keep: &[bool]) -> bool {
        let mut indeg = vec![0usize; self.n];
        for u in (0..self.n).filter(|&u| keep[u]) {
            for &v in &self.out_adj[u] {
                if keep[v] {
                    indeg[v] += 1;
                }
            }
        }
        let mut queue: Vec<usize> = (0..self.n).filter(|&v| keep[v] && indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = queue.pop() {
            seen += 1;
            for &v in &self.out_adj[u] {
                if keep[v] {
                    indeg[v] -= 1;
                    if indeg[v] == 0 {
                        queue.push(v);
                    }
                }
            }
        }
        seen == keep.iter().filter(|&&k| k).count()
    }

    /// Serializes to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        self.to_string()
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph").field("n", &self.n).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Digraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_edge_list(s)
    }
}

/// Parses the edge-list format: the first content line holds the vertex count,
/// every later content line holds one edge `u v`. Lines starting with `#` and
/// blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    let (n, pairs) = parse_pairs(text)?;
    let mut d = Digraph::new(n).map_err(|_| Error::Malformed { line: pairs.header_line, message: "vertex count must be at least 1".into() })?;
    for (line, u, v) in pairs.pairs {
        d.try_add(u, v, line)?;
    }
    d.finish();
    Ok(d)
}

pub(crate) struct ParsedPairs {
    pub header_line: usize,
    pub pairs: Vec<(usize, usize, usize)>,
}

/// Shared tokenizer for edge-list style files: returns the header count and
/// `(line, u, v)` triples, checking ranges but not loops or repeats.
pub(crate) fn parse_pairs(text: &str) -> Result<(usize, ParsedPairs)> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Malformed { line, message: format!("expected a non-negative integer, found {t:?}") })
        };
        match header {
            None => {
                if tokens.len() != 1 {
                    return Err(Error::Malformed { line, message: "expected the vertex count alone on the first line".into() });
                }
                header = Some((num(tokens[0])?, line));
            }
            Some((n, _)) => {
                if tokens.len() != 2 {
                    return Err(Error::Malformed { line, message: "expected two vertex ids".into() });
                }
                let (u, v) = (num(tokens[0])?, num(tokens[1])?);
                for x in [u, v] {
                    if x >= n {
                        return Err(Error::VertexOutOfRange { line, vertex: x, n });
                    }
                }
                pairs.push((line, u, v));
            }
        }
    }
    let (n, header_line) = header.ok_or(Error::Malformed { line: 0, message: "missing vertex count".into() })?;
    Ok((n, ParsedPairs { header_line, pairs }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(parse_edge_list("2\n0 0\n"), Err(Error::Loop { line: 2, vertex: 0 }));
        assert_eq!(parse_edge_list("2\n# c\n0 1\n0 1\n"), Err(Error::DuplicateEdge { line: 4, from: 0, to: 1 }));
        assert_eq!(parse_edge_list("2\n\n0 2\n"), Err(Error::VertexOutOfRange { line: 3, vertex: 2, n: 2 }));
        assert!(matches!(parse_edge_list("2\n0 x\n"), Err(Error::Malformed { line: 2, .. })));
        assert!(matches!(parse_edge_list("2\n0 1 1\n"), Err(Error::Malformed { line: 2, .. })));
        assert!(matches!(parse_edge_list("# nothing\n"), Err(Error::Malformed { .. })));
        assert!(matches!(parse_edge_list("0\n"), Err(Error::Malformed { line: 1, .. })));
    }

    #[test]
    fn single_vertex_and_digon() {
        let one = parse_edge_list("1\n").unwrap();
        assert_eq!((one.n(), one.edge_count()), (1, 0));
        let digon = parse_edge_list("2\n0 1\n1 0").unwrap();
        assert!(digon.is_digon(0, 1));
        assert!(!digon.is_acyclic());
    }

    #[test]
    fn sccs_come_sinks_first() {
        let path = parse_edge_list("3\n0 1\n1 2").unwrap();
        assert_eq!(path.strongly_connected_components(), vec![vec![2], vec![1], vec![0]]);
        let two_digons = parse_edge_list("4\n0 1\n1 0\n2 3\n3 2").unwrap();
        let comps = two_digons.strongly_connected_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn induced_subgraph_of_c3() {
        let c3 = parse_edge_list("3\n0 1\n1 2\n2 0").unwrap();
        let (sub, map) = c3.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(map, vec![Some(0), Some(1), None]);
        assert_eq!(c3.induced_subgraph(&[]), Err(Error::EmptyVertexSet));
    }
}

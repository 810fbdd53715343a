//! Subgraph homeomorphism and topological minors.
//!
//! Pattern vertex `h_i` goes to anchor `s_i` and every pattern edge to a
//! directed path between the anchors; paths may only share anchors. Giving
//! anchor `s_i` capacity `deg(h_i)` and every other vertex capacity 1 turns
//! this into a capacitated disjoint-paths instance with one pair per edge.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::digraph::{parse_pairs, Digraph};
use crate::error::{Error, Result};
use crate::paths::solve_vddp_c;

/// A pattern digraph: loops and repeated edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDigraph {
    pub r: usize,
    pub edges: Vec<(usize, usize)>,
}

impl PatternDigraph {
    pub fn new(r: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if r == 0 {
            return Err(Error::EmptyGraph);
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= r || v >= r) {
            return Err(Error::InvalidVertex(u.max(v)));
        }
        Ok(PatternDigraph { r, edges })
    }

    /// In-degree plus out-degree; a loop counts twice.
    pub fn degree(&self, h: usize) -> i64 {
        self.edges.iter().map(|&(u, v)| i64::from(u == h) + i64::from(v == h)).sum()
    }
}

impl FromStr for PatternDigraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (r, parsed) = parse_pairs(text)?;
        PatternDigraph::new(r, parsed.pairs.into_iter().map(|(_, u, v)| (u, v)).collect())
    }
}

impl fmt::Display for PatternDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.r)?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Anchors plus one walk per pattern edge, in pattern edge order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homeomorphism {
    pub anchors: Vec<usize>,
    pub walks: Vec<Vec<usize>>,
}

/// Embeds `h` into `d` with pattern vertex `i` placed on `anchors[i]`.
///
/// ```
/// use dmw::{homeo::{dshp, PatternDigraph}, Digraph};
///
/// let c3: Digraph = "3\n0 1\n1 2\n2 0".parse().unwrap();
/// let loop_at_one = PatternDigraph::new(1, vec![(0, 0)]).unwrap();
/// let found = dshp(&c3, &loop_at_one, &[0]).unwrap().unwrap();
/// assert_eq!(found.walks, vec![vec![0, 1, 2, 0]]);
/// ```
pub fn dshp(d: &Digraph, h: &PatternDigraph, anchors: &[usize]) -> Result<Option<Homeomorphism>> {
    if anchors.len() != h.r {
        return Err(Error::LengthMismatch { expected: h.r, found: anchors.len() });
    }
    let mut w = vec![1i64; d.n()];
    let mut seen = vec![false; d.n()];
    for (i, &a) in anchors.iter().enumerate() {
        if a >= d.n() {
            return Err(Error::InvalidVertex(a));
        }
        if seen[a] {
            return Err(Error::DuplicateAnchors);
        }
        seen[a] = true;
        w[a] = h.degree(i);
    }
    let pairs: Vec<(usize, usize)> = h.edges.iter().map(|&(u, v)| (anchors[u], anchors[v])).collect();
    let tau = 2 * h.edges.len() as i64 - h.r as i64 + d.n() as i64;
    Ok(solve_vddp_c(d, &w, &pairs, tau)?.map(|c| Homeomorphism { anchors: anchors.to_vec(), walks: c.walks }))
}

/// First embedding over all anchor tuples in lexicographic order.
pub fn topological_minor(d: &Digraph, h: &PatternDigraph) -> Result<Option<Homeomorphism>> {
    if h.r > d.n() {
        return Ok(None);
    }
    let mut anchors: Vec<usize> = Vec::with_capacity(h.r);
    search(d, h, &mut anchors)
}

fn search(d: &Digraph, h: &PatternDigraph, anchors: &mut Vec<usize>) -> Result<Option<Homeomorphism>> {
    if anchors.len() == h.r {
        return dshp(d, h, anchors);
    }
    for v in 0..d.n() {
        if !anchors.contains(&v) {
            anchors.push(v);
            if let Some(found) = search(d, h, anchors)? {
                return Ok(Some(found));
            }
            anchors.pop();
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Digraph {
        s.parse().unwrap()
    }

    #[test]
    fn fixed_anchors() {
        let edge = PatternDigraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(dshp(&g("3\n0 1\n1 2"), &edge, &[0, 2]).unwrap().unwrap().walks, vec![vec![0, 1, 2]]);
        let parallel = PatternDigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let two_routes = g("4\n0 1\n1 3\n0 2\n2 3");
        let found = dshp(&two_routes, &parallel, &[0, 3]).unwrap().unwrap();
        let mut walks = found.walks;
        walks.sort();
        assert_eq!(walks, vec![vec![0, 1, 3], vec![0, 2, 3]]);
        assert_eq!(dshp(&two_routes, &edge, &[0, 0]), Err(Error::DuplicateAnchors));
    }

    #[test]
    fn minors() {
        let triangle = PatternDigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let c6 = g("6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0");
        assert!(topological_minor(&c6, &triangle).unwrap().is_some());
        let digon = PatternDigraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert!(topological_minor(&g("3\n0 1\n1 2\n0 2"), &digon).unwrap().is_none());
        let point = PatternDigraph::new(1, vec![]).unwrap();
        assert_eq!(topological_minor(&g("2\n"), &point).unwrap().unwrap().anchors, vec![0]);
    }

    #[test]
    fn pattern_text() {
        let p: PatternDigraph = "2\n0 0\n0 1\n0 1\n".parse().unwrap();
        assert_eq!(p.degree(0), 4);
        assert_eq!(p.to_string().parse::<PatternDigraph>().unwrap(), p);
    }
}

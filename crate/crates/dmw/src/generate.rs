//! Reproducible random digraphs. All randomness comes from `ChaCha8Rng`
//! seeded with `seed_from_u64`, so a `GeneratorSpec` yields the same digraph everywhere.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Every ordered pair is an edge with probability 1/2.
    Uniform,
    /// Disjoint unions, series and order compositions only.
    Cograph,
    /// Random module substitutions with quotients of at most `omega` vertices.
    BoundedDmw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub omega: usize,
    pub seed: u64,
    pub kind: GeneratorKind,
}

/// ```
/// use dmw::generate::{generate, GeneratorKind, GeneratorSpec};
/// use dmw::modular::is_directed_cograph;
///
/// let spec = GeneratorSpec { n: 20, omega: 2, seed: 7, kind: GeneratorKind::Cograph };
/// let d = generate(&spec).unwrap();
/// assert!(is_directed_cograph(&d));
/// assert_eq!(d, generate(&spec).unwrap());
/// ```
pub fn generate(spec: &GeneratorSpec) -> Result<Digraph> {
    if spec.n == 0 {
        return Err(Error::EmptyGraph);
    }
    if spec.kind == GeneratorKind::BoundedDmw && spec.omega < 2 {
        return Err(Error::InvalidInstance("omega must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges = match spec.kind {
        GeneratorKind::Uniform => uniform(spec.n, &mut rng),
        GeneratorKind::Cograph => cograph(spec.n, &mut rng),
        GeneratorKind::BoundedDmw => bounded(spec.n, spec.omega, &mut rng),
    };
    let mut relabel: Vec<usize> = (0..spec.n).collect();
    relabel.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (relabel[u], relabel[v])).collect();
    edges.sort_unstable();
    Digraph::from_edges(spec.n, &edges)
}

fn uniform(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Edges of the digraph obtained by substituting parts of the given sizes
/// into the quotient edges.
fn substitute(sizes: &[usize], quotient: &[(usize, usize)], parts: Vec<Vec<(usize, usize)>>) -> Vec<(usize, usize)> {
    let mut start = vec![0];
    for s in sizes {
        start.push(start.last().expect("non-empty") + s);
    }
    let mut edges = Vec::new();
    for (i, part) in parts.into_iter().enumerate() {
        edges.extend(part.into_iter().map(|(u, v)| (u + start[i], v + start[i])));
    }
    for &(i, j) in quotient {
        for u in start[i]..start[i + 1] {
            for v in start[j]..start[j + 1] {
                edges.push((u, v));
            }
        }
    }
    edges
}

fn cograph(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n == 1 {
        return Vec::new();
    }
    let a = rng.gen_range(1..n);
    let quotient = match rng.gen_range(0..3) {
        0 => vec![],
        1 => vec![(0, 1), (1, 0)],
        _ => vec![(0, 1)],
    };
    let parts = vec![cograph(a, rng), cograph(n - a, rng)];
    substitute(&[a, n - a], &quotient, parts)
}

fn bounded(n: usize, omega: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if n == 1 {
        return Vec::new();
    }
    let l = rng.gen_range(2..=omega.min(n));
    // random composition of n into l positive parts
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts = cuts[..l - 1].to_vec();
    cuts.sort_unstable();
    let sizes: Vec<usize> = std::iter::once(0).chain(cuts.iter().copied()).zip(cuts.iter().copied().chain(std::iter::once(n))).map(|(a, b)| b - a).collect();
    let quotient: Vec<(usize, usize)> = uniform(l, rng);
    let parts = sizes.iter().map(|&s| bounded(s, omega, rng)).collect();
    substitute(&sizes, &quotient, parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::dmw;

    #[test]
    fn single_vertex() {
        for kind in [GeneratorKind::Uniform, GeneratorKind::Cograph, GeneratorKind::BoundedDmw] {
            let d = generate(&GeneratorSpec { n: 1, omega: 3, seed: 1, kind }).unwrap();
            assert_eq!((d.n(), d.edge_count()), (1, 0));
        }
    }

    #[test]
    fn width_is_bounded() {
        for seed in 0..20 {
            let d = generate(&GeneratorSpec { n: 30, omega: 4, seed, kind: GeneratorKind::BoundedDmw }).unwrap();
            assert!(dmw(&d) <= 4);
        }
    }
}

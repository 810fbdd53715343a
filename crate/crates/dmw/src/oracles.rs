//! Exhaustive reference solvers. They follow the problem definitions
//! directly and never look at modules, so they can check the real solvers.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::homeo::PatternDigraph;
use crate::weighted::WeightedDigraph;

/// Hard caps on instance size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_n: usize,
    pub max_r: usize,
    pub max_total_weight: i64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_n: 8, max_r: 2, max_total_weight: 12 }
    }
}

impl OracleBudget {
    fn check_n(&self, d: &Digraph) -> Result<()> {
        if d.n() > self.max_n {
            return Err(Error::BudgetExceeded(format!("{} vertices, at most {} allowed", d.n(), self.max_n)));
        }
        Ok(())
    }

    fn check_r(&self, r: usize) -> Result<()> {
        if r > self.max_r {
            return Err(Error::BudgetExceeded(format!("{r} pairs, at most {} allowed", self.max_r)));
        }
        Ok(())
    }

    fn check_weight(&self, total: i64) -> Result<()> {
        if total > self.max_total_weight {
            return Err(Error::BudgetExceeded(format!("total weight {total}, at most {} allowed", self.max_total_weight)));
        }
        Ok(())
    }
}

fn masks(d: &Digraph) -> (Vec<u32>, Vec<u32>) {
    let out = (0..d.n()).map(|v| d.out_neighbors(v).iter().fold(0, |m, &u| m | 1 << u)).collect();
    let inn = (0..d.n()).map(|v| d.in_neighbors(v).iter().fold(0, |m, &u| m | 1 << u)).collect();
    (out, inn)
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&v| mask >> v & 1 == 1)
}

/// Depth-first cycle search restricted to `keep`.
fn has_cycle(out: &[u32], keep: u32) -> bool {
    fn visit(v: usize, out: &[u32], keep: u32, state: &mut [u8]) -> bool {
        state[v] = 1;
        for u in bits(out[v] & keep) {
            if state[u] == 1 || (state[u] == 0 && visit(u, out, keep, state)) {
                return true;
            }
        }
        state[v] = 2;
        false
    }
    let mut state = vec![0u8; out.len()];
    bits(keep).any(|v| state[v] == 0 && visit(v, out, keep, &mut state))
}

/// Directed modular width by minimizing over every module partition.
pub fn brute_dmw(d: &Digraph, budget: &OracleBudget) -> Result<usize> {
    budget.check_n(d)?;
    let (out, inn) = masks(d);
    let mut memo = HashMap::new();
    Ok(width_of(((1u64 << d.n()) - 1) as u32, &out, &inn, &mut memo))
}

fn is_module_in(s: u32, x: u32, out: &[u32], inn: &[u32]) -> bool {
    let first = s.trailing_zeros() as usize;
    bits(s).all(|m| (out[m] ^ out[first]) & x & !s == 0 && (inn[m] ^ inn[first]) & x & !s == 0)
}

fn width_of(x: u32, out: &[u32], inn: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
    let size = x.count_ones() as usize;
    if size <= 2 {
        return size;
    }
    if let Some(&w) = memo.get(&x) {
        return w;
    }
    let mut best = size;
    partitions(x, x, 0, 0, out, inn, memo, &mut best);
    memo.insert(x, best);
    best
}

/// Extends a partial partition of `x` (blocks so far: `count`, worst score
/// `worst`) by a module containing the lowest uncovered vertex.
#[allow(clippy::too_many_arguments)]
fn partitions(x: u32, rest: u32, count: usize, worst: usize, out: &[u32], inn: &[u32], memo: &mut HashMap<u32, usize>, best: &mut usize) {
    if rest == 0 {
        if count >= 2 {
            *best = (*best).min(worst.max(count));
        }
        return;
    }
    let low = rest & rest.wrapping_neg();
    let others = rest & !low;
    let mut sub = others;
    loop {
        let block = sub | low;
        if block != x && is_module_in(block, x, out, inn) {
            let w = width_of(block, out, inn, memo);
            if w.max(count + 1) < *best {
                partitions(x, rest & !block, count + 1, worst.max(w), out, inn, memo, best);
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & others;
    }
}

/// Minimum weight of a vertex set whose deletion leaves an acyclic digraph.
pub fn brute_fvs(wd: &WeightedDigraph, budget: &OracleBudget) -> Result<i64> {
    budget.check_n(&wd.d)?;
    let n = wd.d.n();
    let (out, _) = masks(&wd.d);
    let full = ((1u64 << n) - 1) as u32;
    Ok((0..=full)
        .filter(|&f| !has_cycle(&out, full & !f))
        .map(|f| bits(f).map(|v| wd.w[v]).sum())
        .min()
        .expect("deleting all vertices works"))
}

/// Minimum weight of a set whose closed out-neighbourhood is every vertex.
pub fn brute_domset(wd: &WeightedDigraph, budget: &OracleBudget) -> Result<i64> {
    budget.check_n(&wd.d)?;
    let n = wd.d.n();
    let (out, _) = masks(&wd.d);
    let full = ((1u64 << n) - 1) as u32;
    Ok((1..=full)
        .filter(|&x| bits(x).fold(x, |m, v| m | out[v]) == full)
        .map(|x| bits(x).map(|v| wd.w[v]).sum())
        .min()
        .expect("all vertices dominate"))
}

/// Fewest acyclic colour classes covering each vertex `demand[v]` times.
pub fn brute_dichromatic(d: &Digraph, demand: &[i64], budget: &OracleBudget) -> Result<i64> {
    budget.check_n(d)?;
    budget.check_weight(demand.iter().sum())?;
    let (out, _) = masks(d);
    let n = d.n();
    let classes: Vec<u32> = (1..1u32 << n).filter(|&a| !has_cycle(&out, a)).collect();
    fn fewest(rem: Vec<i64>, classes: &[u32], memo: &mut HashMap<Vec<i64>, i64>) -> i64 {
        if rem.iter().all(|&r| r == 0) {
            return 0;
        }
        if let Some(&k) = memo.get(&rem) {
            return k;
        }
        let support = rem.iter().enumerate().filter(|(_, &r)| r > 0).fold(0u32, |m, (v, _)| m | 1 << v);
        let mut best = i64::MAX;
        for &a in classes.iter().filter(|&&a| a & !support == 0) {
            let mut next = rem.clone();
            for v in bits(a) {
                next[v] -= 1;
            }
            best = best.min(1 + fewest(next, classes, memo));
        }
        memo.insert(rem, best);
        best
    }
    Ok(fewest(demand.to_vec(), &classes, &mut HashMap::new()))
}

/// Heap's algorithm over all permutations of `0..n`.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Minimum number of vertex-disjoint paths covering every vertex.
pub fn brute_ham(d: &Digraph, budget: &OracleBudget) -> Result<usize> {
    budget.check_n(d)?;
    let mut best = d.n();
    for_each_permutation(d.n(), |p| {
        let breaks = p.windows(2).filter(|w| !d.has_edge(w[0], w[1])).count();
        best = best.min(breaks + 1);
    });
    Ok(best)
}

/// True if some cycle visits every vertex exactly once.
pub fn brute_hamiltonian_cycle(d: &Digraph, budget: &OracleBudget) -> Result<bool> {
    budget.check_n(d)?;
    let n = d.n();
    if n < 2 {
        return Err(Error::TooFewVertices(2));
    }
    let mut found = false;
    for_each_permutation(n - 1, |p| {
        let tour: Vec<usize> = std::iter::once(0).chain(p.iter().map(|&v| v + 1)).collect();
        if (0..n).all(|i| d.has_edge(tour[i], tour[(i + 1) % n])) {
            found = true;
        }
    });
    Ok(found)
}

/// Every simple `s`-`t` path, or every cycle through `s` when `s == t`, as
/// vertex sequences (a cycle repeats its start at the end).
pub fn simple_walks(d: &Digraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn extend(d: &Digraph, t: usize, walk: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = *walk.last().expect("non-empty");
        for &u in d.out_neighbors(v) {
            if u == t {
                let mut done = walk.clone();
                done.push(u);
                out.push(done);
            } else if !used[u] {
                used[u] = true;
                walk.push(u);
                extend(d, t, walk, used, out);
                walk.pop();
                used[u] = false;
            }
        }
    }
    let mut used = vec![false; d.n()];
    used[s] = true;
    used[t] = true;
    let mut out = Vec::new();
    extend(d, t, &mut vec![s], &mut used, &mut out);
    out
}

/// Smallest total size of one walk per pair such that vertex `z` is
/// traversed at most `w[z]` times (a cycle's start counts twice).
pub fn brute_vddp_c(d: &Digraph, w: &[i64], pairs: &[(usize, usize)], budget: &OracleBudget) -> Result<Option<i64>> {
    budget.check_n(d)?;
    budget.check_r(pairs.len())?;
    let options: Vec<Vec<Vec<usize>>> = pairs.iter().map(|&(s, t)| simple_walks(d, s, t)).collect();
    fn choose(i: usize, options: &[Vec<Vec<usize>>], left: &mut [i64], size: i64, best: &mut Option<i64>) {
        if i == options.len() {
            if best.map_or(true, |b| size < b) {
                *best = Some(size);
            }
            return;
        }
        for walk in &options[i] {
            // a cycle lists its start twice, matching its double count
            for &v in walk {
                left[v] -= 1;
            }
            if walk.iter().all(|&v| left[v] >= 0) {
                choose(i + 1, options, left, size + walk.len() as i64, best);
            }
            for &v in walk {
                left[v] += 1;
            }
        }
    }
    let mut best = None;
    choose(0, &options, &mut w.to_vec(), 0, &mut best);
    Ok(best)
}

/// True if every pattern edge maps to a path (or cycle, for a loop) between
/// its anchors with no vertex used by two paths except shared anchors.
pub fn brute_dshp(d: &Digraph, h: &PatternDigraph, anchors: &[usize], budget: &OracleBudget) -> Result<bool> {
    budget.check_n(d)?;
    if h.edges.len() > 3 {
        return Err(Error::BudgetExceeded(format!("{} pattern edges, at most 3 allowed", h.edges.len())));
    }
    let mut blocked = vec![false; d.n()];
    for &a in anchors {
        blocked[a] = true;
    }
    let options: Vec<Vec<Vec<usize>>> = h.edges.iter().map(|&(u, v)| simple_walks(d, anchors[u], anchors[v])).collect();
    fn choose(i: usize, options: &[Vec<Vec<usize>>], blocked: &mut [bool]) -> bool {
        if i == options.len() {
            return true;
        }
        for walk in &options[i] {
            let inner = &walk[1..walk.len() - 1];
            if inner.iter().all(|&v| !blocked[v]) {
                inner.iter().for_each(|&v| blocked[v] = true);
                let ok = choose(i + 1, options, blocked);
                inner.iter().for_each(|&v| blocked[v] = false);
                if ok {
                    return true;
                }
            }
        }
        false
    }
    Ok(choose(0, &options, &mut blocked))
}

/// True if some choice of distinct anchors admits an embedding.
pub fn brute_topological_minor(d: &Digraph, h: &PatternDigraph, budget: &OracleBudget) -> Result<bool> {
    budget.check_n(d)?;
    fn tuples(d: &Digraph, h: &PatternDigraph, anchors: &mut Vec<usize>, budget: &OracleBudget) -> Result<bool> {
        if anchors.len() == h.r {
            return brute_dshp(d, h, anchors, budget);
        }
        for v in 0..d.n() {
            if !anchors.contains(&v) {
                anchors.push(v);
                if tuples(d, h, anchors, budget)? {
                    return Ok(true);
                }
                anchors.pop();
            }
        }
        Ok(false)
    }
    tuples(d, h, &mut Vec::new(), budget)
}

/// Directed pathwidth by searching all introduce/forget sequences. A vertex
/// may be forgotten once no vertex still to be introduced has an edge into it.
pub fn brute_dpw(d: &Digraph, budget: &OracleBudget) -> Result<usize> {
    budget.check_n(d)?;
    let n = d.n();
    let (_, inn) = masks(d);
    let full = ((1u64 << n) - 1) as u32;
    for limit in 1..=n as u32 {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![(0u32, 0u32)];
        seen.insert((0, 0));
        while let Some((introduced, bag)) = stack.pop() {
            if introduced == full && bag == 0 {
                return Ok(limit as usize - 1);
            }
            let mut next = Vec::new();
            if bag.count_ones() < limit {
                for v in bits(full & !introduced) {
                    next.push((introduced | 1 << v, bag | 1 << v));
                }
            }
            for v in bits(bag) {
                if inn[v] & !introduced == 0 {
                    next.push((introduced, bag & !(1 << v)));
                }
            }
            for s in next {
                if seen.insert(s) {
                    stack.push(s);
                }
            }
        }
    }
    unreachable!("a single bag with every vertex is a decomposition")
}

/// Cycle rank: 0 without cycles, the maximum over strong components when
/// disconnected, and `1 + min_v cr(D − v)` when strongly connected.
pub fn brute_cycle_rank(d: &Digraph, budget: &OracleBudget) -> Result<usize> {
    budget.check_n(d)?;
    let (out, _) = masks(d);
    fn cr(x: u32, out: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
        if !has_cycle(out, x) {
            return 0;
        }
        if let Some(&r) = memo.get(&x) {
            return r;
        }
        let comps = strong_components(x, out);
        let r = if comps.len() == 1 {
            1 + bits(x).map(|v| cr(x & !(1 << v), out, memo)).min().expect("non-empty")
        } else {
            comps.into_iter().map(|c| cr(c, out, memo)).max().expect("non-empty")
        };
        memo.insert(x, r);
        r
    }
    Ok(cr(((1u64 << d.n()) - 1) as u32, &out, &mut HashMap::new()))
}

/// Strong components of the subdigraph on `x` via mutual reachability.
fn strong_components(x: u32, out: &[u32]) -> Vec<u32> {
    let reach = |v: usize| {
        let mut seen = 1u32 << v;
        let mut frontier = seen;
        while frontier != 0 {
            let next = bits(frontier).fold(0, |m, u| m | out[u]) & x & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    };
    let reaches: Vec<u32> = (0..out.len()).map(|v| if x >> v & 1 == 1 { reach(v) } else { 0 }).collect();
    let mut left = x;
    let mut comps = Vec::new();
    while left != 0 {
        let v = left.trailing_zeros() as usize;
        let comp = bits(reaches[v]).filter(|&u| reaches[u] >> v & 1 == 1).fold(0, |m, u| m | 1 << u);
        comps.push(comp);
        left &= !comp;
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Digraph {
        s.parse().unwrap()
    }

    #[test]
    fn known_values() {
        let b = OracleBudget::default();
        let c3 = g("3\n0 1\n1 2\n2 0");
        let k3 = g("3\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1");
        let path = g("3\n0 1\n1 2");
        assert_eq!(brute_dmw(&g("1\n"), &b).unwrap(), 1);
        assert_eq!(brute_dmw(&c3, &b).unwrap(), 3);
        assert_eq!(brute_dmw(&g("2\n0 1\n1 0"), &b).unwrap(), 2);
        assert_eq!(brute_fvs(&WeightedDigraph::unit(c3.clone()), &b).unwrap(), 1);
        assert_eq!(brute_fvs(&WeightedDigraph::unit(k3.clone()), &b).unwrap(), 2);
        assert_eq!(brute_dichromatic(&k3, &[1, 1, 1], &b).unwrap(), 3);
        assert_eq!(brute_dichromatic(&c3, &[1, 1, 1], &b).unwrap(), 2);
        assert_eq!(brute_cycle_rank(&path, &b).unwrap(), 0);
        assert_eq!(brute_cycle_rank(&k3, &b).unwrap(), 2);
        assert_eq!(brute_dpw(&c3, &b).unwrap(), 1);
        assert_eq!(brute_dpw(&k3, &b).unwrap(), 2);
        assert_eq!(brute_dpw(&path, &b).unwrap(), 0);
        assert_eq!(brute_ham(&g("3\n"), &b).unwrap(), 3);
        assert!(brute_hamiltonian_cycle(&k3, &b).unwrap());
        assert_eq!(brute_vddp_c(&c3, &[2, 1, 1], &[(0, 0)], &b).unwrap(), Some(4));
        assert_eq!(brute_vddp_c(&c3, &[1, 1, 1], &[(0, 0)], &b).unwrap(), None);
        assert_eq!(brute_vddp_c(&path, &[2, 2, 2], &[(0, 2), (0, 2)], &b).unwrap(), Some(6));
    }

    #[test]
    fn budget_is_enforced() {
        let big = Digraph::new(9).unwrap();
        assert!(matches!(brute_dmw(&big, &OracleBudget::default()), Err(Error::BudgetExceeded(_))));
    }
}

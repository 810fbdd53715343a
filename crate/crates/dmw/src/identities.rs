//! Node-by-node checks of the recurrences the solvers rely on.
//!
//! For every inner node of the decomposition tree the value the solver
//! computed for the node's induced subdigraph is compared with the quotient
//! formula, evaluated here by plain enumeration over the quotient. Nodes with
//! at most [`OracleBudget::max_n`] vertices are also compared with the
//! exhaustive reference solvers, and every node witness is re-verified.

use serde::{Deserialize, Serialize};

use crate::coloring::{colour_per_node, ListDemand};
use crate::digraph::Digraph;
use crate::domset::domset_per_node;
use crate::error::{Error, Result};
use crate::fvs::fvs_per_node;
use crate::modular::decomposition_tree;
use crate::oracles::{brute_cycle_rank, brute_dichromatic, brute_domset, brute_dpw, brute_fvs, OracleBudget};
use crate::verify;
use crate::weighted::WeightedDigraph;
use crate::widths::{bag_value, decompositions_per_node, orderings_per_node, validate_dpd, DirectedPathDecomposition};

/// Largest quotient the enumerations here accept.
pub const MAX_QUOTIENT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `fv(D) = fv(D_M, w_M) + Σ fv(D[M_i])` with `w_M(v_i) = w(M_i) − fv(D[M_i])`.
    FvsSum,
    /// `γ(D) = min over dominating X_M of Σ_{I_1} min w(M_i) + Σ_{I_2} γ(D[M_i])`.
    Domination,
    /// `χ_N(D) = χ_{N_M}(D_M)` with `N_M(v_i) = χ_N(D[M_i])`.
    Dichromatic,
    /// `n-w-dpw(D_M) = dpw(D) + 1` with `w(v_i) = dpw(D[M_i]) + 1`.
    Pathwidth,
    /// `n-w-cr(D_M) = cr(D)` with `w(v_i) = cr(D[M_i])`.
    CycleRank,
}

pub const ALL: [Identity; 5] =
    [Identity::FvsSum, Identity::Domination, Identity::Dichromatic, Identity::Pathwidth, Identity::CycleRank];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Inner nodes checked, per identity in [`ALL`] order.
    pub nodes: [usize; 5],
    /// Node values also compared with an oracle, per identity.
    pub oracle_nodes: [usize; 5],
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn merge(&mut self, other: IdentityReport) {
        for i in 0..5 {
            self.nodes[i] += other.nodes[i];
            self.oracle_nodes[i] += other.oracle_nodes[i];
        }
        self.failures.extend(other.failures);
    }
}

/// Checks all five recurrences at every inner node of `d`'s decomposition tree.
pub fn check_identities(d: &Digraph, w: &[i64], demand: &[i64], budget: &OracleBudget) -> Result<IdentityReport> {
    let tree = decomposition_tree(d);
    if let Some(q) = tree.nodes.iter().filter_map(|t| t.quotient.as_ref()).find(|q| q.n() > MAX_QUOTIENT) {
        return Err(Error::QuotientTooLarge { size: q.n(), limit: MAX_QUOTIENT });
    }
    let wd = WeightedDigraph::new(d.clone(), w.to_vec(), w.iter().sum())?;
    let dem = ListDemand::new(demand.to_vec(), demand.iter().sum())?;
    let fvs = fvs_per_node(&wd, &tree)?;
    let dom = domset_per_node(&wd, &tree)?;
    let col = colour_per_node(&dem, &tree)?;
    let dpd = decompositions_per_node(&tree)?;
    let cr = orderings_per_node(&tree)?;
    let mut report = IdentityReport::default();
    let expect = |report: &mut IdentityReport, which: Identity, id: usize, lhs: i64, rhs: i64| {
        if lhs != rhs {
            report.failures.push(format!("{which:?} at node {id} of\n{d}: {lhs} != {rhs}"));
        }
    };
    for (id, node) in tree.nodes.iter().enumerate() {
        let Some(q) = &node.quotient else { continue };
        let (sub, map) = d.induced_subgraph(&node.vertices)?;
        let local = |set: &[usize]| -> Vec<usize> { set.iter().map(|&v| map[v].expect("vertex of the node")).collect() };
        let sw: Vec<i64> = node.vertices.iter().map(|&v| w[v]).collect();
        let sub_wd = WeightedDigraph::new(sub.clone(), sw.clone(), sw.iter().sum())?;
        let sizes: Vec<usize> = node.children.iter().map(|&c| tree.nodes[c].vertices.len()).collect();
        let small = sub.n() <= budget.max_n;

        // feedback vertex sets
        let child_fv: Vec<i64> = node.children.iter().map(|&c| fvs[c].weight).collect();
        let wm: Vec<i64> = node.children.iter().zip(&child_fv).map(|(&c, f)| wd.weight_of(&tree.nodes[c].vertices) - f).collect();
        expect(&mut report, Identity::FvsSum, id, fvs[id].weight, quotient_fv(q, &wm) + child_fv.iter().sum::<i64>());
        let witness = crate::fvs::FvsSolution { weight: fvs[id].weight, vertices: local(&fvs[id].vertices) };
        if let Err(e) = verify::check_fvs(&sub_wd, &witness) {
            report.failures.push(format!("fvs witness at node {id}: {e}"));
        }
        report.nodes[0] += 1;
        if small {
            expect(&mut report, Identity::FvsSum, id, fvs[id].weight, brute_fvs(&sub_wd, budget)?);
            report.oracle_nodes[0] += 1;
        }

        // dominating sets
        let cheapest: Vec<i64> = node.children.iter().map(|&c| tree.nodes[c].vertices.iter().map(|&v| w[v]).min().expect("non-empty")).collect();
        let child_gamma: Vec<i64> = node.children.iter().map(|&c| dom[c].weight).collect();
        expect(&mut report, Identity::Domination, id, dom[id].weight, quotient_domination(q, &cheapest, &child_gamma));
        let witness = crate::domset::DomsetSolution { weight: dom[id].weight, vertices: local(&dom[id].vertices) };
        if let Err(e) = verify::check_domset(&sub_wd, &witness) {
            report.failures.push(format!("domset witness at node {id}: {e}"));
        }
        report.nodes[1] += 1;
        if small {
            expect(&mut report, Identity::Domination, id, dom[id].weight, brute_domset(&sub_wd, budget)?);
            report.oracle_nodes[1] += 1;
        }

        // dichromatic number
        let nm: Vec<i64> = node.children.iter().map(|&c| col[c].k).collect();
        let quotient_budget = OracleBudget { max_n: MAX_QUOTIENT, max_r: 0, max_total_weight: i64::MAX };
        expect(&mut report, Identity::Dichromatic, id, col[id].k, brute_dichromatic(q, &nm, &quotient_budget)?);
        let sd: Vec<i64> = node.vertices.iter().map(|&v| demand[v]).collect();
        let sub_dem = ListDemand::new(sd.clone(), sd.iter().sum())?;
        if let Err(e) = verify::check_colouring(&sub, &sub_dem, &col[id]) {
            report.failures.push(format!("colouring at node {id}: {e}"));
        }
        report.nodes[2] += 1;
        if small && sd.iter().sum::<i64>() <= budget.max_total_weight {
            expect(&mut report, Identity::Dichromatic, id, col[id].k, brute_dichromatic(&sub, &sd, budget)?);
            report.oracle_nodes[2] += 1;
        }

        // directed pathwidth
        let pw_w: Vec<usize> = node.children.iter().map(|&c| dpd[c].width() + 1).collect();
        let width = dpd[id].width() as i64;
        expect(&mut report, Identity::Pathwidth, id, width + 1, quotient_nw_pathwidth(q, &sizes, &pw_w) as i64);
        let witness = DirectedPathDecomposition { bags: dpd[id].bags.iter().map(|b| local(b)).collect() };
        if !validate_dpd(&sub, &witness) {
            report.failures.push(format!("path decomposition at node {id} is invalid"));
        }
        report.nodes[3] += 1;
        if small {
            expect(&mut report, Identity::Pathwidth, id, width, brute_dpw(&sub, budget)? as i64);
            report.oracle_nodes[3] += 1;
        }

        // cycle rank
        let cr_w: Vec<usize> = node.children.iter().map(|&c| cr[c].0).collect();
        expect(&mut report, Identity::CycleRank, id, cr[id].0 as i64, quotient_nw_cycle_rank(q, &sizes, &cr_w) as i64);
        let depth = crate::widths::rank_of_ordering(&sub, &local(&cr[id].1))?.0;
        expect(&mut report, Identity::CycleRank, id, depth as i64, cr[id].0 as i64 + 1);
        report.nodes[4] += 1;
        if small {
            expect(&mut report, Identity::CycleRank, id, cr[id].0 as i64, brute_cycle_rank(&sub, budget)? as i64);
            report.oracle_nodes[4] += 1;
        }
    }
    Ok(report)
}

fn subsets(l: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << l).map(move |m| (0..l).filter(|&i| m >> i & 1 == 1).collect())
}

fn quotient_fv(q: &Digraph, wm: &[i64]) -> i64 {
    subsets(q.n())
        .filter(|x| {
            let keep: Vec<bool> = (0..q.n()).map(|i| !x.contains(&i)).collect();
            q.is_acyclic_within(&keep)
        })
        .map(|x| x.iter().map(|&i| wm[i]).sum())
        .min()
        .expect("removing everything leaves no cycle")
}

fn quotient_domination(q: &Digraph, cheapest: &[i64], gamma: &[i64]) -> i64 {
    let l = q.n();
    subsets(l)
        .filter(|x| (0..l).all(|v| x.contains(&v) || q.in_neighbors(v).iter().any(|u| x.contains(u))))
        .map(|x| {
            x.iter()
                .map(|&i| if q.in_neighbors(i).iter().any(|u| x.contains(u)) { cheapest[i] } else { gamma[i] })
                .sum()
        })
        .min()
        .expect("the whole quotient dominates")
}

/// Minimum n-w-width over bag sequences of at most `q.n()` non-empty bags.
fn quotient_nw_pathwidth(q: &Digraph, n: &[usize], w: &[usize]) -> usize {
    let l = q.n();
    let bags: Vec<Vec<usize>> = subsets(l).skip(1).collect();
    let mut best = usize::MAX;
    let mut seq: Vec<usize> = Vec::new();
    fn go(q: &Digraph, n: &[usize], w: &[usize], bags: &[Vec<usize>], seq: &mut Vec<usize>, best: &mut usize) {
        if !seq.is_empty() {
            let dec = DirectedPathDecomposition { bags: seq.iter().map(|&b| bags[b].clone()).collect() };
            if validate_dpd(q, &dec) {
                let mask = |b: &[usize]| b.iter().fold(0u64, |m, &v| m | 1 << v);
                let value = (0..seq.len())
                    .map(|t| {
                        let here = mask(&dec.bags[t]);
                        let prev = if t > 0 { mask(&dec.bags[t - 1]) } else { 0 };
                        let next = dec.bags.get(t + 1).map_or(0, |b| mask(b));
                        bag_value(here, here & (prev | next), n, w)
                    })
                    .max()
                    .expect("non-empty");
                *best = (*best).min(value);
            }
        }
        if seq.len() == q.n() {
            return;
        }
        for b in 0..bags.len() {
            seq.push(b);
            go(q, n, w, bags, seq, best);
            seq.pop();
        }
    }
    go(q, n, w, &bags, &mut seq, &mut best);
    best
}

/// Minimum over orderings of the largest n-w cost along a root-to-leaf path.
fn quotient_nw_cycle_rank(q: &Digraph, n: &[usize], w: &[usize]) -> usize {
    fn cost(q: &Digraph, order: &[usize], n: &[usize], w: &[usize], keep: &[bool]) -> usize {
        q.sccs_within(keep)
            .into_iter()
            .map(|comp| match comp.as_slice() {
                [v] => w[*v],
                _ => {
                    let root = *order.iter().find(|v| comp.contains(v)).expect("non-empty");
                    let inner: Vec<bool> = (0..q.n()).map(|v| v != root && comp.contains(&v)).collect();
                    n[root] + cost(q, order, n, w, &inner)
                }
            })
            .max()
            .unwrap_or(0)
    }
    fn perms(rest: &mut Vec<usize>, order: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if rest.is_empty() {
            f(order);
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            order.push(v);
            perms(rest, order, f);
            order.pop();
            rest.insert(i, v);
        }
    }
    let mut best = usize::MAX;
    let keep = vec![true; q.n()];
    perms(&mut (0..q.n()).collect(), &mut Vec::new(), &mut |order| best = best.min(cost(q, order, n, w, &keep)));
    best
}

//! Bitmask helpers for quotient digraphs, which have at most a few dozen vertices.

use crate::digraph::Digraph;

pub(crate) fn out_masks(d: &Digraph) -> Vec<u64> {
    (0..d.n()).map(|v| d.out_neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect()
}

/// True if the vertices in `mask` induce an acyclic subdigraph.
pub(crate) fn acyclic_mask(out: &[u64], mask: u64) -> bool {
    let mut rest = mask;
    loop {
        let mut removed = false;
        let mut it = rest;
        while it != 0 {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            if out[v] & rest == 0 {
                rest &= !(1 << v);
                removed = true;
            }
        }
        if rest == 0 {
            return true;
        }
        if !removed {
            return false;
        }
    }
}

pub(crate) fn members(mask: u64) -> impl Iterator<Item = usize> {
    let mut it = mask;
    std::iter::from_fn(move || {
        (it != 0).then(|| {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            v
        })
    })
}

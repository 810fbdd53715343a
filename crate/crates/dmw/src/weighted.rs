//! Vertex-weighted digraphs with a threshold on the total weight.

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedDigraph {
    pub d: Digraph,
    pub w: Vec<i64>,
    /// Upper bound on the total weight.
    pub tau: i64,
}

impl WeightedDigraph {
    pub fn new(d: Digraph, w: Vec<i64>, tau: i64) -> Result<Self> {
        if w.len() != d.n() {
            return Err(Error::LengthMismatch { expected: d.n(), found: w.len() });
        }
        if let Some(v) = w.iter().position(|&x| x < 0) {
            return Err(Error::NegativeWeight(v));
        }
        let total = w.iter().try_fold(0i64, |acc, &x| acc.checked_add(x)).ok_or(Error::Overflow)?;
        if total > tau {
            return Err(Error::ThresholdExceeded { total, tau });
        }
        Ok(WeightedDigraph { d, w, tau })
    }

    /// Unit weights with `tau = n`.
    pub fn unit(d: Digraph) -> Self {
        let n = d.n();
        WeightedDigraph { d, w: vec![1; n], tau: n as i64 }
    }

    pub fn weight_of(&self, set: &[usize]) -> i64 {
        set.iter().map(|&v| self.w[v]).sum()
    }
}

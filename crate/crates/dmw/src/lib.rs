//! Directed modular decomposition and exact solvers that recurse over it.
//!
//! Every solver runs in time `f(dmw) · poly(n)`: it decomposes the digraph into
//! modules, solves each module, and combines the answers on the quotient.

#![forbid(unsafe_code)]

mod bits;
pub mod coloring;
pub mod digraph;
pub mod domset;
pub mod error;
pub mod fvs;
pub mod generate;
pub mod hampath;
pub mod homeo;
pub mod identities;
pub mod ilp;
pub mod modular;
pub mod oracles;
pub mod paths;
pub mod verify;
pub mod weighted;
pub mod widths;

pub use digraph::{parse_edge_list, Digraph, VertexSet};
pub use error::{Error, Result};

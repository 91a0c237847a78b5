//! Exact Ihara zeta functions and Artin-Ihara L-functions of graphs and
//! hypergraphs, for free Galois coverings `Y → Y/G`.

pub mod action;
pub mod algebra;
pub mod covering;
pub mod cycles;
pub mod error;
pub mod hypergraph;
pub mod representation;
pub mod zeta;

pub use error::{Error, Result};

//! Median orders and second-neighborhood witnesses for digraphs missing disjoint stars.
//!
//! A vertex `v` has the second neighborhood property (SNP) when `|N⁺⁺(v)| ≥ |N⁺(v)|`.
//! The crate builds the dependency digraph of the missing edges, computes exact and
//! locally optimal median orders, sediments them, and runs witness procedures that
//! return SNP vertices together with a certificate of the cases taken.

pub mod dependency;
pub mod digraph;
pub mod forge;
pub mod format;
pub mod missing;
pub mod order;
pub mod sweep;
pub mod theorems;

pub use dependency::{ComponentIndex, DependencyDigraph};
pub use digraph::{Digraph, GraphError, VertexSet, Weight, Weighting, MAX_VERTICES};
pub use order::{LinearOrder, OrderError};
pub use theorems::{certify, SnpCertificate, TheoremError, TheoremId};

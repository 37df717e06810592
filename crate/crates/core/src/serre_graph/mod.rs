//! Serre graphs, their morphisms, Stallings folds, cores and fibre products.

mod fibre;
mod fold;
mod graph;
mod morphism;

pub use fibre::{fibre_product, FibreProduct};
pub use fold::{
    fold, pi1_injective_oracle, stallings_fold, unfold_edge, Fold, FoldError, OracleError,
    StallingsFolding,
};
pub(crate) use fold::quotient_by;
pub use graph::{
    betti, core_of, core_with_ids, cycle, find_isomorphism, find_isomorphism_accepting, find_isomorphism_with, path, rose,
    theta, validate_graph, Betti, Edge, GraphBuilder, GraphError, GraphIso, SerreGraph, Vertex,
};
pub use morphism::{GraphMorphism, MorphismError};

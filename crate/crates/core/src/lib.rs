//! Exact curvature invariants of branched 2-complexes and origami
//! certificates for π1-injectivity of graph morphisms.

pub mod blocks;
pub mod complex;
pub mod io;
pub mod lp;
pub mod origami;
pub mod partition;
pub mod pipeline;
pub mod serre_graph;

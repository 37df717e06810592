//! Origamis: open equivalence relations on the edges of a graph that record
//! how it folds, and certify π1-injectivity when essential.

mod certify;
mod transport;

use std::collections::HashMap;

use thiserror::Error;

use crate::partition::{Partition, UnionFind};
use crate::serre_graph::{
    find_isomorphism_accepting, quotient_by, Edge, GraphBuilder, GraphMorphism, SerreGraph, Vertex,
};

pub use certify::{
    certify_pi1_injective, origami_along_folds, origami_from_homotopy_equivalence,
    verify_certificate,
};
pub use transport::{find_foldable_pair, fold_origami, unfold_origami};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrigamiError {
    #[error("relation is not an origami: {0:?}")]
    NotAnOrigami(Vec<Violation>),
    #[error("origami is not essential")]
    OrigamiNotEssential,
    #[error("fold is not essential")]
    FoldNotEssential,
    #[error("edges {0} and {1} are not open-equivalent with a common initial vertex")]
    PairNotOpenEquivalent(Edge, Edge),
    #[error("origami and morphism live on different graphs")]
    DomainMismatch,
    #[error("relation covers {got} edges, graph has {expected}")]
    WrongSize { expected: usize, got: usize },
    #[error("morphism is not a homotopy equivalence")]
    NotHomotopyEquivalence,
    #[error("domain and codomain must be finite connected core graphs")]
    NotCoreOrConnected,
}

/// A failed origami axiom, naming the offending edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `e` and `ē` lie in one component of the edge graph.
    Singular(Edge),
    /// `e1 ∼O e2` but their initial vertices lie in different components of
    /// the vertex graph.
    GloballyInconsistent(Edge, Edge),
    /// `e1, e2 ∈ [e]_O` but `e` separates their initial vertices in the
    /// vertex graph.
    LocallyInconsistent { edge: Edge, e1: Edge, e2: Edge },
}

/// An open relation `∼O` on the edges of a base graph. Construction through
/// `new` checks the origami axioms; `candidate` accepts any relation so that
/// its violations can be inspected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Origami {
    base: SerreGraph,
    open: Partition,
}

/// The edge graph `E_Ω` and vertex graph `V_Ω`, as Serre graphs. Edge `e` of
/// the base is the oriented edge `2e` in both: in `E_Ω` it runs from open
/// vertex `[e]_O` (numbered `0..#O`) to closed vertex `[e]_C` (numbered
/// `#O..`); in `V_Ω` from the base vertex `ι(e)` to closed vertex `[e]_C`
/// (numbered from the base vertex count on).
#[derive(Clone, Debug)]
pub struct OrigamiGraphs {
    pub edge_graph: SerreGraph,
    pub vertex_graph: SerreGraph,
}

/// `Δ/Ω` with the quotient map `q: Δ -> Δ/Ω`.
#[derive(Clone, Debug)]
pub struct QuotientResult {
    pub quotient: SerreGraph,
    pub q: GraphMorphism,
}

/// Component labels of the edge and vertex graphs, read back onto the edges
/// and vertices of the base.
#[derive(Clone, Debug)]
pub(crate) struct Components {
    /// Component of `E_Ω` containing each base edge.
    pub edge: Vec<usize>,
    /// Component of `V_Ω` containing each base vertex.
    pub vertex: Vec<usize>,
}

impl Origami {
    pub fn new(base: SerreGraph, open: Partition) -> Result<Self, OrigamiError> {
        let o = Self::candidate(base, open)?;
        let report = o.violations();
        if report.is_empty() {
            Ok(o)
        } else {
            Err(OrigamiError::NotAnOrigami(report))
        }
    }

    /// Wraps an arbitrary relation without checking the axioms.
    pub fn candidate(base: SerreGraph, open: Partition) -> Result<Self, OrigamiError> {
        if open.len() != base.edge_count() {
            return Err(OrigamiError::WrongSize {
                expected: base.edge_count(),
                got: open.len(),
            });
        }
        Ok(Origami { base, open })
    }

    /// Open relation is equality.
    pub fn trivial(base: &SerreGraph) -> Self {
        Origami {
            open: Partition::discrete(base.edge_count()),
            base: base.clone(),
        }
    }

    pub fn base(&self) -> &SerreGraph {
        &self.base
    }

    pub fn open_relation(&self) -> &Partition {
        &self.open
    }

    /// `e1 ∼C e2 ⇔ ē1 ∼O ē2`.
    pub fn closed_relation(&self) -> Partition {
        self.open.pull_back(self.base.inv_map())
    }

    pub fn graphs(&self) -> OrigamiGraphs {
        let closed = self.closed_relation();
        let (no, nc) = (self.open.class_count(), closed.class_count());
        let mut eb = GraphBuilder::with_vertices(no + nc);
        let mut vb = GraphBuilder::with_vertices(self.base.vertex_count() + nc);
        for e in self.base.edges() {
            eb.add_edge(self.open.class_of(e), no + closed.class_of(e));
            vb.add_edge(
                self.base.init(e),
                self.base.vertex_count() + closed.class_of(e),
            );
        }
        OrigamiGraphs {
            edge_graph: eb.build(),
            vertex_graph: vb.build(),
        }
    }

    pub(crate) fn components(&self) -> Components {
        let g = self.graphs();
        let el = g.edge_graph.component_labels();
        let vl = g.vertex_graph.component_labels();
        Components {
            edge: self.base.edges().map(|e| el[self.open.class_of(e)]).collect(),
            vertex: vl[..self.base.vertex_count()].to_vec(),
        }
    }

    /// Every failure of non-singularity, global and local consistency.
    pub fn violations(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        let graphs = self.graphs();
        let comps = self.components();
        for e in self.base.edges() {
            if e < self.base.inv(e) && comps.edge[e] == comps.edge[self.base.inv(e)] {
                report.push(Violation::Singular(e));
            }
        }
        let classes = self.open.classes();
        for class in &classes {
            for w in class.windows(2) {
                let (e1, e2) = (w[0], w[1]);
                if comps.vertex[self.base.init(e1)] != comps.vertex[self.base.init(e2)] {
                    report.push(Violation::GloballyInconsistent(e1, e2));
                }
            }
        }
        let vg = &graphs.vertex_graph;
        for class in classes.iter().filter(|c| c.len() > 1) {
            for &e in class {
                let labels = components_without(vg, 2 * e);
                let first = labels[self.base.init(class[0])];
                if let Some(&e2) = class
                    .iter()
                    .find(|&&e2| labels[self.base.init(e2)] != first)
                {
                    report.push(Violation::LocallyInconsistent {
                        edge: e,
                        e1: class[0],
                        e2,
                    });
                }
            }
        }
        report
    }

    pub fn is_origami(&self) -> bool {
        self.violations().is_empty()
    }

    /// Vertex graph and edge graph are both forests.
    pub fn is_essential(&self) -> Result<bool, OrigamiError> {
        self.require_origami()?;
        Ok(self.graphs_are_forests())
    }

    pub(crate) fn graphs_are_forests(&self) -> bool {
        let g = self.graphs();
        is_forest(&g.edge_graph) && is_forest(&g.vertex_graph)
    }

    pub(crate) fn require_origami(&self) -> Result<(), OrigamiError> {
        let report = self.violations();
        if report.is_empty() {
            Ok(())
        } else {
            Err(OrigamiError::NotAnOrigami(report))
        }
    }

    pub(crate) fn require_essential(&self) -> Result<(), OrigamiError> {
        if self.is_essential()? {
            Ok(())
        } else {
            Err(OrigamiError::OrigamiNotEssential)
        }
    }

    /// Vertices of `Δ/Ω` are components of `V_Ω`, edges are components of
    /// `E_Ω`, and `q` sends each edge and vertex to its component. Both are
    /// numbered in order of least base vertex or edge.
    pub fn quotient(&self) -> Result<QuotientResult, OrigamiError> {
        self.require_origami()?;
        Ok(self.quotient_unchecked())
    }

    pub(crate) fn quotient_unchecked(&self) -> QuotientResult {
        let comps = self.components();
        let q = quotient_by(
            &self.base,
            &Partition::from_labels(&comps.vertex),
            &Partition::from_labels(&comps.edge),
        );
        QuotientResult {
            quotient: q.codomain().clone(),
            q,
        }
    }

    /// Conditions (i)–(iii) for `f` to factor through `q` with an immersion.
    pub fn is_compatible(&self, f: &GraphMorphism) -> Result<bool, OrigamiError> {
        if f.domain() != &self.base {
            return Err(OrigamiError::DomainMismatch);
        }
        let comps = self.components();
        Ok(compatible_with_components(&self.base, &comps, f))
    }
}

pub(crate) fn compatible_with_components(
    base: &SerreGraph,
    comps: &Components,
    f: &GraphMorphism,
) -> bool {
    // (i) edges in one E_Ω component share their image
    let mut edge_image: HashMap<usize, Edge> = HashMap::new();
    for e in base.edges() {
        if *edge_image.entry(comps.edge[e]).or_insert(f.edge(e)) != f.edge(e) {
            return false;
        }
    }
    // (ii) vertices in one V_Ω component share their image
    let mut vertex_image: HashMap<usize, Vertex> = HashMap::new();
    for v in base.vertices() {
        if *vertex_image.entry(comps.vertex[v]).or_insert(f.vertex(v)) != f.vertex(v) {
            return false;
        }
    }
    // (iii) equal image and V_Ω-related initial vertices force one E_Ω component
    let mut by_image: HashMap<(Edge, usize), usize> = HashMap::new();
    for e in base.edges() {
        let key = (f.edge(e), comps.vertex[base.init(e)]);
        if *by_image.entry(key).or_insert(comps.edge[e]) != comps.edge[e] {
            return false;
        }
    }
    true
}

pub(crate) fn is_forest(g: &SerreGraph) -> bool {
    let mut uf = UnionFind::new(g.vertex_count());
    g.geometric_edges().all(|e| uf.union(g.init(e), g.term(e)))
}

/// Component labels of `g` with the geometric edge of `removed` deleted.
fn components_without(g: &SerreGraph, removed: Edge) -> Vec<usize> {
    let skip = removed.min(g.inv(removed));
    let mut uf = UnionFind::new(g.vertex_count());
    for e in g.geometric_edges() {
        if e != skip {
            uf.union(g.init(e), g.term(e));
        }
    }
    uf.labels()
}

/// Decides whether two origamis are isomorphic: some isomorphism of base
/// graphs carries one open relation onto the other.
pub fn origamis_isomorphic(a: &Origami, b: &Origami) -> bool {
    if a.open.class_count() != b.open.class_count() {
        return false;
    }
    let mut sa: Vec<usize> = a.open.classes().iter().map(Vec::len).collect();
    let mut sb: Vec<usize> = b.open.classes().iter().map(Vec::len).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    find_isomorphism_accepting(
        &a.base,
        &b.base,
        |_, _| true,
        |iso| a.open.push_forward(&iso.edge_map, b.base.edge_count()) == b.open,
    )
    .is_some()
}

//! Vertex blocks and edge blocks over a branched complex `X`: the finite
//! local models out of which folded essential maps with origamis are built.
//!
//! A vertex block is stored rigidly inside `Lk_X(x)`. Its upper link `L` is
//! bijective on edges onto a subgraph of the link, so each vertex of `L` is
//! pinned down by the set of oriented link edges ending at it. Those sets
//! are disjoint, which makes a sorted list of them a canonical form:
//! isomorphism over the identity of `Lk_X(x)` is plain equality.

mod enumerate;
mod induced;

use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{BranchedComplex, ComplexError, LinkPredicate, MapError};
use crate::lp::{int, Rational};
use crate::origami::OrigamiError;
use crate::partition::{Partition, UnionFind};
use crate::serre_graph::{Edge, GraphBuilder, SerreGraph, Vertex};

pub use enumerate::{enumerate_vertex_blocks, BlockCatalogue, DEFAULT_BUDGET};
pub use induced::{induced_vertex_block, induced_vertex_blocks, is_pi_complex, phi_map};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("enumeration at vertex {vertex} exceeded the budget of {budget} candidates")]
    EnumerationBudgetExceeded { vertex: Vertex, budget: u64 },
    #[error("edge {edge} does not start at the block's base vertex {vertex}")]
    EdgeNotAtBaseVertex { edge: Edge, vertex: Vertex },
    #[error("vertex {0} has a link outside the predicate class")]
    NotPiComplex(Vertex),
    #[error("origami is not compatible with the map")]
    IncompatibleOrigami,
    #[error("origami is not essential")]
    NotEssentialOrigami,
    #[error("induced block at quotient vertex {0} is invalid: {1:?}")]
    InvalidInducedBlock(Vertex, Vec<BlockViolation>),
    #[error("induced block at quotient vertex {0} is missing from the enumeration")]
    BlockNotEnumerated(Vertex),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Origami(#[from] OrigamiError),
}

/// A vertex of the upper link `L(β)`: a copy of the link vertex
/// `link_vertex` (an edge of `X` leaving the base vertex), carrying the
/// oriented link edges that end at it. Link edges are named by the boundary
/// edges of `X` they correspond to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkVertex {
    pub ends: Vec<Edge>,
    pub link_vertex: Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexBlock {
    base: Vertex,
    lverts: Vec<LinkVertex>,
    open: Partition,
    closed: Partition,
}

/// What fails in a candidate vertex block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockViolation {
    Malformed(String),
    /// A component of `L(β)`, named by its least vertex, is outside `Π`.
    ComponentRejected(usize),
    VertexGraphNotTree,
    EdgeGraphNotForest,
    /// `v1, v2 ∈ [v]_O` but `v` separates their components in `V_β`.
    Separation { v: usize, v1: usize, v2: usize },
    /// Two copies of one link vertex lie in different components of `E_β`.
    FibreSplit(Edge),
    /// One component of `E_β` meets copies of two different link vertices,
    /// so no edge of `X` can receive it.
    FibreMixed(Edge, Edge),
}

/// `L(β)` as a graph. Vertex `i` is `lverts[i]`; geometric edge `k` is the
/// corner `corners[k]`, with oriented edge `2k` ending at the copy holding
/// the first outgoing boundary edge of the corner.
#[derive(Clone, Debug)]
pub struct UpperLink {
    pub graph: SerreGraph,
    pub corners: Vec<Vertex>,
    pub component: Vec<usize>,
    pub component_count: usize,
}

impl VertexBlock {
    /// Canonicalises: sorts each end set and the copies, and relabels the
    /// two relations accordingly. `open` and `closed` are indexed like
    /// `lverts` on input.
    pub fn new(base: Vertex, lverts: Vec<LinkVertex>, open: &Partition, closed: &Partition) -> Self {
        assert_eq!(open.len(), lverts.len(), "open relation size");
        assert_eq!(closed.len(), lverts.len(), "closed relation size");
        let mut tagged: Vec<(LinkVertex, usize)> = lverts
            .into_iter()
            .enumerate()
            .map(|(i, mut lv)| {
                lv.ends.sort_unstable();
                (lv, i)
            })
            .collect();
        tagged.sort();
        let perm: Vec<usize> = tagged.iter().map(|(_, i)| *i).collect();
        let relabel = |p: &Partition| {
            let raw: Vec<usize> = perm.iter().map(|&i| p.class_of(i)).collect();
            Partition::from_labels(&raw)
        };
        VertexBlock {
            base,
            open: relabel(open),
            closed: relabel(closed),
            lverts: tagged.into_iter().map(|(lv, _)| lv).collect(),
        }
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn lverts(&self) -> &[LinkVertex] {
        &self.lverts
    }

    pub fn open(&self) -> &Partition {
        &self.open
    }

    pub fn closed(&self) -> &Partition {
        &self.closed
    }

    /// Index of the copy holding the end `s`, if any.
    pub fn lvert_of_end(&self, s: Edge) -> Option<usize> {
        self.lverts.iter().position(|lv| lv.ends.contains(&s))
    }

    /// All ends, i.e. the oriented edges of `L(β)` as boundary edges of `X`.
    pub fn ends(&self) -> impl Iterator<Item = Edge> + '_ {
        self.lverts.iter().flat_map(|lv| lv.ends.iter().copied())
    }

    /// Builds `L(β)`. Assumes the block is well formed.
    pub fn upper_link(&self, x: &BranchedComplex) -> UpperLink {
        let s = x.boundary();
        let mut corners: Vec<Vertex> = self.ends().map(|e| s.init(e)).collect();
        corners.sort_unstable();
        corners.dedup();
        let mut b = GraphBuilder::with_vertices(self.lverts.len());
        for &c in &corners {
            let (a, a2) = (s.link(c)[0], s.link(c)[1]);
            let head = self.lvert_of_end(a).expect("well formed");
            let tail = self.lvert_of_end(a2).expect("well formed");
            b.add_edge(tail, head);
        }
        let graph = b.build();
        let labels = graph.component_labels();
        let component = Partition::from_labels(&labels);
        UpperLink {
            component_count: component.class_count(),
            component: component.labels().to_vec(),
            corners,
            graph,
        }
    }

    /// `Σ Area(f(s))/l(f(s))` over the oriented edges `s` of `L(β)`.
    pub fn area_coefficient(&self, x: &BranchedComplex) -> Rational {
        self.ends()
            .map(|s| {
                let f = x.face_of_edge(s);
                &x.areas()[f] / int(x.face_length(f) as i64)
            })
            .sum()
    }

    /// `#π0(L(β)) − #V(L(β))/2`.
    pub fn chi_coefficient(&self, x: &BranchedComplex) -> Rational {
        let comps = self.upper_link(x).component_count;
        int(comps as i64) - Rational::new(self.lverts.len().into(), 2.into())
    }

    /// Stable textual form, equal for equal blocks.
    pub fn canonical_key(&self) -> String {
        let mut out = format!("x{}", self.base);
        for lv in &self.lverts {
            let ends: Vec<String> = lv.ends.iter().map(|e| e.to_string()).collect();
            let _ = write!(out, " {}:{}", lv.link_vertex, ends.join(","));
        }
        let labels = |p: &Partition| p.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        let _ = write!(out, " O[{}] C[{}]", labels(&self.open), labels(&self.closed));
        out
    }
}

/// Checks well-formedness and conditions (i)–(vi), the last in its strong
/// form: the components of `E_β` are exactly the fibres over the vertices of
/// `Lk_X(x_β)`. Conditions (ii) and (iii) hold by construction once the block
/// is well formed.
pub fn validate_vertex_block(
    x: &BranchedComplex,
    pred: &LinkPredicate,
    b: &VertexBlock,
) -> Vec<BlockViolation> {
    let malformed = |m: String| vec![BlockViolation::Malformed(m)];
    if b.base >= x.skeleton().vertex_count() {
        return malformed(format!("base vertex {} out of range", b.base));
    }
    let (gamma, s) = (x.skeleton(), x.boundary());
    let n = b.lverts.len();
    if n == 0 {
        return malformed("no link vertices".into());
    }
    if b.open.len() != n || b.closed.len() != n {
        return malformed("relation sizes differ from the link vertex count".into());
    }
    let mut seen = std::collections::HashSet::new();
    for lv in &b.lverts {
        if lv.ends.is_empty() {
            return malformed(format!("copy of {} has no ends", lv.link_vertex));
        }
        if lv.link_vertex >= gamma.edge_count() || gamma.init(lv.link_vertex) != b.base {
            return malformed(format!("{} is not a link vertex at the base", lv.link_vertex));
        }
        for &e in &lv.ends {
            if e >= s.edge_count() || x.attach().edge(e) != lv.link_vertex {
                return malformed(format!("end {e} does not lie over {}", lv.link_vertex));
            }
            if !seen.insert(e) {
                return malformed(format!("end {e} is used twice"));
            }
        }
    }
    // each link edge present with both of its ends
    for e in b.ends() {
        let c = s.init(e);
        if s.link(c).iter().any(|a| !seen.contains(a)) {
            return malformed(format!("corner {c} has only one end in the block"));
        }
    }

    let mut report = Vec::new();
    let ul = b.upper_link(x);
    for comp in 0..ul.component_count {
        let keep: Vec<bool> = ul.component.iter().map(|&c| c == comp).collect();
        let (g, old, _) = ul.graph.induced_subgraph(&keep);
        if !pred.accepts(&g) {
            report.push(BlockViolation::ComponentRejected(old[0]));
        }
    }
    let (open, closed) = (&b.open, &b.closed);
    let nc = ul.component_count;
    let vb_nodes = nc + closed.class_count();
    let vertex_tree = {
        let mut uf = UnionFind::new(vb_nodes);
        let acyclic = (0..n).all(|i| uf.union(ul.component[i], nc + closed.class_of(i)));
        acyclic && uf.set_count() == 1
    };
    if !vertex_tree {
        report.push(BlockViolation::VertexGraphNotTree);
    }
    let no = open.class_count();
    let mut euf = UnionFind::new(no + closed.class_count());
    if !(0..n).all(|i| euf.union(open.class_of(i), no + closed.class_of(i))) {
        report.push(BlockViolation::EdgeGraphNotForest);
    }
    if vertex_tree {
        report.extend(separations(&ul.component, nc, closed, open));
    }
    // (vi), strong form
    for i in 0..n {
        for j in i + 1..n {
            let (a, c) = (b.lverts[i].link_vertex, b.lverts[j].link_vertex);
            let joined = euf.same(open.class_of(i), open.class_of(j));
            if a == c && !joined {
                report.push(BlockViolation::FibreSplit(a));
            } else if a != c && joined {
                report.push(BlockViolation::FibreMixed(a, c));
            }
        }
    }
    report.dedup();
    report
}

/// Condition (v) on a tree `V_β`: for every copy `v`, the components of all
/// copies open-equivalent to `v` lie on one side of the edge `v`.
fn separations(component: &[usize], nc: usize, closed: &Partition, open: &Partition) -> Vec<BlockViolation> {
    let n = component.len();
    let mut out = Vec::new();
    for v in 0..n {
        let mut uf = UnionFind::new(nc + closed.class_count());
        for i in (0..n).filter(|&i| i != v) {
            uf.union(component[i], nc + closed.class_of(i));
        }
        let class: Vec<usize> = (0..n).filter(|&w| open.same(v, w)).collect();
        for (k, &v1) in class.iter().enumerate() {
            for &v2 in &class[k + 1..] {
                if !uf.same(component[v1], component[v2]) {
                    out.push(BlockViolation::Separation { v, v1, v2 });
                }
            }
        }
    }
    out
}

/// An edge block: the parts of a vertex block lying over an edge `e` of `X`.
/// Each part is a set of boundary edges over `e`; the relations act on the
/// parts. Canonical like vertex blocks: parts sorted, relations relabelled.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeBlock {
    base_edge: Edge,
    parts: Vec<Vec<Edge>>,
    open: Partition,
    closed: Partition,
}

impl EdgeBlock {
    pub fn new(base_edge: Edge, parts: Vec<Vec<Edge>>, open: &Partition, closed: &Partition) -> Self {
        let mut tagged: Vec<(Vec<Edge>, usize)> = parts
            .into_iter()
            .enumerate()
            .map(|(i, mut p)| {
                p.sort_unstable();
                (p, i)
            })
            .collect();
        tagged.sort();
        let relabel = |p: &Partition| {
            let raw: Vec<usize> = tagged.iter().map(|(_, i)| p.class_of(*i)).collect();
            Partition::from_labels(&raw)
        };
        EdgeBlock {
            base_edge,
            open: relabel(open),
            closed: relabel(closed),
            parts: tagged.into_iter().map(|(p, _)| p).collect(),
        }
    }

    pub fn base_edge(&self) -> Edge {
        self.base_edge
    }

    pub fn parts(&self) -> &[Vec<Edge>] {
        &self.parts
    }

    pub fn open(&self) -> &Partition {
        &self.open
    }

    pub fn closed(&self) -> &Partition {
        &self.closed
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `L(γ)`, increasing.
    pub fn support(&self) -> Vec<Edge> {
        let mut all: Vec<Edge> = self.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }
}

/// `γ_β(e)`: parts are the end sets of the copies of `e` in `L(β)`, with
/// both relations pulled back from `β`.
pub fn induced_edge_block(x: &BranchedComplex, b: &VertexBlock, e: Edge) -> Result<EdgeBlock, BlockError> {
    if e >= x.skeleton().edge_count() {
        return Err(ComplexError::UnknownEdge(e).into());
    }
    if x.skeleton().init(e) != b.base {
        return Err(BlockError::EdgeNotAtBaseVertex {
            edge: e,
            vertex: b.base,
        });
    }
    let over: Vec<usize> = (0..b.lverts.len()).filter(|&i| b.lverts[i].link_vertex == e).collect();
    Ok(EdgeBlock::new(
        e,
        over.iter().map(|&i| b.lverts[i].ends.clone()).collect(),
        &b.open.restrict(&over),
        &b.closed.restrict(&over),
    ))
}

/// `γ̄`: over `ē`, parts carried across by the boundary involution, with the
/// open and closed relations exchanged.
pub fn opposite_edge_block(x: &BranchedComplex, g: &EdgeBlock) -> EdgeBlock {
    let s = x.boundary();
    EdgeBlock::new(
        x.skeleton().inv(g.base_edge),
        g.parts.iter().map(|p| p.iter().map(|&a| s.inv(a)).collect()).collect(),
        &g.closed,
        &g.open,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::torus;

    /// The unique block of the torus: its whole link, relations discrete.
    pub(crate) fn torus_block(x: &BranchedComplex) -> VertexBlock {
        let gamma = x.skeleton();
        let lverts = gamma
            .link(0)
            .iter()
            .map(|&e| LinkVertex {
                link_vertex: e,
                ends: x.edge_link(e).unwrap(),
            })
            .collect::<Vec<_>>();
        let n = lverts.len();
        VertexBlock::new(0, lverts, &Partition::discrete(n), &Partition::discrete(n))
    }

    #[test]
    fn torus_block_is_valid() {
        let x = torus();
        let b = torus_block(&x);
        assert!(validate_vertex_block(&x, &LinkPredicate::Surface, &b).is_empty());
        assert_eq!(b.area_coefficient(&x), int(1));
        assert_eq!(b.chi_coefficient(&x), int(-1));
        let ul = b.upper_link(&x);
        assert_eq!(ul.graph.edge_count(), 8);
        assert_eq!(ul.component_count, 1);
    }

    #[test]
    fn canonical_form_ignores_input_order() {
        let x = torus();
        let b = torus_block(&x);
        let mut lverts = b.lverts().to_vec();
        lverts.reverse();
        for lv in &mut lverts {
            lv.ends.reverse();
        }
        let again = VertexBlock::new(0, lverts, &Partition::discrete(4), &Partition::discrete(4));
        assert_eq!(again, b);
        assert_eq!(again.canonical_key(), b.canonical_key());
    }

    #[test]
    fn broken_blocks_are_reported() {
        let x = torus();
        let b = torus_block(&x);
        // one closed class: four parallel edges in V_β
        let merged = VertexBlock::new(0, b.lverts().to_vec(), &Partition::discrete(4), &Partition::indiscrete(4));
        let report = validate_vertex_block(&x, &LinkPredicate::Surface, &merged);
        assert!(report.contains(&BlockViolation::VertexGraphNotTree));
        assert!(report.iter().any(|v| matches!(v, BlockViolation::FibreMixed(..))));
        // open relation across fibres
        let mixed = VertexBlock::new(0, b.lverts().to_vec(), &Partition::indiscrete(4), &Partition::discrete(4));
        let report = validate_vertex_block(&x, &LinkPredicate::Surface, &mixed);
        assert!(report.iter().any(|v| matches!(v, BlockViolation::FibreMixed(..))));
        // a path is not a circle
        let mut path = b.lverts().to_vec();
        path[0].ends.pop();
        let report = validate_vertex_block(
            &x,
            &LinkPredicate::Surface,
            &VertexBlock::new(0, path, &Partition::discrete(4), &Partition::discrete(4)),
        );
        assert!(matches!(report[0], BlockViolation::Malformed(_)));
    }

    #[test]
    fn edge_blocks_and_opposites() {
        let x = torus();
        let b = torus_block(&x);
        for &e in x.skeleton().link(0) {
            let g = induced_edge_block(&x, &b, e).unwrap();
            assert_eq!(g.parts().len(), 1);
            assert_eq!(g.support(), x.edge_link(e).unwrap());
            let opp = opposite_edge_block(&x, &g);
            assert_eq!(opp, induced_edge_block(&x, &b, x.skeleton().inv(e)).unwrap());
            assert_eq!(opposite_edge_block(&x, &opp), g);
        }
        let empty = EdgeBlock::new(0, vec![], &Partition::discrete(0), &Partition::discrete(0));
        let opp = opposite_edge_block(&x, &empty);
        assert!(opp.is_empty() && opp.base_edge() == 1);
    }

    #[test]
    fn pulled_back_relations_are_swapped_by_opposites() {
        let x = torus();
        let g = EdgeBlock::new(
            0,
            vec![vec![0], vec![4]],
            &Partition::indiscrete(2),
            &Partition::discrete(2),
        );
        let opp = opposite_edge_block(&x, &g);
        assert_eq!(opp.open(), &Partition::discrete(2));
        assert_eq!(opp.closed(), &Partition::indiscrete(2));
    }
}

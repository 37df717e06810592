use thiserror::Error;

use super::graph::{betti, Edge, SerreGraph, Vertex};
use super::morphism::GraphMorphism;
use crate::partition::{Partition, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoldError {
    #[error("edges {0} and {1} cannot be folded")]
    NotFoldable(Edge, Edge),
    #[error("edge {0} is a loop; unfolding a loop is not supported")]
    LoopUnfold(Edge),
    #[error("edge {edge} is not in the link of the vertex being split")]
    NotInLink { edge: Edge },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("domain is not a core graph")]
    DomainNotCore,
    #[error("domain is not connected")]
    DomainNotConnected,
}

/// A single Stallings fold `Δ -> Δ'` identifying `a1` with `a2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub a1: Edge,
    pub a2: Edge,
    /// The edge `a` of the result that `a1` and `a2` map to.
    pub merged_edge: Edge,
    /// `τ(a1) != τ(a2)`; such folds are homotopy equivalences.
    pub essential: bool,
    projection: GraphMorphism,
}

impl Fold {
    pub fn source(&self) -> &SerreGraph {
        self.projection.domain()
    }

    pub fn result(&self) -> &SerreGraph {
        self.projection.codomain()
    }

    pub fn projection(&self) -> &GraphMorphism {
        &self.projection
    }

    pub fn edge(&self, e: Edge) -> Edge {
        self.projection.edge(e)
    }

    pub fn vertex(&self, v: Vertex) -> Vertex {
        self.projection.vertex(v)
    }

    /// `τ(a1)` and `τ(a2)` in the source.
    pub fn termini(&self) -> (Vertex, Vertex) {
        (self.source().term(self.a1), self.source().term(self.a2))
    }
}

/// Quotient of `g` by compatible vertex and edge partitions. The caller must
/// ensure that related edges have related initial vertices and related
/// inverses, and that no edge becomes related to its inverse.
pub(crate) fn quotient_by(g: &SerreGraph, vertices: &Partition, edges: &Partition) -> GraphMorphism {
    let n = vertices.class_count();
    let m = edges.class_count();
    let mut init = vec![usize::MAX; m];
    let mut inv = vec![usize::MAX; m];
    for e in g.edges() {
        let c = edges.class_of(e);
        init[c] = vertices.class_of(g.init(e));
        inv[c] = edges.class_of(g.inv(e));
    }
    let q = SerreGraph::from_parts(n, init, inv);
    debug_assert!(q.validate().is_empty());
    GraphMorphism::from_parts_unchecked(
        g.clone(),
        q,
        vertices.labels().to_vec(),
        edges.labels().to_vec(),
    )
}

/// Folds `a1` and `a2`, which must be distinct, non-inverse, and share
/// their initial vertex.
pub fn fold(g: &SerreGraph, a1: Edge, a2: Edge) -> Result<Fold, FoldError> {
    let m = g.edge_count();
    if a1 >= m || a2 >= m || a1 == a2 || g.init(a1) != g.init(a2) || a2 == g.inv(a1) {
        return Err(FoldError::NotFoldable(a1, a2));
    }
    let (v1, v2) = (g.term(a1), g.term(a2));
    let mut vuf = UnionFind::new(g.vertex_count());
    vuf.union(v1, v2);
    let mut euf = UnionFind::new(m);
    euf.union(a1, a2);
    euf.union(g.inv(a1), g.inv(a2));
    let projection = quotient_by(g, &vuf.into_partition(), &euf.into_partition());
    Ok(Fold {
        a1,
        a2,
        merged_edge: projection.edge(a1),
        essential: v1 != v2,
        projection,
    })
}

/// Inverse of an essential fold. Given `Δ'`, a non-loop edge `a` with
/// `v = τ(a)`, and a set `side` of edges in `Lk(v) ∖ {ā}`, builds `Δ` by
/// splitting `v` into `v1` (keeping the remaining link edges) and a new vertex
/// `v2` carrying `side`, and doubling `a` into `a1 = a` ending at `v1` and a
/// new edge `a2` ending at `v2`. The returned fold `Δ -> Δ'` folds `a1, a2`
/// and its result is exactly `Δ'`.
pub fn unfold_edge(target: &SerreGraph, a: Edge, side: &[Edge]) -> Result<Fold, FoldError> {
    if a >= target.edge_count() {
        return Err(FoldError::NotInLink { edge: a });
    }
    let v = target.term(a);
    if target.init(a) == v {
        return Err(FoldError::LoopUnfold(a));
    }
    let abar = target.inv(a);
    let (n, m) = (target.vertex_count(), target.edge_count());
    let mut init = target.init_map().to_vec();
    let mut inv = target.inv_map().to_vec();
    for &b in side {
        if b >= m || b == abar || target.init(b) != v {
            return Err(FoldError::NotInLink { edge: b });
        }
        init[b] = n;
    }
    init.push(target.init(a));
    init.push(n);
    inv.push(m + 1);
    inv.push(m);
    let source = SerreGraph::from_parts(n + 1, init, inv);
    let f = fold(&source, a, m)?;
    debug_assert_eq!(f.result(), target);
    debug_assert!(f.essential);
    Ok(f)
}

/// Output of Stallings folding: `f = fbar ∘ f0`, `f0` the composite of
/// `folds`, and `fbar` an immersion.
#[derive(Clone, Debug)]
pub struct StallingsFolding {
    pub folds: Vec<Fold>,
    pub folded: SerreGraph,
    pub f0: GraphMorphism,
    pub fbar: GraphMorphism,
}

impl StallingsFolding {
    pub fn all_essential(&self) -> bool {
        self.folds.iter().all(|f| f.essential)
    }
}

/// Folds `f` until it is an immersion, always folding the lexicographically
/// least pair `(a1, a2)`, `a1 < a2`, with common initial vertex and image.
pub fn stallings_fold(f: &GraphMorphism) -> StallingsFolding {
    let domain = f.domain().clone();
    let mut current = domain.clone();
    let mut h_vertex = f.vertex_map().to_vec();
    let mut h_edge = f.edge_map().to_vec();
    let mut f0_vertex: Vec<Vertex> = domain.vertices().collect();
    let mut f0_edge: Vec<Edge> = domain.edges().collect();
    let mut folds = Vec::new();
    while let Some((a1, a2)) = least_foldable_pair(&current, &h_edge) {
        let step = fold(&current, a1, a2).expect("foldable pair");
        let p = step.projection();
        let mut nv = vec![0; p.codomain().vertex_count()];
        for v in current.vertices() {
            nv[p.vertex(v)] = h_vertex[v];
        }
        let mut ne = vec![0; p.codomain().edge_count()];
        for e in current.edges() {
            ne[p.edge(e)] = h_edge[e];
        }
        h_vertex = nv;
        h_edge = ne;
        for v in f0_vertex.iter_mut() {
            *v = p.vertex(*v);
        }
        for e in f0_edge.iter_mut() {
            *e = p.edge(*e);
        }
        current = step.result().clone();
        folds.push(step);
    }
    let f0 = GraphMorphism::from_parts_unchecked(domain, current.clone(), f0_vertex, f0_edge);
    let fbar =
        GraphMorphism::from_parts_unchecked(current.clone(), f.codomain().clone(), h_vertex, h_edge);
    debug_assert!(fbar.is_immersion());
    StallingsFolding {
        folds,
        folded: current,
        f0,
        fbar,
    }
}

fn least_foldable_pair(g: &SerreGraph, image: &[Edge]) -> Option<(Edge, Edge)> {
    g.edges().find_map(|a1| {
        g.link(g.init(a1))
            .iter()
            .find(|&&a2| a2 > a1 && image[a2] == image[a1])
            .map(|&a2| (a1, a2))
    })
}

/// Decides π1-injectivity of a morphism from a connected core graph by
/// comparing first Betti numbers before and after folding.
pub fn pi1_injective_oracle(f: &GraphMorphism) -> Result<bool, OracleError> {
    let d = f.domain();
    if !d.is_connected() {
        return Err(OracleError::DomainNotConnected);
    }
    if !d.is_core() {
        return Err(OracleError::DomainNotCore);
    }
    let folded = stallings_fold(f);
    Ok(betti(d).total == betti(&folded.folded).total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::serre_graph::graph::{cycle, find_isomorphism, path, rose, GraphBuilder};

    fn fig1() -> SerreGraph {
        // u = 0 with a1: 0 -> 1 and a2: 0 -> 2, plus a tail at each end
        let mut b = GraphBuilder::with_vertices(5);
        b.add_edge(0, 1);
        b.add_edge(0, 2);
        b.add_edge(1, 3);
        b.add_edge(2, 4);
        b.build()
    }

    #[test]
    fn essential_fold() {
        let g = fig1();
        let f = fold(&g, 0, 2).unwrap();
        assert!(f.essential);
        assert_eq!(f.result().edge_count(), g.edge_count() - 2);
        assert_eq!(f.result().vertex_count(), g.vertex_count() - 1);
        assert_eq!(f.edge(0), f.edge(2));
        assert_eq!(f.edge(1), f.edge(3));
        assert_eq!(f.merged_edge, f.edge(0));
        assert!(!f.projection().is_immersion());
        assert_eq!(f.projection().first_non_injective_link(), Some(0));
    }

    #[test]
    fn inessential_fold_on_rose() {
        let f = fold(&rose(2), 0, 2).unwrap();
        assert!(!f.essential);
        assert_eq!(f.result(), &rose(1));
    }

    #[test]
    fn fold_preconditions() {
        let g = fig1();
        assert_eq!(fold(&g, 0, 0), Err(FoldError::NotFoldable(0, 0)));
        assert_eq!(fold(&g, 0, 4), Err(FoldError::NotFoldable(0, 4)));
        assert_eq!(fold(&rose(1), 0, 1), Err(FoldError::NotFoldable(0, 1)));
    }

    /// The circle with 2n edges mapped onto a path with n edges, going out
    /// and back.
    fn circle_onto_path(n: usize) -> GraphMorphism {
        let dom = cycle(2 * n);
        let cod = path(n);
        let emap = (0..2 * n)
            .flat_map(|i| {
                if i < n {
                    [2 * i, 2 * i + 1]
                } else {
                    let j = 2 * n - 1 - i;
                    [2 * j + 1, 2 * j]
                }
            })
            .collect();
        GraphMorphism::from_edge_map(dom, cod, emap, |_| 0).unwrap()
    }

    #[test]
    fn circle_folds_to_path() {
        for n in 1..6 {
            let s = stallings_fold(&circle_onto_path(n));
            assert_eq!(s.folds.len(), n);
            assert!(find_isomorphism(&s.folded, &path(n)).is_some());
            assert!(s.fbar.is_immersion());
            // only the last fold closes up the circle
            assert_eq!(s.folds.iter().filter(|f| !f.essential).count(), 1);
        }
    }

    #[test]
    fn folding_factorizes() {
        let f = circle_onto_path(3);
        let s = stallings_fold(&f);
        assert_eq!(s.f0.then(&s.fbar).unwrap(), f);
        let mut composite = GraphMorphism::identity(f.domain());
        for step in &s.folds {
            composite = composite.then(step.projection()).unwrap();
        }
        assert_eq!(composite, s.f0);
    }

    #[test]
    fn immersion_needs_no_folds() {
        let f = GraphMorphism::identity(&rose(2));
        let s = stallings_fold(&f);
        assert!(s.folds.is_empty());
        assert_eq!(s.f0, f);
    }

    #[test]
    fn rose_collapse() {
        let f = GraphMorphism::from_edge_map(rose(2), rose(1), vec![0, 1, 0, 1], |_| 0).unwrap();
        let s = stallings_fold(&f);
        assert_eq!(s.folds.len(), 1);
        assert_eq!(s.folded, rose(1));
        assert!(s.fbar.is_immersion());
        assert_eq!(pi1_injective_oracle(&f), Ok(false));
    }

    #[test]
    fn oracle_cases() {
        let cover = {
            let dom = cycle(8);
            let emap = dom.edges().map(|e| e % 8).collect();
            GraphMorphism::from_edge_map(dom, cycle(4), emap, |_| 0).unwrap()
        };
        assert_eq!(pi1_injective_oracle(&cover), Ok(true));
        assert_eq!(pi1_injective_oracle(&GraphMorphism::identity(&rose(3))), Ok(true));
        assert_eq!(
            pi1_injective_oracle(&GraphMorphism::identity(&path(2))),
            Err(OracleError::DomainNotCore)
        );
        let two = cycle(2).disjoint_union(&cycle(3));
        assert_eq!(
            pi1_injective_oracle(&GraphMorphism::identity(&two)),
            Err(OracleError::DomainNotConnected)
        );
    }

    #[test]
    fn unfold_inverts_fold() {
        let g = cycle(3);
        // split vertex 1 = τ(edge 0); link of 1 is {1, 2}; move edge 2 away
        let f = unfold_edge(&g, 0, &[2]).unwrap();
        assert!(f.essential);
        assert_eq!(f.result(), &g);
        assert_eq!(f.source().vertex_count(), 4);
        assert_eq!(f.a1, 0);
        assert_eq!(f.termini(), (1, 3));
        assert_eq!(unfold_edge(&rose(1), 0, &[]), Err(FoldError::LoopUnfold(0)));
        assert_eq!(unfold_edge(&g, 0, &[1]), Err(FoldError::NotInLink { edge: 1 }));
    }
}

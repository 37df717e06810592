use std::collections::VecDeque;

use thiserror::Error;

use crate::partition::UnionFind;

pub type Vertex = usize;
pub type Edge = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0} is its own inverse")]
    FixedPointInvolution(Edge),
    #[error("edge {edge}: inverse of inverse is {back}, not the edge itself")]
    NonInvolutive { edge: Edge, back: Edge },
    #[error("edge {edge} refers to vertex {vertex}, which does not exist")]
    VertexOutOfRange { edge: Edge, vertex: Vertex },
    #[error("edge {edge} has inverse {inverse}, which does not exist")]
    InverseOutOfRange { edge: Edge, inverse: Edge },
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("unknown edge {0}")]
    UnknownEdge(Edge),
    #[error("graph is invalid: {0:?}")]
    Invalid(Vec<GraphError>),
}

/// Checks raw incidence data against the Serre graph axioms and returns every
/// violation found. An empty result means `SerreGraph::new` will accept it.
pub fn validate_graph(vertex_count: usize, init: &[Vertex], inv: &[Edge]) -> Vec<GraphError> {
    let mut report = Vec::new();
    let m = inv.len();
    for e in 0..m {
        if init.get(e).is_none_or(|&v| v >= vertex_count) {
            report.push(GraphError::VertexOutOfRange {
                edge: e,
                vertex: init.get(e).copied().unwrap_or(usize::MAX),
            });
        }
        let f = inv[e];
        if f >= m {
            report.push(GraphError::InverseOutOfRange { edge: e, inverse: f });
            continue;
        }
        if f == e {
            report.push(GraphError::FixedPointInvolution(e));
        } else if inv[f] != e {
            report.push(GraphError::NonInvolutive { edge: e, back: inv[f] });
        }
    }
    if init.len() != m {
        report.push(GraphError::InverseOutOfRange {
            edge: init.len().min(m),
            inverse: usize::MAX,
        });
    }
    report
}

/// A finite Serre graph: oriented edges with an initial-vertex map and a
/// fixed-point-free involution `e -> ē`. The terminus is `τ(e) = ι(ē)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SerreGraph {
    vertex_count: usize,
    init: Vec<Vertex>,
    inv: Vec<Edge>,
    links: Vec<Vec<Edge>>,
}

impl SerreGraph {
    pub fn new(vertex_count: usize, init: Vec<Vertex>, inv: Vec<Edge>) -> Result<Self, GraphError> {
        let mut report = validate_graph(vertex_count, &init, &inv);
        match report.len() {
            0 => Ok(Self::from_parts(vertex_count, init, inv)),
            1 => Err(report.pop().unwrap()),
            _ => Err(GraphError::Invalid(report)),
        }
    }

    pub(crate) fn from_parts(vertex_count: usize, init: Vec<Vertex>, inv: Vec<Edge>) -> Self {
        let mut links = vec![Vec::new(); vertex_count];
        for (e, &v) in init.iter().enumerate() {
            links[v].push(e);
        }
        SerreGraph {
            vertex_count,
            init,
            inv,
            links,
        }
    }

    pub fn empty() -> Self {
        Self::from_parts(0, Vec::new(), Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of oriented edges.
    pub fn edge_count(&self) -> usize {
        self.inv.len()
    }

    pub fn geometric_edge_count(&self) -> usize {
        self.inv.len() / 2
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count
    }

    pub fn edges(&self) -> std::ops::Range<Edge> {
        0..self.inv.len()
    }

    /// One representative `e < ē` per geometric edge.
    pub fn geometric_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges().filter(move |&e| e < self.inv[e])
    }

    pub fn init(&self, e: Edge) -> Vertex {
        self.init[e]
    }

    pub fn term(&self, e: Edge) -> Vertex {
        self.init[self.inv[e]]
    }

    pub fn inv(&self, e: Edge) -> Edge {
        self.inv[e]
    }

    pub fn init_map(&self) -> &[Vertex] {
        &self.init
    }

    pub fn inv_map(&self) -> &[Edge] {
        &self.inv
    }

    /// `Lk(v) = ι⁻¹(v)`, in increasing edge order.
    pub fn link(&self, v: Vertex) -> &[Edge] {
        &self.links[v]
    }

    pub fn try_link(&self, v: Vertex) -> Result<&[Edge], GraphError> {
        self.links
            .get(v)
            .map(Vec::as_slice)
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn valence(&self, v: Vertex) -> usize {
        self.links[v].len()
    }

    /// Re-checks the axioms; always empty for graphs built through `new`.
    pub fn validate(&self) -> Vec<GraphError> {
        let mut report = validate_graph(self.vertex_count, &self.init, &self.inv);
        for e in self.edges() {
            if self.term(e) != self.init[self.inv[e]] {
                report.push(GraphError::NonInvolutive {
                    edge: e,
                    back: self.inv[self.inv[e]],
                });
            }
        }
        report
    }

    /// Connected-component label of each vertex, numbered by least vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in self.edges() {
            uf.union(self.init(e), self.term(e));
        }
        uf.labels()
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// `#V − #geometric edges`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.geometric_edge_count() as i64
    }

    /// A core graph has no vertices of valence 0 or 1.
    pub fn is_core(&self) -> bool {
        self.vertices().all(|v| self.valence(v) >= 2)
    }

    /// Vertex-induced subgraph with vertices and edges renumbered in order.
    /// Returns the subgraph with the old ids of its vertices and edges.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (SerreGraph, Vec<Vertex>, Vec<Edge>) {
        let mut new_id = vec![usize::MAX; self.vertex_count];
        let mut old_vertices = Vec::new();
        for v in self.vertices() {
            if keep[v] {
                new_id[v] = old_vertices.len();
                old_vertices.push(v);
            }
        }
        let mut new_edge = vec![usize::MAX; self.edge_count()];
        let mut old_edges = Vec::new();
        for e in self.edges() {
            if keep[self.init(e)] && keep[self.term(e)] {
                new_edge[e] = old_edges.len();
                old_edges.push(e);
            }
        }
        let init = old_edges.iter().map(|&e| new_id[self.init(e)]).collect();
        let inv = old_edges.iter().map(|&e| new_edge[self.inv(e)]).collect();
        (
            SerreGraph::from_parts(old_vertices.len(), init, inv),
            old_vertices,
            old_edges,
        )
    }

    /// Disjoint union; the vertices and edges of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &SerreGraph) -> SerreGraph {
        let (n, m) = (self.vertex_count, self.edge_count());
        let mut init = self.init.clone();
        init.extend(other.init.iter().map(|v| v + n));
        let mut inv = self.inv.clone();
        inv.extend(other.inv.iter().map(|e| e + m));
        SerreGraph::from_parts(n + other.vertex_count, init, inv)
    }
}

/// Incremental construction. Each `add_edge` creates a pair `(e, e + 1)`.
#[derive(Default, Debug, Clone)]
pub struct GraphBuilder {
    vertex_count: usize,
    init: Vec<Vertex>,
    inv: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        GraphBuilder {
            vertex_count: n,
            ..Self::default()
        }
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    /// Adds a geometric edge from `u` to `v`; returns the edge `u -> v`.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Edge {
        assert!(u < self.vertex_count && v < self.vertex_count);
        let e = self.inv.len();
        self.init.push(u);
        self.init.push(v);
        self.inv.push(e + 1);
        self.inv.push(e);
        e
    }

    pub fn build(self) -> SerreGraph {
        SerreGraph::from_parts(self.vertex_count, self.init, self.inv)
    }
}

/// One vertex with `n` loops; loop `k` is edge `2k`, its inverse `2k + 1`.
pub fn rose(n: usize) -> SerreGraph {
    let mut b = GraphBuilder::with_vertices(1);
    for _ in 0..n {
        b.add_edge(0, 0);
    }
    b.build()
}

/// Circle with `n >= 1` vertices; edge `2i` goes from `i` to `i + 1 mod n`.
pub fn cycle(n: usize) -> SerreGraph {
    assert!(n >= 1);
    let mut b = GraphBuilder::with_vertices(n);
    for i in 0..n {
        b.add_edge(i, (i + 1) % n);
    }
    b.build()
}

/// Path with `n` edges and `n + 1` vertices.
pub fn path(n: usize) -> SerreGraph {
    let mut b = GraphBuilder::with_vertices(n + 1);
    for i in 0..n {
        b.add_edge(i, i + 1);
    }
    b.build()
}

/// Two vertices joined by three parallel edges `0 -> 1`.
pub fn theta() -> SerreGraph {
    let mut b = GraphBuilder::with_vertices(2);
    for _ in 0..3 {
        b.add_edge(0, 1);
    }
    b.build()
}

/// First Betti numbers of a finite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Betti {
    /// Per connected component, components numbered by least vertex.
    pub per_component: Vec<usize>,
    pub total: usize,
}

/// `b1 = #geometric edges − #vertices + #components`, per component and total.
pub fn betti(g: &SerreGraph) -> Betti {
    let labels = g.component_labels();
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut verts = vec![0i64; k];
    let mut edges = vec![0i64; k];
    for v in g.vertices() {
        verts[labels[v]] += 1;
    }
    for e in g.geometric_edges() {
        edges[labels[g.init(e)]] += 1;
    }
    let per_component: Vec<usize> = (0..k).map(|c| (edges[c] - verts[c] + 1) as usize).collect();
    Betti {
        total: per_component.iter().sum(),
        per_component,
    }
}

/// Repeatedly deletes vertices of valence 0 or 1 (with their edges).
pub fn core_of(g: &SerreGraph) -> SerreGraph {
    core_with_ids(g).0
}

/// `core_of`, also returning the old ids of the surviving vertices and edges.
pub fn core_with_ids(g: &SerreGraph) -> (SerreGraph, Vec<Vertex>, Vec<Edge>) {
    let mut keep = vec![true; g.vertex_count()];
    let mut valence: Vec<usize> = g.vertices().map(|v| g.valence(v)).collect();
    let mut queue: VecDeque<Vertex> = g.vertices().filter(|&v| valence[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !keep[v] {
            continue;
        }
        keep[v] = false;
        for &e in g.link(v) {
            let w = g.term(e);
            if keep[w] && w != v {
                valence[w] -= 1;
                if valence[w] <= 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    g.induced_subgraph(&keep)
}

/// An isomorphism of graphs given by vertex and edge bijections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIso {
    pub vertex_map: Vec<Vertex>,
    pub edge_map: Vec<Edge>,
}

/// Finds an isomorphism `g -> h` by backtracking over edge assignments,
/// or `None` if the graphs are not isomorphic.
pub fn find_isomorphism(g: &SerreGraph, h: &SerreGraph) -> Option<GraphIso> {
    find_isomorphism_with(g, h, |_, _| true)
}

/// As `find_isomorphism`, restricted to edge assignments accepted by
/// `edge_ok(g_edge, h_edge)`. Used to search for isomorphisms preserving
/// extra structure such as edge colourings.
pub fn find_isomorphism_with<F>(g: &SerreGraph, h: &SerreGraph, edge_ok: F) -> Option<GraphIso>
where
    F: Fn(Edge, Edge) -> bool,
{
    find_isomorphism_accepting(g, h, edge_ok, |_| true)
}

/// Searches all isomorphisms allowed by `edge_ok` and returns the first one
/// for which `accept` holds. Non-local structure (partitions of the edge set,
/// say) is checked through `accept`.
pub fn find_isomorphism_accepting<F, A>(
    g: &SerreGraph,
    h: &SerreGraph,
    edge_ok: F,
    accept: A,
) -> Option<GraphIso>
where
    F: Fn(Edge, Edge) -> bool,
    A: Fn(&GraphIso) -> bool,
{
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut gv: Vec<usize> = g.vertices().map(|v| g.valence(v)).collect();
    let mut hv: Vec<usize> = h.vertices().map(|v| h.valence(v)).collect();
    gv.sort_unstable();
    hv.sort_unstable();
    if gv != hv {
        return None;
    }
    let mut state = IsoSearch {
        g,
        h,
        vmap: vec![usize::MAX; g.vertex_count()],
        vused: vec![false; h.vertex_count()],
        emap: vec![usize::MAX; g.edge_count()],
        eused: vec![false; h.edge_count()],
        edge_ok: &edge_ok,
        accept: &accept,
    };
    if state.search() {
        Some(GraphIso {
            vertex_map: state.vmap,
            edge_map: state.emap,
        })
    } else {
        None
    }
}

struct IsoSearch<'a, F, A> {
    g: &'a SerreGraph,
    h: &'a SerreGraph,
    vmap: Vec<Vertex>,
    vused: Vec<bool>,
    emap: Vec<Edge>,
    eused: Vec<bool>,
    edge_ok: &'a F,
    accept: &'a A,
}

impl<F: Fn(Edge, Edge) -> bool, A: Fn(&GraphIso) -> bool> IsoSearch<'_, F, A> {
    fn search(&mut self) -> bool {
        // Extend along an unmapped edge at a mapped vertex if one exists.
        let frontier = self
            .g
            .edges()
            .find(|&e| self.emap[e] == usize::MAX && self.vmap[self.g.init(e)] != usize::MAX);
        if let Some(e) = frontier {
            let x = self.vmap[self.g.init(e)];
            let t = self.g.term(e);
            let candidates: Vec<Edge> = self.h.link(x).to_vec();
            for c in candidates {
                if self.eused[c] || !(self.edge_ok)(e, c) {
                    continue;
                }
                let ebar = self.g.inv(e);
                let cbar = self.h.inv(c);
                if self.eused[cbar] && self.emap[ebar] != cbar {
                    continue;
                }
                if ebar != e && !(self.edge_ok)(ebar, cbar) {
                    continue;
                }
                let ct = self.h.term(c);
                let new_vertex = if self.vmap[t] == usize::MAX {
                    if self.vused[ct] || self.g.valence(t) != self.h.valence(ct) {
                        continue;
                    }
                    true
                } else {
                    if self.vmap[t] != ct {
                        continue;
                    }
                    false
                };
                if new_vertex {
                    self.vmap[t] = ct;
                    self.vused[ct] = true;
                }
                self.emap[e] = c;
                self.emap[ebar] = cbar;
                self.eused[c] = true;
                self.eused[cbar] = true;
                if self.search() {
                    return true;
                }
                self.emap[e] = usize::MAX;
                self.emap[ebar] = usize::MAX;
                self.eused[c] = false;
                self.eused[cbar] = false;
                if new_vertex {
                    self.vmap[t] = usize::MAX;
                    self.vused[ct] = false;
                }
            }
            return false;
        }
        // Otherwise start a new component at the least unmapped vertex.
        let Some(v) = self.g.vertices().find(|&v| self.vmap[v] == usize::MAX) else {
            return (self.accept)(&GraphIso {
                vertex_map: self.vmap.clone(),
                edge_map: self.emap.clone(),
            });
        };
        for x in self.h.vertices() {
            if self.vused[x] || self.g.valence(v) != self.h.valence(x) {
                continue;
            }
            self.vmap[v] = x;
            self.vused[x] = true;
            if self.search() {
                return true;
            }
            self.vmap[v] = usize::MAX;
            self.vused[x] = false;
        }
        false
    }
}

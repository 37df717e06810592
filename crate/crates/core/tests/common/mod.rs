//! Random generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rcurv::serre_graph::{
    rose, unfold_edge, Edge, Fold, GraphBuilder, GraphMorphism, SerreGraph,
};

/// A connected core graph with `1..=max_vertices` vertices and at most
/// `max_edges` geometric edges, or `None` if the attempt was not core.
pub fn try_connected_core_graph<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
) -> Option<SerreGraph> {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(n.max(1)..=max_edges.max(n));
    let mut b = GraphBuilder::with_vertices(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        if rng.gen_bool(0.5) {
            b.add_edge(u, v);
        } else {
            b.add_edge(v, u);
        }
    }
    for _ in (n - 1)..m {
        b.add_edge(rng.gen_range(0..n), rng.gen_range(0..n));
    }
    let g = b.build();
    (g.is_connected() && g.is_core()).then_some(g)
}

pub fn connected_core_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> SerreGraph {
    loop {
        if let Some(g) = try_connected_core_graph(rng, max_vertices, max_edges) {
            return g;
        }
    }
}

/// A random morphism `dom -> cod`, built along a spanning tree of `dom`;
/// `None` if some non-tree edge has no available image.
pub fn try_morphism<R: Rng>(rng: &mut R, dom: &SerreGraph, cod: &SerreGraph) -> Option<GraphMorphism> {
    let mut vmap = vec![usize::MAX; dom.vertex_count()];
    let mut emap = vec![usize::MAX; dom.edge_count()];
    for root in dom.vertices() {
        if vmap[root] != usize::MAX {
            continue;
        }
        vmap[root] = rng.gen_range(0..cod.vertex_count());
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &e in dom.link(u) {
                if emap[e] != usize::MAX {
                    continue;
                }
                let w = dom.term(e);
                let options: Vec<Edge> = cod
                    .link(vmap[u])
                    .iter()
                    .copied()
                    .filter(|&c| vmap[w] == usize::MAX || cod.term(c) == vmap[w])
                    .collect();
                let &c = options.choose(rng)?;
                emap[e] = c;
                emap[dom.inv(e)] = cod.inv(c);
                if vmap[w] == usize::MAX {
                    vmap[w] = cod.term(c);
                    stack.push(w);
                }
            }
        }
    }
    GraphMorphism::new(dom.clone(), cod.clone(), vmap, emap).ok()
}

/// A random codomain: a rose or a random connected core graph.
pub fn codomain<R: Rng>(rng: &mut R) -> SerreGraph {
    if rng.gen_bool(0.5) {
        rose(rng.gen_range(1..=3))
    } else {
        connected_core_graph(rng, 3, 4)
    }
}

/// Essentially unfolds `g` at a random vertex of valence at least 3, keeping
/// every vertex of valence at least 2. Returns the fold from the new graph.
pub fn random_core_unfold<R: Rng>(rng: &mut R, g: &SerreGraph) -> Option<Fold> {
    let mut candidates: Vec<Edge> = g
        .edges()
        .filter(|&a| g.init(a) != g.term(a) && g.valence(g.term(a)) >= 3)
        .collect();
    candidates.shuffle(rng);
    let &a = candidates.first()?;
    let v = g.term(a);
    let mut rest: Vec<Edge> = g.link(v).iter().copied().filter(|&b| b != g.inv(a)).collect();
    rest.shuffle(rng);
    let k = rng.gen_range(1..rest.len());
    let mut side = rest[..k].to_vec();
    side.sort_unstable();
    unfold_edge(g, a, &side).ok()
}

/// Like `random_core_unfold` but allowing vertices of valence 1.
pub fn random_unfold<R: Rng>(rng: &mut R, g: &SerreGraph) -> Option<Fold> {
    let candidates: Vec<Edge> = g.edges().filter(|&a| g.init(a) != g.term(a)).collect();
    let &a = candidates.choose(rng)?;
    let v = g.term(a);
    let side: Vec<Edge> = g
        .link(v)
        .iter()
        .copied()
        .filter(|&b| b != g.inv(a) && rng.gen_bool(0.5))
        .collect();
    unfold_edge(g, a, &side).ok()
}

/// Composite of fold projections, as a morphism from the first source.
pub fn compose_folds(folds: &[Fold]) -> GraphMorphism {
    let mut f = GraphMorphism::identity(folds[0].source());
    for step in folds {
        f = f.then(step.projection()).unwrap();
    }
    f
}

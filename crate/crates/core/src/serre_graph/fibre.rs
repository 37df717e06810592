use std::collections::HashMap;

use super::graph::{Edge, SerreGraph, Vertex};
use super::morphism::{GraphMorphism, MorphismError};

/// The fibre product `A ×_C B` with its two projections. Vertices and edges
/// are pairs with equal image, numbered in lexicographic order.
#[derive(Clone, Debug)]
pub struct FibreProduct {
    pub graph: SerreGraph,
    pub left: GraphMorphism,
    pub right: GraphMorphism,
    pub vertex_pairs: Vec<(Vertex, Vertex)>,
    pub edge_pairs: Vec<(Edge, Edge)>,
}

impl FibreProduct {
    pub fn vertex_index(&self, a: Vertex, b: Vertex) -> Option<Vertex> {
        self.vertex_pairs.binary_search(&(a, b)).ok()
    }

    pub fn edge_index(&self, a: Edge, b: Edge) -> Option<Edge> {
        self.edge_pairs.binary_search(&(a, b)).ok()
    }
}

pub fn fibre_product(f: &GraphMorphism, g: &GraphMorphism) -> Result<FibreProduct, MorphismError> {
    if f.codomain() != g.codomain() {
        return Err(MorphismError::NotComposable);
    }
    let (a, b) = (f.domain(), g.domain());
    let mut b_over_vertex: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for v in b.vertices() {
        b_over_vertex.entry(g.vertex(v)).or_default().push(v);
    }
    let mut b_over_edge: HashMap<Edge, Vec<Edge>> = HashMap::new();
    for e in b.edges() {
        b_over_edge.entry(g.edge(e)).or_default().push(e);
    }
    let mut vertex_pairs = Vec::new();
    for u in a.vertices() {
        for &v in b_over_vertex.get(&f.vertex(u)).map_or(&[][..], Vec::as_slice) {
            vertex_pairs.push((u, v));
        }
    }
    let mut edge_pairs = Vec::new();
    for d in a.edges() {
        for &e in b_over_edge.get(&f.edge(d)).map_or(&[][..], Vec::as_slice) {
            edge_pairs.push((d, e));
        }
    }
    let vindex: HashMap<(Vertex, Vertex), usize> =
        vertex_pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let eindex: HashMap<(Edge, Edge), usize> =
        edge_pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let init = edge_pairs
        .iter()
        .map(|&(d, e)| vindex[&(a.init(d), b.init(e))])
        .collect();
    let inv = edge_pairs
        .iter()
        .map(|&(d, e)| eindex[&(a.inv(d), b.inv(e))])
        .collect();
    let graph = SerreGraph::from_parts(vertex_pairs.len(), init, inv);
    let left = GraphMorphism::from_parts_unchecked(
        graph.clone(),
        a.clone(),
        vertex_pairs.iter().map(|p| p.0).collect(),
        edge_pairs.iter().map(|p| p.0).collect(),
    );
    let right = GraphMorphism::from_parts_unchecked(
        graph.clone(),
        b.clone(),
        vertex_pairs.iter().map(|p| p.1).collect(),
        edge_pairs.iter().map(|p| p.1).collect(),
    );
    Ok(FibreProduct {
        graph,
        left,
        right,
        vertex_pairs,
        edge_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::serre_graph::graph::{cycle, find_isomorphism, rose, theta};

    fn cover(emap: Vec<Edge>) -> GraphMorphism {
        GraphMorphism::from_edge_map(cycle(8), cycle(4), emap, |_| 0).unwrap()
    }

    #[test]
    fn diagonal() {
        let id = GraphMorphism::identity(&theta());
        let p = fibre_product(&id, &id).unwrap();
        assert!(find_isomorphism(&p.graph, &theta()).is_some());
    }

    #[test]
    fn two_double_covers() {
        let standard = cover((0..16).map(|e| e % 8).collect());
        // the same cover precomposed with a rotation by one step
        let rotated = cover((0..16).map(|e| (e + 2) % 8).collect());
        let p = fibre_product(&standard, &rotated).unwrap();
        assert_eq!(p.graph.vertex_count(), 16);
        assert_eq!(p.graph.edge_count(), 32);
        assert_eq!(p.graph.geometric_edge_count(), 16);
        assert!(p.graph.validate().is_empty());
    }

    #[test]
    fn over_rose() {
        let id = GraphMorphism::identity(&rose(1));
        let wrap = GraphMorphism::from_edge_map(cycle(2), rose(1), vec![0, 1, 0, 1], |_| 0).unwrap();
        let p = fibre_product(&id, &wrap).unwrap();
        assert!(find_isomorphism(&p.graph, &cycle(2)).is_some());
        assert!(p.left.is_immersion());
    }

    #[test]
    fn universal_property_sample() {
        // The diagonal map C -> C ×_C C exists and projects to identities.
        let c = cycle(3);
        let id = GraphMorphism::identity(&c);
        let p = fibre_product(&id, &id).unwrap();
        for v in c.vertices() {
            let i = p.vertex_index(v, v).unwrap();
            assert_eq!((p.left.vertex(i), p.right.vertex(i)), (v, v));
        }
        for e in c.edges() {
            assert!(p.edge_index(e, e).is_some());
        }
    }
}

use thiserror::Error;

use super::graph::{Edge, SerreGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("vertex map has length {got}, domain has {expected} vertices")]
    VertexMapLength { expected: usize, got: usize },
    #[error("edge map has length {got}, domain has {expected} edges")]
    EdgeMapLength { expected: usize, got: usize },
    #[error("vertex {0} maps outside the codomain")]
    VertexOutOfRange(Vertex),
    #[error("edge {0} maps outside the codomain")]
    EdgeOutOfRange(Edge),
    #[error("edge {0}: image of inverse is not inverse of image")]
    InverseNotPreserved(Edge),
    #[error("edge {0}: image of initial vertex is not initial vertex of image")]
    InitialNotPreserved(Edge),
    #[error("morphisms are not composable")]
    NotComposable,
}

/// A morphism of Serre graphs. Owns copies of its domain and codomain so it
/// can be passed around and serialized on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    domain: SerreGraph,
    codomain: SerreGraph,
    vertex_map: Vec<Vertex>,
    edge_map: Vec<Edge>,
}

impl GraphMorphism {
    pub fn new(
        domain: SerreGraph,
        codomain: SerreGraph,
        vertex_map: Vec<Vertex>,
        edge_map: Vec<Edge>,
    ) -> Result<Self, MorphismError> {
        if vertex_map.len() != domain.vertex_count() {
            return Err(MorphismError::VertexMapLength {
                expected: domain.vertex_count(),
                got: vertex_map.len(),
            });
        }
        if edge_map.len() != domain.edge_count() {
            return Err(MorphismError::EdgeMapLength {
                expected: domain.edge_count(),
                got: edge_map.len(),
            });
        }
        if let Some(v) = domain.vertices().find(|&v| vertex_map[v] >= codomain.vertex_count()) {
            return Err(MorphismError::VertexOutOfRange(v));
        }
        if let Some(e) = domain.edges().find(|&e| edge_map[e] >= codomain.edge_count()) {
            return Err(MorphismError::EdgeOutOfRange(e));
        }
        for e in domain.edges() {
            if edge_map[domain.inv(e)] != codomain.inv(edge_map[e]) {
                return Err(MorphismError::InverseNotPreserved(e));
            }
            if vertex_map[domain.init(e)] != codomain.init(edge_map[e]) {
                return Err(MorphismError::InitialNotPreserved(e));
            }
        }
        Ok(GraphMorphism {
            domain,
            codomain,
            vertex_map,
            edge_map,
        })
    }

    /// Builds a morphism from an edge map alone; vertex images are read off
    /// initial vertices. Isolated domain vertices need `isolated` images.
    pub fn from_edge_map(
        domain: SerreGraph,
        codomain: SerreGraph,
        edge_map: Vec<Edge>,
        isolated: impl Fn(Vertex) -> Vertex,
    ) -> Result<Self, MorphismError> {
        let mut vertex_map = vec![usize::MAX; domain.vertex_count()];
        for e in domain.edges() {
            if let Some(&img) = edge_map.get(e) {
                if img < codomain.edge_count() {
                    vertex_map[domain.init(e)] = codomain.init(img);
                }
            }
        }
        for v in domain.vertices() {
            if vertex_map[v] == usize::MAX {
                vertex_map[v] = isolated(v);
            }
        }
        Self::new(domain, codomain, vertex_map, edge_map)
    }

    pub fn identity(g: &SerreGraph) -> Self {
        GraphMorphism {
            domain: g.clone(),
            codomain: g.clone(),
            vertex_map: g.vertices().collect(),
            edge_map: g.edges().collect(),
        }
    }

    pub fn domain(&self) -> &SerreGraph {
        &self.domain
    }

    pub fn codomain(&self) -> &SerreGraph {
        &self.codomain
    }

    pub fn vertex_map(&self) -> &[Vertex] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[Edge] {
        &self.edge_map
    }

    pub fn vertex(&self, v: Vertex) -> Vertex {
        self.vertex_map[v]
    }

    pub fn edge(&self, e: Edge) -> Edge {
        self.edge_map[e]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GraphMorphism) -> Result<GraphMorphism, MorphismError> {
        if self.codomain != other.domain {
            return Err(MorphismError::NotComposable);
        }
        Ok(GraphMorphism {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            vertex_map: self.vertex_map.iter().map(|&v| other.vertex_map[v]).collect(),
            edge_map: self.edge_map.iter().map(|&e| other.edge_map[e]).collect(),
        })
    }

    /// Injective on every vertex link.
    pub fn is_immersion(&self) -> bool {
        self.first_non_injective_link().is_none()
    }

    /// Least domain vertex where the link map fails to be injective.
    pub fn first_non_injective_link(&self) -> Option<Vertex> {
        let mut seen = vec![usize::MAX; self.codomain.edge_count()];
        for v in self.domain.vertices() {
            for &e in self.domain.link(v) {
                let img = self.edge_map[e];
                if seen[img] == v {
                    return Some(v);
                }
                seen[img] = v;
            }
        }
        None
    }

    pub fn is_bijective(&self) -> bool {
        fn bij(map: &[usize], n: usize) -> bool {
            if map.len() != n {
                return false;
            }
            let mut hit = vec![false; n];
            map.iter().all(|&x| !std::mem::replace(&mut hit[x], true))
        }
        bij(&self.vertex_map, self.codomain.vertex_count())
            && bij(&self.edge_map, self.codomain.edge_count())
    }

    pub fn is_surjective_on_edges(&self) -> bool {
        let mut hit = vec![false; self.codomain.edge_count()];
        for &e in &self.edge_map {
            hit[e] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub(crate) fn from_parts_unchecked(
        domain: SerreGraph,
        codomain: SerreGraph,
        vertex_map: Vec<Vertex>,
        edge_map: Vec<Edge>,
    ) -> Self {
        debug_assert!(
            GraphMorphism::new(domain.clone(), codomain.clone(), vertex_map.clone(), edge_map.clone())
                .is_ok()
        );
        GraphMorphism {
            domain,
            codomain,
            vertex_map,
            edge_map,
        }
    }
}

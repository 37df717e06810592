//! Branched 2-complexes: a skeleton graph, boundary circles attached to it by
//! an immersion, and a rational area on each face.

mod cover;
mod map;
mod predicate;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lp::Rational;
use crate::serre_graph::{
    cycle, rose, Edge, GraphBuilder, GraphMorphism, MorphismError, SerreGraph, Vertex,
};

pub use map::{
    fold_complex, is_branched_immersion, is_branched_immersion_by_fibre_product,
    is_compatible_complex, is_essential, quotient_complex, validate_branched_map, BranchedMap,
    FoldedMap, MapError,
};
pub use cover::covering_map;
pub use predicate::{is_suitable, LinkPredicate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("boundary vertex {0} does not have valence 2")]
    BoundaryNotCircles(Vertex),
    #[error("attaching map is not an immersion at boundary vertex {0}")]
    AttachingNotImmersion(Vertex),
    #[error("face {0} has negative area")]
    NegativeArea(usize),
    #[error("face {0} has zero area")]
    ZeroArea(usize),
    #[error("expected {expected} face areas, got {got}")]
    AreaCount { expected: usize, got: usize },
    #[error("relator {0} is not cyclically reduced")]
    RelatorNotReduced(usize),
    #[error("relator {0} is empty")]
    EmptyRelator(usize),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(char),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("unknown edge {0}")]
    UnknownEdge(Edge),
    #[error("predicate {0} accepts an unsuitable graph")]
    UnsuitablePredicate(String),
    #[error("invalid complex: {0:?}")]
    Invalid(Vec<ComplexError>),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// A finite branched 2-complex. Faces are the components of the boundary
/// graph `S`, numbered by least boundary vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedComplex {
    attach: GraphMorphism,
    areas: Vec<Rational>,
    face_of: Vec<usize>,
    face_len: Vec<usize>,
}

/// `Area(X)`, `χ(Γ_X)`, `τ = Area + χ` and `κ = τ / Area` (absent when the
/// area is zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curvature {
    pub area: Rational,
    pub chi: i64,
    pub tau: Rational,
    pub kappa: Option<Rational>,
}

/// The link of a vertex `v`. Link vertex `i` is the skeleton edge
/// `vertices[i]` at `v`; link edge `j` is the boundary edge `edges[j]`, and
/// runs to the link vertex of its image under `w`. Link edges `2k, 2k + 1`
/// are the two boundary edges leaving one boundary vertex over `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLink {
    pub graph: SerreGraph,
    pub vertices: Vec<Edge>,
    pub edges: Vec<Edge>,
}

impl VertexLink {
    pub fn vertex_of(&self, e: Edge) -> Option<usize> {
        self.vertices.iter().position(|&x| x == e)
    }
}

/// Every circle, immersion and area violation of `attach: S -> Γ`.
pub fn validate_complex(attach: &GraphMorphism, areas: &[Rational]) -> Vec<ComplexError> {
    let s = attach.domain();
    let mut report = Vec::new();
    for u in s.vertices() {
        match s.link(u) {
            &[a, b] => {
                if attach.edge(a) == attach.edge(b) {
                    report.push(ComplexError::AttachingNotImmersion(u));
                }
            }
            _ => report.push(ComplexError::BoundaryNotCircles(u)),
        }
    }
    let faces = s.component_count();
    if areas.len() != faces {
        report.push(ComplexError::AreaCount {
            expected: faces,
            got: areas.len(),
        });
    }
    for (f, a) in areas.iter().enumerate() {
        if a.is_negative() {
            report.push(ComplexError::NegativeArea(f));
        }
    }
    report
}

impl BranchedComplex {
    pub fn new(attach: GraphMorphism, areas: Vec<Rational>) -> Result<Self, ComplexError> {
        let mut report = validate_complex(&attach, &areas);
        match report.len() {
            0 => Ok(Self::from_parts(attach, areas)),
            1 => Err(report.pop().unwrap()),
            _ => Err(ComplexError::Invalid(report)),
        }
    }

    /// Every face of area one.
    pub fn standard(attach: GraphMorphism) -> Result<Self, ComplexError> {
        let faces = attach.domain().component_count();
        Self::new(attach, vec![Rational::one(); faces])
    }

    fn from_parts(attach: GraphMorphism, areas: Vec<Rational>) -> Self {
        let s = attach.domain();
        let face_of = s.component_labels();
        let mut face_len = vec![0; areas.len()];
        for e in s.edges() {
            face_len[face_of[s.init(e)]] += 1;
        }
        BranchedComplex {
            attach,
            areas,
            face_of,
            face_len,
        }
    }

    /// The presentation complex: one vertex, a loop per generator (generator
    /// `i` is edge `2i`, its inverse `2i + 1`) and a face per relator.
    /// Capital letters denote inverses.
    pub fn from_presentation(generators: &[char], relators: &[&str]) -> Result<Self, ComplexError> {
        for &g in generators {
            if !g.is_ascii_lowercase() {
                return Err(ComplexError::UnknownGenerator(g));
            }
        }
        let letter = |c: char| -> Result<Edge, ComplexError> {
            let lower = c.to_ascii_lowercase();
            let i = generators
                .iter()
                .position(|&g| g == lower)
                .ok_or(ComplexError::UnknownGenerator(c))?;
            Ok(2 * i + usize::from(c.is_ascii_uppercase()))
        };
        let words = relators
            .iter()
            .map(|r| r.chars().map(letter).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_words(rose(generators.len()), &words)
    }

    /// Faces of area one attached along closed edge paths of `skeleton`,
    /// each cyclically reduced.
    pub fn from_words(skeleton: SerreGraph, words: &[Vec<Edge>]) -> Result<Self, ComplexError> {
        let mut s = SerreGraph::empty();
        let mut emap = Vec::new();
        for (k, word) in words.iter().enumerate() {
            let l = word.len();
            if l == 0 {
                return Err(ComplexError::EmptyRelator(k));
            }
            if let Some(&e) = word.iter().find(|&&e| e >= skeleton.edge_count()) {
                return Err(ComplexError::UnknownEdge(e));
            }
            if (0..l).any(|j| word[(j + 1) % l] == skeleton.inv(word[j])) {
                return Err(ComplexError::RelatorNotReduced(k));
            }
            s = s.disjoint_union(&cycle(l));
            for &x in word {
                emap.push(x);
                emap.push(skeleton.inv(x));
            }
        }
        let attach = GraphMorphism::from_edge_map(s, skeleton, emap, |_| 0)?;
        Self::standard(attach)
    }

    pub fn skeleton(&self) -> &SerreGraph {
        self.attach.codomain()
    }

    pub fn boundary(&self) -> &SerreGraph {
        self.attach.domain()
    }

    pub fn attach(&self) -> &GraphMorphism {
        &self.attach
    }

    pub fn areas(&self) -> &[Rational] {
        &self.areas
    }

    pub fn face_count(&self) -> usize {
        self.areas.len()
    }

    pub fn face_of_vertex(&self, u: Vertex) -> usize {
        self.face_of[u]
    }

    pub fn face_of_edge(&self, s: Edge) -> usize {
        self.face_of[self.boundary().init(s)]
    }

    /// `l(f)`: oriented boundary edges of the face, twice its length.
    pub fn face_length(&self, f: usize) -> usize {
        self.face_len[f]
    }

    pub fn total_area(&self) -> Rational {
        self.areas.iter().sum()
    }

    /// The same complex with new face areas.
    pub fn with_areas(&self, areas: Vec<Rational>) -> Result<Self, ComplexError> {
        Self::new(self.attach.clone(), areas)
    }

    pub fn require_positive_areas(&self) -> Result<(), ComplexError> {
        match self.areas.iter().position(|a| !a.is_positive()) {
            Some(f) => Err(ComplexError::ZeroArea(f)),
            None => Ok(()),
        }
    }

    /// Boundary vertices over `x`, i.e. the geometric edges of `Lk(x)`.
    pub fn corners(&self, x: Vertex) -> Vec<Vertex> {
        self.boundary()
            .vertices()
            .filter(|&u| self.attach.vertex(u) == x)
            .collect()
    }

    pub fn vertex_link(&self, v: Vertex) -> Result<VertexLink, ComplexError> {
        let vertices = self
            .skeleton()
            .try_link(v)
            .map_err(|_| ComplexError::UnknownVertex(v))?
            .to_vec();
        let index = |e: Edge| vertices.binary_search(&e).unwrap();
        let mut b = GraphBuilder::with_vertices(vertices.len());
        let mut edges = Vec::new();
        let s = self.boundary();
        for u in self.corners(v) {
            let (a, a2) = (s.link(u)[0], s.link(u)[1]);
            b.add_edge(index(self.attach.edge(a2)), index(self.attach.edge(a)));
            edges.push(a);
            edges.push(a2);
        }
        Ok(VertexLink {
            graph: b.build(),
            vertices,
            edges,
        })
    }

    /// `Lk(e) = w⁻¹(e)`, increasing.
    pub fn edge_link(&self, e: Edge) -> Result<Vec<Edge>, ComplexError> {
        if e >= self.skeleton().edge_count() {
            return Err(ComplexError::UnknownEdge(e));
        }
        Ok(self
            .boundary()
            .edges()
            .filter(|&s| self.attach.edge(s) == e)
            .collect())
    }

    /// The bijection `Lk(e) -> Lk(ē)` induced by the boundary involution, as
    /// pairs in the order of `edge_link(e)`.
    pub fn opposite_bijection(&self, e: Edge) -> Result<Vec<(Edge, Edge)>, ComplexError> {
        let s = self.boundary();
        Ok(self
            .edge_link(e)?
            .into_iter()
            .map(|a| (a, s.inv(a)))
            .collect())
    }

    pub fn curvature(&self) -> Curvature {
        let area = self.total_area();
        let chi = self.skeleton().euler_characteristic();
        let tau = &area + Rational::from_integer(chi.into());
        let kappa = (!area.is_zero()).then(|| &tau / &area);
        Curvature {
            area,
            chi,
            tau,
            kappa,
        }
    }

    /// Disjoint union; the second complex's ids are shifted past the first's.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let (n, m) = (self.skeleton().vertex_count(), self.skeleton().edge_count());
        let vmap = (self.attach.vertex_map().iter().copied())
            .chain(other.attach.vertex_map().iter().map(|v| v + n))
            .collect();
        let emap = (self.attach.edge_map().iter().copied())
            .chain(other.attach.edge_map().iter().map(|e| e + m))
            .collect();
        let attach = GraphMorphism::new(
            self.boundary().disjoint_union(other.boundary()),
            self.skeleton().disjoint_union(other.skeleton()),
            vmap,
            emap,
        )
        .expect("union of valid attaching maps");
        let mut areas = self.areas.clone();
        areas.extend(other.areas.iter().cloned());
        Self::from_parts(attach, areas)
    }
}

/// `Area(X)`, `χ(Γ_X)`, `τ(X)` and `κ(X)`.
pub fn curvature_quantities(x: &BranchedComplex) -> Curvature {
    x.curvature()
}

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{BranchedComplex, ComplexError};
use crate::lp::Rational;
use crate::origami::{Origami, OrigamiError};
use crate::serre_graph::{
    fibre_product, stallings_fold, GraphMorphism, MorphismError, StallingsFolding, Vertex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("skeleton or boundary map does not match the complexes")]
    ComplexMismatch,
    #[error("square does not commute at boundary edge {0}")]
    SquareNotCommuting(usize),
    #[error("boundary map is not an immersion at boundary vertex {0}")]
    BoundaryNotImmersion(Vertex),
    #[error("face {0}: area is not multiplicity times image area")]
    AreaMismatch(usize),
    #[error("folded face {0} receives incoherent areas")]
    FoldAreaIncoherent(usize),
    #[error("attaching map is not an immersion after the quotient, at boundary vertex {0}")]
    AttachingNotImmersionAfterQuotient(Vertex),
    #[error("origami and map live on different skeleta")]
    DomainMismatch,
    #[error("invalid branched map: {0:?}")]
    Invalid(Vec<MapError>),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Origami(#[from] OrigamiError),
}

/// A branched morphism `φ: Y -> X`: skeleton and boundary maps commuting
/// with the attaching maps, with `Area(f) = m(f) · Area(φ(f))` for each face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedMap {
    domain: BranchedComplex,
    codomain: BranchedComplex,
    skeleton: GraphMorphism,
    boundary: GraphMorphism,
    multiplicities: Vec<usize>,
}

/// Every violation of the branched-morphism axioms. Multiplicities are only
/// checked once the boundary map is an immersion.
pub fn validate_branched_map(
    domain: &BranchedComplex,
    codomain: &BranchedComplex,
    skeleton: &GraphMorphism,
    boundary: &GraphMorphism,
) -> Vec<MapError> {
    if skeleton.domain() != domain.skeleton()
        || skeleton.codomain() != codomain.skeleton()
        || boundary.domain() != domain.boundary()
        || boundary.codomain() != codomain.boundary()
    {
        return vec![MapError::ComplexMismatch];
    }
    let mut report = Vec::new();
    let s = domain.boundary();
    if let Some(e) = s.edges().find(|&e| {
        skeleton.edge(domain.attach().edge(e)) != codomain.attach().edge(boundary.edge(e))
    }) {
        report.push(MapError::SquareNotCommuting(e));
    }
    match boundary.first_non_injective_link() {
        Some(u) => report.push(MapError::BoundaryNotImmersion(u)),
        None => {
            for (f, m) in face_degrees(domain, codomain, boundary).into_iter().enumerate() {
                let image = codomain.face_of_vertex(boundary.vertex(face_rep(domain, f)));
                if domain.areas()[f] != Rational::from_integer(m.into()) * &codomain.areas()[image] {
                    report.push(MapError::AreaMismatch(f));
                }
            }
        }
    }
    report
}

fn face_rep(x: &BranchedComplex, f: usize) -> Vertex {
    x.boundary()
        .vertices()
        .find(|&u| x.face_of_vertex(u) == f)
        .expect("faces are nonempty")
}

/// Covering degree of an immersion of circles on each face of the domain.
fn face_degrees(domain: &BranchedComplex, codomain: &BranchedComplex, boundary: &GraphMorphism) -> Vec<usize> {
    (0..domain.face_count())
        .map(|f| {
            let image = codomain.face_of_vertex(boundary.vertex(face_rep(domain, f)));
            domain.face_length(f) / codomain.face_length(image)
        })
        .collect()
}

impl BranchedMap {
    pub fn new(
        domain: BranchedComplex,
        codomain: BranchedComplex,
        skeleton: GraphMorphism,
        boundary: GraphMorphism,
    ) -> Result<Self, MapError> {
        let mut report = validate_branched_map(&domain, &codomain, &skeleton, &boundary);
        match report.len() {
            0 => {}
            1 => return Err(report.pop().unwrap()),
            _ => return Err(MapError::Invalid(report)),
        }
        let multiplicities = face_degrees(&domain, &codomain, &boundary);
        Ok(BranchedMap {
            domain,
            codomain,
            skeleton,
            boundary,
            multiplicities,
        })
    }

    /// Builds the domain from `attach: S_Y -> Γ_Y` with the areas forced by
    /// the multiplicities, `Area(f) = m(f) · Area(φ(f))`.
    pub fn with_induced_areas(
        attach: GraphMorphism,
        codomain: BranchedComplex,
        skeleton: GraphMorphism,
        boundary: GraphMorphism,
    ) -> Result<Self, MapError> {
        let provisional = BranchedComplex::standard(attach.clone())?;
        if boundary.domain() != provisional.boundary() || boundary.codomain() != codomain.boundary() {
            return Err(MapError::ComplexMismatch);
        }
        if let Some(u) = boundary.first_non_injective_link() {
            return Err(MapError::BoundaryNotImmersion(u));
        }
        let areas = face_degrees(&provisional, &codomain, &boundary)
            .into_iter()
            .enumerate()
            .map(|(f, m)| {
                let image = codomain.face_of_vertex(boundary.vertex(face_rep(&provisional, f)));
                Rational::from_integer(m.into()) * &codomain.areas()[image]
            })
            .collect();
        let domain = BranchedComplex::new(attach, areas)?;
        Self::new(domain, codomain, skeleton, boundary)
    }

    pub fn identity(x: &BranchedComplex) -> Self {
        BranchedMap {
            domain: x.clone(),
            codomain: x.clone(),
            skeleton: GraphMorphism::identity(x.skeleton()),
            boundary: GraphMorphism::identity(x.boundary()),
            multiplicities: vec![1; x.face_count()],
        }
    }

    pub fn domain(&self) -> &BranchedComplex {
        &self.domain
    }

    pub fn codomain(&self) -> &BranchedComplex {
        &self.codomain
    }

    pub fn skeleton(&self) -> &GraphMorphism {
        &self.skeleton
    }

    pub fn boundary(&self) -> &GraphMorphism {
        &self.boundary
    }

    /// `m_φ(f)` per face of the domain.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &BranchedMap) -> Result<BranchedMap, MapError> {
        if self.codomain != other.domain {
            return Err(MapError::ComplexMismatch);
        }
        Self::new(
            self.domain.clone(),
            other.codomain.clone(),
            self.skeleton.then(&other.skeleton)?,
            self.boundary.then(&other.boundary)?,
        )
    }

    /// Disjoint union of two maps into the same complex.
    pub fn disjoint_union(&self, other: &BranchedMap) -> Result<BranchedMap, MapError> {
        if self.codomain != other.codomain {
            return Err(MapError::ComplexMismatch);
        }
        let domain = self.domain.disjoint_union(&other.domain);
        let join = |a: &GraphMorphism, b: &GraphMorphism| {
            let mut vmap = a.vertex_map().to_vec();
            vmap.extend_from_slice(b.vertex_map());
            let mut emap = a.edge_map().to_vec();
            emap.extend_from_slice(b.edge_map());
            GraphMorphism::new(
                a.domain().disjoint_union(b.domain()),
                a.codomain().clone(),
                vmap,
                emap,
            )
        };
        let skeleton = join(&self.skeleton, &other.skeleton)?;
        let boundary = join(&self.boundary, &other.boundary)?;
        Self::new(domain, self.codomain.clone(), skeleton, boundary)
    }
}

/// Every induced link map `dφ_v` is injective on vertices and edges.
pub fn is_branched_immersion(phi: &BranchedMap) -> bool {
    if !phi.skeleton.is_immersion() {
        return false;
    }
    let y = &phi.domain;
    let mut seen = HashSet::new();
    y.boundary().edges().all(|s| {
        let v = y.attach().vertex(y.boundary().init(s));
        seen.insert((v, phi.boundary.edge(s)))
    })
}

/// The same test read through fibre products: the skeleton map is an
/// immersion and `S_Y -> Γ_Y ×_{Γ_X} S_X` is injective.
pub fn is_branched_immersion_by_fibre_product(phi: &BranchedMap) -> bool {
    if !phi.skeleton.is_immersion() {
        return false;
    }
    let y = &phi.domain;
    let fp = fibre_product(&phi.skeleton, phi.codomain.attach()).expect("common codomain");
    let mut vs = HashSet::new();
    let mut es = HashSet::new();
    y.boundary().vertices().all(|u| {
        vs.insert(fp.vertex_index(y.attach().vertex(u), phi.boundary.vertex(u)))
    }) && y.boundary().edges().all(|s| {
        es.insert(fp.edge_index(y.attach().edge(s), phi.boundary.edge(s)))
    })
}

/// `φ = φ̄ ∘ φ0` with `φ0` a π1-surjection and `φ̄` a branched immersion.
#[derive(Clone, Debug)]
pub struct FoldedMap {
    pub folding: StallingsFolding,
    pub folded: BranchedComplex,
    pub phi0: BranchedMap,
    pub phibar: BranchedMap,
}

/// Folds the skeleton map, then takes the image of `S_Y` in the fibre
/// product `Γ_Ȳ ×_{Γ_X} S_X` as the boundary of `Ȳ`. A folded face gets
/// area `Area(f) / m_{φ0}(f)` for any preimage `f`.
pub fn fold_complex(phi: &BranchedMap) -> Result<FoldedMap, MapError> {
    let y = &phi.domain;
    let x = &phi.codomain;
    let folding = stallings_fold(&phi.skeleton);
    let fp = fibre_product(&folding.fbar, x.attach())?;
    let sy = y.boundary();
    let image_vertex = |u: Vertex| {
        fp.vertex_index(folding.f0.vertex(y.attach().vertex(u)), phi.boundary.vertex(u))
            .expect("commuting square lands in the fibre product")
    };
    let mut keep = vec![false; fp.graph.vertex_count()];
    for u in sy.vertices() {
        keep[image_vertex(u)] = true;
    }
    let (s_bar, old_vertices, old_edges) = fp.graph.induced_subgraph(&keep);
    let new_vertex: HashMap<Vertex, Vertex> =
        old_vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let new_edge: HashMap<usize, usize> = old_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    let attach_bar = GraphMorphism::new(
        s_bar.clone(),
        folding.folded.clone(),
        old_vertices.iter().map(|&v| fp.left.vertex(v)).collect(),
        old_edges.iter().map(|&e| fp.left.edge(e)).collect(),
    )?;
    let boundary_bar = GraphMorphism::new(
        s_bar.clone(),
        x.boundary().clone(),
        old_vertices.iter().map(|&v| fp.right.vertex(v)).collect(),
        old_edges.iter().map(|&e| fp.right.edge(e)).collect(),
    )?;
    let boundary0 = GraphMorphism::new(
        sy.clone(),
        s_bar.clone(),
        sy.vertices().map(|u| new_vertex[&image_vertex(u)]).collect(),
        sy.edges()
            .map(|s| {
                let e = fp
                    .edge_index(folding.f0.edge(y.attach().edge(s)), phi.boundary.edge(s))
                    .expect("edge pair over a common image");
                new_edge[&e]
            })
            .collect(),
    )?;

    let provisional = BranchedComplex::standard(attach_bar.clone())?;
    let degrees = face_degrees(y, &provisional, &boundary0);
    let mut areas: Vec<Option<Rational>> = vec![None; provisional.face_count()];
    for f in 0..y.face_count() {
        let image = provisional.face_of_vertex(boundary0.vertex(face_rep(y, f)));
        let a = &y.areas()[f] / Rational::from_integer(degrees[f].into());
        match &areas[image] {
            Some(b) if *b != a => return Err(MapError::FoldAreaIncoherent(image)),
            Some(_) => {}
            None => areas[image] = Some(a),
        }
    }
    let areas: Vec<Rational> = areas
        .into_iter()
        .map(|a| a.expect("every folded face has a preimage"))
        .collect();
    let folded = BranchedComplex::new(attach_bar, areas)?;
    let phi0 = BranchedMap::new(y.clone(), folded.clone(), folding.f0.clone(), boundary0)?;
    let phibar = BranchedMap::new(folded.clone(), x.clone(), folding.fbar.clone(), boundary_bar)?;
    debug_assert!(is_branched_immersion(&phibar));
    debug_assert_eq!(phi0.then(&phibar).as_ref(), Ok(phi));
    Ok(FoldedMap {
        folding,
        folded,
        phi0,
        phibar,
    })
}

/// `φ0` is an essential equivalence: every skeleton fold is essential (so
/// the skeleton map is a homotopy equivalence) and `S_Y -> S_Ȳ` is an
/// isomorphism.
pub fn is_essential(phi: &BranchedMap) -> Result<bool, MapError> {
    let folded = fold_complex(phi)?;
    Ok(folded.folding.all_essential() && folded.phi0.boundary.is_bijective())
}

/// `Y/Ω` with the quotient map: the skeleton is `Γ_Y/Ω`, faces are those of
/// `Y` attached through the quotient, multiplicities are one.
pub fn quotient_complex(
    y: &BranchedComplex,
    o: &Origami,
) -> Result<(BranchedComplex, BranchedMap), MapError> {
    if o.base() != y.skeleton() {
        return Err(MapError::DomainMismatch);
    }
    let qr = o.quotient()?;
    let attach = y.attach().then(&qr.q)?;
    if let Some(u) = attach.first_non_injective_link() {
        return Err(MapError::AttachingNotImmersionAfterQuotient(u));
    }
    let quotient = BranchedComplex::new(attach, y.areas().to_vec())?;
    let q = BranchedMap::new(
        y.clone(),
        quotient.clone(),
        qr.q,
        GraphMorphism::identity(y.boundary()),
    )?;
    Ok((quotient, q))
}

/// Graph compatibility of `Ω` with the skeleton map, plus: boundary vertices
/// with equal image whose attaching points lie in one component of `V_Ω`
/// coincide.
pub fn is_compatible_complex(o: &Origami, phi: &BranchedMap) -> Result<bool, MapError> {
    if o.base() != phi.domain.skeleton() {
        return Err(MapError::DomainMismatch);
    }
    if !o.is_compatible(&phi.skeleton)? {
        return Ok(false);
    }
    let comps = o.components();
    let y = &phi.domain;
    let mut seen = HashSet::new();
    Ok(y.boundary()
        .vertices()
        .all(|u| seen.insert((phi.boundary.vertex(u), comps.vertex[y.attach().vertex(u)]))))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::torus;
    use super::*;
    use crate::lp::int;
    use crate::partition::Partition;
    use crate::serre_graph::{cycle, find_isomorphism, rose, Edge, GraphBuilder, SerreGraph};

    /// Double cover of the torus complex unwrapping generator `a`: two
    /// vertices, `a` edges swap them, `b` edges are loops.
    pub(crate) fn torus_double_cover() -> BranchedMap {
        let x = torus();
        let mut g = GraphBuilder::with_vertices(2);
        g.add_edge(0, 1); // a0
        g.add_edge(1, 0); // a1
        g.add_edge(0, 0); // b0
        g.add_edge(1, 1); // b1
        let g = g.build();
        let skel_e = vec![0, 1, 0, 1, 2, 3, 2, 3];
        let skeleton = GraphMorphism::from_edge_map(g.clone(), x.skeleton().clone(), skel_e, |_| 0).unwrap();
        // two squares a_i b_{i+1} ā_i b̄_i
        let s = cycle(4).disjoint_union(&cycle(4));
        let word = |i: usize| -> Vec<Edge> {
            let j = 1 - i;
            let a = 2 * i; // a_i: i -> j
            vec![a, 4 + 2 * j, a ^ 1, (4 + 2 * i) ^ 1]
        };
        let mut emap = Vec::new();
        for i in 0..2 {
            for x in word(i) {
                emap.push(x);
                emap.push(x ^ 1);
            }
        }
        let attach = GraphMorphism::from_edge_map(s.clone(), g, emap, |_| 0).unwrap();
        let boundary = GraphMorphism::from_edge_map(
            s,
            x.boundary().clone(),
            (0..16).map(|e| e % 8).collect(),
            |_| 0,
        )
        .unwrap();
        BranchedMap::with_induced_areas(attach, x, skeleton, boundary).unwrap()
    }

    /// One face wrapping twice around the torus face.
    fn doubled_face() -> BranchedMap {
        let x = torus();
        let s = cycle(8);
        let emap: Vec<Edge> = (0..16).map(|e| x.attach().edge(e % 8)).collect();
        let attach = GraphMorphism::from_edge_map(s.clone(), x.skeleton().clone(), emap, |_| 0).unwrap();
        let boundary =
            GraphMorphism::from_edge_map(s, x.boundary().clone(), (0..16).map(|e| e % 8).collect(), |_| 0)
                .unwrap();
        let skeleton = GraphMorphism::identity(x.skeleton());
        BranchedMap::with_induced_areas(attach, x, skeleton, boundary).unwrap()
    }

    #[test]
    fn identity_is_valid_and_an_immersion() {
        let id = BranchedMap::identity(&torus());
        assert_eq!(id.multiplicities(), &[1]);
        assert!(is_branched_immersion(&id));
        assert!(is_branched_immersion_by_fibre_product(&id));
        assert_eq!(is_essential(&id), Ok(true));
    }

    #[test]
    fn multiplicity_and_area_law() {
        let phi = doubled_face();
        assert_eq!(phi.multiplicities(), &[2]);
        assert_eq!(phi.domain().areas(), &[int(2)]);
        let y1 = phi.domain().with_areas(vec![int(1)]).unwrap();
        let err = BranchedMap::new(
            y1,
            phi.codomain().clone(),
            phi.skeleton().clone(),
            phi.boundary().clone(),
        );
        assert_eq!(err, Err(MapError::AreaMismatch(0)));
        // without a covering skeleton the link at the vertex is hit twice
        assert!(!is_branched_immersion(&phi));
        assert!(!is_branched_immersion_by_fibre_product(&phi));
        assert_eq!(is_essential(&phi), Ok(false));
    }

    #[test]
    fn square_must_commute() {
        let x = torus();
        let swap = GraphMorphism::from_edge_map(
            x.skeleton().clone(),
            x.skeleton().clone(),
            vec![2, 3, 0, 1],
            |_| 0,
        )
        .unwrap();
        let r = BranchedMap::new(x.clone(), x.clone(), swap, GraphMorphism::identity(x.boundary()));
        assert!(matches!(r, Err(MapError::SquareNotCommuting(_))));
    }

    #[test]
    fn double_cover_links_map_isomorphically() {
        let phi = torus_double_cover();
        assert_eq!(phi.multiplicities(), &[1, 1]);
        assert!(is_branched_immersion(&phi));
        assert!(is_branched_immersion_by_fibre_product(&phi));
        let folded = fold_complex(&phi).unwrap();
        assert!(folded.folding.folds.is_empty());
        assert!(folded.phi0.boundary().is_bijective());
        for v in 0..2 {
            let l = phi.domain().vertex_link(v).unwrap();
            assert!(find_isomorphism(&l.graph, &cycle(4)).is_some());
        }
    }

    #[test]
    fn hair_folds_away() {
        // the torus with an extra edge c: 0 -> 1 over a; folding c into the
        // a loop is essential and leaves the torus
        let x = torus();
        let mut g = GraphBuilder::with_vertices(2);
        g.add_edge(0, 0);
        g.add_edge(0, 0);
        g.add_edge(0, 1);
        let g = g.build();
        let skeleton =
            GraphMorphism::from_edge_map(g.clone(), x.skeleton().clone(), vec![0, 1, 2, 3, 0, 1], |_| 0)
                .unwrap();
        let attach = GraphMorphism::new(
            x.boundary().clone(),
            g,
            vec![0; 4],
            x.attach().edge_map().to_vec(),
        )
        .unwrap();
        let phi = BranchedMap::with_induced_areas(
            attach,
            x.clone(),
            skeleton,
            GraphMorphism::identity(x.boundary()),
        )
        .unwrap();
        assert!(!is_branched_immersion(&phi));
        let folded = fold_complex(&phi).unwrap();
        assert_eq!(folded.folding.folds.len(), 1);
        assert!(folded.folding.all_essential());
        assert!(find_isomorphism(folded.folded.skeleton(), x.skeleton()).is_some());
        assert_eq!(folded.folded.face_count(), 1);
        assert_eq!(is_essential(&phi), Ok(true));
        // the identity needs no folding at all
        let id = BranchedMap::identity(&x);
        let f = fold_complex(&id).unwrap();
        assert!(f.folding.folds.is_empty());
        assert!(f.phi0.boundary().is_bijective() && f.phi0.skeleton().is_bijective());
    }

    #[test]
    fn doubled_faces_merge_when_folded() {
        // Y: two vertices joined by a and b parallel to the torus loops, so
        // that the skeleton folds onto the torus skeleton; both torus
        // squares on Y become the same face of Ȳ.
        let x = torus();
        let y_skel = rose(2).disjoint_union(&rose(2));
        let skeleton = GraphMorphism::from_edge_map(
            y_skel.clone(),
            x.skeleton().clone(),
            vec![0, 1, 2, 3, 0, 1, 2, 3],
            |_| 0,
        )
        .unwrap();
        let s = cycle(4).disjoint_union(&cycle(4));
        let emap: Vec<Edge> = (0..16)
            .map(|e| x.attach().edge(e % 8) + if e >= 8 { 4 } else { 0 })
            .collect();
        let attach = GraphMorphism::from_edge_map(s.clone(), y_skel, emap, |v| usize::from(v >= 4)).unwrap();
        let boundary =
            GraphMorphism::from_edge_map(s, x.boundary().clone(), (0..16).map(|e| e % 8).collect(), |_| 0)
                .unwrap();
        let phi = BranchedMap::with_induced_areas(attach, x, skeleton, boundary).unwrap();
        // disconnected: each component is already an immersion, nothing folds
        let folded = fold_complex(&phi).unwrap();
        assert_eq!(folded.folded.face_count(), 2);
        assert_eq!(is_essential(&phi), Ok(true));

        // glue the two vertices by a new edge mapped to a: now folding the
        // new edge against the old a loops identifies the two copies
        let mut g = GraphBuilder::with_vertices(2);
        for (u, v) in [(0, 0), (0, 0), (1, 1), (1, 1), (0, 1)] {
            g.add_edge(u, v);
        }
        let g = g.build();
        let skeleton = GraphMorphism::from_edge_map(
            g.clone(),
            phi.codomain().skeleton().clone(),
            vec![0, 1, 2, 3, 0, 1, 2, 3, 0, 1],
            |_| 0,
        )
        .unwrap();
        let emap: Vec<Edge> = (0..16)
            .map(|e| phi.codomain().attach().edge(e % 8) + if e >= 8 { 4 } else { 0 })
            .collect();
        let s = cycle(4).disjoint_union(&cycle(4));
        let attach = GraphMorphism::from_edge_map(s.clone(), g, emap, |v| usize::from(v >= 4)).unwrap();
        let boundary = GraphMorphism::from_edge_map(
            s,
            phi.codomain().boundary().clone(),
            (0..16).map(|e| e % 8).collect(),
            |_| 0,
        )
        .unwrap();
        let psi = BranchedMap::with_induced_areas(attach, phi.codomain().clone(), skeleton, boundary)
            .unwrap();
        let folded = fold_complex(&psi).unwrap();
        assert_eq!(folded.folded.face_count(), 1);
        assert!(find_isomorphism(folded.folded.skeleton(), &rose(2)).is_some());
        assert!(!folded.phi0.boundary().is_bijective());
        assert_eq!(is_essential(&psi), Ok(false));
        assert!(is_branched_immersion(&folded.phibar));
    }

    #[test]
    fn quotients() {
        let x = torus();
        let (q, map) = quotient_complex(&x, &Origami::trivial(x.skeleton())).unwrap();
        assert!(find_isomorphism(q.skeleton(), x.skeleton()).is_some());
        assert_eq!(q.areas(), x.areas());
        assert!(map.skeleton().is_bijective());
        assert_eq!(
            quotient_complex(&x, &Origami::trivial(&rose(1))),
            Err(MapError::DomainMismatch)
        );
    }

    #[test]
    fn quotient_can_backtrack() {
        // a square a b ā b̄ on a cycle of four distinct edges; relating the
        // two edges leaving vertex 0 folds c0 onto c3̄, and the boundary
        // backtracks at vertex 0.
        let g = cycle(4);
        let s = cycle(4);
        let attach = GraphMorphism::from_edge_map(s, g.clone(), (0..8).collect(), |v| v).unwrap();
        let y = BranchedComplex::standard(attach).unwrap();
        let o = Origami::new(g, Partition::from_classes(8, &[vec![0, 7]]).unwrap()).unwrap();
        assert!(matches!(
            quotient_complex(&y, &o),
            Err(MapError::AttachingNotImmersionAfterQuotient(_))
        ));
    }

    #[test]
    fn compatibility_condition_four() {
        let phi = doubled_face();
        let y = phi.domain();
        assert_eq!(
            is_compatible_complex(&Origami::trivial(y.skeleton()), &BranchedMap::identity(y)),
            Ok(true)
        );
        // two boundary vertices of the doubled face over one torus corner,
        // both attached at the single vertex
        assert_eq!(is_compatible_complex(&Origami::trivial(y.skeleton()), &phi), Ok(false));
        let cover = torus_double_cover();
        assert_eq!(
            is_compatible_complex(&Origami::trivial(cover.domain().skeleton()), &cover),
            Ok(true)
        );
    }

    #[test]
    fn composition_and_union() {
        let cover = torus_double_cover();
        let id = BranchedMap::identity(cover.codomain());
        assert_eq!(cover.then(&id).unwrap(), cover);
        let two = cover.disjoint_union(&cover).unwrap();
        assert_eq!(two.domain().face_count(), 4);
        assert!(is_branched_immersion(&two));
        let _: &SerreGraph = two.domain().skeleton();
    }
}

use super::{validate_vertex_block, BlockCatalogue, BlockError, LinkVertex, VertexBlock};
use crate::complex::{is_compatible_complex, BranchedMap, LinkPredicate};
use crate::origami::Origami;
use crate::serre_graph::Vertex;

/// Every vertex link of the domain of `phi` lies in `pred`.
pub fn is_pi_complex(phi: &BranchedMap, pred: &LinkPredicate) -> Result<(), BlockError> {
    let y = phi.domain();
    for u in y.skeleton().vertices() {
        if !pred.accepts(&y.vertex_link(u)?.graph) {
            return Err(BlockError::NotPiComplex(u));
        }
    }
    Ok(())
}

/// `β(ū)` for every vertex `ū` of `Ȳ = Y/Ω`, in the quotient's vertex
/// order. The copies at `ū` are the edges of `Y` leaving the vertices over
/// `ū`; each carries the images of the boundary edges attached along it.
pub fn induced_vertex_blocks(phi: &BranchedMap, o: &Origami) -> Result<Vec<VertexBlock>, BlockError> {
    if !o.is_essential()? {
        return Err(BlockError::NotEssentialOrigami);
    }
    if !is_compatible_complex(o, phi)? {
        return Err(BlockError::IncompatibleOrigami);
    }
    let y = phi.domain();
    let gamma = y.skeleton();
    let q = o.quotient()?.q;
    let open = o.open_relation();
    let closed = o.closed_relation();
    let mut blocks = Vec::new();
    for ubar in q.codomain().vertices() {
        let edges: Vec<usize> = gamma.edges().filter(|&e| q.vertex(gamma.init(e)) == ubar).collect();
        let base = match edges.first() {
            Some(&e) => phi.skeleton().vertex(gamma.init(e)),
            None => {
                let u = gamma.vertices().find(|&u| q.vertex(u) == ubar).expect("nonempty fibre");
                phi.skeleton().vertex(u)
            }
        };
        let lverts: Vec<LinkVertex> = edges
            .iter()
            .map(|&e| LinkVertex {
                link_vertex: phi.skeleton().edge(e),
                ends: y
                    .boundary()
                    .edges()
                    .filter(|&s| y.attach().edge(s) == e)
                    .map(|s| phi.boundary().edge(s))
                    .collect(),
            })
            .collect();
        blocks.push(VertexBlock::new(base, lverts, &open.restrict(&edges), &closed.restrict(&edges)));
    }
    Ok(blocks)
}

/// `β(ū)` for one vertex of the quotient.
pub fn induced_vertex_block(phi: &BranchedMap, o: &Origami, ubar: Vertex) -> Result<VertexBlock, BlockError> {
    induced_vertex_blocks(phi, o)?
        .into_iter()
        .nth(ubar)
        .ok_or(BlockError::Complex(crate::complex::ComplexError::UnknownVertex(ubar)))
}

/// `Φ(Y, φ, Ω)`: how many vertices of `Y/Ω` induce each enumerated class.
/// Every induced block is validated and must appear in `catalogue`.
pub fn phi_map(
    catalogue: &BlockCatalogue,
    pred: &LinkPredicate,
    phi: &BranchedMap,
    o: &Origami,
) -> Result<Vec<u64>, BlockError> {
    is_pi_complex(phi, pred)?;
    let x = phi.codomain();
    let mut t = vec![0u64; catalogue.len()];
    for (ubar, b) in induced_vertex_blocks(phi, o)?.into_iter().enumerate() {
        let report = validate_vertex_block(x, pred, &b);
        if !report.is_empty() {
            return Err(BlockError::InvalidInducedBlock(ubar, report));
        }
        let i = catalogue.position(&b).ok_or(BlockError::BlockNotEnumerated(ubar))?;
        t[i] += 1;
    }
    Ok(t)
}

use std::collections::{BTreeMap, HashMap};

use super::{ConeSystem, PipelineError};
use crate::blocks::{induced_edge_block, is_pi_complex, opposite_edge_block, phi_map, EdgeBlock};
use crate::complex::{BranchedComplex, BranchedMap};
use crate::lp::{fmt_rational, Rational};
use crate::origami::Origami;
use crate::partition::Partition;
use crate::serre_graph::{Edge, GraphBuilder, GraphMorphism, Vertex};

/// A verified element `(Y, φ, Ω)` built from an integer cone point.
#[derive(Clone, Debug)]
pub struct Realization {
    pub map: BranchedMap,
    pub origami: Origami,
    pub transcript: Vec<String>,
}

impl Realization {
    pub fn kappa(&self) -> Option<Rational> {
        self.map.domain().curvature().kappa
    }
}

/// One placed copy of a block.
struct Instance {
    block: usize,
    /// First global id of its link-vertex copies (edges of `Y`).
    lvert_offset: usize,
    /// First id of its components (vertices of `Y`).
    vertex_offset: usize,
    component: Vec<usize>,
    /// First id of its corners (vertices of `S_Y`), and the corners.
    corner_offset: usize,
    corners: Vec<Vertex>,
}

/// Builds `(Y, φ, Ω)` with `Φ = t`: `t_β` copies of each block, instances
/// ordered by class then copy. Over each geometric edge the copies inducing
/// an edge block are matched in order with those inducing its opposite,
/// and matched copies glue part `P` to part `P̄`. `Y` is read off the glued
/// links and checked: Π-complex, `Ω` essential and compatible, `Φ(Y) = t`.
pub fn reconstruct(x: &BranchedComplex, cone: &ConeSystem, t: &[u64]) -> Result<Realization, PipelineError> {
    if !cone.contains_integer(t) || t.iter().all(|&v| v == 0) {
        return Err(PipelineError::NotInCone);
    }
    let blocks = &cone.catalogue.blocks;
    let (gamma, s) = (x.skeleton(), x.boundary());

    let mut inst = Vec::new();
    let (mut lv_off, mut v_off, mut c_off) = (0, 0, 0);
    for (j, &count) in t.iter().enumerate() {
        let ul = blocks[j].upper_link(x);
        for _ in 0..count {
            inst.push(Instance {
                block: j,
                lvert_offset: lv_off,
                vertex_offset: v_off,
                component: ul.component.clone(),
                corner_offset: c_off,
                corners: ul.corners.clone(),
            });
            lv_off += blocks[j].lverts().len();
            v_off += ul.component_count;
            c_off += ul.corners.len();
        }
    }
    let lvert_count = lv_off;
    // owner[g] = (instance, copy index) of global copy g
    let mut owner = Vec::with_capacity(lvert_count);
    for (i, ins) in inst.iter().enumerate() {
        owner.extend((0..blocks[ins.block].lverts().len()).map(|k| (i, k)));
    }

    // match copies across each geometric edge
    let mut partner = vec![usize::MAX; lvert_count];
    for e0 in gamma.geometric_edges() {
        let e1 = gamma.inv(e0);
        let mut sides: BTreeMap<EdgeBlock, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (i, ins) in inst.iter().enumerate() {
            let b = &blocks[ins.block];
            if b.base() == gamma.init(e0) {
                let g = induced_edge_block(x, b, e0)?;
                if !g.is_empty() {
                    sides.entry(g).or_default().0.push(i);
                }
            }
            if b.base() == gamma.init(e1) {
                let g = induced_edge_block(x, b, e1)?;
                if !g.is_empty() {
                    sides.entry(opposite_edge_block(x, &g)).or_default().1.push(i);
                }
            }
        }
        for (g, (plus, minus)) in &sides {
            if plus.len() != minus.len() {
                return Err(PipelineError::GluingMismatch(e0));
            }
            for (&i, &j) in plus.iter().zip(minus) {
                for part in g.parts() {
                    let a = copy_with_ends(&inst, blocks, i, part)?;
                    let mut bar: Vec<Edge> = part.iter().map(|&p| s.inv(p)).collect();
                    bar.sort_unstable();
                    let b = copy_with_ends(&inst, blocks, j, &bar)?;
                    partner[a] = b;
                    partner[b] = a;
                }
            }
        }
    }
    if let Some(g) = partner.iter().position(|&p| p == usize::MAX) {
        return Err(PipelineError::VerificationFailed(format!("link vertex copy {g} left unglued")));
    }

    // Γ_Y: vertices are link components, edges are matched pairs of copies
    let vertex_of = |g: usize| {
        let (i, k) = owner[g];
        inst[i].vertex_offset + inst[i].component[k]
    };
    let mut gb = GraphBuilder::with_vertices(v_off);
    let mut y_edge = vec![usize::MAX; lvert_count];
    let mut copy_of_edge = Vec::new();
    for g in 0..lvert_count {
        if y_edge[g] == usize::MAX {
            let e = gb.add_edge(vertex_of(g), vertex_of(partner[g]));
            y_edge[g] = e;
            y_edge[partner[g]] = e + 1;
            copy_of_edge.push(g);
            copy_of_edge.push(partner[g]);
        }
    }
    let gy = gb.build();

    // S_Y: corners of every instance; the boundary edge `a` leaving a corner
    // crosses to the instance glued along the copy that holds `a`
    let global_copy = |i: usize, a: Edge| -> usize {
        let k = blocks[inst[i].block].lvert_of_end(a).expect("end of a corner in the block");
        inst[i].lvert_offset + k
    };
    let corner_id = |i: usize, c: Vertex| -> usize {
        inst[i].corner_offset + inst[i].corners.binary_search(&c).expect("corner of the block")
    };
    let mut sb = GraphBuilder::with_vertices(c_off);
    let mut s_edge: HashMap<(usize, Edge), usize> = HashMap::new();
    let mut s_image = Vec::new();
    let mut s_attach = Vec::new();
    for (i, ins) in inst.iter().enumerate() {
        for &c in &ins.corners {
            for &a in s.link(c) {
                if s_edge.contains_key(&(i, a)) {
                    continue;
                }
                let g = global_copy(i, a);
                let j = owner[partner[g]].0;
                let abar = s.inv(a);
                let id = sb.add_edge(corner_id(i, c), corner_id(j, s.init(abar)));
                s_edge.insert((i, a), id);
                s_edge.insert((j, abar), id + 1);
                s_image.extend([a, abar]);
                s_attach.extend([y_edge[g], y_edge[partner[g]]]);
            }
        }
    }
    let sy = sb.build();
    let mut s_vertex_attach = vec![0; c_off];
    let mut s_vertex_image = vec![0; c_off];
    for (i, ins) in inst.iter().enumerate() {
        for &c in &ins.corners {
            s_vertex_attach[corner_id(i, c)] = vertex_of(global_copy(i, s.link(c)[0]));
            s_vertex_image[corner_id(i, c)] = c;
        }
    }

    let attach = GraphMorphism::new(sy.clone(), gy.clone(), s_vertex_attach, s_attach)
        .map_err(|e| PipelineError::VerificationFailed(format!("attaching map: {e}")))?;
    let skeleton = GraphMorphism::new(
        gy.clone(),
        gamma.clone(),
        (0..v_off)
            .map(|v| {
                let i = inst.iter().rposition(|ins| ins.vertex_offset <= v).expect("vertex owner");
                blocks[inst[i].block].base()
            })
            .collect(),
        copy_of_edge
            .iter()
            .map(|&g| {
                let (i, k) = owner[g];
                blocks[inst[i].block].lverts()[k].link_vertex
            })
            .collect(),
    )
    .map_err(|e| PipelineError::VerificationFailed(format!("skeleton map: {e}")))?;
    let boundary = GraphMorphism::new(sy, s.clone(), s_vertex_image, s_image)
        .map_err(|e| PipelineError::VerificationFailed(format!("boundary map: {e}")))?;
    let map = BranchedMap::with_induced_areas(attach, x.clone(), skeleton, boundary)?;

    let open_labels: Vec<(usize, usize)> = copy_of_edge
        .iter()
        .map(|&g| {
            let (i, k) = owner[g];
            (i, blocks[inst[i].block].open().class_of(k))
        })
        .collect();
    let origami = Origami::new(gy, Partition::from_labels(&open_labels))?;

    let mut transcript = vec![format!(
        "instances {} vertices {} edges {} faces {}",
        inst.len(),
        v_off,
        map.domain().skeleton().geometric_edge_count(),
        map.domain().face_count()
    )];
    is_pi_complex(&map, &cone.pred)?;
    transcript.push(format!("links lie in {}", cone.pred.name()));
    let phi = phi_map(&cone.catalogue, &cone.pred, &map, &origami)?;
    if phi != t {
        return Err(PipelineError::VerificationFailed(format!("block vector {phi:?} differs from {t:?}")));
    }
    transcript.push("origami essential and compatible; block vector reproduced".into());
    let c = map.domain().curvature();
    transcript.push(format!(
        "Area={} chi={} tau={}",
        fmt_rational(&c.area),
        c.chi,
        fmt_rational(&c.tau)
    ));
    Ok(Realization {
        map,
        origami,
        transcript,
    })
}

fn copy_with_ends(
    inst: &[Instance],
    blocks: &[crate::blocks::VertexBlock],
    i: usize,
    ends: &[Edge],
) -> Result<usize, PipelineError> {
    let b = &blocks[inst[i].block];
    b.lverts()
        .iter()
        .position(|lv| lv.ends == ends)
        .map(|k| inst[i].lvert_offset + k)
        .ok_or_else(|| PipelineError::VerificationFailed(format!("no copy with ends {ends:?}")))
}

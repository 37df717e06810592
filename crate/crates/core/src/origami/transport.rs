use std::collections::VecDeque;

use super::{Origami, OrigamiError};
use crate::partition::Partition;
use crate::serre_graph::{fold, Edge, Fold};

/// Pulls an essential origami on `Δ'` back along an essential fold
/// `Δ -> Δ'`, so that the fold descends to an isomorphism of quotients.
///
/// Edges over the class of `a` join `a1, a2`. Edges over the class of `ā`
/// are split between `ā1` and `ā2`: walk the vertex graph of `Δ'` from the
/// closed vertex of the image edge to `v = τ(a)` and take the side of the
/// link of `v` containing the last edge of the walk.
pub fn unfold_origami(f: &Fold, target: &Origami) -> Result<Origami, OrigamiError> {
    if !f.essential {
        return Err(OrigamiError::FoldNotEssential);
    }
    if target.base() != f.result() {
        return Err(OrigamiError::DomainMismatch);
    }
    target.require_essential()?;

    let src = f.source();
    let dst = f.result();
    let a = f.merged_edge;
    let abar = dst.inv(a);
    let v = dst.term(a);
    let (v1, _) = f.termini();
    let (abar1, abar2) = (src.inv(f.a1), src.inv(f.a2));

    // ι in Δ of a preimage of each edge of Δ'; preimages of any edge other
    // than ā share their initial vertex.
    let mut preimage_init = vec![usize::MAX; dst.edge_count()];
    for e in src.edges() {
        if e != abar1 && e != abar2 {
            preimage_init[f.edge(e)] = src.init(e);
        }
    }

    // First edge out of v on the unique path to each node of V_Ω'.
    let vg = target.graphs().vertex_graph;
    let mut first_branch = vec![usize::MAX; vg.vertex_count()];
    let mut seen = vec![false; vg.vertex_count()];
    let mut queue = VecDeque::from([v]);
    seen[v] = true;
    while let Some(x) = queue.pop_front() {
        for &h in vg.link(x) {
            let y = vg.term(h);
            if !seen[y] {
                seen[y] = true;
                // oriented edge 2e of V_Ω' is base edge e
                first_branch[y] = if x == v { h / 2 } else { first_branch[x] };
                queue.push_back(y);
            }
        }
    }

    let open = target.open_relation();
    let closed = target.closed_relation();
    let class_a = open.class_of(a);
    let class_abar = open.class_of(abar);
    let keys: Vec<(usize, u8)> = src
        .edges()
        .map(|e| {
            let image = f.edge(e);
            let k = open.class_of(image);
            if k != class_abar {
                debug_assert!(k != class_a || image == a || open.same(image, a));
                return (k, 0);
            }
            if e == abar1 {
                return (k, 1);
            }
            if e == abar2 {
                return (k, 2);
            }
            let node = dst.vertex_count() + closed.class_of(image);
            let b = first_branch[node];
            debug_assert!(b != usize::MAX && b != abar);
            (k, if preimage_init[b] == v1 { 1 } else { 2 })
        })
        .collect();
    let o = Origami::candidate(src.clone(), Partition::from_labels(&keys))?;
    debug_assert!(o.is_origami() && o.graphs_are_forests());
    Ok(o)
}

/// Least pair `a1 < a2` with `ι(a1) = ι(a2)` and `a1 ∼O a2`. For an
/// essential origami such a pair exists iff the quotient map is not an
/// immersion.
pub fn find_foldable_pair(o: &Origami) -> Result<Option<(Edge, Edge)>, OrigamiError> {
    o.require_essential()?;
    let g = o.base();
    let open = o.open_relation();
    Ok(g.edges().find_map(|a1| {
        g.link(g.init(a1))
            .iter()
            .find(|&&a2| a2 > a1 && open.same(a1, a2))
            .map(|&a2| (a1, a2))
    }))
}

/// Folds an open-equivalent pair and pushes the origami forward: the new
/// open relation is the finest one making the fold map relation-preserving.
pub fn fold_origami(o: &Origami, a1: Edge, a2: Edge) -> Result<(Fold, Origami), OrigamiError> {
    o.require_essential()?;
    let g = o.base();
    let m = g.edge_count();
    if a1 >= m || a2 >= m || a1 == a2 || g.init(a1) != g.init(a2) || !o.open_relation().same(a1, a2)
    {
        return Err(OrigamiError::PairNotOpenEquivalent(a1, a2));
    }
    let f = fold(g, a1, a2).map_err(|_| OrigamiError::PairNotOpenEquivalent(a1, a2))?;
    let open = o
        .open_relation()
        .push_forward(f.projection().edge_map(), f.result().edge_count());
    let folded = Origami::candidate(f.result().clone(), open)?;
    debug_assert!(f.essential);
    debug_assert!(folded.is_origami() && folded.graphs_are_forests());
    Ok((f, folded))
}

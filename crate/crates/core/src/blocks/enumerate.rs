use std::collections::{BTreeSet, HashMap};

use super::{BlockError, LinkVertex, VertexBlock};
use crate::complex::{BranchedComplex, LinkPredicate};
use crate::partition::{set_partitions, Partition, UnionFind};
use crate::serre_graph::{Edge, GraphBuilder, Vertex};

/// Candidate budget per vertex when none is given.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// The enumerated classes `𝒱(X)`, sorted, with their positions.
#[derive(Clone, Debug, Default)]
pub struct BlockCatalogue {
    pub blocks: Vec<VertexBlock>,
    pub index: HashMap<VertexBlock, usize>,
    /// Number of classes based at each vertex of `X`.
    pub per_vertex: Vec<usize>,
    /// Candidates examined, summed over vertices.
    pub candidates: u64,
}

impl BlockCatalogue {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn position(&self, b: &VertexBlock) -> Option<usize> {
        self.index.get(b).copied()
    }
}

/// Every vertex block over `x` whose upper link is a union of graphs in
/// `pred`, up to isomorphism over the identity of the links.
///
/// For each vertex: choose the corners making up `L̄`, split the ends at each
/// link vertex into copies (giving `L`), filter by `pred`, then choose the
/// open and closed relations fibre by fibre. Inside a fibre the two
/// relations must form a tree in `E_β`, and across fibres the closed class
/// count is forced by `V_β` being a tree. Each complete candidate counts
/// against `budget`.
pub fn enumerate_vertex_blocks(
    x: &BranchedComplex,
    pred: &LinkPredicate,
    budget: u64,
) -> Result<BlockCatalogue, BlockError> {
    let mut found = BTreeSet::new();
    let mut per_vertex = Vec::new();
    let mut candidates = 0;
    let mut trees = FibreTrees::default();
    for v in x.skeleton().vertices() {
        let before = found.len();
        candidates += enumerate_at(x, pred, v, budget, &mut trees, &mut found)?;
        per_vertex.push(found.len() - before);
    }
    let blocks: Vec<VertexBlock> = found.into_iter().collect();
    let index = blocks.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    Ok(BlockCatalogue {
        blocks,
        index,
        per_vertex,
        candidates,
    })
}

/// Pairs of relations on `k` copies whose bipartite class graph is a tree,
/// grouped by the number of closed classes.
#[derive(Default)]
struct FibreTrees {
    cache: HashMap<usize, Vec<(Vec<usize>, Vec<usize>, usize)>>,
}

impl FibreTrees {
    fn get(&mut self, k: usize) -> &[(Vec<usize>, Vec<usize>, usize)] {
        self.cache.entry(k).or_insert_with(|| {
            let parts = set_partitions(k, 1, k);
            let classes = |p: &[usize]| p.iter().max().map_or(0, |m| m + 1);
            let mut out = Vec::new();
            for o in &parts {
                for c in &parts {
                    let (no, nc) = (classes(o), classes(c));
                    if no + nc != k + 1 {
                        continue;
                    }
                    let mut uf = UnionFind::new(no + nc);
                    if (0..k).all(|i| uf.union(o[i], no + c[i])) {
                        out.push((o.clone(), c.clone(), nc));
                    }
                }
            }
            out
        })
    }
}

fn enumerate_at(
    x: &BranchedComplex,
    pred: &LinkPredicate,
    v: Vertex,
    budget: u64,
    trees: &mut FibreTrees,
    found: &mut BTreeSet<VertexBlock>,
) -> Result<u64, BlockError> {
    let s = x.boundary();
    let corners = x.corners(v);
    let link_vertices = x.skeleton().link(v).to_vec();
    let (lo, hi) = pred.valence_bounds();
    let mut spent = 0u64;
    let over_budget = || BlockError::EnumerationBudgetExceeded { vertex: v, budget };
    if corners.len() >= 64 {
        return Err(over_budget());
    }
    for mask in 1u64..(1u64 << corners.len()) {
        spent += 1;
        if spent > budget {
            return Err(over_budget());
        }
        // ends at each link vertex, in link order
        let mut ends: Vec<Vec<Edge>> = vec![Vec::new(); link_vertices.len()];
        for (k, &c) in corners.iter().enumerate() {
            if mask >> k & 1 == 1 {
                for &a in s.link(c) {
                    let p = link_vertices.binary_search(&x.attach().edge(a)).expect("link vertex");
                    ends[p].push(a);
                }
            }
        }
        let fibres: Vec<(Edge, Vec<Edge>)> = link_vertices
            .iter()
            .zip(ends)
            .filter(|(_, e)| !e.is_empty())
            .map(|(&lv, mut e)| {
                e.sort_unstable();
                (lv, e)
            })
            .collect();
        let splits: Vec<Vec<Vec<usize>>> = fibres
            .iter()
            .map(|(_, e)| set_partitions(e.len(), lo, hi.unwrap_or(e.len()).max(lo)))
            .collect();
        if splits.iter().any(Vec::is_empty) {
            continue;
        }
        let mut choice = vec![0; fibres.len()];
        loop {
            let lverts = split_lverts(&fibres, &splits, &choice);
            spent += 1;
            if spent > budget {
                return Err(over_budget());
            }
            if let Some(component) = accepted_components(x, pred, &lverts) {
                spent += relations(v, &lverts, &component, trees, budget - spent.min(budget), found)
                    .ok_or_else(over_budget)?;
                if spent > budget {
                    return Err(over_budget());
                }
            }
            // odometer over the per-fibre splits
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < splits[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    Ok(spent)
}

fn split_lverts(fibres: &[(Edge, Vec<Edge>)], splits: &[Vec<Vec<usize>>], choice: &[usize]) -> Vec<LinkVertex> {
    let mut out = Vec::new();
    for (f, (lv, ends)) in fibres.iter().enumerate() {
        let labels = &splits[f][choice[f]];
        let classes = labels.iter().max().map_or(0, |m| m + 1);
        for k in 0..classes {
            out.push(LinkVertex {
                link_vertex: *lv,
                ends: ends.iter().zip(labels).filter(|(_, &l)| l == k).map(|(&e, _)| e).collect(),
            });
        }
    }
    out
}

/// Component labels of `L` if every component lies in `pred`.
fn accepted_components(x: &BranchedComplex, pred: &LinkPredicate, lverts: &[LinkVertex]) -> Option<Vec<usize>> {
    let s = x.boundary();
    let owner = |a: Edge| lverts.iter().position(|lv| lv.ends.contains(&a)).expect("end present");
    let mut b = GraphBuilder::with_vertices(lverts.len());
    let mut seen = Vec::new();
    for lv in lverts {
        for &a in &lv.ends {
            let c = s.init(a);
            if seen.contains(&c) {
                continue;
            }
            seen.push(c);
            let (a0, a2) = (s.link(c)[0], s.link(c)[1]);
            b.add_edge(owner(a2), owner(a0));
        }
    }
    let g = b.build();
    let labels = Partition::from_labels(&g.component_labels());
    for comp in 0..labels.class_count() {
        let keep: Vec<bool> = labels.labels().iter().map(|&l| l == comp).collect();
        if !pred.accepts(&g.induced_subgraph(&keep).0) {
            return None;
        }
    }
    Some(labels.labels().to_vec())
}

/// Backtracks over fibre-wise tree relations with the forced closed class
/// total, keeping those with `V_β` a tree and no separation. Returns the
/// number of complete candidates, or `None` past `budget`.
fn relations(
    v: Vertex,
    lverts: &[LinkVertex],
    component: &[usize],
    trees: &mut FibreTrees,
    budget: u64,
    found: &mut BTreeSet<VertexBlock>,
) -> Option<u64> {
    let n = lverts.len();
    let nc = component.iter().max().map_or(0, |m| m + 1);
    let target = n + 1 - nc;
    // copies grouped by fibre, in order (split_lverts keeps fibres contiguous)
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match groups.last_mut() {
            Some(g) if lverts[g[0]].link_vertex == lverts[i].link_vertex => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let options: Vec<Vec<(Vec<usize>, Vec<usize>, usize)>> =
        groups.iter().map(|g| trees.get(g.len()).to_vec()).collect();
    // suffix bounds on the closed class count
    let mut min_rest = vec![0; groups.len() + 1];
    let mut max_rest = vec![0; groups.len() + 1];
    for f in (0..groups.len()).rev() {
        min_rest[f] = min_rest[f + 1] + 1;
        max_rest[f] = max_rest[f + 1] + groups[f].len();
    }
    if target < min_rest[0] || target > max_rest[0] {
        return Some(0);
    }
    let mut spent = 0u64;
    let mut open = vec![0; n];
    let mut closed = vec![0; n];
    let mut stack: Vec<usize> = vec![0];
    let mut used = vec![(0usize, 0usize, 0usize)]; // (open offset, closed offset, closed total) before fibre f
    while let Some(&k) = stack.last() {
        let f = stack.len() - 1;
        if f == groups.len() {
            spent += 1;
            if spent > budget {
                return None;
            }
            let o = Partition::from_labels(&open);
            let c = Partition::from_labels(&closed);
            if vertex_graph_ok(component, nc, &c, &o) {
                found.insert(VertexBlock::new(v, lverts.to_vec(), &o, &c));
            }
            stack.pop();
            used.pop();
            if let Some(top) = stack.last_mut() {
                *top += 1;
            }
            continue;
        }
        let (oo, co, total) = used[f];
        let next = (k..options[f].len()).find(|&j| {
            let t = total + options[f][j].2;
            t + min_rest[f + 1] <= target && target <= t + max_rest[f + 1]
        });
        match next {
            None => {
                stack.pop();
                used.pop();
                if let Some(top) = stack.last_mut() {
                    *top += 1;
                }
            }
            Some(j) => {
                *stack.last_mut().unwrap() = j;
                let (ol, cl, ncl) = &options[f][j];
                for (idx, &i) in groups[f].iter().enumerate() {
                    open[i] = oo + ol[idx];
                    closed[i] = co + cl[idx];
                }
                let no = ol.iter().max().map_or(0, |m| m + 1);
                used.push((oo + no, co + ncl, total + ncl));
                stack.push(0);
            }
        }
    }
    Some(spent)
}

/// `V_β` is a tree and condition (v) holds.
fn vertex_graph_ok(component: &[usize], nc: usize, closed: &Partition, open: &Partition) -> bool {
    let n = component.len();
    let mut uf = UnionFind::new(nc + closed.class_count());
    if !(0..n).all(|i| uf.union(component[i], nc + closed.class_of(i))) || uf.set_count() != 1 {
        return false;
    }
    super::separations(component, nc, closed, open).is_empty()
}

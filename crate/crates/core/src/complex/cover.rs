use super::{BranchedComplex, BranchedMap, MapError};
use crate::serre_graph::{GraphError, GraphMorphism, SerreGraph};

/// The `d`-sheeted covering of `x` given by one permutation of the sheets
/// per geometric edge (in the order of `geometric_edges`): sheet `i` of the
/// representative `e` runs to sheet `perms[k][i]`. Boundary circles lift
/// along, so the covering map is a branched immersion with induced areas.
pub fn covering_map(x: &BranchedComplex, d: usize, perms: &[Vec<usize>]) -> Result<BranchedMap, MapError> {
    let gamma = x.skeleton();
    let reps: Vec<usize> = gamma.geometric_edges().collect();
    if perms.len() != reps.len() || perms.iter().any(|p| !is_permutation(p, d)) {
        return Err(MapError::ComplexMismatch);
    }
    // sigma[e][i]: sheet reached from sheet i along oriented edge e
    let mut sigma = vec![Vec::new(); gamma.edge_count()];
    for (k, &e) in reps.iter().enumerate() {
        let mut back = vec![0; d];
        for (i, &j) in perms[k].iter().enumerate() {
            back[j] = i;
        }
        sigma[e] = perms[k].clone();
        sigma[gamma.inv(e)] = back;
    }
    let lift = |g: &SerreGraph, over: &dyn Fn(usize) -> usize| -> Result<SerreGraph, GraphError> {
        let init = g.edges().flat_map(|e| (0..d).map(move |i| g.init(e) * d + i)).collect();
        let inv = g
            .edges()
            .flat_map(|e| {
                let s = &sigma[over(e)];
                (0..d).map(move |i| g.inv(e) * d + s[i])
            })
            .collect();
        SerreGraph::new(g.vertex_count() * d, init, inv)
    };
    let gy = lift(gamma, &|e| e).map_err(|_| MapError::ComplexMismatch)?;
    let w = x.attach();
    let sy = lift(x.boundary(), &|s| w.edge(s)).map_err(|_| MapError::ComplexMismatch)?;
    let project = |dom: &SerreGraph, cod: &SerreGraph| {
        GraphMorphism::new(
            dom.clone(),
            cod.clone(),
            dom.vertices().map(|v| v / d).collect(),
            dom.edges().map(|e| e / d).collect(),
        )
    };
    let attach = GraphMorphism::new(
        sy.clone(),
        gy.clone(),
        sy.vertices().map(|u| w.vertex(u / d) * d + u % d).collect(),
        sy.edges().map(|s| w.edge(s / d) * d + s % d).collect(),
    )?;
    BranchedMap::with_induced_areas(attach, x.clone(), project(&gy, gamma)?, project(&sy, x.boundary())?)
}

fn is_permutation(p: &[usize], d: usize) -> bool {
    let mut seen = vec![false; d];
    p.len() == d && p.iter().all(|&j| j < d && !std::mem::replace(&mut seen[j], true))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::torus;
    use super::super::is_branched_immersion;
    use super::*;
    use crate::lp::int;

    #[test]
    fn coverings_of_the_torus() {
        let x = torus();
        let phi = covering_map(&x, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(is_branched_immersion(&phi));
        let y = phi.domain();
        assert_eq!(y.skeleton().vertex_count(), 2);
        assert_eq!(y.face_count(), 2);
        assert_eq!(y.total_area(), int(2));
        assert_eq!(y.curvature().tau, int(0));
        let trivial = covering_map(&x, 3, &[vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert_eq!(trivial.domain().face_count(), 3);
        assert!(covering_map(&x, 2, &[vec![0, 0], vec![0, 1]]).is_err());
    }
}

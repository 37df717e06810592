use super::{unfold_origami, Origami, OrigamiError};
use crate::serre_graph::{stallings_fold, Fold, GraphMorphism, SerreGraph};

/// Starts from the trivial origami on `last` and unfolds backwards along
/// `folds`, which must all be essential and compose to a map onto `last`.
pub fn origami_along_folds(folds: &[Fold], last: &SerreGraph) -> Result<Origami, OrigamiError> {
    let mut o = Origami::trivial(last);
    for f in folds.iter().rev() {
        o = unfold_origami(f, &o)?;
    }
    Ok(o)
}

/// An essential origami whose quotient map is identified with `f`, for `f`
/// a homotopy equivalence: folding `f` must end in an isomorphism and every
/// fold must be essential.
pub fn origami_from_homotopy_equivalence(f: &GraphMorphism) -> Result<Origami, OrigamiError> {
    let s = stallings_fold(f);
    if !s.fbar.is_bijective() || !s.all_essential() {
        return Err(OrigamiError::NotHomotopyEquivalence);
    }
    origami_along_folds(&s.folds, &s.folded)
}

/// Returns an essential origami compatible with `f` when `f` is injective on
/// fundamental groups, and `None` otherwise. Both graphs must be finite,
/// connected and core.
pub fn certify_pi1_injective(f: &GraphMorphism) -> Result<Option<Origami>, OrigamiError> {
    let connected_core = |g: &SerreGraph| g.is_connected() && g.is_core();
    if !connected_core(f.domain()) || !connected_core(f.codomain()) {
        return Err(OrigamiError::NotCoreOrConnected);
    }
    let s = stallings_fold(f);
    if !s.all_essential() {
        return Ok(None);
    }
    let o = origami_along_folds(&s.folds, &s.folded)?;
    debug_assert_eq!(verify_certificate(f, &o), Ok(true));
    Ok(Some(o))
}

/// Re-checks a certificate from scratch: origami axioms, essentiality and
/// compatibility with `f`.
pub fn verify_certificate(f: &GraphMorphism, o: &Origami) -> Result<bool, OrigamiError> {
    if f.domain() != o.base() {
        return Err(OrigamiError::DomainMismatch);
    }
    Ok(o.is_origami() && o.graphs_are_forests() && o.is_compatible(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::serre_graph::{
        cycle, find_isomorphism, path, pi1_injective_oracle, rose, theta, GraphBuilder,
    };

    fn double_cover() -> GraphMorphism {
        let dom = cycle(8);
        let emap = dom.edges().map(|e| e % 8).collect();
        GraphMorphism::from_edge_map(dom, cycle(4), emap, |_| 0).unwrap()
    }

    #[test]
    fn immersion_gets_trivial_certificate() {
        let f = double_cover();
        let o = certify_pi1_injective(&f).unwrap().unwrap();
        assert_eq!(o, Origami::trivial(f.domain()));
    }

    #[test]
    fn collapsing_petals_is_not_injective() {
        let f = GraphMorphism::from_edge_map(rose(2), rose(1), vec![0, 1, 0, 1], |_| 0).unwrap();
        assert_eq!(certify_pi1_injective(&f), Ok(None));
        assert_eq!(pi1_injective_oracle(&f), Ok(false));
    }

    #[test]
    fn theta_onto_rose() {
        // two parallel theta edges onto the same petal: the fold closes a loop
        let f = GraphMorphism::from_edge_map(theta(), rose(2), vec![0, 1, 0, 1, 2, 3], |_| 0)
            .unwrap();
        assert_eq!(pi1_injective_oracle(&f), Ok(false));
        assert_eq!(certify_pi1_injective(&f), Ok(None));
    }

    #[test]
    fn homotopy_equivalence_realised() {
        // theta with two of its edges subdivided; relate the first halves
        let mut b = GraphBuilder::with_vertices(4);
        b.add_edge(0, 1);
        b.add_edge(0, 1);
        b.add_edge(0, 2);
        b.add_edge(0, 3);
        b.add_edge(2, 1);
        b.add_edge(3, 1);
        let g = b.build();
        let o = Origami::new(g, Partition::from_classes(12, &[vec![4, 6]]).unwrap()).unwrap();
        assert_eq!(o.is_essential(), Ok(true));
        let q = o.quotient().unwrap();
        let realised = origami_from_homotopy_equivalence(&q.q).unwrap();
        assert_eq!(realised.is_essential(), Ok(true));
        assert_eq!(realised.is_compatible(&q.q), Ok(true));
        let rq = realised.quotient().unwrap();
        assert!(find_isomorphism(&rq.quotient, &q.quotient).is_some());
        assert_eq!(certify_pi1_injective(&q.q).map(|c| c.is_some()), Ok(true));
    }

    #[test]
    fn rejects_non_core() {
        let f = GraphMorphism::identity(&path(2));
        assert_eq!(certify_pi1_injective(&f), Err(OrigamiError::NotCoreOrConnected));
    }
}

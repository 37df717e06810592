//! X = <a, b | aab, abb> is a complex on which the least curvature over
//! visibly irreducible complexes (1/3) is strictly below the least
//! curvature over surfaces (1/2). The witness below is built by hand, with
//! no help from the block enumeration, and then measured by the pipeline.

use rcurv::blocks::{is_pi_complex, phi_map, DEFAULT_BUDGET};
use rcurv::complex::{
    is_branched_immersion, is_branched_immersion_by_fibre_product, is_essential, BranchedComplex, BranchedMap,
    LinkPredicate,
};
use rcurv::lp::{int, ratio, Sense};
use rcurv::origami::Origami;
use rcurv::pipeline::{build_cone, extremize_cone, to_rationals, Extended};
use rcurv::serre_graph::{rose, GraphBuilder, GraphMorphism};

fn x() -> BranchedComplex {
    BranchedComplex::from_presentation(&['a', 'b'], &["aab", "abb"]).unwrap()
}

/// Γ_Y is the double cover of the rose where `a` lifts to a loop at each
/// sheet and `b` swaps the sheets. One face runs twice around `aab`
/// (area 2), the other once around `abb` (area 1).
fn witness() -> BranchedMap {
    let x = x();
    let mut b = GraphBuilder::with_vertices(2);
    let a0 = b.add_edge(0, 0);
    let a1 = b.add_edge(1, 1);
    let b0 = b.add_edge(0, 1);
    let b1 = b.add_edge(1, 0);
    let gy = b.build();
    let words = vec![vec![a0, a0, b0, a1, a1, b1], vec![a0, b0, b1]];
    let y = BranchedComplex::from_words(gy.clone(), &words)
        .unwrap()
        .with_areas(vec![int(2), int(1)])
        .unwrap();

    let skeleton = GraphMorphism::new(gy, rose(2), vec![0, 0], vec![0, 1, 0, 1, 2, 3, 2, 3]).unwrap();
    // boundary circles of X: aab on vertices 0..3, abb on vertices 3..6;
    // the first circle of Y wraps twice around aab
    let sy = y.boundary().clone();
    let vmap: Vec<usize> = (0..6).map(|j| j % 3).chain(3..6).collect();
    let emap: Vec<usize> = (0..6)
        .flat_map(|j| [2 * (j % 3), 2 * (j % 3) + 1])
        .chain(6..12)
        .collect();
    let boundary = GraphMorphism::new(sy, x.boundary().clone(), vmap, emap).unwrap();
    BranchedMap::new(y, x, skeleton, boundary).unwrap()
}

#[test]
fn witness_is_an_essential_irreducible_complex_of_curvature_one_third() {
    let phi = witness();
    assert_eq!(phi.multiplicities(), &[2, 1]);
    assert!(is_branched_immersion(&phi));
    assert!(is_branched_immersion_by_fibre_product(&phi));
    assert_eq!(is_essential(&phi), Ok(true));

    let y = phi.domain();
    let mut valences = Vec::new();
    for v in y.skeleton().vertices() {
        let lk = y.vertex_link(v).unwrap().graph;
        assert!(lk.is_connected());
        assert!(lk.vertex_count() >= 2);
        let mut val: Vec<usize> = lk.vertices().map(|u| lk.valence(u)).collect();
        val.sort_unstable();
        valences.push(val);
    }
    valences.sort();
    assert_eq!(valences, vec![vec![2, 2, 2, 2], vec![2, 2, 3, 3]]);
    assert!(is_pi_complex(&phi, &LinkPredicate::Irreducible).is_ok());
    assert!(is_pi_complex(&phi, &LinkPredicate::Surface).is_err());

    let c = y.curvature();
    assert_eq!(c.area, int(3));
    assert_eq!(c.chi, -2);
    assert_eq!(c.kappa, Some(ratio(1, 3)));
}

#[test]
fn witness_lands_in_the_cone_at_the_minimum() {
    let x = x();
    let phi = witness();
    let pred = LinkPredicate::Irreducible;
    let cone = build_cone(&x, &pred, DEFAULT_BUDGET).unwrap();
    let o = Origami::trivial(phi.domain().skeleton());
    assert_eq!(o.is_essential(), Ok(true));
    let t = phi_map(&cone.catalogue, &pred, &phi, &o).unwrap();
    assert!(cone.contains_integer(&t));
    assert_eq!(cone.kappa_of(&to_rationals(&t)), Some(ratio(1, 3)));
    let min = extremize_cone(&x, &cone, Sense::Min, "rho-").unwrap();
    assert_eq!(min.value, Extended::Finite(ratio(1, 3)));
    let max = extremize_cone(&x, &cone, Sense::Max, "rho+").unwrap();
    assert_eq!(max.value, Extended::Finite(ratio(1, 2)));
}

/// Every surface over X has curvature exactly 1/2: bigon and quadrilateral
/// links occur equally often. Checked here on all small cone points.
#[test]
fn surfaces_over_x_all_have_curvature_one_half() {
    let x = x();
    let cone = build_cone(&x, &LinkPredicate::Surface, DEFAULT_BUDGET).unwrap();
    let points = cone.integer_points(4);
    assert!(!points.is_empty());
    for t in &points {
        assert_eq!(cone.kappa_of(&to_rationals(t)), Some(ratio(1, 2)), "{t:?}");
    }
    for sense in [Sense::Max, Sense::Min] {
        let r = extremize_cone(&x, &cone, sense, "sigma").unwrap();
        assert_eq!(r.value, Extended::Finite(ratio(1, 2)));
    }
}

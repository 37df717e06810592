mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rcurv::origami::{
    certify_pi1_injective, find_foldable_pair, fold_origami, origamis_isomorphic, unfold_origami,
    verify_certificate, Origami,
};
use rcurv::serre_graph::{
    betti, core_of, find_isomorphism, fold, pi1_injective_oracle, stallings_fold, GraphMorphism,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificate_iff_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = common::connected_core_graph(&mut rng, 4, 6);
        let cod = common::codomain(&mut rng);
        if let Some(f) = common::try_morphism(&mut rng, &dom, &cod) {
            if cod.is_core() && cod.is_connected() {
                let oracle = pi1_injective_oracle(&f).unwrap();
                let cert = certify_pi1_injective(&f).unwrap();
                prop_assert_eq!(cert.is_some(), oracle);
                if let Some(o) = cert {
                    prop_assert_eq!(verify_certificate(&f, &o), Ok(true));
                }
            }
        }
    }

    #[test]
    fn folding_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dom = common::connected_core_graph(&mut rng, 4, 6);
        let cod = common::codomain(&mut rng);
        if let Some(f) = common::try_morphism(&mut rng, &dom, &cod) {
            let s = stallings_fold(&f);
            prop_assert!(s.fbar.is_immersion());
            prop_assert_eq!(s.f0.then(&s.fbar).unwrap(), f.clone());
            let (b0, b1) = (betti(&dom).total, betti(&s.folded).total);
            prop_assert!(b1 <= b0);
            prop_assert_eq!(b1 == b0, s.all_essential());
            for step in &s.folds {
                prop_assert_eq!(step.result().edge_count() + 2, step.source().edge_count());
            }
        }
    }

    #[test]
    fn core_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::connected_core_graph(&mut rng, 4, 6);
        let mut grown = g.clone();
        for _ in 0..3 {
            if let Some(f) = common::random_unfold(&mut rng, &grown) {
                grown = f.source().clone();
            }
        }
        let c = core_of(&grown);
        prop_assert_eq!(core_of(&c), c.clone());
        prop_assert_eq!(betti(&c).total, betti(&grown).total);
    }

    #[test]
    fn transport_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = common::connected_core_graph(&mut rng, 3, 4);
        let mut o = Origami::trivial(&g);
        for _ in 0..3 {
            let Some(f) = common::random_unfold(&mut rng, &g) else { break };
            let lifted = unfold_origami(&f, &o).unwrap();
            prop_assert_eq!(lifted.is_essential(), Ok(true));
            let q_up = lifted.quotient().unwrap().quotient;
            let q_down = o.quotient().unwrap().quotient;
            prop_assert!(find_isomorphism(&q_up, &q_down).is_some());
            let (back, folded) = fold_origami(&lifted, f.a1, f.a2).unwrap();
            prop_assert!(back.essential);
            prop_assert!(origamis_isomorphic(&folded, &o));
            prop_assert_eq!(&folded, &o);
            // producing a foldable pair agrees with the quotient map
            let q = lifted.quotient().unwrap().q;
            prop_assert_eq!(find_foldable_pair(&lifted).unwrap().is_none(), q.is_immersion());
            g = f.source().clone();
            o = lifted;
        }
    }
}

#[test]
fn fold_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 50 {
        let dom = common::connected_core_graph(&mut rng, 4, 6);
        let cod = common::codomain(&mut rng);
        let Some(f) = common::try_morphism(&mut rng, &dom, &cod) else { continue };
        let s = stallings_fold(&f);
        // fold the greatest pair first instead of the least
        let mut g = dom.clone();
        let mut h: Vec<usize> = f.edge_map().to_vec();
        loop {
            let pair = g.edges().rev().find_map(|a1| {
                g.link(g.init(a1))
                    .iter()
                    .rev()
                    .find(|&&a2| a2 != a1 && h[a2] == h[a1])
                    .map(|&a2| (a1, a2))
            });
            let Some((a1, a2)) = pair else { break };
            let step = fold(&g, a1, a2).unwrap();
            let mut nh = vec![0; step.result().edge_count()];
            for e in g.edges() {
                nh[step.edge(e)] = h[e];
            }
            h = nh;
            g = step.result().clone();
        }
        assert!(find_isomorphism(&g, &s.folded).is_some());
        checked += 1;
    }
}

#[test]
fn fibre_product_with_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let dom = common::connected_core_graph(&mut rng, 4, 6);
        let cod = common::codomain(&mut rng);
        let Some(f) = common::try_morphism(&mut rng, &dom, &cod) else { continue };
        let id = GraphMorphism::identity(&cod);
        let p = rcurv::serre_graph::fibre_product(&f, &id).unwrap();
        assert!(find_isomorphism(&p.graph, &dom).is_some());
    }
}

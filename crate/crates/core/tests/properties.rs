use catmt::amalgams::{cocones, enumerate_types, jointly_connected};
use catmt::cat::{compose, Cospan, FinMorphism, Obj, Span};
use catmt::concrete::{pushout, CatKind, FinGraph};
use catmt::exhaustion::{filtration_oracle, full_indices, Filtration};
use catmt::fo::{
    canonical_form, count_types, cut_types_demo, extract_indiscernibles, is_independent, order_property_witness,
    qf_type, FinStructure, QFFormula,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn set_map(dom: usize, cod: usize, map: Vec<usize>) -> FinMorphism {
    FinMorphism::from_map(Obj::Set(dom), Obj::Set(cod), map, CatKind::Set)
}

fn map_into(dom: usize, cod: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..cod, dom)
}

fn structure(n: usize, unary: &[bool], binary: &[bool]) -> FinStructure {
    let p = (0..n).filter(|&i| unary[i]).map(|i| vec![i]).collect();
    let r = (0..n * n).filter(|&c| binary[c]).map(|c| vec![c / n, c % n]).collect();
    FinStructure::new(n)
        .with_relation("P", 1, p)
        .unwrap()
        .with_relation("R", 2, r)
        .unwrap()
}

fn arb_structure() -> impl Strategy<Value = FinStructure> {
    (2usize..=5).prop_flat_map(|n| {
        (proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(any::<bool>(), n * n))
            .prop_map(move |(u, b)| structure(n, &u, &b))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn injections_are_exactly_the_monos(dom in 0usize..5, cod in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map: Vec<usize> = (0..dom).map(|_| rand::Rng::gen_range(&mut rng, 0..cod)).collect();
        let f = set_map(dom, cod, map.clone());
        let distinct = map.iter().collect::<BTreeSet<_>>().len() == dom;
        prop_assert_eq!(f.is_injective(), distinct);
        prop_assert_eq!(CatKind::SetMono.contains(&f.with_class(CatKind::SetMono)), distinct);
    }

    #[test]
    fn pushout_mediator_is_the_factoring_map(
        (d, b, c, l, r) in (0usize..3, 1usize..4, 1usize..4)
            .prop_flat_map(|(d, b, c)| (Just(d), Just(b), Just(c), map_into(d, b), map_into(d, c))),
        e in 1usize..4,
        seed in any::<u64>(),
    ) {
        let span = Span::new(set_map(d, b, l), set_map(d, c, r)).unwrap();
        let po = pushout(&span, CatKind::Set).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = set_map(po.apex.size(), e, (0..po.apex.size()).map(|_| rand::Rng::gen_range(&mut rng, 0..e)).collect());
        let cocone = Cospan { left: compose(&h, &po.left_inj).unwrap(), right: compose(&h, &po.right_inj).unwrap() };
        let m = po.mediator(&cocone).unwrap();
        prop_assert_eq!(m.carrier_map(), h.carrier_map());
    }

    #[test]
    fn qf_types_are_sound(n in arb_structure(), pmask in 0u32..32, seed in any::<u64>()) {
        let params: Vec<usize> = (0..n.n).filter(|i| pmask >> i & 1 == 1).collect();
        let tuples: Vec<[usize; 2]> = (0..n.n).flat_map(|a| (0..n.n).map(move |b| [a, b])).collect();
        let types: Vec<_> = tuples.iter().map(|t| qf_type(t, &params, &n)).collect();
        let vars = vec!["x".to_string(), "y".to_string()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let formulas: Vec<QFFormula> =
            (0..1000).map(|_| QFFormula::random(&mut rng, &vars, &n.signature(), &params, 3)).collect();
        for (i, j) in (0..tuples.len()).flat_map(|i| (i + 1..tuples.len()).map(move |j| (i, j))) {
            if types[i] == types[j] {
                for phi in &formulas {
                    prop_assert_eq!(phi.eval(&tuples[i], &n).unwrap(), phi.eval(&tuples[j], &n).unwrap(), "{}", phi);
                }
            }
        }
    }

    #[test]
    fn type_counts_grow_with_the_base(n in arb_structure(), small in 0u32..32, extra in 0u32..32) {
        let b: Vec<usize> = (0..n.n).filter(|i| small >> i & 1 == 1).collect();
        let b2: Vec<usize> = (0..n.n).filter(|i| (small | extra) >> i & 1 == 1).collect();
        prop_assert!(count_types(&b, &n, 1) <= count_types(&b2, &n, 1));
    }

    #[test]
    fn independence_is_monotone(n in arb_structure(), m in 1u32..32, b in 0u32..32, a in 0usize..5, s in 1usize..4) {
        let a = a % n.n;
        let mv: Vec<usize> = (0..n.n).filter(|i| m >> i & 1 == 1).collect();
        let bv: Vec<usize> = (0..n.n).filter(|i| b >> i & 1 == 1).collect();
        prop_assume!(!mv.is_empty());
        if is_independent(&[a], &mv, &bv, &n, s + 1) {
            prop_assert!(is_independent(&[a], &mv, &bv, &n, s));
        }
        if is_independent(&[a], &mv, &bv, &n, s) {
            prop_assert!(is_independent(&[a], &mv, &bv[..bv.len() / 2], &n, s));
        }
    }

    #[test]
    fn canonical_form_ignores_labels(n in arb_structure(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..n.n).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        prop_assert_eq!(canonical_form(&n), canonical_form(&n.permuted(&perm)));
    }

    #[test]
    fn extracted_indiscernibles_replay(code in 0u64..1 << 21) {
        let n = FinStructure::from_graph(&FinGraph::from_code(7, code));
        let seq: Vec<Vec<usize>> = (0..7).map(|i| vec![i]).collect();
        let delta = [QFFormula::parse("E(x,y)").unwrap()];
        let w = extract_indiscernibles(&seq, &delta, &n, 3).unwrap().unwrap();
        prop_assert!(w.replay(&n).unwrap());
    }

    #[test]
    fn full_indices_match_the_oracle(seed in any::<u64>(), len in 1usize..60, width in 1usize..10) {
        let f = Filtration::random(&mut ChaCha8Rng::seed_from_u64(seed), len, width);
        prop_assert_eq!(full_indices(&f.stages()).indices, filtration_oracle(&f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn set_mono_types_over_m(m in 0usize..4) {
        let space = enumerate_types(&Obj::Set(m), CatKind::SetMono, m + 1).unwrap();
        prop_assert_eq!(space.classes.len(), m + 1);
    }

    #[test]
    fn joint_connectedness_is_reflexive_and_symmetric(
        d in 0usize..2,
        b in 1usize..3,
        c in 1usize..3,
    ) {
        let kind = CatKind::SetMono;
        let inj = |dom: usize, cod: usize, map: Vec<usize>| FinMorphism::from_map(Obj::Set(dom), Obj::Set(cod), map, kind);
        let span = Span::new(inj(d, b, (0..d).collect()), inj(d, c, (0..d).collect())).unwrap();
        let all = cocones(&span, kind, 4).unwrap();
        for x in &all {
            prop_assert!(jointly_connected(x, x, kind, 8).is_connected());
            for y in &all {
                prop_assert_eq!(jointly_connected(x, y, kind, 8).is_connected(), jointly_connected(y, x, kind, 8).is_connected());
            }
        }
    }
}

#[test]
fn order_witness_forces_cut_types() {
    let lt = QFFormula::parse("lt(x,y)").unwrap();
    for n in 1..=6 {
        let w = order_property_witness(&lt, &FinStructure::linear_order(n), n).unwrap().unwrap();
        assert_eq!(w.len(), n);
        assert!(cut_types_demo(n) > n);
    }
}

use std::collections::HashMap;

use conrep::congruence::{prime_intervals, principal_congruence, CongruenceLattice};
use conrep::io::{parse_document, serialize, LatticeDocument};
use conrep::iso::automorphisms;
use conrep::quasicolor::{dker, is_quasi_coloring, preogen, Color, ColoredLattice, QuasiOrder, Retraction};
use conrep::search::random_lattice;
use conrep::FiniteLattice;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lattice(seed: u64, n: usize) -> FiniteLattice {
    random_lattice(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn colors(n: u32) -> Vec<Color> {
    (0..n).map(Color::plain).collect()
}

fn pairs_strategy(n: u32) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((0..n, 0..n), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn meet_and_join_are_bounds(seed in any::<u64>(), n in 1usize..=10) {
        let l = lattice(seed, n);
        prop_assert_eq!(l.len(), n);
        for x in l.elements() {
            for y in l.elements() {
                prop_assert_eq!(l.meet(x, y), l.meet(y, x));
                prop_assert_eq!(l.join(x, l.meet(x, y)), x);
                prop_assert_eq!(l.leq(x, y), l.meet(x, y) == x);
            }
        }
    }

    #[test]
    fn congruence_classes_match_closure(seed in any::<u64>(), n in 2usize..=9) {
        let l = lattice(seed, n);
        let con = CongruenceLattice::new(&l);
        for p in prime_intervals(&l) {
            let brute = principal_congruence(&l, p.lower, p.upper);
            let mask = con.con_pair_mask(&l, p.lower, p.upper);
            let elem = con.element_of(&mask).unwrap();
            prop_assert_eq!(con.congruence(&l, elem), brute);
        }
        prop_assert!(con.lattice().is_distributive());
    }

    #[test]
    fn natural_coloring_is_a_quasi_coloring(seed in any::<u64>(), n in 2usize..=9) {
        let cl = ColoredLattice::natural(lattice(seed, n));
        prop_assert!(is_quasi_coloring(&cl).is_ok());
        prop_assert!(cl.colors.is_order());
    }

    #[test]
    fn preogen_is_a_closure(a in pairs_strategy(5), b in pairs_strategy(5)) {
        let c = colors(5);
        let to = |v: &[(u32, u32)]| v.iter().map(|&(x, y)| (Color::plain(x), Color::plain(y))).collect::<Vec<_>>();
        let (pa, pb) = (to(&a), to(&b));
        let qa = preogen(&c, &pa);
        for &(x, y) in &pa {
            prop_assert!(qa.le(x, y));
        }
        prop_assert_eq!(preogen(&c, &qa.pairs()), qa.clone());
        let mut both = pa.clone();
        both.extend(pb);
        prop_assert!(qa.is_subrelation(&preogen(&c, &both)));
    }

    #[test]
    fn homomorphism_iff_kernel_contains_source(a in pairs_strategy(4), b in pairs_strategy(3), f in (0u32..3).prop_flat_map(|x| Just(vec![0u32, 1, 2, x]).prop_shuffle())) {
        let (src_c, dst_c) = (colors(4), colors(3));
        let to = |v: &[(u32, u32)]| v.iter().map(|&(x, y)| (Color::plain(x), Color::plain(y))).collect::<Vec<_>>();
        let src = preogen(&src_c, &to(&a));
        let dst = preogen(&dst_c, &to(&b));
        let map: HashMap<Color, Color> = (0..4).map(|i| (Color::plain(i), Color::plain(f[i as usize]))).collect();
        let hom = src.pairs().iter().all(|&(x, y)| dst.le(map[&x], map[&y]));
        let r = Retraction::new(src.clone(), dst, map).unwrap();
        prop_assert_eq!(hom, src.is_subrelation(&dker(&r)));
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), n in 1usize..=10) {
        let l = lattice(seed, n);
        let text = serialize(&LatticeDocument::from_lattice("L", &l));
        let doc = parse_document(&text).unwrap();
        prop_assert_eq!(serialize(&doc), text.clone());
        let back = doc.to_lattice().unwrap();
        prop_assert!(conrep::iso::are_isomorphic(&back, &l));
    }

    #[test]
    fn automorphism_count_ignores_labels(seed in any::<u64>(), n in 1usize..=9, shift in 0usize..9) {
        let l = lattice(seed, n);
        let names: Vec<String> = l.names().to_vec();
        let mut order: Vec<usize> = (0..n).collect();
        order.rotate_left(shift % n);
        let up = order.iter().map(|&x| {
            let pos: Vec<usize> = l.up_set(x).iter().map(|y| order.iter().position(|&z| z == y).unwrap()).collect();
            pos.into_iter().collect::<conrep::BitSet>().resized(n)
        }).collect();
        let shuffled = FiniteLattice::from_up_sets(order.iter().map(|&x| names[x].clone()).collect(), up).unwrap();
        prop_assert_eq!(automorphisms(&shuffled).len(), automorphisms(&l).len());
    }

    #[test]
    fn quasiorder_reflects_to_congruence_poset(seed in any::<u64>(), n in 2usize..=8) {
        let l = lattice(seed, n);
        let cl = ColoredLattice::natural(l.clone());
        let con = CongruenceLattice::new(&l);
        prop_assert_eq!(cl.colors.len(), con.irreducible_count());
        let chain = QuasiOrder::chain(&colors(2));
        prop_assert!(chain.is_order());
    }
}

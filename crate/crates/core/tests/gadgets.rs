mod common;

use common::*;
use conrep::congruence::{CongruenceLattice, PrimeInterval};
use conrep::gadgets::*;
use conrep::iso::{are_isomorphic, automorphisms};
use conrep::lattice::chain;
use conrep::quasicolor::{is_quasi_coloring, Color, ColoredLattice, QuasiOrder};
use conrep::search::{lattices_up_to, m3};

const A: Color = Color::plain(1);
const B: Color = Color::plain(2);

fn con_size(g: &Gadget) -> usize {
    CongruenceLattice::new(g.lattice()).lattice().len()
}

#[test]
fn k_gadget_contract() {
    let k = gadget_k(A, B, None).unwrap();
    let con = CongruenceLattice::new(k.lattice());
    assert_eq!(con.lattice().len(), 3);
    assert!(con.lattice().is_chain());
    let l = k.lattice();
    let alpha = k.edge("alpha-edge").unwrap();
    let beta = k.edge("beta-edge").unwrap();
    let ca = con.con_pair(l, alpha.lower, alpha.upper);
    let cb = con.con_pair(l, beta.lower, beta.upper);
    assert!(con.lattice().lt(ca, cb));
    assert_eq!(cb, con.lattice().top());
    assert!(is_quasi_coloring(&k.colored).is_ok());
    assert_eq!(automorphisms(l).len(), 1);
}

#[test]
fn k_gadget_with_substitutions() {
    let plain = gadget_k(A, B, None).unwrap();
    let with_c2 = gadget_k(A, B, Some(&chain(2))).unwrap();
    assert!(are_isomorphic(plain.lattice(), with_c2.lattice()));
    let with_m3 = gadget_k(A, B, Some(&m3())).unwrap();
    assert_eq!(con_size(&with_m3), 3);
    assert_eq!(with_m3.lattice().len(), plain.lattice().len() + 3);
    assert!(gadget_k(A, B, Some(&n5())).is_err());
}

#[test]
fn snakes_realize_chains() {
    for m in 1..=6u32 {
        let colors: Vec<Color> = (0..m).map(Color::plain).collect();
        let s = snake(&colors).unwrap();
        let con = CongruenceLattice::new(s.lattice());
        assert_eq!(con.irreducible_count(), m as usize);
        assert!(con.lattice().is_chain());
        assert_eq!(s.colored.colors, QuasiOrder::chain(&colors));
        if m == 1 {
            assert_eq!(s.lattice().len(), 2);
        }
        if m == 2 {
            assert!(are_isomorphic(s.lattice(), gadget_k(A, B, None).unwrap().lattice()));
        }
    }
}

#[test]
fn s_k_gadget_color_poset() {
    let q = Color::plain(10);
    let (e, f) = (Color::plain(11), Color::plain(12));
    for k in 0..=4usize {
        let p: Vec<Color> = (0..k + 3).map(|i| Color::tagged(0, 1000 + i as i32)).collect();
        let a: Vec<Color> = (0..k).map(|i| Color::plain(20 + i as u32)).collect();
        let (g, spine) = s_k_gadget(&p, &[e, f], q, &a).unwrap();
        assert_eq!(spine.len(), 2 * k + 6);
        let strict = g.colored.colors.strict_pairs();
        assert_eq!(strict, vec![(e, q), (f, q)]);
        let l = g.lattice();
        let word: Vec<Color> = spine.windows(2).map(|w| g.colored.color(w[0], w[1])).collect();
        let mut expect = vec![p[0], e, p[1], f, p[2]];
        for i in 0..k {
            expect.push(a[i]);
            expect.push(p[3 + i]);
        }
        assert_eq!(word, expect);
        let con = CongruenceLattice::new(l);
        for (i, &ai) in a.iter().enumerate() {
            let c = spine[5 + 2 * i];
            let up = l.upper_covers(spine[6 + 2 * i]).iter().copied().find(|&t| g.colored.color(spine[6 + 2 * i], t) == q);
            let t = up.expect("a q-colored edge above the a_i edge");
            let m = con.con_pair_mask(l, c, t);
            let ia = con.class_of(PrimeInterval::new(c, spine[6 + 2 * i]));
            let iq = con.class_of(PrimeInterval::new(spine[6 + 2 * i], t));
            let mut want = con.irreducible_down(ia).clone();
            want.union_with(con.irreducible_down(iq));
            assert_eq!(m, want, "a_{i} ∨ q realized by a two-edge chain");
            assert!(g.colored.color(c, spine[6 + 2 * i]) == ai);
        }
    }
}

#[test]
fn covering_square_examples() {
    let mono = covering_square(A, A);
    assert_eq!(mono.colored.colors.len(), 1);
    let sq = covering_square(A, B);
    assert_eq!(con_size(&sq), 4);
    assert!(is_quasi_coloring(&sq.colored).is_ok());
    let con = CongruenceLattice::new(sq.lattice());
    let l = sq.lattice();
    assert_eq!(con.con_pair_mask(l, l.bottom(), l.top()), con.nabla_mask());
}

#[test]
fn replace_edge_of_square_by_m3() {
    let sq = covering_square(A, B);
    let p = sq.edge("rail").unwrap();
    let (out, _) = replace_prime_interval_mapped(&sq.colored, p, &m3()).unwrap();
    assert_eq!(out.lattice.len(), 7);
    let new_edges: Vec<(usize, usize)> =
        out.lattice.cover_pairs().into_iter().filter(|&(a, b)| a >= 4 || b >= 4).collect();
    assert_eq!(new_edges.len(), 6);
    assert!(new_edges.iter().all(|&(a, b)| out.color(a, b) == A));
    // The rung now forces the whole M3 copy: Con becomes a 3-chain.
    let con = CongruenceLattice::new(&out.lattice);
    assert_eq!(con.lattice().len(), 3);
    assert!(con.lattice().is_chain());
    assert!(is_quasi_coloring(&out).is_err());
    let same = replace_prime_interval(&sq.colored, p, &chain(2)).unwrap();
    assert_eq!(same.lattice, sq.colored.lattice);
    assert!(matches!(replace_prime_interval(&sq.colored, p, &n5()), Err(conrep::Error::MNotSimple)));
}

#[test]
fn replace_edge_inside_simple_part_keeps_con() {
    let k = gadget_k(A, B, None).unwrap();
    let thick = k.edge("thick").unwrap();
    let out = replace_prime_interval(&k.colored, thick, &m3()).unwrap();
    assert_eq!(CongruenceLattice::new(&out.lattice).lattice().len(), 3);
    assert!(is_quasi_coloring(&out).is_ok());
}

#[test]
fn branch_colors_are_fresh() {
    let d = chain(3);
    let lc = conrep::chainrep::LabeledChain::new(d, vec![1, 2, 2]).unwrap();
    let (g, table) = branch_from_chain(&lc);
    assert_eq!(g.colored.colors.len(), 3);
    assert!(g.colored.colors.strict_pairs().is_empty());
    assert_eq!(table[2], (Color::tagged(2, -3), 2));
    assert!(is_quasi_coloring(&g.colored).is_ok());
}

#[test]
fn rigid_simple_family() {
    assert!(rigid_simple_count() >= 16);
    let ms = rigid_simple_prefix(rigid_simple_count()).unwrap();
    for m in &ms {
        assert_eq!(automorphisms(m).len(), 1);
        assert_eq!(CongruenceLattice::new(m).lattice().len(), 2);
    }
    let smallest = ms[0].len();
    assert!(smallest >= 5);
    for level in lattices_up_to(smallest - 1) {
        for l in level.iter().filter(|l| l.len() >= 3) {
            let simple = CongruenceLattice::new(l).lattice().len() == 2;
            assert!(!(simple && automorphisms(l).len() == 1));
        }
    }
    assert!(matches!(rigid_simple(ms.len()), Err(conrep::Error::ExhaustedFamily(_))));
}

#[test]
fn natural_coloring_is_quasi_coloring() {
    for l in [b2(), n5(), m3(), chain(4)] {
        assert!(is_quasi_coloring(&ColoredLattice::natural(l)).is_ok());
    }
}

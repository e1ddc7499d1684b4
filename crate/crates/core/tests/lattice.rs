mod common;

use common::*;
use conrep::lattice::{chain, downset_lattice, CandidateSubset, Poset};
use conrep::Error;

fn c3xc3() -> conrep::FiniteLattice {
    chain(3).direct_product(&chain(3))
}

#[test]
fn basic_constructions() {
    let l = c2();
    assert_eq!((l.bottom(), l.top()), (0, 1));
    assert_eq!(l.meet(0, 1), 0);
    assert_eq!(l.join(0, 1), 1);
    let s = b2();
    let (a, b) = (e(&s, "a"), e(&s, "b"));
    assert_eq!(s.meet(a, b), e(&s, "0"));
    assert_eq!(s.join(a, b), e(&s, "1"));
    let m = m3();
    assert_eq!(m.len(), 5);
    assert!(!m.is_distributive());
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(lat_err(&["0", "0"], &[]), Error::DuplicateName(_)));
    assert!(matches!(lat_err(&["0", "1"], &[("0", "x")]), Error::UnknownName(_)));
    assert!(matches!(lat_err(&["0", "1"], &[("0", "1"), ("1", "0")]), Error::CycleError(_)));
    let bowtie = lat_err(&["0", "a", "b", "c", "d", "1"], &[
        ("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1"),
    ]);
    assert!(matches!(bowtie, Error::NotALattice { .. }));
    assert!(matches!(lat_err(&["a", "b"], &[]), Error::NotALattice { .. }));
}

fn lat_err(elements: &[&str], covers: &[(&str, &str)]) -> Error {
    conrep::FiniteLattice::from_cover(elements, covers).unwrap_err()
}

#[test]
fn lattice_axioms_hold_on_small_lattices() {
    for l in [c2(), b2(), m3(), n5(), c3xc3()] {
        for x in l.elements() {
            assert!(l.leq(l.bottom(), x) && l.leq(x, l.top()));
            for y in l.elements() {
                let (m, j) = (l.meet(x, y), l.join(x, y));
                assert!(l.leq(m, x) && l.leq(m, y) && l.leq(x, j) && l.leq(y, j));
                for z in l.elements() {
                    if l.leq(z, x) && l.leq(z, y) {
                        assert!(l.leq(z, m));
                    }
                    if l.leq(x, z) && l.leq(y, z) {
                        assert!(l.leq(j, z));
                    }
                }
            }
        }
        for (a, b) in l.cover_pairs() {
            assert!(!l.elements().any(|c| l.lt(a, c) && l.lt(c, b)));
        }
    }
}

#[test]
fn join_irreducibles() {
    assert_eq!(c2().join_irreducibles(), vec![1]);
    let s = b2();
    assert_eq!(s.join_irreducibles(), vec![e(&s, "a"), e(&s, "b")]);
    let g = c3xc3();
    let names: Vec<&str> = g.join_irreducibles().iter().map(|&x| g.name(x)).collect();
    assert_eq!(names.len(), 4);
    for n in ["(1,0)", "(2,0)", "(0,1)", "(0,2)"] {
        assert!(names.contains(&n), "{n}");
    }
}

#[test]
fn distributivity() {
    assert!(b2().is_distributive());
    assert!(!m3().is_distributive());
    assert!(!n5().is_distributive());
    for l in [b2(), m3(), n5(), c3xc3()] {
        assert_eq!(l.is_distributive_scan(), l.is_distributive_birkhoff());
    }
}

#[test]
fn condition_iii_examples() {
    let r = b2().condition_iii().unwrap();
    assert!(r.holds && r.planar && r.join_reducible_coatoms.is_empty());
    let g = c3xc3();
    let r = g.condition_iii().unwrap();
    assert!(!r.holds && r.planar);
    let mut names: Vec<&str> = r.join_reducible_coatoms.iter().map(|&x| g.name(x)).collect();
    names.sort();
    assert_eq!(names, vec!["(1,2)", "(2,1)"]);
    let b3 = b2().direct_product(&c2());
    let r = b3.condition_iii().unwrap();
    assert!(!r.holds && !r.planar);
}

#[test]
fn top_decomposition() {
    let s = b2();
    let dec = s.decompose_top().unwrap();
    assert_eq!((dec.p, dec.q), (e(&s, "a"), e(&s, "b")));
    assert_eq!(dec.d_prime.len(), 2);
    assert_eq!(dec.q_filter, vec![e(&s, "b"), e(&s, "1")]);
    assert!(c3xc3().decompose_top().is_err());
    assert!(matches!(chain(3).decompose_top(), Err(Error::TopIrreducible)));
}

#[test]
fn gluing_and_sums() {
    let c = c2().glued_sum(&c2()).unwrap();
    assert_eq!(c.len(), 3);
    assert!(c.is_chain());
    let s = b2();
    assert!(conrep::iso::are_isomorphic(&c2().direct_product(&c2()), &s));
    let upper = s.renamed(|_, n| format!("{n}'"));
    let f = s.up_set(e(&s, "a")).clone();
    let i = upper.down_set(e(&upper, "a'")).clone();
    let g = s
        .hall_dilworth_glue(&f, &upper, &i, &[(e(&s, "a"), e(&upper, "0'")), (e(&s, "1"), e(&upper, "a'"))])
        .unwrap();
    assert_eq!(g.lattice.len(), 6);
    assert!(g.lattice.is_distributive());
    let whole = s.hall_dilworth_glue(&conrep::BitSet::full(4), &s, &conrep::BitSet::full(4), &[(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap();
    assert!(conrep::iso::are_isomorphic(&whole.lattice, &s));
    let n = n5();
    let fc = n.filter(e(&n, "c"));
    assert!(fc.len() == 2 && fc.is_chain());
}

#[test]
fn candidate_subsets_contain_j_plus() {
    let s = b2();
    assert!(CandidateSubset::new(&s, [0, e(&s, "a"), e(&s, "1")]).is_err());
    let q = CandidateSubset::minimal(&s);
    assert_eq!(q.to_vec().len(), 4);
}

#[test]
fn birkhoff_round_trip() {
    let poset = Poset::from_fn(3, |a, b| a == b || (a == 0 && b == 2));
    let d = downset_lattice(&poset);
    assert_eq!(d.len(), 6);
    let jd = d.join_irreducibles();
    assert_eq!(jd.len(), 3);
    let comparable = jd.iter().flat_map(|&a| jd.iter().map(move |&b| (a, b))).filter(|&(a, b)| d.lt(a, b)).count();
    assert_eq!(comparable, 1);
}

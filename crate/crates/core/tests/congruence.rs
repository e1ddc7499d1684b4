mod common;

use common::*;
use conrep::congruence::*;
use conrep::lattice::chain;

#[test]
fn principal_congruence_examples() {
    let l = n5();
    assert!(principal_congruence(&l, 2, 2).is_delta());
    assert!(principal_congruence(&c2(), 0, 1).is_nabla());
    let c = principal_congruence(&l, e(&l, "a"), e(&l, "b"));
    let blocks: Vec<Vec<&str>> =
        c.blocks().iter().map(|b| b.iter().map(|&x| l.name(x)).collect()).collect();
    assert_eq!(blocks, vec![vec!["0"], vec!["a", "b"], vec!["c"], vec!["1"]]);
    assert!(c.is_congruence_of(&l));
}

#[test]
fn congruence_lattice_sizes() {
    assert_eq!(congruence_lattice(&c2()).0.len(), 2);
    let (con_b2, _) = congruence_lattice(&b2());
    assert_eq!(con_b2.len(), 4);
    assert!(!con_b2.is_chain());
    let (con_n5, dict) = congruence_lattice(&n5());
    assert_eq!(con_n5.len(), 5);
    assert!(con_n5.is_distributive());
    assert_eq!(con_n5.upper_covers(con_n5.bottom()).len(), 1);
    assert!(dict.iter().all(|c| c.is_congruence_of(&n5())));
    assert_eq!(congruence_lattice(&m3()).0.len(), 2);
}

#[test]
fn princ_examples() {
    assert_eq!(princ_set(&c2()).len(), 2);
    assert_eq!(princ_set(&b2()).len(), 4);
    let l = chain(2).direct_product(&chain(3));
    let mut brute: Vec<Congruence> = l
        .elements()
        .flat_map(|a| l.elements().map(move |b| (a, b)))
        .map(|(a, b)| principal_congruence(&l, a, b))
        .collect();
    brute.sort();
    brute.dedup();
    assert_eq!(princ_set(&l), brute);
}

#[test]
fn projectivity_examples() {
    let l = b2();
    let p = PrimeInterval::new(e(&l, "0"), e(&l, "a"));
    let q = PrimeInterval::new(e(&l, "b"), e(&l, "1"));
    assert!(prime_projectivity(&l, p, p));
    assert!(prime_projectivity(&l, p, q) && prime_projectivity(&l, q, p));
    let l = n5();
    let oc = PrimeInterval::new(e(&l, "0"), e(&l, "c"));
    let ab = PrimeInterval::new(e(&l, "a"), e(&l, "b"));
    assert!(prime_projectivity(&l, oc, ab));
    assert!(!prime_projectivity(&l, ab, oc));
}

#[test]
fn separating_examples() {
    assert!(is_01_separating(&c2()));
    assert!(is_01_separating(&m3()));
    assert!(!is_01_separating(&chain(3)));
}

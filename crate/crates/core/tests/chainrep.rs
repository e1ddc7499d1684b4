mod common;

use common::*;
use conrep::chainrep::*;
use conrep::lattice::{chain, CandidateSubset};

#[test]
fn erep_examples() {
    let d = chain(3);
    let lc = LabeledChain::new(d.clone(), vec![1, 2, 1]).unwrap();
    assert_eq!(lc.erep(1, 1), d.bottom());
    assert_eq!(lc.erep(0, 1), 1);
    assert_eq!(lc.erep(0, 3), 2);
}

#[test]
fn srep_examples() {
    let d = c2();
    let lc = LabeledChain::new(d.clone(), vec![1]).unwrap();
    assert_eq!(lc.srep().iter().collect::<Vec<_>>(), vec![0, 1]);
    let lc = LabeledChain::new(d, vec![1, 1, 1]).unwrap();
    assert_eq!(lc.srep().count(), 2);
    assert!(LabeledChain::new(chain(3), vec![2]).is_err());
}

/// `J(D) = {a, b, 1}` with `a, b < 1`: `B2` with a new top.
fn b2_top() -> conrep::FiniteLattice {
    lat(
        &["0", "a", "b", "ab", "1"],
        &[("0", "a"), ("0", "b"), ("a", "ab"), ("b", "ab"), ("ab", "1")],
    )
}

#[test]
fn labeled_pair_over_b2_with_top() {
    let d = b2_top();
    let (a, b, t) = (e(&d, "a"), e(&d, "b"), e(&d, "1"));
    let lc = LabeledChain::new(d.clone(), vec![a, b, t]).unwrap();
    let s = lc.srep();
    assert!(s.contains(e(&d, "ab")) && s.contains(a) && s.contains(b) && s.contains(t));
    let star = lc.extend_star().unwrap();
    assert_eq!(star.len(), lc.len() + 1);
    assert_eq!(*star.labels().last().unwrap(), t);
    assert!(lc.srep().is_subset(&star.srep()));
    let two = LabeledChain::new(b2(), vec![1, 2]).unwrap();
    assert!(two.extend_star().is_err());
}

#[test]
fn build_chain_examples() {
    let d = c2();
    let lc = build_chain(&d, &CandidateSubset::minimal(&d)).unwrap();
    assert_eq!(lc.labels(), &[1]);
    let d = b2_top();
    let min = CandidateSubset::minimal(&d);
    assert_eq!(&build_chain(&d, &min).unwrap().srep(), min.members());
    let full = CandidateSubset::new(&d, d.elements()).unwrap();
    let lc = build_chain(&d, &full).unwrap();
    assert_eq!(&lc.srep(), full.members());
    let (a, b) = (e(&d, "a"), e(&d, "b"));
    assert!(lc.labels().windows(2).any(|w| w == [a, b]));
    assert_eq!(two_join_decomposition(&d, e(&d, "ab")), Some((a, b)));
}

#[test]
fn search_oracle_agrees_on_tiny_lattices() {
    let d = b2_top();
    for q in conrep::verify::candidate_subsets(&d) {
        match search_chain(&d, q.members(), 8) {
            ChainSearch::Found(word) => {
                let lc = LabeledChain::new(d.clone(), word).unwrap();
                assert_eq!(&lc.srep(), q.members());
            }
            ChainSearch::Inconclusive => panic!("no chain within the cutoff"),
        }
    }
}

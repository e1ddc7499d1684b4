mod common;

use common::{b2, c2};
use conrep::lattice::{chain, CandidateSubset};
use conrep::pipeline::{construct_general, AutMode, Options};
use conrep::verify::{automorphism_group, verify_certificate};
use conrep::{Error, FiniteLattice};

fn build(d: &FiniteLattice, q: &CandidateSubset, aut: AutMode) -> conrep::certificate::Certificate {
    let cert = construct_general(d, q, &Options { cap: None, aut }).unwrap();
    let report = verify_certificate(&cert);
    assert!(report.passed(), "{:?}", report.failures());
    cert
}

#[test]
fn chains_with_minimal_q() {
    for n in 1..=4 {
        let d = chain(n);
        let q = CandidateSubset::minimal(&d);
        let cert = build(&d, &q, AutMode::Any);
        eprintln!("C{n}: |L| = {}", cert.lattice.len());
    }
}

#[test]
fn chain_with_full_q() {
    let d = chain(3);
    let q = CandidateSubset::new(&d, d.elements()).unwrap();
    build(&d, &q, AutMode::Any);
}

#[test]
fn two_element_lattice_is_its_own_answer() {
    let d = c2();
    let cert = build(&d, &CandidateSubset::minimal(&d), AutMode::Any);
    assert_eq!(cert.coloring.lattice.len(), cert.lattice.len());
}

#[test]
fn square_every_q() {
    let d = b2();
    let top = d.top();
    for q in [CandidateSubset::minimal(&d), CandidateSubset::new(&d, d.elements()).unwrap()] {
        let cert = build(&d, &q, AutMode::Any);
        eprintln!("B2 (top in Q: {}): |L| = {}", q.contains(top), cert.lattice.len());
    }
}

#[test]
fn rigid_request_yields_trivial_group() {
    let d = chain(3);
    let cert = build(&d, &CandidateSubset::minimal(&d), AutMode::Rigid);
    assert_eq!(automorphism_group(&cert.lattice).order, 1);
}

#[test]
fn nine_element_grid_violates_the_coatom_condition() {
    let c3 = chain(3);
    let d = c3.direct_product(&c3);
    let err = construct_general(&d, &CandidateSubset::minimal(&d), &Options::default()).unwrap_err();
    assert!(matches!(err, Error::ConditionViolated(_)), "{err}");
}

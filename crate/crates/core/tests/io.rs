mod common;

use common::*;
use conrep::io::*;
use conrep::lattice::CandidateSubset;
use conrep::quasicolor::ColoredLattice;
use conrep::Error;

#[test]
fn c2_round_trips() {
    let text = r#"{"name": "C2", "elements": ["1", "0"], "cover": [["0", "1"]]}"#;
    let doc = parse_document(text).unwrap();
    let canon = serialize(&doc);
    assert_eq!(serialize(&parse_document(&canon).unwrap()), canon);
    assert!(canon.ends_with('\n'));
    assert_eq!(doc.to_lattice().unwrap().len(), 2);
}

#[test]
fn dangling_cover_is_a_parse_error() {
    let text = r#"{"name": "x", "elements": ["0"], "cover": [["0", "1"]]}"#;
    match parse_document(text) {
        Err(Error::Parse { location, .. }) => assert_eq!(location, "cover[0]"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_document("{"), Err(Error::Parse { .. })));
    assert!(matches!(parse_document(r#"{"elements": [], "cover": [], "extra": 1}"#), Err(Error::Parse { .. })));
}

#[test]
fn candidate_field() {
    let l = b2();
    let doc = LatticeDocument::from_lattice("B2", &l).with_q(&l, &CandidateSubset::minimal(&l));
    let text = serialize(&doc);
    let back = parse_document(&text).unwrap();
    assert_eq!(back.candidate(&l).unwrap().to_vec().len(), 4);
    let mut bad = back.clone();
    bad.q = Some(vec!["0".into(), "1".into()]);
    assert!(bad.candidate(&l).is_err());
}

#[test]
fn dot_output() {
    let dot = export_dot(&c2());
    assert_eq!(dot.matches("->").count(), 1);
    assert_eq!(dot.matches("[label=").count(), 2);
    let colored = export_dot_colored(&ColoredLattice::natural(b2()));
    assert_eq!(colored.matches("->").count(), 4);
    assert_eq!(colored.matches("-> n").filter(|_| true).count(), 4);
    assert_eq!(colored.lines().filter(|l| l.contains("->") && l.contains("label=")).count(), 4);
}

#[test]
fn pipeline_output_renders() {
    let d = conrep::lattice::chain(3);
    let cert = conrep::pipeline::construct_general(&d, &CandidateSubset::minimal(&d), &Default::default()).unwrap();
    let doc = cert.to_document().lattice;
    let dot = export_dot_document(&doc).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), cert.lattice.len());
}

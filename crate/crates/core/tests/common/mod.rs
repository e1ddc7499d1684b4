#![allow(dead_code)]

use conrep::FiniteLattice;

pub fn lat(elements: &[&str], covers: &[(&str, &str)]) -> FiniteLattice {
    FiniteLattice::from_cover(elements, covers).unwrap()
}

pub fn c2() -> FiniteLattice {
    lat(&["0", "1"], &[("0", "1")])
}

pub fn b2() -> FiniteLattice {
    lat(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
}

pub fn m3() -> FiniteLattice {
    lat(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
}

pub fn n5() -> FiniteLattice {
    lat(&["0", "a", "b", "c", "1"], &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])
}

pub fn e(l: &FiniteLattice, name: &str) -> usize {
    l.index_of(name).unwrap()
}

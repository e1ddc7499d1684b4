//! Regenerates `data/k_gadget.json` and `data/rigid_simple.json` by
//! exhaustive search over small lattices.

use std::collections::BTreeMap;
use std::path::PathBuf;

use conrep::io::{serialize, LatticeDocument};
use conrep::search::{find_k_gadget, rigid_simple_lattices};
use conrep::FiniteLattice;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn main() {
    let k = find_k_gadget(9).expect("a rigid K gadget with at most 9 elements exists");
    let l = &k.lattice;
    let name = |x: usize| -> String {
        if x == l.bottom() {
            "0".into()
        } else if x == l.top() {
            "1".into()
        } else if x == k.b {
            "b".into()
        } else if x == k.r {
            "r".into()
        } else {
            format!("x{x}")
        }
    };
    let named: FiniteLattice = l.renamed(|x, _| name(x));
    let mut doc = LatticeDocument::from_lattice("K", &named);
    doc.colors = Some(
        l.cover_pairs()
            .into_iter()
            .map(|(a, b)| {
                let c = if k.alpha_edges.contains(&(a, b)) { "alpha" } else { "beta" };
                [name(a), name(b), c.to_string()]
            })
            .collect(),
    );
    doc.designated = BTreeMap::from([
        ("thick".to_string(), [name(k.thick.0), name(k.thick.1)]),
        ("alpha-edge".to_string(), [name(l.bottom()), name(k.b)]),
        ("beta-edge".to_string(), [name(k.b), name(l.top())]),
        ("rung".to_string(), [name(l.bottom()), name(k.r)]),
    ]);
    std::fs::write(data_dir().join("k_gadget.json"), serialize(&doc)).unwrap();

    let family = rigid_simple_lattices(9);
    let docs: Vec<serde_json::Value> = family
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let text = serialize(&LatticeDocument::from_lattice(&format!("M{i}"), m));
            serde_json::from_str(&text).unwrap()
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&docs).unwrap();
    text.push('\n');
    std::fs::write(data_dir().join("rigid_simple.json"), text).unwrap();
    println!("K: {} elements; rigid simple family: {} members", l.len(), family.len());
}

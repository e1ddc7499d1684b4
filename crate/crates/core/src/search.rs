//! Exhaustive and random generation of small lattices.
//!
//! Every lattice with at least three elements arises from a smaller one by
//! adjoining a new atom `a` whose strict up-set is a nonempty up-set `F` of
//! the nonzero elements; removing an atom always leaves a lattice.

use rand::Rng;

use crate::bitset::BitSet;
use crate::congruence::CongruenceLattice;
use crate::iso::{dedupe, is_rigid};
use crate::lattice::{chain, Elem, FiniteLattice, Poset};

/// `l` with a new atom whose strict up-set is `f`, if that is a lattice.
pub fn adjoin_atom(l: &FiniteLattice, f: &BitSet) -> Option<FiniteLattice> {
    let n = l.len();
    let mut names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    names[n] = n.to_string();
    let mut up: Vec<BitSet> = l.elements().map(|x| l.up_set(x).resized(n + 1)).collect();
    up[l.bottom()].insert(n);
    let mut ua = f.resized(n + 1);
    ua.insert(n);
    up.push(ua);
    FiniteLattice::from_up_sets(names, up).ok()
}

/// Nonempty up-sets of the nonzero elements of `l`.
pub fn atom_extensions(l: &FiniteLattice) -> Vec<BitSet> {
    let rest: Vec<usize> = l.elements().filter(|&x| x != l.bottom()).collect();
    // Down-sets of the dual are up-sets of the original.
    let dual = Poset::from_fn(rest.len(), |a, b| l.leq(rest[b], rest[a]));
    dual.downsets()
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.iter().map(|i| rest[i]).collect::<BitSet>().resized(l.len()))
        .collect()
}

/// All lattices with exactly `n` elements up to isomorphism, for each
/// `n ≤ max`; entry `n - 1` holds the size-`n` lattices.
pub fn lattices_up_to(max: usize) -> Vec<Vec<FiniteLattice>> {
    let mut levels: Vec<Vec<FiniteLattice>> = Vec::new();
    for n in 1..=max {
        let level = if n <= 2 {
            vec![chain(n)]
        } else {
            let children: Vec<FiniteLattice> = levels[n - 2]
                .iter()
                .flat_map(|l| {
                    atom_extensions(l).into_iter().filter_map(move |f| adjoin_atom(l, &f))
                })
                .collect();
            dedupe(children)
        };
        levels.push(level);
    }
    levels
}

/// A random lattice with `n ≥ 1` elements grown by random atom insertion.
pub fn random_lattice<R: Rng>(rng: &mut R, n: usize) -> FiniteLattice {
    let mut l = chain(n.min(2));
    while l.len() < n {
        let rest: Vec<usize> = l.elements().filter(|&x| x != l.bottom()).collect();
        loop {
            let mut f = BitSet::new(l.len());
            for &x in &rest {
                if rng.gen_bool(0.3) {
                    for y in l.up_set(x).iter() {
                        f.insert(y);
                    }
                }
            }
            f.insert(l.top());
            if let Some(next) = adjoin_atom(&l, &f) {
                l = next;
                break;
            }
        }
    }
    l
}

/// A lattice with `Con ≅ C3` and the prime intervals a gluing needs.
#[derive(Clone, Debug)]
pub struct KShape {
    pub lattice: FiniteLattice,
    /// Atom and coatom `b` with `con(0,b)` the middle congruence.
    pub b: Elem,
    /// Atom `r ≠ b` with `con(0,r) = ∇`.
    pub r: Elem,
    /// Prime interval in the middle class, away from `b`, that tolerates
    /// substitution by `M3`.
    pub thick: (Elem, Elem),
    /// Prime intervals generating the middle congruence.
    pub alpha_edges: Vec<(Elem, Elem)>,
}

/// The `M3` lattice.
pub fn m3() -> FiniteLattice {
    FiniteLattice::from_cover(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
    .expect("M3 is a lattice")
}

/// Checks the `K` contract on `l`, returning the shape when it holds.
pub fn k_shape(l: &FiniteLattice) -> Option<KShape> {
    let con = CongruenceLattice::new(l);
    if con.irreducible_count() != 2 || !con.is_chain() {
        return None;
    }
    let nabla = con.nabla_mask();
    let (zero, one) = (l.bottom(), l.top());
    let b = l.elements().find(|&b| {
        l.covers(zero, b) && l.covers(b, one) && con.con_pair_mask(l, zero, b) != nabla && con.con_pair_mask(l, b, one) == nabla
    })?;
    let r = l.upper_covers(zero).iter().copied().find(|&r| r != b && con.con_pair_mask(l, zero, r) == nabla)?;
    let alpha_edges: Vec<(Elem, Elem)> =
        l.cover_pairs().into_iter().filter(|&(x, y)| con.con_pair_mask(l, x, y) != nabla).collect();
    let thick = alpha_edges.iter().copied().find(|&(x, y)| {
        x != b && y != b && {
            let (big, _) = l.replace_edge(x, y, &m3()).expect("prime interval");
            let c = CongruenceLattice::new(&big);
            c.irreducible_count() == 2 && c.is_chain()
        }
    })?;
    Some(KShape { lattice: l.clone(), b, r, thick, alpha_edges })
}

/// The first rigid lattice satisfying the `K` contract, by size and then
/// enumeration order.
pub fn find_k_gadget(max: usize) -> Option<KShape> {
    lattices_up_to(max).into_iter().flatten().filter(is_rigid).find_map(|l| k_shape(&l))
}

/// Rigid simple lattices with at least three elements, by size and then
/// enumeration order.
pub fn rigid_simple_lattices(max: usize) -> Vec<FiniteLattice> {
    lattices_up_to(max)
        .into_iter()
        .flatten()
        .filter(|l| l.len() >= 3 && CongruenceLattice::new(l).irreducible_count() == 1 && is_rigid(l))
        .collect()
}

//! Independent certification of constructions, automorphism groups and the
//! enumeration of small distributive lattices.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::bitset::BitSet;
use crate::certificate::Certificate;
use crate::congruence::{Congruence, CongruenceLattice};
use crate::error::{Error, Result};
use crate::iso::automorphisms;
use crate::lattice::{downset_lattice, Elem, FiniteLattice, Poset};

/// Largest `Con(L)` the verifier materializes.
const CON_LIMIT: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, name: &str, outcome: std::result::Result<(), String>) {
        self.checks.push(Check { name: name.to_string(), passed: outcome.is_ok(), witness: outcome.err() });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Elements `x` of `D` such that some chain `u_0 ≺ … ≺ u_n` of `L` has
/// `x` as the join of the labels of its prime intervals.
pub fn chain_production(l: &FiniteLattice, d: &FiniteLattice, label: impl Fn(Elem, Elem) -> Elem) -> BitSet {
    let order = l.linear_extension();
    let mut out = BitSet::new(d.len());
    out.insert(d.bottom());
    let mut sets: Vec<BitSet> = vec![BitSet::new(d.len()); l.len()];
    for a in l.elements() {
        for &b in &order {
            if l.leq(a, b) {
                sets[b] = BitSet::new(d.len());
            }
        }
        sets[a].insert(d.bottom());
        for &b in &order {
            if b == a || !l.leq(a, b) {
                continue;
            }
            let mut s = BitSet::new(d.len());
            for &c in l.lower_covers(b) {
                if !l.leq(a, c) {
                    continue;
                }
                let x = label(c, b);
                for y in sets[c].iter() {
                    s.insert(d.join(x, y));
                }
            }
            out.union_with(&s);
            sets[b] = s;
        }
    }
    out
}

fn names(d: &FiniteLattice, s: impl IntoIterator<Item = Elem>) -> String {
    let v: Vec<&str> = s.into_iter().map(|x| d.name(x)).collect();
    format!("{{{}}}", v.join(", "))
}

/// Order isomorphism between two posets given by `le` predicates, by
/// backtracking.
fn poset_iso(n: usize, le_a: &dyn Fn(usize, usize) -> bool, le_b: &dyn Fn(usize, usize) -> bool) -> bool {
    fn rec(
        i: usize,
        n: usize,
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
        le_a: &dyn Fn(usize, usize) -> bool,
        le_b: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if i == n {
            return true;
        }
        for y in 0..n {
            if used[y] {
                continue;
            }
            if (0..i).all(|x| le_a(x, i) == le_b(f[x], y) && le_a(i, x) == le_b(y, f[x])) {
                f.push(y);
                used[y] = true;
                if rec(i + 1, n, f, used, le_a, le_b) {
                    return true;
                }
                used[y] = false;
                f.pop();
            }
        }
        false
    }
    rec(0, n, &mut Vec::new(), &mut vec![false; n], le_a, le_b)
}

/// Recomputes `Con(L)` and `Princ(L)` from scratch and checks every claim
/// of `cert`.
pub fn verify_certificate(cert: &Certificate) -> Report {
    let mut report = Report::default();
    verify_into(cert, "", &mut report);
    report
}

fn verify_into(cert: &Certificate, prefix: &str, report: &mut Report) {
    let (l, d) = (&cert.lattice, &cert.d);
    let name = |s: &str| format!("{prefix}{s}");
    let con = CongruenceLattice::new(l);
    let jd = d.join_irreducibles();
    report.push(
        &name("skeleton"),
        if con.irreducible_count() != jd.len() {
            Err(format!("|J(Con L)| = {}, |J(D)| = {}", con.irreducible_count(), jd.len()))
        } else if poset_iso(jd.len(), &|a, b| con.irreducible_poset().le(a, b), &|a, b| d.leq(jd[a], jd[b])) {
            Ok(())
        } else {
            Err("J(Con L) and J(D) are not order isomorphic".into())
        },
    );
    if con.size_capped(CON_LIMIT) >= CON_LIMIT {
        report.push(&name("phi"), Err(format!("Con(L) has at least {CON_LIMIT} elements")));
        return;
    }
    let conl = con.lattice();
    let table: HashMap<&Congruence, Elem> = cert.phi.iter().map(|(c, x)| (c, *x)).collect();
    let mut f = vec![usize::MAX; conl.len()];
    let mut missing = None;
    for x in conl.elements() {
        match table.get(&con.congruence(l, x)) {
            Some(&y) => f[x] = y,
            None => missing = Some(x),
        }
    }
    let phi_ok = if let Some(x) = missing {
        Err(format!("φ is undefined on the congruence {}", conl.name(x)))
    } else if cert.phi.len() != conl.len() {
        Err(format!("φ has {} entries, Con(L) has {} elements", cert.phi.len(), conl.len()))
    } else if conl.len() != d.len() {
        Err(format!("|Con L| = {}, |D| = {}", conl.len(), d.len()))
    } else {
        let mut hit = BitSet::new(d.len());
        let dup = f.iter().find(|&&y| !hit.insert(y));
        match dup {
            Some(&y) => Err(format!("φ hits `{}` twice", d.name(y))),
            None => conl
                .elements()
                .flat_map(|x| conl.elements().map(move |y| (x, y)))
                .find(|&(x, y)| conl.leq(x, y) != d.leq(f[x], f[y]))
                .map_or(Ok(()), |(x, y)| {
                    Err(format!(
                        "order differs at ({}, {}) ↦ ({}, {})",
                        conl.name(x),
                        conl.name(y),
                        d.name(f[x]),
                        d.name(f[y])
                    ))
                }),
        }
    };
    let phi_valid = phi_ok.is_ok();
    report.push(&name("phi"), phi_ok);
    if !phi_valid {
        return;
    }
    let elem_of = |a: Elem, b: Elem| f[con.element_of(&con.con_pair_mask(l, a, b)).expect("masks are congruences")];

    let mut princ = BitSet::new(d.len());
    for m in con.principal_masks(l) {
        princ.insert(f[con.element_of(&m).expect("principal masks are congruences")]);
    }
    report.push(
        &name("princ"),
        if &princ == cert.q.members() {
            Ok(())
        } else {
            Err(format!(
                "φ(Princ L) = {}, Q = {}",
                names(d, princ.iter()),
                names(d, cert.q.members().iter())
            ))
        },
    );

    let bad_edge = l.cover_pairs().into_iter().find(|&(a, b)| {
        cert.coloring.try_color(a, b).map(|c| c.base as Elem) != Some(elem_of(a, b))
    });
    report.push(
        &name("coloring"),
        bad_edge.map_or(Ok(()), |(a, b)| {
            Err(format!("[{}, {}] has φ(con) = {}", l.name(a), l.name(b), d.name(elem_of(a, b))))
        }),
    );
    if bad_edge.is_none() {
        let produced = chain_production(l, d, |a, b| cert.coloring.color(a, b).base as Elem);
        report.push(
            &name("production"),
            if &produced == cert.q.members() {
                Ok(())
            } else {
                Err(format!("chains produce {}", names(d, produced.iter())))
            },
        );
    }

    if let Some(cs) = &cert.c_star {
        let set: BitSet = cs.chain.iter().copied().collect::<BitSet>().resized(l.len());
        let chain_ok = cs.chain.windows(2).all(|w| l.covers(w[0], w[1])) && cs.labels.len() + 1 == cs.chain.len();
        report.push(
            &name("c-star-filter"),
            if chain_ok && l.is_filter(&set) {
                Ok(())
            } else {
                Err("C* is not a covering chain forming a filter".into())
            },
        );
        let wrong = cs
            .chain
            .windows(2)
            .zip(&cs.labels)
            .find(|(w, &x)| elem_of(w[0], w[1]) != x);
        report.push(
            &name("c-star-labels"),
            wrong.map_or(Ok(()), |(w, &x)| {
                Err(format!("[{}, {}] labeled {} but φ(con) = {}", l.name(w[0]), l.name(w[1]), d.name(x), d.name(elem_of(w[0], w[1]))))
            }),
        );
        let nabla = con.nabla_mask();
        let boundary = cs.chain.iter().flat_map(|&x| l.lower_covers(x).iter().map(move |&y| (y, x))).find(|&(y, x)| {
            !set.contains(y) && con.con_pair_mask(l, y, x) != nabla
        });
        report.push(
            &name("c-star-boundary"),
            boundary.map_or(Ok(()), |(y, x)| Err(format!("con({}, {}) ≠ ∇", l.name(y), l.name(x)))),
        );
        report.push(
            &name("separating"),
            if con.is_01_separating(l) { Ok(()) } else { Err("L is not {0,1}-separating".into()) },
        );
    }
    if let Some(inner) = &cert.inner {
        verify_into(inner, &format!("{prefix}inner."), report);
    }
}

/// A permutation group given by generators of its elements on `0..degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
    pub order: usize,
}

/// Largest group order handled by [`group_elements`] and
/// [`group_isomorphic`].
pub const GROUP_LIMIT: usize = 10_000;

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn identity(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

/// Every element of the group generated by `g`, identity first.
pub fn group_elements(g: &PermutationGroup) -> Result<Vec<Vec<u32>>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut out = vec![identity(g.degree)];
    seen.insert(out[0].clone());
    let mut i = 0;
    while i < out.len() {
        for s in &g.generators {
            let y = compose(&out[i], s);
            if seen.insert(y.clone()) {
                if out.len() >= GROUP_LIMIT {
                    return Err(Error::TooLarge(format!("group order exceeds {GROUP_LIMIT}")));
                }
                out.push(y);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// `Aut(L)` with a generating set chosen greedily from all automorphisms.
pub fn automorphism_group(l: &FiniteLattice) -> PermutationGroup {
    let all = automorphisms(l);
    let mut g = PermutationGroup { degree: l.len(), generators: Vec::new(), order: 1 };
    let mut closure: HashSet<Vec<u32>> = HashSet::from([identity(l.len())]);
    for a in all.iter().map(|a| a.iter().map(|&x| x as u32).collect::<Vec<u32>>()) {
        if closure.contains(&a) {
            continue;
        }
        g.generators.push(a);
        let elems = group_elements(&g).expect("automorphism groups of listed size");
        closure = elems.into_iter().collect();
    }
    g.order = all.len();
    g
}

fn element_order(x: &[u32]) -> usize {
    let id = identity(x.len());
    let mut y = x.to_vec();
    let mut k = 1;
    while y != id {
        y = compose(&y, x);
        k += 1;
    }
    k
}

/// Whether two permutation groups are isomorphic, by order, element-order
/// statistics and a search for generator images.
pub fn group_isomorphic(g1: &PermutationGroup, g2: &PermutationGroup) -> Result<bool> {
    if g1.order > GROUP_LIMIT || g2.order > GROUP_LIMIT {
        return Err(Error::TooLarge(format!("group order exceeds {GROUP_LIMIT}")));
    }
    let e1 = group_elements(g1)?;
    let e2 = group_elements(g2)?;
    if e1.len() != e2.len() {
        return Ok(false);
    }
    let stats = |e: &[Vec<u32>]| {
        let mut v: Vec<usize> = e.iter().map(|x| element_order(x)).collect();
        v.sort_unstable();
        v
    };
    if stats(&e1) != stats(&e2) {
        return Ok(false);
    }
    let gens = &g1.generators;
    let index2: HashMap<&Vec<u32>, usize> = e2.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let try_images = |imgs: &[&Vec<u32>]| -> bool {
        let mut map: HashMap<Vec<u32>, Vec<u32>> = HashMap::from([(identity(g1.degree), identity(g2.degree))]);
        let mut queue: VecDeque<Vec<u32>> = VecDeque::from([identity(g1.degree)]);
        while let Some(x) = queue.pop_front() {
            let fx = map[&x].clone();
            for (s, t) in gens.iter().zip(imgs) {
                let y = compose(&x, s);
                let fy = compose(&fx, t);
                match map.get(&y) {
                    Some(z) if *z != fy => return false,
                    Some(_) => {}
                    None => {
                        map.insert(y.clone(), fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        let hit: HashSet<usize> = map.values().filter_map(|v| index2.get(v).copied()).collect();
        hit.len() == e2.len()
    };
    let orders: Vec<usize> = gens.iter().map(|s| element_order(s)).collect();
    let mut imgs: Vec<&Vec<u32>> = Vec::new();
    fn rec<'a>(
        i: usize,
        orders: &[usize],
        e2: &'a [Vec<u32>],
        imgs: &mut Vec<&'a Vec<u32>>,
        f: &dyn Fn(&[&Vec<u32>]) -> bool,
    ) -> bool {
        if i == orders.len() {
            return f(imgs);
        }
        for y in e2 {
            if element_order(y) == orders[i] {
                imgs.push(y);
                if rec(i + 1, orders, e2, imgs, f) {
                    return true;
                }
                imgs.pop();
            }
        }
        false
    }
    Ok(rec(0, &orders, &e2, &mut imgs, &try_images))
}

/// The symmetric group on `n` points, generated by a transposition and an
/// `n`-cycle.
pub fn symmetric_group(n: usize) -> PermutationGroup {
    let mut generators = Vec::new();
    if n >= 2 {
        let mut t = identity(n);
        t.swap(0, 1);
        let c: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        generators.push(t);
        if n > 2 {
            generators.push(c);
        }
    }
    let order = (1..=n).product();
    PermutationGroup { degree: n, generators, order }
}

/// The relation matrix of a poset on `n ≤ 8` points as a bitmask, row-major.
fn relation_mask(n: usize, le: &[Vec<bool>], perm: &[usize]) -> u64 {
    let mut m = 0u64;
    for i in 0..n {
        for j in 0..n {
            if le[perm[i]][perm[j]] {
                m |= 1 << (i * n + j);
            }
        }
    }
    m
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Posets on `n` points up to isomorphism as `le` matrices, each in its
/// canonical (least relation mask) labeling.
pub fn posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let mut level: Vec<Vec<Vec<bool>>> = vec![Vec::new()];
    for k in 1..=n {
        let perms = permutations(k);
        let mut seen: HashSet<u64> = HashSet::new();
        let mut next = Vec::new();
        for p in &level {
            let poset = Poset::from_fn(k - 1, |a, b| p[a][b]);
            // A new maximal point above any down-set.
            for ds in poset.downsets() {
                let mut le = vec![vec![false; k]; k];
                for a in 0..k - 1 {
                    le[a][..k - 1].copy_from_slice(&p[a]);
                    le[a][k - 1] = ds.contains(a);
                }
                le[k - 1][k - 1] = true;
                let best = perms.iter().min_by_key(|q| relation_mask(k, &le, q)).expect("k ≥ 1");
                if seen.insert(relation_mask(k, &le, best)) {
                    next.push((0..k).map(|i| (0..k).map(|j| le[best[i]][best[j]]).collect()).collect());
                }
            }
        }
        level = next;
    }
    level
}

/// Every finite distributive lattice with at most `max_j` join-irreducibles,
/// once up to isomorphism, by number of join-irreducibles.
pub fn enumerate_distributive(max_j: usize) -> Result<Vec<FiniteLattice>> {
    if max_j > 5 {
        return Err(Error::TooLarge(format!("max_j = {max_j} exceeds 5")));
    }
    let mut out = Vec::new();
    for n in 0..=max_j {
        for le in posets(n) {
            out.push(downset_lattice(&Poset::from_fn(n, |a, b| le[a][b])));
        }
    }
    Ok(out)
}

/// All candidate subsets of `d`, by increasing bitmask over the elements
/// outside `J⁺(D)`.
pub fn candidate_subsets(d: &FiniteLattice) -> Vec<crate::lattice::CandidateSubset> {
    let base = d.j_plus();
    let free: Vec<Elem> = d.elements().filter(|x| !base.contains(x)).collect();
    (0..1u64 << free.len())
        .map(|mask| {
            let extra = free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x);
            crate::lattice::CandidateSubset::new(d, base.iter().copied().chain(extra)).expect("contains J⁺")
        })
        .collect()
}

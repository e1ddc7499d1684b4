//! Congruences of finite lattices: principal congruences by substitution
//! closure, the congruence lattice, principal congruences and
//! prime-projectivity.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::bitset::BitSet;
use crate::lattice::{downset_lattice_with_sets, Elem, FiniteLattice, Poset};

/// A cover pair `lower ≺ upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeInterval {
    pub lower: Elem,
    pub upper: Elem,
}

impl PrimeInterval {
    pub fn new(lower: Elem, upper: Elem) -> Self {
        PrimeInterval { lower, upper }
    }
}

/// A congruence in canonical form: blocks sorted internally and by least
/// member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    class: Vec<u32>,
    blocks: Vec<Vec<Elem>>,
}

impl Congruence {
    fn from_roots(roots: impl Fn(Elem) -> Elem, n: usize) -> Self {
        let mut id = HashMap::new();
        let mut blocks: Vec<Vec<Elem>> = Vec::new();
        let mut class = vec![0u32; n];
        for (x, c) in class.iter_mut().enumerate() {
            let r = roots(x);
            let k = *id.entry(r).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[k].push(x);
            *c = k as u32;
        }
        Congruence { class, blocks }
    }

    /// The partition of `0..n` into `blocks`, if they partition it.
    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Option<Self> {
        let mut root = vec![usize::MAX; n];
        for b in blocks {
            for &x in b {
                if x >= n || root[x] != usize::MAX {
                    return None;
                }
                root[x] = *b.iter().min()?;
            }
        }
        if root.contains(&usize::MAX) {
            return None;
        }
        Some(Self::from_roots(|x| root[x], n))
    }

    /// The identity relation on `n` elements.
    pub fn delta(n: usize) -> Self {
        Self::from_roots(|x| x, n)
    }

    /// The all relation on `n` elements.
    pub fn nabla(n: usize) -> Self {
        Self::from_roots(|_| 0, n)
    }

    /// Partition whose blocks are the components of the given cover edges.
    pub fn from_edges(l: &FiniteLattice, edges: impl IntoIterator<Item = PrimeInterval>) -> Self {
        let mut uf = UnionFind::new(l.len());
        for e in edges {
            uf.union(e.lower, e.upper);
        }
        Self::from_roots(|x| uf.find_const(x), l.len())
    }

    pub fn blocks(&self) -> &[Vec<Elem>] {
        &self.blocks
    }

    pub fn block_of(&self, x: Elem) -> &[Elem] {
        &self.blocks[self.class[x] as usize]
    }

    pub fn same(&self, x: Elem, y: Elem) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn is_delta(&self) -> bool {
        self.blocks.len() == self.class.len()
    }

    pub fn is_nabla(&self) -> bool {
        self.blocks.len() == 1
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| other.same(b[0], x)))
    }

    /// Checks the substitution property against every `z`.
    pub fn is_congruence_of(&self, l: &FiniteLattice) -> bool {
        self.blocks.iter().all(|b| {
            b.iter().all(|&x| {
                l.elements().all(|z| {
                    self.same(l.meet(b[0], z), l.meet(x, z)) && self.same(l.join(b[0], z), l.join(x, z))
                })
            })
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn find_const(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// The least congruence collapsing every given pair.
pub fn generated_congruence(l: &FiniteLattice, pairs: &[(Elem, Elem)]) -> Congruence {
    let mut uf = UnionFind::new(l.len());
    let mut queue: Vec<(Elem, Elem)> = Vec::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            queue.push((a, b));
        }
    }
    // Translates of queued generators; pairs already related are implied.
    while let Some((x, y)) = queue.pop() {
        for z in l.elements() {
            let (m1, m2) = (l.meet(x, z), l.meet(y, z));
            if uf.union(m1, m2) {
                queue.push((m1, m2));
            }
            let (j1, j2) = (l.join(x, z), l.join(y, z));
            if uf.union(j1, j2) {
                queue.push((j1, j2));
            }
        }
    }
    Congruence::from_roots(|x| uf.find_const(x), l.len())
}

/// `con(a, b)`.
pub fn principal_congruence(l: &FiniteLattice, a: Elem, b: Elem) -> Congruence {
    generated_congruence(l, &[(a, b)])
}

/// The prime intervals of `l` in sorted order.
pub fn prime_intervals(l: &FiniteLattice) -> Vec<PrimeInterval> {
    l.cover_pairs().into_iter().map(|(a, b)| PrimeInterval::new(a, b)).collect()
}

/// `p` is prime-perspective down to `q`.
pub fn perspective_down(l: &FiniteLattice, p: PrimeInterval, q: PrimeInterval) -> bool {
    p.upper == l.join(p.lower, q.upper) && l.leq(l.meet(p.lower, q.upper), q.lower)
}

/// `p` is prime-perspective up to `q`.
pub fn perspective_up(l: &FiniteLattice, p: PrimeInterval, q: PrimeInterval) -> bool {
    p.lower == l.meet(p.upper, q.lower) && l.leq(q.upper, l.join(p.upper, q.lower))
}

/// Prime-perspectivity successors of every prime interval, indexed as in
/// `edges`.
fn perspectivity_graph(l: &FiniteLattice, edges: &[PrimeInterval], pos: &HashMap<(Elem, Elem), usize>) -> Vec<Vec<usize>> {
    edges
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut out = vec![i];
            // Down: y2 ≤ y1 with y2 ≰ x1 forces x1 ∨ y2 = y1.
            for y2 in l.down_set(p.upper).difference(l.down_set(p.lower)).iter() {
                let m = l.meet(p.lower, y2);
                for &x2 in l.lower_covers(y2) {
                    if l.leq(m, x2) {
                        out.push(pos[&(x2, y2)]);
                    }
                }
            }
            // Up: x2 ≥ x1 with x2 ≱ y1 forces y1 ∧ x2 = x1.
            for x2 in l.up_set(p.lower).difference(l.up_set(p.upper)).iter() {
                let j = l.join(p.upper, x2);
                for &y2 in l.upper_covers(x2) {
                    if l.leq(y2, j) {
                        out.push(pos[&(x2, y2)]);
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

/// Strongly connected components in reverse topological order (every
/// successor component precedes its predecessors), with the component of
/// each vertex.
fn strong_components(graph: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = graph.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            if let Some(&w) = graph[v].get(*k) {
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(u, _)) = call.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("component root is on the stack");
                    on_stack[w] = false;
                    comp[w] = comps.len();
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                comps.push(members);
            }
        }
    }
    (comps, comp)
}

/// Prime intervals reachable from each component, as edge sets.
fn component_reach(graph: &[Vec<usize>], comps: &[Vec<usize>], comp: &[usize]) -> Vec<BitSet> {
    let m = graph.len();
    let mut reach: Vec<BitSet> = Vec::with_capacity(comps.len());
    for (c, members) in comps.iter().enumerate() {
        let mut s = BitSet::new(m);
        for &v in members {
            s.insert(v);
            for &w in &graph[v] {
                if comp[w] != c {
                    let r = reach[comp[w]].clone();
                    s.union_with(&r);
                }
            }
        }
        reach.push(s);
    }
    reach
}

/// For each prime interval (in [`prime_intervals`] order), the set of prime
/// intervals reachable from it by prime-perspectivities.
pub fn projectivity_reach(l: &FiniteLattice) -> Vec<BitSet> {
    let edges = prime_intervals(l);
    let pos: HashMap<(Elem, Elem), usize> = edges.iter().enumerate().map(|(i, e)| ((e.lower, e.upper), i)).collect();
    let graph = perspectivity_graph(l, &edges, &pos);
    let (comps, comp) = strong_components(&graph);
    let reach = component_reach(&graph, &comps, &comp);
    comp.iter().map(|&c| reach[c].clone()).collect()
}

/// `q` is reachable from `p` by a finite sequence of prime-perspectivities.
pub fn prime_projectivity(l: &FiniteLattice, p: PrimeInterval, q: PrimeInterval) -> bool {
    let edges = prime_intervals(l);
    let mut seen = HashSet::from([p]);
    let mut stack = vec![p];
    while let Some(r) = stack.pop() {
        if r == q {
            return true;
        }
        for &s in &edges {
            if !seen.contains(&s) && (perspective_down(l, r, s) || perspective_up(l, r, s)) {
                seen.insert(s);
                stack.push(s);
            }
        }
    }
    false
}

/// `Con(L)` described through its join-irreducibles `con(𝔭)`.
///
/// Congruences are identified with down-sets of join-irreducible indices;
/// element `i` of [`lattice`](Self::lattice) has members
/// [`members(i)`](Self::members).
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    edges: Vec<PrimeInterval>,
    edge_pos: HashMap<(Elem, Elem), usize>,
    edge_class: Vec<usize>,
    class_edges: Vec<BitSet>,
    class_down: Vec<BitSet>,
    poset: Poset,
    materialized: OnceLock<Materialized>,
}

#[derive(Clone, Debug)]
struct Materialized {
    lattice: FiniteLattice,
    members: Vec<BitSet>,
    member_index: HashMap<BitSet, Elem>,
}

impl CongruenceLattice {
    pub fn new(l: &FiniteLattice) -> Self {
        let edges = prime_intervals(l);
        let m = edges.len();
        let edge_pos: HashMap<(Elem, Elem), usize> =
            edges.iter().enumerate().map(|(i, e)| ((e.lower, e.upper), i)).collect();
        let graph = perspectivity_graph(l, &edges, &edge_pos);
        let (tarjan, tcomp) = strong_components(&graph);
        let treach = component_reach(&graph, &tarjan, &tcomp);
        let mut perm: Vec<usize> = (0..tarjan.len()).collect();
        perm.sort_by_key(|&c| tarjan[c][0]);
        let comps: Vec<&Vec<usize>> = perm.iter().map(|&c| &tarjan[c]).collect();
        let reach: Vec<&BitSet> = perm.iter().map(|&c| &treach[c]).collect();
        let mut edge_class = vec![usize::MAX; m];
        for (k, members) in comps.iter().enumerate() {
            for &v in members.iter() {
                edge_class[v] = k;
            }
        }
        let mut class_edges: Vec<BitSet> = Vec::with_capacity(comps.len());
        for (k, members) in comps.iter().enumerate() {
            let e = edges[members[0]];
            let con = principal_congruence(l, e.lower, e.upper);
            let mut collapsed = BitSet::new(m);
            for (j, f) in edges.iter().enumerate() {
                if con.same(f.lower, f.upper) {
                    collapsed.insert(j);
                }
            }
            assert_eq!(&collapsed, reach[k], "prime-projectivity disagrees with substitution closure");
            class_edges.push(collapsed);
        }
        let c = class_edges.len();
        let poset = Poset::from_fn(c, |a, b| class_edges[a].is_subset(&class_edges[b]))
            .with_names((0..c).map(|i| format!("c{i}")).collect());
        let class_down: Vec<BitSet> = (0..c)
            .map(|a| {
                let mut s = BitSet::new(c);
                for b in 0..c {
                    if poset.le(b, a) {
                        s.insert(b);
                    }
                }
                s
            })
            .collect();
        CongruenceLattice {
            edges,
            edge_pos,
            edge_class,
            class_edges,
            class_down,
            poset,
            materialized: OnceLock::new(),
        }
    }
}

impl CongruenceLattice {
    /// `Con(L)` as a lattice; elements are named by the maximal
    /// join-irreducible classes below them.
    /// Built on first use; its size is the number of down-sets of the
    /// join-irreducible poset.
    pub fn lattice(&self) -> &FiniteLattice {
        &self.materialized().lattice
    }

    fn materialized(&self) -> &Materialized {
        self.materialized.get_or_init(|| {
            let (lattice, members) = downset_lattice_with_sets(&self.poset);
            let member_index = members.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
            Materialized { lattice, members, member_index }
        })
    }

    /// `|Con L|`, saturating at `limit`, without building the lattice.
    pub fn size_capped(&self, limit: usize) -> usize {
        self.poset.count_downsets(limit)
    }

    /// Whether `Con L` is a chain.
    pub fn is_chain(&self) -> bool {
        let c = self.irreducible_count();
        (0..c).all(|a| (0..c).all(|b| self.poset.le(a, b) || self.poset.le(b, a)))
    }

    /// The join-irreducible congruences ordered by containment.
    pub fn irreducible_poset(&self) -> &Poset {
        &self.poset
    }

    /// Mask of all join-irreducibles, i.e. `∇`.
    pub fn nabla_mask(&self) -> BitSet {
        BitSet::full(self.irreducible_count())
    }

    pub fn prime_intervals(&self) -> &[PrimeInterval] {
        &self.edges
    }

    /// Number of join-irreducible congruences.
    pub fn irreducible_count(&self) -> usize {
        self.class_edges.len()
    }

    /// Join-irreducible index of `con(p)`.
    pub fn class_of(&self, p: PrimeInterval) -> usize {
        self.edge_class[self.edge_pos[&(p.lower, p.upper)]]
    }

    /// Edge indices collapsed by the `i`-th join-irreducible congruence.
    pub fn irreducible_edges(&self, i: usize) -> &BitSet {
        &self.class_edges[i]
    }

    /// Join-irreducible indices below (or equal to) the `i`-th one.
    pub fn irreducible_down(&self, i: usize) -> &BitSet {
        &self.class_down[i]
    }

    /// Join-irreducible indices below the congruence `x`.
    pub fn members(&self, x: Elem) -> &BitSet {
        &self.materialized().members[x]
    }

    /// The element of `Con(L)` whose join-irreducible set is `mask`.
    pub fn element_of(&self, mask: &BitSet) -> Option<Elem> {
        self.materialized().member_index.get(mask).copied()
    }

    /// The element of `Con(L)` equal to the `i`-th join-irreducible.
    pub fn irreducible_element(&self, i: usize) -> Elem {
        self.materialized().member_index[&self.class_down[i]]
    }

    /// The partition of `L` for the congruence `x`.
    pub fn congruence(&self, l: &FiniteLattice, x: Elem) -> Congruence {
        self.congruence_of_mask(l, &self.materialized().members[x])
    }

    /// The partition of `L` for the congruence with join-irreducible set
    /// `mask`.
    pub fn congruence_of_mask(&self, l: &FiniteLattice, mask: &BitSet) -> Congruence {
        Congruence::from_edges(
            l,
            self.edges.iter().enumerate().filter(|(j, _)| mask.contains(self.edge_class[*j])).map(|(_, &e)| e),
        )
    }

    /// The element of `Con(L)` for the partition `c`.
    pub fn element_of_congruence(&self, c: &Congruence) -> Option<Elem> {
        let mut mask = BitSet::new(self.irreducible_count());
        for (j, e) in self.edges.iter().enumerate() {
            if c.same(e.lower, e.upper) {
                mask.insert(self.edge_class[j]);
            }
        }
        self.element_of(&mask)
    }

    /// Join-irreducible set of `con(a, b)`, read off a maximal chain.
    pub fn con_pair_mask(&self, l: &FiniteLattice, a: Elem, b: Elem) -> BitSet {
        let (lo, mut hi) = (l.meet(a, b), l.join(a, b));
        let mut mask = BitSet::new(self.irreducible_count());
        while hi != lo {
            let c = *l
                .lower_covers(hi)
                .iter()
                .find(|&&c| l.leq(lo, c))
                .expect("a lower cover above lo exists");
            mask.union_with(&self.class_down[self.class_of(PrimeInterval::new(c, hi))]);
            hi = c;
        }
        mask
    }

    /// The element of `Con(L)` equal to `con(a, b)`.
    pub fn con_pair(&self, l: &FiniteLattice, a: Elem, b: Elem) -> Elem {
        self.materialized().member_index[&self.con_pair_mask(l, a, b)]
    }

    /// Join-irreducible sets of all principal congruences, sorted.
    pub fn principal_masks(&self, l: &FiniteLattice) -> Vec<BitSet> {
        let order = l.linear_extension();
        let c = self.irreducible_count();
        let mut seen: HashSet<BitSet> = HashSet::from([BitSet::new(c)]);
        let mut masks: Vec<Option<BitSet>> = vec![None; l.len()];
        for a in l.elements() {
            masks.iter_mut().for_each(|m| *m = None);
            masks[a] = Some(BitSet::new(c));
            for &b in &order {
                if b == a || !l.leq(a, b) {
                    continue;
                }
                let lc = *l.lower_covers(b).iter().find(|&&x| l.leq(a, x)).expect("chain from a");
                let mut m = masks[lc].clone().expect("lower cover processed first");
                m.union_with(&self.class_down[self.class_of(PrimeInterval::new(lc, b))]);
                seen.insert(m.clone());
                masks[b] = Some(m);
            }
        }
        let mut v: Vec<BitSet> = seen.into_iter().collect();
        v.sort();
        v
    }

    /// The set of principal congruences, as elements of `Con(L)`.
    pub fn principal_elements(&self, l: &FiniteLattice) -> BitSet {
        let mut out = BitSet::new(self.lattice().len());
        for m in self.principal_masks(l) {
            out.insert(self.materialized().member_index[&m]);
        }
        out
    }

    /// Whether every interior `x` has `con(0,x) = con(x,1) = ∇`.
    pub fn is_01_separating(&self, l: &FiniteLattice) -> bool {
        let nabla = self.nabla_mask();
        l.elements().filter(|&x| x != l.bottom() && x != l.top()).all(|x| {
            self.con_pair_mask(l, l.bottom(), x) == nabla && self.con_pair_mask(l, x, l.top()) == nabla
        })
    }
}

/// `Con(L)` with its dictionary of congruences.
pub fn congruence_lattice(l: &FiniteLattice) -> (FiniteLattice, Vec<Congruence>) {
    let cl = CongruenceLattice::new(l);
    let dict = cl.lattice().elements().map(|x| cl.congruence(l, x)).collect();
    (cl.lattice().clone(), dict)
}

/// All principal congruences in canonical form.
pub fn princ_set(l: &FiniteLattice) -> Vec<Congruence> {
    let cl = CongruenceLattice::new(l);
    let mut v: Vec<Congruence> = cl.principal_masks(l).iter().map(|m| cl.congruence_of_mask(l, m)).collect();
    v.sort();
    v
}

/// Every interior element generates `∇` with both bounds.
pub fn is_01_separating(l: &FiniteLattice) -> bool {
    CongruenceLattice::new(l).is_01_separating(l)
}

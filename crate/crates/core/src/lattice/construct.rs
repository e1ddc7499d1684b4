//! Products, sublattices, gluings and the down-set lattice of a poset.

use super::{Elem, FiniteLattice};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A finite poset on `0..n` given by up-sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    up: Vec<BitSet>,
    names: Vec<String>,
}

impl Poset {
    pub fn from_fn(n: usize, le: impl Fn(usize, usize) -> bool) -> Self {
        let up = (0..n)
            .map(|a| {
                let mut s = BitSet::new(n);
                for b in 0..n {
                    if a == b || le(a, b) {
                        s.insert(b);
                    }
                }
                s
            })
            .collect();
        Poset { up, names: (0..n).map(|i| format!("p{i}")).collect() }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.len());
        self.names = names;
        self
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Down-sets of the poset, each as a bitset over points.
    pub fn downsets(&self) -> Vec<BitSet> {
        let n = self.len();
        let mut out = Vec::new();
        let mut cur = BitSet::new(n);
        let order = self.linear_extension();
        self.extend_downsets(&order, 0, &mut cur, &mut out, usize::MAX);
        out
    }

    /// Number of down-sets, saturating at `limit`.
    pub fn count_downsets(&self, limit: usize) -> usize {
        let mut out = Vec::new();
        let mut cur = BitSet::new(self.len());
        let order = self.linear_extension();
        self.extend_downsets(&order, 0, &mut cur, &mut out, limit);
        out.len()
    }

    // Decide points in a fixed linear extension; a point may join only if
    // all its predecessors are already in.
    fn extend_downsets(
        &self,
        order: &[usize],
        i: usize,
        cur: &mut BitSet,
        out: &mut Vec<BitSet>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == order.len() {
            out.push(cur.clone());
            return;
        }
        let p = order[i];
        self.extend_downsets(order, i + 1, cur, out, limit);
        let preds_in = (0..self.len()).all(|q| q == p || !self.le(q, p) || cur.contains(q));
        if preds_in {
            cur.insert(p);
            self.extend_downsets(order, i + 1, cur, out, limit);
            cur.remove(p);
        }
    }

    fn linear_extension(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&a| (self.len() - self.up[a].count(), a));
        v
    }
}

/// The down-set lattice of `poset`; the empty down-set is named `0` and
/// every other one by its maximal points joined with `+`.
pub fn downset_lattice(poset: &Poset) -> FiniteLattice {
    downset_lattice_with_sets(poset).0
}

/// [`downset_lattice`] together with the down-set behind each element.
pub fn downset_lattice_with_sets(poset: &Poset) -> (FiniteLattice, Vec<BitSet>) {
    let mut sets = poset.downsets();
    sets.sort_by_key(|s| (s.count(), s.iter().collect::<Vec<_>>()));
    let names = sets
        .iter()
        .map(|s| {
            if s.is_empty() {
                return "0".to_string();
            }
            let maxes: Vec<&str> = s
                .iter()
                .filter(|&a| s.iter().all(|b| b == a || !poset.le(a, b)))
                .map(|a| poset.names()[a].as_str())
                .collect();
            maxes.join("+")
        })
        .collect();
    let k = sets.len();
    let up = (0..k)
        .map(|i| {
            let mut u = BitSet::new(k);
            for j in 0..k {
                if sets[i].is_subset(&sets[j]) {
                    u.insert(j);
                }
            }
            u
        })
        .collect();
    let l = FiniteLattice::from_up_sets(names, up).expect("down-sets form a distributive lattice");
    (l, sets)
}

/// The chain `0 < 1 < … < n-1`.
pub fn chain(n: usize) -> FiniteLattice {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let covers: Vec<(Elem, Elem)> = (1..n).map(|i| (i - 1, i)).collect();
    FiniteLattice::from_index_covers(names, &covers).expect("chains are lattices")
}

/// Result of a Hall–Dilworth gluing: the glued lattice and where the
/// elements of both operands ended up.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub lattice: FiniteLattice,
    pub map1: Vec<Elem>,
    pub map2: Vec<Elem>,
}

impl FiniteLattice {
    pub fn direct_product(&self, other: &FiniteLattice) -> FiniteLattice {
        let (n, m) = (self.len(), other.len());
        let names = (0..n * m)
            .map(|k| format!("({},{})", self.name(k / m), other.name(k % m)))
            .collect();
        let up = (0..n * m)
            .map(|k| {
                let mut s = BitSet::new(n * m);
                for a in self.up_set(k / m).iter() {
                    for b in other.up_set(k % m).iter() {
                        s.insert(a * m + b);
                    }
                }
                s
            })
            .collect();
        FiniteLattice::from_up_sets(names, up).expect("products of lattices are lattices")
    }

    /// The principal ideal `↓a` as a lattice.
    pub fn ideal(&self, a: Elem) -> FiniteLattice {
        self.induced(self.down_set(a)).expect("principal ideals are sublattices").0
    }

    /// The principal filter `↑a` as a lattice.
    pub fn filter(&self, a: Elem) -> FiniteLattice {
        self.induced(self.up_set(a)).expect("principal filters are sublattices").0
    }

    /// Puts `upper` atop `self`, identifying `self`'s top with `upper`'s bottom.
    pub fn glued_sum(&self, upper: &FiniteLattice) -> Result<FiniteLattice> {
        if !self.is_chain() || !upper.is_chain() {
            return Err(Error::NotAChain);
        }
        let taken: std::collections::HashSet<&str> = self.names().iter().map(String::as_str).collect();
        // Clashing names of `upper` get primes appended.
        let upper = upper.renamed(|_, n| {
            let mut n = n.to_string();
            while taken.contains(n.as_str()) {
                n.push('\'');
            }
            n
        });
        let f = BitSet::from_iter([self.top()]).resized(self.len());
        let i = BitSet::from_iter([upper.bottom()]).resized(upper.len());
        Ok(self.hall_dilworth_glue(&f, &upper, &i, &[(self.top(), upper.bottom())])?.lattice)
    }

    /// Glues `self` (below) and `other` (above) by identifying the filter
    /// `f1` of `self` with the ideal `i2` of `other` through `matching`.
    /// Names of `other`'s non-overlap elements must not clash with `self`'s.
    pub fn hall_dilworth_glue(
        &self,
        f1: &BitSet,
        other: &FiniteLattice,
        i2: &BitSet,
        matching: &[(Elem, Elem)],
    ) -> Result<Gluing> {
        if !self.is_filter(f1) {
            return Err(Error::NotAFilter);
        }
        if !other.is_ideal(i2) {
            return Err(Error::NotAnIdeal);
        }
        let mut fwd = vec![usize::MAX; self.len()];
        let mut back = vec![usize::MAX; other.len()];
        for &(a, b) in matching {
            if !f1.contains(a) || !i2.contains(b) || fwd[a] != usize::MAX || back[b] != usize::MAX {
                return Err(Error::NotIso("matching is not a bijection F → I".into()));
            }
            fwd[a] = b;
            back[b] = a;
        }
        if matching.len() != f1.count() || matching.len() != i2.count() {
            return Err(Error::NotIso("matching does not cover the overlap".into()));
        }
        for &(a, b) in matching {
            for &(c, d) in matching {
                if self.leq(a, c) != other.leq(b, d) {
                    return Err(Error::NotIso(format!(
                        "order between `{}` and `{}` not preserved",
                        self.name(a),
                        self.name(c)
                    )));
                }
            }
        }
        let n1 = self.len();
        let mut map2 = vec![0; other.len()];
        let mut names: Vec<String> = self.names().to_vec();
        for y in other.elements() {
            if back[y] != usize::MAX {
                map2[y] = back[y];
            } else {
                map2[y] = names.len();
                names.push(other.name(y).to_string());
            }
        }
        let total = names.len();
        let mut up = vec![BitSet::new(total); total];
        for (x, slot) in up.iter_mut().enumerate().take(n1) {
            let mut s = BitSet::new(total);
            for y in self.up_set(x).iter() {
                s.insert(y);
            }
            // x ≤ y for y ∈ other iff x ≤ z ≤ y for some overlap z
            for z in self.up_set(x).intersection(f1).iter() {
                for y in other.up_set(fwd[z]).iter() {
                    s.insert(map2[y]);
                }
            }
            *slot = s;
        }
        for y in other.elements().filter(|&y| back[y] == usize::MAX) {
            let mut s = BitSet::new(total);
            for w in other.up_set(y).iter() {
                s.insert(map2[w]);
            }
            up[map2[y]] = s;
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let lattice = FiniteLattice::from_up_sets(names, up)?;
        Ok(Gluing { lattice, map1: (0..n1).collect(), map2 })
    }
}

impl FiniteLattice {
    /// Replaces the prime interval `[u, v]` by a copy of `m`, identifying
    /// `0_m` with `u` and `1_m` with `v`. Old elements keep their indices;
    /// returns the new lattice and the image of every element of `m`.
    pub fn replace_edge(&self, u: Elem, v: Elem, m: &FiniteLattice) -> Result<(FiniteLattice, Vec<Elem>)> {
        if !self.covers(u, v) {
            return Err(Error::NotAnInterval);
        }
        let n = self.len();
        let inner: Vec<Elem> = m.elements().filter(|&x| x != m.bottom() && x != m.top()).collect();
        let total = n + inner.len();
        let mut image = vec![0; m.len()];
        image[m.bottom()] = u;
        image[m.top()] = v;
        for (i, &x) in inner.iter().enumerate() {
            image[x] = n + i;
        }
        let mut names: Vec<String> = self.names().to_vec();
        for &x in &inner {
            names.push(format!("{}[{}]{}", self.name(u), m.name(x), self.name(v)));
        }
        let mut up: Vec<BitSet> = self.elements().map(|x| self.up_set(x).resized(total)).collect();
        for x in self.down_set(u).iter() {
            for &y in &inner {
                up[x].insert(image[y]);
            }
        }
        for &x in &inner {
            let mut s = BitSet::new(total);
            for y in m.up_set(x).iter() {
                s.insert(image[y]);
            }
            for y in self.up_set(v).iter() {
                s.insert(y);
            }
            up.push(s);
        }
        Ok((FiniteLattice::from_up_sets(names, up)?, image))
    }
}

impl BitSet {
    /// Copy with a different capacity; elements beyond it are dropped.
    pub fn resized(&self, len: usize) -> BitSet {
        let mut s = BitSet::new(len);
        for i in self.iter().filter(|&i| i < len) {
            s.insert(i);
        }
        s
    }
}
